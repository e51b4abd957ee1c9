"""Unit tests for the small-scope model search."""

import pytest

from pebble.props import always_new, next_new_agreement, same
from pebble.reference import holds
from pebble.satsearch import (
    SearchScope,
    _restricted_growth,
    candidate_models,
    check_validity_small_scope,
    find_model,
    search,
)
from pebble.syntax import Abstract, And, Atom, Eq, Not, Term
from pebble.utils.error_handler import ScopeTooLargeError, ValidationError

pytestmark = pytest.mark.unit

SMALL = SearchScope(max_domain_size=2, max_prefix=1, max_period=1, workers=1)
CONTRADICTION = And(same("a", "b"), Not(same("a", "b")))


def test_scope_shapes_and_bounds():
    """Test the shape blocks of a scope and its bound checks."""
    assert SMALL.shapes() == [(1, 0, 1), (1, 1, 1), (2, 0, 1), (2, 1, 1)]
    assert SearchScope(max_domain_size=1, max_prefix=0, max_period=2).shapes() == [
        (1, 0, 1),
        (1, 0, 2),
    ]
    with pytest.raises(ValidationError):
        SearchScope(max_domain_size=0)
    with pytest.raises(ValidationError):
        SearchScope(max_period=0)


@pytest.mark.parametrize(
    "length, size, expected",
    [(4, 2, 7), (3, 3, 1), (3, 1, 1), (2, 3, 0), (0, 1, 1), (0, 2, 0)],
)
def test_restricted_growth_counts(length, size, expected):
    """Test that restricted growth strings are counted by Stirling numbers."""
    strings = list(_restricted_growth(length, size))
    assert len(strings) == expected
    assert len(set(strings)) == len(strings)
    for s in strings:
        assert set(s) == set(range(size)) or (length == 0 and size == 1)


def test_candidate_models_enumerate_predicates_over_visited_elements():
    """Test the candidates of one block with and without pruning."""
    models = list(candidate_models(["a"], {"P": 1}, (1, 0, 1)))
    assert len(models) == 2
    assert models[0].domain == ("u0",)
    assert [M.predicates["P"][0] for M in models] == [frozenset(), {("u0",)}]
    # Two elements but one stored position: a single constant cannot visit both.
    assert list(candidate_models(["a"], {}, (2, 0, 1))) == []
    assert len(list(candidate_models(["a"], {}, (2, 0, 1), pruned=False))) == 2


def test_same_is_found_on_a_single_element():
    """Test that Same(a, b) is satisfied by the first candidate."""
    result = search(same("a", "b"), SMALL)
    assert result.found
    assert result.candidates == 1
    assert result.model.domain == ("u0",)
    assert holds(result.model, same("a", "b"), {}, 0)


def test_contradiction_has_no_model_in_scope():
    """Test an exhausted search.

    This test verifies that:
    1. Nothing is found for an unsatisfiable sentence
    2. Every block is enumerated and counted
    3. No conjunct is blamed when both conjuncts use every symbol
    """
    result = search(CONTRADICTION, SMALL)
    assert not result.found
    assert result.candidates == 10
    assert result.refuted_by is None


def test_always_new_has_no_lasso_model():
    """Test that AlwaysNew has no model in a small scope."""
    scope = SearchScope(max_domain_size=2, max_prefix=1, max_period=2, workers=1)
    assert find_model(always_new("d"), scope) is None


def test_small_scope_validity():
    """Test validity checking and its counterexample."""
    assert check_validity_small_scope(same("a", "a"), SMALL) is None
    counterexample = check_validity_small_scope(same("a", "b"), SMALL)
    assert counterexample is not None
    assert len(counterexample.domain) == 2
    assert not holds(counterexample, same("a", "b"), {}, 0)


@pytest.mark.parametrize(
    "f",
    [
        same("a", "b"),
        Not(same("a", "b")),
        CONTRADICTION,
        And(always_new("d"), same("a", "d")),
    ],
)
def test_pruning_does_not_change_the_answer(f):
    """Test that pruning only removes candidates, never answers."""
    pruned = search(f, SMALL)
    unpruned = search(
        f, SearchScope(max_domain_size=2, max_prefix=1, max_period=1, pruned=False)
    )
    assert pruned.found == unpruned.found
    assert pruned.candidates <= unpruned.candidates


def test_ceiling_is_enforced():
    """Test that the enumeration stops at the ceiling."""
    scope = SearchScope(
        max_domain_size=3, max_prefix=2, max_period=2, ceiling=5, workers=1
    )
    with pytest.raises(ScopeTooLargeError):
        search(CONTRADICTION, scope)


def test_input_checks():
    """Test that non-sentences and formulas over the predicate limits are rejected."""
    loop_on_a = Abstract("x", Atom("E", ("x", "x")), Term.const("a"))
    with pytest.raises(ValidationError, match="not a sentence"):
        search(Eq("x", "y"), SMALL)
    with pytest.raises(ValidationError, match="predicate limits"):
        search(loop_on_a, SearchScope(max_predicates=0))
    with pytest.raises(ValidationError, match="predicate limits"):
        search(loop_on_a, SearchScope(max_arity=1))


def test_parallel_search_returns_the_same_model():
    """Test that the process pool finds the serial model."""
    f = Not(same("a", "b"))
    serial = search(f, SMALL)
    parallel = search(
        f, SearchScope(max_domain_size=2, max_prefix=1, max_period=1, workers=2)
    )
    assert parallel.model == serial.model
    assert parallel.candidates == serial.candidates


def test_small_conjunct_refutes_the_conjunction():
    """Test that an unsatisfiable conjunct is named."""
    f = And(same("a", "b"), always_new("d"))
    result = search(
        f, SearchScope(max_domain_size=2, max_prefix=1, max_period=2, workers=1)
    )
    assert not result.found
    assert result.refuted_by == always_new("d")


@pytest.mark.parametrize("pruned", [True, False])
def test_next_new_variants_agree_in_scope(pruned):
    """Test that both NextNew variants agree on every small lasso."""
    scope = SearchScope(
        max_domain_size=2, max_prefix=1, max_period=2, pruned=pruned, workers=1
    )
    assert check_validity_small_scope(next_new_agreement("a", "d", "c"), scope) is None

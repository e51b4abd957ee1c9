"""Unit tests for pebble equivalence and the constructions that preserve it."""

import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pebble.corpus import sentence_corpus
from pebble.equiv import (
    EquivScope,
    extend_with_flicker,
    locality_discrepancies,
    normalize_period,
    pebble_equivalent,
    pebble_variant,
)
from pebble.evaluate import eval_sentence, lasso_vector
from pebble.model import loop_position, parse_model
from pebble.props import rigid_on_visited
from pebble.utils.error_handler import (
    AlphabetMismatchError,
    FlickerError,
    ModelError,
    ValidationError,
)
from tests.strategies import formulas, lasso_models

pytestmark = pytest.mark.unit

LEFT = parse_model(
    "domain: u, v, w\n"
    "const a: u, v [loop 0 2]\n"
    "pred E/2: {(u, v)}; {(u, v)} [loop 0 2]\n"
)
RIGHT = parse_model(
    "domain: u, v, w\nconst a: u, v [loop 0 2]\n"
    "pred E/2: {(u, v), (w, w)}; {(u, v)} [loop 0 2]\n"
)


def test_models_differing_off_the_visited_elements_are_equivalent():
    """Test exact equivalence of two lassos.

    This test verifies that:
    1. Tuples mentioning unvisited elements are ignored
    2. Two lassos are compared exactly, not up to a horizon
    3. Moments checked cover the longer prefix and the common period
    """
    result = pebble_equivalent(LEFT, RIGHT, EquivScope(horizon=5))
    assert result
    assert not result.bounded
    assert result.moments == 2
    assert result.witness is None


def test_witness_on_a_visited_tuple():
    """Test that a differing tuple over visited elements is the witness."""
    other = parse_model(
        "domain: u, v, w\nconst a: u, v [loop 0 2]\n"
        "pred E/2: {(u, v)}; {(v, v)} [loop 0 2]\n"
    )
    result = pebble_equivalent(LEFT, other, EquivScope(horizon=5))
    assert not result.equivalent
    assert result.witness.moment == 1
    assert result.witness.symbol == "E"
    assert result.witness.tuple == ("u", "v")


def test_witness_on_a_constant():
    """Test that a differing designation is the witness."""
    other = parse_model(
        "domain: u, v, w\n"
        "const a: u, w [loop 0 2]\n"
        "pred E/2: {(u, v)}; {(u, v)} [loop 0 2]\n"
    )
    result = pebble_equivalent(LEFT, other, EquivScope(horizon=5))
    assert not result
    assert (result.witness.moment, result.witness.symbol) == (1, "a")
    assert result.witness.tuple is None


def test_prefix_models_are_compared_up_to_the_horizon():
    """Test bounded comparison of two finite prefixes."""
    M1 = parse_model("domain: u\nconst a: u, u, u\n")
    M2 = parse_model("domain: u, v\nconst a: u, u, u\n")
    result = pebble_equivalent(M1, M2, EquivScope(horizon=3))
    assert result and result.bounded and result.moments == 3


def test_alphabet_mismatch():
    """Test that models over different constants are not comparable."""
    other = parse_model("domain: u, v\nconst b: u, v [loop 0 2]\n")
    with pytest.raises(AlphabetMismatchError):
        pebble_equivalent(LEFT, other, EquivScope(horizon=2))


def test_scope_validates_horizon():
    """Test that the horizon must be positive."""
    with pytest.raises(ValidationError):
        EquivScope(horizon=0)


def test_normalize_period_denotes_the_same_trace():
    """Test that doubling the period keeps every designation."""
    M = parse_model(
        "domain: u, v, w\n"
        "const a: u, v, w [loop 1 2]\n"
    )
    doubled = normalize_period(M)
    assert doubled.lasso.period == 4
    for n in range(12):
        assert (
            doubled.constants["a"][loop_position(doubled, n)]
            == M.constants["a"][loop_position(M, n)]
        )
    with pytest.raises(ModelError):
        normalize_period(parse_model("domain: u\nconst a: u\n"))


def test_flicker_extension():
    """Test the flicker construction.

    This test verifies that:
    1. Two fresh elements are added and E holds on them at even moments only
    2. The extension is pebble equivalent to the original
    3. A sentence true before stays true, yet E is no longer rigid on all pairs
    4. An odd period is refused until the period is doubled
    """
    M = parse_model(
        "domain: u, v\n"
        "const a: u, v [loop 0 2]\n"
        "pred E/2: {(u, v)}; {(u, v)} [loop 0 2]\n"
    )
    flickering = extend_with_flicker(M, "E")
    assert flickering.domain == ("u", "v", "fresh0", "fresh1")
    assert ("fresh0", "fresh1") in flickering.predicates["E"][0]
    assert ("fresh0", "fresh1") not in flickering.predicates["E"][1]
    assert pebble_equivalent(M, flickering, EquivScope(horizon=4))

    f = rigid_on_visited("E", "a", "a")
    assert eval_sentence(M, f) == eval_sentence(flickering, f)

    odd = parse_model("domain: u\nconst a: u [loop 0 1]\n")
    with pytest.raises(FlickerError):
        extend_with_flicker(odd, "E")
    extended = extend_with_flicker(normalize_period(odd), "E")
    assert extended.arities["E"] == 2
    assert extended.predicates["E"][0] == {
        ("fresh0", "fresh0"),
        ("fresh0", "fresh1"),
        ("fresh1", "fresh0"),
        ("fresh1", "fresh1"),
    }


def test_flicker_needs_a_binary_predicate():
    """Test that only binary predicates can flicker."""
    M = parse_model(
        "domain: u\n"
        "const a: u, u [loop 0 2]\npred P: {(u)}; {} [loop 0 2]\n"
    )
    with pytest.raises(ValidationError, match="binary"):
        extend_with_flicker(M, "P")


def test_locality_harness_on_the_sentence_corpus():
    """Test that no corpus sentence separates a model from its variant."""
    M = parse_model(
        "domain: u, v, w\n"
        "const a: u, v, w [loop 1 2]\n"
        "const b: v, v, u [loop 1 2]\n"
        "const c: w, u, u [loop 1 2]\n"
        "const d: u, w, v [loop 1 2]\n"
        "pred E/2: {(u, v)}; {(v, u)}; {} [loop 1 2]\n"
    )
    variant = pebble_variant(M, random.Random(7), extra=2)
    assert len(variant.domain) == 5
    assert pebble_equivalent(M, variant, EquivScope(horizon=6))
    assert locality_discrepancies(M, variant, sentence_corpus()) == []


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(lasso_models(), formulas(depth=3), st.integers(0, 2**16))
def test_sentences_cannot_tell_pebble_variants_apart(M, f, seed):
    """Test random sentences on random models and their pebble variants."""
    variant = pebble_variant(M, random.Random(seed))
    assert lasso_vector(M, f, {}) == lasso_vector(variant, f, {})

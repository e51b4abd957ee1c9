"""Unit tests for lasso and bounded evaluation.

The property tests compare the vector evaluator with the literal evaluator in
``pebble.reference`` and check that definite bounded verdicts survive every
loop completion of the prefix.
"""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pebble.evaluate import (
    Verdict,
    bounded_vector,
    eval_bounded,
    eval_lasso,
    eval_sentence,
    kleene_and,
    kleene_implies,
    kleene_not,
    kleene_or,
    lasso_vector,
)
from pebble.model import parse_model
from pebble.props import always_new, same, same_in_past
from pebble.reference import holds, unrolled_length
from pebble.syntax import (
    Always,
    Eq,
    Eventually,
    Historically,
    Next,
    Not,
    Yesterday,
)
from pebble.utils.error_handler import (
    EvaluationError,
    HorizonError,
    ModelError,
    ValidationError,
)
from tests.strategies import completions, formulas, lasso_models, prefix_models

pytestmark = pytest.mark.unit

T, F, U = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN

SAME_LASSO = parse_model(
    "domain: u, v\nconst a: u, v [loop 1 1]\nconst b: u, u [loop 1 1]\n"
)
SAME_PREFIX = parse_model("domain: u, v\nconst a: u, v\nconst b: u, u\n")


def test_kleene_tables():
    """Test the strong Kleene connectives.

    This test verifies that:
    1. A definite False absorbs conjunction, a definite True absorbs disjunction
    2. Unknown otherwise propagates
    3. Implication is negation then disjunction
    """
    assert kleene_not(U) is U
    assert kleene_not(T) is F
    assert kleene_and(F, U) is F
    assert kleene_and(T, U) is U
    assert kleene_or(T, U) is T
    assert kleene_or(F, U) is U
    assert kleene_implies(F, U) is T
    assert kleene_implies(U, T) is T
    assert kleene_implies(U, F) is U


def test_verdict_helpers():
    """Test verdict construction, definiteness and text."""
    assert Verdict.of(True) is T
    assert Verdict.of(False) is F
    assert T.definite and F.definite and not U.definite
    assert str(U) == "Unknown"
    assert str(T) == "True"


def test_same_on_lasso():
    """Test Same and its temporal closures on a lasso where a leaves b."""
    assert eval_lasso(SAME_LASSO, same("a", "b"), {}, 0) is T
    assert eval_lasso(SAME_LASSO, same("a", "b"), {}, 1) is F
    assert eval_lasso(SAME_LASSO, same("a", "b"), {}, 5) is F
    assert eval_lasso(SAME_LASSO, Eventually(same("a", "b")), {}, 0) is T
    assert eval_lasso(SAME_LASSO, Eventually(same("a", "b")), {}, 1) is F
    assert eval_lasso(SAME_LASSO, Always(Not(same("a", "b"))), {}, 3) is T


def test_yesterday_is_false_at_zero():
    """Test that Yesterday has no previous moment at 0."""
    assert eval_lasso(SAME_LASSO, Yesterday(same("a", "b")), {}, 0) is F
    assert eval_lasso(SAME_LASSO, Yesterday(same("a", "b")), {}, 1) is T
    assert eval_lasso(SAME_LASSO, Historically(same("a", "b")), {}, 1) is F


def test_next_wraps_around_the_loop():
    """Test that Next at the last stored position reads the loop start."""
    M = parse_model(
        "domain: u, v\n"
        "const a: u, v [loop 0 2]\nconst b: u, u [loop 0 2]\n"
    )
    assert lasso_vector(M, same("a", "b"), {}) == [T, F]
    assert eval_lasso(M, Next(same("a", "b")), {}, 1) is T
    assert eval_lasso(M, Next(same("a", "b")), {}, 4) is F


def test_past_is_settled_by_unrolling():
    """Test a past operator whose value changes after the loop is entered.

    This test verifies that:
    1. 'a' is not where 'd' has been at moment 0
    2. From moment 1 on it is, also far into the loop
    """
    M = parse_model(
        "domain: u, v\n"
        "const a: v, u [loop 1 1]\nconst d: u, v [loop 1 1]\n"
    )
    f = same_in_past("a", "d")
    assert eval_lasso(M, f, {}, 0) is F
    assert eval_lasso(M, f, {}, 1) is T
    assert eval_lasso(M, f, {}, 7) is T


def test_always_new_is_false_on_lassos():
    """Test that a lasso cannot give d a new element forever."""
    M = parse_model(
        "domain: u, v\n"
        "const d: u, v [loop 0 2]\n"
    )
    assert eval_lasso(M, always_new("d"), {}, 0) is F


def test_bounded_unknowns_at_the_end_of_the_prefix():
    """Test the three-valued verdicts at the last observed moment.

    This test verifies that:
    1. Next at the last moment is Unknown
    2. Eventually is True when witnessed, otherwise Unknown at the end
    3. Always is False when refuted, otherwise Unknown at the end
    """
    f = same("a", "b")
    assert eval_bounded(SAME_PREFIX, Next(f), {}, 1) is U
    assert eval_bounded(SAME_PREFIX, Next(f), {}, 0) is F
    assert bounded_vector(SAME_PREFIX, Eventually(f), {}) == [T, U]
    assert bounded_vector(SAME_PREFIX, Always(f), {}) == [F, F]
    assert bounded_vector(SAME_PREFIX, Always(Not(f)), {}) == [F, U]


def test_mode_and_horizon_errors():
    """Test the errors for the wrong model kind and moments out of range."""
    with pytest.raises(HorizonError):
        eval_bounded(SAME_PREFIX, same("a", "b"), {}, 2)
    with pytest.raises(ModelError):
        eval_lasso(SAME_PREFIX, same("a", "b"), {}, 0)
    with pytest.raises(ModelError):
        bounded_vector(SAME_LASSO, same("a", "b"), {})
    with pytest.raises(HorizonError):
        eval_lasso(SAME_LASSO, same("a", "b"), {}, -1)


def test_assignment_errors():
    """Test unbound variables and assignments outside the domain."""
    with pytest.raises(EvaluationError, match="unbound"):
        eval_lasso(SAME_LASSO, Eq("x", "x"), {}, 0)
    with pytest.raises(EvaluationError, match="outside the domain"):
        eval_lasso(SAME_LASSO, Eq("x", "x"), {"x": "w"}, 0)
    assert eval_lasso(SAME_LASSO, Eq("x", "x"), {"x": "u"}, 0) is T


def test_eval_sentence_picks_the_mode():
    """Test that sentences are evaluated in the mode of their model."""
    assert eval_sentence(SAME_LASSO, Next(same("a", "b"))) is F
    assert eval_sentence(SAME_PREFIX, Next(same("a", "b")), 1) is U
    with pytest.raises(ValidationError, match="not a sentence"):
        eval_sentence(SAME_LASSO, Eq("x", "y"))


def test_reference_evaluator_and_window():
    """Test the literal evaluator and the window it unrolls."""
    assert unrolled_length(SAME_LASSO, same("a", "b")) == 6
    assert holds(SAME_LASSO, same("a", "b"), {}, 0)
    assert not holds(SAME_LASSO, Eventually(same("a", "b")), {}, 1)
    with pytest.raises(ModelError):
        unrolled_length(SAME_PREFIX, same("a", "b"))


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(lasso_models(), formulas(depth=3), st.integers(0, 6))
def test_lasso_evaluation_matches_reference(M, f, n):
    """Test the vector evaluator against the literal one on random lassos."""
    assert eval_lasso(M, f, {}, n) is Verdict.of(holds(M, f, {}, n))


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.data(), prefix_models(), formulas(depth=3))
def test_definite_bounded_verdicts_hold_on_every_completion(data, prefix, f):
    """Test that definite bounded verdicts hold on a random completion."""
    bounded = bounded_vector(prefix, f, {})
    completion = data.draw(completions(prefix))
    for n, verdict in enumerate(bounded):
        if verdict.definite:
            assert eval_lasso(completion, f, {}, n) is verdict

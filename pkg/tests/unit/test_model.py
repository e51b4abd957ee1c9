"""Unit tests for trace models and the model file format."""

import pytest
from hypothesis import given, settings

from pebble.model import (
    Lasso,
    TraceModel,
    check_model,
    constant_at,
    format_model,
    loop_position,
    parse_model,
    predicate_at,
    validate_model,
    visited,
)
from pebble.utils.error_handler import FormatError, HorizonError, ModelError
from tests.strategies import lasso_models, prefix_models

pytestmark = pytest.mark.unit

SAME_MODEL = """
# a moves between u and v, b stays on u
domain: u, v
const a: u, v [loop 1 1]
const b: u, u [loop 1 1]
"""


def test_parse_model_constants_and_loop():
    """Test parsing of the model file format.

    This test verifies that:
    1. Comments and blank lines are skipped
    2. Each constant gets one designation per stored position
    3. The loop marker becomes the model's lasso
    """
    M = parse_model(SAME_MODEL)
    assert M.domain == ("u", "v")
    assert M.constants == {"a": ("u", "v"), "b": ("u", "u")}
    assert M.lasso == Lasso(1, 1)
    assert M.length == 2
    assert M.is_lasso


def test_parse_model_predicates_with_and_without_arity():
    """Test predicate lines with a declared arity and with an inferred one."""
    M = parse_model(
        "domain: u, v\n"
        "const a: u, v\n"
        "pred E/2: {(u, v)}; {}\n"
        "pred P: {(u)}; {(v)}\n"
    )
    assert M.predicates["E"] == (frozenset({("u", "v")}), frozenset())
    assert M.arities == {"E": 2, "P": 1}
    assert not M.is_lasso


@pytest.mark.parametrize(
    "text, message",
    [
        ("const a: u\n", "no domain line"),
        ("domain: u\ndomain: v\n", "second domain line"),
        (
            "domain: u, v\nconst a: u, v [loop 0 2]\nconst b: u, v [loop 1 1]\n",
            "conflicting loop markers",
        ),
        ("domain: u\npred E: {}\n", "cannot infer the arity"),
        ("domain: u\npred E/2: (u, u)\n", "tuple set in braces"),
        ("domain: u\nconst a: u [loop 1]\n", "malformed loop marker"),
        ("domain: u\nwhat is this\n", "cannot parse"),
    ],
)
def test_parse_model_format_errors(text, message):
    """Test the format errors of model files."""
    with pytest.raises(FormatError, match=message):
        parse_model(text)


def test_parse_model_rejects_invariant_violations():
    """Test that parsed models are checked against the model invariants."""
    with pytest.raises(ModelError, match="outside the domain"):
        parse_model("domain: u\nconst a: u, w\n")
    with pytest.raises(ModelError, match="does not cover"):
        parse_model("domain: u\nconst a: u, u [loop 1 2]\n")


def test_loop_position_and_designations():
    """Test moment to stored position mapping on a lasso.

    This test verifies that:
    1. Prefix moments map to themselves
    2. Later moments wrap around the loop
    3. Constants and predicates are read through the same mapping
    """
    M = TraceModel(
        domain=("u", "v", "w"),
        constants={"a": ("u", "v", "w")},
        predicates={"P": (frozenset(), frozenset({("v",)}), frozenset({("w",)}))},
        arities={"P": 1},
        lasso=Lasso(1, 2),
    )
    assert [loop_position(M, n) for n in range(6)] == [0, 1, 2, 1, 2, 1]
    assert constant_at(M, "a", 4) == "w"
    assert predicate_at(M, "P", 3) == {("v",)}


def test_prefix_model_horizon():
    """Test that a finite prefix has no moments past its end."""
    M = parse_model("domain: u\nconst a: u, u\n")
    assert loop_position(M, 1) == 1
    with pytest.raises(HorizonError):
        loop_position(M, 2)
    with pytest.raises(HorizonError):
        loop_position(M, -1)


def test_visited_grows_until_every_position_is_seen():
    """Test the visited set of a constant over time."""
    M = parse_model("domain: u, v, w\nconst a: u, v, w [loop 0 3]\n")
    assert visited(M, "a", 0) == {"u"}
    assert visited(M, "a", 1) == {"u", "v"}
    assert visited(M, "a", 10) == {"u", "v", "w"}
    with pytest.raises(ModelError, match="unknown constant"):
        visited(M, "b", 0)


def test_validate_model_lists_every_violation():
    """Test that validation reports every violated invariant at once."""
    M = TraceModel(
        domain=("u", "u"),
        constants={"a": ("u",), "b": ("u", "x")},
        predicates={"E": (frozenset({("u",)}), frozenset())},
        arities={"E": 2},
    )
    messages = validate_model(M)
    assert "domain lists an element twice" in messages
    assert any("unequal lengths" in m for m in messages)
    assert any("does not have arity 2" in m for m in messages)
    assert any("constant 'b'" in m for m in messages)
    with pytest.raises(ModelError):
        check_model(M)


def test_format_model_is_canonical():
    """Test that constants, predicates and tuples are written in sorted order."""
    M = parse_model(
        "domain: u, v\npred E/2: {(v, u), (u, v)} [loop 0 1]\nconst a: v [loop 0 1]\n"
    )
    assert format_model(M) == (
        "domain: u, v\n"
        "const a: v [loop 0 1]\n"
        "pred E/2: {(u, v), (v, u)} [loop 0 1]\n"
    )


@settings(max_examples=100)
@given(lasso_models())
def test_format_then_parse_lasso(M):
    """Test that written lasso models parse back unchanged."""
    assert parse_model(format_model(M)) == M


@settings(max_examples=100)
@given(prefix_models())
def test_format_then_parse_prefix(M):
    """Test that written prefix models parse back unchanged."""
    assert parse_model(format_model(M)) == M

"""Builders for the named pebble properties and the message-forwarding protocol.

Each builder returns the exact formula shape of the property's definition, with
``y != x`` written ``~(y = x)`` and ``<->`` expanded into two implications. All
outputs are sentences.
"""

from __future__ import annotations

from .syntax import (
    Abstract,
    Alphabet,
    Always,
    And,
    Atom,
    Eq,
    Eventually,
    Formula,
    Historically,
    Implies,
    Next,
    Not,
    Once,
    Term,
    Yesterday,
)
from .utils.error_handler import ValidationError
from .utils.validation import validate_declared, validate_distinct


def _abstract(binder: str, body: Formula, constant: str) -> Abstract:
    return Abstract(binder, body, Term.const(constant))


def _declared(alphabet: Alphabet | None, *constants: str) -> None:
    validate_declared(
        constants, alphabet.constants if alphabet is not None else None, "constant"
    )


def iff(left: Formula, right: Formula) -> Formula:
    """``(left -> right) & (right -> left)``."""
    return And(Implies(left, right), Implies(right, left))


def same(a: str, b: str, alphabet: Alphabet | None = None) -> Formula:
    """``a`` and ``b`` designate the same element now."""
    _declared(alphabet, a, b)
    return _abstract("x", _abstract("y", Eq("x", "y"), a), b)


def always_new(d: str, alphabet: Alphabet | None = None) -> Formula:
    """``d`` designates a different element at every moment."""
    _declared(alphabet, d)
    return Always(
        _abstract("x", Next(Always(_abstract("y", Not(Eq("y", "x")), d))), d)
    )


def same_in_past(a: str, d: str, alphabet: Alphabet | None = None) -> Formula:
    """``a`` designates now an element that ``d`` designated at some past moment."""
    _declared(alphabet, a, d)
    return _abstract("x", Once(_abstract("y", Eq("y", "x"), d)), a)


def no_change(c: str, alphabet: Alphabet | None = None) -> Formula:
    """``c`` designates now what it designates at the next moment."""
    _declared(alphabet, c)
    return _abstract("x", Next(_abstract("y", Eq("x", "y"), c)), c)


def always_return(a: str, alphabet: Alphabet | None = None) -> Formula:
    """At every moment, from the next moment on ``a`` has once been where it is now.

    Transcribed as displayed; the witness for the inner Once may be the current
    moment itself.
    """
    _declared(alphabet, a)
    return Always(_abstract("x", Next(Once(_abstract("y", Eq("x", "y"), a))), a))


def _moved_like(a: str, d: str, w: str) -> Formula:
    # <x. O (<y. y = x>(d) & X <v. v = w>(d))>(a)
    return _abstract(
        "x",
        Once(
            And(
                _abstract("y", Eq("y", "x"), d),
                Next(_abstract("v", Eq("v", w), d)),
            )
        ),
        a,
    )


def next_new(
    variant: int,
    a: str,
    d: str,
    c: str | None = None,
    alphabet: Alphabet | None = None,
) -> Formula:
    """``a`` moves next to where ``d`` once moved from ``a``'s current element.

    Variant 2 looks back from the next moment with Yesterday. Variant 1 avoids
    Yesterday at the cost of the auxiliary constant ``c``, which must designate
    now the element ``a`` designates next.

    Raises:
        ValidationError: For an unknown variant, or variant 1 without ``c``

    """
    if variant == 1:
        if c is None:
            raise ValidationError(
                "next_new variant 1 needs an auxiliary constant",
                {"variant": variant},
            )
        _declared(alphabet, a, d, c)
        return And(
            _abstract("w", _moved_like(a, d, "w"), c),
            _abstract("z", Next(_abstract("t", Eq("t", "z"), a)), c),
        )
    if variant == 2:
        _declared(alphabet, a, d)
        return Next(_abstract("w", Yesterday(_moved_like(a, d, "w")), a))
    raise ValidationError(f"unknown next_new variant {variant}", {"variant": variant})


def next_new_agreement(a: str, d: str, c: str) -> Formula:
    """The two next_new variants agree once ``c`` witnesses ``a``'s next element."""
    witness = _abstract("z", Next(_abstract("t", Eq("t", "z"), a)), c)
    return iff(next_new(1, a, d, c), And(next_new(2, a, d), witness))


def rigid_on_visited(
    E: str, c1: str, c2: str, alphabet: Alphabet | None = None
) -> Formula:
    """Binary ``E`` never changes on pairs of elements visited by ``c1`` and ``c2``."""
    _declared(alphabet, c1, c2)
    if alphabet is not None and alphabet.predicates.get(E, 2) != 2:
        raise ValidationError(
            f"arity mismatch: '{E}' must be binary",
            {"predicate": E, "arity": alphabet.predicates[E]},
        )
    edge = Atom(E, ("x", "y"))
    return Always(
        _abstract(
            "x",
            _abstract("y", iff(edge, And(Always(edge), Historically(edge))), c1),
            c2,
        )
    )


def forwarding_protocol(
    s: str, r: str, m: str, alphabet: Alphabet | None = None
) -> Formula:
    """Message ``m`` leaves with sender ``s`` and then follows receiver ``r``.

    The middle conjunct picks up the meeting host: one step later ``m`` is at a
    host that ``s`` reaches eventually and ``r`` reaches eventually after that.
    """
    validate_distinct([s, r, m], "forwarding constants")
    _declared(alphabet, s, r, m)
    meeting = _abstract(
        "z",
        Eventually(
            _abstract(
                "x",
                Eventually(_abstract("y", And(Eq("x", "y"), Eq("y", "z")), r)),
                s,
            )
        ),
        m,
    )
    return And(
        And(same(s, m), Next(meeting)),
        Next(Always(next_new(2, m, r))),
    )

"""Formula and term ASTs of the quantifier-free temporal logic with abstraction.

Formulas are immutable frozen dataclasses. Relation symbols apply to variables
only; flexible constants enter a formula exclusively as the argument of an
abstraction ``<x. body>(t)``, which binds ``x`` to the current designation of
``t``.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, fields
from enum import Enum


class TermKind(Enum):
    """Whether a term names a variable or a flexible constant."""

    VARIABLE = "variable"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Term:
    """The argument of an abstraction: a variable or a flexible constant."""

    kind: TermKind
    name: str

    @classmethod
    def var(cls, name: str) -> Term:
        """The variable ``name``."""
        return cls(TermKind.VARIABLE, name)

    @classmethod
    def const(cls, name: str) -> Term:
        """The flexible constant ``name``."""
        return cls(TermKind.CONSTANT, name)

    @property
    def is_variable(self) -> bool:
        """True for variables, False for constants."""
        return self.kind is TermKind.VARIABLE


class Formula:
    """Base class of all formula nodes."""

    def children(self) -> tuple[Formula, ...]:
        """Immediate subformulas, left to right."""
        return tuple(
            value
            for value in (getattr(self, f.name) for f in fields(self))
            if isinstance(value, Formula)
        )


@dataclass(frozen=True)
class Atom(Formula):
    """``P(x1, ..., xn)`` over variables."""

    predicate: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    """``x = y`` over variables."""

    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    """Negation."""

    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    """Conjunction."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    """Disjunction."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    """Material implication."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    """Holds now if the operand holds at the next moment."""

    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    """The operand holds now or at some later moment."""

    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    """The operand holds now and at every later moment."""

    operand: Formula


@dataclass(frozen=True)
class Yesterday(Formula):
    """The operand held at the previous moment; False at moment 0."""

    operand: Formula


@dataclass(frozen=True)
class Once(Formula):
    """The operand holds now or held at some earlier moment."""

    operand: Formula


@dataclass(frozen=True)
class Historically(Formula):
    """The operand holds now and held at every earlier moment."""

    operand: Formula


@dataclass(frozen=True)
class Abstract(Formula):
    """``<binder. body>(arg)``: ``body`` with ``binder`` bound to ``arg`` now."""

    binder: str
    body: Formula
    arg: Term


UNARY_TEMPORAL = (Next, Eventually, Always, Yesterday, Once, Historically)
FUTURE_OPERATORS = (Next, Eventually, Always)
PAST_OPERATORS = (Yesterday, Once, Historically)
BINARY_CONNECTIVES = (And, Or, Implies)


@dataclass(frozen=True)
class Alphabet:
    """Declared symbols: disjoint variable and constant namespaces plus predicates.

    ``equality`` says whether ``=`` belongs to the alphabet.
    """

    variables: frozenset[str] = frozenset()
    constants: frozenset[str] = frozenset()
    predicates: Mapping[str, int] = field(default_factory=dict, hash=False)
    equality: bool = True

    @classmethod
    def infer(cls, f: Formula) -> Alphabet:
        """Smallest alphabet in which ``f`` is well formed."""
        variables = set()
        for node in walk(f):
            if isinstance(node, Atom):
                variables.update(node.args)
            elif isinstance(node, Eq):
                variables.update((node.left, node.right))
            elif isinstance(node, Abstract):
                variables.add(node.binder)
                if node.arg.is_variable:
                    variables.add(node.arg.name)
        return cls(
            variables=frozenset(variables),
            constants=frozenset(constants(f)),
            predicates=predicates(f),
        )

    def merge(self, other: Alphabet) -> Alphabet:
        """Union of both alphabets; ``other`` wins on predicate arity clashes."""
        return Alphabet(
            variables=self.variables | other.variables,
            constants=self.constants | other.constants,
            predicates={**self.predicates, **other.predicates},
            equality=self.equality or other.equality,
        )


@dataclass(frozen=True)
class Diagnostic:
    """One well-formedness violation: the rule broken and the offending node."""

    rule: str
    node: Formula
    message: str

    def __str__(self) -> str:
        from .parser import print_formula

        return f"{self.rule}: {self.message} in `{print_formula(self.node)}`"


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node occurrence."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def size(f: Formula) -> int:
    """Number of node occurrences."""
    return sum(1 for _ in walk(f))


def free_variables(f: Formula) -> frozenset[str]:
    """Variables with an occurrence no enclosing abstraction binds.

    A variable passed as an abstraction argument is free even when it equals the
    binder, since the argument sits outside the binder's scope.
    """
    match f:
        case Atom(args=args):
            return frozenset(args)
        case Eq(left=left, right=right):
            return frozenset((left, right))
        case Abstract(binder=binder, body=body, arg=arg):
            result = free_variables(body) - {binder}
            if arg.is_variable:
                result |= {arg.name}
            return result
        case _:
            result = frozenset()
            for child in f.children():
                result |= free_variables(child)
            return result


def is_sentence(f: Formula) -> bool:
    """True when ``f`` has no free variables."""
    return not free_variables(f)


def constants(f: Formula) -> frozenset[str]:
    """Constant names occurring as abstraction arguments."""
    return frozenset(
        node.arg.name
        for node in walk(f)
        if isinstance(node, Abstract) and not node.arg.is_variable
    )


def predicates(f: Formula) -> dict[str, int]:
    """Predicate name to arity, in first-occurrence order."""
    found: dict[str, int] = {}
    for node in walk(f):
        if isinstance(node, Atom):
            found.setdefault(node.predicate, len(node.args))
    return found


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents, ``f`` last."""
    order: list[Formula] = []
    seen: set[Formula] = set()

    def visit(node: Formula) -> None:
        if node in seen:
            return
        for child in node.children():
            visit(child)
        seen.add(node)
        order.append(node)

    visit(f)
    return order


def past_depth(f: Formula) -> int:
    """Maximal nesting of past operators along any branch."""
    inner = max((past_depth(child) for child in f.children()), default=0)
    return inner + 1 if isinstance(f, PAST_OPERATORS) else inner


def well_formed(
    f: Formula, alphabet: Alphabet, sentence: bool = False
) -> list[Diagnostic]:
    """Check ``f`` against the grammar and the declared alphabet.

    Binders are variables whether declared or not; inside their scope the bound
    name may appear under relation symbols. Returns an empty list when ``f`` is
    well formed, otherwise one diagnostic per violation in pre-order.
    """
    diagnostics: list[Diagnostic] = []

    def check_variable(name: str, node: Formula, bound: frozenset[str]) -> None:
        if name in bound:
            return
        if name in alphabet.constants:
            diagnostics.append(
                Diagnostic(
                    "constant under relation symbol",
                    node,
                    f"'{name}' is a constant; only variables may appear here",
                )
            )
        elif name not in alphabet.variables:
            diagnostics.append(
                Diagnostic("undeclared variable", node, f"'{name}' is not declared")
            )

    def check(node: Formula, bound: frozenset[str]) -> None:
        match node:
            case Atom(predicate=name, args=args):
                if name not in alphabet.predicates:
                    diagnostics.append(
                        Diagnostic(
                            "undeclared predicate", node, f"'{name}' is not declared"
                        )
                    )
                elif alphabet.predicates[name] != len(args):
                    diagnostics.append(
                        Diagnostic(
                            "arity mismatch",
                            node,
                            f"'{name}' has arity {alphabet.predicates[name]}, "
                            f"applied to {len(args)} argument(s)",
                        )
                    )
                for arg in args:
                    check_variable(arg, node, bound)
            case Eq(left=left, right=right):
                if not alphabet.equality:
                    diagnostics.append(
                        Diagnostic(
                            "equality not in alphabet", node, "'=' is not declared"
                        )
                    )
                check_variable(left, node, bound)
                check_variable(right, node, bound)
            case Abstract(binder=binder, body=body, arg=arg):
                if binder in alphabet.constants:
                    diagnostics.append(
                        Diagnostic(
                            "constant as binder",
                            node,
                            f"'{binder}' is a constant and cannot be bound",
                        )
                    )
                if not arg.name:
                    diagnostics.append(
                        Diagnostic("empty term", node, "abstraction argument is empty")
                    )
                elif arg.is_variable:
                    check_variable(arg.name, node, bound)
                elif arg.name not in alphabet.constants:
                    diagnostics.append(
                        Diagnostic(
                            "undeclared constant",
                            node,
                            f"'{arg.name}' is not declared",
                        )
                    )
                elif arg.name in alphabet.variables or arg.name in bound:
                    diagnostics.append(
                        Diagnostic(
                            "namespace clash",
                            node,
                            f"'{arg.name}' is used both as variable and constant",
                        )
                    )
                check(body, bound | {binder})
            case _:
                for child in node.children():
                    check(child, bound)

    check(f, frozenset())

    if sentence:
        free = free_variables(f)
        if free:
            diagnostics.append(
                Diagnostic(
                    "not a sentence",
                    f,
                    f"free variable(s) {', '.join(sorted(free))}",
                )
            )
    return diagnostics

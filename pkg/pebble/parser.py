"""Concrete text syntax for formulas and a pretty-printer that round-trips.

Operators, loosest first: ``->`` (right associative), ``|``, ``&``, ``=``, then
the prefix operators ``~ G F X H O Y`` and finally atoms, parenthesized formulas
and abstractions ``<x. body>(t)``. The printer emits the minimal parentheses
this precedence requires, so ``parse_formula(print_formula(f)) == f``.

An abstraction argument written ``?z`` is the free variable ``z``. A bare
argument that no enclosing binder introduces is a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import lark

from . import props
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
    Or,
    Term,
    Yesterday,
)
from .utils.error_handler import ParseError

RESERVED = frozenset({"G", "F", "X", "H", "O", "Y"})

GRAMMAR = r"""
?start: implication

?implication: disjunction
            | disjunction "->" implication       -> implies

?disjunction: conjunction
            | disjunction "|" conjunction        -> or_

?conjunction: equality
            | conjunction "&" equality           -> and_

?equality: unary
         | NAME "=" NAME                         -> eq

?unary: atomic
      | "~" unary                                -> not_
      | "G" unary                                -> always
      | "F" unary                                -> eventually
      | "X" unary                                -> next
      | "H" unary                                -> historically
      | "O" unary                                -> once
      | "Y" unary                                -> yesterday

?atomic: NAME "(" [names] ")"                    -> atom
       | "(" implication ")"
       | "<" NAME "." implication ">" "(" argument ")"  -> abstract

?argument: NAME
         | "?" NAME                              -> free_variable

names: NAME ("," NAME)*

NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

_parser = lark.Lark(GRAMMAR, parser="lalr", propagate_positions=True)

_UNARY = {
    "not_": Not,
    "always": Always,
    "eventually": Eventually,
    "next": Next,
    "historically": Historically,
    "once": Once,
    "yesterday": Yesterday,
}
_BINARY = {"implies": Implies, "or_": Or, "and_": And}

# Precedence levels; higher binds tighter.
_IMPLIES, _OR, _AND, _EQ, _UNARY_LEVEL, _ATOMIC = range(6)

_SYMBOLS = {
    Not: "~",
    Always: "G ",
    Eventually: "F ",
    Next: "X ",
    Historically: "H ",
    Once: "O ",
    Yesterday: "Y ",
}


@dataclass(frozen=True)
class SourceSpan:
    """Character offsets ``[start, end)`` into the parsed text."""

    start: int
    end: int


def _span(node) -> SourceSpan:
    if isinstance(node, lark.Token):
        return SourceSpan(node.start_pos, node.end_pos)
    return SourceSpan(node.meta.start_pos, node.meta.end_pos)


class _FormulaBuilder:
    """Resolves names while turning the lark tree into a Formula.

    With an alphabet every name must be declared. Without one, names under
    relation symbols are variables, and bare names given to an abstraction that
    no enclosing binder introduces are constants.
    """

    def __init__(self, alphabet: Alphabet | None, free_constants: set[str]):
        self.alphabet = alphabet
        self.free_constants = free_constants
        self.arities: dict[str, int] = {}

    def name(self, token: lark.Token) -> str:
        if str(token) in RESERVED:
            raise ParseError(
                f"reserved word '{token}' used as a name",
                _span(token),
                {"name": str(token)},
            )
        return str(token)

    def build(self, tree, scope: frozenset[str]) -> Formula:
        kind = tree.data
        if kind in _UNARY:
            return _UNARY[kind](self.build(tree.children[0], scope))
        if kind in _BINARY:
            left, right = tree.children
            return _BINARY[kind](self.build(left, scope), self.build(right, scope))
        if kind == "eq":
            left, right = tree.children
            return Eq(self.variable(left, scope), self.variable(right, scope))
        if kind == "atom":
            name, names = tree.children
            args = tuple(
                self.variable(token, scope)
                for token in (names.children if names is not None else ())
            )
            self.check_predicate(name, len(args), tree)
            return Atom(str(name), args)
        if kind == "abstract":
            token, body, arg = tree.children
            binder = self.name(token)
            if self.alphabet is not None and binder in self.alphabet.constants:
                raise ParseError(
                    f"constant as binder: '{binder}' is a declared constant",
                    _span(token),
                )
            inner = self.build(body, scope | {binder})
            return Abstract(binder, inner, self.term(arg, scope))
        raise ParseError(f"unexpected construct '{kind}'", _span(tree))

    def variable(self, token: lark.Token, scope: frozenset[str]) -> str:
        name = self.name(token)
        if name in scope:
            return name
        if self.alphabet is None:
            constant = name in self.free_constants
        else:
            constant = name in self.alphabet.constants
            if not constant and name not in self.alphabet.variables:
                raise ParseError(
                    f"undeclared variable '{name}'", _span(token), {"name": name}
                )
        if constant:
            raise ParseError(
                f"constant under relation symbol: '{name}' is a constant",
                _span(token),
                {"name": name},
            )
        return name

    def term(self, node, scope: frozenset[str]) -> Term:
        if isinstance(node, lark.Tree):
            return self.free_variable(node.children[0], scope)
        token = node
        name = self.name(token)
        if name in scope:
            return Term.var(name)
        if self.alphabet is None:
            return Term.const(name)
        if name in self.alphabet.constants:
            return Term.const(name)
        if name in self.alphabet.variables:
            return Term.var(name)
        raise ParseError(f"undeclared symbol '{name}'", _span(token), {"name": name})

    def free_variable(self, token: lark.Token, scope: frozenset[str]) -> Term:
        name = self.name(token)
        if name in scope:
            raise ParseError(
                f"bound variable '{name}' marked free", _span(token), {"name": name}
            )
        if self.alphabet is not None and name not in self.alphabet.variables:
            raise ParseError(
                f"undeclared variable '{name}'", _span(token), {"name": name}
            )
        return Term.var(name)

    def check_predicate(self, token: lark.Token, arity: int, tree) -> None:
        name = self.name(token)
        if self.alphabet is not None:
            if name not in self.alphabet.predicates:
                raise ParseError(
                    f"undeclared predicate '{name}'", _span(token), {"name": name}
                )
            expected = self.alphabet.predicates[name]
        else:
            expected = self.arities.setdefault(name, arity)
        if expected != arity:
            raise ParseError(
                f"arity mismatch: '{name}' has arity {expected}, got {arity}",
                _span(tree),
                {"name": name},
            )


def _free_abstraction_args(tree, scope: frozenset[str], found: set[str]) -> None:
    if not isinstance(tree, lark.Tree):
        return
    if tree.data == "abstract":
        binder, body, arg = tree.children
        if isinstance(arg, lark.Token) and str(arg) not in scope:
            found.add(str(arg))
        _free_abstraction_args(body, scope | {str(binder)}, found)
        return
    for child in tree.children:
        _free_abstraction_args(child, scope, found)


def _unbalanced(text: str) -> bool:
    stripped = text.replace("->", "")
    return stripped.count("<") != stripped.count(">")


def parse_formula(text: str, alphabet: Alphabet | None = None) -> Formula:
    """Parse one formula.

    Args:
        text: Formula in the concrete syntax
        alphabet: Declared symbols; when omitted the names are resolved from
            their positions in the formula

    Raises:
        ParseError: On lexical and syntax errors, unbalanced abstraction brackets,
            arity mismatches and constants under relation symbols

    """
    try:
        tree = _parser.parse(text)
    except lark.UnexpectedCharacters as e:
        raise ParseError(
            f"lexical error: unexpected character {text[e.pos_in_stream]!r}",
            SourceSpan(e.pos_in_stream, e.pos_in_stream + 1),
        ) from None
    except lark.UnexpectedInput as e:
        token = getattr(e, "token", None)
        if token is not None and getattr(token, "start_pos", None) is not None:
            span = SourceSpan(token.start_pos, token.end_pos or token.start_pos)
        else:
            span = SourceSpan(len(text), len(text))
        if _unbalanced(text):
            raise ParseError("unbalanced abstraction brackets", span) from None
        raise ParseError("syntax error", span) from None

    free_constants: set[str] = set()
    if alphabet is None:
        _free_abstraction_args(tree, frozenset(), free_constants)
    return _FormulaBuilder(alphabet, free_constants).build(tree, frozenset())


def _level(f: Formula) -> int:
    match f:
        case Implies():
            return _IMPLIES
        case Or():
            return _OR
        case And():
            return _AND
        case Eq():
            return _EQ
        case Atom() | Abstract():
            return _ATOMIC
        case _:
            return _UNARY_LEVEL


def _print(f: Formula, minimum: int, bound: frozenset[str] = frozenset()) -> str:
    match f:
        case Atom(predicate=name, args=args):
            text = f"{name}({', '.join(args)})"
        case Eq(left=left, right=right):
            text = f"{left} = {right}"
        case Implies(left=left, right=right):
            text = f"{_print(left, _OR, bound)} -> {_print(right, _IMPLIES, bound)}"
        case Or(left=left, right=right):
            text = f"{_print(left, _OR, bound)} | {_print(right, _AND, bound)}"
        case And(left=left, right=right):
            text = f"{_print(left, _AND, bound)} & {_print(right, _EQ, bound)}"
        case Abstract(binder=binder, body=body, arg=arg):
            name = arg.name
            if arg.is_variable and name not in bound:
                name = f"?{name}"
            inner = _print(body, _IMPLIES, bound | {binder})
            text = f"<{binder}. {inner}>({name})"
        case _:
            text = _SYMBOLS[type(f)] + _print(f.operand, _UNARY_LEVEL, bound)
    return f"({text})" if _level(f) < minimum else text


def print_formula(f: Formula) -> str:
    """Render ``f`` with minimal parentheses."""
    return _print(f, _IMPLIES)


# Macro name -> (builder, number of arguments)
MACROS = {
    "Same": (props.same, 2),
    "AlwaysNew": (props.always_new, 1),
    "NoChange": (props.no_change, 1),
    "AlwaysReturn": (props.always_return, 1),
    "SameInPast": (props.same_in_past, 2),
    "NextNew1": (lambda a, d, c: props.next_new(1, a, d, c), 3),
    "NextNew2": (lambda a, d: props.next_new(2, a, d), 2),
    "RigidOnVisited": (props.rigid_on_visited, 3),
    "Forwarding": (props.forwarding_protocol, 3),
}

_MACRO_CALL = re.compile(r"@(\w+)\(([^()]*)\)")
_HEADER = re.compile(r"^\s*(vars|consts|preds)\s*:")


def expand_macros(text: str) -> str:
    """Replace every ``@Name(args)`` call with the printed builder output."""

    def expand(match: re.Match) -> str:
        name = match.group(1)
        args = [arg.strip() for arg in match.group(2).split(",") if arg.strip()]
        if name not in MACROS:
            raise ParseError(
                f"unknown macro '@{name}'",
                SourceSpan(match.start(), match.end()),
                {"macro": name},
            )
        builder, count = MACROS[name]
        if len(args) != count:
            raise ParseError(
                f"macro '@{name}' takes {count} argument(s), got {len(args)}",
                SourceSpan(match.start(), match.end()),
                {"macro": name},
            )
        return f"({print_formula(builder(*args))})"

    return _MACRO_CALL.sub(expand, text)


def _parse_header(segment: str, header: dict[str, list[str]]) -> None:
    key, _, values = segment.partition(":")
    key = key.strip()
    if key not in ("vars", "consts", "preds"):
        raise ParseError(f"unknown header '{key}'", details={"header": key})
    header.setdefault(key, []).extend(
        value.strip() for value in values.split(",") if value.strip()
    )


def _header_alphabet(header: dict[str, list[str]]) -> Alphabet:
    predicates = {}
    for entry in header.get("preds", []):
        name, slash, arity = entry.partition("/")
        if not slash or not arity.strip().isdigit():
            raise ParseError(
                f"predicate '{entry}' must be written name/arity",
                details={"predicate": entry},
            )
        predicates[name.strip()] = int(arity)
    alphabet = Alphabet(
        variables=frozenset(header.get("vars", [])),
        constants=frozenset(header.get("consts", [])),
        predicates=predicates,
    )
    names = list(alphabet.variables | alphabet.constants | set(predicates))
    reserved = sorted(RESERVED.intersection(names))
    if reserved:
        raise ParseError(
            f"reserved word(s) used as names: {', '.join(reserved)}",
            details={"names": reserved},
        )
    clash = sorted(alphabet.variables & alphabet.constants)
    if clash:
        raise ParseError(
            f"names declared both as variable and constant: {', '.join(clash)}",
            details={"names": clash},
        )
    return alphabet


def parse_formula_file(text: str) -> tuple[Alphabet, Formula]:
    """Parse a formula file: optional headers, ``#`` comments, one formula.

    Header lines are ``vars:``, ``consts:`` and ``preds:`` (``name/arity``); several
    headers may share a line separated by ``;``. When any header is present the
    formula is resolved strictly against it, otherwise the alphabet is inferred.
    """
    header: dict[str, list[str]] = {}
    body = []
    for line in text.splitlines():
        content = line.split("#", 1)[0]
        if _HEADER.match(content):
            for segment in content.split(";"):
                if segment.strip():
                    _parse_header(segment, header)
        else:
            body.append(content)

    source = expand_macros("\n".join(body)).strip()
    if not source:
        raise ParseError("formula file contains no formula")
    if not header:
        formula = parse_formula(source)
        return Alphabet.infer(formula), formula
    alphabet = _header_alphabet(header)
    return alphabet, parse_formula(source, alphabet)


def format_formula_file(alphabet: Alphabet, f: Formula) -> str:
    """Render a formula file that ``parse_formula_file`` reads back."""
    preds = ", ".join(f"{name}/{arity}" for name, arity in alphabet.predicates.items())
    return (
        f"vars: {', '.join(sorted(alphabet.variables))}\n"
        f"consts: {', '.join(sorted(alphabet.constants))}\n"
        f"preds: {preds}\n"
        f"{print_formula(f)}\n"
    )

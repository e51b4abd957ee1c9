"""Finitely represented temporal structures.

A TraceModel is either a finite observed prefix of an unknown infinite trace, or
a lasso ``prefix . loop^omega`` where stored positions ``k .. k+p-1`` repeat
forever. Equality is never stored: it is rigid and decided on element names.

Model file format::

    # comment
    domain: u, v
    const a: u, v [loop 1 1]
    pred E/2: {(u, v)}; {} [loop 1 1]

One ``const`` or ``pred`` line per symbol, one value (or tuple set) per stored
position separated by ``,`` (constants) or ``;`` (predicates). The loop marker
is optional; when present on several lines it must agree.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field

from .utils.error_handler import FormatError, HorizonError, ModelError

Tuples = frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class Lasso:
    """Loop shape: moments ``0..prefix-1`` once, then ``period`` positions forever."""

    prefix: int
    period: int

    @property
    def length(self) -> int:
        """Stored positions, ``prefix + period``."""
        return self.prefix + self.period


@dataclass(frozen=True)
class TraceModel:
    """A trace model over a constant domain.

    ``constants`` maps each flexible constant to the element it designates at
    every stored position, and ``predicates`` maps each predicate to its tuples
    at every stored position. With a ``lasso`` the positions repeat; without
    one the model is a finite prefix.
    """

    domain: tuple[str, ...]
    constants: Mapping[str, tuple[str, ...]] = field(
        default_factory=dict, hash=False
    )
    predicates: Mapping[str, tuple[Tuples, ...]] = field(
        default_factory=dict, hash=False
    )
    arities: Mapping[str, int] = field(default_factory=dict, hash=False)
    lasso: Lasso | None = None

    @property
    def length(self) -> int:
        """Number of stored positions T."""
        if self.lasso is not None:
            return self.lasso.length
        timelines = [*self.constants.values(), *self.predicates.values()]
        return len(timelines[0]) if timelines else 1

    @property
    def is_lasso(self) -> bool:
        """True when the model repeats forever."""
        return self.lasso is not None


def loop_position(M: TraceModel, n: int) -> int:
    """Stored index holding moment ``n``."""
    if n < 0:
        raise HorizonError(f"negative moment {n}", {"moment": n})
    if M.lasso is None:
        if n >= M.length:
            raise HorizonError(
                f"moment {n} is beyond the observed prefix of length {M.length}",
                {"moment": n, "length": M.length},
            )
        return n
    k, p = M.lasso.prefix, M.lasso.period
    return n if n < k else k + (n - k) % p


def constant_at(M: TraceModel, c: str, n: int) -> str:
    """Element ``c`` designates at moment ``n``.

    Raises:
        ModelError: If ``c`` is not a constant of ``M``
        HorizonError: If ``n`` is negative or past a finite prefix

    """
    if c not in M.constants:
        raise ModelError(f"unknown constant '{c}'", {"constant": c})
    return M.constants[c][loop_position(M, n)]


def visited(M: TraceModel, c: str, n: int) -> frozenset[str]:
    """Elements designated by ``c`` at some moment ``0 <= m <= n``."""
    if c not in M.constants:
        raise ModelError(f"unknown constant '{c}'", {"constant": c})
    loop_position(M, n)
    # Every stored position has been seen once n reaches T - 1.
    last = min(n, M.length - 1)
    return frozenset(M.constants[c][: last + 1])


def predicate_at(M: TraceModel, P: str, n: int) -> Tuples:
    """Tuples of ``P`` at moment ``n``.

    Raises:
        ModelError: If ``P`` is not a predicate of ``M``
        HorizonError: If ``n`` is negative or past a finite prefix

    """
    if P not in M.predicates:
        raise ModelError(f"unknown predicate '{P}'", {"predicate": P})
    return M.predicates[P][loop_position(M, n)]


def validate_model(M: TraceModel) -> list[str]:
    """Return one message per violated invariant; empty when ``M`` is valid."""
    diagnostics = []
    elements = set(M.domain)
    if not M.domain:
        diagnostics.append("domain is empty")
    if len(elements) != len(M.domain):
        diagnostics.append("domain lists an element twice")

    lengths = {len(t) for t in [*M.constants.values(), *M.predicates.values()]}
    if len(lengths) > 1:
        diagnostics.append(f"timelines have unequal lengths {sorted(lengths)}")
    if 0 in lengths:
        diagnostics.append("a timeline is empty")

    if M.lasso is not None:
        k, p = M.lasso.prefix, M.lasso.period
        if k < 0 or p < 1:
            diagnostics.append(f"invalid loop ({k}, {p}): need k >= 0 and p >= 1")
        for length in lengths:
            if length != k + p:
                diagnostics.append(f"loop ({k}, {p}) does not cover {length} steps")

    for name, timeline in M.constants.items():
        stray = sorted(set(timeline) - elements)
        if stray:
            diagnostics.append(
                f"constant '{name}' designates elements outside the domain: "
                f"{', '.join(stray)}"
            )
    for name, timeline in M.predicates.items():
        if name not in M.arities:
            diagnostics.append(f"predicate '{name}' has no declared arity")
            continue
        arity = M.arities[name]
        for step, tuples in enumerate(timeline):
            for entry in tuples:
                if len(entry) != arity:
                    diagnostics.append(
                        f"predicate '{name}' at step {step}: tuple {entry} "
                        f"does not have arity {arity}"
                    )
                stray = sorted(set(entry) - elements)
                if stray:
                    diagnostics.append(
                        f"predicate '{name}' at step {step} mentions elements "
                        f"outside the domain: {', '.join(stray)}"
                    )
    return diagnostics


def check_model(M: TraceModel) -> TraceModel:
    """Return ``M`` unchanged or raise ModelError listing every violation."""
    diagnostics = validate_model(M)
    if diagnostics:
        raise ModelError("; ".join(diagnostics), {"violations": len(diagnostics)})
    return M


_LOOP = re.compile(r"\[\s*loop\s+(\d+)\s+(\d+)\s*\]\s*$")
_LINE = re.compile(r"^(domain|const|pred)\b\s*([^:]*):(.*)$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def _split_loop(text: str, lineno: int) -> tuple[str, Lasso | None]:
    match = _LOOP.search(text)
    if match is None:
        if "[" in text:
            raise FormatError(f"line {lineno}: malformed loop marker", {"line": lineno})
        return text, None
    return text[: match.start()], Lasso(int(match.group(1)), int(match.group(2)))


def _parse_tuple_set(text: str, lineno: int) -> Tuples:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise FormatError(
            f"line {lineno}: expected a tuple set in braces, got '{body}'",
            {"line": lineno},
        )
    inner = body[1:-1].strip()
    tuples = set()
    for match in _TUPLE.finditer(inner):
        tuples.add(tuple(e.strip() for e in match.group(1).split(",") if e.strip()))
    if _TUPLE.sub("", inner).replace(",", "").strip():
        raise FormatError(f"line {lineno}: malformed tuple set", {"line": lineno})
    return frozenset(tuples)


def parse_model(text: str) -> TraceModel:
    """Parse the model file format and validate the result.

    Raises:
        FormatError: On syntax errors or conflicting declarations
        ModelError: When the parsed model violates an invariant

    """
    domain: list[str] | None = None
    constants: dict[str, tuple[str, ...]] = {}
    predicates: dict[str, tuple[Tuples, ...]] = {}
    arities: dict[str, int] = {}
    lassos = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if match is None:
            raise FormatError(f"line {lineno}: cannot parse '{line}'", {"line": lineno})
        kind, name, rest = match.group(1), match.group(2).strip(), match.group(3)
        if kind == "domain":
            if domain is not None:
                raise FormatError(
                    f"line {lineno}: second domain line", {"line": lineno}
                )
            domain = [e.strip() for e in rest.split(",") if e.strip()]
            continue

        rest, lasso = _split_loop(rest, lineno)
        if lasso is not None:
            lassos.add(lasso)
        if kind == "const":
            if not name or name in constants:
                raise FormatError(
                    f"line {lineno}: missing or repeated constant name",
                    {"line": lineno},
                )
            constants[name] = tuple(e.strip() for e in rest.split(","))
        else:
            name, slash, arity = name.partition("/")
            name = name.strip()
            if not name or name in predicates:
                raise FormatError(
                    f"line {lineno}: missing or repeated predicate name",
                    {"line": lineno},
                )
            timeline = tuple(_parse_tuple_set(s, lineno) for s in rest.split(";"))
            predicates[name] = timeline
            if slash:
                if not arity.strip().isdigit():
                    raise FormatError(
                        f"line {lineno}: arity must be a number", {"line": lineno}
                    )
                arities[name] = int(arity)
            else:
                sizes = {len(entry) for tuples in timeline for entry in tuples}
                if len(sizes) != 1:
                    raise FormatError(
                        f"line {lineno}: cannot infer the arity of '{name}', "
                        f"write {name}/n",
                        {"line": lineno},
                    )
                arities[name] = sizes.pop()

    if domain is None:
        raise FormatError("model file has no domain line")
    if len(lassos) > 1:
        raise FormatError("conflicting loop markers", {"loops": len(lassos)})
    return check_model(
        TraceModel(
            domain=tuple(domain),
            constants=constants,
            predicates=predicates,
            arities=arities,
            lasso=lassos.pop() if lassos else None,
        )
    )


def _format_tuples(tuples: Tuples) -> str:
    return "{" + ", ".join(f"({', '.join(t)})" for t in sorted(tuples)) + "}"


def format_model(M: TraceModel) -> str:
    """Canonical text for ``M``: sorted symbols and tuples, explicit arities."""
    marker = f" [loop {M.lasso.prefix} {M.lasso.period}]" if M.lasso else ""
    lines = [f"domain: {', '.join(M.domain)}"]
    for name in sorted(M.constants):
        lines.append(f"const {name}: {', '.join(M.constants[name])}{marker}")
    for name in sorted(M.predicates):
        steps = "; ".join(_format_tuples(t) for t in M.predicates[name])
        lines.append(f"pred {name}/{M.arities[name]}: {steps}{marker}")
    return "\n".join(lines) + "\n"

"""Translation of Minsky machines into sentences, and the canonical model of a run.

Instruction ``l`` executes at moment ``t`` when ``f`` and ``e_l`` designate the
same element (the formula ``Q_l``). Counter ``k`` is the number of elements
pebble ``a_k`` has visited minus those ``b_k`` has visited; both pebbles walk
along the path of ``d``, which never revisits an element. A zero test checks
whether ``a_k`` and ``b_k`` designate the same element.

The canonical model places the run's ``j``-th state at moment ``j + 1``; moment
0 holds the initial configuration where all counter pebbles sit on ``d``.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce

import pandas as pd

from .config.config import CERTIFY_CONFIG
from .evaluate import Verdict, bounded_vector, eval_bounded
from .minsky import Add, Instruction, MinskyMachine, SubOrJump, run
from .model import TraceModel, check_model, visited
from .props import always_new, next_new, no_change, same
from .syntax import Alphabet, Always, And, Formula, Implies, Next, Not
from .utils.error_handler import MachineError, ValidationError
from .utils.logging_utils import log_event
from .utils.monitoring import LatencyTracker
from .utils.validation import validate_minimum

INITIAL = "initial"
ALWAYS = "always"


@dataclass(frozen=True)
class TranslationAlphabet:
    """Constant names for a machine with ``L`` instructions."""

    L: int

    def __post_init__(self):
        validate_minimum(self.L, "L", 1)

    @classmethod
    def for_machine(cls, m: MinskyMachine) -> TranslationAlphabet:
        """Alphabet sized for ``m``."""
        return cls(m.L)

    def e(self, label: int) -> str:
        """Slot of label ``label``; ``Q_label`` holds while ``f`` is on it."""
        return f"e{label}"

    f = "f"
    d = "d"

    def a(self, k: int) -> str:
        """Pebble whose visited set counts the increments of counter ``k``."""
        return f"a{k}"

    def b(self, k: int) -> str:
        """Pebble whose visited set counts the decrements of counter ``k``."""
        return f"b{k}"

    @property
    def constants(self) -> tuple[str, ...]:
        """Every constant of the translation, slots first."""
        return (
            *(self.e(label) for label in range(self.L + 1)),
            self.f,
            self.d,
            self.a(1),
            self.b(1),
            self.a(2),
            self.b(2),
        )

    def as_alphabet(self) -> Alphabet:
        """The constants as an ``Alphabet`` with no variables or predicates."""
        return Alphabet(constants=frozenset(self.constants))


def _conjunction(parts: list[Formula]) -> Formula:
    return reduce(And, parts)


def q_formula(label: int, alpha: TranslationAlphabet) -> Formula:
    """``Q_label``: instruction ``label`` executes now (``Q_L`` is ``Q_stop``)."""
    if not 0 <= label <= alpha.L:
        raise ValidationError(
            f"label {label} is outside 0..{alpha.L}", {"label": label, "L": alpha.L}
        )
    return same(alpha.e(label), alpha.f)


def instruction_rules(
    label: int, instr: Instruction, alpha: TranslationAlphabet
) -> list[tuple[str, Formula]]:
    """Named rule bodies of instruction ``label``; each rule asserts ``G body``."""
    q = q_formula(label, alpha)
    match instr:
        case Add(counter=k, goto=goto):
            a, b = alpha.a(k), alpha.b(k)
            other_a, other_b = alpha.a(3 - k), alpha.b(3 - k)
            bodies = [
                ("A1", Implies(q, next_new(2, a, alpha.d))),
                ("A2", Implies(q, no_change(b))),
                ("A3", Implies(q, no_change(other_a))),
                ("A4", Implies(q, no_change(other_b))),
                ("A5", Implies(q, Next(q_formula(goto, alpha)))),
            ]
        case SubOrJump(counter=k, goto_nonzero=nonzero, goto_zero=zero):
            a, b = alpha.a(k), alpha.b(k)
            other_a, other_b = alpha.a(3 - k), alpha.b(3 - k)
            is_zero = And(q, same(a, b))
            non_zero = And(q, Not(same(a, b)))
            frozen = _conjunction(
                [no_change(a), no_change(b), no_change(other_a), no_change(other_b)]
            )
            bodies = [
                ("B1", Implies(non_zero, no_change(a))),
                ("B2", Implies(non_zero, next_new(2, b, alpha.d))),
                ("B3", Implies(non_zero, no_change(other_a))),
                ("B4", Implies(non_zero, no_change(other_b))),
                ("B5", Implies(is_zero, frozen)),
                ("B6", Implies(non_zero, Next(q_formula(nonzero, alpha)))),
                ("B7", Implies(is_zero, Next(q_formula(zero, alpha)))),
            ]
        case _:
            raise MachineError(
                f"instruction {label} is STOP and has no translation", {"label": label}
            )
    return [(f"l{label}.{name}", body) for name, body in bodies]


def translate_instruction(
    label: int, instr: Instruction, alpha: TranslationAlphabet
) -> Formula:
    """Conjunction of ``G body`` over the rules of instruction ``label``."""
    return _conjunction(
        [Always(body) for _, body in instruction_rules(label, instr, alpha)]
    )


def _initial(alpha: TranslationAlphabet) -> Formula:
    return _conjunction(
        [
            q_formula(0, alpha),
            same(alpha.d, alpha.a(1)),
            same(alpha.a(1), alpha.b(1)),
            same(alpha.b(1), alpha.a(2)),
            same(alpha.a(2), alpha.b(2)),
        ]
    )


def _second(alpha: TranslationAlphabet) -> Formula:
    return _conjunction(
        [
            q_formula(1, alpha),
            same(alpha.a(1), alpha.a(2)),
            same(alpha.a(2), alpha.b(1)),
            same(alpha.b(1), alpha.b(2)),
            Not(same(alpha.a(1), alpha.d)),
        ]
    )


def _distinct_slots(alpha: TranslationAlphabet) -> Formula | None:
    pairs = [
        Not(same(alpha.e(i), alpha.e(j)))
        for i in range(1, alpha.L + 1)
        for j in range(i + 1, alpha.L + 1)
    ]
    return _conjunction(pairs) if pairs else None


def chi_zero_parts(alpha: TranslationAlphabet) -> list[tuple[str, Formula, str]]:
    """The initial-configuration conjuncts as ``(name, formula, mode)``.

    ``initial`` parts are checked at moment 0; ``always`` parts are bodies of a
    ``G`` and are checked at every moment.
    """
    always_new_body = always_new(alpha.d).operand
    parts = [
        ("chi0.initial", _initial(alpha), INITIAL),
        ("chi0.next", Next(_second(alpha)), INITIAL),
        ("chi0.always_new", always_new_body, ALWAYS),
    ]
    distinct = _distinct_slots(alpha)
    if distinct is not None:
        parts.append(("chi0.distinct", distinct, ALWAYS))
    return parts


def chi_zero(alpha: TranslationAlphabet) -> Formula:
    """The initial configuration: moment 0, moment 1, and ``d`` always new."""
    third = always_new(alpha.d)
    distinct = _distinct_slots(alpha)
    if distinct is not None:
        third = And(third, Always(distinct))
    return And(And(_initial(alpha), Next(_second(alpha))), third)


def translate_machine(m: MinskyMachine) -> Formula:
    """``chi_0`` conjoined with the translation of every non-STOP instruction."""
    alpha = TranslationAlphabet.for_machine(m)
    blocks = [
        translate_instruction(label, m.instruction(label), alpha)
        for label in range(1, m.L)
    ]
    return _conjunction([chi_zero(alpha), *blocks])


def canonical_model(m: MinskyMachine, horizon: int) -> TraceModel:
    """The finite prefix, moments ``0..horizon``, of the model built from ``m``'s run.

    ``d`` designates a new element at every moment. ``e_0..e_L`` are pinned to
    their own elements. Counter pebbles advance along ``d``'s path: ADD moves
    ``a_k``, a non-zero SUB moves ``b_k``, a zero SUB and STOP move nothing.
    """
    validate_minimum(horizon, "horizon", 2)
    alpha = TranslationAlphabet.for_machine(m)
    states = run(m, horizon).states
    nodes = [f"{CERTIFY_CONFIG['node_prefix']}{j}" for j in range(horizon + 1)]
    slots = [f"{CERTIFY_CONFIG['slot_prefix']}{label}" for label in range(m.L + 1)]

    def label_at(j: int) -> int:
        if j == 0:
            return 0
        return states[j - 1].label if j <= len(states) else m.L

    pebbles = {alpha.a(1): 0, alpha.b(1): 0, alpha.a(2): 0, alpha.b(2): 0}
    timelines = {name: [0, 0] for name in pebbles}
    for j in range(1, horizon):
        label = label_at(j)
        if 0 < label < m.L:
            match m.instruction(label):
                case Add(counter=k):
                    pebbles[alpha.a(k)] += 1
                case SubOrJump(counter=k):
                    if pebbles[alpha.a(k)] != pebbles[alpha.b(k)]:
                        pebbles[alpha.b(k)] += 1
        for name, index in pebbles.items():
            timelines[name].append(index)

    constants = {
        alpha.e(label): (slots[label],) * (horizon + 1) for label in range(m.L + 1)
    }
    constants[alpha.f] = tuple(slots[label_at(j)] for j in range(horizon + 1))
    constants[alpha.d] = tuple(nodes)
    for name, indices in timelines.items():
        constants[name] = tuple(nodes[i] for i in indices)
    return check_model(TraceModel(domain=tuple(nodes + slots), constants=constants))


@dataclass
class CertReport:
    """Bounded evidence that the canonical model satisfies the translation.

    ``rules`` maps a rule name to its verdict at each moment, None where the
    rule is not checked. Counter mismatches are ``(j, k, expected, observed)``;
    zero-test mismatches are ``(j, k)``; ``q_violations`` lists moments where
    the number of true ``Q_l`` is not one.
    """

    machine: str
    horizon: int
    halted: bool
    rules: dict[str, list[Verdict | None]] = field(default_factory=dict)
    q_stop_seen_at: int | None = None
    counter_mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)
    zero_test_mismatches: list[tuple[int, int]] = field(default_factory=list)
    q_violations: list[int] = field(default_factory=list)
    overall: Verdict = Verdict.UNKNOWN

    @property
    def no_violation(self) -> bool:
        """True when no checked rule is False at any moment."""
        return not any(Verdict.FALSE in row for row in self.rules.values())

    @property
    def consistent(self) -> bool:
        """No rule violation and no counter, zero-test or state mismatch."""
        return self.no_violation and not (
            self.counter_mismatches or self.zero_test_mismatches or self.q_violations
        )

    def violations(self) -> list[tuple[str, int]]:
        """``(rule, moment)`` for every False verdict, in rule order."""
        return [
            (name, n)
            for name, row in self.rules.items()
            for n, verdict in enumerate(row)
            if verdict is Verdict.FALSE
        ]

    def matrix(self) -> pd.DataFrame:
        """Rule by moment table of ``T``/``F``/``?``, blank where unchecked."""
        symbols = {Verdict.TRUE: "T", Verdict.FALSE: "F", Verdict.UNKNOWN: "?"}
        return pd.DataFrame(
            [[symbols.get(v, "") for v in row] for row in self.rules.values()],
            index=pd.Index(list(self.rules), name="rule"),
            columns=list(range(self.horizon + 1)),
        )

    def summary(self) -> dict:
        """Report fields for the command line, counts instead of lists."""
        return {
            "machine": self.machine,
            "horizon": self.horizon,
            "halted": self.halted,
            "no_violation": self.no_violation,
            "q_stop_seen_at": self.q_stop_seen_at,
            "overall": self.overall,
            "counter_mismatches": len(self.counter_mismatches),
            "zero_test_mismatches": len(self.zero_test_mismatches),
            "q_violations": len(self.q_violations),
        }


def certify(m: MinskyMachine, horizon: int, name: str = "machine") -> CertReport:
    """Check the canonical model of ``m`` against the translation up to ``horizon``."""
    with LatencyTracker("certify"):
        alpha = TranslationAlphabet.for_machine(m)
        M = canonical_model(m, horizon)
        r = run(m, horizon)
        report = CertReport(machine=name, horizon=horizon, halted=r.halted)

        for rule, formula, mode in chi_zero_parts(alpha):
            vector = bounded_vector(M, formula, {})
            if mode == INITIAL:
                report.rules[rule] = [vector[0]] + [None] * horizon
            else:
                report.rules[rule] = list(vector)
        for label in range(1, m.L):
            for rule, body in instruction_rules(label, m.instruction(label), alpha):
                report.rules[rule] = list(bounded_vector(M, body, {}))

        q_vectors = [
            bounded_vector(M, q_formula(label, alpha), {})
            for label in range(m.L + 1)
        ]
        for n in range(horizon + 1):
            if sum(v[n] is Verdict.TRUE for v in q_vectors) != 1:
                report.q_violations.append(n)
        report.q_stop_seen_at = next(
            (n for n, v in enumerate(q_vectors[m.L]) if v is Verdict.TRUE), None
        )

        for j, state in enumerate(r.states):
            if j + 1 > horizon:
                break
            for k in (1, 2):
                expected = state.counters[k - 1]
                visited_a = visited(M, alpha.a(k), j + 1)
                visited_b = visited(M, alpha.b(k), j + 1)
                observed = len(visited_a) - len(visited_b)
                nested = visited_b <= visited_a <= visited(M, alpha.d, j + 1)
                if observed != expected or not nested:
                    report.counter_mismatches.append((j, k, expected, observed))
                is_zero = eval_bounded(M, same(alpha.a(k), alpha.b(k)), {}, j + 1)
                if (is_zero is Verdict.TRUE) != (expected == 0):
                    report.zero_test_mismatches.append((j, k))

        report.overall = eval_bounded(M, translate_machine(m), {}, 0)

    log_event("certified", **report.summary())
    return report


def acceptance_horizon(m: MinskyMachine) -> int:
    """Twice the halting time, or the non-halting horizon if no halt is seen."""
    limit = CERTIFY_CONFIG["non_halting_horizon"]
    r = run(m, limit)
    if r.halted:
        return max(2, 2 * len(r.states))
    return limit


def certify_corpus(
    machines: Mapping[str, MinskyMachine],
    horizon: int | Callable[[MinskyMachine], int] = acceptance_horizon,
    workers: int | None = None,
) -> dict[str, CertReport]:
    """Certify every machine on a thread pool; results ordered by machine name."""
    workers = workers or CERTIFY_CONFIG["workers"]
    validate_minimum(workers, "workers", 1)

    def job(name: str) -> CertReport:
        m = machines[name]
        bound = horizon(m) if callable(horizon) else horizon
        return certify(m, bound, name=name)

    names = sorted(machines)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(job, names))
    failed = [r.machine for r in reports if not r.consistent]
    if failed:
        log_event("certification_violations", level="WARNING", machines=failed)
    return dict(zip(names, reports, strict=True))

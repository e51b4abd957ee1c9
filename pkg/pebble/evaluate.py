"""The truth relation on trace models, definite on lassos and three-valued on prefixes.

Both modes compute, for each subformula and each variable binding it depends
on, a vector of verdicts over the stored positions. Lasso models are first
unrolled so that past operators have settled: past formulas of past depth ``d``
are periodic from ``k + p*d`` on, which makes the last stored position's
successor the loop start again.

Yesterday is strong: ``Y phi`` is False at moment 0.
"""

from __future__ import annotations

from collections.abc import Mapping
from enum import Enum

from .model import TraceModel, loop_position
from .syntax import (
    Abstract,
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
    Yesterday,
    free_variables,
    is_sentence,
    past_depth,
)
from .utils.error_handler import (
    EvaluationError,
    HorizonError,
    ModelError,
    ValidationError,
)

Assignment = Mapping[str, str]


class Verdict(Enum):
    """Strong Kleene truth values. ``UNKNOWN`` only arises on finite prefixes."""

    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, value: bool) -> Verdict:
        """The definite verdict for a Python bool."""
        return cls.TRUE if value else cls.FALSE

    @property
    def definite(self) -> bool:
        """True unless the verdict is ``UNKNOWN``."""
        return self is not Verdict.UNKNOWN

    def __str__(self) -> str:
        return self.value


T, F, U = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN


def kleene_not(v: Verdict) -> Verdict:
    """Swap True and False; Unknown stays Unknown."""
    return F if v is T else T if v is F else U


def kleene_and(v: Verdict, w: Verdict) -> Verdict:
    """False if either side is False, True if both are True, else Unknown."""
    if v is F or w is F:
        return F
    if v is T and w is T:
        return T
    return U


def kleene_or(v: Verdict, w: Verdict) -> Verdict:
    """True if either side is True, False if both are False, else Unknown."""
    if v is T or w is T:
        return T
    if v is F and w is F:
        return F
    return U


def kleene_implies(v: Verdict, w: Verdict) -> Verdict:
    """``~v | w``."""
    return kleene_or(kleene_not(v), w)


class _VectorEvaluator:
    """Verdict vectors over ``length`` stored positions of one model.

    In lasso mode position ``length - 1`` is followed by ``loop_start``; in
    bounded mode nothing follows it.
    """

    def __init__(self, M: TraceModel, lasso: bool, length: int, loop_start: int):
        self.M = M
        self.lasso = lasso
        self.length = length
        self.loop_start = loop_start
        self.elements = frozenset(M.domain)
        self._free: dict[int, frozenset[str]] = {}
        self._memo: dict[tuple, list[Verdict]] = {}

    def constant(self, name: str, position: int) -> str:
        if name not in self.M.constants:
            raise EvaluationError(f"unknown constant '{name}'", {"constant": name})
        return self.M.constants[name][loop_position(self.M, position)]

    def tuples(self, name: str, position: int):
        if name not in self.M.predicates:
            raise EvaluationError(f"unknown predicate '{name}'", {"predicate": name})
        return self.M.predicates[name][loop_position(self.M, position)]

    def free(self, f: Formula) -> frozenset[str]:
        key = id(f)
        if key not in self._free:
            self._free[key] = free_variables(f)
        return self._free[key]

    def vector(self, f: Formula, env: Assignment) -> list[Verdict]:
        relevant = tuple(sorted((x, env[x]) for x in self.free(f) if x in env))
        key = (id(f), relevant)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._compute(f, env)
            self._memo[key] = cached
        return cached

    def _compute(self, f: Formula, env: Assignment) -> list[Verdict]:
        n = self.length
        match f:
            case Atom(predicate=name, args=args):
                values = tuple(self.lookup(x, env) for x in args)
                return [T if values in self.tuples(name, i) else F for i in range(n)]
            case Eq(left=left, right=right):
                value = T if self.lookup(left, env) == self.lookup(right, env) else F
                return [value] * n
            case Not(operand=operand):
                return [kleene_not(v) for v in self.vector(operand, env)]
            case And(left=left, right=right):
                return list(
                    map(kleene_and, self.vector(left, env), self.vector(right, env))
                )
            case Or(left=left, right=right):
                return list(
                    map(kleene_or, self.vector(left, env), self.vector(right, env))
                )
            case Implies(left=left, right=right):
                return list(
                    map(kleene_implies, self.vector(left, env), self.vector(right, env))
                )
            case Abstract(binder=binder, body=body, arg=arg):
                result = []
                for i in range(n):
                    if arg.is_variable:
                        value = self.lookup(arg.name, env)
                    else:
                        value = self.constant(arg.name, i)
                    result.append(self.vector(body, {**env, binder: value})[i])
                return result
            case Next(operand=operand):
                v = self.vector(operand, env)
                tail = v[self.loop_start] if self.lasso else U
                return v[1:] + [tail]
            case Eventually(operand=operand):
                return self._future(self.vector(operand, env), kleene_or, T)
            case Always(operand=operand):
                return self._future(self.vector(operand, env), kleene_and, F)
            case Yesterday(operand=operand):
                return [F] + self.vector(operand, env)[:-1]
            case Once(operand=operand):
                return self._past(self.vector(operand, env), kleene_or)
            case Historically(operand=operand):
                return self._past(self.vector(operand, env), kleene_and)
        raise EvaluationError(f"unsupported formula node {type(f).__name__}")

    def _future(self, v: list[Verdict], combine, witness: Verdict) -> list[Verdict]:
        n = self.length
        result = [U] * n
        if self.lasso:
            # Every loop position sees the whole loop in its future.
            settled = v[self.loop_start]
            for value in v[self.loop_start :]:
                settled = combine(settled, value)
            for i in range(self.loop_start, n):
                result[i] = settled
            start = self.loop_start - 1
        else:
            result[n - 1] = witness if v[n - 1] is witness else U
            start = n - 2
        for i in range(start, -1, -1):
            result[i] = combine(v[i], result[i + 1])
        return result

    @staticmethod
    def _past(v: list[Verdict], combine) -> list[Verdict]:
        result = []
        acc = None
        for value in v:
            acc = value if acc is None else combine(acc, value)
            result.append(acc)
        return result

    def lookup(self, name: str, env: Assignment) -> str:
        if name not in env:
            raise EvaluationError(f"unbound variable '{name}'", {"variable": name})
        value = env[name]
        if value not in self.elements:
            raise EvaluationError(
                f"variable '{name}' is assigned '{value}', which is not in the domain",
                {"variable": name, "value": value},
            )
        return value


def _check_assignment(M: TraceModel, f: Formula, a: Assignment) -> None:
    unbound = sorted(free_variables(f) - set(a))
    if unbound:
        raise EvaluationError(
            f"unbound free variable(s): {', '.join(unbound)}",
            {"variables": unbound},
        )
    outside = sorted(x for x, e in a.items() if e not in set(M.domain))
    if outside:
        raise EvaluationError(
            f"assignment targets outside the domain for: {', '.join(outside)}",
            {"variables": outside},
        )


def _lasso_evaluator(M: TraceModel, f: Formula) -> _VectorEvaluator:
    if M.lasso is None:
        raise ModelError("lasso evaluation needs a model with a loop")
    k, p = M.lasso.prefix, M.lasso.period
    unrolled_start = k + p * past_depth(f)
    return _VectorEvaluator(M, True, unrolled_start + p, unrolled_start)


def _bounded_evaluator(M: TraceModel) -> _VectorEvaluator:
    if M.lasso is not None:
        raise ModelError("bounded evaluation needs a finite prefix model")
    return _VectorEvaluator(M, False, M.length, M.length)


def lasso_vector(M: TraceModel, f: Formula, a: Assignment) -> list[Verdict]:
    """Verdicts of ``f`` at moments ``0 .. T-1`` of a lasso model."""
    _check_assignment(M, f, a)
    evaluator = _lasso_evaluator(M, f)
    return evaluator.vector(f, dict(a))[: M.length]


def bounded_vector(M: TraceModel, f: Formula, a: Assignment) -> list[Verdict]:
    """Verdicts of ``f`` at every observed moment of a prefix model."""
    _check_assignment(M, f, a)
    return _bounded_evaluator(M).vector(f, dict(a))


def eval_lasso(M: TraceModel, f: Formula, a: Assignment, n: int) -> Verdict:
    """Truth of ``f`` at moment ``n`` of the infinite trace ``prefix . loop^omega``.

    Never returns UNKNOWN.

    Raises:
        EvaluationError: For unbound variables or assignment targets outside
            the domain
        ModelError: If ``M`` has no loop

    """
    if n < 0:
        raise HorizonError(f"negative moment {n}", {"moment": n})
    _check_assignment(M, f, a)
    evaluator = _lasso_evaluator(M, f)
    vector = evaluator.vector(f, dict(a))
    if n >= evaluator.length:
        n = evaluator.loop_start + (n - evaluator.loop_start) % M.lasso.period
    return vector[n]


def eval_bounded(M: TraceModel, f: Formula, a: Assignment, n: int) -> Verdict:
    """Three-valued truth of ``f`` at moment ``n`` of a finite prefix.

    TRUE (FALSE) means every infinite extension of the prefix satisfies
    (falsifies) ``f`` at ``n``.
    """
    if not 0 <= n < M.length:
        raise HorizonError(
            f"moment {n} is outside the observed prefix of length {M.length}",
            {"moment": n, "length": M.length},
        )
    return bounded_vector(M, f, a)[n]


def eval_sentence(M: TraceModel, f: Formula, n: int = 0) -> Verdict:
    """Evaluate a sentence in the mode matching ``M``."""
    if not is_sentence(f):
        raise ValidationError(
            "not a sentence: free variable(s) "
            + ", ".join(sorted(free_variables(f))),
        )
    if M.lasso is not None:
        return eval_lasso(M, f, {}, n)
    return eval_bounded(M, f, {}, n)

"""Literal evaluator for lasso models, used as an oracle for ``evaluate``.

Each operator is decided by quantifying over moments of the unrolled trace
exactly as its truth condition reads. Future quantifiers range over a finite
window whose length is enough for every subformula to have become periodic.
"""

from __future__ import annotations

from collections.abc import Mapping

from .model import TraceModel, constant_at, predicate_at
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
    subformulas,
)
from .utils.error_handler import EvaluationError, ModelError


def unrolled_length(M: TraceModel, f: Formula) -> int:
    """Moments the reference evaluator materializes for ``f`` on ``M``."""
    if M.lasso is None:
        raise ModelError("the reference evaluator needs a model with a loop")
    k, p = M.lasso.prefix, M.lasso.period
    return k + p * (len(subformulas(f)) + 2)


def holds(M: TraceModel, f: Formula, a: Mapping[str, str], n: int) -> bool:
    """Literal truth relation on a lasso, read off the clauses one by one.

    Args:
        M: Model with a loop
        f: Formula whose free variables ``a`` assigns
        a: Assignment of variables to domain elements
        n: Moment

    Returns:
        Whether ``f`` holds at moment ``n`` under ``a``

    Raises:
        ModelError: If ``M`` has no loop
        EvaluationError: On an unbound variable or an element outside the domain

    """
    window = unrolled_length(M, f)
    elements = frozenset(M.domain)
    memo: dict[tuple, bool] = {}

    def value(name: str, env: dict[str, str]) -> str:
        if name not in env:
            raise EvaluationError(f"unbound variable '{name}'", {"variable": name})
        if env[name] not in elements:
            raise EvaluationError(
                f"variable '{name}' is assigned outside the domain",
                {"variable": name},
            )
        return env[name]

    def sat(g: Formula, env: dict[str, str], m: int) -> bool:
        key = (id(g), tuple(sorted(env.items())), m)
        if key in memo:
            return memo[key]
        match g:
            case Atom(predicate=name, args=args):
                result = tuple(value(x, env) for x in args) in predicate_at(M, name, m)
            case Eq(left=left, right=right):
                result = value(left, env) == value(right, env)
            case Not(operand=operand):
                result = not sat(operand, env, m)
            case And(left=left, right=right):
                result = sat(left, env, m) and sat(right, env, m)
            case Or(left=left, right=right):
                result = sat(left, env, m) or sat(right, env, m)
            case Implies(left=left, right=right):
                result = not sat(left, env, m) or sat(right, env, m)
            case Next(operand=operand):
                result = sat(operand, env, m + 1)
            case Eventually(operand=operand):
                result = any(sat(operand, env, j) for j in range(m, m + window))
            case Always(operand=operand):
                result = all(sat(operand, env, j) for j in range(m, m + window))
            case Yesterday(operand=operand):
                result = m > 0 and sat(operand, env, m - 1)
            case Once(operand=operand):
                result = any(sat(operand, env, j) for j in range(m + 1))
            case Historically(operand=operand):
                result = all(sat(operand, env, j) for j in range(m + 1))
            case Abstract(binder=binder, body=body, arg=arg):
                if arg.is_variable:
                    bound = value(arg.name, env)
                else:
                    bound = constant_at(M, arg.name, m)
                result = sat(body, {**env, binder: bound}, m)
            case _:
                raise EvaluationError(f"unsupported formula node {type(g).__name__}")
        memo[key] = result
        return result

    return sat(f, dict(a), n)

"""Small-scope search for lasso models of a sentence.

The search is incomplete: finding nothing within a scope says
nothing about satisfiability in general. Candidates are enumerated in a fixed
order: domain size, then stored length ``k + p``, then prefix length, then the
constant timelines, then predicate timelines. Only tuples over elements that
some constant visits are enumerated, since sentences cannot observe the rest.

With pruning on, constant timelines are restricted growth strings that use
every element: each model is enumerated once up to renaming of its elements,
and models with unvisited elements are left to smaller domains.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config.config import SEARCH_CONFIG
from .evaluate import Verdict, eval_lasso
from .model import Lasso, TraceModel
from .reference import holds
from .syntax import And, Formula, Not, constants, free_variables, predicates
from .utils.error_handler import ScopeTooLargeError, ValidationError
from .utils.logging_utils import log_event
from .utils.monitoring import LatencyTracker, put_metric
from .utils.validation import validate_minimum


@dataclass(frozen=True)
class SearchScope:
    """Bounds of the enumeration.

    Domains hold ``1..max_domain_size`` elements and lassos have prefix
    ``0..max_prefix`` and period ``1..max_period``. Formulas may use at most
    ``max_predicates`` predicates of arity at most ``max_arity``. ``ceiling``
    caps the candidates enumerated.
    """

    max_domain_size: int = SEARCH_CONFIG["default_domain"]
    max_prefix: int = SEARCH_CONFIG["default_prefix"]
    max_period: int = SEARCH_CONFIG["default_period"]
    max_predicates: int = 2
    max_arity: int = 2
    pruned: bool = True
    ceiling: int = field(default_factory=lambda: SEARCH_CONFIG["enumeration_ceiling"])
    workers: int = field(default_factory=lambda: SEARCH_CONFIG["workers"])

    def __post_init__(self):
        validate_minimum(self.max_domain_size, "max_domain_size", 1)
        validate_minimum(self.max_prefix, "max_prefix", 0)
        validate_minimum(self.max_period, "max_period", 1)
        validate_minimum(self.max_predicates, "max_predicates", 0)
        validate_minimum(self.max_arity, "max_arity", 0)
        validate_minimum(self.ceiling, "ceiling", 1)
        validate_minimum(self.workers, "workers", 1)

    def shapes(self) -> list[tuple[int, int, int]]:
        """Shape blocks ``(domain size, prefix, period)`` in enumeration order."""
        blocks = []
        for size in range(1, self.max_domain_size + 1):
            for length in range(1, self.max_prefix + self.max_period + 1):
                for k in range(0, min(self.max_prefix, length - 1) + 1):
                    if length - k <= self.max_period:
                        blocks.append((size, k, length - k))
        return blocks


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a search.

    ``refuted_by`` names a conjunct that alone has no model in scope, when
    one was found.
    """

    model: TraceModel | None
    candidates: int
    refuted_by: Formula | None = None

    @property
    def found(self) -> bool:
        """True when a model was found."""
        return self.model is not None


def _restricted_growth(length: int, size: int) -> Iterator[tuple[int, ...]]:
    """Sequences over ``0..size-1`` that introduce symbols in order and use all."""
    sequence = [0] * length

    def extend(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if size - top > length - i:
            return
        if i == length:
            if top == size:
                yield tuple(sequence)
            return
        for symbol in range(min(top + 1, size)):
            sequence[i] = symbol
            yield from extend(i + 1, max(top, symbol + 1))

    if length == 0:
        if size == 1:
            yield ()
        return
    yield from extend(0, 0)


def _constant_assignments(
    count: int, length: int, size: int, pruned: bool
) -> Iterator[tuple[int, ...]]:
    if not pruned:
        return itertools.product(range(size), repeat=count * length)
    if count == 0:
        # Nothing to visit: a single element stands for every domain.
        return iter([()] if size == 1 else [])
    return _restricted_growth(count * length, size)


def _predicate_timelines(
    arity: int, elements: list[str], length: int
) -> Iterator[tuple[frozenset, ...]]:
    tuples = list(itertools.product(elements, repeat=arity))
    subsets = [
        frozenset(combo)
        for r in range(len(tuples) + 1)
        for combo in itertools.combinations(tuples, r)
    ]
    return itertools.product(subsets, repeat=length)


def candidate_models(
    names: list[str],
    arities: dict[str, int],
    shape: tuple[int, int, int],
    pruned: bool = True,
) -> Iterator[TraceModel]:
    """Every candidate lasso of one shape block, in enumeration order."""
    size, k, p = shape
    length = k + p
    domain = tuple(f"{SEARCH_CONFIG['element_prefix']}{i}" for i in range(size))
    for flat in _constant_assignments(len(names), length, size, pruned):
        constant_map = {
            name: tuple(domain[e] for e in flat[i * length : (i + 1) * length])
            for i, name in enumerate(names)
        }
        visited = sorted({domain[e] for e in flat}) if names else list(domain)
        pred_names = sorted(arities)
        for combo in itertools.product(
            *(_predicate_timelines(arities[P], visited, length) for P in pred_names)
        ):
            yield TraceModel(
                domain=domain,
                constants=constant_map,
                predicates=dict(zip(pred_names, combo, strict=True)),
                arities={P: arities[P] for P in pred_names},
                lasso=Lasso(k, p),
            )


def _search_block(
    f: Formula,
    names: list[str],
    arities: dict[str, int],
    shape: tuple[int, int, int],
    pruned: bool,
    ceiling: int,
) -> tuple[TraceModel | None, int]:
    count = 0
    for M in candidate_models(names, arities, shape, pruned):
        count += 1
        if count > ceiling:
            raise ScopeTooLargeError(
                f"more than {ceiling} candidates in block {shape}",
                {"ceiling": ceiling, "shape": shape},
            )
        if eval_lasso(M, f, {}, 0) is Verdict.TRUE:
            return M, count
    return None, count


def _estimate(names: list[str], arities: dict[str, int], scope: SearchScope) -> int:
    total = 0
    for size, k, p in scope.shapes():
        length = k + p
        models = size ** (len(names) * length)
        for arity in arities.values():
            models *= 2 ** (size**arity * length)
        total += models
    return total


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _check_input(f: Formula, scope: SearchScope) -> tuple[list[str], dict[str, int]]:
    free = free_variables(f)
    if free:
        raise ValidationError(
            f"not a sentence: free variable(s) {', '.join(sorted(free))}",
            {"variables": sorted(free)},
        )
    arities = predicates(f)
    if len(arities) > scope.max_predicates or any(
        n > scope.max_arity for n in arities.values()
    ):
        raise ValidationError(
            "formula exceeds the predicate limits of the scope",
            {
                "predicates": len(arities),
                "max_predicates": scope.max_predicates,
                "max_arity": scope.max_arity,
            },
        )
    return sorted(constants(f)), arities


def search(f: Formula, scope: SearchScope) -> SearchResult:
    """Find the first lasso model of the sentence ``f`` within ``scope``.

    A conjunct over fewer symbols with no model in scope refutes the whole
    conjunction, so such conjuncts are searched first when they are small.

    Raises:
        ValidationError: If ``f`` is not a sentence or exceeds the predicate limits
        ScopeTooLargeError: If the enumeration ceiling is exceeded

    """
    names, arities = _check_input(f, scope)

    parts = _conjuncts(f)
    if len(parts) > 1:
        sized = []
        for part in parts:
            part_names, part_arities = sorted(constants(part)), predicates(part)
            if len(part_names) < len(names) or len(part_arities) < len(arities):
                estimate = _estimate(part_names, part_arities, scope)
                if estimate <= scope.ceiling:
                    sized.append((estimate, part))
        for _, part in sorted(sized, key=lambda item: item[0]):
            result = search(part, scope)
            if not result.found:
                log_event("conjunct_refutes_search", level="DEBUG")
                return SearchResult(None, result.candidates, refuted_by=part)

    blocks = scope.shapes()
    total = 0
    with LatencyTracker("search"):
        if scope.workers > 1:
            outcomes = _parallel_blocks(f, names, arities, blocks, scope)
        else:
            outcomes = (
                _search_block(f, names, arities, shape, scope.pruned, scope.ceiling)
                for shape in blocks
            )
        for model, count in outcomes:
            total += count
            if total > scope.ceiling:
                raise ScopeTooLargeError(
                    f"more than {scope.ceiling} candidates enumerated",
                    {"ceiling": scope.ceiling},
                )
            if model is not None:
                if not holds(model, f, {}, 0):
                    raise RuntimeError(
                        "evaluators disagree on a found model; refusing to return it"
                    )
                put_metric("Pebble/Search", "Candidates", total)
                return SearchResult(model, total)
    put_metric("Pebble/Search", "Candidates", total)
    return SearchResult(None, total)


def _parallel_blocks(
    f: Formula,
    names: list[str],
    arities: dict[str, int],
    blocks: list[tuple[int, int, int]],
    scope: SearchScope,
) -> Iterator[tuple[TraceModel | None, int]]:
    with ProcessPoolExecutor(max_workers=scope.workers) as pool:
        futures = [
            pool.submit(
                _search_block, f, names, arities, shape, scope.pruned, scope.ceiling
            )
            for shape in blocks
        ]
        try:
            for future in futures:
                yield future.result()
        finally:
            for future in futures:
                future.cancel()


def find_model(f: Formula, scope: SearchScope) -> TraceModel | None:
    """The first lasso model of ``f`` in scope, or None (which proves nothing)."""
    return search(f, scope).model


def check_validity_small_scope(f: Formula, scope: SearchScope) -> TraceModel | None:
    """A lasso model falsifying ``f`` at moment 0, or None if none is in scope."""
    return find_model(Not(f), scope)

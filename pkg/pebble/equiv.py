"""Pebble equivalence of trace models and the constructions that preserve it.

Two models are pebble equivalent when every constant designates the same
element at every moment and every predicate agrees, at every moment, on the
tuples built from elements some constant visits. Sentences cannot tell such
models apart, which ``locality_discrepancies`` checks on concrete instances.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, replace

from .evaluate import Verdict, eval_sentence
from .model import Lasso, TraceModel, check_model, loop_position
from .syntax import Alphabet, Formula
from .utils.error_handler import (
    AlphabetMismatchError,
    FlickerError,
    ModelError,
    ValidationError,
)
from .utils.logging_utils import log_event
from .utils.validation import validate_minimum


@dataclass(frozen=True)
class EquivScope:
    """Moments compared in bounded mode, and the symbols to compare (default: all)."""

    horizon: int
    alphabet: Alphabet | None = None

    def __post_init__(self):
        validate_minimum(self.horizon, "horizon", 1)


@dataclass(frozen=True)
class Witness:
    """First difference found: a constant (``tuple`` is None) or a predicate tuple."""

    moment: int
    symbol: str
    tuple: tuple[str, ...] | None = None


@dataclass(frozen=True)
class EquivResult:
    """Outcome of a comparison; truthy when the models are pebble equivalent.

    ``bounded`` is set when only ``moments`` moments of a finite prefix were
    compared.
    """

    equivalent: bool
    bounded: bool
    moments: int
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _symbols(M: TraceModel, alphabet: Alphabet | None):
    if alphabet is None:
        return set(M.constants), dict(M.arities)
    return set(alphabet.constants), dict(alphabet.predicates)


def _checked_moments(M1: TraceModel, M2: TraceModel, horizon: int) -> tuple[int, bool]:
    if M1.lasso is not None and M2.lasso is not None:
        k = max(M1.lasso.prefix, M2.lasso.prefix)
        return k + math.lcm(M1.lasso.period, M2.lasso.period), False
    return horizon, True


def pebble_equivalent(
    M1: TraceModel, M2: TraceModel, scope: EquivScope
) -> EquivResult:
    """Decide pebble equivalence, exactly on two lassos, up to the horizon otherwise.

    Raises:
        AlphabetMismatchError: If the models interpret different symbols
        HorizonError: If a prefix model is shorter than the horizon

    """
    constants1, arities1 = _symbols(M1, scope.alphabet)
    constants2, arities2 = _symbols(M2, scope.alphabet)
    if scope.alphabet is None and (constants1, arities1) != (constants2, arities2):
        raise AlphabetMismatchError(
            "models interpret different symbols",
            {
                "constants": sorted(constants1 ^ constants2),
                "predicates": sorted(set(arities1) ^ set(arities2)),
            },
        )
    for M in (M1, M2):
        missing = sorted(
            (constants1 - set(M.constants)) | (set(arities1) - set(M.predicates))
        )
        if missing:
            raise AlphabetMismatchError(
                f"model does not interpret {', '.join(missing)}",
                {"symbols": missing},
            )

    moments, bounded = _checked_moments(M1, M2, scope.horizon)
    names = sorted(constants1)
    for n in range(moments):
        for c in names:
            p1, p2 = loop_position(M1, n), loop_position(M2, n)
            if M1.constants[c][p1] != M2.constants[c][p2]:
                return EquivResult(False, bounded, moments, Witness(n, c))

    visited = {
        M1.constants[c][loop_position(M1, n)] for c in names for n in range(moments)
    }
    for n in range(moments):
        for name in sorted(arities1):
            p1, p2 = loop_position(M1, n), loop_position(M2, n)
            local1 = {t for t in M1.predicates[name][p1] if visited.issuperset(t)}
            local2 = {t for t in M2.predicates[name][p2] if visited.issuperset(t)}
            if local1 != local2:
                entry = min(local1 ^ local2)
                return EquivResult(False, bounded, moments, Witness(n, name, entry))
    return EquivResult(True, bounded, moments)


def _fresh_names(M: TraceModel, count: int, stem: str = "fresh") -> list[str]:
    taken = set(M.domain)
    names = []
    for i in itertools.count():
        if len(names) == count:
            return names
        if f"{stem}{i}" not in taken:
            names.append(f"{stem}{i}")


def normalize_period(M: TraceModel) -> TraceModel:
    """The same infinite trace stored with its loop written out twice."""
    if M.lasso is None:
        raise ModelError("only lasso models have a period to double")
    k, p = M.lasso.prefix, M.lasso.period
    positions = [loop_position(M, n) for n in range(k + 2 * p)]
    return replace(
        M,
        constants={c: tuple(t[i] for i in positions) for c, t in M.constants.items()},
        predicates={P: tuple(t[i] for i in positions) for P, t in M.predicates.items()},
        lasso=Lasso(k, 2 * p),
    )


def extend_with_flicker(M: TraceModel, E: str) -> TraceModel:
    """Add two unvisited elements on which ``E`` holds at even moments only.

    ``E`` is added with empty interpretations if ``M`` does not interpret it.

    Raises:
        FlickerError: If ``M`` is a lasso with an odd period
        ValidationError: If ``E`` is interpreted with an arity other than 2

    """
    if M.lasso is not None and M.lasso.period % 2:
        raise FlickerError(
            "an odd loop period cannot alternate E; use normalize_period first",
            {"period": M.lasso.period},
        )
    if M.arities.get(E, 2) != 2:
        raise ValidationError(
            f"flicker predicate '{E}' must be binary", {"predicate": E}
        )

    fresh = _fresh_names(M, 2)
    flicker = frozenset(itertools.product(fresh, repeat=2))
    timeline = M.predicates.get(E, (frozenset(),) * M.length)
    # Stored positions keep their moment's parity because the period is even.
    extended = tuple(
        tuples | flicker if i % 2 == 0 else tuples for i, tuples in enumerate(timeline)
    )
    log_event("flicker_extension", level="DEBUG", predicate=E, fresh=fresh)
    return check_model(
        replace(
            M,
            domain=M.domain + tuple(fresh),
            predicates={**M.predicates, E: extended},
            arities={**M.arities, E: 2},
        )
    )


def pebble_variant(M: TraceModel, rng: random.Random, extra: int = 1) -> TraceModel:
    """A random model pebble equivalent to ``M``.

    Adds ``extra`` fresh elements and redraws membership of every tuple that
    mentions an element no constant visits.
    """
    validate_minimum(extra, "extra", 0)
    domain = M.domain + tuple(_fresh_names(M, extra))
    visited = {e for timeline in M.constants.values() for e in timeline}
    predicates = {}
    for name, timeline in M.predicates.items():
        candidates = [
            t
            for t in itertools.product(domain, repeat=M.arities[name])
            if not visited.issuperset(t)
        ]
        predicates[name] = tuple(
            frozenset(t for t in tuples if visited.issuperset(t))
            | frozenset(t for t in candidates if rng.random() < 0.5)
            for tuples in timeline
        )
    return check_model(replace(M, domain=domain, predicates=predicates))


def locality_discrepancies(
    M1: TraceModel,
    M2: TraceModel,
    sentences: Mapping[str, Formula],
    n: int = 0,
) -> list[tuple[str, Verdict, Verdict]]:
    """Sentences whose verdicts at ``n`` differ between ``M1`` and ``M2``."""
    found = []
    for name, sentence in sentences.items():
        v1, v2 = eval_sentence(M1, sentence, n), eval_sentence(M2, sentence, n)
        if v1 is not v2:
            found.append((name, v1, v2))
    if found:
        log_event(
            "locality_discrepancies",
            level="WARNING",
            sentences=[name for name, _, _ in found],
        )
    return found

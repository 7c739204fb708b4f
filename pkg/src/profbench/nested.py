"""Nested performance profiles: wave iteration, elimination, ranking.

Classic profiles compare every solver against the single best one, which
makes the ranking of the *non-best* solvers unreliable: removing the best
solver and recomputing can reorder the rest. The nested procedure runs
the profile computation in waves. Each wave detects the best solver of
the current active set and removes it; the next wave recomputes ratios
against the reduced set. A removed solver keeps its ratio of exactly 1 on
problems where it was best (the values are carried forward unchanged) and
is otherwise rescored against the reduced set like everyone else. The
overall curve per solver is the pointwise arithmetic mean of its wave
curves, and the ranking reads off the elimination order.

Two details are fixed here for determinism and cross-wave comparability:

* the failure sentinel is resolved once on wave 1 and reused verbatim in
  every later wave;
* wave denominators use the minimum over the *current* active set, which
  is what makes later waves differ from the first one at all. Recomputed
  ratios of eliminated solvers may drop below 1 once the solver that beat
  them is itself gone; they are kept as-is and count as wins.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

from .errors import EmptyActiveSet, SolverNotActive, TooManyWaves
from .profiles import (
    AUTO,
    FailureRatio,
    ProfileCurve,
    RatioMatrix,
    compute_profile,
    compute_ratios,
    mean_cdf_curve,
    wins,
)
from .timings import TimingMatrix


class SelectionRule(str, Enum):
    """How a wave's best solver is chosen."""

    WINS = "wins"          # most problems with ratio exactly 1
    MEAN_RATIO = "mean"    # smallest ratio sum (failures count the sentinel)


@dataclass(frozen=True)
class FirstIndex:
    """Break ties by the lowest original column index."""


@dataclass(frozen=True)
class SeededRandom:
    """Break ties uniformly at random, reproducibly from ``seed``."""

    seed: int


TieBreak = Union[FirstIndex, SeededRandom]

FIRST_INDEX = FirstIndex()


@dataclass(frozen=True)
class ProfileConfig:
    """Knobs for ratio, profile and ranking computation.

    ``waves="all"`` runs the full elimination (solver count minus one).
    ``reporting_tau`` is the threshold at which rankings compare curve
    values; non-eliminated solvers are ordered by their overall value
    there, a convention this artifact flags in its outputs.
    """

    failure_ratio: FailureRatio = AUTO
    rule: SelectionRule = SelectionRule.WINS
    tie_break: TieBreak = field(default_factory=FirstIndex)
    waves: int | str = "all"
    reporting_tau: float = 1.0

    def __post_init__(self):
        if self.waves != "all":
            if not isinstance(self.waves, int) or self.waves < 1:
                raise ValueError(f"waves must be 'all' or an integer >= 1, got {self.waves!r}")

    def resolve_waves(self, n_solvers: int) -> int:
        limit = n_solvers - 1
        if self.waves == "all":
            return max(limit, 1)
        if self.waves > limit:
            raise TooManyWaves(
                f"{self.waves} waves requested but only {limit} possible "
                f"with {n_solvers} solvers"
            )
        return self.waves


RANKING_NOTE = (
    "first the solvers in elimination order, then the remainder sorted by "
    "overall profile value at the reporting tau (descending, first-index ties)"
)


@dataclass(frozen=True)
class NestedResult:
    """Everything one nested run produces.

    ``waves[i]`` is wave i's full ratio matrix (a row for every solver,
    ``active`` marking the survivors); ``wave_profiles[i]`` the curves of
    every solver in that wave; ``overall`` the per-solver mean curves;
    ``eliminated`` the best solvers in removal order; ``ranking`` the
    elimination order followed by the remaining solvers.
    """

    waves: tuple[RatioMatrix, ...]
    wave_profiles: tuple[dict[str, ProfileCurve], ...]
    overall: dict[str, ProfileCurve]
    eliminated: tuple[str, ...]
    ranking: tuple[str, ...]
    k: int
    config: ProfileConfig

    @property
    def failure_ratio(self) -> float:
        return self.waves[0].failure_ratio

    @property
    def solvers(self) -> tuple[str, ...]:
        return self.waves[0].solvers


def select_best(r: RatioMatrix, rule: SelectionRule, tie_break: TieBreak = FIRST_INDEX) -> str:
    """The wave's best solver among ``r.active``.

    WINS takes the most ratios equal to 1; MEAN_RATIO the smallest ratio
    sum, with failures contributing the sentinel. In an all-fail matrix
    WINS degenerates to scoring everyone 0 and the tie-break alone
    decides; this is documented behavior, not a claim about what "best"
    means there.
    """
    if not r.active:
        raise EmptyActiveSet("no active solvers to select from")
    if rule == SelectionRule.WINS:
        scores = {s: wins(r, s) for s in r.active}
        best = max(scores.values())
    else:
        scores = {s: -sum(r.row(s)) for s in r.active}
        best = max(scores.values())
    tied = [s for s in r.active if scores[s] == best]
    if isinstance(tie_break, SeededRandom):
        return random.Random(tie_break.seed).choice(tied)
    return tied[0]


def next_wave(
    prev: RatioMatrix,
    m: TimingMatrix,
    eliminated: str,
    failure_ratio: float | None = None,
) -> RatioMatrix:
    """Ratios after removing ``eliminated`` from the active set.

    Active solvers are rescored against the reduced minimum. Solvers
    outside the new active set keep a previous ratio of exactly 1
    unchanged and are rescored like active ones otherwise. On problems
    where every remaining active solver fails, the active ones get the
    sentinel and the others carry their previous ratios forward.
    """
    if eliminated not in prev.active:
        raise SolverNotActive(f"solver {eliminated!r} is not active")
    rm = prev.failure_ratio if failure_ratio is None else failure_ratio
    active = tuple(s for s in prev.active if s != eliminated)
    scored = [s for s in m.solvers if s in prev.ratios]
    inactive = [s for s in scored if s not in active]

    cols = {s: m.column(s) for s in scored}
    out: dict[str, list[float]] = {s: [] for s in scored}
    for p in range(m.n_problems):
        successes = [cols[s][p] for s in active if cols[s][p] is not None]
        if not successes:
            for s in active:
                out[s].append(rm)
            for s in inactive:
                out[s].append(prev.ratios[s][p])
            continue
        denom = min(successes)
        for s in active:
            t = cols[s][p]
            out[s].append(rm if t is None else t / denom)
        for s in inactive:
            if prev.ratios[s][p] == 1.0:
                out[s].append(1.0)
            else:
                t = cols[s][p]
                out[s].append(rm if t is None else t / denom)

    return RatioMatrix(
        problems=m.problems,
        solvers=m.solvers,
        active=active,
        ratios={s: tuple(out[s]) for s in scored},
        failure_ratio=rm,
    )


def nested_profiles(m: TimingMatrix, cfg: ProfileConfig = ProfileConfig()) -> NestedResult:
    """Run the full nested procedure on a timing table.

    Wave 1 scores all solvers; each subsequent wave removes the current
    best and rescores. Identical inputs with a first-index tie-break give
    bit-identical results across runs.
    """
    if m.n_solvers < 2:
        raise EmptyActiveSet("nested profiles need at least two solvers")
    k = cfg.resolve_waves(m.n_solvers)

    first = compute_ratios(m, None, cfg.failure_ratio)
    rm = first.failure_ratio
    waves = [first]
    eliminated: list[str] = []
    for _ in range(1, k):
        best = select_best(waves[-1], cfg.rule, cfg.tie_break)
        eliminated.append(best)
        waves.append(next_wave(waves[-1], m, best, rm))

    wave_profiles = tuple(
        {s: compute_profile(w, s) for s in m.solvers} for w in waves
    )
    # the mean over waves is taken on integer counts so that exact rational
    # ties between solvers survive floating point
    overall = {
        s: mean_cdf_curve([w.ratios[s] for w in waves], m.n_problems)
        for s in m.solvers
    }

    remaining = [s for s in m.solvers if s not in eliminated]
    index = {s: i for i, s in enumerate(m.solvers)}
    remaining.sort(
        key=lambda s: (-overall[s].evaluate(cfg.reporting_tau), index[s])
    )
    ranking = tuple(eliminated) + tuple(remaining)

    return NestedResult(
        waves=tuple(waves),
        wave_profiles=wave_profiles,
        overall=overall,
        eliminated=tuple(eliminated),
        ranking=ranking,
        k=k,
        config=cfg,
    )


def classic_ranking(m: TimingMatrix, cfg: ProfileConfig = ProfileConfig()) -> tuple[str, ...]:
    """Solvers ordered by their classic (single-wave) profile value.

    Sorted descending by the curve value at ``cfg.reporting_tau``; ties
    go to the lower original column index. This is the baseline that
    :func:`profbench.adversarial.check_flip` compares against.
    """
    r = compute_ratios(m, None, cfg.failure_ratio)
    index = {s: i for i, s in enumerate(m.solvers)}
    order = sorted(
        m.solvers,
        key=lambda s: (
            -compute_profile(r, s).evaluate(cfg.reporting_tau),
            index[s],
        ),
    )
    return tuple(order)


def reduced_config(cfg: ProfileConfig, n_solvers: int) -> ProfileConfig:
    """Config for a rerun on a reduced solver set (wave count clamped)."""
    if cfg.waves == "all":
        return cfg
    return replace(cfg, waves=min(cfg.waves, max(n_solvers - 1, 1)))

"""Performance ratios and profile curves as exact step functions.

A solver's performance ratio on a problem is its time divided by the best
time among the solvers under consideration; failures receive a sentinel
``failure_ratio`` chosen strictly above every finite ratio. The profile
curve of a solver is the empirical CDF of its ratios over problems: at
threshold ``tau`` it gives the fraction of problems whose ratio is <= tau.

Everything here is exact counting and division, never quadrature or
accumulation: curve values are integer counts divided by the problem
count, breakpoints are the ratio values themselves, and distances between
curves are computed by merging breakpoints and summing rectangles.

All functions are pure over immutable values and safe to call from any
number of threads.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    EmptyActiveSet,
    InvalidInterval,
    InvalidRM,
    UnknownSolver,
)
from .timings import TimingMatrix

AUTO = "auto"

FailureRatio = Union[float, str]  # a positive float, or AUTO


@dataclass(frozen=True)
class RatioMatrix:
    """One wave's performance ratios.

    ``ratios`` holds one row per scored solver (always the active ones;
    in nested waves also every previously eliminated solver). ``active``
    is the current solver subset in original column order. Failures are
    stored as exactly ``failure_ratio``, which is strictly greater than
    every finite ratio in the matrix, so the sentinel doubles as the
    failure marker.
    """

    problems: tuple[str, ...]
    solvers: tuple[str, ...]
    active: tuple[str, ...]
    ratios: Mapping[str, tuple[float, ...]]
    failure_ratio: float

    @property
    def n_problems(self) -> int:
        return len(self.problems)

    def row(self, solver: str) -> tuple[float, ...]:
        try:
            return self.ratios[solver]
        except KeyError:
            raise UnknownSolver(f"no ratio row for solver {solver!r}") from None

    def failed(self, solver: str) -> tuple[bool, ...]:
        """Per-problem failure flags, recovered from the sentinel value."""
        return tuple(r == self.failure_ratio for r in self.row(solver))


@dataclass(frozen=True)
class ProfileCurve:
    """Right-continuous non-decreasing step function with values in [0, 1].

    ``taus`` are the strictly increasing breakpoints; ``values[i]`` is the
    function value on ``[taus[i], taus[i+1])``. Below the first breakpoint
    the value is 0.
    """

    taus: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.taus:
            raise ValueError("a profile curve needs at least one breakpoint")
        if len(self.taus) != len(self.values):
            raise ValueError("breakpoint/value length mismatch")
        prev_t = -math.inf
        prev_v = 0.0
        for t, v in zip(self.taus, self.values):
            if not math.isfinite(t):
                raise ValueError(f"non-finite breakpoint {t!r}")
            if t <= prev_t:
                raise ValueError("breakpoints must be strictly increasing")
            if v < prev_v or v > 1.0:
                raise ValueError("values must be non-decreasing and <= 1")
            prev_t, prev_v = t, v

    @property
    def domain_start(self) -> float:
        """Smallest ratio present (the first breakpoint)."""
        return self.taus[0]

    @property
    def final_value(self) -> float:
        return self.values[-1]

    def evaluate(self, tau: float) -> float:
        """Step evaluation: value at the largest breakpoint <= tau, else 0."""
        if math.isnan(tau):
            raise ValueError("tau must not be NaN")
        i = bisect_right(self.taus, tau) - 1
        return self.values[i] if i >= 0 else 0.0

    @classmethod
    def from_ratios(cls, ratios: Sequence[float], n_problems: int | None = None) -> "ProfileCurve":
        """Empirical CDF of ``ratios`` with denominator ``n_problems``.

        The denominator defaults to ``len(ratios)`` but can be fixed
        higher, e.g. when the list covers only part of a problem set.
        """
        if not ratios:
            raise ValueError("cannot build a curve from zero ratios")
        n = len(ratios) if n_problems is None else n_problems
        taus = []
        values = []
        count = 0
        for r in sorted(ratios):
            count += 1
            if taus and r == taus[-1]:
                values[-1] = count / n
            else:
                taus.append(r)
                values.append(count / n)
        return cls(tuple(taus), tuple(values))


def compute_ratios(
    m: TimingMatrix,
    active: Iterable[str] | None = None,
    failure_ratio: FailureRatio = AUTO,
) -> RatioMatrix:
    """Performance ratios of the ``active`` solvers (default: all).

    For each problem the denominator is the minimum time among active
    solvers that succeed there; every active solver then gets time/min,
    or the failure sentinel where it fails. When no active solver
    succeeds on a problem, all of them get the sentinel there.

    With ``failure_ratio="auto"`` the sentinel is twice the largest
    finite ratio in the matrix (2.0 if every cell fails); an explicit
    value must lie strictly above all finite ratios or InvalidRM is
    raised.
    """
    if active is None:
        active_list = list(m.solvers)
    else:
        wanted = list(active)
        if not wanted:
            raise EmptyActiveSet("active solver set is empty")
        known = set(m.solvers)
        for s in wanted:
            if s not in known:
                raise UnknownSolver(f"solver {s!r} not in timing table")
        keep = set(wanted)
        active_list = [s for s in m.solvers if s in keep]

    cols = {s: m.column(s) for s in active_list}
    raw: dict[str, list[float | None]] = {s: [] for s in active_list}
    max_finite = None
    for p in range(m.n_problems):
        successes = [cols[s][p] for s in active_list if cols[s][p] is not None]
        denom = min(successes) if successes else None
        for s in active_list:
            t = cols[s][p]
            if t is None or denom is None:
                raw[s].append(None)
            else:
                r = t / denom
                raw[s].append(r)
                if max_finite is None or r > max_finite:
                    max_finite = r

    if failure_ratio == AUTO:
        rm = 2.0 if max_finite is None else 2.0 * max_finite
    else:
        rm = float(failure_ratio)
        if not (math.isfinite(rm) and rm > 0):
            raise InvalidRM(f"failure ratio must be a positive finite number, got {rm!r}")
        if max_finite is not None and rm <= max_finite:
            raise InvalidRM(
                f"failure ratio {rm} must exceed the largest finite ratio {max_finite}"
            )

    ratios = {
        s: tuple(rm if r is None else r for r in raw[s]) for s in active_list
    }
    return RatioMatrix(
        problems=m.problems,
        solvers=m.solvers,
        active=tuple(active_list),
        ratios=ratios,
        failure_ratio=rm,
    )


def compute_profile(r: RatioMatrix, solver: str) -> ProfileCurve:
    """Profile curve of one solver: CDF of its ratio row over problems."""
    return ProfileCurve.from_ratios(r.row(solver), r.n_problems)


def evaluate(curve: ProfileCurve, tau: float) -> float:
    """Right-continuous step evaluation of ``curve`` at ``tau``."""
    return curve.evaluate(tau)


def wins(r: RatioMatrix, solver: str) -> int:
    """Number of problems where the solver's ratio is exactly 1.

    Exact float comparison is safe: the minimum's own ratio is a
    same-value division, which IEEE arithmetic makes exactly 1.0.
    """
    return sum(1 for x in r.row(solver) if x == 1.0)


def success_fraction(r: RatioMatrix, solver: str) -> float:
    """Fraction of problems the solver solves (ratio below the sentinel)."""
    row = r.row(solver)
    return sum(1 for x in row if x != r.failure_ratio) / r.n_problems


def merged_breakpoints(curves: Iterable[ProfileCurve]) -> tuple[float, ...]:
    """Sorted union of the breakpoints of several curves."""
    points: set[float] = set()
    for c in curves:
        points.update(c.taus)
    return tuple(sorted(points))


def mean_curve(curves: Sequence[ProfileCurve]) -> ProfileCurve:
    """Pointwise arithmetic mean, stored on the union of breakpoints."""
    if not curves:
        raise ValueError("cannot average zero curves")
    k = len(curves)
    taus = merged_breakpoints(curves)
    values = tuple(sum(c.evaluate(t) for c in curves) / k for t in taus)
    return ProfileCurve(taus, values)


def mean_cdf_curve(rows: Sequence[Sequence[float]], n_problems: int) -> ProfileCurve:
    """Mean of the empirical CDFs of ``rows``, all over ``n_problems``.

    The mean of k CDFs with a common denominator is the CDF of the
    pooled multiset over ``k * n_problems``, so the values are integer
    counts rounded in a single division. This keeps exact rational ties
    between solvers (e.g. two of them at exactly 3/10) intact, where a
    float mean of per-curve values would smear them apart by an ulp.
    """
    if not rows:
        raise ValueError("cannot average zero ratio rows")
    pooled = [v for row in rows for v in row]
    return ProfileCurve.from_ratios(pooled, len(rows) * n_problems)


def max_pointwise_gap(a: ProfileCurve, b: ProfileCurve) -> float:
    """Largest |a(tau) - b(tau)| over the merged breakpoints of a and b.

    For step functions this is the sup-norm of the difference: between
    merged breakpoints both functions are constant. Computed by a single
    linear merge of the two breakpoint lists.
    """
    ta, va = a.taus, a.values
    tb, vb = b.taus, b.values
    na, nb = len(ta), len(tb)
    i = j = 0
    cur_a = cur_b = 0.0
    gap = 0.0
    while i < na or j < nb:
        if j >= nb or (i < na and ta[i] <= tb[j]):
            t = ta[i]
        else:
            t = tb[j]
        while i < na and ta[i] <= t:
            cur_a = va[i]
            i += 1
        while j < nb and tb[j] <= t:
            cur_b = vb[j]
            j += 1
        d = abs(cur_a - cur_b)
        if d > gap:
            gap = d
    return gap


def l1_distance(a: ProfileCurve, b: ProfileCurve, lo: float, hi: float) -> float:
    """Exact integral of |a - b| over [lo, hi].

    Both curves are piecewise constant, so the integrand is too; the
    integral is the sum of |difference| * width over the segments cut by
    the merged breakpoints. No numerical quadrature is involved.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidInterval(f"need finite lo < hi, got [{lo!r}, {hi!r}]")
    cuts = [lo]
    inner = sorted(
        t for t in set(a.taus) | set(b.taus) if lo < t < hi
    )
    cuts.extend(inner)
    cuts.append(hi)
    total = 0.0
    for x0, x1 in zip(cuts, cuts[1:]):
        total += abs(a.evaluate(x0) - b.evaluate(x0)) * (x1 - x0)
    return total

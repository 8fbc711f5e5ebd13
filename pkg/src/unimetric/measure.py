"""Net measures, the uniform measure, ball-mass functions and homogeneity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import covering
from .covering import EXACT_LIMIT, BRANCH_WIDTH
from .metric_core import MetricSpace, breakpoints, diameter

__all__ = [
    "DiscreteMeasure", "counting_measure", "point_mass", "nu_eps", "uniform_measure",
    "stabilized_uniform_measure", "UniformDiagnostics", "wasserstein1", "ball_masses",
    "ball_mass", "mass_table", "h_profile", "HomogeneityReport", "weak_homogeneity",
    "quasi_ratio", "check_thm21", "packing_sandwich",
]

INF = float("inf")


@dataclass(eq=False)
class DiscreteMeasure:
    """Probability weights on the points of a space.

    ``exact`` optionally carries the same weights as Fractions; measures built
    from nets and counting measures have them, which lets the homogeneity and
    packing checks compare without rounding.
    """

    space: MetricSpace
    weights: np.ndarray
    exact: tuple | None = field(default=None)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.space.n,):
            raise ValueError(f"need {self.space.n} weights, got shape {w.shape}")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        self.weights = w
        if self.exact is not None:
            self.exact = tuple(Fraction(x) for x in self.exact)
            if sum(self.exact) != 1:
                raise ValueError("exact weights must sum to 1")

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)

    @property
    def full_support(self) -> bool:
        return bool((self.weights > 0).all())

    @classmethod
    def from_fractions(cls, space, fracs):
        fracs = [Fraction(f) for f in fracs]
        return cls(space, np.array([float(f) for f in fracs]), tuple(fracs))


def counting_measure(space: MetricSpace) -> DiscreteMeasure:
    return DiscreteMeasure.from_fractions(space, [Fraction(1, space.n)] * space.n)


def point_mass(space: MetricSpace, index: int) -> DiscreteMeasure:
    return DiscreteMeasure.from_fractions(space, [int(i == index) for i in range(space.n)])


def _net(space, epsilon, mode, exact_limit, branch_width):
    resolved = covering._resolve(mode, space.n, exact_limit)
    if resolved == "exact":
        return covering.exact_net(space, epsilon, exact_limit, branch_width)
    return covering.greedy_net(space, epsilon)


def nu_eps(space: MetricSpace, epsilon: float, mode: str = "exact",
           exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH) -> DiscreteMeasure:
    """Uniform weights 1/N(epsilon) on the centers of the canonical epsilon-net."""
    net = _net(space, epsilon, mode, exact_limit, branch_width)
    w = [Fraction(0)] * space.n
    for c in net.centers:
        w[c] = Fraction(1, net.size)
    return DiscreteMeasure.from_fractions(space, w)


def wasserstein1(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """Transport distance between two measures on the same space (LP solve)."""
    if mu.space is not nu.space and not np.array_equal(mu.space.dist, nu.space.dist):
        raise ValueError("measures live on different spaces")
    a, b = mu.support, nu.support
    if np.array_equal(a, b) and np.array_equal(mu.weights[a], nu.weights[b]):
        return 0.0
    p, q = a.size, b.size
    cost = mu.space.dist[np.ix_(a, b)].ravel()
    rows = np.zeros((p + q, p * q))
    for i in range(p):
        rows[i, i * q:(i + 1) * q] = 1
    for j in range(q):
        rows[p + j, j::q] = 1
    rhs = np.concatenate([mu.weights[a], nu.weights[b]])
    res = linprog(cost, A_eq=rows[:-1], b_eq=rhs[:-1], bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return max(float(res.fun), 0.0)


@dataclass
class UniformDiagnostics:
    epsilons: list
    support_sizes: list
    gaps: list
    stabilized: bool

    @property
    def converged(self) -> bool:
        return self.stabilized or (bool(self.gaps) and self.gaps[-1] == 0.0)


def uniform_measure(space: MetricSpace, eps_schedule: Sequence[float] | None = None,
                    mode: str = "exact", exact_limit: int = EXACT_LIMIT,
                    branch_width: int = BRANCH_WIDTH):
    """Net measure at the finest epsilon plus successive transport gaps.

    Without a schedule the measure is taken below the smallest positive
    distance, where every net is the set of zero-distance class
    representatives and the sequence of net measures has stabilized.
    """
    if eps_schedule is None:
        eps_schedule = [_below_min(space)]
    eps = [float(e) for e in eps_schedule]
    if not eps:
        raise ValueError("eps schedule is empty")
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps schedule must be positive and strictly decreasing")
    measures = [nu_eps(space, e, mode, exact_limit, branch_width) for e in eps]
    gaps = [wasserstein1(a, b) for a, b in zip(measures, measures[1:])]
    diag = UniformDiagnostics(eps, [int(m.support.size) for m in measures], gaps,
                              eps[-1] < space.min_positive_distance)
    return measures[-1], diag


def _below_min(space):
    m = space.min_positive_distance
    return 0.5 * m if np.isfinite(m) else 1.0


def stabilized_uniform_measure(space: MetricSpace) -> DiscreteMeasure:
    return uniform_measure(space)[0]


# ------------------------------------------------------------ ball masses ----

def _cumulative(mu: DiscreteMeasure) -> np.ndarray:
    cache = mu.__dict__.setdefault("_cum", None)
    if cache is None:
        order = mu.space.neighbour_order
        cache = np.cumsum(mu.weights[order], axis=1)
        mu.__dict__["_cum"] = cache
    return cache


def mass_table(mu: DiscreteMeasure, radii) -> np.ndarray:
    """Float masses mu(B(x, r)), shape (n, len(radii)).

    Computed by cumulative sums along each row's sorted neighbour list, so two
    centers with the same multiset of neighbour weights get identical floats.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    cum = _cumulative(mu)
    sd = mu.space.sorted_dist
    out = np.empty((mu.space.n, radii.size))
    for x in range(mu.space.n):
        k = np.searchsorted(sd[x], radii, side="right")
        out[x] = cum[x, k - 1]
    return out


def ball_masses(mu: DiscreteMeasure, r: float, exact: bool = False):
    """mu(B(x, r)) for every center x (Fractions when ``exact``)."""
    if exact:
        if mu.exact is None:
            raise ValueError("measure carries no exact weights")
        inside = mu.space.dist <= r
        return [sum((mu.exact[j] for j in np.flatnonzero(row)), Fraction(0)) for row in inside]
    return mass_table(mu, [r])[:, 0]


def ball_mass(mu: DiscreteMeasure, r: float, exact: bool = False):
    """(h_minus, h_plus): smallest and largest closed r-ball mass."""
    m = ball_masses(mu, r, exact)
    return min(m), max(m)


def h_profile(mu: DiscreteMeasure, radii):
    """Arrays (h_minus, h_plus) over the given radii."""
    t = mass_table(mu, radii)
    return t.min(axis=0), t.max(axis=0)


def quasi_ratio(mu: DiscreteMeasure, exact: bool = False):
    """max over breakpoints of h_plus/h_minus; +inf if some h_minus vanishes."""
    best = Fraction(1) if exact else 1.0
    for r in breakpoints(mu.space):
        lo, hi = ball_mass(mu, r, exact)
        if lo == 0:
            return INF
        best = max(best, hi / lo)
    return best


# ------------------------------------------------------------ homogeneity ----

@dataclass
class HomogeneityReport:
    C_minus: Fraction | None
    witnesses: list
    quasi_ratio: object
    table: list = field(default_factory=list, repr=False)

    @property
    def weakly_homogeneous(self) -> bool:
        return self.C_minus is not None and self.C_minus > 0


def _segment_point(space, b):
    # radius 0 stands for the open first segment (0, b_1)
    return b if b > 0 else 0.5 * space.min_positive_distance if np.isfinite(
        space.min_positive_distance) else 1.0


def weak_homogeneity(space: MetricSpace, mode: str = "exact", measure: DiscreteMeasure | None = None,
                     exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH
                     ) -> HomogeneityReport:
    """Empirical C_minus = min over eps <= r of N_minus(r, eps) * N(r) / N(eps).

    r runs over positive breakpoints, eps over all breakpoints up to r; eps = 0
    represents the first open segment (0, b_1). ``quasi_ratio`` is evaluated
    for ``measure`` (default: the stabilized uniform measure).
    """
    bps = breakpoints(space)
    table, best, witnesses = [], None, []
    if space.n == 1:
        best, witnesses = Fraction(1), []
    else:
        Ncache = {}

        def N(b):
            if b not in Ncache:
                Ncache[b] = int(covering.cover_numbers_at(
                    space, [b], mode, exact_limit, branch_width)[0])
            return Ncache[b]

        for r in bps[bps > 0]:
            for e in bps[bps <= r]:
                ee = _segment_point(space, e)
                locs = [covering.local_cover_number(space, x, r, ee, mode, exact_limit, branch_width)
                        for x in range(space.n)]
                nmin = min(locs)
                ratio = Fraction(nmin * N(r), N(e))
                table.append((float(r), float(e), nmin, N(r), N(e), ratio))
                if best is None or ratio < best:
                    best = ratio
                    witnesses = [(float(r), float(e), int(np.argmin(locs)))]
                elif ratio == best:
                    witnesses.append((float(r), float(e), int(np.argmin(locs))))
    if measure is None:
        measure = stabilized_uniform_measure(space)
    q = quasi_ratio(measure, exact=measure.exact is not None)
    return HomogeneityReport(best, witnesses, q, table)


def check_thm21(space: MetricSpace, mu: DiscreteMeasure, C_minus, mode: str = "auto"):
    """Rows (r, h_minus(mu, r), C_minus/N(r), passed) at each positive breakpoint."""
    exact = mu.exact is not None and isinstance(C_minus, (Fraction, int))
    rows = []
    bps = breakpoints(space)
    radii = bps[bps > 0] if space.n > 1 else bps
    for r in radii:
        Nr = int(covering.cover_numbers_at(space, [r], mode)[0]) if r > 0 else 1
        lo, _ = ball_mass(mu, r, exact)
        rhs = Fraction(C_minus) / Nr if exact else float(C_minus) / Nr
        rows.append((float(r), lo, rhs, bool(lo >= rhs)))
    return rows


def packing_sandwich(mu: DiscreteMeasure, epsilon: float, mode: str = "exact",
                     exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH):
    """(1/h_plus(2 eps), M(eps), 1/h_minus(eps), passed); 1/0 is reported as +inf."""
    exact = mu.exact is not None
    M = covering.pack_number(mu.space, epsilon, mode, exact_limit, branch_width)
    _, hi2 = ball_mass(mu, 2 * epsilon, exact)
    lo, _ = ball_mass(mu, epsilon, exact)
    lower = 1 / hi2
    upper = INF if lo == 0 else 1 / lo
    return lower, M, upper, bool(lower <= M <= upper)

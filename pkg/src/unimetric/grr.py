"""Modulus-of-continuity distances for deterministic functions on finite spaces.

All integrals over r are exact: ball masses and covering numbers are step
functions of r with jumps at the breakpoints of the space, so each integral is
a finite sum of segment length times a constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import covering
from .covering import BRANCH_WIDTH, EXACT_LIMIT
from .measure import DiscreteMeasure, mass_table
from .metric_core import MetricSpace, breakpoints
from .orlicz import YoungFunction

__all__ = [
    "ModulusContext", "make_context", "target_distances", "compute_V", "w_distance",
    "w_bar_distance", "w_matrix", "w_bar_matrix", "w_bar_sup", "NetBound", "w_bound_net",
    "w_bound_wh", "AIReport", "check_arnold_imkeller", "EXPONENT",
]

INF = math.inf
EXPONENT = 2  # power of the ball mass in 4V/m^2


def target_distances(f_values, rho: Callable | None = None) -> np.ndarray:
    """rho(f(x_i), f(x_j)) for all pairs; default |.| (Euclidean for vector values)."""
    f = np.asarray(f_values, dtype=float)
    n = f.shape[0]
    if rho is None:
        if f.ndim == 1:
            return np.abs(f[:, None] - f[None, :])
        return np.sqrt(((f[:, None, :] - f[None, :, :]) ** 2).sum(-1))
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = float(rho(f[i], f[j]))
    return out


@dataclass(eq=False)
class ModulusContext:
    """Function values on a space with a measure and a Young function.

    ``V`` is filled by :func:`make_context`; the exponent of the ball mass is
    fixed at 2 and exposed as ``exponent``.
    """

    space: MetricSpace
    f_values: np.ndarray
    m: DiscreteMeasure
    Phi: YoungFunction
    rho: Callable | None = None
    V: float | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def exponent(self) -> int:
        return EXPONENT

    @property
    def target(self) -> np.ndarray:
        if "target" not in self._cache:
            self._cache["target"] = target_distances(self.f_values, self.rho)
        return self._cache["target"]

    @property
    def minorizing(self) -> bool:
        return self.V is not None and math.isfinite(self.V)


def make_context(space, f_values, m, Phi, rho=None) -> ModulusContext:
    ctx = ModulusContext(space, np.asarray(f_values, dtype=float), m, Phi, rho)
    if ctx.f_values.shape[0] != space.n:
        raise ValueError(f"need {space.n} function values, got {ctx.f_values.shape[0]}")
    if m.space.n != space.n:
        raise ValueError("measure lives on a different space")
    ctx.V = compute_V(ctx)
    return ctx


def compute_V(ctx: ModulusContext) -> float:
    """Double sum of Phi(rho/d) under m x m over support pairs.

    Pairs with rho = 0 contribute 0 (including d = 0); d = 0 with rho > 0
    makes V infinite.
    """
    s = ctx.m.support
    rho = ctx.target[np.ix_(s, s)]
    d = ctx.space.dist[np.ix_(s, s)]
    w = ctx.m.weights[s]
    if ((d == 0) & (rho > 0)).any():
        return INF
    ratio = np.divide(rho, d, out=np.zeros_like(rho), where=rho > 0)
    vals = np.asarray(ctx.Phi(ratio), dtype=float)
    vals[rho == 0] = 0.0
    return float(w @ vals @ w)


# ------------------------------------------------------------ step tables ----

def _segments(space):
    b = breakpoints(space)
    return b, np.diff(b)


def _level_values(Phi, V, masses):
    """Phi^{-1}(4V/mass^2) with mass 0 giving +inf (and 0 when V = 0)."""
    masses = np.asarray(masses, dtype=float)
    with np.errstate(divide="ignore"):
        arg = np.where(masses > 0, 4.0 * V / np.square(np.where(masses > 0, masses, 1.0)), INF)
    if V == 0:
        arg = np.where(masses > 0, 0.0, INF)
    return np.asarray(Phi.inverse(arg), dtype=float)


def _prefix(lengths, values):
    # prefix[..., k] = sum_{j<k} len_j * value_j ; inf only where a used value is inf
    with np.errstate(invalid="ignore"):
        terms = lengths * values
    terms = np.where(np.isnan(terms), INF, terms)
    zero = np.zeros(values.shape[:-1] + (1,))
    return np.concatenate([zero, np.cumsum(terms, axis=-1)], axis=-1)


def _tables(ctx: ModulusContext, V):
    key = ("tables", V)
    if key not in ctx._cache:
        b, L = _segments(ctx.space)
        masses = mass_table(ctx.m, b[:-1])                 # (n, segments)
        per_center = _prefix(L, _level_values(ctx.Phi, V, masses))
        hmin = masses.min(axis=0)
        lower = _prefix(L, _level_values(ctx.Phi, V, hmin))
        ctx._cache[key] = (b, per_center, lower)
    return ctx._cache[key]


def _resolve_V(ctx, V):
    V = ctx.V if V is None else float(V)
    if V is None:
        raise ValueError("context has no V; use make_context")
    if V < 0:
        raise ValueError("V must be nonnegative")
    return V


def _index(b, d):
    return int(np.searchsorted(b, d))


def w_distance(ctx: ModulusContext, x1: int, x2: int, V: float | None = None) -> float:
    """6 * int_0^d (Phi^{-1}(4V/m(B(x1,r))^2) + Phi^{-1}(4V/m(B(x2,r))^2)) dr."""
    V = _resolve_V(ctx, V)
    b, P, _ = _tables(ctx, V)
    k = _index(b, ctx.space.dist[x1, x2])
    return float(6.0 * (P[x1, k] + P[x2, k]))


def w_bar_distance(ctx: ModulusContext, x1: int, x2: int, V: float | None = None) -> float:
    """12 * int_0^d Phi^{-1}(4V/h_minus(m,r)^2) dr."""
    V = _resolve_V(ctx, V)
    b, _, H = _tables(ctx, V)
    k = _index(b, ctx.space.dist[x1, x2])
    return float(12.0 * H[k])


def w_matrix(ctx: ModulusContext, V: float | None = None) -> np.ndarray:
    V = _resolve_V(ctx, V)
    b, P, _ = _tables(ctx, V)
    K = np.searchsorted(b, ctx.space.dist)
    rows = np.arange(ctx.space.n)
    Pk = P[rows[:, None], K]
    return 6.0 * (Pk + Pk.T)


def w_bar_matrix(ctx: ModulusContext, V: float | None = None) -> np.ndarray:
    V = _resolve_V(ctx, V)
    b, _, H = _tables(ctx, V)
    return 12.0 * H[np.searchsorted(b, ctx.space.dist)]


def w_bar_sup(space: MetricSpace, m: DiscreteMeasure, Phi: YoungFunction, V_values) -> np.ndarray:
    """sup over pairs of w_bar for each V in ``V_values`` (attained at the diameter)."""
    V_values = np.atleast_1d(np.asarray(V_values, dtype=float))
    b, L = _segments(space)
    if L.size == 0:
        return np.zeros_like(V_values)
    hmin = mass_table(m, b[:-1]).min(axis=0)
    out = np.empty_like(V_values)
    for i, V in enumerate(V_values):
        vals = _level_values(Phi, V, hmin)
        out[i] = 12.0 * _prefix(L, vals)[-1]
    return out


# -------------------------------------------------------- covering bounds ----

def _local_integral(ctx, x, lo, hi, eps, Neps, V, reciprocal, mode, exact_limit, branch_width):
    """int_lo^hi Phi^{-1}(4V * N(x,r,eps)^2 / N(eps)^2) dr as a breakpoint sum."""
    if hi <= lo:
        return 0.0
    b = breakpoints(ctx.space)
    cuts = np.concatenate([[lo], b[(b > lo) & (b < hi)], [hi]])
    total = 0.0
    for left, right in zip(cuts[:-1], cuts[1:]):
        Nloc = 1 if left <= 0 else covering.local_cover_number(
            ctx.space, x, float(left), eps, mode, exact_limit, branch_width)
        ratio = (Neps / Nloc) if reciprocal else (Nloc / Neps)
        total += (right - left) * float(ctx.Phi.inverse(4.0 * V * ratio ** 2))
    return total


@dataclass
class NetBound:
    """Covering-number bounds for 6^{-1} w, scaled back by 6.

    ``value`` is the fixed-epsilon bound; ``infimum`` the infimum over
    epsilon in (0, D) (approached from the left end of each epsilon segment);
    ``liminf_surrogate`` the minimum over the three smallest positive
    breakpoints; ``limit_zero`` the exact epsilon -> 0+ value.
    """

    epsilon: float
    value: float
    infimum: float
    infimum_epsilon: float
    liminf_surrogate: float
    limit_zero: float
    reciprocal: bool


def w_bound_net(ctx: ModulusContext, x1: int, x2: int, epsilon: float, V: float | None = None,
                reciprocal: bool = False, mode: str = "auto", exact_limit: int = EXACT_LIMIT,
                branch_width: int = BRANCH_WIDTH, with_extremes: bool = True) -> NetBound:
    """6 * sum over i of int_eps^d Phi^{-1}(4V N(x_i, r, eps)^2 / N(eps)^2) dr.

    ``reciprocal`` swaps the count ratio to N(eps)/N(x_i, r, eps), the form
    obtained from the net-measure ball mass N(x, r, eps)/N(eps).
    """
    V = _resolve_V(ctx, V)
    space = ctx.space
    d = float(space.dist[x1, x2])
    args = (V, reciprocal, mode, exact_limit, branch_width)

    def at(eps_count, lower):
        Neps = int(covering.cover_numbers_at(space, [eps_count], mode, exact_limit, branch_width)[0])
        parts = [_local_integral(ctx, x, lower, d, eps_count, Neps, *args) for x in (x1, x2)]
        return 6.0 * float(sum(parts))

    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    value = at(epsilon, epsilon)
    if not with_extremes:
        return NetBound(epsilon, value, math.nan, math.nan, math.nan, math.nan, reciprocal)
    b = breakpoints(space)
    D = float(b[-1])
    pos = b[(b > 0) & (b < D)]
    mp = space.min_positive_distance
    rep0 = 0.5 * mp if math.isfinite(mp) else 1.0
    limit_zero = at(rep0, 0.0)
    # eps in [b_j, b_{j+1}): counts fixed, integral smallest as eps -> b_{j+1}-
    best, best_eps = math.inf, math.nan
    lefts = np.concatenate([[0.0], pos])
    rights = np.concatenate([pos, [D]])
    for left, right in zip(lefts, rights):
        rep = rep0 if left == 0 else float(left)
        val = at(rep, float(right))
        if val < best:
            best, best_eps = val, float(right)
    sur = min((at(float(e), float(e)) for e in pos[:3]), default=limit_zero)
    return NetBound(epsilon, value, min(best, value), best_eps if best <= value else epsilon,
                    sur, limit_zero, reciprocal)


def w_bound_wh(ctx: ModulusContext, x1: int, x2: int, C_minus, V: float | None = None,
               mode: str = "auto", exact_limit: int = EXACT_LIMIT,
               branch_width: int = BRANCH_WIDTH) -> float:
    """12 * int_0^d Phi^{-1}(4V N(r)^2 / C_minus^2) dr."""
    C = float(C_minus)
    if not C > 0:
        raise ValueError("C_minus must be positive")
    V = _resolve_V(ctx, V)
    d = float(ctx.space.dist[x1, x2])
    b = breakpoints(ctx.space)
    used = b[b < d]
    if used.size == 0:
        return 0.0
    N = covering.cover_numbers_at(ctx.space, used, mode, exact_limit, branch_width)
    L = np.diff(np.concatenate([used, [d]]))
    vals = np.asarray(ctx.Phi.inverse(4.0 * V * np.square(np.asarray(N, dtype=float)) / C ** 2))
    return float(12.0 * np.sum(L * vals))


# ------------------------------------------------------------------ check ----

@dataclass
class AIReport:
    rho: np.ndarray
    w: np.ndarray
    passed: np.ndarray
    worst_ratio: float
    worst_pair: tuple

    @property
    def ok(self) -> bool:
        return bool(self.passed.all())

    def rows(self):
        n = self.rho.shape[0]
        return [(i, j, float(self.rho[i, j]), float(self.w[i, j]), bool(self.passed[i, j]))
                for i in range(n) for j in range(i + 1, n)]


def check_arnold_imkeller(ctx: ModulusContext) -> AIReport:
    """Compare rho(f(x1), f(x2)) with w(x1, x2; V) over all pairs."""
    if not ctx.minorizing:
        raise ValueError("V is infinite: the measure is not minorizing")
    rho = ctx.target
    w = w_matrix(ctx)
    passed = rho <= w
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rho > 0, rho / w, 0.0)
    iu = np.triu_indices(ctx.space.n, 1)
    if iu[0].size:
        k = int(np.argmax(ratio[iu]))
        worst, pair = float(ratio[iu][k]), (int(iu[0][k]), int(iu[1][k]))
    else:
        worst, pair = 0.0, ()
    return AIReport(rho, w, passed, worst, pair)

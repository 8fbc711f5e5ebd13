"""Random fields on finite index spaces: natural distances, majorizing-measure
functionals, the modulus construction Z / theta / zeta / K, and the chaining
tail bound with a Gaussian Monte-Carlo harness.

X-side integrals are exact breakpoint sums. Expectations over the probability
space are replication averages and carry Monte-Carlo error only.
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from . import covering
from .covering import BRANCH_WIDTH, EXACT_LIMIT
from .grr import w_bar_sup
from .measure import (DiscreteMeasure, ball_masses, mass_table, quasi_ratio,
                      stabilized_uniform_measure)
from .metric_core import MetricSpace, breakpoints, validate
from .orlicz import (ConjugatePair, ExpQuadratic, MGFunction, Phi2, PowerYoung, ScaledYoung,
                     YoungFunction, bphi_norm_estimate, gaussian_luxemburg, luxemburg_columns,
                     young_fenchel)

__all__ = [
    "RandomFieldModel", "SampleMatrix", "gaussian_model", "covariance_matrix", "sample",
    "natural_distance", "gaussian_natural_distance", "gamma_m", "gamma_truncated",
    "bound_chain", "entropy_integral", "quasi_homogeneity", "ZTheta", "build_Z_theta",
    "Zeta", "zeta_distance", "estimate_K", "natural_phi", "empirical_phi", "TailBoundReport",
    "tail_bound", "ClosedForm", "closed_form_bounds", "fit_power_envelope", "mc_verify",
    "DegenerateDistanceError", "ModelError",
]

INF = math.inf
BLOCK = 4096  # rows per RNG stream; fixed so output does not depend on threads


class ModelError(ValueError):
    """Invalid random-field model (e.g. covariance not positive semidefinite)."""


class DegenerateDistanceError(ValueError):
    """A pair with zero natural distance but nonzero increments."""


# ---------------------------------------------------------------- models ----

def covariance_matrix(space: MetricSpace, kind) -> np.ndarray:
    """Covariance from the metric of ``space``.

    ``"ou"``: exp(-d(s,t)); ``"fbm(H)"``: (|s|^2H + |t|^2H - d(s,t)^2H)/2 with
    |s| = d(s, x_0) for the first point x_0; ``"iid"``: identity; an array is
    taken as given.
    """
    d = space.dist
    if not isinstance(kind, str):
        return np.asarray(kind, dtype=float)
    if kind == "ou":
        return np.exp(-d)
    if kind == "iid":
        return np.eye(space.n)
    m = re.fullmatch(r"fbm\(([0-9.eE+-]+)\)", kind)
    if m:
        H = float(m.group(1))
        if not 0 < H < 1:
            raise ModelError(f"Hurst index must lie in (0, 1), got {H}")
        a = d[0] ** (2 * H)
        return 0.5 * (a[:, None] + a[None, :] - d ** (2 * H))
    raise ModelError(f"unknown covariance {kind!r}")


@dataclass(eq=False)
class RandomFieldModel:
    """Gaussian field (mean, covariance) or an external sample source on a space."""

    space: MetricSpace
    kind: str = "gaussian"
    mean: np.ndarray | None = None
    covariance: np.ndarray | None = None
    rng_seed: int = 0
    source: np.ndarray | None = None
    label: str = ""
    _factor: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        n = self.space.n
        if self.kind == "gaussian":
            c = np.asarray(self.covariance, dtype=float)
            if c.shape != (n, n):
                raise ModelError(f"covariance must be {n}x{n}")
            if not np.allclose(c, c.T, rtol=0, atol=1e-12):
                raise ModelError("covariance is not symmetric")
            c = 0.5 * (c + c.T)
            lam, U = np.linalg.eigh(c)
            scale = max(1.0, float(np.abs(lam).max()) if lam.size else 1.0)
            if lam.size and lam.min() < -1e-10 * scale:
                raise ModelError(f"covariance not positive semidefinite (eigenvalue {lam.min():.3g})")
            self.covariance = c
            self._factor = U * np.sqrt(np.clip(lam, 0, None))
            self.mean = np.zeros(n) if self.mean is None else np.asarray(self.mean, dtype=float)
        elif self.kind == "external":
            src = np.asarray(self.source, dtype=float)
            if src.ndim != 2 or src.shape[1] != n:
                raise ModelError(f"external samples must be R x {n}")
            if not np.isfinite(src).all():
                raise ModelError("external samples contain non-finite values")
            self.source = src
        else:
            raise ModelError(f"unknown model kind {self.kind!r}")

    @property
    def variances(self) -> np.ndarray:
        if self.kind == "gaussian":
            return np.diag(self.covariance).copy()
        return self.source.var(axis=0)

    @property
    def sigma_max(self) -> float:
        return float(np.sqrt(self.variances.max()))


def gaussian_model(space: MetricSpace, cov="ou", seed: int = 0, mean=None) -> RandomFieldModel:
    label = cov if isinstance(cov, str) else "matrix"
    return RandomFieldModel(space, "gaussian", mean, covariance_matrix(space, cov), seed,
                            label=label)


@dataclass(eq=False)
class SampleMatrix:
    values: np.ndarray  # R x n
    seed: int
    R: int

    def __post_init__(self):
        if self.R < 1 or self.values.shape[0] != self.R:
            raise ValueError("sample matrix needs R >= 1 rows")
        if not np.isfinite(self.values).all():
            raise ValueError("samples contain non-finite entries")


def sample(model: RandomFieldModel, R: int, threads: int = 1) -> SampleMatrix:
    """R independent draws; block b of 4096 rows uses the stream (seed, b)."""
    if R < 1:
        raise ValueError("R must be positive")
    if model.kind == "external":
        if R > model.source.shape[0]:
            raise ValueError(f"source has only {model.source.shape[0]} rows")
        return SampleMatrix(model.source[:R].copy(), model.rng_seed, R)
    n = model.space.n
    out = np.empty((R, n))
    L = model._factor

    def block(b):
        lo, hi = b * BLOCK, min(R, (b + 1) * BLOCK)
        rng = np.random.default_rng(np.random.SeedSequence([model.rng_seed, b]))
        g = rng.standard_normal((hi - lo, n))
        out[lo:hi] = model.mean + g @ L.T

    nblocks = -(-R // BLOCK)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(block, range(nblocks)))
    else:
        for b in range(nblocks):
            block(b)
    return SampleMatrix(out, model.rng_seed, R)


# ------------------------------------------------------ natural distance ----

def _pairs(n):
    return np.triu_indices(n, 1)


def natural_distance(samples: SampleMatrix, Phi: YoungFunction, normalize: bool = False,
                     chunk: int = 64) -> np.ndarray:
    """Per-pair Luxemburg norm of the increments xi(x1) - xi(x2) across replications."""
    X = samples.values
    n = X.shape[1]
    iu, ju = _pairs(n)
    vals = np.empty(iu.size)
    for s in range(0, iu.size, chunk):
        sl = slice(s, s + chunk)
        vals[sl] = luxemburg_columns(X[:, iu[sl]] - X[:, ju[sl]], Phi)
    D = np.zeros((n, n))
    D[iu, ju] = vals
    D[ju, iu] = vals
    if normalize and D.max() > 0:
        D = D / D.max()
    rep = validate(D, tol=1e-9 * max(1.0, float(D.max())), is_semimetric=True)
    if not rep.ok:
        raise ValueError(f"natural distance is not a semi-metric: {rep.summary()}")
    return D


def gaussian_natural_distance(model: RandomFieldModel, Phi: YoungFunction,
                              normalize: bool = False) -> np.ndarray:
    """Population natural distance of a Gaussian field: Luxemburg norm of N(0, Var(increment))."""
    if model.kind != "gaussian":
        raise ModelError("analytic natural distance needs a Gaussian model")
    c = model.covariance
    var = np.clip(np.diag(c)[:, None] + np.diag(c)[None, :] - 2 * c, 0, None)
    np.fill_diagonal(var, 0.0)
    D = gaussian_luxemburg(np.sqrt(var), Phi)
    D = 0.5 * (D + D.T)
    if normalize and D.max() > 0:
        D = D / D.max()
    return D


def _metric(d) -> MetricSpace:
    if isinstance(d, MetricSpace):
        return d
    d = np.asarray(d, dtype=float)
    return MetricSpace([str(i) for i in range(d.shape[0])], d, is_semimetric=True)


# ------------------------------------------------ majorizing functionals ----

def _mass_rows(m: DiscreteMeasure, space: MetricSpace, radii, exact: bool):
    if m.space.n != space.n:
        raise ValueError("measure and distance have different sizes")
    if exact:
        mm = DiscreteMeasure(space, m.weights, m.exact)
        return [[q for q in ball_masses(mm, r, exact=True)] for r in radii]
    mm = DiscreteMeasure(space, m.weights)
    return mass_table(mm, radii).T.tolist()


def _inv(Phi, arg):
    """Phi^{-1} of a Fraction / float / inf argument."""
    if isinstance(arg, Fraction):
        arg = float(arg)
    return float(Phi.inverse(arg))


def _recip(q):
    if q == 0:
        return INF
    return 1 / q if isinstance(q, Fraction) else 1.0 / q


def _use_exact(m, exact):
    if exact is None:
        return m.exact is not None and m.space.n <= 32
    if exact and m.exact is None:
        raise ValueError("measure has no exact weights")
    return exact


def gamma_m(d, m: DiscreteMeasure, Phi: YoungFunction, exact: bool | None = None) -> float:
    """sup_x int_0^D Phi^{-1}(1 / m(B(x, r))) dr as a breakpoint sum; +inf if some ball has mass 0."""
    space = _metric(d)
    b = breakpoints(space)
    if b.size < 2:
        return 0.0
    L = np.diff(b)
    rows = _mass_rows(m, space, b[:-1], _use_exact(m, exact))
    per = np.zeros(space.n)
    for k, masses in enumerate(rows):
        per += L[k] * np.array([_inv(Phi, _recip(q)) for q in masses])
    return float(per.max())


def gamma_truncated(d, m: DiscreteMeasure, Phi: YoungFunction, deltas) -> np.ndarray:
    """sup_x int_0^delta Phi^{-1}(1 / m(B(x, r))) dr for each delta."""
    space = _metric(d)
    b = breakpoints(space)
    out = []
    rows = np.asarray(_mass_rows(m, space, b, False))  # (len(b), n)
    for delta in np.atleast_1d(deltas):
        cuts = np.concatenate([b[b < delta], [delta]]) if delta > 0 else np.array([0.0])
        L = np.diff(cuts)
        if L.size == 0:
            out.append(0.0)
            continue
        vals = np.where(rows[:L.size] > 0, 1.0 / np.where(rows[:L.size] > 0, rows[:L.size], 1), INF)
        inv = np.asarray(Phi.inverse(vals), dtype=float)
        out.append(float((L[:, None] * inv).sum(axis=0).max()))
    return np.array(out)


def _hmin_args(space, m, exact):
    b = breakpoints(space)
    rows = _mass_rows(m, space, b[:-1], exact)
    return b, [_recip(min(r)) for r in rows]


def entropy_integral(d, Phi: YoungFunction, mode: str = "auto", exact_limit: int = EXACT_LIMIT,
                     branch_width: int = BRANCH_WIDTH) -> float:
    """int_0^D Phi^{-1}(N(r)) dr as a breakpoint sum (N(0) counts zero-distance classes)."""
    space = _metric(d)
    b = breakpoints(space)
    if b.size < 2:
        return 0.0
    N = covering.cover_numbers_at(space, b[:-1], mode, exact_limit, branch_width)
    inv = np.asarray(Phi.inverse(N.astype(float)), dtype=float)
    return float(np.sum(np.diff(b) * inv))


def quasi_homogeneity(m: DiscreteMeasure, d=None):
    """(sup_r h_plus/h_minus, note); the ratio is +inf when some h_minus vanishes."""
    if d is not None:
        space = _metric(d)
        m = DiscreteMeasure(space, m.weights, m.exact)
    q = quasi_ratio(m, exact=m.exact is not None)
    note = ("finite ratio: majorizing-measure and entropy conditions are equivalent here"
            if q != INF else "not quasi-homogeneous")
    return q, note


def bound_chain(d, m: DiscreteMeasure, Phi: YoungFunction, C_minus, epsilons=None,
               reciprocal: bool = False, mode: str = "auto", exact_limit: int = EXACT_LIMIT,
               branch_width: int = BRANCH_WIDTH, exact: bool | None = None) -> dict:
    """gamma_m with its three upper bounds.

    bound_ball_mass = int_0^D Phi^{-1}(1/h_minus(r)) dr;
    bound_net(eps) = int_eps^D Phi^{-1}(N_minus(r, eps)/N(eps)) dr (``reciprocal``
    uses N(eps)/N_minus(r, eps)), with its infimum over eps and the minimum over
    the three smallest positive breakpoints as a liminf surrogate;
    bound_homogeneity = int_0^D Phi^{-1}(N(r)/C_minus) dr.
    """
    space = _metric(d)
    ex = _use_exact(m, exact)
    b = breakpoints(space)
    D = float(b[-1])
    if b.size < 2:
        return {"gamma": 0.0, "bound_ball_mass": 0.0, "bound_net": {}, "bound_net_inf": 0.0,
                "bound_net_liminf_surrogate": 0.0, "bound_homogeneity": 0.0}
    C = Fraction(C_minus) if isinstance(C_minus, (Fraction, int)) and ex else float(C_minus)
    if not C > 0:
        raise ValueError("C_minus must be positive")
    L = np.diff(b)
    gamma = gamma_m(space, m, Phi, ex)
    _, args_ball = _hmin_args(space, m, ex)
    b_ball = float(sum(L[k] * _inv(Phi, a) for k, a in enumerate(args_ball)))
    N = covering.cover_numbers_at(space, b[:-1], mode, exact_limit, branch_width)
    args_hom = [(Fraction(int(x)) / C) if isinstance(C, Fraction) else int(x) / C for x in N]
    b_hom = float(sum(L[k] * _inv(Phi, a) for k, a in enumerate(args_hom)))

    pos = b[(b > 0) & (b < D)]
    eps_list = pos if epsilons is None else np.asarray(epsilons, dtype=float)

    def b_net(eps, lower):
        Ne = int(covering.cover_numbers_at(space, [eps], mode, exact_limit, branch_width)[0])
        cuts = np.concatenate([[lower], b[(b > lower) & (b < D)], [D]])
        tot = 0.0
        for left, right in zip(cuts[:-1], cuts[1:]):
            if left <= 0:
                nl = 1
            else:
                nl = min(covering.local_cover_number(space, x, float(left), eps, mode,
                                                     exact_limit, branch_width)
                         for x in range(space.n))
            ratio = Fraction(Ne, nl) if reciprocal else Fraction(nl, Ne)
            tot += (right - left) * _inv(Phi, ratio)
        return tot

    fixed = {float(e): b_net(float(e), float(e)) for e in eps_list}
    mp = space.min_positive_distance
    rep0 = 0.5 * mp if math.isfinite(mp) else 1.0
    lefts = np.concatenate([[0.0], pos])
    rights = np.concatenate([pos, [D]])
    inf_val = min(b_net(rep0 if lo == 0 else float(lo), float(hi)) for lo, hi in zip(lefts, rights))
    sur = min((b_net(float(e), float(e)) for e in pos[:3]), default=b_net(rep0, 0.0))
    return {"gamma": gamma, "bound_ball_mass": b_ball, "bound_net": fixed, "bound_net_inf": inf_val,
            "bound_net_liminf_surrogate": sur, "bound_homogeneity": b_hom, "reciprocal": reciprocal,
            "exact": ex}


# ------------------------------------------------- Z, theta, zeta and K ----

@dataclass
class ZTheta:
    Z: np.ndarray
    theta: np.ndarray
    mean_Z: float
    se_Z: float
    offdiag_mass: float
    degenerate: bool

    @property
    def z_check(self) -> bool:
        return abs(self.mean_Z - 1.0) <= 4.0 * self.se_Z


def build_Z_theta(samples: SampleMatrix, v, m: DiscreteMeasure, Phi: YoungFunction,
                  chunk: int = 64) -> ZTheta:
    """Per replication Z = sum_{x1 != x2} m m Phi(|xi(x1) - xi(x2)| / v) and theta = sup w_bar(.,.; Z).

    Pairs with v = 0 are skipped when their increments vanish identically.
    """
    X = samples.values
    space = _metric(v)
    V = space.dist
    n = X.shape[1]
    w = m.weights
    iu, ju = _pairs(n)
    keep = (w[iu] > 0) & (w[ju] > 0)
    iu, ju = iu[keep], ju[keep]
    Z = np.zeros(X.shape[0])
    for s in range(0, iu.size, chunk):
        a, c = iu[s:s + chunk], ju[s:s + chunk]
        diff = np.abs(X[:, a] - X[:, c])
        vv = V[a, c]
        zero = vv == 0
        if zero.any():
            if (diff[:, zero] > 0).any():
                k = int(np.flatnonzero(zero)[0])
                raise DegenerateDistanceError(
                    f"pair ({int(a[k])}, {int(c[k])}) has v = 0 but nonzero increments")
            diff, vv, a, c = diff[:, ~zero], vv[~zero], a[~zero], c[~zero]
        with np.errstate(over="ignore"):
            Z += np.asarray(Phi(diff / vv), dtype=float) @ (2.0 * w[a] * w[c])
    theta = w_bar_sup(space, DiscreteMeasure(space, w, m.exact), Phi, Z)
    R = Z.size
    se = float(Z.std(ddof=1) / math.sqrt(R)) if R > 1 else INF
    return ZTheta(Z, theta, float(Z.mean()), se, float(1.0 - np.sum(w ** 2)), bool((Z == 0).all()))


@dataclass
class Zeta:
    zeta: np.ndarray
    Y_grid: np.ndarray
    gamma: np.ndarray
    degenerate: bool
    D: float


def _wbar_prefix(L, hmin, Phi, Y):
    with np.errstate(divide="ignore"):
        arg = np.where(hmin > 0, 4.0 * Y / np.square(np.where(hmin > 0, hmin, 1.0)), INF)
    vals = np.asarray(Phi.inverse(arg), dtype=float)
    return 12.0 * np.concatenate([[0.0], np.cumsum(L * vals)])


def zeta_distance(v, m: DiscreteMeasure, Phi: YoungFunction, Y_grid=None) -> Zeta:
    """zeta(x1, x2) = sup_Y w_bar(x1, x2; Y) / gamma(Y), gamma(Y) = sup pairs w_bar(.,.; Y).

    The sup is a maximum over a log grid followed by a bounded scalar
    refinement around the grid argmax; w_bar depends on the pair only through
    its distance, so the work is per distinct distance.
    """
    space = _metric(v)
    if Y_grid is None:
        Y_grid = np.logspace(-6, 6, 121)
    Y_grid = np.asarray(Y_grid, dtype=float)
    if (Y_grid <= 0).any():
        raise ValueError("Y grid must be positive")
    b = breakpoints(space)
    n = space.n
    if b.size < 2:
        return Zeta(np.zeros((n, n)), Y_grid, np.zeros_like(Y_grid), True, 0.0)
    L = np.diff(b)
    hmin = mass_table(DiscreteMeasure(space, m.weights), b[:-1]).min(axis=0)
    P = np.array([_wbar_prefix(L, hmin, Phi, Y) for Y in Y_grid])  # (len(Y), len(b))
    gam = P[:, -1]
    if not (gam > 0).all():
        return Zeta(np.zeros((n, n)), Y_grid, gam, True, 0.0)
    ratio = P / gam[:, None]
    best = ratio.max(axis=0)
    arg = ratio.argmax(axis=0)
    lo_log, hi_log = math.log(Y_grid[0]), math.log(Y_grid[-1])
    step = (hi_log - lo_log) / max(1, Y_grid.size - 1)
    for k in range(1, b.size - 1):
        c = math.log(Y_grid[arg[k]])
        lo, hi = max(lo_log, c - step), min(hi_log, c + step)
        if hi <= lo:
            continue

        def neg(t, k=k):
            p = _wbar_prefix(L, hmin, Phi, math.exp(t))
            return -p[k] / p[-1] if p[-1] > 0 else 0.0

        res = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-6})
        best[k] = min(1.0, max(best[k], -float(res.fun)))
    best[0] = 0.0
    best[-1] = 1.0
    zeta = best[np.searchsorted(b, space.dist)]
    return Zeta(zeta, Y_grid, gam, False, float(zeta.max()))


def natural_phi(model: RandomFieldModel, lam_grid=None) -> MGFunction:
    """Log of the largest MGF over the index points: analytic for Gaussian fields."""
    if model.kind == "gaussian":
        return MGFunction.quadratic(model.variances.max() / 2.0)
    return empirical_phi(model.source, lam_grid)


def empirical_phi(values, lam_grid=None, min_ess: float = 100.0) -> MGFunction:
    """Empirical phi(lambda) = log max_x mean exp(lambda xi(x)) (centered columns).

    The grid stops where the effective sample size of the exponential weights
    drops below ``min_ess``; that point becomes lambda0.
    """
    X = np.asarray(values, dtype=float)
    X = X - X.mean(axis=0)
    s = X.std(axis=0).max()
    if s == 0:
        raise ModelError("degenerate samples: zero variance")
    if lam_grid is None:
        lam_grid = np.linspace(0, 20.0 / s, 201)
    lam_grid = np.asarray(lam_grid, dtype=float)
    vals, top = [0.0], lam_grid[-1]
    for lam in lam_grid[1:]:
        e = lam * X
        e = e - e.max(axis=0)
        w = np.exp(e)
        ess = (w.sum(axis=0) ** 2 / (w ** 2).sum(axis=0)).min()
        if ess < min_ess:
            top = lam
            break
        vals.append(float(np.max(np.log(np.mean(np.exp(lam * X), axis=0)))))
    grid = lam_grid[:len(vals)]
    vals = np.maximum.accumulate(np.array(vals))

    def phi(lam):
        lam = np.abs(np.asarray(lam, dtype=float))
        with np.errstate(over="ignore"):
            slope = (vals[-1] - vals[-2]) / (grid[-1] - grid[-2]) if grid.size > 1 else 0.0
            return np.where(lam <= grid[-1], np.interp(lam, grid, vals),
                            vals[-1] + slope * (lam - grid[-1]))

    return MGFunction(phi, lambda0=float(top), validate=False)


def estimate_K(theta, phi: MGFunction, p_grid=None) -> float:
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        raise ValueError("no theta samples")
    return bphi_norm_estimate(theta, phi, p_grid)


# -------------------------------------------------------------- tail bound ----

@dataclass
class TailBoundReport:
    u_grid: np.ndarray
    bound: np.ndarray
    bound_abs: np.ndarray
    delta_star: np.ndarray
    K: float
    D_zeta: float
    closed_forms: dict = field(default_factory=dict)
    empirical: np.ndarray | None = None
    se: np.ndarray | None = None
    dominated: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    HEADER = ("u", "bound", "bound_abs", "delta_star", "empirical", "se", "dominated")

    def rows(self):
        out = []
        for i, u in enumerate(self.u_grid):
            emp = self.empirical[i] if self.empirical is not None else math.nan
            se = self.se[i] if self.se is not None else math.nan
            dom = bool(self.dominated[i]) if self.dominated is not None else ""
            out.append((float(u), float(self.bound[i]), float(self.bound_abs[i]),
                        float(self.delta_star[i]), float(emp), float(se), dom))
        return out


def _phi_star_values(phi_star, u):
    if isinstance(phi_star, ConjugatePair):
        return np.asarray(phi_star(u), dtype=float)
    return np.asarray([float(phi_star(x)) for x in np.atleast_1d(u)])


def tail_bound(zeta, K: float, phi_star, u_grid, mode: str = "auto",
               exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH) -> TailBoundReport:
    """min over delta of N(zeta, delta) * exp(-phi*(u / (1 + K delta))), capped at 1.

    delta runs over the limit delta -> 0+ and every positive zeta breakpoint
    below the zeta-diameter; on each step of N the exponent is best at the
    left end, so this is the exact infimum. ``bound_abs`` is twice ``bound``.
    """
    if K < 0 or not math.isfinite(K):
        raise ValueError(f"K must be finite and nonnegative, got {K}")
    if isinstance(zeta, Zeta):
        zeta = zeta.zeta
    space = _metric(zeta)
    b = breakpoints(space)
    D = float(b[-1])
    deltas = np.concatenate([[0.0], b[(b > 0) & (b < D)]])
    N = covering.cover_numbers_at(space, deltas, mode, exact_limit, branch_width).astype(float)
    u = np.asarray(u_grid, dtype=float)
    bound = np.empty_like(u)
    dstar = np.empty_like(u)
    for i, uu in enumerate(u):
        ps = _phi_star_values(phi_star, uu / (1.0 + K * deltas))
        vals = N * np.exp(-ps)
        k = int(np.argmin(vals))
        bound[i], dstar[i] = min(1.0, float(vals[k])), deltas[k]
    return TailBoundReport(u, bound, 2.0 * bound, dstar, float(K), D)


# ----------------------------------------------------------- closed forms ----

@dataclass
class ClosedForm:
    name: str
    u: np.ndarray
    values: np.ndarray
    valid: np.ndarray
    delta0: np.ndarray | None = None
    params: dict = field(default_factory=dict)


def _check_log_convex(Phi, u):
    g = np.log(np.asarray(Phi(u), dtype=float))
    second = g[2:] - 2 * g[1:-1] + g[:-2]
    return bool((second > 0).all())


def closed_form_bounds(kind: str, u_grid, **p) -> ClosedForm:
    """Closed-form tail curves.

    ``"log_convex"``: (1-gamma)^{-1}/Phi(u) * N(C gamma / (u (log Phi)'(u))), needs
    Phi, gamma in (0,1), C > 0, cover callable N and D_zeta.
    ``"power_dimension"``: C3 C2^-kappa kappa^-kappa (kappa+1)^(kappa+1) u^(2 kappa) e^(-u^2/2)
    with validity delta0 = C2 kappa / ((kappa+1) u^2) <= D_zeta.
    ``"entropy_series"``: exp(-u^2/2 + C6 u^(2 beta/(beta+1))) for u >= C7.
    """
    u = np.asarray(u_grid, dtype=float)
    if kind == "log_convex":
        Phi, g, C = p["Phi"], float(p["gamma"]), float(p["C"])
        if not 0 < g < 1 or not C > 0:
            raise ValueError("need gamma in (0,1) and C > 0")
        grid = np.linspace(max(1e-3, u.min() / 2), u.max() * 2, 64)
        if not _check_log_convex(Phi, grid):
            raise ValueError("Phi is not log-convex on the checked grid")
        d0 = C * g / (u * np.asarray(Phi.log_derivative(u), dtype=float))
        Dz = float(p.get("D_zeta", INF))
        Nf = p["N"]
        vals = np.array([(1 / (1 - g)) / float(Phi(x)) * Nf(d) for x, d in zip(u, d0)])
        return ClosedForm(kind, u, vals, d0 < Dz, d0, {"gamma": g, "C": C})
    if kind == "power_dimension":
        k, C2, C3 = float(p["kappa"]), float(p["C2"]), float(p["C3"])
        if not (k > 0 and C2 > 0 and C3 > 0):
            raise ValueError("kappa, C2, C3 must be positive")
        d0 = C2 * k / ((k + 1) * u ** 2)
        vals = C3 * C2 ** -k * k ** -k * (k + 1) ** (k + 1) * u ** (2 * k) * np.exp(-u ** 2 / 2)
        Dz = float(p.get("D_zeta", INF))
        return ClosedForm(kind, u, vals, d0 <= Dz, d0, {"kappa": k, "C2": C2, "C3": C3})
    if kind == "entropy_series":
        beta, C6, C7 = float(p["beta"]), float(p.get("C6", 0.0)), float(p.get("C7", 0.0))
        if not beta > 0:
            raise ValueError("beta must be positive")
        vals = np.exp(-0.5 * u ** 2 + C6 * u ** (2 * beta / (beta + 1)))
        return ClosedForm(kind, u, vals, u >= C7, None, {"beta": beta, "C6": C6, "C7": C7})
    raise ValueError(f"unknown closed form {kind!r}")


def fit_power_envelope(zeta, K: float, mode: str = "auto") -> dict:
    """Fit N(zeta, eps) <= C3 eps^-kappa on (0, D_zeta) and set C2 = 1/K.

    kappa is the least-squares slope of log N against -log eps over the
    positive breakpoints; C3 is the smallest constant making the envelope hold
    on every step of N (each step's supremum sits at its right end).
    """
    if isinstance(zeta, Zeta):
        zeta = zeta.zeta
    space = _metric(zeta)
    b = breakpoints(space)
    D = float(b[-1])
    pos = b[(b > 0) & (b < D)]
    N0 = covering.cover_numbers_at(space, [0.0], mode)[0]
    Np = covering.cover_numbers_at(space, pos, mode) if pos.size else np.array([], dtype=int)
    kappa = 1.0
    if pos.size >= 2:
        slope = np.polyfit(-np.log(pos), np.log(Np.astype(float)), 1)[0]
        if slope > 0:
            kappa = float(slope)
    rights = np.concatenate([pos, [D]])
    steps = np.concatenate([[N0], Np]).astype(float)
    C3 = float(np.max(steps * rights ** kappa)) if D > 0 else float(N0)
    return {"kappa": kappa, "C3": C3, "C2": (1.0 / K) if K > 0 else INF, "D_zeta": D}


# ---------------------------------------------------------------- harness ----

def _default_Phi(model):
    s = model.sigma_max
    return Phi2 if s == 1.0 else ScaledYoung(Phi2, s)


def mc_verify(model: RandomFieldModel, u_grid, R: int, Phi: YoungFunction | None = None,
              phi: MGFunction | None = None, natural: str = "analytic", Y_grid=None,
              mode: str = "auto", threads: int = 1, p_grid=None) -> TailBoundReport:
    """Samples -> natural distance -> uniform measure -> Z, theta -> zeta, K -> tail bound,
    compared with the empirical tail of max_x xi(x).

    ``natural="analytic"`` uses the population natural distance of the
    Gaussian model (so the E Z = 1 check is not satisfied by construction);
    ``"empirical"`` uses per-pair Luxemburg norms of the samples.
    """
    u = np.asarray(u_grid, dtype=float)
    S = sample(model, R, threads)
    Phi = _default_Phi(model) if Phi is None else Phi
    phi = natural_phi(model) if phi is None else phi
    if natural == "analytic" and model.kind == "gaussian":
        v = gaussian_natural_distance(model, Phi)
    elif natural in ("analytic", "empirical"):
        v = natural_distance(S, Phi)
    else:
        raise ValueError(f"unknown natural distance mode {natural!r}")
    vspace = _metric(v)
    m = stabilized_uniform_measure(vspace)
    zt = build_Z_theta(S, vspace, m, Phi)
    zeta = zeta_distance(vspace, m, Phi, Y_grid)
    K = estimate_K(zt.theta, phi, p_grid)
    star = young_fenchel(phi, u)
    rep = tail_bound(zeta, K, star, u, mode)
    top = S.values.max(axis=1)
    q = np.array([np.mean(top > x) for x in u])
    se = np.sqrt(q * (1 - q) / R)
    rep.empirical, rep.se = q, se
    rep.dominated = rep.bound >= q - 3 * se
    if K > 0 and model.kind == "gaussian" and not zeta.degenerate:
        fit = fit_power_envelope(zeta, K, mode)
        s = model.sigma_max
        cf = closed_form_bounds("power_dimension", u / s, kappa=fit["kappa"], C2=fit["C2"],
                                C3=fit["C3"], D_zeta=fit["D_zeta"])
        cf.u = u
        cf.params.update(fit)
        rep.closed_forms["power_dimension"] = cf
        rep.diagnostics["power_dimension_dominated"] = bool(
            np.all((cf.values >= q - 3 * se) | ~cf.valid))
    rep.diagnostics.update({"mean_Z": zt.mean_Z, "se_Z": zt.se_Z, "offdiag_mass": zt.offdiag_mass,
                            "z_check": zt.z_check, "theta_mean": float(zt.theta.mean()),
                            "R": R, "seed": model.rng_seed, "n": model.space.n})
    return rep

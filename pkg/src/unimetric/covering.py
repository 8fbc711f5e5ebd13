"""Covering numbers, packing numbers, entropy and epsilon-nets on finite spaces.

Centers are always points of the space. Exact solvers are branch-and-bound
over Python-int bitmasks; they are meant for desk-scale spaces (a few dozen
points). The greedy constructions give valid covers/packings of any size.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .metric_core import MetricSpace, breakpoints, chebyshev_center

__all__ = [
    "CapabilityError", "NetResult", "CoverProfile", "greedy_net", "exact_net",
    "cover_number", "pack_number", "local_cover_number", "local_pack_number",
    "local_extremes", "cover_profile", "cover_numbers_at", "MODES",
]

MODES = ("exact", "greedy", "auto")
EXACT_LIMIT = 24
BRANCH_WIDTH = 3


class CapabilityError(RuntimeError):
    """The exact solver was asked for a problem above its configured size."""


@dataclass
class NetResult:
    epsilon: float
    centers: list
    assignment: dict
    exact: bool

    @property
    def size(self) -> int:
        return len(self.centers)


@dataclass
class CoverProfile:
    r: np.ndarray
    N: np.ndarray
    M: np.ndarray
    exact: bool
    entries: list = field(init=False)

    def __post_init__(self):
        self.entries = list(zip(self.r.tolist(), self.N.tolist(), self.M.tolist()))

    @property
    def H(self) -> np.ndarray:
        return np.log(self.N)


def _check_eps(epsilon):
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _masks(dist: np.ndarray, eps: float) -> list[int]:
    inside = dist <= eps
    weights = [1 << j for j in range(dist.shape[0])]
    return [sum(w for w, b in zip(weights, row) if b) for row in inside.tolist()]


# ---------------------------------------------------------------- greedy ----

def _fps(dist: np.ndarray, eps: float) -> list[int]:
    """Farthest-point traversal seeded at index 0; lowest index wins ties."""
    n = dist.shape[0]
    if n == 0:
        return []
    centers = [0]
    near = dist[0].copy()
    while True:
        far = int(np.argmax(near))
        if near[far] <= eps:
            return centers
        centers.append(far)
        near = np.minimum(near, dist[far])


def _greedy_centers(dist: np.ndarray, eps: float) -> list[int]:
    ecc = dist.max(axis=1)
    if (ecc <= eps).any():
        return [int(np.flatnonzero(ecc <= eps)[0])]
    return _fps(dist, eps)


def _assign(dist: np.ndarray, centers: list[int]) -> dict:
    sub = dist[:, centers]
    pick = np.argmin(sub, axis=1)
    return {i: centers[int(k)] for i, k in enumerate(pick)}


def _greedy_setcover(masks: list[int], full: int) -> int:
    unc, count = full, 0
    while unc:
        best = max(masks, key=lambda m: (m & unc).bit_count())
        unc &= ~best
        count += 1
    return count


def greedy_net(space: MetricSpace, epsilon: float, certify: bool = False,
               exact_limit: int = EXACT_LIMIT) -> NetResult:
    """Farthest-point epsilon-net; its size upper-bounds N(epsilon).

    When epsilon reaches the Chebyshev radius the net is the Chebyshev center.

    ``exact`` is True when the net has one center, or when ``certify`` is set
    and the exact solver confirms the cardinality is minimal.
    """
    _check_eps(epsilon)
    centers = _greedy_centers(space.dist, epsilon)
    exact = len(centers) == 1
    if certify and not exact:
        exact = cover_number(space, epsilon, "exact", exact_limit=exact_limit) == len(centers)
    return NetResult(float(epsilon), centers, _assign(space.dist, centers), exact)


# ----------------------------------------------------------------- exact ----

def _trivial_cover(dist: np.ndarray, eps: float):
    """Centers for the two regimes needing no search, else None."""
    n = dist.shape[0]
    ecc = dist.max(axis=1)
    if (ecc <= eps).any():
        return [int(np.flatnonzero(ecc <= eps)[0])]
    off = dist[~np.eye(n, dtype=bool)]
    pos = off[off > 0]
    if pos.size == 0 or eps < pos.min():
        # balls are the zero-distance classes; lowest index represents each
        reps, seen = [], np.zeros(n, dtype=bool)
        for i in range(n):
            if not seen[i]:
                reps.append(i)
                seen |= dist[i] == 0
        return reps
    return None


def _min_cover_size(masks: list[int], full: int, incumbent: int) -> int:
    # drop dominated columns, keeping the lowest index among duplicates
    cols = []
    for i, m in enumerate(masks):
        dominated = any((m | o) == o and (o != m or j < i) for j, o in enumerate(masks) if j != i)
        if not dominated:
            cols.append(m)
    nbits = full.bit_length()
    covering = [[c for c in cols if c >> e & 1] for e in range(nbits)]
    best = incumbent

    def rec(unc: int, cnt: int):
        nonlocal best
        if unc == 0:
            best = cnt
            return
        if cnt + 1 >= best:
            return
        gain = max((c & unc).bit_count() for c in cols)
        if cnt + -(-unc.bit_count() // gain) >= best:
            return
        e, opts = None, None
        rest = unc
        while rest:
            low = rest & -rest
            k = low.bit_length() - 1
            if opts is None or len(covering[k]) < len(opts):
                e, opts = k, covering[k]
            rest ^= low
        for c in sorted(opts, key=lambda c: -(c & unc).bit_count()):
            rec(unc & ~c, cnt + 1)
            if cnt + 1 >= best:
                return

    rec(full, 0)
    return best


def _lex_cover(masks: list[int], full: int, k: int) -> list[int] | None:
    """Lexicographically smallest sorted center list of size <= k covering full."""
    n = len(masks)
    suf = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suf[i] = suf[i + 1] | masks[i]

    def rec(start: int, unc: int, rem: int):
        if unc == 0:
            return []
        if rem == 0 or (suf[start] & unc) != unc:
            return None
        gain = max((m & unc).bit_count() for m in masks[start:])
        if rem * gain < unc.bit_count():
            return None
        for c in range(start, n):
            if (suf[c] & unc) != unc:
                return None
            if masks[c] & unc == 0:
                continue
            sub = rec(c + 1, unc & ~masks[c], rem - 1)
            if sub is not None:
                return [c] + sub
        return None

    return rec(0, full, k)


def _exact_allowed(n, greedy_size, exact_limit, branch_width):
    if n > exact_limit and greedy_size > branch_width:
        raise CapabilityError(
            f"exact solver limited to n <= {exact_limit} points (or greedy bound <= "
            f"{branch_width}); got n = {n}, greedy bound = {greedy_size}")


def _exact_cover_size(dist, eps, exact_limit, branch_width):
    triv = _trivial_cover(dist, eps)
    if triv is not None:
        return len(triv)
    n = dist.shape[0]
    masks = _masks(dist, eps)
    full = (1 << n) - 1
    upper = min(len(_greedy_centers(dist, eps)), _greedy_setcover(masks, full))
    _exact_allowed(n, upper, exact_limit, branch_width)
    return _min_cover_size(masks, full, upper)


def exact_net(space: MetricSpace, epsilon: float, exact_limit: int = EXACT_LIMIT,
              branch_width: int = BRANCH_WIDTH) -> NetResult:
    """Minimum epsilon-net; the lexicographically smallest among optimal ones."""
    _check_eps(epsilon)
    d = space.dist
    centers = _trivial_cover(d, epsilon)
    if centers is None:
        k = _exact_cover_size(d, epsilon, exact_limit, branch_width)
        centers = _lex_cover(_masks(d, epsilon), (1 << space.n) - 1, k)
    return NetResult(float(epsilon), centers, _assign(d, centers), True)


def _resolve(mode, n, exact_limit):
    _check_mode(mode)
    if mode == "auto":
        return "exact" if n <= exact_limit else "greedy"
    return mode


def _cover_dist(dist, eps, mode, exact_limit, branch_width):
    if mode == "exact":
        return _exact_cover_size(dist, eps, exact_limit, branch_width)
    return len(_greedy_centers(dist, eps))


def cover_number(space: MetricSpace, epsilon: float, mode: str = "exact",
                 exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH) -> int:
    """N(epsilon): fewest closed epsilon-balls centered in the space covering it.

    ``mode='greedy'`` returns the farthest-point net size (an upper bound);
    ``'auto'`` is exact up to ``exact_limit`` points.
    """
    _check_eps(epsilon)
    mode = _resolve(mode, space.n, exact_limit)
    return _cover_dist(space.dist, epsilon, mode, exact_limit, branch_width)


def _max_packing(masks: list[int], incumbent: int) -> int:
    n = len(masks)
    conf = [sum(1 << j for j in range(n) if masks[i] & masks[j]) for i in range(n)]
    best = incumbent

    def rec(cand: int, size: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        # branch on the most constrained vertex first
        v, deg = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            k = low.bit_length() - 1
            dk = (conf[k] & cand).bit_count()
            if dk > deg:
                v, deg = k, dk
            rest ^= low
        if deg == 1:
            best = max(best, size + cand.bit_count())
            return
        rec(cand & ~conf[v], size + 1)
        rec(cand & ~(1 << v), size)

    rec((1 << n) - 1, 0)
    return best


def _greedy_packing(masks: list[int]) -> int:
    used, count = 0, 0
    for m in masks:
        if m & used == 0:
            used |= m
            count += 1
    return count


def _pack_dist(dist, eps, mode, exact_limit, branch_width):
    masks = _masks(dist, eps)
    greedy = _greedy_packing(masks)
    if mode == "greedy":
        return greedy
    n = dist.shape[0]
    if n > exact_limit:
        raise CapabilityError(f"exact packing limited to n <= {exact_limit} points; got n = {n}")
    return _max_packing(masks, greedy)


def pack_number(space: MetricSpace, epsilon: float, mode: str = "exact",
                exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH) -> int:
    """M(epsilon): most closed epsilon-balls with pairwise disjoint point sets.

    Greedy mode takes balls by ascending center index, a lower bound.
    """
    _check_eps(epsilon)
    mode = _resolve(mode, space.n, exact_limit)
    return _pack_dist(space.dist, epsilon, mode, exact_limit, branch_width)


# ----------------------------------------------------------------- local ----

def _local(space, x, delta, epsilon, mode, exact_limit, branch_width, kind):
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    _check_eps(epsilon)
    if epsilon >= delta:
        return 1
    members = space.ball(x, delta)
    mode = _resolve(mode, members.size, exact_limit)
    key = (kind, members.tobytes(), float(epsilon), mode)
    cache = space._cache.setdefault("local", {})
    if key not in cache:
        sub = space.dist[np.ix_(members, members)]
        fn = _cover_dist if kind == "N" else _pack_dist
        cache[key] = fn(sub, epsilon, mode, exact_limit, branch_width)
    return cache[key]


def local_cover_number(space: MetricSpace, x: int, delta: float, epsilon: float,
                       mode: str = "exact", exact_limit: int = EXACT_LIMIT,
                       branch_width: int = BRANCH_WIDTH) -> int:
    """N(x; delta, epsilon): covering number of the subspace B(x, delta)."""
    return _local(space, x, delta, epsilon, mode, exact_limit, branch_width, "N")


def local_pack_number(space: MetricSpace, x: int, delta: float, epsilon: float,
                      mode: str = "exact", exact_limit: int = EXACT_LIMIT,
                      branch_width: int = BRANCH_WIDTH) -> int:
    """M(x; delta, epsilon): packing number of the subspace B(x, delta)."""
    return _local(space, x, delta, epsilon, mode, exact_limit, branch_width, "M")


def local_extremes(space: MetricSpace, delta: float, epsilon: float, mode: str = "exact",
                   exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH):
    """(N_minus, N_plus, M_minus, M_plus) over all centers x."""
    N = [local_cover_number(space, x, delta, epsilon, mode, exact_limit, branch_width)
         for x in range(space.n)]
    M = [local_pack_number(space, x, delta, epsilon, mode, exact_limit, branch_width)
         for x in range(space.n)]
    return min(N), max(N), min(M), max(M)


# --------------------------------------------------------------- profile ----

def cover_numbers_at(space: MetricSpace, radii, mode: str = "exact",
                     exact_limit: int = EXACT_LIMIT, branch_width: int = BRANCH_WIDTH,
                     threads: int = 1) -> np.ndarray:
    """N(r) for each radius; r = 0 counts the zero-distance classes."""
    mode = _resolve(mode, space.n, exact_limit)
    cache = space._cache.setdefault("N", {})

    def one(r):
        r = float(r)
        key = (r, mode)
        if key not in cache:
            if r <= 0:
                cache[key] = len(_trivial_cover(space.dist, 0.0) if r == 0 else [])
            else:
                cache[key] = _cover_dist(space.dist, r, mode, exact_limit, branch_width)
        return cache[key]

    radii = np.asarray(radii, dtype=float)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return np.array(list(pool.map(one, radii)), dtype=int)
    return np.array([one(r) for r in radii], dtype=int)


def cover_profile(space: MetricSpace, mode: str = "exact", exact_limit: int = EXACT_LIMIT,
                  branch_width: int = BRANCH_WIDTH, threads: int = 1) -> CoverProfile:
    """N(r) and M(r) at every positive breakpoint r."""
    resolved = _resolve(mode, space.n, exact_limit)
    r = breakpoints(space)
    r = r[r > 0]
    N = cover_numbers_at(space, r, resolved, exact_limit, branch_width, threads)
    M = np.array([_pack_dist(space.dist, x, resolved, exact_limit, branch_width) for x in r],
                 dtype=int)
    if space.n == 1:
        r, N, M = np.array([0.0]), np.array([1]), np.array([1])
    return CoverProfile(r, N, M, resolved == "exact")


def entropy(space: MetricSpace, epsilon: float, mode: str = "exact", **kw) -> float:
    """Metric entropy H = ln N(epsilon)."""
    return math.log(cover_number(space, epsilon, mode, **kw))

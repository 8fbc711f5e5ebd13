"""Finite (semi-)metric spaces: construction, validation and basic geometry."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "MetricSpace", "Violation", "ValidationReport", "StructuralError",
    "AxiomError", "validate", "diameter", "chebyshev_center", "breakpoints",
    "grid_space", "cycle_space", "matrix_space", "cloud_space", "make_space",
    "subspace",
]


class StructuralError(ValueError):
    """Distance data that cannot be a matrix of a finite space."""


class AxiomError(ValueError):
    """Distance entries that are not admissible real values."""


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """A finite point set with a dense symmetric distance matrix.

    ``is_semimetric`` allows distinct points at distance zero. Instances are
    immutable; derived geometry (sorted neighbour lists, breakpoints) is cached
    lazily on first use.
    """

    labels: tuple
    dist: np.ndarray
    is_semimetric: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise StructuralError(f"distance matrix must be square, got shape {d.shape}")
        if len(self.labels) != d.shape[0]:
            raise StructuralError(
                f"{len(self.labels)} labels for a {d.shape[0]}x{d.shape[0]} matrix")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    @cached_property
    def neighbour_order(self) -> np.ndarray:
        # stable sort keeps lowest index first among equal distances
        return np.argsort(self.dist, axis=1, kind="stable")

    @cached_property
    def sorted_dist(self) -> np.ndarray:
        return np.take_along_axis(self.dist, self.neighbour_order, axis=1)

    @cached_property
    def min_positive_distance(self) -> float:
        off = self.dist[~np.eye(self.n, dtype=bool)]
        pos = off[off > 0]
        return float(pos.min()) if pos.size else np.inf

    def ball(self, x: int, r: float) -> np.ndarray:
        """Indices of the closed ball B(x, r), ascending."""
        return np.flatnonzero(self.dist[x] <= r)

    def ball_sizes(self, r: float) -> np.ndarray:
        return np.array([np.searchsorted(row, r, side="right") for row in self.sorted_dist])


@dataclass
class Violation:
    axiom: str
    indices: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "no violations"
        return "; ".join(f"{v.axiom} at {v.indices}: {v.detail}" for v in self.violations)


def validate(space: MetricSpace | np.ndarray, tol: float = 1e-9,
             triangle: bool = True, is_semimetric: bool | None = None) -> ValidationReport:
    """Check the (semi-)metric axioms and return every violation found.

    Symmetry, zero diagonal and nonnegativity are checked exactly; the triangle
    inequality within ``tol``. NaN entries raise :class:`AxiomError`.
    """
    if isinstance(space, MetricSpace):
        d = space.dist
        semi = space.is_semimetric if is_semimetric is None else is_semimetric
    else:
        d = np.asarray(space, dtype=float)
        semi = bool(is_semimetric)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise StructuralError(f"distance matrix must be square, got shape {d.shape}")
    if np.isnan(d).any():
        i, j = map(int, np.argwhere(np.isnan(d))[0])
        raise AxiomError(f"NaN distance at ({i}, {j})")
    n = d.shape[0]
    out = []
    for i in np.flatnonzero(np.diag(d) != 0):
        out.append(Violation("zero_diagonal", (int(i), int(i)), f"d={float(d[i, i])!r}"))
    for i, j in np.argwhere(d < 0):
        out.append(Violation("nonnegativity", (int(i), int(j)), f"d={float(d[i, j])!r}"))
    for i, j in np.argwhere(np.triu(d != d.T, 1)):
        out.append(Violation("symmetry", (int(i), int(j)),
                             f"d[i,j]={float(d[i, j])!r} != d[j,i]={float(d[j, i])!r}"))
    if not semi:
        zero = np.triu((d == 0) & ~np.eye(n, dtype=bool), 1)
        for i, j in np.argwhere(zero):
            out.append(Violation("identity", (int(i), int(j)),
                                 "distinct points at distance 0 (set is_semimetric)"))
    if triangle and n > 2:
        # d[i,k] - min_j (d[i,j] + d[j,k]) computed one middle point at a time
        worst = np.full((n, n), -np.inf)
        arg = np.zeros((n, n), dtype=int)
        for j in range(n):
            excess = d - (d[:, j][:, None] + d[j, :][None, :])
            better = excess > worst
            worst = np.where(better, excess, worst)
            arg = np.where(better, j, arg)
        for i, k in np.argwhere(worst > tol):
            if i < k or d[i, k] != d[k, i]:
                j = int(arg[i, k])
                out.append(Violation("triangle", (int(i), j, int(k)),
                                     f"d[i,k]={float(d[i, k])!r} > d[i,j]+d[j,k]={float(d[i, j] + d[j, k])!r}"))
    return ValidationReport(out)


def diameter(space: MetricSpace) -> float:
    if space.n == 0:
        raise ValueError("empty space has no diameter")
    return float(space.dist.max())


def chebyshev_center(space: MetricSpace) -> tuple[int, float]:
    """Index minimising the eccentricity max_y d(x, y), and that radius.

    The radius can exceed diameter/2 (three equidistant points give radius = D).
    """
    if space.n == 0:
        raise ValueError("empty space has no center")
    ecc = space.dist.max(axis=1)
    i = int(np.argmin(ecc))
    return i, float(ecc[i])


def breakpoints(space: MetricSpace) -> np.ndarray:
    """Sorted distinct distances bracketed by 0 and the diameter.

    Ball masses and covering numbers are constant on each [b_k, b_{k+1}).
    """
    cached = space._cache.get("breakpoints")
    if cached is None:
        vals = np.unique(space.dist)
        if vals.size == 0 or vals[0] != 0.0:
            vals = np.concatenate([[0.0], vals])
        cached = vals
        cached.setflags(write=False)
        space._cache["breakpoints"] = cached
    return cached


def _check_holder(alpha: float, c: float):
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not c > 0:
        raise ValueError(f"scale c must be positive, got {c}")


def grid_space(l: int, points: int, alpha: float = 1.0, c: float = 1.0) -> MetricSpace:
    """Uniform grid on [0,1]^l with metric c*|x-y|^alpha, row-major order.

    Distances are computed from integer index offsets so equal geometric
    distances compare exactly equal.
    """
    _check_holder(alpha, c)
    if l < 1 or points < 1:
        raise ValueError("grid needs l >= 1 and points >= 1")
    idx = np.array(np.meshgrid(*[np.arange(points)] * l, indexing="ij")).reshape(l, -1).T
    h = 1.0 / (points - 1) if points > 1 else 0.0
    k = ((idx[:, None, :] - idx[None, :, :]) ** 2).sum(-1)
    euclid = h * np.sqrt(k)
    d = c * euclid if alpha == 1 else c * euclid ** alpha
    if l == 1:
        labels = [f"{i * h:g}" for i in range(points)]
    else:
        labels = ["_".join(map(str, row)) for row in idx]
    return MetricSpace(labels, d)


def cycle_space(n: int) -> MetricSpace:
    """Cycle graph Z_n with shortest-path distance."""
    if n < 1:
        raise ValueError(f"cycle needs n >= 1, got {n}")
    i = np.arange(n)
    diff = np.abs(i[:, None] - i[None, :])
    return MetricSpace([str(v) for v in range(n)], np.minimum(diff, n - diff).astype(float))


def matrix_space(dist, labels: Sequence | None = None, is_semimetric: bool = False,
                 check: bool = True, tol: float = 1e-9) -> MetricSpace:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise StructuralError(f"distance matrix must be square, got shape {d.shape}")
    if labels is None:
        labels = [str(i) for i in range(d.shape[0])]
    if check:
        rep = validate(d, tol=tol, is_semimetric=is_semimetric)
        if not rep.ok:
            raise AxiomError(rep.summary())
    return MetricSpace(labels, d, is_semimetric)


def cloud_space(points, labels: Sequence | None = None) -> MetricSpace:
    """Point cloud in R^l with Euclidean distance."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[0] == 1 and np.asarray(points).ndim == 1:
        x = x.T
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt((diff ** 2).sum(-1))
    if labels is None:
        labels = [str(i) for i in range(x.shape[0])]
    return MetricSpace(labels, d)


def subspace(space: MetricSpace, members) -> MetricSpace:
    members = np.asarray(members, dtype=int)
    return MetricSpace([space.labels[i] for i in members],
                       space.dist[np.ix_(members, members)], space.is_semimetric)


def make_space(desc) -> MetricSpace:
    """Build a space from a generator description.

    Accepts strings ``"grid:l:points[:alpha[:c]]"``, ``"cycle:n"``,
    ``"file:path.csv"`` (distance matrix CSV), ``"cloud:path.csv"``, or a dict
    ``{"kind": "grid", "l": .., "points": .., "alpha": .., "c": ..}`` etc.
    """
    if isinstance(desc, MetricSpace):
        return desc
    if isinstance(desc, str):
        kind, _, rest = desc.partition(":")
        args = rest.split(":") if rest else []
        if kind == "grid":
            if len(args) < 2:
                raise ValueError("grid description is grid:l:points[:alpha[:c]]")
            desc = {"kind": "grid", "l": int(args[0]), "points": int(args[1])}
            if len(args) > 2:
                desc["alpha"] = float(args[2])
            if len(args) > 3:
                desc["c"] = float(args[3])
        elif kind == "cycle":
            desc = {"kind": "cycle", "n": int(args[0])}
        elif kind in ("file", "matrix"):
            desc = {"kind": "file", "path": rest}
        elif kind == "cloud":
            desc = {"kind": "cloud", "path": rest}
        else:
            raise ValueError(f"unknown space kind {kind!r}")
    desc = dict(desc)
    kind = desc.pop("kind")
    if kind == "grid":
        return grid_space(**desc)
    if kind == "cycle":
        return cycle_space(**desc)
    if kind == "matrix":
        return matrix_space(desc["dist"], desc.get("labels"), desc.get("is_semimetric", False))
    if kind == "file":
        from .io import read_distance_csv
        return read_distance_csv(desc["path"], is_semimetric=desc.get("is_semimetric", False))
    if kind == "cloud":
        from .io import read_cloud_csv
        return cloud_space(read_cloud_csv(desc["path"]))
    raise ValueError(f"unknown space kind {kind!r}")

"""Shared brute-force oracles and strategies for the test suite."""
from __future__ import annotations

from itertools import combinations

import numpy as np
from hypothesis import strategies as st

from unimetric.metric_core import cloud_space, matrix_space


def brute_cover(dist, eps):
    """Smallest number of closed eps-balls (centers in the space) covering it."""
    n = dist.shape[0]
    cover = dist <= eps
    for k in range(1, n + 1):
        for c in combinations(range(n), k):
            if cover[list(c)].any(axis=0).all():
                return k
    return n


def brute_pack(dist, eps):
    """Largest set of centers whose closed eps-balls are pairwise disjoint."""
    n = dist.shape[0]
    ball = dist <= eps
    for k in range(n, 0, -1):
        for c in combinations(range(n), k):
            if all(not (ball[a] & ball[b]).any() for a, b in combinations(c, 2)):
                return k
    return 1


@st.composite
def small_spaces(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pts = draw(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)),
                        min_size=n, max_size=n, unique=True))
    return cloud_space(np.array(pts, dtype=float))


@st.composite
def graph_spaces(draw, max_n=8):
    """Shortest-path metrics of random connected graphs with integer weights."""
    n = draw(st.integers(2, max_n))
    w = np.full((n, n), np.inf)
    np.fill_diagonal(w, 0)
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        w[i, j] = w[j, i] = draw(st.integers(1, 3))
    for k in range(n):
        w = np.minimum(w, w[:, [k]] + w[[k], :])
    return matrix_space(w)

from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from unimetric import measure
from unimetric.covering import cover_number
from unimetric.measure import (DiscreteMeasure, ball_mass, check_thm21, counting_measure, nu_eps,
                               packing_sandwich, point_mass, quasi_ratio, uniform_measure,
                               wasserstein1, weak_homogeneity)
from unimetric.metric_core import breakpoints, cycle_space, grid_space, matrix_space

from helpers import graph_spaces

L5, C6 = grid_space(1, 5), cycle_space(6)
ONE = matrix_space([[0.0]])


def test_nu_eps_examples():
    assert nu_eps(L5, 0.5).exact == (0, 0, 1, 0, 0)
    assert nu_eps(C6, 1).exact == (F(1, 2), 0, 0, F(1, 2), 0, 0)
    assert nu_eps(L5, 0.1).exact == (F(1, 5),) * 5


def test_uniform_measure_schedule():
    mu, diag = uniform_measure(L5, [0.5, 0.25, 0.1])
    assert mu.exact == (F(1, 5),) * 5
    assert diag.support_sizes == [1, 2, 5] and len(diag.gaps) == 2
    mu2, diag2 = uniform_measure(L5, [0.1, 0.05])
    assert diag2.gaps == [0.0] and diag2.converged
    _, d6 = uniform_measure(C6, [2, 1])
    assert d6.support_sizes == [2, 2] and len(d6.gaps) == 1   # N(2) = 2 on the 6-cycle
    p, dp = uniform_measure(ONE, [1.0, 0.5])
    assert p.exact == (1,) and dp.gaps == [0.0]


def test_uniform_measure_errors():
    with pytest.raises(ValueError):
        uniform_measure(L5, [0.1, 0.25])
    with pytest.raises(ValueError):
        uniform_measure(L5, [])


def test_wasserstein_oracle():
    a, b = point_mass(L5, 0), point_mass(L5, 4)
    assert wasserstein1(a, b) == pytest.approx(1.0)
    # half the mass moves 0.25
    mu = DiscreteMeasure.from_fractions(L5, [F(1, 2), F(1, 2), 0, 0, 0])
    assert wasserstein1(mu, a) == pytest.approx(0.125)
    assert wasserstein1(mu, mu) == 0.0


def test_ball_masses():
    assert ball_mass(counting_measure(C6), 1, exact=True) == (F(1, 2), F(1, 2))
    assert ball_mass(counting_measure(L5), 0.25, exact=True) == (F(2, 5), F(3, 5))
    assert ball_mass(point_mass(L5, 1), 1.0, exact=True) == (1, 1)


def test_weak_homogeneity_examples():
    rep = weak_homogeneity(C6)
    assert rep.C_minus == 1 and rep.quasi_ratio == 1
    assert weak_homogeneity(ONE).C_minus == 1


def test_quasi_ratio():
    assert quasi_ratio(counting_measure(C6), exact=True) == 1
    # max over radii: at r = 0.5 the center ball holds all 5 points, the end balls 3
    assert quasi_ratio(counting_measure(L5), exact=True) == F(5, 3)
    assert quasi_ratio(point_mass(L5, 0)) == float("inf")


def test_thm21_rows():
    rows = check_thm21(C6, counting_measure(C6), F(1), mode="exact")
    assert rows[0] == (1.0, F(1, 2), F(1, 2), True)
    rep = weak_homogeneity(L5)
    rows = check_thm21(L5, counting_measure(L5), rep.C_minus, mode="exact")
    assert [r[0] for r in rows] == [0.25, 0.5, 0.75, 1.0] and all(r[3] for r in rows)


def test_packing_sandwich_examples():
    assert packing_sandwich(counting_measure(C6), 1) == (F(6, 5), 2, F(2), True)
    # h_plus(0.5) = 1 because the ball around 0.5 is all of L5
    assert packing_sandwich(counting_measure(L5), 0.25) == (F(1), 2, F(5, 2), True)
    lo, M, hi, ok = packing_sandwich(point_mass(L5, 0), 0.1)
    assert lo == 1 and hi == float("inf") and ok


def test_measure_validation():
    with pytest.raises(ValueError):
        DiscreteMeasure(L5, np.ones(5))
    with pytest.raises(ValueError):
        DiscreteMeasure(L5, np.array([-0.1, 0.3, 0.3, 0.3, 0.2]))


@settings(max_examples=40, deadline=None)
@given(graph_spaces(max_n=7))
def test_theorem_and_sandwich_properties(space):
    mu = measure.stabilized_uniform_measure(space)
    rep = weak_homogeneity(space, measure=mu)
    assert rep.C_minus > 0
    assert all(r[3] for r in check_thm21(space, mu, rep.C_minus, mode="exact"))
    for e in breakpoints(space)[1:]:
        assert packing_sandwich(mu, float(e))[3]


@settings(max_examples=40, deadline=None)
@given(graph_spaces(max_n=7))
def test_net_measures_are_probabilities(space):
    for e in breakpoints(space)[1:]:
        nu = nu_eps(space, float(e))
        assert sum(nu.exact) == 1
        assert nu.support.size == cover_number(space, float(e))

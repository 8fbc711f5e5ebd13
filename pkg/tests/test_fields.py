import math

import numpy as np
import pytest
from scipy.stats import norm

from unimetric import fields
from unimetric.fields import (DegenerateDistanceError, ModelError, RandomFieldModel, SampleMatrix,
                              bound_chain, build_Z_theta, closed_form_bounds, covariance_matrix,
                              entropy_integral, estimate_K, empirical_phi, gamma_m,
                              gamma_truncated, gaussian_model, gaussian_natural_distance, mc_verify,
                              natural_distance, quasi_homogeneity, sample, tail_bound,
                              zeta_distance)
from unimetric.measure import counting_measure, point_mass, weak_homogeneity
from unimetric.metric_core import cycle_space, grid_space, matrix_space
from unimetric.orlicz import MGFunction, Phi2, PowerYoung, young_fenchel

L5, C6 = grid_space(1, 5), cycle_space(6)
ONE = matrix_space([[0.0]])
STAR = young_fenchel(MGFunction.quadratic(0.5), [1.0])


def inv2(w):
    return math.sqrt(2 * math.log1p(w))


# ---------------------------------------------------------------- models ----

def test_single_variable_sampling():
    R = 100_000
    X = sample(gaussian_model(ONE, "iid", seed=3), R).values
    assert X.shape == (R, 1) and abs(X.mean()) <= 4 / math.sqrt(R)


def test_zero_covariance_and_mean():
    mean = np.array([1.0, -2.0, 0.5])
    model = gaussian_model(grid_space(1, 3), np.zeros((3, 3)), seed=0, mean=mean)
    X = sample(model, 100).values
    assert np.array_equal(X, np.tile(mean, (100, 1)))


def test_ou_empirical_covariance():
    space = grid_space(1, 64)
    R = 100_000
    X = sample(gaussian_model(space, "ou", seed=11), R).values
    C = covariance_matrix(space, "ou")
    emp = X.T @ X / R
    se = np.sqrt((1 + C ** 2) / R)          # Var(xy) = 1 + c^2 for unit Gaussians
    assert np.all(np.abs(emp - C) <= 5 * se)


def test_fbm_covariance():
    space = grid_space(1, 9)
    C = covariance_matrix(space, "fbm(0.5)")
    t = np.linspace(0, 1, 9)
    assert np.allclose(C, np.minimum(t[:, None], t[None, :]))
    with pytest.raises(ModelError):
        covariance_matrix(space, "fbm(1.5)")
    with pytest.raises(ModelError):
        covariance_matrix(space, "matern")


def test_model_errors():
    with pytest.raises(ModelError):
        gaussian_model(grid_space(1, 2), np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ModelError):
        gaussian_model(grid_space(1, 2), np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ModelError):
        RandomFieldModel(grid_space(1, 2), "external", source=np.ones((5, 3)))


def test_thread_count_does_not_change_samples():
    model = gaussian_model(grid_space(1, 8), "ou", seed=5)
    a = sample(model, 10_000, threads=1).values
    b = sample(model, 10_000, threads=4).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample(gaussian_model(grid_space(1, 8), "ou", seed=6), 10_000).values)


# -------------------------------------------------------- natural distance ----

def test_natural_distance_iid_power2():
    S = sample(gaussian_model(grid_space(1, 4), "iid", seed=1), 100_000)
    D = natural_distance(S, PowerYoung(2))
    off = D[~np.eye(4, dtype=bool)]
    assert np.allclose(off, math.sqrt(2), rtol=0.02)


def test_natural_distance_correlated_is_zero():
    S = sample(gaussian_model(grid_space(1, 3), np.ones((3, 3)), seed=0), 1000)
    assert np.allclose(natural_distance(S, Phi2), 0)


def test_natural_distance_phi2_gaussian():
    model = gaussian_model(grid_space(1, 2), "iid", seed=2)
    S = sample(model, 100_000)
    sigma = math.sqrt(2)
    assert natural_distance(S, Phi2)[0, 1] == pytest.approx(sigma * math.sqrt(4 / 3), rel=0.02)
    assert gaussian_natural_distance(model, Phi2)[0, 1] == pytest.approx(sigma * math.sqrt(4 / 3), rel=1e-12)


# ------------------------------------------------- majorizing functionals ----

def test_gamma_examples():
    assert gamma_m(C6, counting_measure(C6), Phi2) == pytest.approx(inv2(6) + inv2(2) + inv2(1.2), abs=1e-12)
    assert gamma_m(C6, point_mass(C6, 0), Phi2) == math.inf
    assert gamma_m(ONE, counting_measure(ONE), Phi2) == 0.0
    full = gamma_m(C6, counting_measure(C6), Phi2, exact=False)
    assert gamma_truncated(C6, counting_measure(C6), Phi2, [0, 1, 3]) == pytest.approx([0, inv2(6), full])


def test_bound_chain_examples():
    mu = counting_measure(C6)
    ch = bound_chain(C6, mu, Phi2, weak_homogeneity(C6).C_minus)
    assert ch["bound_ball_mass"] == ch["gamma"]
    assert ch["gamma"] <= ch["bound_homogeneity"]
    # N(r) = 6, 2, 2 on the three segments with C_minus = 1
    assert ch["bound_homogeneity"] == pytest.approx(inv2(6) + 2 * inv2(2), abs=1e-12)
    assert set(ch["bound_net"]) == {1.0, 2.0}
    assert all(math.isfinite(v) for v in ch["bound_net"].values())
    assert ch["bound_net_inf"] <= min(ch["bound_net"].values())
    zero = bound_chain(ONE, counting_measure(ONE), Phi2, 1)
    assert zero["gamma"] == zero["bound_ball_mass"] == zero["bound_homogeneity"] == 0.0
    with pytest.raises(ValueError):
        bound_chain(C6, mu, Phi2, 0)


def test_entropy_integral():
    assert entropy_integral(C6, Phi2, mode="exact") == pytest.approx(inv2(6) + 2 * inv2(2), abs=1e-12)
    assert entropy_integral(ONE, Phi2) == 0.0
    assert entropy_integral(C6.dist * 2.5, Phi2) == pytest.approx(2.5 * entropy_integral(C6, Phi2), rel=1e-14)


def test_quasi_homogeneity():
    assert quasi_homogeneity(counting_measure(C6))[0] == 1
    assert quasi_homogeneity(counting_measure(L5))[0] == pytest.approx(5 / 3)
    assert quasi_homogeneity(point_mass(L5, 0))[0] == math.inf


# ------------------------------------------------------- Z, theta, zeta, K ----

def test_Z_deterministic_field():
    S = SampleMatrix(np.zeros((50, 3)), 0, 50)
    zt = build_Z_theta(S, grid_space(1, 3).dist, counting_measure(grid_space(1, 3)), Phi2)
    assert zt.degenerate and np.all(zt.Z == 0)


def test_Z_degenerate_distance_error():
    S = SampleMatrix(np.array([[0.0, 1.0], [0.0, 2.0]]), 0, 2)
    with pytest.raises(DegenerateDistanceError):
        build_Z_theta(S, np.zeros((2, 2)), counting_measure(grid_space(1, 2)), Phi2)


def test_Z_mean_equals_off_diagonal_mass_for_iid():
    # with the population natural distance each off-diagonal pair has E Phi = 1,
    # so E Z is the off-diagonal mass 1 - sum m^2
    model = gaussian_model(grid_space(1, 4), "iid", seed=4)
    S = sample(model, 200_000)
    v = gaussian_natural_distance(model, PowerYoung(2))
    zt = build_Z_theta(S, v, counting_measure(grid_space(1, 4)), PowerYoung(2))
    assert zt.offdiag_mass == pytest.approx(0.75)
    assert abs(zt.mean_Z - 0.75) <= 4 * zt.se_Z


def test_zeta_examples():
    z = zeta_distance(np.array([[0, 1.0], [1.0, 0]]), counting_measure(grid_space(1, 2)), Phi2)
    assert z.zeta[0, 1] == 1.0 and z.zeta[0, 0] == 0.0
    one = zeta_distance(np.zeros((1, 1)), counting_measure(ONE), Phi2)
    assert one.degenerate
    zc = zeta_distance(C6.dist, counting_measure(C6), Phi2)
    assert np.all((0 <= zc.zeta) & (zc.zeta <= 1)) and zc.D == 1.0
    assert np.array_equal(zc.zeta, zc.zeta.T)
    # zeta is a nondecreasing function of the distance
    order = np.argsort(C6.dist[0])
    assert np.all(np.diff(zc.zeta[0][order]) >= 0)


def test_estimate_K():
    phi = MGFunction.quadratic(0.5)
    assert estimate_K(np.zeros(100), phi) == 0.0
    assert estimate_K(np.full(100, 2.5), phi) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        estimate_K([], phi)


def test_empirical_phi_gaussian():
    X = np.random.default_rng(0).normal(size=(200_000, 2))
    phi = empirical_phi(X)
    assert phi(0.5) == pytest.approx(0.125, abs=0.01)


def test_K_stable_across_seeds():
    import test_acceptance
    K1 = test_acceptance.mc_report("ou").K
    rep = mc_verify(gaussian_model(grid_space(1, 64), "ou", seed=8), [1.0, 2.0, 3.0, 4.0], 100_000)
    assert math.isfinite(K1) and abs(rep.K - K1) <= 0.1 * K1


# ------------------------------------------------------------ tail bound ----

def test_tail_bound_single_point():
    rep = tail_bound(np.zeros((1, 1)), 0.0, STAR, [3.0])
    assert rep.bound[0] == pytest.approx(math.exp(-4.5))
    assert rep.bound_abs[0] == 2 * rep.bound[0]
    assert tail_bound(np.zeros((1, 1)), 0.0, STAR, [0.1]).bound[0] == pytest.approx(math.exp(-0.005))


def test_tail_bound_cap_and_errors():
    zc = zeta_distance(C6.dist, counting_measure(C6), Phi2)
    rep = tail_bound(zc, 1.0, STAR, [0.1, 10.0])
    assert rep.bound[0] == 1.0 and rep.bound[1] < 1.0
    with pytest.raises(ValueError):
        tail_bound(zc, -1.0, STAR, [1.0])


def test_tail_bound_is_minimum_over_deltas():
    zc = zeta_distance(C6.dist, counting_measure(C6), Phi2)
    u, K = 4.0, 2.0
    rep = tail_bound(zc, K, STAR, [u])
    sp = matrix_space(zc.zeta, is_semimetric=True)
    from unimetric.covering import cover_number
    from unimetric.metric_core import breakpoints
    cands = [6 * math.exp(-u * u / 2)]
    cands += [cover_number(sp, e) * math.exp(-(u / (1 + K * e)) ** 2 / 2)
              for e in breakpoints(sp) if 0 < e < zc.D]
    assert rep.bound[0] == pytest.approx(min(1.0, min(cands)), rel=1e-12)


def test_closed_forms():
    cf = closed_form_bounds("power_dimension", [3.0], kappa=1, C2=1, C3=1)
    assert cf.values[0] == pytest.approx(36 * math.exp(-4.5))
    es = closed_form_bounds("entropy_series", [1.0, 2.0, 3.0], beta=1.0, C6=0.0)
    assert np.allclose(es.values, np.exp(-np.array([1.0, 2.0, 3.0]) ** 2 / 2))
    assert float(Phi2.log_derivative(10.0)) == pytest.approx(10.0, rel=0.01)
    lc = closed_form_bounds("log_convex", [10.0], Phi=Phi2, gamma=0.5, C=1.0, N=lambda d: 1.0)
    assert lc.delta0[0] == pytest.approx(0.5 / 100, rel=0.01)
    with pytest.raises(ValueError):
        closed_form_bounds("power_dimension", [1.0], kappa=-1, C2=1, C3=1)
    with pytest.raises(ValueError):
        closed_form_bounds("log_convex", [1.0], Phi=Phi2, gamma=1.5, C=1.0, N=lambda d: 1.0)


# -------------------------------------------------------------- harness ----

def test_mc_verify_single_point():
    model = gaussian_model(ONE, "iid", seed=7)
    R = 100_000
    lo = float(sample(model, R).values.min())
    rep = mc_verify(model, [2.0, lo - 1e-9], R)
    assert abs(rep.empirical[0] - norm.sf(2.0)) <= 3 * rep.se[0]
    assert rep.bound[0] == pytest.approx(math.exp(-2.0))
    assert rep.empirical[1] == 1.0 and rep.bound[1] == 1.0
    assert rep.dominated.all()

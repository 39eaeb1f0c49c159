"""Coupling audits: drift nullity, cross variation, cutting, stationarity."""

import numpy as np
import pytest

from loewnerlab.coupling import (
    CouplingState,
    cross_variation_check,
    cutting_operation,
    drift_audit,
    martingale_weight,
    solve_alpha,
    stationarity_test,
)
from loewnerlab.errors import DomainError
from loewnerlab.field import FREE, FieldModel, LinearFunctional, green
from loewnerlab.loewner import MapEvaluator, invert_points
from loewnerlab.particles import ParticleConfig, canonical_model, simulate_driving


def test_welding_canonical_drift_vanishes():
    state = CouplingState.welding_canonical(
        1.3, ParticleConfig(np.array([-0.8, 0.4])), 0.3 + 1.2j)
    rep = drift_audit(state)
    assert rep.residual < 1e-12
    assert rep.loadings.size == 2


def test_flowline_canonical_drift_vanishes():
    state = CouplingState.flowline_canonical(
        3.0, ParticleConfig(np.array([-1.0, 0.0, 1.0])), -0.2 + 1.5j)
    rep = drift_audit(state)
    assert rep.residual < 1e-12


def test_perturbed_weights_break_nullity():
    x = ParticleConfig(np.array([-0.5, 0.7]))
    good = CouplingState.welding_canonical(1.1, x, 1j)
    bad = CouplingState(mode="welding", particles=x, map_point=1j,
                        kappa=good.kappa, gamma=good.gamma,
                        weights=good.weights * 1.001)
    assert drift_audit(bad).residual > 1e-6


def test_perturbed_drift_breaks_nullity():
    state = CouplingState.welding_canonical(
        1.1, ParticleConfig(np.array([-0.5, 0.7])), 1j)
    from loewnerlab.particles import drift_eval
    F = drift_eval("canonical", canonical_model(2, state.kappa), state.particles)
    assert drift_audit(state, F=1.001 * F).residual > 1e-6


def test_martingale_weight_solution():
    for kappa, lam, gamma in [(2.0, 1.0, 1.2), (3.5, 0.7, 0.9), (1.0, 2.0, 1.5)]:
        a = solve_alpha(kappa, lam, gamma)
        assert abs(martingale_weight(a, kappa, lam, gamma)) < 1e-14


def test_alpha_specializes_to_two_over_gamma():
    for gamma in (0.5, 0.8, 1.0, 1.3, 1.9):
        a = solve_alpha(gamma * gamma, 1.0, gamma)
        assert np.isclose(a, 2.0 / gamma, rtol=1e-15, atol=0)


def test_inhomogeneous_drift_vanishes_with_solved_alphas():
    gamma = 1.2
    lambdas = np.array([0.8, 1.2, 1.0])
    kappas = np.array([1.5, 2.5, 3.0])
    alphas = np.array([solve_alpha(k, l, gamma) for k, l in zip(kappas, lambdas)])
    state = CouplingState(
        mode="inhomogeneous-welding",
        particles=ParticleConfig(np.array([-1.0, 0.2, 1.1])),
        map_point=0.4 + 1.3j, kappa=float(kappas.mean()), gamma=gamma,
        weights=alphas, lambdas=lambdas, kappas=kappas)
    assert drift_audit(state).residual < 1e-12


def test_cross_variation_closed_form_zero_noise():
    model = canonical_model(1, kappa=1.0)
    path = simulate_driving(model, ParticleConfig(np.array([0.0])), 0.2, 1e-4,
                            seed=0, zero_noise=True)
    for mode in ("welding-free", "flowline-dirichlet"):
        rep = cross_variation_check(mode, path, 0.3 + 1j, -0.4 + 1.5j, 0.2,
                                    ode_step=1e-4)
        assert rep.discrepancy < 1e-3


def test_cross_variation_stochastic():
    model = canonical_model(2, kappa=2.0)
    path = simulate_driving(model, ParticleConfig(np.array([-0.5, 0.5])),
                            0.2, 1e-4, seed=5)
    rep = cross_variation_check("welding-free", path, 0.3 + 1j, -0.4 + 1.5j,
                                0.2, ode_step=1e-4)
    assert rep.discrepancy < 1e-2


def test_cutting_offsets_match_direct_inversion():
    gamma = 1.0
    model = FieldModel(boundary=FREE, gamma=gamma)
    fs = [LinearFunctional.signed_pair(2j, 3j, radius=0.2)]
    driving = simulate_driving(canonical_model(1, gamma**2),
                               ParticleConfig(np.array([0.0])), 0.25, 1e-3,
                               seed=3)
    recipe = cutting_operation(model, fs, driving, 0.25)
    ev = MapEvaluator(driving=driving, ode_step=1e-3)
    # the rings of each bump share its center, so the offset collapses to
    # the difference of Q Re log (g_T^{-1})' at the two centers
    res = invert_points(ev, np.array([2j, 3j]), 0.25, with_log_deriv=True)
    want = model.Q * (res.log_deriv[0].real - res.log_deriv[1].real)
    assert np.isclose(recipe.mean_offsets[0], want, atol=1e-8)
    assert recipe.gram.shape == (1, 1)


def test_stationarity_smoke_and_validation():
    fs = [LinearFunctional.signed_pair(1j, 2j, radius=0.2, n_rings=4),
          LinearFunctional.signed_pair(-1 + 1.5j, 1 + 1.5j, radius=0.2, n_rings=4)]
    x0 = ParticleConfig(np.array([0.0]))
    rep = stationarity_test("welding", x0, 0.25, 1.0, fs, replicas=150,
                            seed=8, dt=5e-3)
    assert rep.sampleA.shape == (150, 2)
    assert rep.sampleB.shape[1] == 2
    assert 0.0 <= rep.discard_fraction <= 1.0
    with pytest.raises(DomainError):
        stationarity_test("welding", x0, 0.25, 1.0, fs, replicas=10, seed=8)
    with pytest.raises(DomainError):
        stationarity_test("sideways", x0, 0.25, 1.0, fs, replicas=150, seed=8)


def test_map_point_must_avoid_particles():
    with pytest.raises(DomainError):
        CouplingState.welding_canonical(
            1.0, ParticleConfig(np.array([0.0])), 0.0 + 0.0j)

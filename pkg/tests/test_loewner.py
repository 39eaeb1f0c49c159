"""Loewner flows: closed-form oracles, inversion, capacity, slits."""

import numpy as np
import pytest

from loewnerlab.errors import DomainError
from loewnerlab.loewner import (
    MapEvaluator,
    capacity_estimate,
    evolve_points,
    invert,
    invert_points,
    trace_slits,
)
from loewnerlab.particles import ParticleConfig, canonical_model, simulate_driving


def _zero_path(T=0.5, dt=1e-4):
    model = canonical_model(1, kappa=1.0)
    return simulate_driving(model, ParticleConfig(np.array([0.0])), T, dt,
                            seed=0, zero_noise=True)


def test_forward_matches_sqrt_map():
    # zero driving: g_t(z) = sqrt(z^2 + 4t)
    path = _zero_path(T=0.5, dt=1e-4)
    ev = MapEvaluator(driving=path, ode_step=1e-4)
    zs = np.array([3j, 2j, 1 + 1j, -0.5 + 2j])
    res = evolve_points(ev, zs, 0.5, with_log_deriv=True)
    want = np.sqrt(zs**2 + 2.0)
    want = np.where(want.imag < 0, -want, want)
    assert np.max(np.abs(res.values - want)) < 1e-8
    # g'_t(z) = z / g_t(z)
    want_ld = np.log(zs / want)
    assert np.max(np.abs(res.log_deriv - want_ld)) < 1e-8


def test_interior_point_is_swallowed():
    # z = i is captured by t = 1/4 under zero driving
    path = _zero_path(T=0.5, dt=1e-4)
    ev = MapEvaluator(driving=path, ode_step=1e-4)
    res = evolve_points(ev, np.array([0.9j]), 0.5)
    assert res.swallowed[0]
    res2 = evolve_points(ev, np.array([0.9j]), 0.1)
    assert not res2.swallowed[0]


def test_overshoot_past_singularity_is_flagged():
    model = canonical_model(1, kappa=4.0)
    path = simulate_driving(model, ParticleConfig(np.array([0.0])), 0.3, 1e-3, 9)
    ev = MapEvaluator(driving=path, ode_step=1e-3)
    res = evolve_points(ev, np.array([0.01j, 2j]), 0.3)
    assert res.swallowed[0] and not res.swallowed[1]


def test_inverse_by_reverse_flow():
    # zero driving: g_1^{-1}(3i) solves w^2 + 4 = -9, w = i sqrt(13)
    path = _zero_path(T=1.0, dt=1e-4)
    ev = MapEvaluator(driving=path, ode_step=1e-4)
    w = invert(ev, 3j, 1.0)
    assert abs(w - 1j * np.sqrt(13.0)) < 1e-8
    back = evolve_points(ev, np.array([w]), 1.0)
    assert abs(back.values[0] - 3j) < 1e-8


def test_roundtrip_random_points():
    model = canonical_model(2, kappa=2.0)
    path = simulate_driving(model, ParticleConfig(np.array([-1.0, 1.0])),
                            0.25, 1e-3, seed=3)
    ev = MapEvaluator(driving=path, ode_step=1e-3)
    rng = np.random.default_rng(0)
    ws = rng.uniform(-2, 2, 20) + 1j * rng.uniform(0.3, 2.0, 20)
    pre = invert_points(ev, ws, 0.25)
    post = evolve_points(ev, pre.values, 0.25)
    assert np.max(np.abs(post.values - ws)) < 1e-7


def test_capacity_zero_noise():
    path = _zero_path(T=0.5, dt=1e-3)
    ev = MapEvaluator(driving=path, ode_step=1e-3)
    est = capacity_estimate(ev, 0.5)
    assert abs(est.capacity - 1.0) < 1e-3


def test_trace_slits_vertical_segment():
    # zero driving grows the segment [0, 2i sqrt(t)]
    path = _zero_path(T=0.25, dt=1e-3)
    slits = trace_slits(path, tip_offset=1e-4, n_samples=16, ode_step=1e-3)
    tip = slits.slits[0][-1]
    assert abs(tip - 2j * np.sqrt(0.25)) < 1e-3
    assert np.max(np.abs(slits.slits[0].real)) < 1e-3


def test_quadrant_velocity_includes_mirror_and_origin_terms():
    model = canonical_model(1, kappa=1.0)
    path = simulate_driving(model, ParticleConfig(np.array([1.0])), 0.01, 1e-3,
                            seed=0, zero_noise=True)
    ev = MapEvaluator(driving=path, geometry="quadrant", delta=0.5)
    z = np.array([2.0 + 1.0j])
    v = ev._velocity(z, np.array([1.0]))
    want = 2.0 / (z - 1.0) + 2.0 / (z + 1.0) + 4.0 * 0.5 / z
    assert np.allclose(v, want, atol=1e-14)


def test_reverse_direction_raises_on_singularity_contact():
    path = _zero_path(T=0.1, dt=1e-3)
    ev = MapEvaluator(driving=path, direction="reverse", ode_step=1e-3)
    # reverse flow pushes interior points away from the axis; fine here
    res = evolve_points(ev, np.array([0.5j]), 0.1)
    assert res.values[0].imag > 0.5


def test_target_beyond_horizon_rejected():
    path = _zero_path(T=0.1, dt=1e-3)
    ev = MapEvaluator(driving=path, ode_step=1e-3)
    with pytest.raises(DomainError):
        evolve_points(ev, np.array([1j]), 0.2)

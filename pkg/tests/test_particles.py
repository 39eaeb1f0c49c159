"""Driving SDE simulation: ordering, reproducibility, drifts, exports."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loewnerlab.errors import DomainError, GridError
from loewnerlab.particles import (
    DrivingModel,
    DrivingPath,
    ParticleConfig,
    canonical_model,
    drift_eval,
    path_to_csv,
    simulate_driving,
    time_reverse,
)


def test_config_requires_strict_ordering():
    with pytest.raises(DomainError):
        ParticleConfig(np.array([0.0, 0.0]))
    with pytest.raises(DomainError):
        ParticleConfig(np.array([1.0, -1.0]))
    cfg = ParticleConfig(np.array([-1.0, 1.0]))
    assert cfg.N == 2


def test_wishart_chamber_requires_positive_points():
    with pytest.raises(DomainError):
        ParticleConfig(np.array([-1.0, 1.0]), chamber="positive-half-line")


def test_simulation_is_seed_deterministic():
    model = DrivingModel(kind="dyson", N=3, beta=2.0)
    x0 = ParticleConfig(np.array([-1.0, 0.0, 1.0]))
    a = simulate_driving(model, x0, 0.2, 1e-3, seed=5)
    b = simulate_driving(model, x0, 0.2, 1e-3, seed=5)
    c = simulate_driving(model, x0, 0.2, 1e-3, seed=6)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_dyson_preserves_ordering():
    model = DrivingModel(kind="dyson", N=4, beta=2.0)
    x0 = ParticleConfig(np.array([-1.5, -0.5, 0.5, 1.5]))
    path = simulate_driving(model, x0, 1.0, 1e-3, seed=11)
    assert np.all(np.diff(path.values, axis=1) > 0)


def test_beta_below_one_is_rejected():
    model = DrivingModel(kind="dyson", N=2, beta=0.5)
    x0 = ParticleConfig(np.array([-1.0, 1.0]))
    with pytest.raises(DomainError):
        simulate_driving(model, x0, 0.1, 1e-3, seed=0)


def test_wishart_stays_positive():
    model = DrivingModel(kind="wishart", N=3, beta=2.0, nu=1.0)
    x0 = ParticleConfig(np.array([0.5, 1.5, 3.0]), chamber="positive-half-line")
    path = simulate_driving(model, x0, 0.5, 1e-3, seed=3)
    assert np.all(path.values > 0)
    assert np.all(np.diff(path.values, axis=1) > 0)


def test_canonical_drift_closed_form():
    x = np.array([-1.0, 0.25, 2.0])
    model = canonical_model(3, kappa=2.0)
    got = drift_eval("canonical", model, ParticleConfig(x))
    want = np.array([
        4.0 / (x[0] - x[1]) + 4.0 / (x[0] - x[2]),
        4.0 / (x[1] - x[0]) + 4.0 / (x[1] - x[2]),
        4.0 / (x[2] - x[0]) + 4.0 / (x[2] - x[1]),
    ])
    assert np.allclose(got, want, rtol=0, atol=1e-14)


def test_zero_noise_single_particle_is_constant():
    model = canonical_model(1, kappa=4.0)
    x0 = ParticleConfig(np.array([0.3]))
    path = simulate_driving(model, x0, 0.2, 1e-3, seed=0, zero_noise=True)
    assert np.allclose(path.values, 0.3, atol=0)


def test_time_reverse_roundtrip():
    model = DrivingModel(kind="dyson", N=2, beta=4.0)
    x0 = ParticleConfig(np.array([-0.5, 0.5]))
    path = simulate_driving(model, x0, 0.3, 1e-3, seed=9)
    rev = time_reverse(path, 0.3)
    back = time_reverse(rev, 0.3)
    assert np.array_equal(back.values, path.values)
    assert np.array_equal(rev.values[0], path.values[-1])
    assert np.array_equal(rev.values[-1], path.values[0])


def test_index_of_rejects_off_grid_times():
    model = canonical_model(1, kappa=1.0)
    path = simulate_driving(model, ParticleConfig(np.array([0.0])), 0.25, 1e-3, seed=1)
    assert path.index_of(0.125) == 125
    with pytest.raises(GridError):
        path.index_of(0.1251113)


def test_path_csv_header_and_width():
    model = DrivingModel(kind="dyson", N=2, beta=2.0)
    path = simulate_driving(model, ParticleConfig(np.array([-1.0, 1.0])),
                            0.01, 1e-3, seed=2)
    text = path_to_csv(path)
    lines = text.strip().split("\n")
    assert lines[0] == "t,x1,x2"
    assert len(lines) == 12  # header + 11 grid times


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), beta=st.sampled_from([2.0, 4.0]))
def test_ordering_invariant_under_noise(seed, beta):
    model = DrivingModel(kind="dyson", N=3, beta=beta)
    x0 = ParticleConfig(np.array([-1.0, 0.0, 1.0]))
    path = simulate_driving(model, x0, 0.1, 1e-3, seed=seed)
    assert np.all(np.diff(path.values, axis=1) > 0)


def test_at_interpolates_linearly():
    model = canonical_model(1, kappa=1.0)
    path = simulate_driving(model, ParticleConfig(np.array([0.0])), 0.01, 1e-3, seed=4)
    mid = path.at(0.0015)
    want = 0.5 * (path.values[1] + path.values[2])
    assert np.allclose(mid, want, atol=1e-15)

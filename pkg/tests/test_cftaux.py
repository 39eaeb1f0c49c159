"""Auxiliary-function operators: weights, annihilation, induced drifts."""

import numpy as np
import pytest

from loewnerlab.cftaux import (
    AuxiliaryFunctionSpec,
    annihilation_residual,
    drift_from_Z,
    weights,
)
from loewnerlab.errors import DomainError
from loewnerlab.particles import ParticleConfig, canonical_model, drift_eval


def test_weight_closed_forms():
    w = weights(2.0)
    assert np.isclose(w["h_kappa"], (2.0 - 6.0) / 4.0)
    assert np.isclose(w["h_kappa_R"], -(2.0 + 6.0) / 4.0)
    assert np.isclose(w["c_kappa_R"], 1.0 + 3.0 * 36.0 / 4.0)


def _fd_residual(spec, pts, i, h=1e-5):
    """Finite-difference oracle for (D_i Z)/Z via dense evaluation of Z."""

    def logZ(x):
        d = x[:, None] - x[None, :]
        iu = np.triu_indices(x.size, k=1)
        return spec.p * np.log(np.abs(d[iu])).sum()

    Z = lambda x: np.exp(logZ(x))
    N = pts.size
    w = weights(spec.kappa)
    e = np.zeros(N)
    e[i] = 1.0
    d2 = (Z(pts + h * e) - 2.0 * Z(pts) + Z(pts - h * e)) / h**2
    total = 0.5 * spec.kappa * d2
    sgn = 1.0 if spec.side == "forward" else -1.0
    hk = w["h_kappa"] if spec.side == "forward" else w["h_kappa_R"]
    for j in range(N):
        if j == i:
            continue
        ej = np.zeros(N)
        ej[j] = 1.0
        dj = (Z(pts + h * ej) - Z(pts - h * ej)) / (2 * h)
        total += sgn * 2.0 / (pts[j] - pts[i]) * dj
        total += 2.0 * hk / (pts[j] - pts[i]) ** 2 * Z(pts)
    return total / Z(pts)


@pytest.mark.parametrize("side,sign", [("forward", 1.0), ("reverse", -1.0)])
def test_canonical_annihilation(side, sign):
    rng = np.random.default_rng(1)
    for kappa in (2.0, 3.0, 4.0, 6.0, 8.0):
        spec = AuxiliaryFunctionSpec(p=sign * 2.0 / kappa, kappa=kappa, side=side)
        for _ in range(10):
            N = int(rng.integers(2, 7))
            pts = np.sort(rng.uniform(-3, 3, N))
            cfg = ParticleConfig(pts)
            for i in range(N):
                assert annihilation_residual(spec, cfg, i) < 1e-12


def test_closed_form_matches_finite_difference_oracle():
    spec = AuxiliaryFunctionSpec(p=2.0 / 3.0, kappa=3.0, side="forward")
    pts = np.array([-1.2, 0.1, 0.9])
    # the closed-form residual is scale-normalized; compare raw residuals
    raw = _fd_residual(spec, pts, 1)
    assert abs(raw) < 1e-4  # finite-difference noise floor at h=1e-5


def test_non_canonical_exponent_fails_annihilation():
    spec = AuxiliaryFunctionSpec(p=1.0, kappa=4.0, side="forward")
    cfg = ParticleConfig(np.array([-1.0, 1.0]))
    assert annihilation_residual(spec, cfg, 0) > 1e-2


def test_drift_from_canonical_Z_matches_driving_drift():
    rng = np.random.default_rng(2)
    for kappa in (2.0, 4.0, 8.0):
        spec = AuxiliaryFunctionSpec(p=2.0 / kappa, kappa=kappa, side="forward")
        model = canonical_model(4, kappa)
        for _ in range(20):
            pts = np.sort(rng.uniform(-2, 2, 4))
            cfg = ParticleConfig(pts)
            got = drift_from_Z(spec, cfg)
            want = drift_eval("canonical", model, cfg)
            assert np.max(np.abs(got - want)) < 1e-10


def test_reverse_canonical_example():
    # N=2, x=(0,1): reverse drift kappa p s1 - 2 s1 with p=-2/kappa gives -4 s1
    spec = AuxiliaryFunctionSpec(p=-2.0 / 4.0, kappa=4.0, side="reverse")
    cfg = ParticleConfig(np.array([0.0, 1.0]))
    got = drift_from_Z(spec, cfg)
    assert np.allclose(got, [4.0, -4.0], atol=1e-14)


def test_spec_validation():
    with pytest.raises(DomainError):
        AuxiliaryFunctionSpec(p=1.0, kappa=-1.0)
    with pytest.raises(DomainError):
        AuxiliaryFunctionSpec(p=1.0, kappa=2.0, side="sideways")

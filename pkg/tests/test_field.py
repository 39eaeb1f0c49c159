"""Field covariances: Green kernels, gram assembly, decorations, measures."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loewnerlab.errors import AdmissibilityError, DomainError, GridError
from loewnerlab.field import (
    DIRICHLET,
    FREE,
    Decoration,
    FieldModel,
    LinearFunctional,
    boundary_semicircle_grid,
    decoration_eval,
    gram_matrix,
    green,
    quantum_boundary_length,
    sample_pairings,
)


def test_green_kernels_closed_form():
    z, w = 1j, 1 + 2j
    gd = green(DIRICHLET, z, w)
    gf = green(FREE, z, w)
    assert np.isclose(gd, -np.log(abs(z - w)) + np.log(abs(z - np.conj(w))))
    assert np.isclose(gf, -np.log(abs(z - w)) - np.log(abs(z - np.conj(w))))


def test_circle_average_variance_dirichlet():
    # self-pairing of a circle average: log(2 Im c / r)
    c, r = 0.4 + 1.5j, 0.1
    f = LinearFunctional.circle_average(c, r)
    g = gram_matrix(DIRICHLET, [f])
    assert np.isclose(g[0, 0], np.log(2 * c.imag / r), atol=1e-12)


def test_free_boundary_requires_zero_mass():
    f = LinearFunctional.circle_average(1j, 0.1)
    with pytest.raises(AdmissibilityError):
        gram_matrix(FREE, [f])
    pair = LinearFunctional.signed_pair(1j, 2j, radius=0.1)
    g = gram_matrix(FREE, [pair])
    assert np.isfinite(g[0, 0]) and g[0, 0] > 0


def test_boundary_semicircle_variance_free():
    f = LinearFunctional.boundary_semicircle(0.3, 0.05)
    g = gram_matrix(FREE, [f])
    assert np.isclose(g[0, 0], -2.0 * np.log(0.05), atol=1e-12)


def test_semicircles_rejected_under_dirichlet():
    f = LinearFunctional.boundary_semicircle(0.0, 0.1)
    with pytest.raises(AdmissibilityError):
        gram_matrix(DIRICHLET, [f])


def test_distant_circle_pairing_collapses_to_kernel():
    # averages of a harmonic kernel over separated circles hit the centers
    a = LinearFunctional.circle_average(1j, 0.05)
    b = LinearFunctional.circle_average(2 + 2j, 0.07)
    g = gram_matrix(DIRICHLET, [a, b])
    assert np.isclose(g[0, 1], green(DIRICHLET, 1j, 2 + 2j), atol=1e-12)
    assert np.isclose(g[0, 1], g[1, 0], atol=0)


@settings(max_examples=20, deadline=None)
@given(
    x=st.floats(-2, 2), y=st.floats(0.5, 2.5),
    u=st.floats(-2, 2), v=st.floats(0.5, 2.5),
)
def test_gram_is_symmetric_psd_on_pairs(x, y, u, v):
    if abs(complex(x, y) - complex(u, v)) < 0.5:
        return
    fs = [LinearFunctional.signed_pair(complex(x, y) + 0.5j, complex(u, v) + 0.5j,
                                       radius=0.1)]
    for kind in (DIRICHLET, FREE):
        g = gram_matrix(kind, fs)
        assert g[0, 0] >= 0


def test_bump_pairs_harmonic_functions_at_center():
    # total mass 1, rings collapse on harmonic functions by the mean value
    # property; pair against a log decoration anchored far away
    f = LinearFunctional.bump(0.5 + 1.5j, 0.2)
    model = FieldModel(boundary=FREE, gamma=1.0, decorations=(
        Decoration(kind="log", anchors=np.array([4.0]), weights=np.array([2.0])),))
    nodes, wts = f.nodes(n_theta=64)
    quad = float(np.sum(wts * decoration_eval(model, "log", nodes)))
    center = decoration_eval(model, "log", 0.5 + 1.5j)
    assert np.isclose(quad, center, atol=1e-10)
    assert np.isclose(f.mass, 1.0, atol=1e-12)


def test_decoration_eval_kinds():
    model = FieldModel(boundary=DIRICHLET, gamma=1.0, decorations=(
        Decoration(kind="arg", anchors=np.array([-1.0, 1.0]),
                   weights=np.array([2.0, 2.0])),))
    z = 5.0 + 1e-9j  # boundary point to the right of all anchors
    assert abs(decoration_eval(model, "arg", z)) < 1e-6
    z = -5.0 + 1e-6j  # to the left: both angles are pi
    assert np.isclose(decoration_eval(model, "arg", z), -4.0 * np.pi, atol=1e-5)


def test_orthant_decoration_is_even():
    model = FieldModel(boundary=FREE, gamma=1.0, decorations=(
        Decoration(kind="orthant", anchors=np.array([1.0]), weights=np.array([1.5])),))
    a = decoration_eval(model, "orthant", 0.7 + 1.2j)
    b = decoration_eval(model, "orthant", -0.7 + 1.2j)
    assert np.isclose(a, b, atol=1e-12)


def test_sample_pairings_matches_gram():
    fs = [LinearFunctional.signed_pair(1j, 2j, radius=0.1),
          LinearFunctional.signed_pair(-1 + 1j, 1 + 1j, radius=0.1)]
    ps = sample_pairings(FREE, fs, replicas=20000, seed=7)
    emp = np.cov(ps.samples.T)
    assert np.max(np.abs(emp - ps.gram)) < 0.25


def test_boundary_length_grid_spacing_guard():
    model = FieldModel(boundary=FREE, gamma=1.0)
    with pytest.raises(GridError):
        quantum_boundary_length(model, (-1, 1), 1e-2,
                                np.zeros(10), np.linspace(-1, 1, 10))


def test_boundary_length_zero_field_value():
    model = FieldModel(boundary=FREE, gamma=1.0)
    eps = 0.01
    grid, fs = boundary_semicircle_grid((-1.0, 1.0), eps)
    lengths = quantum_boundary_length(model, (-1.0, 1.0), eps,
                                      np.zeros((2, grid.size)), grid)
    want = 2.0 * eps ** 0.25
    assert np.allclose(lengths, want, rtol=1e-12)


def test_gamma_range_enforced():
    with pytest.raises(DomainError):
        FieldModel(boundary=FREE, gamma=2.5)

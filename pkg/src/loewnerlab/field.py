"""Gaussian free fields evaluated against finite functional families.

The field is never realized on a grid; it appears only through the joint
Gaussian law of its pairings with a finite family of test functionals.
Covariances are assembled from log-kernel mean-value identities on
circles, falling back to angular quadrature for overlapping supports.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AdmissibilityError,
    DomainError,
    FactorizationError,
    GridError,
    SingularityError,
)
from .rng import make_generator

__all__ = [
    "Component",
    "LinearFunctional",
    "Decoration",
    "FieldModel",
    "PairingSample",
    "green",
    "gram_matrix",
    "gram_pullback",
    "sample_pairings",
    "decoration_eval",
    "quantum_boundary_length",
    "quantum_area",
    "boundary_semicircle_grid",
]

DIRICHLET = "dirichlet"
FREE = "free"

# angular resolution of the quadrature fallback for overlapping circles
_N_THETA_QUAD = 2048


@dataclass(frozen=True)
class Component:
    """Weighted uniform measure on a circle, semicircle, or a point mass."""

    center: complex
    radius: float
    weight: float
    kind: str = "circle"  # circle | semicircle | point

    def __post_init__(self):
        if self.kind not in ("circle", "semicircle", "point"):
            raise DomainError(f"unknown component kind {self.kind!r}")
        if self.kind == "point" and self.radius != 0.0:
            raise DomainError("point component must have radius 0")
        if self.kind != "point" and self.radius <= 0:
            raise DomainError("circle component must have positive radius")
        if self.kind == "semicircle" and abs(complex(self.center).imag) > 1e-14:
            raise DomainError("semicircle component must be centered on the real axis")


@dataclass(frozen=True)
class LinearFunctional:
    """Test functional against the field, stored as a component stack.

    Mollified bumps are resolved into concentric rings: the circle
    average of the log kernel has the closed form log max(|c-w|, r), so
    a radially symmetric mollifier is exact up to radial quadrature.
    """

    kind: str
    components: tuple
    label: str = ""

    @property
    def mass(self) -> float:
        return float(sum(c.weight for c in self.components))

    @property
    def boundary_only(self) -> bool:
        return all(c.kind == "semicircle" for c in self.components) and bool(self.components)

    @staticmethod
    def circle_average(z: complex, eps: float, weight: float = 1.0) -> "LinearFunctional":
        z = complex(z)
        if z.imag <= eps:
            raise DomainError("circle average requires dist to boundary > eps")
        return LinearFunctional(
            kind="circle-average",
            components=(Component(z, eps, weight),),
            label=f"circle({z:.3g},{eps:.3g})",
        )

    @staticmethod
    def boundary_semicircle(x: float, eps: float, weight: float = 1.0) -> "LinearFunctional":
        return LinearFunctional(
            kind="boundary-semicircle-average",
            components=(Component(complex(x), eps, weight, kind="semicircle"),),
            label=f"semicircle({x:.3g},{eps:.3g})",
        )

    @staticmethod
    def bump(center: complex, radius: float, weight: float = 1.0,
             n_rings: int = 8) -> "LinearFunctional":
        """Smooth radial mollifier of total mass ``weight`` as a ring stack."""
        center = complex(center)
        if center.imag <= radius:
            raise DomainError("bump support must stay inside the open half-plane")
        # nodes of the C^inf profile exp(-1/(1-u^2)) on u in (0,1)
        u = (np.arange(n_rings) + 0.5) / n_rings
        prof = np.exp(-1.0 / (1.0 - u**2)) * u
        prof = prof / prof.sum() * weight
        comps = tuple(Component(center, radius * ui, wi) for ui, wi in zip(u, prof))
        return LinearFunctional(kind="mollified-bump", components=comps,
                                label=f"bump({center:.3g},{radius:.3g})")

    @staticmethod
    def signed_pair(c1: complex, c2: complex, radius: float,
                    n_rings: int = 8) -> "LinearFunctional":
        """Zero-mass difference of two bumps, admissible for free boundary."""
        a = LinearFunctional.bump(c1, radius, 1.0, n_rings)
        b = LinearFunctional.bump(c2, radius, -1.0, n_rings)
        return LinearFunctional(kind="signed-pair", components=a.components + b.components,
                                label=f"pair({c1:.3g},{c2:.3g})")

    @staticmethod
    def point_masses(points: Sequence[complex], weights: Sequence[float],
                     label: str = "points") -> "LinearFunctional":
        comps = tuple(Component(complex(p), 0.0, float(w), kind="point")
                      for p, w in zip(points, weights))
        return LinearFunctional(kind="point-masses", components=comps, label=label)

    def nodes(self, n_theta: int = 16):
        """Discretization into weighted point nodes (for map pullbacks)."""
        pts, wts = [], []
        for c in self.components:
            if c.kind == "point":
                pts.append(c.center)
                wts.append(c.weight)
            elif c.kind == "circle":
                th = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
                pts.extend(c.center + c.radius * np.exp(1j * th))
                wts.extend(np.full(n_theta, c.weight / n_theta))
            else:
                th = np.pi * (np.arange(n_theta) + 0.5) / n_theta
                pts.extend(c.center + c.radius * np.exp(1j * th))
                wts.extend(np.full(n_theta, c.weight / n_theta))
        return np.asarray(pts, dtype=complex), np.asarray(wts, dtype=float)


def green(kind: str, z: complex, w: complex) -> float:
    """Green function of the half-plane GFF.

    dirichlet: -log|z-w| + log|z-conj(w)|;  free: -log|z-w| - log|z-conj(w)|.
    """
    z, w = complex(z), complex(w)
    if z == w:
        raise SingularityError("green function evaluated on the diagonal")
    if z.imag <= 0 or w.imag <= 0:
        raise DomainError("green function arguments must lie in the open half-plane")
    a = -np.log(abs(z - w))
    b = np.log(abs(z - np.conj(w)))
    if kind == DIRICHLET:
        return float(a + b)
    if kind == FREE:
        return float(a - b)
    raise DomainError(f"unknown boundary kind {kind!r}")


def _two_circle_log_avg(c1: complex, r1: float, c2: complex, r2: float) -> float:
    """Double circle average of log|z-w| over |z-c1|=r1, |w-c2|=r2.

    Uses the mean-value identity avg_{|z-c|=r} log|z-w| = log max(|c-w|, r)
    in the separated and nested cases, angular quadrature otherwise.
    """
    if r1 < r2:  # make r1 the larger radius; the average is symmetric
        c1, r1, c2, r2 = c2, r2, c1, r1
    d = abs(c1 - c2)
    if r2 == 0.0:
        return float(np.log(max(d, r1)))
    if d >= r1 + r2:
        return float(np.log(d))
    if r1 >= d + r2:
        return float(np.log(r1))
    th = 2 * np.pi * (np.arange(_N_THETA_QUAD) + 0.5) / _N_THETA_QUAD
    w = c2 + r2 * np.exp(1j * th)
    return float(np.mean(np.log(np.maximum(np.abs(c1 - w), r1))))


def _pair_components(boundary: str, a: Component, b: Component) -> float:
    """Covariance contribution of two components under the Green kernel."""
    if a.kind == "semicircle" or b.kind == "semicircle":
        if boundary != FREE:
            raise AdmissibilityError(
                "boundary semicircle averages are only defined for the free field"
            )
        # real-centered semicircle + mirror image collapse to a full circle
        # with kernel weight -2
        val = -2.0 * _two_circle_log_avg(a.center, a.radius, b.center, b.radius)
        return a.weight * b.weight * val
    if a.kind == "point" and b.kind == "point" and a.center == b.center:
        raise SingularityError("coincident point masses have infinite covariance")
    direct = -_two_circle_log_avg(a.center, a.radius, b.center, b.radius)
    mirror = _two_circle_log_avg(a.center, a.radius, np.conj(b.center), b.radius)
    if boundary == DIRICHLET:
        return a.weight * b.weight * (direct + mirror)
    if boundary == FREE:
        return a.weight * b.weight * (direct - mirror)
    raise DomainError(f"unknown boundary kind {boundary!r}")


def _check_admissible(boundary: str, fs: Sequence[LinearFunctional]):
    if boundary != FREE:
        return
    for f in fs:
        if f.boundary_only:
            # fixed-constant convention: boundary semicircle averages are
            # paired with the free field directly, mass need not vanish
            continue
        if f.components and abs(f.mass) > 1e-10:
            raise AdmissibilityError(
                f"functional {f.label!r} has mass {f.mass:.3g}; "
                "free-boundary pairings require zero total mass"
            )


def gram_matrix(boundary: str, fs: Sequence[LinearFunctional]) -> np.ndarray:
    """Covariance matrix of the field pairings of the functional family."""
    _check_admissible(boundary, fs)
    M = len(fs)
    gram = np.zeros((M, M))
    for i in range(M):
        for j in range(i, M):
            s = 0.0
            for a in fs[i].components:
                for b in fs[j].components:
                    s += _pair_components(boundary, a, b)
            gram[i, j] = gram[j, i] = s
    return gram


def gram_pullback(
    boundary: str,
    fs: Sequence[LinearFunctional],
    base_gram: np.ndarray,
    nodes: Sequence[np.ndarray],
    weights: Sequence[np.ndarray],
    mapped: Sequence[np.ndarray],
    log_deriv: Sequence[np.ndarray],
) -> np.ndarray:
    """Covariance of pairings of the field composed with a conformal map.

    For phi mapping the tracked nodes z_k to ``mapped`` points, the pulled
    covariance is G(phi z, phi w) = G(z, w) + S(z, w) with S smooth across
    the diagonal; the base gram carries the singular part exactly and S is
    integrated by the node quadrature.  Diagonal limit of the direct term
    is -log|phi'(z)|, supplied via ``log_deriv`` = log phi'(z_k).
    """
    M = len(fs)
    gram = np.array(base_gram, dtype=float, copy=True)
    sgn = -1.0 if boundary == FREE else 1.0

    def corr(za, fa, la, zb, fb, lb):
        dz = za[:, None] - zb[None, :]
        df = fa[:, None] - fb[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = -np.log(np.abs(df)) + np.log(np.abs(dz))
        diag = np.abs(dz) < 1e-14
        if diag.any():
            ii, jj = np.nonzero(diag)
            direct[ii, jj] = -la[ii].real  # -log|phi'|
        mir_new = np.log(np.abs(fa[:, None] - np.conj(fb)[None, :]))
        mir_old = np.log(np.abs(za[:, None] - np.conj(zb)[None, :]))
        return direct + sgn * (mir_new - mir_old)

    for i in range(M):
        for j in range(i, M):
            S = corr(nodes[i], mapped[i], log_deriv[i],
                     nodes[j], mapped[j], log_deriv[j])
            val = weights[i] @ S @ weights[j]
            gram[i, j] += val
            if j > i:
                gram[j, i] += val
    return gram


@dataclass
class PairingSample:
    gram: np.ndarray
    samples: np.ndarray  # (replicas, M)
    seed: int


def _psd_factor(gram: np.ndarray) -> np.ndarray:
    if gram.size == 0:
        return gram.reshape(0, 0)
    evals, vecs = np.linalg.eigh(gram)
    scale = max(abs(evals).max(), 1.0)
    if evals.min() < -1e-10 * scale:
        raise FactorizationError(f"gram matrix has negative eigenvalue {evals.min():.3e}")
    return vecs * np.sqrt(np.clip(evals, 0.0, None))


def sample_pairings(boundary: str, fs: Sequence[LinearFunctional],
                    replicas: int, seed: int) -> PairingSample:
    """Independent mean-zero Gaussian draws of the pairing vector."""
    gram = gram_matrix(boundary, fs)
    fac = _psd_factor(gram)
    rng = make_generator(seed)
    z = rng.standard_normal((replicas, len(fs)))
    return PairingSample(gram=gram, samples=z @ fac.T, seed=seed)


@dataclass(frozen=True)
class Decoration:
    """Deterministic harmonic decoration anchored at ordered boundary points."""

    kind: str  # log | arg | orthant
    anchors: np.ndarray
    weights: np.ndarray  # alpha_i (log, orthant) or beta_i (arg)

    def __post_init__(self):
        object.__setattr__(self, "anchors", np.asarray(self.anchors, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        if w.ndim == 0:
            w = np.full(self.anchors.size, float(w))
        object.__setattr__(self, "weights", w)
        if self.kind not in ("log", "arg", "orthant"):
            raise DomainError(f"unknown decoration kind {self.kind!r}")
        if np.any(np.diff(self.anchors) <= 0):
            raise DomainError("decoration anchors must be strictly increasing")
        if self.weights.size != self.anchors.size:
            raise DomainError("weights and anchors must have equal length")


@dataclass(frozen=True)
class FieldModel:
    """GFF specification: boundary condition, LQG parameters, decorations."""

    boundary: str = FREE
    domain: str = "halfplane"
    gamma: float = 1.0
    chi: float = 0.0
    decorations: tuple = ()

    def __post_init__(self):
        if not (0 < self.gamma < 2):
            raise DomainError("gamma must lie in (0, 2)")
        if self.boundary not in (DIRICHLET, FREE):
            raise DomainError(f"unknown boundary {self.boundary!r}")
        if self.domain not in ("halfplane", "orthant"):
            raise DomainError(f"unknown domain {self.domain!r}")

    @property
    def Q(self) -> float:
        return 2.0 / self.gamma + self.gamma / 2.0


def decoration_eval(model: FieldModel, kind: str, z) -> np.ndarray:
    """Deterministic decoration value at z (scalar or array).

    log:      sum_i alpha_i log|z - x_i|
    arg:      -sum_i beta_i arg(z - x_i)   (beta_i = 2/sqrt(kappa) canonical)
    orthant:  sum_i alpha_i (log|z-x_i| + log|z+x_i|) + Q log|z|
    """
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape)
    found = False
    for dec in model.decorations:
        if dec.kind != kind:
            continue
        found = True
        dist = np.abs(z[..., None] - dec.anchors)
        if np.any(dist < 1e-14):
            raise SingularityError("decoration evaluated at an anchor point")
        if kind == "log":
            out = out + (dec.weights * np.log(dist)).sum(axis=-1)
        elif kind == "arg":
            ang = np.angle(z[..., None] - dec.anchors)
            out = out - (dec.weights * ang).sum(axis=-1)
        else:
            dist2 = np.abs(z[..., None] + dec.anchors)
            if np.any(dist2 < 1e-14) or np.any(np.abs(z) < 1e-14):
                raise SingularityError("decoration evaluated at an anchor point")
            out = out + (dec.weights * (np.log(dist) + np.log(dist2))).sum(axis=-1)
            out = out + model.Q * np.log(np.abs(z))
    if not found:
        raise DomainError(f"model carries no decoration of kind {kind!r}")
    return out if out.shape else float(out)


def boundary_semicircle_grid(interval, eps: float, spacing: Optional[float] = None):
    """Semicircle-average functionals on a uniform grid of the interval."""
    a, b = float(interval[0]), float(interval[1])
    if b <= a:
        raise DomainError("empty interval")
    dx = spacing if spacing is not None else eps
    if dx > eps * (1 + 1e-12):
        raise GridError(f"grid spacing {dx} exceeds the regularization scale {eps}")
    K = int(np.ceil((b - a) / dx))
    xs = a + (np.arange(K) + 0.5) * (b - a) / K
    fs = [LinearFunctional.boundary_semicircle(x, eps) for x in xs]
    return xs, fs


def quantum_boundary_length(model: FieldModel, interval, eps: float,
                            field_draw: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Fixed-eps boundary measure eps^{gamma^2/4} e^{gamma h_eps/2} dx.

    ``field_draw`` holds h_eps values (decoration included) at the grid
    points; shape (replicas, K) or (K,).  No eps -> 0 limit is taken.
    """
    a, b = float(interval[0]), float(interval[1])
    h = np.atleast_2d(np.asarray(field_draw, dtype=float))
    grid = np.asarray(grid, dtype=float)
    if grid.size != h.shape[1]:
        raise GridError("grid and field_draw sizes disagree")
    if grid.size > 1 and np.diff(grid).max() > eps * (1 + 1e-9):
        raise GridError("grid spacing must not exceed eps")
    dx = (b - a) / grid.size
    g = model.gamma
    lengths = (eps ** (g * g / 4.0) * np.exp(0.5 * g * h)).sum(axis=1) * dx
    return lengths if np.asarray(field_draw).ndim > 1 else float(lengths[0])


def quantum_area(model: FieldModel, region, eps: float,
                 field_draw: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Thin 2-d wrapper: eps^{gamma^2} e^{gamma h_eps} dA over grid cells.

    ``grid`` is the array of cell centers (complex), ``region`` a
    (width, height) pair fixing the total area of the covered rectangle.
    """
    h = np.atleast_2d(np.asarray(field_draw, dtype=float))
    grid = np.asarray(grid)
    if grid.size != h.shape[1]:
        raise GridError("grid and field_draw sizes disagree")
    dA = (float(region[0]) * float(region[1])) / grid.size
    g = model.gamma
    areas = (eps ** (g * g) * np.exp(g * h)).sum(axis=1) * dA
    return areas if np.asarray(field_draw).ndim > 1 else float(areas[0])


def functionals_to_json(fs: Sequence[LinearFunctional]) -> str:
    spec = [
        {
            "kind": f.kind,
            "label": f.label,
            "components": [
                {"center": [c.center.real, c.center.imag], "radius": c.radius,
                 "weight": c.weight, "kind": c.kind}
                for c in f.components
            ],
        }
        for f in fs
    ]
    return json.dumps(spec, indent=2)


def samples_to_csv(ps: PairingSample) -> str:
    buf = io.StringIO()
    M = ps.samples.shape[1]
    buf.write("replica," + ",".join(f"f{i + 1}" for i in range(M)) + "\n")
    for r, row in enumerate(ps.samples):
        buf.write(str(r) + "," + ",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()

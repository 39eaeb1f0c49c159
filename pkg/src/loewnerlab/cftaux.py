"""Scalar CFT bookkeeping: conformal weights, annihilation operators on
power-product auxiliary functions, and the driving drift they induce.

The auxiliary function is Z(x) = prod_{i<j} (x_i - x_j)^p.  All
derivatives of Z are taken through closed-form log-derivatives, so the
operators are evaluated without forming Z itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .particles import ParticleConfig

__all__ = ["AuxiliaryFunctionSpec", "weights", "annihilation_residual", "drift_from_Z"]


@dataclass(frozen=True)
class AuxiliaryFunctionSpec:
    """Power-product auxiliary function Z = prod_{i<j}(x_i-x_j)^p.

    Canonical exponents are p = 2/kappa (forward) and p = -2/kappa
    (reverse); arbitrary p is allowed for negative controls.
    """

    p: float
    kappa: float
    side: str = "forward"

    def __post_init__(self):
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")
        if self.side not in ("forward", "reverse"):
            raise DomainError(f"unknown side {self.side!r}")


def weights(kappa: float) -> dict:
    """Conformal weights h_kappa, h^R_kappa and central charge c^R_kappa."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    return {
        "h_kappa": (kappa - 6.0) / (2.0 * kappa),
        "h_kappa_R": -(kappa + 6.0) / (2.0 * kappa),
        "c_kappa_R": 1.0 + 3.0 * (kappa + 4.0) ** 2 / (2.0 * kappa),
    }


def _inv_sums(pts: np.ndarray):
    """sum_{j != i} 1/(x_i-x_j) and sum_{j != i} 1/(x_i-x_j)^2 per i."""
    if np.any(np.diff(pts) <= 0):
        raise DomainError("coincident or unordered points")
    if pts.size == 1:
        return np.zeros(1), np.zeros(1)
    diff = pts[:, None] - pts[None, :]
    np.fill_diagonal(diff, np.inf)
    inv = 1.0 / diff
    return inv.sum(axis=1), (inv**2).sum(axis=1)


def _log_derivatives(p: float, pts: np.ndarray, i: int):
    """(d_i log Z, d_i^2 log Z, and d_j log Z for all j) in closed form."""
    s1, s2 = _inv_sums(pts)
    return p * s1[i], -p * s2[i], p * s1


def annihilation_residual(spec: AuxiliaryFunctionSpec, x: ParticleConfig, i: int) -> float:
    """Relative residual (D_i Z)/Z of the degenerate-weight operator.

    forward: D_i = (kappa/2) d_i^2 + 2 sum_{j!=i} [ (1/(x_j-x_i)) d_j
             - h_kappa/(x_j-x_i)^2 ]
    reverse: same form with -(kappa/2) d_i^2, reversed first-order sign
             and weight h^R_kappa.
    Division by Z turns d_i^2 into (d_i log Z)^2 + d_i^2 log Z.
    """
    pts = x.points
    if not (0 <= i < pts.size):
        raise DomainError("index out of range")
    d1, d2, dall = _log_derivatives(spec.p, pts, i)
    w = weights(spec.kappa)
    others = np.arange(pts.size) != i
    inv = 1.0 / (pts[others] - pts[i]) if others.any() else np.zeros(0)
    second = 0.5 * spec.kappa * (d1 * d1 + d2)
    if spec.side == "forward":
        first = 2.0 * (inv * dall[others]).sum()
        pot = 2.0 * w["h_kappa"] * (inv**2).sum()
    else:
        first = -2.0 * (inv * dall[others]).sum()
        pot = 2.0 * w["h_kappa_R"] * (inv**2).sum()
    scale = max(abs(second), abs(first), abs(pot), 1.0)
    return float(abs(second + first + pot) / scale)


def drift_from_Z(spec: AuxiliaryFunctionSpec, x: ParticleConfig) -> np.ndarray:
    """Driving drift induced by Z: kappa d_i log Z +/- sum_j 2/(x_i-x_j).

    The interaction sign is + for the forward system and - for the
    reverse one; canonical exponents reproduce +/- sum 4/(x_i-x_j).
    """
    pts = x.points
    s1, _ = _inv_sums(pts)
    sgn = 1.0 if spec.side == "forward" else -1.0
    return spec.kappa * spec.p * s1 + sgn * 2.0 * s1

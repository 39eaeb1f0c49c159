"""Interacting-particle driving processes on the line and half-line.

Simulates the Dyson model, the Wishart process, inhomogeneous driving
systems and custom-drift systems with Euler-Maruyama stepping, exposes
exact drift evaluation, and supports time reversal of stored paths.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CollisionFailure, DomainError, GridError, NumericalBlowup
from .rng import make_generator

__all__ = [
    "ParticleConfig",
    "DrivingModel",
    "DrivingPath",
    "canonical_model",
    "simulate_driving",
    "drift_eval",
    "time_reverse",
    "path_to_csv",
]

FULL_LINE = "full-line"
POSITIVE_HALF_LINE = "positive-half-line"

# Minimum admissible gap between neighbours after an accepted step.
GAP_FLOOR = 1e-9
MAX_HALVINGS = 40


@dataclass(frozen=True)
class ParticleConfig:
    """Strictly ordered N-point configuration on R or R_{>0}."""

    points: np.ndarray
    chamber: str = FULL_LINE

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 1:
            raise DomainError("configuration must be a non-empty 1-d sequence")
        if not np.all(np.diff(pts) > 0):
            raise DomainError("points must be strictly increasing")
        if self.chamber == POSITIVE_HALF_LINE and pts[0] <= 0:
            raise DomainError("half-line configuration requires points[0] > 0")
        if self.chamber not in (FULL_LINE, POSITIVE_HALF_LINE):
            raise DomainError(f"unknown chamber {self.chamber!r}")

    @property
    def N(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class DrivingModel:
    """Specification of the interacting-particle driving SDE.

    kind "dyson":  dX_i = sqrt(kappa) dB_i + (beta/2) sum_j 1/(X_i-X_j) dt
    kind "wishart": adds ((beta(nu+1)-1)/2)/X_i and the mirror-image sum
    kind "inhomogeneous": per-particle noise sqrt(kappa_i) and the drift
        (2/alpha_i) sum_j (alpha_i lambda_j + alpha_j lambda_i)/(x_i - x_j)
    kind "custom": drift supplied as a callable x -> R^N
    """

    kind: str
    N: int
    kappa: float = 1.0
    beta: float = 2.0
    nu: float = 0.0
    delta: float = 0.0
    lambdas: Optional[np.ndarray] = None
    kappas: Optional[np.ndarray] = None
    alphas: Optional[np.ndarray] = None
    drift: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in ("dyson", "wishart", "inhomogeneous", "custom"):
            raise DomainError(f"unknown driving kind {self.kind!r}")
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")
        if self.kind in ("dyson", "wishart") and self.beta <= 0:
            raise DomainError("beta must be positive")
        if self.kind == "wishart" and self.nu <= -1:
            raise DomainError("nu must exceed -1")
        for name in ("lambdas", "kappas", "alphas"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, np.asarray(v, dtype=float))
        if self.lambdas is not None:
            if np.any(self.lambdas <= 0):
                raise DomainError("each lambda_i must be positive")
            if abs(self.lambdas.sum() - self.N) > 1e-12:
                raise DomainError("lambdas must sum to N")
        if self.kappas is not None and np.any(self.kappas <= 0):
            raise DomainError("each kappa_i must be positive")
        if self.kind == "custom" and self.drift is None:
            raise DomainError("custom kind requires a drift callable")

    @property
    def chamber(self) -> str:
        return POSITIVE_HALF_LINE if self.kind == "wishart" else FULL_LINE

    def noise_scales(self) -> np.ndarray:
        if self.kind == "inhomogeneous" and self.kappas is not None:
            return np.sqrt(self.kappas)
        return np.full(self.N, np.sqrt(self.kappa))


def canonical_model(N: int, kappa: float) -> DrivingModel:
    """Driving of the canonical multiple SLE coupling.

    The time change of the Dyson model with beta = 8/kappa: noise scale
    sqrt(kappa) and drift sum_j 4/(x_i - x_j).
    """
    return DrivingModel(
        kind="custom",
        N=N,
        kappa=kappa,
        beta=8.0 / kappa,
        drift=lambda x: _pairwise_inverse_sum(x) * 4.0,
    )


def _pairwise_inverse_sum(x: np.ndarray) -> np.ndarray:
    """sum_{j != i} 1/(x_i - x_j) for each i."""
    if x.size == 1:
        return np.zeros(1)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, np.inf)
    return (1.0 / diff).sum(axis=1)


def _model_drift(model: DrivingModel, x: np.ndarray) -> np.ndarray:
    if model.kind == "dyson":
        return 0.5 * model.beta * _pairwise_inverse_sum(x)
    if model.kind == "wishart":
        rep = 0.5 * model.beta * _pairwise_inverse_sum(x)
        if x.size > 1:
            mirror = x[:, None] + x[None, :]
            np.fill_diagonal(mirror, np.inf)
            rep = rep + 0.5 * model.beta * (1.0 / mirror).sum(axis=1)
        rep = rep + 0.5 * (model.beta * (model.nu + 1.0) - 1.0) / x
        return rep
    if model.kind == "inhomogeneous":
        cfg = ParticleConfig(x)
        return np.asarray(drift_eval("inhomogeneous", model, cfg))
    return np.asarray(model.drift(x), dtype=float)


@dataclass(frozen=True)
class DrivingPath:
    """Discretized driving process on a uniform grid with stored noise."""

    times: np.ndarray
    values: np.ndarray  # (K+1, N)
    noise: np.ndarray  # (K, N) standard-normal increments actually used
    seed: int
    model: DrivingModel
    chamber: str = FULL_LINE

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if self.times.size > 1 else 0.0

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def N(self) -> int:
        return self.values.shape[1]

    def index_of(self, t: float) -> int:
        """Grid index of time t; GridError if t is off-grid."""
        k = int(round(t / self.dt)) if self.dt else 0
        if k < 0 or k >= self.times.size or abs(self.times[k] - t) > 1e-9 * max(1.0, self.dt):
            raise GridError(f"time {t} is not on the grid (dt={self.dt})")
        return k

    def at(self, t: float) -> np.ndarray:
        """Piecewise-linear interpolation of the driving values at time t."""
        ts = self.times
        if t <= ts[0]:
            return self.values[0]
        if t >= ts[-1]:
            return self.values[-1]
        k = min(int(t / self.dt), ts.size - 2)
        w = (t - ts[k]) / self.dt
        return (1.0 - w) * self.values[k] + w * self.values[k + 1]


def drift_eval(scheme: str, model: DrivingModel, x: ParticleConfig) -> np.ndarray:
    """Exact drift of the driving SDE at configuration x.

    "canonical":  F_i = sum_{j != i} 4/(x_i - x_j)
    "inhomogeneous":  F_i = (2/alpha_i) sum (alpha_i lam_j + alpha_j lam_i)/(x_i - x_j)
    "from_aux_function":  kappa d_i log Z + sum 2/(x_i - x_j) for the canonical
        power-product auxiliary function Z.
    """
    pts = x.points
    if np.any(np.diff(pts) <= 0):
        raise DomainError("coincident or unordered points")
    if scheme == "canonical":
        return 4.0 * _pairwise_inverse_sum(pts)
    if scheme == "inhomogeneous":
        lam = model.lambdas if model.lambdas is not None else np.ones(pts.size)
        alp = model.alphas if model.alphas is not None else np.full(pts.size, 1.0)
        if np.any(alp == 0):
            raise DomainError("alphas must be nonzero for the inhomogeneous drift")
        if pts.size == 1:
            return np.zeros(1)
        diff = pts[:, None] - pts[None, :]
        np.fill_diagonal(diff, np.inf)
        num = alp[:, None] * lam[None, :] + alp[None, :] * lam[:, None]
        return (2.0 / alp) * (num / diff).sum(axis=1)
    if scheme == "from_aux_function":
        from .cftaux import AuxiliaryFunctionSpec, drift_from_Z

        spec = AuxiliaryFunctionSpec(p=2.0 / model.kappa, kappa=model.kappa, side="forward")
        return drift_from_Z(spec, x)
    raise DomainError(f"unknown drift scheme {scheme!r}")


def _ordered(x: np.ndarray, chamber: str) -> bool:
    if not np.all(np.isfinite(x)):
        raise NumericalBlowup("non-finite particle value")
    ok = np.all(np.diff(x) >= GAP_FLOOR) if x.size > 1 else True
    if chamber == POSITIVE_HALF_LINE:
        ok = ok and x[0] >= GAP_FLOOR
    return bool(ok)


def _step(model, x, dw, dt, sig, chamber, bridge_rng, depth=0):
    """One Euler-Maruyama step with Brownian-bridge halving on collision."""
    prop = x + sig * dw + _model_drift(model, x) * dt
    if _ordered(prop, chamber):
        return prop
    if depth >= MAX_HALVINGS:
        raise CollisionFailure(
            f"ordering violated after {MAX_HALVINGS} halvings (gap floor {GAP_FLOOR})"
        )
    # Brownian bridge: split the increment over two half steps.
    half = 0.5 * dw + np.sqrt(0.25 * dt) / np.sqrt(dt) * bridge_rng.standard_normal(x.size)
    mid = _step(model, x, half, 0.5 * dt, sig * np.sqrt(0.5), chamber, bridge_rng, depth + 1)
    return _step(model, mid, dw - half, 0.5 * dt, sig * np.sqrt(0.5), chamber, bridge_rng, depth + 1)


def simulate_driving(
    model: DrivingModel,
    x0: ParticleConfig,
    T: float,
    dt: float,
    seed: int,
    zero_noise: bool = False,
) -> DrivingPath:
    """Simulate the driving SDE on the uniform grid t_k = k dt up to T.

    ``zero_noise`` is a test hook replacing the Gaussian increments by
    zeros so that deterministic ODE oracles apply.
    """
    if dt <= 0 or T <= 0 or dt > T * (1 + 1e-12):
        raise DomainError("require 0 < dt <= T")
    if x0.chamber != model.chamber:
        raise DomainError(f"initial configuration must live in chamber {model.chamber!r}")
    if x0.N != model.N:
        raise DomainError("x0 size does not match model.N")
    if model.kind in ("dyson", "wishart") and model.beta < 1:
        raise DomainError("beta < 1 (colliding regime) is not supported")

    K = int(np.ceil(T / dt - 1e-12))
    rng = make_generator(seed, stream=0)
    bridge_rng = make_generator(seed, stream=1)
    noise = rng.standard_normal((K, model.N))
    if zero_noise:
        noise = np.zeros_like(noise)
    sig = model.noise_scales()

    values = np.empty((K + 1, model.N))
    values[0] = x0.points
    x = x0.points.copy()
    scale = np.sqrt(dt)
    for k in range(K):
        x = _step(model, x, scale * noise[k], dt, sig, model.chamber, bridge_rng)
        values[k + 1] = x
    times = dt * np.arange(K + 1)
    return DrivingPath(times=times, values=values, noise=noise, seed=seed,
                       model=model, chamber=model.chamber)


def time_reverse(path: DrivingPath, T: float) -> DrivingPath:
    """Path of Y_t = X_{T-t} on [0, T]; reversing twice is the identity."""
    m = path.index_of(T)
    values = path.values[m::-1].copy()
    noise = -path.noise[m - 1 :: -1].copy() if m > 0 else path.noise[:0].copy()
    return replace(path, times=path.times[: m + 1].copy(), values=values, noise=noise)


def path_to_csv(path: DrivingPath) -> str:
    """CSV export with header t,x1,...,xN and 17-significant-digit floats."""
    buf = io.StringIO()
    cols = ",".join(f"x{i + 1}" for i in range(path.N))
    buf.write(f"t,{cols}\n")
    data = np.column_stack([path.times, path.values])
    np.savetxt(buf, data, fmt="%.17g", delimiter=",")
    return buf.getvalue()

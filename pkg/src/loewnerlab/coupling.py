"""Ito drift audits and Monte Carlo stationarity tests of the
field/Loewner couplings.

The interpolating processes are audited in closed form: their Ito drift
is assembled term by term (no partial-fraction simplification), so a
vanishing residual certifies the local-martingale property at the
evaluated state, and any parameter perturbation surfaces as a nonzero
residual.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DomainError, EarlyStopError, SupportError
from .field import (
    DIRICHLET,
    FREE,
    Decoration,
    FieldModel,
    LinearFunctional,
    _psd_factor,
    decoration_eval,
    gram_matrix,
    gram_pullback,
)
from .loewner import InversionFailure, MapEvaluator, evolve_points, invert_points
from .particles import (
    DrivingModel,
    DrivingPath,
    ParticleConfig,
    canonical_model,
    drift_eval,
    simulate_driving,
)
from .rng import make_generator

__all__ = [
    "CouplingState",
    "DriftAuditReport",
    "CrossVariationReport",
    "CuttingRecipe",
    "StationarityReport",
    "drift_audit",
    "martingale_weight",
    "solve_alpha",
    "cross_variation_check",
    "cutting_operation",
    "stationarity_test",
]

WELDING = "welding"
FLOWLINE = "flowline"
INHOMOGENEOUS = "inhomogeneous-welding"


def martingale_weight(alpha: float, kappa: float, lam: float, gamma: float) -> float:
    """C(alpha, kappa, lambda, gamma) = -(lambda + kappa/4) alpha + Q lambda."""
    Q = 2.0 / gamma + gamma / 2.0
    return -(lam + kappa / 4.0) * alpha + Q * lam


def solve_alpha(kappa: float, lam: float, gamma: float) -> float:
    """The unique alpha with C(alpha, kappa, lambda, gamma) = 0."""
    Q = 2.0 / gamma + gamma / 2.0
    return Q * lam / (lam + kappa / 4.0)


@dataclass(frozen=True)
class CouplingState:
    """State of an interpolating process at a fixed time.

    welding / inhomogeneous-welding: map_point is f^T_t(z), particles are
    Y_{T;t}, weights are the log-decoration alphas.  flowline: map_point
    is g_t(z), particles are X_t, weights are the arg-decoration betas.
    """

    mode: str
    particles: ParticleConfig
    map_point: complex
    kappa: float
    gamma: Optional[float] = None
    chi: Optional[float] = None
    weights: Optional[np.ndarray] = None
    lambdas: Optional[np.ndarray] = None
    kappas: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.mode not in (WELDING, FLOWLINE, INHOMOGENEOUS):
            raise DomainError(f"unknown coupling mode {self.mode!r}")
        N = self.particles.N
        for name, default in (
            ("weights", None),
            ("lambdas", np.ones(N)),
            ("kappas", np.full(N, self.kappa)),
        ):
            v = getattr(self, name)
            v = default if v is None else np.asarray(v, dtype=float)
            object.__setattr__(self, name, v)
        if self.weights is None or self.weights.size != N:
            raise DomainError("per-particle decoration weights are required")
        if self.mode in (WELDING, INHOMOGENEOUS) and self.gamma is None:
            raise DomainError("welding modes require gamma")
        if self.mode == FLOWLINE and self.chi is None:
            raise DomainError("flowline mode requires chi")
        if self.mode == INHOMOGENEOUS and abs(self.lambdas.sum() - N) > 1e-12:
            raise DomainError("lambdas must sum to N")
        if np.min(np.abs(complex(self.map_point) - self.particles.points)) < 1e-12:
            raise DomainError("map_point must avoid the particle set")

    @staticmethod
    def welding_canonical(gamma: float, particles: ParticleConfig,
                          map_point: complex) -> "CouplingState":
        kappa = gamma * gamma
        return CouplingState(
            mode=WELDING, particles=particles, map_point=map_point,
            kappa=kappa, gamma=gamma,
            weights=np.full(particles.N, 2.0 / gamma),
        )

    @staticmethod
    def flowline_canonical(kappa: float, particles: ParticleConfig,
                           map_point: complex) -> "CouplingState":
        sk = np.sqrt(kappa)
        return CouplingState(
            mode=FLOWLINE, particles=particles, map_point=map_point,
            kappa=kappa, chi=2.0 / sk - sk / 2.0,
            weights=np.full(particles.N, 2.0 / sk),
        )


@dataclass
class DriftAuditReport:
    mode: str
    drift: complex
    loadings: np.ndarray
    residual: float
    params: dict

    def to_json(self) -> str:
        return json.dumps({
            "mode": self.mode,
            "params": {k: (list(v) if isinstance(v, np.ndarray) else v)
                       for k, v in self.params.items()},
            "drift_re": self.drift.real,
            "drift_im": self.drift.imag,
            "residual": self.residual,
            "loadings": [[c.real, c.imag] for c in self.loadings],
        }, indent=2)


def _default_forward_drift(state: CouplingState) -> np.ndarray:
    if state.mode == INHOMOGENEOUS:
        model = DrivingModel(kind="inhomogeneous", N=state.particles.N,
                             kappa=state.kappa, lambdas=state.lambdas,
                             kappas=state.kappas, alphas=state.weights)
        return drift_eval("inhomogeneous", model, state.particles)
    model = DrivingModel(kind="custom", N=state.particles.N, kappa=state.kappa,
                         drift=lambda x: np.zeros_like(x))
    return drift_eval("canonical", model, state.particles)


def drift_audit(state: CouplingState, F: Optional[np.ndarray] = None) -> DriftAuditReport:
    """Exact Ito drift of the interpolating process at the given state.

    welding: for the complex process sum alpha_i log(f - Y_i) + Q log f',
    with the reverse flow df = -sum 2 lambda_j/(f - Y_j) dt and particles
    dY_i = sqrt(kappa_i) dB_i - F_i dt (F the forward driving drift,
    sign flipped by time reversal), the drift is assembled as

      sum_i alpha_i [ -sum_j 2 lambda_j / ((f-Y_j)(f-Y_i))
                      + F_i/(f-Y_i) - kappa_i / (2 (f-Y_i)^2) ]
      + Q sum_j 2 lambda_j / (f-Y_j)^2 .

    flowline: for -sum beta_i log(g - X_i) - chi log g' with the forward
    flow and dX_i = sqrt(kappa) dB_i + F_i dt,

      -sum_i beta_i [ sum_j 2/((g-X_j)(g-X_i))
                      - F_i/(g-X_i) - kappa/(2 (g-X_i)^2) ]
      + chi sum_j 2/(g-X_j)^2 .

    ``F`` defaults to the canonical (or inhomogeneous Eq.-level) forward
    drift; pass a perturbed array as a negative control.
    """
    y = state.particles.points
    z = complex(state.map_point)
    inv = 1.0 / (z - y)
    if F is None:
        F = _default_forward_drift(state)
    F = np.asarray(F, dtype=float)
    w = state.weights
    if state.mode in (WELDING, INHOMOGENEOUS):
        lam = state.lambdas
        kap = state.kappas
        Q = 2.0 / state.gamma + state.gamma / 2.0
        cross = (2.0 * lam * inv).sum() * inv  # sum_j 2 lam_j inv_j * inv_i
        drift = (w * (-cross + F * inv - 0.5 * kap * inv**2)).sum()
        drift += Q * (2.0 * lam * inv**2).sum()
        loadings = -w * np.sqrt(kap) * inv
    else:
        kap = state.kappa
        cross = (2.0 * inv).sum() * inv
        drift = -(w * (cross - F * inv - 0.5 * kap * inv**2)).sum()
        drift += state.chi * (2.0 * inv**2).sum()
        loadings = w * np.sqrt(kap) * inv
    # scale-free residual: poles up to order 2 set the natural magnitude
    scale = max(float(np.abs(inv).max()) ** 2, float(np.abs(inv).max()), 1.0)
    params = {"kappa": state.kappa, "gamma": state.gamma, "chi": state.chi,
              "weights": state.weights, "lambdas": state.lambdas,
              "kappas": state.kappas}
    return DriftAuditReport(mode=state.mode, drift=complex(drift),
                            loadings=loadings,
                            residual=float(abs(drift)) / scale, params=params)


@dataclass
class CrossVariationReport:
    mode: str
    lhs: float
    rhs: float
    discrepancy: float
    green_monotone: bool
    T: float


def cross_variation_check(mode: str, driving: DrivingPath, z: complex,
                          w: complex, T: float,
                          ode_step: float = 1e-3) -> CrossVariationReport:
    """Integrated cross variation against the Green-function decrement.

    welding-free: along the reverse flow driven by the given path,
      int_0^T sum_i Re[2/(f(z)-Y_i)] Re[2/(f(w)-Y_i)] dt
      = G^Fr(z, w) - G^Fr(f_T z, f_T w).
    flowline-dirichlet: along the forward flow,
      int_0^T sum_i Im[2/(g(z)-X_i)] Im[2/(g(w)-X_i)] dt
      = G^Dir(z, w) - G^Dir(g_T z, g_T w).
    """
    from .field import green

    if mode not in ("welding-free", "flowline-dirichlet"):
        raise DomainError(f"unknown cross-variation mode {mode!r}")
    if complex(z) == complex(w):
        raise DomainError("z and w must be distinct")
    direction = "reverse" if mode == "welding-free" else "forward"
    kind = FREE if mode == "welding-free" else DIRICHLET
    part = (lambda c: c.real) if mode == "welding-free" else (lambda c: c.imag)
    ev = MapEvaluator(driving=driving, direction=direction, ode_step=ode_step)
    k_end = driving.index_of(T)

    pts = np.array([z, w], dtype=complex)
    greens = [green(kind, pts[0], pts[1])]

    def rate(p, x):
        a = 2.0 / (p[0] - x)
        b = 2.0 / (p[1] - x)
        return float((part(a) * part(b)).sum())

    lhs = 0.0
    r_prev = rate(pts, driving.values[0])
    for k in range(k_end):
        t0, t1 = driving.times[k], driving.times[k + 1]
        sub = MapEvaluator(driving=driving, direction=direction, ode_step=ode_step)
        # advance one grid cell; reuse of the evaluator keeps no state, so
        # integrate incrementally by shifting the time origin
        res = _advance_cell(ev, pts, t0, t1)
        if res is None:
            usable = t0
            raise EarlyStopError(
                f"tracked point swallowed at t={usable}", usable_horizon=usable
            )
        pts = res
        r_next = rate(pts, driving.values[k + 1])
        lhs += 0.5 * (r_prev + r_next) * (t1 - t0)
        r_prev = r_next
        greens.append(green(kind, pts[0], pts[1]))
    rhs = greens[0] - greens[-1]
    gr = np.asarray(greens)
    monotone = bool(np.all(np.diff(gr) <= 1e-9))
    scale = max(abs(rhs), abs(lhs), 1e-6)
    return CrossVariationReport(mode=mode, lhs=lhs, rhs=rhs,
                                discrepancy=abs(lhs - rhs) / scale,
                                green_monotone=monotone, T=float(driving.times[k_end]))


def _advance_cell(ev: MapEvaluator, pts: np.ndarray, t0: float, t1: float):
    """One driving cell of evolution for a small batch of points.

    Returns None if any point is swallowed.  Works on a shifted driving
    path so that evolve_points can be reused between grid times.
    """
    path = ev.driving
    k0 = path.index_of(t0)
    k1 = path.index_of(t1)
    from .particles import DrivingPath

    sub = DrivingPath(
        times=path.times[k0 : k1 + 1] - t0,
        values=path.values[k0 : k1 + 1],
        noise=path.noise[k0:k1],
        seed=path.seed,
        model=path.model,
        chamber=path.chamber,
    )
    sub_ev = MapEvaluator(driving=sub, geometry=ev.geometry, direction=ev.direction,
                          ode_step=ev.ode_step, swallow_tolerance=ev.swallow_tolerance,
                          delta=ev.delta, psi=ev.psi, psi_z=ev.psi_z)
    res = evolve_points(sub_ev, pts, t1 - t0)
    if res.swallowed.any():
        return None
    return res.values


@dataclass
class CuttingRecipe:
    """Pullback of a functional family under the inverse Loewner map.

    ``functionals`` are the node-level pushforwards (mapped points, same
    weights); ``mean_offsets`` carry the deterministic Q log|phi'| shift
    per functional; ``gram`` is the covariance of the pulled pairings.
    """

    functionals: list
    mean_offsets: np.ndarray
    gram: np.ndarray
    T: float


def cutting_operation(model: FieldModel, fs: Sequence[LinearFunctional],
                      driving: DrivingPath, T: float,
                      n_theta: int = 16, ode_step: float = 1e-3) -> CuttingRecipe:
    """Pull the functional family back through g_T^{-1}.

    Realizes phi^* H = H o phi + Q log|phi'| with phi = g_T^{-1} at the
    pairing level: nodes are transported by the reverse flow with their
    weights kept (mass-preserving pushforward), and the Q log|phi'|
    term becomes a deterministic per-functional mean offset.
    """
    ev = MapEvaluator(driving=driving, ode_step=ode_step)
    base = gram_matrix(model.boundary, fs)
    pulled, offsets = [], []
    all_centers, all_masses, all_mapped, all_logd = [], [], [], []
    for f in fs:
        nodes, wts = f.nodes(n_theta)
        try:
            res = invert_points(ev, nodes, T, with_log_deriv=True)
        except InversionFailure as exc:
            raise SupportError(f"support of {f.label!r} meets the slit set: {exc}")
        pulled.append(LinearFunctional.point_masses(res.values, wts,
                                                    label=f"pull({f.label})"))
        centers = np.array([c.center for c in f.components], dtype=complex)
        masses = np.array([c.weight for c in f.components])
        cres = invert_points(ev, centers, T, with_log_deriv=True)
        offsets.append(model.Q * float(masses @ cres.log_deriv.real))
        all_centers.append(centers)
        all_masses.append(masses)
        all_mapped.append(cres.values)
        all_logd.append(cres.log_deriv)
    gram = gram_pullback(model.boundary, fs, base, all_centers, all_masses,
                         all_mapped, all_logd)
    return CuttingRecipe(functionals=pulled, mean_offsets=np.asarray(offsets),
                         gram=gram, T=T)


@dataclass
class StationarityReport:
    mode: str
    per_functional: list  # dicts with ks_stat, p_value, moments
    discard_fraction: float
    level: float
    passed: bool
    replicas: int
    sampleA: Optional[np.ndarray] = None  # (replicas, M) pairing draws
    sampleB: Optional[np.ndarray] = None  # (kept replicas, M)

    def to_json(self) -> str:
        return json.dumps({
            "mode": self.mode, "level": self.level, "passed": self.passed,
            "replicas": self.replicas, "discard_fraction": self.discard_fraction,
            "functionals": self.per_functional,
        }, indent=2)


def _functional_centers(fs: Sequence[LinearFunctional]):
    """Sub-bump centers and masses; exact for ring stacks by harmonicity.

    Ring averages of harmonic functions collapse to center values, so
    all deterministic pairings and the smooth pullback correction only
    need the distinct component centers with their masses.
    """
    centers, masses = [], []
    for f in fs:
        cs, ms = [], []
        for c in f.components:
            if c.kind != "circle":
                raise DomainError("stationarity functionals must be interior ring stacks")
            if cs and abs(c.center - cs[-1]) < 1e-15:
                ms[-1] += c.weight
            else:
                cs.append(c.center)
                ms.append(c.weight)
        centers.append(np.asarray(cs, dtype=complex))
        masses.append(np.asarray(ms, dtype=float))
    return centers, masses


def _replica_seed(seed: int, r: int, salt: int) -> int:
    return (seed + 0x9E3779B97F4A7C15 * (r + 1) + salt) & 0xFFFFFFFFFFFFFFFF


def stationarity_test(
    mode: str,
    x0: ParticleConfig,
    T: float,
    param: float,
    fs: Sequence[LinearFunctional],
    replicas: int,
    seed: int,
    dt: float = 1e-3,
    alpha: Optional[float] = None,
    level: float = 0.01,
    max_discard: float = 0.05,
) -> StationarityReport:
    """Two-sample law comparison of the coupling's endpoint fields.

    welding (param = gamma): sample A pairs the free-boundary field
    decorated at the fixed initial configuration x0; sample B drives the
    reverse flow by a fresh diffusion dY = sqrt(kappa) dB - F(Y) dt
    started at x0 (the sign-reversed canonical drift, which is what
    makes the decorated pullback a martingale in the forward filtration
    of Y) and pairs the field decorated at the terminal configuration
    Y_T pulled back through f_T with the Q log|f'| shift.  flowline
    (param = kappa): sample A is the arg-decorated Dirichlet field at
    the fixed initial configuration; sample B transports the evolved
    decoration through the forward map with the -chi arg g' shift.
    Per-functional two-sample KS statistics are Bonferroni-corrected at
    the given level.
    """
    if replicas < 100:
        raise DomainError("at least 100 replicas are required")
    if mode not in (WELDING, FLOWLINE):
        raise DomainError(f"unknown stationarity mode {mode!r}")
    M = len(fs)
    if M == 0:
        raise DomainError("empty functional family")
    N = x0.N
    centers, masses = _functional_centers(fs)

    if mode == WELDING:
        gamma = param
        kappa = gamma * gamma
        a_w = 2.0 / gamma if alpha is None else alpha
        Q = 2.0 / gamma + gamma / 2.0
        boundary = FREE
    else:
        kappa = param
        sk = np.sqrt(kappa)
        chi = 2.0 / sk - sk / 2.0
        a_w = 2.0 / sk if alpha is None else alpha
        boundary = DIRICHLET
    model = canonical_model(N, kappa)
    if mode == WELDING:
        fwd = model.drift
        model = DrivingModel(kind="custom", N=N, kappa=kappa,
                             beta=model.beta, drift=lambda x: -fwd(x))
    base_gram = gram_matrix(boundary, fs)
    base_fac = _psd_factor(base_gram)

    def det_log(anchors, pts):
        # sum_i a_w log|p - x_i| at an array of points
        return a_w * np.log(np.abs(pts[:, None] - anchors[None, :])).sum(axis=1)

    def det_arg(anchors, pts):
        return -a_w * np.angle(pts[:, None] - anchors[None, :]).sum(axis=1)

    rngA = make_generator(seed, stream=2)
    rngB = make_generator(seed, stream=3)
    zA = rngA.standard_normal((replicas, M))
    sampleA = np.empty((replicas, M))
    sampleB = []
    discards = 0

    flat_centers = np.concatenate(centers)
    splits = np.cumsum([c.size for c in centers])[:-1]

    if mode == WELDING:
        detA = np.array([m @ det_log(x0.points, c) for c, m in zip(centers, masses)])
    else:
        detA = np.array([m @ det_arg(x0.points, c) for c, m in zip(centers, masses)])

    for r in range(replicas):
        sampleA[r] = zA[r] @ base_fac.T + detA

        pathB = simulate_driving(model, x0, T, dt, _replica_seed(seed, r, 2))
        if mode == WELDING:
            ev = MapEvaluator(driving=pathB, direction="reverse", ode_step=dt)
            res = evolve_points(ev, flat_centers, T, with_log_deriv=True)
            mapped, logd = res.values, res.log_deriv
        else:
            ev = MapEvaluator(driving=pathB, ode_step=dt)
            res = evolve_points(ev, flat_centers, T, with_log_deriv=True)
            if res.swallowed.any() or np.min(
                np.abs(res.values[:, None] - pathB.values[-1][None, :])
            ) < 0.05:
                discards += 1
                continue
            mapped, logd = res.values, res.log_deriv
        mapped_s = np.split(mapped, splits)
        logd_s = np.split(logd, splits)
        gramB = gram_pullback(boundary, fs, base_gram, centers, masses,
                              mapped_s, logd_s)
        facB = _psd_factor(gramB)
        if mode == WELDING:
            yT = pathB.values[-1]
            detB = np.array([
                m @ (det_log(yT, mp) + Q * ld.real)
                for m, mp, ld in zip(masses, mapped_s, logd_s)
            ])
        else:
            detB = np.array([
                m @ (det_arg(pathB.values[-1], mp) - chi * ld.imag)
                for m, mp, ld in zip(masses, mapped_s, logd_s)
            ])
        sampleB.append(rngB.standard_normal(M) @ facB.T + detB)

    sampleB = np.asarray(sampleB)
    discard_fraction = discards / replicas
    if discard_fraction > max_discard:
        raise DomainError(
            f"discard fraction {discard_fraction:.3f} exceeds {max_discard}"
        )

    corrected = level / M
    per = []
    passed = True
    for a in range(M):
        ks = stats.ks_2samp(sampleA[:, a], sampleB[:, a])
        ok = bool(ks.pvalue >= corrected)
        passed = passed and ok
        per.append({
            "label": fs[a].label,
            "ks_stat": float(ks.statistic),
            "p_value": float(ks.pvalue),
            "meanA": float(sampleA[:, a].mean()),
            "meanB": float(sampleB[:, a].mean()),
            "varA": float(sampleA[:, a].var()),
            "varB": float(sampleB[:, a].var()),
        })
    return StationarityReport(mode=mode, per_functional=per,
                              discard_fraction=float(discard_fraction),
                              level=level, passed=passed, replicas=replicas,
                              sampleA=sampleA, sampleB=sampleB)

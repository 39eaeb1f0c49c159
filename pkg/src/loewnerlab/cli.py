"""Scenario runner: flat-JSON experiment configs in, reports and figures out.

Each scenario file names one experiment, its parameter block and a seed.
``run`` executes one file, ``suite`` a directory of them, ``list`` prints
the registry.  Every scenario writes a manifest (inputs echo, package
versions, seed, wall time) next to its delimited outputs and rendered
figures.  Exit codes: 0 success, 2 validation failure (before any
compute), 3 numerical failure (partial outputs moved under failed/).
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import shutil
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .errors import LoewnerLabError
from .cftaux import AuxiliaryFunctionSpec, annihilation_residual
from .coupling import (
    CouplingState,
    cross_variation_check,
    drift_audit,
    solve_alpha,
    stationarity_test,
)
from .field import (
    FREE,
    FieldModel,
    LinearFunctional,
    boundary_semicircle_grid,
    quantum_boundary_length,
    sample_pairings,
)
from .flowline import boundary_jump, flowline_to_csv, trace_flow_line
from .loewner import (
    MapEvaluator,
    capacity_estimate,
    slits_to_csv,
    trace_slits,
)
from .particles import (
    DrivingModel,
    ParticleConfig,
    canonical_model,
    path_to_csv,
    simulate_driving,
)
from .rng import make_generator, parse_seed

__all__ = ["main", "run_scenario"]


class ConfigError(Exception):
    """Scenario file fails validation before any compute."""


_REQUIRED = object()


def _get(params: dict, key: str, default=_REQUIRED):
    if key in params:
        return params[key]
    if default is _REQUIRED:
        raise ConfigError(f"missing required parameter {key!r}")
    return default


def _complex(v, key: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"parameter {key!r} must be a number or [re, im] pair")


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save_fig(plt, fig, outdir: Path, name: str, artifacts: list):
    path = outdir / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    artifacts.append(name)


def _driving_setup(params: dict):
    """(model, x0) from the flat driving parameter block."""
    kind = _get(params, "kind", "canonical")
    x0 = np.asarray(_get(params, "x0"), dtype=float)
    N = int(_get(params, "N", x0.size))
    if N != x0.size:
        raise ConfigError("N disagrees with the length of x0")
    kappa = float(_get(params, "kappa", 1.0))
    if kind == "canonical":
        model = canonical_model(N, kappa)
        chamber = "full-line"
    elif kind == "dyson":
        model = DrivingModel(kind="dyson", N=N, kappa=kappa,
                             beta=float(_get(params, "beta")))
        chamber = "full-line"
    elif kind == "wishart":
        model = DrivingModel(kind="wishart", N=N, kappa=kappa,
                             beta=float(_get(params, "beta")),
                             nu=float(_get(params, "nu", 0.0)))
        chamber = "positive-half-line"
    else:
        raise ConfigError(f"unknown driving kind {kind!r}")
    return model, ParticleConfig(x0, chamber=chamber)


# ---------------------------------------------------------------------------
# experiment handlers: prepare(params, seed) -> state, execute(state, outdir)
# ---------------------------------------------------------------------------


def _prep_simulate(params, seed):
    model, x0 = _driving_setup(params)
    return {
        "model": model, "x0": x0, "seed": seed,
        "T": float(_get(params, "T")), "dt": float(_get(params, "dt", 1e-3)),
        "zero_noise": bool(_get(params, "zero_noise", False)),
    }


def _exec_simulate(st, outdir: Path) -> list:
    path = simulate_driving(st["model"], st["x0"], st["T"], st["dt"],
                            st["seed"], zero_noise=st["zero_noise"])
    artifacts = ["driving.csv"]
    (outdir / "driving.csv").write_text(path_to_csv(path))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6, 4))
    for i in range(path.N):
        ax.plot(path.times, path.values[:, i], lw=0.8, label=f"x{i + 1}")
    ax.set_xlabel("t")
    ax.set_ylabel("driving value")
    ax.legend(loc="best", fontsize=8)
    _save_fig(plt, fig, outdir, "driving.png", artifacts)
    return artifacts


def _prep_trace(params, seed):
    st = _prep_simulate(params, seed)
    st["tip_offset"] = float(_get(params, "tip_offset", 1e-3))
    st["n_samples"] = int(_get(params, "n_samples", 64))
    return st


def _exec_trace(st, outdir: Path) -> list:
    path = simulate_driving(st["model"], st["x0"], st["T"], st["dt"],
                            st["seed"], zero_noise=st["zero_noise"])
    slits = trace_slits(path, st["tip_offset"], n_samples=st["n_samples"],
                        ode_step=st["dt"])
    artifacts = ["slits.csv"]
    (outdir / "slits.csv").write_text(slits_to_csv(slits))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, poly in enumerate(slits.slits):
        ax.plot(poly.real, poly.imag, lw=1.0, label=f"slit {i + 1}")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal")
    ax.legend(loc="best", fontsize=8)
    _save_fig(plt, fig, outdir, "slits.png", artifacts)
    return artifacts


def _prep_capacity(params, seed):
    st = _prep_simulate(params, seed)
    st["R"] = float(_get(params, "R", 100.0))
    return st


def _exec_capacity(st, outdir: Path) -> list:
    path = simulate_driving(st["model"], st["x0"], st["T"], st["dt"],
                            st["seed"], zero_noise=st["zero_noise"])
    ev = MapEvaluator(driving=path, ode_step=st["dt"])
    est = capacity_estimate(ev, st["T"], R=st["R"])
    expected = 2.0 * est.N * est.T
    report = dict(asdict(est), expected=expected,
                  rel_error=abs(est.capacity - expected) / expected)
    artifacts = ["capacity.json"]
    (outdir / "capacity.json").write_text(json.dumps(report, indent=2))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(["estimate", "2NT"], [est.capacity, expected], color=["C0", "C1"])
    ax.set_ylabel("half-plane capacity")
    ax.set_title(f"relative error {report['rel_error']:.2e}")
    _save_fig(plt, fig, outdir, "capacity.png", artifacts)
    return artifacts


def _prep_drift_audit(params, seed):
    mode = _get(params, "mode", "welding")
    x = ParticleConfig(np.asarray(_get(params, "x"), dtype=float))
    z = _complex(_get(params, "z"), "z")
    if mode == "welding":
        state = CouplingState.welding_canonical(float(_get(params, "gamma")), x, z)
    elif mode == "flowline":
        state = CouplingState.flowline_canonical(float(_get(params, "kappa")), x, z)
    elif mode == "inhomogeneous-welding":
        gamma = float(_get(params, "gamma"))
        lambdas = np.asarray(_get(params, "lambdas"), dtype=float)
        kappas = np.asarray(_get(params, "kappas"), dtype=float)
        alphas = params.get("alphas")
        if alphas is None:
            alphas = [solve_alpha(k, l, gamma) for k, l in zip(kappas, lambdas)]
        state = CouplingState(
            mode="inhomogeneous-welding", particles=x, map_point=z,
            kappa=float(np.mean(kappas)), gamma=gamma,
            weights=np.asarray(alphas, dtype=float),
            lambdas=lambdas, kappas=kappas,
        )
    else:
        raise ConfigError(f"unknown drift-audit mode {mode!r}")
    return {"state": state}


def _exec_drift_audit(st, outdir: Path) -> list:
    report = drift_audit(st["state"])
    artifacts = ["drift_audit.json"]
    (outdir / "drift_audit.json").write_text(report.to_json())
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 4))
    idx = np.arange(report.loadings.size)
    ax.bar(idx - 0.2, np.abs(report.loadings.real), width=0.4, label="|Re loading|")
    ax.bar(idx + 0.2, np.abs(report.loadings.imag), width=0.4, label="|Im loading|")
    ax.set_xlabel("particle index")
    ax.set_title(f"drift residual {report.residual:.2e}")
    ax.legend(fontsize=8)
    _save_fig(plt, fig, outdir, "drift_audit.png", artifacts)
    return artifacts


def _prep_cross_variation(params, seed):
    mode = _get(params, "mode", "welding-free")
    x0 = np.asarray(_get(params, "x0"), dtype=float)
    return {
        "mode": mode,
        "model": canonical_model(x0.size, float(_get(params, "kappa", 1.0))),
        "x0": ParticleConfig(x0),
        "z": _complex(_get(params, "z"), "z"),
        "w": _complex(_get(params, "w"), "w"),
        "T": float(_get(params, "T")),
        "dt": float(_get(params, "dt", 1e-4)),
        "seed": seed,
    }


def _exec_cross_variation(st, outdir: Path) -> list:
    path = simulate_driving(st["model"], st["x0"], st["T"], st["dt"], st["seed"])
    report = cross_variation_check(st["mode"], path, st["z"], st["w"], st["T"],
                                   ode_step=st["dt"])
    artifacts = ["cross_variation.json"]
    (outdir / "cross_variation.json").write_text(json.dumps(asdict(report), indent=2))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(["quadratic variation", "Green decrement"], [report.lhs, report.rhs])
    ax.set_title(f"discrepancy {report.discrepancy:.2e}")
    _save_fig(plt, fig, outdir, "cross_variation.png", artifacts)
    return artifacts


def _prep_stationarity(params, seed):
    mode = _get(params, "mode")
    if mode not in ("welding", "flowline"):
        raise ConfigError(f"unknown stationarity mode {mode!r}")
    pairs = _get(params, "pairs")
    radius = float(_get(params, "radius", 0.2))
    n_rings = int(_get(params, "n_rings", 6))
    fs = []
    for k, pair in enumerate(pairs):
        if len(pair) != 2:
            raise ConfigError("each functional is a pair of interior points")
        a = _complex(pair[0], f"pairs[{k}][0]")
        b = _complex(pair[1], f"pairs[{k}][1]")
        fs.append(LinearFunctional.signed_pair(a, b, n_rings=n_rings, radius=radius))
    alpha = params.get("alpha")
    return {
        "mode": mode,
        "x0": ParticleConfig(np.asarray(_get(params, "x0"), dtype=float)),
        "T": float(_get(params, "T")),
        "param": float(_get(params, "gamma" if mode == "welding" else "kappa")),
        "fs": fs,
        "replicas": int(_get(params, "replicas", 2000)),
        "dt": float(_get(params, "dt", 5e-3)),
        "alpha": None if alpha is None else float(alpha),
        "level": float(_get(params, "level", 0.01)),
        "seed": seed,
    }


def _samples_csv(samples: np.ndarray) -> str:
    M = samples.shape[1]
    lines = ["replica," + ",".join(f"f{i + 1}" for i in range(M))]
    for r, row in enumerate(samples):
        lines.append(str(r) + "," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def _exec_stationarity(st, outdir: Path) -> list:
    report = stationarity_test(
        st["mode"], st["x0"], st["T"], st["param"], st["fs"],
        replicas=st["replicas"], seed=st["seed"], dt=st["dt"],
        alpha=st["alpha"], level=st["level"],
    )
    artifacts = ["stationarity.json", "samples_a.csv", "samples_b.csv"]
    (outdir / "stationarity.json").write_text(report.to_json())
    (outdir / "samples_a.csv").write_text(_samples_csv(report.sampleA))
    (outdir / "samples_b.csv").write_text(_samples_csv(report.sampleB))
    plt = _figure()
    M = report.sampleA.shape[1]
    fig, axes = plt.subplots(1, M, figsize=(4 * M, 3.2), squeeze=False)
    for a in range(M):
        ax = axes[0][a]
        ax.hist(report.sampleA[:, a], bins=40, density=True, alpha=0.5,
                label="initial")
        ax.hist(report.sampleB[:, a], bins=40, density=True, alpha=0.5,
                label="transported")
        ax.set_title(f"p = {report.per_functional[a]['p_value']:.3f}", fontsize=9)
        ax.legend(fontsize=7)
    _save_fig(plt, fig, outdir, "stationarity.png", artifacts)
    return artifacts


def _prep_cft_check(params, seed):
    side = _get(params, "side", "forward")
    kappa = float(_get(params, "kappa"))
    p = params.get("p")
    if p is None:
        p = 2.0 / kappa if side == "forward" else -2.0 / kappa
    return {
        "spec": AuxiliaryFunctionSpec(p=float(p), kappa=kappa, side=side),
        "N": int(_get(params, "N", 4)),
        "n_configs": int(_get(params, "n_configs", 100)),
        "seed": seed,
    }


def _exec_cft_check(st, outdir: Path) -> list:
    rng = make_generator(st["seed"])
    spec, N = st["spec"], st["N"]
    residuals = np.empty(st["n_configs"])
    for r in range(st["n_configs"]):
        pts = np.sort(rng.uniform(-3.0, 3.0, N))
        cfg = ParticleConfig(pts)
        residuals[r] = max(annihilation_residual(spec, cfg, i) for i in range(N))
    report = {
        "side": spec.side, "p": spec.p, "kappa": spec.kappa, "N": N,
        "max_residual": float(residuals.max()),
    }
    artifacts = ["cft_check.json", "residuals.csv"]
    (outdir / "cft_check.json").write_text(json.dumps(report, indent=2))
    (outdir / "residuals.csv").write_text(
        "config,residual\n" + "".join(f"{r},{v:.17g}\n"
                                      for r, v in enumerate(residuals)))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(residuals, ".", ms=3)
    ax.set_xlabel("configuration")
    ax.set_ylabel("relative residual")
    ax.set_title(f"max {report['max_residual']:.2e}")
    _save_fig(plt, fig, outdir, "cft_check.png", artifacts)
    return artifacts


def _prep_flowline(params, seed):
    chi = float(_get(params, "chi"))
    fld = _get(params, "field", {"kind": "constant", "value": 0.0})
    kind = _get(fld, "kind")
    if kind == "constant":
        value = float(_get(fld, "value", 0.0))
        h = lambda z: value
    elif kind == "decorated-arg":
        anchors = np.asarray(_get(fld, "anchors"), dtype=float)
        weights = np.asarray(_get(fld, "weights"), dtype=float)
        if anchors.size != weights.size:
            raise ConfigError("anchors and weights must have equal length")
        h = lambda z: float(-(weights * np.angle(complex(z) - anchors)).sum())
    else:
        raise ConfigError(f"unknown flow-line field kind {kind!r}")
    jump = params.get("jump")
    if jump is not None:
        jump = {
            "kappa": float(_get(jump, "kappa")), "N": int(_get(jump, "N")),
            "i": int(_get(jump, "i")), "theta": float(_get(jump, "theta", 0.0)),
        }
    return {
        "h": h, "chi": chi,
        "start": _complex(_get(params, "start"), "start"),
        "dt": float(_get(params, "dt", 1e-3)),
        "max_steps": int(_get(params, "max_steps", 2000)),
        "jump": jump,
    }


def _exec_flowline(st, outdir: Path) -> list:
    fl = trace_flow_line(st["h"], st["chi"], st["start"], st["dt"], st["max_steps"])
    artifacts = ["flowline.csv"]
    (outdir / "flowline.csv").write_text(flowline_to_csv(fl))
    if st["jump"] is not None:
        j = st["jump"]
        report = boundary_jump(j["kappa"], j["N"], j["i"], theta=j["theta"])
        artifacts.append("jump.json")
        (outdir / "jump.json").write_text(json.dumps(report, indent=2))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(fl.points.real, fl.points.imag, lw=1.0)
    ax.plot([fl.start.real], [fl.start.imag], "ko", ms=4)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"terminated: {fl.terminated}")
    _save_fig(plt, fig, outdir, "flowline.png", artifacts)
    return artifacts


def _prep_boundary_length(params, seed):
    gamma = float(_get(params, "gamma", 1.0))
    interval = _get(params, "interval", [-1.0, 1.0])
    if len(interval) != 2 or float(interval[1]) <= float(interval[0]):
        raise ConfigError("interval must be [a, b] with a < b")
    eps_list = [float(e) for e in _get(params, "eps", [1e-2, 5e-3])]
    if any(e <= 0 for e in eps_list):
        raise ConfigError("regularization scales must be positive")
    return {
        "model": FieldModel(boundary=FREE, gamma=gamma),
        "interval": (float(interval[0]), float(interval[1])),
        "eps_list": eps_list,
        "replicas": int(_get(params, "replicas", 1000)),
        "seed": seed,
    }


def _exec_boundary_length(st, outdir: Path) -> list:
    rows = []
    for k, eps in enumerate(st["eps_list"]):
        grid, fs = boundary_semicircle_grid(st["interval"], eps)
        draws = sample_pairings(FREE, fs, st["replicas"], st["seed"] + k)
        lengths = quantum_boundary_length(st["model"], st["interval"], eps,
                                          draws.samples, grid)
        rows.append({
            "eps": eps, "mean": float(lengths.mean()),
            "std": float(lengths.std()),
            "stderr": float(lengths.std() / np.sqrt(lengths.size)),
        })
    report = {"gamma": st["model"].gamma, "interval": list(st["interval"]),
              "replicas": st["replicas"], "per_eps": rows}
    if len(rows) > 1:
        m = [r["mean"] for r in rows]
        report["max_ratio_deviation"] = float(
            max(abs(a / b - 1.0) for a in m for b in m))
    artifacts = ["boundary_length.json", "boundary_length.csv"]
    (outdir / "boundary_length.json").write_text(json.dumps(report, indent=2))
    (outdir / "boundary_length.csv").write_text(
        "eps,mean,std,stderr\n" + "".join(
            f"{r['eps']:.17g},{r['mean']:.17g},{r['std']:.17g},{r['stderr']:.17g}\n"
            for r in rows))
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar([r["eps"] for r in rows], [r["mean"] for r in rows],
                yerr=[r["stderr"] for r in rows], fmt="o-")
    ax.set_xscale("log")
    ax.set_xlabel("regularization scale")
    ax.set_ylabel("mean boundary length")
    _save_fig(plt, fig, outdir, "boundary_length.png", artifacts)
    return artifacts


EXPERIMENTS: dict = {
    "simulate": (_prep_simulate, _exec_simulate,
                 "simulate an interacting-particle driving path"),
    "trace": (_prep_trace, _exec_trace,
              "trace the slits generated by a driving path"),
    "capacity": (_prep_capacity, _exec_capacity,
                 "estimate half-plane capacity against 2NT"),
    "drift-audit": (_prep_drift_audit, _exec_drift_audit,
                    "closed-form Ito drift audit of a coupling state"),
    "cross-variation": (_prep_cross_variation, _exec_cross_variation,
                        "integrated cross variation vs Green decrement"),
    "stationarity": (_prep_stationarity, _exec_stationarity,
                     "two-sample law comparison of coupled fields"),
    "cft-check": (_prep_cft_check, _exec_cft_check,
                  "annihilation residuals of auxiliary functions"),
    "flowline": (_prep_flowline, _exec_flowline,
                 "trace a flow line; optional boundary-jump report"),
    "boundary-length": (_prep_boundary_length, _exec_boundary_length,
                        "fixed-scale quantum boundary length statistics"),
}


def _resolve_seed(config: dict, cli_seed: Optional[str]) -> int:
    if cli_seed is not None:
        return parse_seed(cli_seed)
    env = os.environ.get("LOEWNERLAB_SEED")
    if env:
        return parse_seed(env)
    return int(config.get("seed", 0))


def run_scenario(config_path: str, seed: Optional[str] = None,
                 out: Optional[str] = None) -> int:
    """Execute one scenario file; returns the process exit code."""
    t0 = time.perf_counter()
    path = Path(config_path)
    try:
        config = json.loads(path.read_text())
        if not isinstance(config, dict):
            raise ConfigError("scenario file must hold a JSON object")
        name = config.get("name", path.stem)
        experiment = _get(config, "experiment")
        if experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {experiment!r}")
        run_seed = _resolve_seed(config, seed)
        params = {k: v for k, v in config.items()
                  if k not in ("name", "experiment", "seed", "out")}
        prepare, execute, _ = EXPERIMENTS[experiment]
        state = prepare(params, run_seed)
    except (ConfigError, LoewnerLabError, json.JSONDecodeError, OSError,
            TypeError, ValueError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2

    outroot = Path(out) if out else Path(config.get("out", "out"))
    outdir = outroot / name
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "name": name,
        "experiment": experiment,
        "inputs": config,
        "seed": run_seed,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "loewnerlab": __version__,
        },
    }
    try:
        artifacts = execute(state, outdir)
    except (LoewnerLabError, FloatingPointError) as exc:
        manifest.update(status="numerical-failure", error=str(exc),
                        wall_time_s=time.perf_counter() - t0)
        failed = outroot / "failed" / name
        if failed.exists():
            shutil.rmtree(failed)
        failed.parent.mkdir(parents=True, exist_ok=True)
        (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2))
        shutil.move(str(outdir), str(failed))
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    manifest.update(status="ok", artifacts=artifacts,
                    wall_time_s=time.perf_counter() - t0)
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    print(f"{name}: ok ({manifest['wall_time_s']:.2f} s)")
    return 0


def _run_one(args):
    return args[0], run_scenario(*args)


def run_suite(directory: str, seed: Optional[str], out: Optional[str],
              threads: int) -> int:
    files = sorted(Path(directory).glob("*.json"))
    if not files:
        print(f"no scenario files in {directory}", file=sys.stderr)
        return 2
    jobs = [(str(f), seed, out) for f in files]
    results = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    worst = 0
    for fname, code in results:
        status = {0: "ok", 2: "validation failure", 3: "numerical failure"}[code]
        print(f"{Path(fname).name}: {status}")
        worst = max(worst, code)
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="loewnerlab",
        description="scenario runner for the Loewner/field coupling laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one scenario file")
    p_run.add_argument("config")
    p_run.add_argument("--seed", default=None,
                       help="override the scenario seed (decimal or 0x-hex)")
    p_run.add_argument("--out", default=None, help="output root directory")
    p_run.add_argument("--threads", type=int, default=1,
                       help="accepted for symmetry; a single scenario is serial")

    p_suite = sub.add_parser("suite", help="execute a directory of scenarios")
    p_suite.add_argument("directory")
    p_suite.add_argument("--seed", default=None)
    p_suite.add_argument("--out", default=None)
    p_suite.add_argument("--threads", type=int, default=1)

    sub.add_parser("list", help="list available experiments")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run_scenario(args.config, seed=args.seed, out=args.out)
    if args.command == "suite":
        return run_suite(args.directory, args.seed, args.out, args.threads)
    for key, (_, _, desc) in EXPERIMENTS.items():
        print(f"{key:16s} {desc}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

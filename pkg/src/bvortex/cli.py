"""Command-line front end: JSON configs in, CSV/JSON artifacts out.

Subcommands: landscape | solve | branch | verify | layer | cf.
Exit codes: 0 pass, 2 config error, 3 solver failure, 4 verification failure.

Every output file embeds the tool version and the sha256 of the canonical
config, and reruns are byte-identical for identical configs.
"""

import argparse
import hashlib
import json
import logging
import math
from pathlib import Path
import sys

import numpy as np

from . import __version__, checks, diagnostics, layer, renorm, solver
from .errors import BVortexError, ConfigError, ConvergenceError
from .geometry import DomainSpec
from .nonlinearity import Nonlinearity, builtin_nonlinearity

log = logging.getLogger("bvortex")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


# ---------------------------------------------------------------------------
# strict config parsing
# ---------------------------------------------------------------------------

def _require_keys(block: dict, allowed: set, context: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{context} must be an object")
    extra = set(block) - allowed
    if extra:
        raise ConfigError(f"unknown fields in {context}: {sorted(extra)}")


_TOP_KEYS = {"domain", "nonlinearity", "output_dir", "landscape", "solve",
             "branch", "layer", "cf", "verify"}


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    _require_keys(cfg, _TOP_KEYS, "config")
    return cfg


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _domain(cfg: dict) -> DomainSpec:
    if "domain" not in cfg:
        raise ConfigError("config needs a 'domain' block")
    try:
        return DomainSpec.from_dict(cfg["domain"])
    except BVortexError as exc:
        raise ConfigError(str(exc))


def _nonlinearity(cfg: dict) -> Nonlinearity:
    block = cfg.get("nonlinearity", {"name": "cubic"})
    _require_keys(block, {"name", "a"}, "nonlinearity")
    if "name" not in block:
        raise ConfigError("nonlinearity needs a 'name'")
    try:
        return builtin_nonlinearity(block["name"], a=block.get("a", 1.0))
    except BVortexError as exc:
        raise ConfigError(str(exc))


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    return format(float(x), ".17g")

def _meta(cfg: dict) -> dict:
    return {"tool": "bvortex", "version": __version__, "config_sha256": config_hash(cfg)}


def write_csv(path: Path, header: str, rows, cfg: dict) -> None:
    lines = [f"# bvortex {__version__} config_sha256={config_hash(cfg)}", header]
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")
    log.info("wrote %s", path)


def write_json(path: Path, payload: dict, cfg: dict) -> None:
    payload = dict(payload)
    payload["_meta"] = _meta(cfg)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    log.info("wrote %s", path)


def _outdir(cfg: dict, args) -> Path:
    out = args.out or cfg.get("output_dir", ".")
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_landscape(cfg: dict, args) -> int:
    block = cfg.get("landscape", {})
    _require_keys(block, {"grid_n", "delta_diag", "tol"}, "landscape")
    spec = _domain(cfg)
    grid_n = int(block.get("grid_n", 128))
    delta = block.get("delta_diag")
    tol = float(block.get("tol", 1e-8))
    out = _outdir(cfg, args)

    land = renorm.landscape(spec, grid_n=grid_n, delta_diag=delta)
    rows = []
    for i, tp in enumerate(land.t_p):
        for j, tq in enumerate(land.t_q):
            v = land.values[i, j]
            if np.isfinite(v):
                rows.append(f"{_fmt(tp)},{_fmt(tq)},{_fmt(v)}")
    write_csv(out / "landscape.csv", "t_p,t_q,W", rows, cfg)

    minima = renorm.find_local_minima(spec, grid_n=grid_n, delta_diag=delta, tol=tol)
    payload = {"domain": spec.to_dict(), "minima": [
        {"t_p": cp.p.t, "t_q": cp.q.t, "W": cp.W_value,
         "hess": [[float(h) for h in row] for row in cp.hessian],
         "class": cp.classification} for cp in minima]}
    write_json(out / "minima.json", payload, cfg)
    print(f"landscape: {len(rows)} grid pairs, {len(minima)} isolated minima")
    return EXIT_OK


def _solve_from_config(cfg: dict, block: dict, eps: float, n_modes: int):
    spec = _domain(cfg)
    f = _nonlinearity(cfg)
    vortices = block.get("vortices")
    if vortices is None:
        raise ConfigError("solve/branch config needs 'vortices': [t_p, t_q]")
    tp, tq = float(vortices[0]), float(vortices[1])
    prof = layer.solve_layer(f, X=100.0, n=512)
    guess = solver.initial_guess(spec, tp, tq, eps, f, prof, n_modes=n_modes,
                                 window=block.get("window"))
    rec = solver.newton_solve(guess, f, eps, tol=float(block.get("tol", 1e-10)),
                              max_iter=int(block.get("max_iter", 40)))
    return spec, f, rec


def cmd_solve(cfg: dict, args) -> int:
    block = cfg.get("solve", {})
    _require_keys(block, {"eps", "n_modes", "tol", "max_iter", "vortices", "window"},
                  "solve")
    if "eps" not in block:
        raise ConfigError("solve config needs 'eps'")
    eps = float(block["eps"])
    n_modes = int(block.get("n_modes", 512))
    out = _outdir(cfg, args)
    spec, f, rec = _solve_from_config(cfg, block, eps, n_modes)
    payload = rec.to_dict()
    payload["domain"] = spec.to_dict()
    write_json(out / "solution.json", payload, cfg)
    print(f"solve: eps={eps} residual={rec.residual_norm:.3e} "
          f"lambda_min={rec.lambda_min:.6f} stable={rec.stable} "
          f"vortices={[round(v, 6) for v in rec.vortices]}")
    return EXIT_OK


def _branch_rows(records) -> list:
    rows = []
    for rec in records:
        v1 = _fmt(rec.vortices[0]) if len(rec.vortices) >= 1 else ""
        v2 = _fmt(rec.vortices[1]) if len(rec.vortices) >= 2 else ""
        rows.append(",".join([_fmt(rec.eps), _fmt(rec.energy["total"]),
                              _fmt(rec.lambda_min), v1, v2,
                              "true" if rec.stable else "false"]))
    return rows


def cmd_branch(cfg: dict, args) -> int:
    block = cfg.get("branch", {})
    _require_keys(block, {"eps_start", "eps_end", "n_steps", "n_modes", "tol",
                          "vortices", "window"}, "branch")
    for key in ("eps_start", "eps_end", "n_steps"):
        if key not in block:
            raise ConfigError(f"branch config needs '{key}'")
    eps_start = float(block["eps_start"])
    eps_end = float(block["eps_end"])
    n_steps = int(block["n_steps"])
    n_modes = int(block.get("n_modes", 512))
    out = _outdir(cfg, args)
    spec, f, seed = _solve_from_config(cfg, block, eps_start, n_modes)
    branch = solver.continuation(f, seed, eps_start, eps_end, n_steps,
                                 tol=float(block.get("tol", 1e-10)))
    write_csv(out / "branch.csv", "eps,energy_total,lambda_min,vortex1,vortex2,stable",
              _branch_rows(branch.records), cfg)
    write_json(out / "branch.json", {
        "domain": spec.to_dict(),
        "flips": [[a, b] for a, b in branch.flips],
        "records": [rec.to_dict() for rec in branch.records]}, cfg)
    print(f"branch: {len(branch.records)} records, stability flips at {branch.flips}")
    return EXIT_OK


def cmd_layer(cfg: dict, args) -> int:
    block = cfg.get("layer", {})
    _require_keys(block, {"X", "n", "tol"}, "layer")
    f = _nonlinearity(cfg)
    X = float(block.get("X", 100.0))
    n = int(block.get("n", 1024))
    out = _outdir(cfg, args)
    prof = layer.solve_layer(f, X=X, n=n, tol=float(block.get("tol", 1e-10)))
    rows = [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(prof.grid, prof.values)]
    write_csv(out / "profile.csv", "x,v", rows, cfg)
    write_json(out / "layer.json", {
        "nonlinearity": f.name, "params": f.params, "residual": prof.residual,
        "tail_coeff": prof.tail_coeff, "scale": prof.scale, "X": prof.X,
        "n": len(prof.theta)}, cfg)
    print(f"layer: residual={prof.residual:.3e} tail_coeff={prof.tail_coeff:.6f}")
    return EXIT_OK


def cmd_cf(cfg: dict, args) -> int:
    block = cfg.get("cf", {})
    _require_keys(block, {"R_list", "n"}, "cf")
    f = _nonlinearity(cfg)
    out = _outdir(cfg, args)
    fit = layer.compute_cf(f, R_list=block.get("R_list"),
                           n=int(block.get("n", 2048)))
    payload = {"R_list": fit.R_list, "I_values": fit.I_values,
               "cf_estimate": fit.cf_estimate, "slope": fit.slope,
               "warning": fit.warning}
    if fit.a is not None:
        payload["a"] = fit.a
        payload["closed_form"] = layer.cf_closed_form(fit.a)
        payload["rescaled_form"] = layer.cf_rescaled(fit.a)
    write_json(out / "cf.json", payload, cfg)
    print(f"cf: estimate={fit.cf_estimate:.6f} tail_slope={fit.slope:.2e}")
    return EXIT_OK


def cmd_verify(cfg: dict, args) -> int:
    block = cfg.get("verify", {})
    _require_keys(block, {"suite", "params"}, "verify")
    if "suite" not in block:
        raise ConfigError("verify config needs 'suite'")
    suite = block["suite"]
    params = block.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("verify params must be an object")
    out = _outdir(cfg, args)
    try:
        result = checks.run_suite(suite, **params)
    except TypeError as exc:
        raise ConfigError(f"bad params for suite {suite}: {exc}")
    write_json(out / f"verify_{suite}.json", result.to_dict(), cfg)
    status = "PASS" if result.passed else "FAIL"
    report = [f"[{status}] {suite} ({result.runtime_s:.1f} s)"]
    for key, val in result.details.items():
        report.append(f"    {key}: {val}")
    text = "\n".join(report)
    (out / f"verify_{suite}.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK if result.passed else EXIT_VERIFY


COMMANDS = {
    "landscape": cmd_landscape,
    "solve": cmd_solve,
    "branch": cmd_branch,
    "verify": cmd_verify,
    "layer": cmd_layer,
    "cf": cmd_cf,
}


def _set_threads(n: int) -> None:
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:  # pragma: no cover
        log.warning("threadpoolctl not available; --threads ignored")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="bvortex",
        description="Boundary-vortex workbench: landscapes, solves, branches, checks.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="path to the JSON run config")
    ap.add_argument("--out", default=None, help="output directory (overrides config)")
    ap.add_argument("--threads", type=int, default=None, help="BLAS thread cap")
    ap.add_argument("--log-level", default="WARNING",
                    choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    args = ap.parse_args(argv)

    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads is not None:
        _set_threads(args.threads)

    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        if exc.history:
            out = Path(args.out or ".")
            out.mkdir(parents=True, exist_ok=True)
            (out / "residual_history.json").write_text(
                json.dumps({"residuals": exc.history}, indent=2) + "\n")
            print(f"residual history written to {out / 'residual_history.json'}",
                  file=sys.stderr)
        return EXIT_SOLVER
    except BVortexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

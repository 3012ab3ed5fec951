"""Command-line front end.

Subcommands: spectrum, classify, bifurcation, wave, verify.  Each run takes
a model id (and optional JSON config with flag overrides), writes CSV/JSON
data into the output directory and, with --svg, static SVG figures.

Exit codes: 0 success, 2 usage error, 3 numerical failure.  Failures also
emit a machine-readable error JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, hill, models, polyalg, waves
from .monodromy import (MonodromyError, SingularParameterError,
                        floquet_sample, integrate_monodromy,
                        verify_generalized_hamiltonian_symmetry)

FLOAT_FMT = "%.17g"


def _fmt(x) -> str:
    return FLOAT_FMT % float(x)


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not serializable: {type(obj)}")


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, default=_json_default, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v
                        for v in row])


def _load_config(args):
    cfg = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    # flag overrides beat config values
    for key in ("model", "tol", "hill_n", "exponents", "lambda_max", "grid", "svg"):
        v = getattr(args, key, None)
        if v is not None and v is not False:
            cfg[key] = v
    if args.param:
        cfg.setdefault("params", {})
        for kv in args.param:
            k, _, v = kv.partition("=")
            try:
                cfg["params"][k] = json.loads(v)
            except json.JSONDecodeError:
                cfg["params"][k] = v
    cfg.setdefault("params", {})
    cfg.setdefault("tol", 1e-11)
    cfg.setdefault("hill_n", 31)
    cfg.setdefault("exponents", 2000)
    cfg.setdefault("lambda_max", 1.0)
    cfg.setdefault("grid", 200)
    cfg.setdefault("svg", False)
    return cfg


def _bundle(cfg):
    model_id = cfg.get("model")
    if not model_id:
        raise UsageError("no model id given (use --model or the config file)")
    if model_id not in models.REGISTRY:
        raise UsageError(f"unknown model id '{model_id}' (known: {sorted(models.REGISTRY)})")
    return models.build_model(model_id, cfg["params"])


class UsageError(ValueError):
    pass


def cmd_spectrum(cfg, out: Path):
    bundle = _bundle(cfg)
    config = hill.HillConfig(N=int(cfg["hill_n"]), n_exponents=int(cfg["exponents"]))
    points, failures = hill.hill_spectrum(bundle, config)
    _write_csv(out / "spectrum.csv", ["mu", "re_lambda", "im_lambda", "branch"],
               [(p.exponent, p.lam.real, p.lam.imag, p.branch) for p in points])
    lam = np.array([p.lam for p in points])
    summary = {
        "model": cfg["model"], "params": cfg["params"], "config": _provenance(cfg),
        "n_points": len(points),
        "max_real_part": float(np.max(np.abs(lam.real))) if len(lam) else 0.0,
        "real_axis_extent": hill.real_axis_extent(points),
        "eigensolver_failures": failures,
    }
    _write_json(out / "summary.json", summary)
    if cfg["svg"]:
        from . import plots
        plots.save_spectrum(points, out / "spectrum.svg", title=cfg["model"])
    return summary


def _sweep(cfg, bundle):
    problem = bundle.rescaled if bundle.rescaled is not None else bundle.problem
    ymax = float(cfg["lambda_max"])
    ymin = float(cfg.get("lambda_min", -ymax))
    return analysis.sweep_axis(problem, ymin, ymax, n_grid=int(cfg["grid"]),
                               tol=float(cfg["tol"])), problem


def cmd_classify(cfg, out: Path):
    bundle = _bundle(cfg)
    report, problem = _sweep(cfg, bundle)
    rows = []
    for s in report.samples:
        row = [s.lam.imag] + [float(v) for v in s.f]
        row += [float(s.classifiers.get(k, np.nan))
                for k in _classifier_keys(problem.n)]
        row.append(s.multiplicity)
        rows.append(row)
    header = (["im_lambda"] + [f"f{k}" for k in range(1, problem.n)]
              + _classifier_keys(problem.n) + ["multiplicity"])
    _write_csv(out / "classifier_trace.csv", header, rows)
    payload = report.to_dict()
    payload["model"] = cfg["model"]
    payload["config"] = _provenance(cfg)
    _write_json(out / "intervals.json", payload)
    if cfg["svg"]:
        from . import plots
        plots.save_classifier_trace(report, out / "classifier.svg", title=cfg["model"])
    return payload


def _classifier_keys(n):
    return {2: ["DiscHill"], 3: ["Delta3"], 4: ["Delta4", "P4", "D4"],
            5: ["Delta5", "P5", "D5"]}[n]


def cmd_bifurcation(cfg, out: Path):
    bundle = _bundle(cfg)
    report, problem = _sweep(cfg, bundle)
    _write_csv(out / "phi_trace.csv", ["im_lambda", "phi", "tracker"],
               [(y, p, t) for y, p, t in zip(report.grid, report.phi_values,
                                             report.tracker_values)])
    payload = report.to_dict()
    payload["model"] = cfg["model"]
    payload["config"] = _provenance(cfg)
    payload["classifier_traces"] = "phi_trace.csv"
    _write_json(out / "report.json", payload)
    points = []
    if cfg.get("with_spectrum", True):
        config = hill.HillConfig(N=int(cfg["hill_n"]), n_exponents=int(cfg["exponents"]))
        points, _ = hill.hill_spectrum(bundle, config)
        _write_csv(out / "spectrum.csv", ["mu", "re_lambda", "im_lambda", "branch"],
                   [(p.exponent, p.lam.real, p.lam.imag, p.branch) for p in points])
    if cfg["svg"]:
        from . import plots
        plots.save_bifurcation_overlay(report, points, out / "bifurcation.svg",
                                       title=cfg["model"])
    return payload


def cmd_wave(cfg, out: Path):
    bundle = _bundle(cfg)
    profile = None
    for key in ("phi", "amplitude", "Q"):
        if key in bundle.profiles:
            profile = bundle.profiles[key]
            break
    if profile is None:
        profile = next(iter(bundle.profiles.values()))
    n = int(cfg.get("wave_samples", 512))
    xs, vals = profile.sample(n)
    _write_csv(out / "wave.csv", ["x", "value"], list(zip(xs, vals)))
    coeffs = waves.fourier_coefficients(profile, int(cfg.get("fourier_n", 24)))
    N = (len(coeffs) - 1) // 2
    payload = {
        "model": cfg["model"], "config": _provenance(cfg),
        "period": profile.period,
        "params": {k: v for k, v in {**bundle.params, **profile.params}.items()},
        "fourier": [{"k": k - N, "re": c.real, "im": c.imag}
                    for k, c in enumerate(coeffs)],
    }
    _write_json(out / "wave_params.json", payload)
    if cfg["svg"]:
        from . import plots
        plots.save_wave(xs, vals, out / "wave.svg", title=cfg["model"])
    return payload


def cmd_verify(cfg, out: Path):
    bundle = _bundle(cfg)
    problem = bundle.problem
    tol = float(cfg["tol"])
    ymax = float(cfg["lambda_max"])
    grid = int(cfg.get("grid", 8))
    lams = [1j * y for y in np.linspace(0.1 * ymax, ymax, grid)]
    lams += [(0.6 + 0.8j) * y for y in np.linspace(0.1 * ymax, ymax, grid)]
    rows = []
    worst = {"A2": 0.0, "M": 0.0, "det": 0.0, "coeff": 0.0}
    for lam in lams:
        entry = {"re_lambda": lam.real, "im_lambda": lam.imag}
        try:
            res = integrate_monodromy(problem, lam, tol)
        except SingularParameterError as exc:
            rows.append({**entry, "error": str(exc)})
            continue
        entry["det_residual"] = res.det_residual
        worst["det"] = max(worst["det"], res.det_residual)
        if problem.eval_B is not None:
            try:
                rA2, rM = verify_generalized_hamiltonian_symmetry(problem, lam, tol)
                entry["residual_A2"] = rA2
                entry["residual_M"] = rM
                worst["A2"] = max(worst["A2"], rA2)
                worst["M"] = max(worst["M"], rM)
            except SingularParameterError as exc:
                entry["symmetry_error"] = str(exc)
        if problem.trace_free and abs(lam.real) < 1e-12:
            e = res.e
            n = problem.n
            sc = max(1.0, float(np.max(np.abs(e))))
            coeff = max(abs(e[k] - np.conj(e[n - k])) for k in range(n + 1)) / sc
            entry["coeff_symmetry_residual"] = coeff
            worst["coeff"] = max(worst["coeff"], coeff)
        rows.append(entry)
    payload = {"model": cfg["model"], "config": _provenance(cfg),
               "samples": rows, "worst": worst}
    _write_json(out / "verify.json", payload)
    return payload


def _provenance(cfg):
    return {k: cfg[k] for k in ("tol", "hill_n", "exponents", "lambda_max", "grid", "svg")}


COMMANDS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "bifurcation": cmd_bifurcation,
    "wave": cmd_wave,
    "verify": cmd_verify,
}


def make_parser():
    ap = argparse.ArgumentParser(prog="floquetstab",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model", help="registered model id")
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--param", action="append", metavar="KEY=VALUE",
                       help="model parameter override (repeatable)")
        p.add_argument("--out-dir", default="out", help="output directory")
        p.add_argument("--tol", type=float, help="integration tolerance")
        p.add_argument("--hill-n", dest="hill_n", type=int,
                       help="Fourier truncation half-width")
        p.add_argument("--exponents", type=int, help="Floquet exponent count")
        p.add_argument("--lambda-max", dest="lambda_max", type=float,
                       help="imaginary-axis sweep bound")
        p.add_argument("--grid", type=int, help="sweep grid size")
        p.add_argument("--svg", action="store_true", help="render SVG figures")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _load_config(args)
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, out)
        return 0
    except (UsageError, FileNotFoundError, json.JSONDecodeError) as exc:
        json.dump({"error": "usage", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (MonodromyError, polyalg.PolyalgError, waves.WaveError,
            models.ModelError, hill.HillError, ValueError) as exc:
        json.dump({"error": "numerical", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

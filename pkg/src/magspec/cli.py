"""Command-line front end for the semiclassical spectral toolkit.

Subcommands: band, beta, predict, validate, model.  All outputs are CSV
plus JSON with the resolved configuration embedded; column layouts are
documented in FORMATS.md.  Exit codes: 0 success, 1 configuration error,
2 solver error, 3 working-hypothesis violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .bandcurve import BandCurve, build_band_curve, default_thetas
from .betamin import MinimumNotLocalizedError
from .campaign import analyze_patch, toy_validation
from .configio import ConfigError, RunConfig, write_csv, write_json
from .eigensolve import InnerSolveBreakdownError
from .expansion import predict_spectrum
from .fields import field_preset
from .frame import AssumptionError
from .modelspectrum import model_spectrum_formula, model_spectrum_numeric

EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_ASSUMPTION = 3


def _load_band(cfg: RunConfig, out_dir: Path) -> BandCurve:
    path = cfg["paths"]["band_curve"]
    if path is not None:
        return BandCurve.from_json(path)
    cached = out_dir / "band_curve.json"
    if cached.exists():
        return BandCurve.from_json(cached)
    raise ConfigError(
        "no band curve available: set band_curve in [paths] or run the "
        "'band' command into the same output directory first")


def _field_from(cfg: RunConfig):
    sec = dict(cfg["field"])
    preset = sec.pop("preset")
    if preset == "constant":
        return field_preset("constant", theta0=sec["theta0"])
    return field_preset(preset, **sec)


def cmd_band(cfg: RunConfig, out: Path, threads: int) -> int:
    sec = cfg["band"]
    thetas = (np.asarray(sec["thetas"], dtype=float)
              if sec["thetas"] is not None
              else default_thetas(sec["n_thetas"]))
    curve = build_band_curve(thetas, spacing=sec["spacing"], tol=sec["tol"],
                             threads=threads)
    curve.to_csv(out / "band_curve.csv")
    write_json(out / "band_curve.json", {"band_curve": curve.to_json_dict()},
               cfg)
    print(f"band curve: {len(thetas)} samples -> {out / 'band_curve.csv'}")
    return 0


def cmd_beta(cfg: RunConfig, out: Path, strict: bool) -> int:
    band = _load_band(cfg, out)
    field = _field_from(cfg)
    patch = cfg["patch"]
    verdicts = {}
    code = 0
    try:
        bm = analyze_patch(field, band, patch_radius=patch["radius"],
                           grid_step=patch["grid_step"],
                           t_max=patch["t_max"])
    except (AssumptionError, MinimumNotLocalizedError) as exc:
        verdicts = {"holds": False, "reason": str(exc)}
        write_json(out / "minimum.json",
                   {"assumption_checks": verdicts}, cfg)
        print(f"hypothesis check failed: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION if strict else 0
    verdicts = {
        "holds": True,
        "beta_min_below_b_min": bm.beta_min < bm.b_min,
        "theta0_in_open_range": 0.0 < bm.theta0 < np.pi / 2,
        "hessian_positive": bool(np.linalg.eigvalsh(bm.hessian).min() > 1e-10),
    }
    write_json(out / "minimum.json", {
        "assumption_checks": verdicts,
        "minimum": {
            "p0": list(map(float, bm.p0)),
            "x0": list(map(float, bm.x0)),
            "beta_min": bm.beta_min, "b_min": bm.b_min,
            "hessian": [list(map(float, row)) for row in bm.hessian],
            "theta0": bm.theta0, "normB0": bm.normB0,
            "d0": bm.d0, "gap_coeff": bm.gap_coeff,
            "grad_norm": bm.grad_norm,
        }}, cfg)
    # beta map over a coarse sampling grid for plotting
    chart_r = np.linspace(-patch["radius"], patch["radius"], 25)
    rows = []
    from .charts import plane_chart
    from .frame import F_integral, field_line, frame_fields, geodesic_family
    curve = field_line(plane_chart(), field, (0.0, 0.0),
                       (-patch["radius"], patch["radius"]),
                       step=patch["grid_step"])
    frame = geodesic_family(plane_chart(), curve,
                            (-patch["radius"], patch["radius"]),
                            step=patch["grid_step"])
    frame_fields(frame, band)
    for i, r in enumerate(frame.r_grid):
        for j, s in enumerate(frame.s_grid):
            rows.append((r, s, frame.beta[i, j], frame.theta[i, j]))
    write_csv(out / "beta_map.csv", ["r", "s", "beta", "theta"], rows)
    print(f"beta_min={bm.beta_min:.6f} < b_min={bm.b_min:.6f}; "
          f"d0={bm.d0:.6f}")
    return code


def cmd_predict(cfg: RunConfig, out: Path) -> int:
    band = _load_band(cfg, out)
    field = _field_from(cfg)
    patch = cfg["patch"]
    bm = analyze_patch(field, band, patch_radius=patch["radius"],
                       grid_step=patch["grid_step"], t_max=patch["t_max"])
    sec = cfg["predict"]
    fitted = None
    if sec["C0"] is not None and sec["C1"] is not None:
        fitted = (sec["C0"], sec["C1"])
    pred = predict_spectrum(bm, sec["h_list"], sec["n_max"], fitted=fitted)
    write_csv(out / "prediction.csv", ["h", "n", "value", "mode"],
              list(pred.rows()))
    write_json(out / "prediction.json", {
        "beta_min": pred.beta_min, "gap_coeff": pred.gap_coeff,
        "C0": pred.C0, "C1": pred.C1,
        "known_terms_only": pred.known_terms_only}, cfg)
    print(f"predictions for {len(sec['h_list'])} h values, "
          f"n <= {sec['n_max']}")
    return 0


def cmd_validate(cfg: RunConfig, out: Path) -> int:
    band = _load_band(cfg, out)
    field = _field_from(cfg)
    sec = cfg["campaign"]
    table = toy_validation(sec["h_list"], field, band,
                           n_levels=sec["n_levels"],
                           halfwidth=sec["halfwidth"], tol=sec["tol"])
    write_csv(out / "validation.csv", ["h", "n", "lambda", "residual"],
              table.rows)
    write_json(out / "validation.json", {
        "comparison": table.comparison,
        "fit": {"beta_min_hat": table.fit.beta_min_hat,
                "C0_hat": table.fit.C0_hat,
                "gap_coeff_hat": table.fit.gap_coeff_hat,
                "stderr": table.fit.stderr},
        }, cfg)
    print("validation: leading rel err "
          f"{table.comparison['leading_rel_err']:.3%}, gap exponent "
          f"{table.comparison.get('gap_exponent', float('nan')):.3f}")
    return 0


def cmd_model(cfg: RunConfig, out: Path, seed: int) -> int:
    sec = cfg["model"]
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    for trial in range(sec["n_trials"]):
        # real or purely imaginary coefficients keep the square sum real
        # and hence the spectrum real
        alpha, beta = (rng.uniform(-1, 1) * (1j if rng.random() < 0.5 else 1)
                       for _ in range(2))
        formula = model_spectrum_formula(sec["d0"], sec["p_eff0"], alpha,
                                         beta, sec["h"], sec["n_max"])
        numeric = model_spectrum_numeric(sec["d0"], alpha, beta, sec["h"],
                                         n_max=sec["n_max"],
                                         p_eff0=sec["p_eff0"])
        for n in range(sec["n_max"]):
            f, g = formula.eigenvalues[n], numeric.eigenvalues[n]
            rel = abs(g - f) / abs(f)
            worst = max(worst, rel)
            rows.append((trial, n + 1, complex(alpha), complex(beta),
                         f.real, f.imag, g.real, g.imag, rel))
    write_csv(out / "model_table.csv",
              ["trial", "n", "alpha", "beta", "formula_re", "formula_im",
               "numeric_re", "numeric_im", "rel_mismatch"], rows)
    write_json(out / "model.json", {"max_rel_mismatch": worst}, cfg)
    print(f"model operator: max relative mismatch {worst:.3e}")
    return 0 if worst < 1e-6 else EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magspec",
        description="Semiclassical spectral toolkit for the magnetic "
                    "Neumann Laplacian")
    parser.add_argument("--config", type=Path, default=None,
                        help="INI config file (JSON-fragment values)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (default from config)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--strict", action="store_true",
                        help="hypothesis violations exit nonzero")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (fallback: MAGSPEC_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)
    band = sub.add_parser("band", help="tabulate the band function")
    band.add_argument("--thetas", type=str, default=None,
                      help="comma-separated sample angles")
    sub.add_parser("beta", help="boundary energy minimum analysis")
    sub.add_parser("predict", help="expansion predictions")
    sub.add_parser("validate", help="direct-solver campaign")
    sub.add_parser("model", help="model-operator formula vs numerics")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = (RunConfig.from_ini(args.config) if args.config
               else RunConfig())
        if getattr(args, "thetas", None):
            cfg["band"]["thetas"] = [float(x)
                                     for x in args.thetas.split(",")]
        out = Path(args.out) if args.out else Path(cfg["paths"]["out"])
        out.mkdir(parents=True, exist_ok=True)
        seed = args.seed if args.seed is not None else cfg["run"]["seed"]
        threads = (args.threads
                   or int(os.environ.get("MAGSPEC_THREADS", "0"))
                   or cfg["run"]["threads"])
        strict = args.strict or cfg["run"]["strict"]
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "band":
            return cmd_band(cfg, out, threads)
        if args.command == "beta":
            return cmd_beta(cfg, out, strict)
        if args.command == "predict":
            return cmd_predict(cfg, out)
        if args.command == "validate":
            return cmd_validate(cfg, out)
        if args.command == "model":
            return cmd_model(cfg, out, seed)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AssumptionError, MinimumNotLocalizedError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (InnerSolveBreakdownError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: every computation as a subcommand emitting
reproducible CSV or JSON datasets.

Exit codes: 0 success, 2 invalid configuration, 3 computation failure.
Numeric columns are written with 17 significant digits so every float
round-trips bit-exactly; repeated runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import dynamics, lepm, linalg, spectra
from .model import ModelParams, build_liouvillian

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3


class ConfigError(Exception):
    pass


def _fmt(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _diag(msg):
    use_color = sys.stderr.isatty() and not os.environ.get("NO_COLOR")
    prefix = "\x1b[31merror:\x1b[0m" if use_color else "error:"
    print(f"{prefix} {msg}", file=sys.stderr)


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def _write_output(path, header, rows, fmt, config):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        payload = buf.getvalue()
    else:
        payload = json.dumps(
            {"config": config, "schema_version": SCHEMA_VERSION,
             "rows": [dict(zip(header, [_jsonable(v) for v in row]))
                      for row in rows]},
            indent=1, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(payload)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(payload)


def _parse_range(text):
    """a:b:n range syntax; n >= 2 points, inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from None
    if n < 2:
        raise ConfigError("range resolution must be >= 2")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ConfigError("range endpoints must be finite")
    return a, b, n


def _range_values(spec_text, log_scale=False):
    a, b, n = _parse_range(spec_text)
    if log_scale:
        if a <= 0 or b <= 0:
            raise ConfigError("log-scale ranges need positive endpoints")
        return np.geomspace(a, b, n)
    return np.linspace(a, b, n)


def _load_config_file(path):
    """Single key-value config file: one `key = value` pair per line."""
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" in line:
                    key, _, val = line.partition("=")
                elif ":" in line:
                    key, _, val = line.partition(":")
                else:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return values


_CONFIG_KEYS = {
    "gamma": float, "delta": float, "Gamma": float,
    "gamma_i": float, "gamma_f": float,
    "gamma_range": str, "delta_range": str, "Gamma_range": str,
    "Gamma_list": str, "n": int, "t_max": float, "n_samples": int,
    "log_scale": lambda s: s.lower() in ("1", "true", "yes"),
    "format": str, "out": str, "threads": int, "epsilon": float,
    "tol_root": float, "delta_floor": float, "seed": int, "norm": str,
    "side": str, "along_plane": lambda s: s.lower() in ("1", "true", "yes"),
}


def _merge_config(args):
    """Apply config-file values for options the command line left at default."""
    if not getattr(args, "config", None):
        return args
    file_vals = _load_config_file(args.config)
    for key, caster in _CONFIG_KEYS.items():
        if key in file_vals and getattr(args, key, None) in (None, False):
            try:
                setattr(args, key, caster(file_vals[key]))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"config key {key}: {exc}") from None
    unknown = set(file_vals) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required")


def _config_dict(args):
    skip = {"func", "config"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args):
    _require(args, "gamma", "delta", "Gamma")
    p = ModelParams(args.gamma, args.delta, args.Gamma)
    plus = spectra.sigma_plus_spectrum(p)
    minus, _ = spectra.sigma_minus_spectrum(p)
    numeric = linalg.eigen(build_liouvillian(p)).eigenvalues
    closed = np.concatenate([plus, minus])
    blocks = ["plus"] * 8 + ["minus"] * 8
    # pair each closed-form value with its nearest unused numeric one
    D = np.abs(closed[:, None] - numeric[None, :])
    pair = [-1] * 16
    work = D.copy()
    for _ in range(16):
        i, j = np.unravel_index(np.argmin(work), work.shape)
        pair[i] = j
        work[i, :] = np.inf
        work[:, j] = np.inf
    rows = []
    for i in range(16):
        lam = closed[i]
        num = numeric[pair[i]]
        rows.append([blocks[i], i % 8, lam.real, lam.imag,
                     num.real, num.imag, abs(lam - num)])
    header = ["block", "branch", "re_closed", "im_closed",
              "re_numeric", "im_numeric", "mismatch"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def _continue_branches(prev, prev_vel, current):
    """Greedy nearest-neighbor branch continuation with velocity prediction."""
    n = len(current)
    predicted = prev + prev_vel
    cost = np.abs(predicted[:, None] - current[None, :])
    assign = [-1] * n
    work = cost.copy()
    for _ in range(n):
        i, j = np.unravel_index(np.argmin(work), work.shape)
        assign[i] = j
        work[i, :] = np.inf
        work[:, j] = np.inf
    ordered = current[assign]
    return ordered, ordered - prev


def cmd_sweep(args):
    _require(args, "gamma", "delta", "Gamma_range")
    gammas_axis = _range_values(args.Gamma_range, args.log_scale)
    rows = []
    state = {}
    for G in gammas_axis:
        p = ModelParams(args.gamma, args.delta, float(G))
        for block, vals in (("plus", spectra.sigma_plus_spectrum(p)),
                            ("minus", spectra.sigma_minus_spectrum(p)[0])):
            if block not in state:
                order = np.lexsort((vals.imag, vals.real))
                ordered = vals[order]
                vel = np.zeros_like(ordered)
            else:
                ordered, vel = _continue_branches(*state[block], vals)
            state[block] = (ordered, vel)
            for branch, lam in enumerate(ordered):
                rows.append([float(G), block, branch, lam.real, lam.imag,
                             lam.real / G if G != 0 else math.nan])
    header = ["Gamma", "block", "branch", "re", "im", "re_over_Gamma"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def _lepm_scan_row(task):
    g, deltas, tol = task
    rows = []
    for d in deltas:
        try:
            ls = lepm.lep_roots_minus(g, d, tol)
            if not ls.minus_leps:
                rows.append([g, d, -1, math.nan, math.nan, 0, "", math.nan, "no-roots"])
            for b, r in enumerate(ls.minus_leps):
                rows.append([g, d, b, r.big_gamma, r.residual, r.multiplicity,
                             str(r.witness_ok).lower(), r.witness_gap, ""])
        except Exception as exc:
            rows.append([g, d, -1, math.nan, math.nan, 0, "", math.nan,
                         f"{type(exc).__name__}: {exc}"])
    return rows


def cmd_lepm_scan(args):
    _require(args, "gamma_range", "delta_range")
    gammas = _range_values(args.gamma_range)
    deltas = _range_values(args.delta_range)
    floor = args.delta_floor if args.delta_floor is not None else 0.05
    deltas = deltas[deltas >= floor]
    if deltas.size == 0:
        raise ConfigError("delta range is empty after applying the floor")
    tol = args.tol_root if args.tol_root is not None else lepm.ROOT_RESIDUAL_TOL
    tasks = [(float(g), [float(d) for d in deltas], tol) for g in gammas]
    if args.threads and args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as ex:
            blocks = list(ex.map(_lepm_scan_row, tasks))
    else:
        blocks = [_lepm_scan_row(t) for t in tasks]
    rows = [row for block in blocks for row in block]
    header = ["gamma", "delta", "branch", "Gamma", "residual", "multiplicity",
              "witness_ok", "witness_gap", "error"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def _phase_row(task):
    g, deltas, tol = task
    rows = []
    for d in deltas:
        try:
            pp = lepm.gamma_cr(g, d, tol)
            rows.append([g, d, pp.gamma_cr, pp.region, ""])
        except Exception as exc:
            rows.append([g, d, math.nan, "", f"{type(exc).__name__}: {exc}"])
    return rows


def cmd_phase_diagram(args):
    _require(args, "gamma_range", "delta_range")
    gammas = _range_values(args.gamma_range)
    deltas = _range_values(args.delta_range)
    floor = args.delta_floor if args.delta_floor is not None else 0.05
    deltas = deltas[deltas >= floor]
    if deltas.size == 0:
        raise ConfigError("delta range is empty after applying the floor")
    tol = args.tol_root if args.tol_root is not None else lepm.ROOT_RESIDUAL_TOL
    tasks = [(float(g), [float(d) for d in deltas], tol) for g in gammas]
    if args.threads and args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as ex:
            blocks = list(ex.map(_phase_row, tasks))
    else:
        blocks = [_phase_row(t) for t in tasks]
    rows = [row for block in blocks for row in block]
    header = ["gamma", "delta", "gamma_cr", "region", "error"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def cmd_boundary(args):
    _require(args, "side", "gamma_range")
    gammas = _range_values(args.gamma_range)
    curve = lepm.boundary_curve(args.side, gammas)
    rows = []
    by_gamma = {s.gamma: s for s in curve.samples}
    for g in gammas:
        g = float(g)
        if g in by_gamma:
            s = by_gamma[g]
            rows.append([curve.side, g, s.delta_lower, s.delta_upper,
                         len(s.deltas), ""])
        else:
            rows.append([curve.side, g, math.nan, math.nan, 0, "no-root"])
    header = ["side", "gamma", "delta_lower", "delta_upper", "n_roots", "error"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def cmd_quench(args):
    _require(args, "gamma_i", "gamma_f", "delta", "Gamma", "t_max")
    n = args.n_samples if args.n_samples is not None else 600
    eps = args.epsilon if args.epsilon is not None else 1e-2
    norm = args.norm if args.norm else "fro"
    big_gamma_i = None
    if args.along_plane:
        # two-parameter protocol: dissipation rides Gamma = n*gamma with
        # n fixed by the final pair, so Gamma_i = Gamma * gamma_i / gamma_f
        big_gamma_i = args.Gamma * args.gamma_i / args.gamma_f
    samples = dynamics.quench(args.gamma_i, args.gamma_f, args.delta, args.Gamma,
                              args.t_max, n, big_gamma_i=big_gamma_i, norm=norm)
    tstar = dynamics.relaxation_time(samples, eps)
    rows = [["sample", s.t, s.distance] for s in samples]
    rows.append(["tstar", tstar, eps])
    header = ["kind", "t", "distance"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def cmd_zeno_check(args):
    _require(args, "gamma", "delta", "Gamma_list")
    try:
        glist = [float(s) for s in args.Gamma_list.split(",") if s]
    except ValueError as exc:
        raise ConfigError(f"bad --Gamma-list: {exc}") from None
    if not glist:
        raise ConfigError("--Gamma-list is empty")
    rows = []
    for G in glist:
        p = ModelParams(args.gamma, args.delta, G)
        exact = np.concatenate([spectra.sigma_plus_spectrum(p),
                                spectra.sigma_minus_spectrum(p)[0]])
        stripes = spectra.asymptotic_spectrum(p).all_values()
        D = np.abs(exact[:, None] - stripes[None, :])
        work = D.copy()
        pairs = []
        for _ in range(16):
            i, j = np.unravel_index(np.argmin(work), work.shape)
            pairs.append((i, j, D[i, j]))
            work[i, :] = np.inf
            work[:, j] = np.inf
        for i, j, err in sorted(pairs):
            rows.append([G, i, exact[i].real, exact[i].imag,
                         stripes[j].real, stripes[j].imag, err])
    header = ["Gamma", "eig_index", "re_exact", "im_exact",
              "re_stripe", "im_stripe", "pairing_error"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


def cmd_jordan(args):
    _require(args, "gamma", "delta", "Gamma")
    p = ModelParams(args.gamma, args.delta, args.Gamma)
    rows = []
    for tag in ("plus", "minus"):
        for k, rep in enumerate(spectra.jordan_structure(p, tag)):
            rows.append([tag, k, rep.eigenvalue.real, rep.eigenvalue.imag,
                         rep.algebraic_mult, rep.geometric_mult,
                         ";".join(str(s) for s in rep.block_sizes)])
    header = ["block", "cluster", "re_eig", "im_eig",
              "algebraic", "geometric", "block_sizes"]
    _write_output(args.out, header, rows, args.format, _config_dict(args))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sp):
    # defaults resolve after the config-file merge so the file can set them
    sp.add_argument("--format", choices=("csv", "json"), default=None)
    sp.add_argument("--out", default=None, help="output path ('-' = stdout)")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--config", help="key = value config file; flags override")
    sp.add_argument("--seed", type=int, default=None,
                    help="recorded in the output config (sampling reproducibility)")


def _resolve_defaults(args):
    if getattr(args, "format", None) is None:
        args.format = "csv"
    if getattr(args, "out", None) is None:
        args.out = "-"
    if getattr(args, "threads", None) is None:
        args.threads = 1
    if getattr(args, "seed", None) is None:
        args.seed = 0
    return args


def build_parser():
    ap = argparse.ArgumentParser(
        prog="zenolepm",
        description="Spectra, exceptional-point manifolds and relaxation "
                    "dynamics of the dissipative two-qubit model.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="16 eigenvalues at one parameter point")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--Gamma", type=float)
    _add_common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="eigenvalue branches along a Gamma range")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--Gamma-range", dest="Gamma_range")
    sp.add_argument("--log-scale", dest="log_scale", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("lepm-scan", help="branching manifolds over a (gamma, delta) grid")
    sp.add_argument("--gamma-range", dest="gamma_range")
    sp.add_argument("--delta-range", dest="delta_range")
    sp.add_argument("--delta-floor", dest="delta_floor", type=float)
    sp.add_argument("--tol-root", dest="tol_root", type=float)
    _add_common(sp)
    sp.set_defaults(func=cmd_lepm_scan)

    sp = sub.add_parser("phase-diagram", help="critical dissipation and region labels")
    sp.add_argument("--gamma-range", dest="gamma_range")
    sp.add_argument("--delta-range", dest="delta_range")
    sp.add_argument("--delta-floor", dest="delta_floor", type=float)
    sp.add_argument("--tol-root", dest="tol_root", type=float)
    _add_common(sp)
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("boundary", help="region-boundary curve at fixed plane")
    sp.add_argument("--side", choices=("LEFT", "RIGHT", "left", "right"))
    sp.add_argument("--gamma-range", dest="gamma_range")
    _add_common(sp)
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("quench", help="anisotropy quench relaxation curve")
    sp.add_argument("--gamma-i", dest="gamma_i", type=float)
    sp.add_argument("--gamma-f", dest="gamma_f", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--Gamma", type=float)
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--n-samples", dest="n_samples", type=int)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--norm", choices=("fro", "spec"))
    sp.add_argument("--along-plane", dest="along_plane", action="store_true",
                    help="quench dissipation together with the anisotropy")
    _add_common(sp)
    sp.set_defaults(func=cmd_quench)

    sp = sub.add_parser("zeno-check", help="stripe pairing errors for a Gamma list")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--Gamma", "--Gamma-list", dest="Gamma_list",
                    help="comma-separated dissipation strengths")
    _add_common(sp)
    sp.set_defaults(func=cmd_zeno_check)

    sp = sub.add_parser("jordan", help="eigenvalue clusters and Jordan data")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--Gamma", type=float)
    _add_common(sp)
    sp.set_defaults(func=cmd_jordan)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the config exit code
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        args = _resolve_defaults(_merge_config(args))
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        _diag(str(exc))
        return EXIT_CONFIG
    except (linalg.NonConvergence, linalg.DegenerateAllZero,
            dynamics.DenominatorVanishes, dynamics.NegativeRadicand,
            spectra.QuarticBranchFailure, lepm.NoRoot, ArithmeticError) as exc:
        _diag(f"computation failed: {exc}")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())

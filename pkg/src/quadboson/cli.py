"""Command-line front end.

Subcommands
-----------
analyze   full pipeline report for a form file
sweep     stability classification over a parameter grid (CSV)
evolve    propagator trace over a time grid (CSV)
bcs       the pairing example: single-point report or a delta sweep
oracle    truncated-Fock comparison table for a form file

Classification codes in CSV output: 0 = PositiveDefinite,
1 = StableNonPositive, 2 = UnstableComplex, 3 = NonDiagonalizable.

Exit codes: 0 success; 2 usage or bad sweep range; 3 unreadable or
malformed form file; 4 structural validation failure; 5 numerical failure
(overflow, wrong regime, defective input where a transform was required).

Floats are printed with ``repr`` (shortest round-trip, locale independent)
so identical inputs and flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bcs as bcs_mod
from . import evolution, formio, normal_modes, oracle, spectral
from .core import bar_vector, dynamical_matrix
from .errors import (
    BadRange,
    DimensionCap,
    DimensionMismatch,
    NotDiagonalizable,
    NullNorm,
    Overflow,
    PairingFailure,
    ParseError,
    QuadBosonError,
    StructureViolation,
    WrongRegime,
)

CLASS_CODES = {
    spectral.StabilityClass.POSITIVE_DEFINITE: 0,
    spectral.StabilityClass.STABLE_NON_POSITIVE: 1,
    spectral.StabilityClass.UNSTABLE_COMPLEX: 2,
    spectral.StabilityClass.NON_DIAGONALIZABLE: 3,
}


def _fmt(x) -> str:
    return repr(float(x))


def _parse_range(spec: str):
    """'a:b:n' -> inclusive grid; a plain number -> fixed value."""
    if ":" not in spec:
        try:
            return float(spec)
        except ValueError:
            raise BadRange(f"cannot parse {spec!r} as a number") from None
    parts = spec.split(":")
    if len(parts) != 3:
        raise BadRange(f"range must be min:max:steps, got {spec!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise BadRange(f"range must be min:max:steps, got {spec!r}") from None
    if steps < 2:
        raise BadRange(f"need at least 2 steps, got {steps}")
    if not lo < hi:
        raise BadRange(f"range minimum {lo} must be below maximum {hi}")
    return np.linspace(lo, hi, steps)


def _emit(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tolerances(args) -> spectral.Tolerances:
    return spectral.Tolerances(eig=args.tol_eig)


def _mode_table(form, report, tol):
    """Per-mode rows: frequency, hermitian flag, norm residual."""
    rows = []
    residuals = [None] * len(report.mode_frequencies)
    hermitian = [bool(abs(l.imag) <= tol.eig * max(1.0, abs(l)))
                 for l in report.mode_frequencies]
    if report.diagonalizable:
        try:
            pairs, bt = spectral.decompose(form, tol)
            n = bt.n_modes
            mdiag = np.concatenate([np.ones(n), -np.ones(n)])
            for i in range(n):
                c = bar_vector(bt.W[:, n + i]) @ (mdiag * bt.W[:, i])
                residuals[i] = float(abs(c - 1.0))
        except (NullNorm, NotDiagonalizable):
            pass
    for i, lam in enumerate(report.mode_frequencies):
        rows.append({
            "lambda": [lam.real, lam.imag],
            "hermitian": hermitian[i],
            "norm_residual": residuals[i],
        })
    return rows


def cmd_analyze(args) -> int:
    tol = _tolerances(args)
    form = formio.load_form(args.input, tol_struct=args.tol_struct)
    report = spectral.classify(form, tol)
    doc = report.to_dict()
    doc["input_digest"] = formio.form_digest(args.input)
    doc["n_modes"] = form.n_modes
    doc["mode_table"] = _mode_table(form, report, tol)
    doc["thresholds"] = None
    warnings = list(doc["warnings"])
    if not report.diagonalizable:
        warnings.append("Jordan blocks detected; no boson-diagonal form exists")
        freqs = report.mode_frequencies
        if report.zero_mode_count == 0 and np.all(
                np.abs(freqs.imag) <= args.tol_eig * max(1.0, np.abs(freqs).max())):
            warnings.append("eigenvalues all real and non-zero")
    doc["warnings"] = warnings
    if args.emit_modes and report.diagonalizable:
        pairs, bt = spectral.decompose(form, tol)
        lams = [p.lam for p in pairs]
        df = normal_modes.diagonal_form(bt, lams, tol)
        inv = normal_modes.invariants(bt)
        doc["diagonal_form"] = df.to_dict()
        doc["invariants"] = [[[[v.real, v.imag] for v in row] for row in k]
                             for k in inv.K]
    if args.format == "doc":
        _emit([json.dumps(doc, indent=2, sort_keys=True)], args.out)
    else:
        lines = ["field,value"]
        for key in ("classification", "diagonalizable", "zero_mode_count",
                    "input_digest", "n_modes"):
            lines.append(f"{key},{doc[key]}")
        lines.append("h_eigenvalues," + ";".join(_fmt(x) for x in doc["h_eigenvalues"]))
        for w in warnings:
            lines.append(f"warning,{w}")
        lines.append("mode,lambda_re,lambda_im,hermitian,norm_residual")
        for i, row in enumerate(doc["mode_table"]):
            res = "" if row["norm_residual"] is None else _fmt(row["norm_residual"])
            lines.append(f"{i},{_fmt(row['lambda'][0])},{_fmt(row['lambda'][1])},"
                         f"{int(row['hermitian'])},{res}")
        _emit(lines, args.out)
    return 0


def _sweep_point(task):
    eps, gam, delta, kappa, tol_eig = task
    tol = spectral.Tolerances(eig=tol_eig)
    params = bcs_mod.BcsParams(eps, gam, delta, kappa)
    report = spectral.classify(bcs_mod.bcs_form(params), tol)
    freqs = report.mode_frequencies
    return (
        CLASS_CODES[report.classification],
        float(np.abs(freqs.imag).max()),
        float(report.h_eigenvalues.min()),
    )


def cmd_sweep(args) -> int:
    fixed = {}
    ranges = {}
    for name in ("delta", "kappa", "gamma"):
        parsed = _parse_range(getattr(args, name))
        if isinstance(parsed, float):
            fixed[name] = parsed
        else:
            ranges[name] = parsed
    if not 1 <= len(ranges) <= 2:
        raise BadRange(
            f"sweep needs one or two ranged parameters, got {len(ranges)}"
        )
    order = [n for n in ("delta", "kappa", "gamma") if n in ranges]
    grids = [ranges[n] for n in order]
    points = []
    if len(grids) == 1:
        for v in grids[0]:
            vals = dict(fixed)
            vals[order[0]] = float(v)
            points.append(vals)
    else:
        for v0 in grids[0]:
            for v1 in grids[1]:
                vals = dict(fixed)
                vals[order[0]] = float(v0)
                vals[order[1]] = float(v1)
                points.append(vals)
    tasks = [(args.epsilon, v["gamma"], v["delta"], v["kappa"], args.tol_eig)
             for v in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks, chunksize=16))
    else:
        results = [_sweep_point(t) for t in tasks]
    header = "epsilon,gamma,delta,kappa,class_code,max_im_lambda,min_sigma"
    if args.format == "doc":
        docs = []
        for v, (code, max_im, min_sig) in zip(points, results):
            docs.append({"epsilon": args.epsilon, "gamma": v["gamma"],
                         "delta": v["delta"], "kappa": v["kappa"],
                         "class_code": code, "max_im_lambda": max_im,
                         "min_sigma": min_sig})
        _emit([json.dumps(docs, indent=2, sort_keys=True)], args.out)
        return 0
    lines = [header]
    for v, (code, max_im, min_sig) in zip(points, results):
        lines.append(f"{_fmt(args.epsilon)},{_fmt(v['gamma'])},{_fmt(v['delta'])},"
                     f"{_fmt(v['kappa'])},{code},{_fmt(max_im)},{_fmt(min_sig)}")
    _emit(lines, args.out)
    return 0


def cmd_evolve(args) -> int:
    tol = _tolerances(args)
    form = formio.load_form(args.input, tol_struct=args.tol_struct)
    dyn = dynamical_matrix(form)
    pairs, _ = spectral.eigen_pairs(dyn, tol)
    lams = np.array([p.lam for p in pairs])
    parsed = _parse_range(args.t)
    times = np.atleast_1d(parsed if not isinstance(parsed, float) else [parsed])
    shift = 1j * args.complex_time
    header = ("t_re,t_im,max_abs_u,symplectic_residual,"
              + ",".join(f"mode{i+1}_phase_mag" for i in range(form.n_modes)))
    rows = []
    for t_real in times:
        t = complex(t_real) + shift
        prop = evolution.propagate(dyn, t)
        mags = np.abs(np.exp(-1j * lams * t))
        rows.append((t, float(np.abs(prop.U).max()), prop.symplectic_residual, mags))
    if args.format == "doc":
        docs = [{"t": [t.real, t.imag], "max_abs_u": mx, "symplectic_residual": sr,
                 "mode_phase_mags": [float(m) for m in mags]}
                for t, mx, sr, mags in rows]
        _emit([json.dumps(docs, indent=2, sort_keys=True)], args.out)
        return 0
    lines = [header]
    for t, mx, sr, mags in rows:
        lines.append(f"{_fmt(t.real)},{_fmt(t.imag)},{_fmt(mx)},{_fmt(sr)},"
                     + ",".join(_fmt(m) for m in mags))
    _emit(lines, args.out)
    return 0


def _sigma_columns(p: bcs_mod.BcsParams) -> np.ndarray:
    sig = bcs_mod.bcs_sigma(p)
    if sig.size == 2:
        return np.array([sig[0], sig[0], sig[1], sig[1]])
    return sig


def cmd_bcs(args) -> int:
    tol = _tolerances(args)
    try:
        base = bcs_mod.BcsParams(args.epsilon, args.gamma, args.delta, args.kappa)
    except ValueError as exc:
        raise BadRange(str(exc)) from None
    if args.sweep:
        grid = _parse_range(args.sweep)
        if isinstance(grid, float):
            raise BadRange("--sweep requires min:max:steps")
        header = ("delta,class_code,lambda_plus_re,lambda_plus_im,"
                  "lambda_minus_re,lambda_minus_im,sigma_1,sigma_2,sigma_3,sigma_4")
        lines = [header]
        for d in grid:
            p = bcs_mod.BcsParams(args.epsilon, args.gamma, float(d), args.kappa)
            report = spectral.classify(bcs_mod.bcs_form(p), tol)
            lp, lm = report.mode_frequencies
            sig = _sigma_columns(p)
            lines.append(
                f"{_fmt(d)},{CLASS_CODES[report.classification]},"
                f"{_fmt(lp.real)},{_fmt(lp.imag)},{_fmt(lm.real)},{_fmt(lm.imag)},"
                + ",".join(_fmt(s) for s in sig))
        _emit(lines, args.out)
        return 0
    report = spectral.classify(bcs_mod.bcs_form(base), tol)
    thresholds = bcs_mod.bcs_thresholds(base)
    doc = {
        "params": {"epsilon": base.epsilon, "gamma": base.gamma,
                   "delta": base.delta, "kappa": base.kappa},
        "classification": report.classification.value,
        "mode_frequencies": [[l.real, l.imag] for l in report.mode_frequencies],
        "sigma": [float(s) for s in bcs_mod.bcs_sigma(base)],
        "thresholds": thresholds.to_dict(),
    }
    if base.kappa != 0.0:
        doc["thresholds"]["note"] = (
            "outer reentry edge from numeric bisection; the closed-form "
            "readings are dimensionally ambiguous and reported for comparison"
        )
    if base.kappa == 0.0:
        try:
            u, v = bcs_mod.bcs_uv(base, tol)
            doc["u"] = [u.real, u.imag]
            doc["v"] = [v.real, v.imag]
        except QuadBosonError:
            doc["u"] = doc["v"] = None
    _emit([json.dumps(doc, indent=2, sort_keys=True)], args.out)
    return 0


def cmd_oracle(args) -> int:
    tol = _tolerances(args)
    form = formio.load_form(args.input, tol_struct=args.tol_struct)
    report = oracle.fock_spectrum_check(form, args.nmax, args.levels, tol)
    if args.format == "doc":
        _emit([json.dumps(report.to_dict(), indent=2, sort_keys=True)], args.out)
        return 0
    lines = ["level,predicted,observed,abs_deviation"]
    for i, (pred, obs) in enumerate(zip(report.predicted, report.observed)):
        lines.append(f"{i},{_fmt(pred)},{_fmt(obs)},{_fmt(abs(pred - obs))}")
    _emit(lines, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-eig", type=float, default=1e-9,
                        help="relative eigen/classification tolerance (default 1e-9)")
    common.add_argument("--tol-struct", type=float, default=1e-12,
                        help="relative structural validation tolerance (default 1e-12)")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes for sweeps (default 1)")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--format", choices=("csv", "doc"), default=None,
                        help="output format (doc = JSON); default depends on command")

    parser = argparse.ArgumentParser(
        prog="quadboson",
        description="Diagonalization and stability analysis of quadratic boson forms",
        epilog="Classification codes: 0 PositiveDefinite, 1 StableNonPositive, "
               "2 UnstableComplex, 3 NonDiagonalizable.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="classify a form file and report its modes")
    p.add_argument("input", help="form file (JSON, see README for schema)")
    p.add_argument("--emit-modes", action="store_true",
                   help="include extraction rows and invariants in the report")
    p.set_defaults(func=cmd_analyze, default_format="doc")

    p = sub.add_parser("sweep", parents=[common],
                       help="classification sweep over pairing-model parameters")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--gamma", default="0.3", help="value or range min:max:steps")
    p.add_argument("--delta", default="0.0", help="value or range min:max:steps")
    p.add_argument("--kappa", default="0.0", help="value or range min:max:steps")
    p.set_defaults(func=cmd_sweep, default_format="csv")

    p = sub.add_parser("evolve", parents=[common],
                       help="propagator trace over a time grid")
    p.add_argument("input", help="form file")
    p.add_argument("--t", required=True, help="time value or range min:max:steps")
    p.add_argument("--complex-time", type=float, default=0.0,
                   help="add i*IM to every grid time (probes the complex-time "
                        "metric identity)")
    p.set_defaults(func=cmd_evolve, default_format="csv")

    p = sub.add_parser("bcs", parents=[common],
                       help="pairing example: report or delta sweep")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--sweep", default=None,
                   help="sweep delta over min:max:steps instead of one point")
    p.set_defaults(func=cmd_bcs, default_format="csv")

    p = sub.add_parser("oracle", parents=[common],
                       help="truncated-Fock spectrum comparison")
    p.add_argument("--input", required=True, help="form file")
    p.add_argument("--nmax", type=int, default=12, help="per-mode cutoff")
    p.add_argument("--levels", type=int, default=6, help="levels to compare")
    p.set_defaults(func=cmd_oracle, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except BadRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (StructureViolation, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (Overflow, WrongRegime, NotDiagonalizable, NullNorm,
            PairingFailure, DimensionCap) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())

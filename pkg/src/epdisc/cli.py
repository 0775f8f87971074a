"""Command line front end: scans, figure data export, and the 3x3 demo.

Exit codes: 0 success (including a valid empty result), 2 computation
failure, 64 usage error, 66 missing input file.  The default precision
comes from the EPDISC_PRECISION environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .epsolver import scan
from .figures import render_png, series_from_reports, write_figure_csv
from .models import ModelSpec
from .report import read_json, write_csv, write_json
from .rings import DEFAULT_PRECISION

EXIT_OK = 0
EXIT_COMPUTE = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66

_MATHIEU_KIND = {
    "pi-even": "MathieuPiEven",
    "pi-odd": "MathieuPiOdd",
    "2pi-even": "Mathieu2PiEven",
    "2pi-odd": "Mathieu2PiOdd",
}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _add_model_flags(p):
    p.add_argument(
        "--model",
        choices=["box-x", "box-x2", "mathieu", "rotor", "top", "toy3"],
    )
    p.add_argument(
        "--class",
        dest="sym_class",
        choices=["pi-even", "pi-odd", "2pi-even", "2pi-odd"],
        help="Mathieu symmetry class",
    )
    p.add_argument("--parity", choices=["even", "odd"], help="box-x2 block")
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--beta", default=None, help="toy3 coupling, a rational")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--ring", choices=["exact", "float", "auto"], default=None)
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None, help="JSON file of these options")


def _merge_config(ns):
    """Options from --config, overridden by explicitly passed flags."""
    merged = {
        k: v for k, v in vars(ns).items() if k not in ("func", "report")
    }
    if ns.config is not None:
        if not os.path.exists(ns.config):
            raise InputError(f"config file not found: {ns.config}")
        with open(ns.config) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"config is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        for key, value in data.items():
            attr = key.replace("-", "_")
            if attr == "class":
                attr = "sym_class"
            if attr not in merged:
                raise UsageError(f"unknown config key {key!r}")
            if merged[attr] is None:
                merged[attr] = value
    return merged


def _build_spec(opts):
    model = opts.get("model")
    if model is None:
        raise UsageError("--model is required")
    precision = opts.get("precision") or DEFAULT_PRECISION
    if precision < 24:
        raise UsageError("--precision must be at least 24 bits")
    if model == "mathieu":
        if opts.get("sym_class") is None:
            raise UsageError("--model mathieu needs --class")
        kind = _MATHIEU_KIND[opts["sym_class"]]
        return ModelSpec(kind=kind, prec=precision)
    if model == "box-x":
        return ModelSpec(kind="BoxX", prec=precision)
    if model == "box-x2":
        if opts.get("parity") is None:
            raise UsageError("--model box-x2 needs --parity")
        return ModelSpec(kind="BoxX2", parity=opts["parity"], prec=precision)
    if model == "rotor":
        return ModelSpec(kind="RigidRotor", M=opts.get("M") or 0, prec=precision)
    if model == "top":
        return ModelSpec(
            kind="SymmetricTop",
            M=opts.get("M") or 0,
            K=opts.get("K") or 0,
            prec=precision,
        )
    beta = opts.get("beta")
    return ModelSpec(
        kind="Toy3",
        beta=None if beta is None else Fraction(beta),
        prec=precision,
    )


def _check_range(opts, spec):
    if spec.kind == "Toy3":
        return None, None
    n_min, n_max = opts.get("n_min"), opts.get("n_max")
    if n_min is None or n_max is None:
        raise UsageError("--n-min and --n-max are required for this model")
    if n_min < 2 or n_max <= n_min:
        raise UsageError("dimension range must satisfy 2 <= n-min < n-max")
    return n_min, n_max


def _out_base(opts, default_stem):
    out = opts.get("out") or default_stem
    for ext in (".json", ".csv", ".png"):
        if out.endswith(ext):
            return out[: -len(ext)]
    return out


def _run_scan(opts):
    spec = _build_spec(opts)
    n_min, n_max = _check_range(opts, spec)
    try:
        return scan(
            spec,
            n_min,
            n_max,
            tol=opts.get("tol") or 1e-3,
            precision=opts.get("precision") or DEFAULT_PRECISION,
            ring=opts.get("ring") or "auto",
        )
    except (ValueError,) as exc:
        raise UsageError(str(exc))


def cmd_scan(ns):
    opts = _merge_config(ns)
    try:
        report = _run_scan(opts)
    except UsageError:
        raise
    except Exception as exc:
        sys.stderr.write(f"scan failed: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE
    label = report.model.label().replace(" ", "-").replace("=", "")
    base = _out_base(opts, f"epdisc-{label}")
    write_json(report, base + ".json")
    written = [base + ".json"]
    if (opts.get("format") or "json") == "csv":
        write_csv(report, base + ".csv")
        written.append(base + ".csv")
    print(
        f"{report.model.label()}: dims {report.dims[0]}..{report.dims[-1]}, "
        f"{len(report.accepted)} accepted, {len(report.rejected)} rejected "
        f"-> {', '.join(written)}"
    )
    for w in report.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def cmd_figure(ns):
    opts = _merge_config(ns)
    if ns.report:
        reports = []
        for path in ns.report:
            if not os.path.exists(path):
                raise InputError(f"report file not found: {path}")
            reports.append(read_json(path))
    else:
        try:
            reports = [_run_scan(opts)]
        except UsageError:
            raise
        except Exception as exc:
            sys.stderr.write(f"scan failed: {type(exc).__name__}: {exc}\n")
            return EXIT_COMPUTE
    series = series_from_reports(reports)
    base = _out_base(opts, "epdisc-figure")
    write_figure_csv(series, base + ".csv")
    render_png(series, base + ".png", title=reports[0].model.kind)
    total = sum(len(pts) for _, pts in series)
    print(
        f"{len(series)} series, {total} points -> {base}.csv, {base}.png"
    )
    return EXIT_OK


def cmd_toy(ns):
    from .toy3 import ep_pair, jordan_at_ep, toy_charpoly, toy_disc

    opts = _merge_config(ns)
    beta = Fraction(opts.get("beta") or "1/10")
    up, down = ep_pair(beta)
    print(f"beta = {beta}")
    print("characteristic polynomial rows (by E power):")
    for i, row in enumerate(toy_charpoly(beta).rows):
        print(f"  E^{i}: [{', '.join(str(c) for c in row.coeffs)}]")
    joined = ", ".join(str(c) for c in toy_disc(beta).coeffs)
    print(f"discriminant coefficients: [{joined}]")
    print(f"exceptional couplings: {up}  and  {down}")
    if beta == Fraction(1, 10):
        v1, v2, v3, u, j = jordan_at_ep()
        print("jordan chain at the upper point (eigenvalue 2):")
        for name, vec in (("v1", v1), ("v2", v2), ("v3", v3)):
            print(f"  {name} = ({', '.join(str(c) for c in vec)})")
        print("similarity transform U rows:")
        for row in u:
            print(f"  [{', '.join(str(c) for c in row)}]")
        print("U^-1 H U rows:")
        for row in j:
            print(f"  [{', '.join(str(c) for c in row)}]")
    return EXIT_OK


def build_parser():
    parser = _Parser(
        prog="epdisc",
        description=(
            "Locate exceptional points of parameter-dependent "
            "Hamiltonians through discriminants of truncated secular "
            "polynomials."
        ),
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p_scan = sub.add_parser("scan", help="run the pipeline on one model")
    _add_model_flags(p_scan)
    p_scan.set_defaults(func=cmd_scan, report=None)
    p_fig = sub.add_parser(
        "figure", help="export point sets (CSV + PNG) from scans"
    )
    _add_model_flags(p_fig)
    p_fig.add_argument(
        "--report",
        action="append",
        default=None,
        help="existing scan JSON (repeatable); omitting runs a scan",
    )
    p_fig.set_defaults(func=cmd_figure)
    p_toy = sub.add_parser("toy", help="print the exact 3x3 demo artifacts")
    _add_model_flags(p_toy)
    p_toy.set_defaults(func=cmd_toy, report=None)
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    if not hasattr(ns, "func"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return ns.func(ns)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands:

* ``coeffs``      exact reflection coefficients, constants and bound
* ``norm``        sup-over-p norm report for a configured field
* ``extend-eval`` evaluate the extension (or a derivative) at points from CSV
* ``verify``      run the full verification suite; exit status = pass/fail

Configuration lives in a TOML file (see README); every flag overrides the
corresponding config value.  Reports are emitted as deterministic JSON
(17 significant digits) and CSV tables.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import CoefficientOrderError, ConfigError, SglsError
from .extension import extend, hestenes_coefficients
from .norms import sgls_norm
from .serialize import format_float_human, to_json_text
from .verify import run_full_suite

_OUTPUT_DIR_ENV = "SGLS_OUTPUT_DIR"

_EXIT_CHECK_FAILED = 1
_EXIT_USAGE = 2
_EXIT_RUNTIME = 3


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(f"error[{code}]: {message}\n")
    return status


def _output_dir(args) -> Path:
    if getattr(args, "out_dir", None):
        return Path(args.out_dir)
    env = os.environ.get(_OUTPUT_DIR_ENV)
    return Path(env) if env else Path(".")


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig.from_dict({})
    overrides = {
        "m": getattr(args, "m", None),
        "seed": getattr(args, "seed", None),
        "threads": getattr(args, "threads", None),
        "pgrid.p_cap": getattr(args, "p_cap", None),
        "verify.d": getattr(args, "d", None),
    }
    if getattr(args, "inject_coefficient_fault", False):
        overrides["verify.inject_coefficient_fault"] = True
    return cfg.with_overrides(**overrides)


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    coeffs = hestenes_coefficients(args.m)
    if args.json:
        payload = {
            "m": coeffs.m,
            "c": [str(v) for v in coeffs.c],
            "C": str(coeffs.C_of_m),
            "bound": str(coeffs.bound),
        }
        sys.stdout.write(to_json_text(payload))
        return 0
    print(f"m = {coeffs.m}")
    for k, ck in enumerate(coeffs.c, start=1):
        print(f"c_{k} = {ck} ({format_float_human(float(ck))})")
    print(f"C(m) = {coeffs.C_of_m} ({format_float_human(float(coeffs.C_of_m))})")
    print(f"bound 1 + C(m) = {coeffs.bound} ({format_float_human(float(coeffs.bound))})")
    return 0


# ---------------------------------------------------------------------------
# norm
# ---------------------------------------------------------------------------


def cmd_norm(args) -> int:
    cfg = _load_config(args)
    field = cfg.build_field()
    domain = cfg.domain(field)
    report = sgls_norm(field, cfg.m, cfg.psi_spec(), domain, cfg.pgrid(),
                       cfg.quad(), threads=cfg.threads)
    payload = {
        "field": field.label,
        "m": cfg.m,
        "psi": cfg.psi_spec().describe(),
        **report.to_json_dict(),
    }
    text = to_json_text(payload)
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
        print(f"report written to {args.json_out}")
    else:
        sys.stdout.write(text)
    if args.csv_out:
        report.write_csv(args.csv_out)
        print(f"ratio table written to {args.csv_out}")
    return 0


# ---------------------------------------------------------------------------
# extend-eval
# ---------------------------------------------------------------------------


def _read_points(path, dim: int) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                if lineno == 1:
                    continue  # tolerate a header line
                raise ConfigError(f"{path}:{lineno}: non-numeric coordinate row")
    pts = np.asarray(rows, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ConfigError(
            f"{path}: expected rows of {dim} coordinates, got shape {pts.shape}"
        )
    return pts


def cmd_extend_eval(args) -> int:
    cfg = _load_config(args)
    base = cfg.build_field()
    coeffs = hestenes_coefficients(cfg.m)
    ext = extend(base, coeffs)
    pts = _read_points(args.points, base.dim)
    if args.alpha:
        try:
            alpha = tuple(int(v) for v in args.alpha.split(","))
        except ValueError:
            raise ConfigError(
                f"--alpha must be comma-separated integers, got {args.alpha!r}"
            ) from None
        values = ext.deriv(alpha, pts)
        value_header = "deriv_" + "_".join(str(v) for v in alpha)
    else:
        values = ext.eval(pts)
        value_header = "value"
    values = np.atleast_1d(values)
    out = sys.stdout if not args.output else open(args.output, "w", encoding="utf-8",
                                                  newline="")
    try:
        writer = csv.writer(out)
        writer.writerow([f"x{j + 1}" for j in range(base.dim)] + [value_header])
        for row, val in zip(pts, values):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(val))])
    finally:
        if args.output:
            out.close()
            print(f"evaluations written to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    suite_cfg = cfg.suite_config()
    report = run_full_suite(suite_cfg)

    out_dir = _output_dir(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "verify_report.json"
    csv_path = out_dir / "verify_fields.csv"
    json_path.write_text(to_json_text(report.to_json_dict()), encoding="utf-8")
    report.write_csv(csv_path)

    for check in report.checks:
        print(f"{check.status.upper():4s}  {check.name}")
    print(f"max ratio {format_float_human(report.max_ratio)} "
          f"(bound {format_float_human(report.bound)}, witness {report.witness})")
    print(f"report: {json_path}")
    print(f"fields: {csv_path}")
    if not report.passed:
        failing = ", ".join(c.name for c in report.checks if not c.passed)
        return _fail("verification", f"checks failed: {failing}", _EXIT_CHECK_FAILED)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgls",
        description="Half-space function norms and the reflection extension operator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeffs = sub.add_parser("coeffs", help="exact reflection coefficients")
    p_coeffs.add_argument("--m", type=int, required=True, help="smoothness order (0..12)")
    p_coeffs.add_argument("--json", action="store_true", help="emit JSON to stdout")

    def add_common(p):
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--m", type=int, default=None, help="smoothness order override")
        p.add_argument("--seed", type=int, default=None, help="seed for sample points")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap for per-exponent evaluations")

    p_norm = sub.add_parser("norm", help="sup-over-p norm report")
    add_common(p_norm)
    p_norm.add_argument("--p-cap", type=float, default=None,
                        help="search cap for unbounded supports")
    p_norm.add_argument("--json-out", help="write the JSON report here instead of stdout")
    p_norm.add_argument("--csv-out", help="also write the p,raw_norm,psi,ratio table")

    p_ext = sub.add_parser("extend-eval",
                           help="evaluate the extension at points from a CSV file")
    add_common(p_ext)
    p_ext.add_argument("--points", required=True, help="CSV of coordinate rows")
    p_ext.add_argument("--alpha", default=None,
                       help="comma-separated derivative multi-index (default: values)")
    p_ext.add_argument("--output", help="output CSV (default stdout)")

    p_verify = sub.add_parser("verify", help="run the verification suite")
    add_common(p_verify)
    p_verify.add_argument("--d", type=int, default=None, help="spatial dimension (1..3)")
    p_verify.add_argument("--out-dir", default=None,
                          help=f"report directory (default ${_OUTPUT_DIR_ENV} or .)")
    p_verify.add_argument("--inject-coefficient-fault", action="store_true",
                          help="sabotage c_1 to demonstrate the suite catches it")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "coeffs": cmd_coeffs,
        "norm": cmd_norm,
        "extend-eval": cmd_extend_eval,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, CoefficientOrderError) as exc:
        return _fail(exc.code, str(exc), _EXIT_USAGE)
    except SglsError as exc:
        return _fail(exc.code, str(exc), _EXIT_RUNTIME)
    except OSError as exc:
        return _fail("io", str(exc), _EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command prints one JSON record with the fields ``format_version``,
``command``, ``inputs`` and ``results``. Numbers carry 12 significant digits
unless ``--full-precision`` is given, in which case they round-trip exactly.

Exit codes: 0 success, 1 verification violation, 2 usage error, 3 numerical
accuracy failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import bounds as B
from .dist import FamilySpec, build, load_joint, load_pmf
from .entropy import EntropyOrder, binary_entropy, conditional_entropy, discrete_entropy
from .errors import AccuracyError, EntBoundsError, UnsupportedVariantError
from .guessing import (
    DEFAULT_ALPHAS,
    conditional_guessing,
    guessing_moment,
    guessing_profile,
    lb_improved,
    lb_massey_original,
    lower_bound_reports,
)
from .verify import THRESHOLD_TARGETS, SweepConfig, full_sweep

FORMAT_VERSION = 1
OUTPUT_DIR_ENV = "ENTBOUNDS_OUTPUT_DIR"
FIGURES = ("fig3_moustache", "fig4_guessing")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_ACCURACY = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting ------------------------------------------------------------------

def _round(x, full):
    if full or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _clean(obj, full):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _round(obj, full)
    if isinstance(obj, dict):
        return {str(k): _clean(v, full) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, full) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item(), full)
    return str(obj)


def emit(record, full=False):
    """Serialize an output record to JSON text."""
    return json.dumps(_clean(record, full), indent=2)


def _record(argv, inputs, results):
    return {"format_version": FORMAT_VERSION, "command": list(argv), "inputs": inputs, "results": results}


def _output_path(name):
    if name is None:
        return None
    p = Path(name)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


# -- argument helpers ------------------------------------------------------------

def _parse_orders(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _parse_floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _source(args, allow_joint=True):
    given = [x for x in (args.dist, args.pmf_file, getattr(args, "joint", None)) if x is not None]
    if len(given) != 1:
        opts = "--dist, --pmf-file or --joint" if allow_joint else "--dist or --pmf-file"
        raise UsageError(f"give exactly one of {opts}")
    if args.dist is not None:
        return "dist", args.dist, build(FamilySpec.parse(args.dist))
    if args.pmf_file is not None:
        return "pmf_file", args.pmf_file, load_pmf(args.pmf_file)
    return "joint", args.joint, load_joint(args.joint)


def _error_entry(exc):
    entry = {"error": str(exc), "error_type": type(exc).__name__}
    if getattr(exc, "threshold", None) is not None:
        entry["threshold"] = exc.threshold
    return entry


# -- commands ----------------------------------------------------------------------

def cmd_entropy(args, argv):
    kind, label, src = _source(args)
    rows = []
    for text in _parse_orders(args.alpha) if args.alpha else ["shannon"]:
        try:
            order = EntropyOrder.coerce(text)
        except EntBoundsError as exc:
            rows.append({"order": text, **_error_entry(exc)})
            continue
        value = conditional_entropy(src, order) if kind == "joint" else discrete_entropy(src, order)
        rows.append({"order": str(order), "bits": value})
    return _record(argv, {kind: label}, {"conditional": kind == "joint", "entropies": rows}), EXIT_OK


def _bound_from_params(name, args, order):
    def need(attr):
        v = getattr(args, attr)
        if v is None:
            raise UsageError(f"{name} needs --{attr.replace('_', '-')}")
        return v

    if name == "massey_variance":
        return B.massey_variance(need("sigma2"), order)
    if name == "mean_bound":
        return B.mean_bound(need("mu"), order)
    if name == "support_bound":
        return B.support_bound(need("support_length"))
    if name == "improved_variance":
        return B.improved_variance(need("sigma2"), order)
    if name == "mixed_variance":
        return B.mixed_variance(None, args.mu or 0.0, need("sigma2"), order)
    if name == "mixed_mean":
        return B.mixed_mean(need("mu"), order)
    if not EntropyOrder.coerce(order).is_shannon:
        raise UnsupportedVariantError("gaussian_condition is a Shannon-entropy bound")
    return B.gaussian_condition(need("mu"), need("sigma2"))


def cmd_bounds(args, argv):
    names = list(B.CATALOG) if args.bound.strip() == "all" else [s.strip() for s in args.bound.split(",") if s.strip()]
    unknown = [n for n in names if n not in B.CATALOG]
    if unknown:
        raise UsageError(f"unknown bound(s) {', '.join(unknown)}; catalog: {', '.join(B.CATALOG)}")
    has_pmf = args.dist is not None or args.pmf_file is not None
    inputs = {}
    if has_pmf:
        kind, label, pmf = _source(args, allow_joint=False)
        inputs[kind] = label
    else:
        inputs.update({k: getattr(args, k) for k in ("sigma2", "mu", "support_length") if getattr(args, k) is not None})
    rows = []
    for text in _parse_orders(args.alpha) if args.alpha else ["shannon"]:
        for name in names:
            try:
                order = EntropyOrder.coerce(text)
                rep = B.evaluate_bound(name, pmf, order) if has_pmf else _bound_from_params(name, args, order)
            except AccuracyError:
                raise
            except EntBoundsError as exc:
                rows.append({"name": name, "order": text, **_error_entry(exc)})
                continue
            rows.append({"order": str(order), **rep.to_dict()})
    return _record(argv, inputs, {"bounds": rows}), EXIT_OK


def cmd_guess(args, argv):
    kind, label, src = _source(args)
    rhos = _parse_floats(args.rho) if args.rho else [1.0]
    alphas = _parse_floats(args.alpha) if args.alpha else list(DEFAULT_ALPHAS)
    if kind == "joint":
        G = conditional_guessing(src)
        moments = {f"{r:g}": conditional_guessing(src, r) for r in rhos}
    else:
        prof = guessing_profile(src)
        G = prof.G
        moments = {f"{r:g}": guessing_moment(prof, r) for r in rhos}
    skipped = []
    reps = lower_bound_reports(src, rhos=rhos, alphas=alphas, skipped=skipped)
    results = {
        "conditional": kind == "joint",
        "G": G,
        "moments": moments,
        "bounds": [r.to_dict() for r in reps],
        "inadmissible": skipped,
    }
    return _record(argv, {kind: label, "rho": rhos, "alpha": alphas}, results), EXIT_OK


def cmd_verify(args, argv):
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    for attr, key in (("seed", "seed"), ("random_pmfs", "random_pmfs"), ("random_joints", "random_joints")):
        if getattr(args, attr) is not None:
            data[key] = getattr(args, attr)
    cfg = SweepConfig.from_mapping(data)
    report = full_sweep(cfg, find_thresholds=args.find_thresholds)
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = "verify_report.json"
    path = _output_path(out)
    if path is not None:
        path.write_text(report.to_json() + "\n")
    print(report.summary(), file=sys.stderr)
    code = EXIT_OK
    if report.violations:
        code = EXIT_VIOLATION
    elif report.accuracy_errors:
        code = EXIT_ACCURACY
    results = {
        "ok": report.ok,
        "checks_run": report.checks_run,
        "violations": report.violations,
        "accuracy_errors": len(report.accuracy_errors),
        "inadmissible": report.inadmissible,
        "thresholds": report.thresholds,
        "max_discrepancies": report.max_discrepancies,
        "report_path": str(path) if path else None,
    }
    return _record(argv, {"config": cfg.to_dict()}, results), code


def figure_rows(name):
    """Rows of the named figure's data, header first."""
    if name == "fig3_moustache":
        rows = [("p", "H_b", "moustache", "massey")]
        for k in range(1, 200):
            p = k / 200
            rows.append((p, binary_entropy(p), B.moustache(p), B.massey_variance(p * (1 - p)).bound_bits))
        return rows
    if name == "fig4_guessing":
        rows = [("H", "massey_original", "improved")]
        for k in range(1001):
            h = k / 100
            rows.append((h, lb_massey_original(h), lb_improved(h)))
        return rows
    raise UsageError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


def cmd_figure(args, argv):
    rows = figure_rows(args.name)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0])
    for r in rows[1:]:
        w.writerow(["" if v is None else (repr(v) if args.full_precision else f"{v:.12g}") for v in r])
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = f"{args.name}.csv"
    path = _output_path(out)
    if path is None:
        return buf.getvalue(), EXIT_OK
    path.write_text(buf.getvalue())
    return _record(argv, {"name": args.name}, {"path": str(path), "rows": len(rows) - 1}), EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="entbounds", description="Entropy and guessing bounds for discrete variables.")
    p.add_argument("--full-precision", action="store_true", help="print shortest round-trip floats")
    sub = p.add_subparsers(dest="command", required=True)

    def add_source(sp, joint=True):
        sp.add_argument("--dist", help="family:key=value,... (e.g. poisson:lambda=4)")
        sp.add_argument("--pmf-file", help="file of 'value probability' lines or a JSON list of pairs")
        if joint:
            sp.add_argument("--joint", help="CSV joint pmf with header x,y1,y2,...")

    e = sub.add_parser("entropy", help="Shannon and Rényi entropies")
    add_source(e)
    e.add_argument("--alpha", help="comma-separated orders; 1 or 'shannon' for Shannon")

    b = sub.add_parser("bounds", help="evaluate entropy upper bounds")
    add_source(b, joint=False)
    b.add_argument("--bound", default="all", help=f"comma-separated names or 'all' ({', '.join(B.CATALOG)})")
    b.add_argument("--alpha", help="comma-separated orders")
    b.add_argument("--sigma2", type=float)
    b.add_argument("--mu", type=float)
    b.add_argument("--support-length", type=int)

    g = sub.add_parser("guess", help="guessing entropy, guessing moments and their lower bounds")
    add_source(g)
    g.add_argument("--rho", help="comma-separated moment exponents (default 1)")
    g.add_argument("--alpha", help="comma-separated Rényi orders for the order-dependent bounds")

    v = sub.add_parser("verify", help="run the verification sweep")
    v.add_argument("--config", help="JSON file of sweep settings")
    v.add_argument("--seed", type=int)
    v.add_argument("--random-pmfs", type=int)
    v.add_argument("--random-joints", type=int)
    v.add_argument("--find-thresholds", action="store_true", help=f"also locate {', '.join(THRESHOLD_TARGETS)}")
    v.add_argument("--output", help="path of the JSON report")

    f = sub.add_parser("figure", help="emit figure data as CSV")
    f.add_argument("name", help=", ".join(FIGURES))
    f.add_argument("--output", help="CSV path (default stdout)")
    return p


COMMANDS = {"entropy": cmd_entropy, "bounds": cmd_bounds, "guess": cmd_guess, "verify": cmd_verify, "figure": cmd_figure}


def run(argv=None):
    """Execute a command; returns ``(text, exit_code)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    full = args.full_precision
    try:
        out, code = COMMANDS[args.command](args, argv)
    except UsageError as exc:
        return f"entbounds: error: {exc}", EXIT_USAGE
    except AccuracyError as exc:
        return f"entbounds: numerical accuracy failure: {exc}", EXIT_ACCURACY
    except (EntBoundsError, OSError) as exc:
        return f"entbounds: error: {exc}", EXIT_USAGE
    return (out if isinstance(out, str) else emit(out, full)), code


def main(argv=None):
    try:
        text, code = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    stream = sys.stderr if code == EXIT_USAGE or code == EXIT_ACCURACY else sys.stdout
    print(text.rstrip("\n"), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands
-----------
report      single-cell MZ report (JSON): eta, extremal constants, cond2
scan-eta    (m, n) grid of eta values for one rule family -> CSV/JSON
scan-cond   (m, n) grid of Gramian condition numbers -> CSV/JSON
bench       approximation error comparison on a box domain -> CSV/JSON
rule-dump   construct a rule family member and write the text file
rule-check  parse a rule file and certify its exactness claim

Exit codes: 0 success, 2 report on a rule without the MZ property at the
requested degree, 64 usage error, 65 malformed rule file, 66 missing
input file, 73 output path not writable.

When --out is given, scan and bench runs also render a figure next to the
delimited file (same name, .png) unless --no-fig is passed.  All floats in
CSV output carry 17 significant digits; rerunning the same invocation
reproduces output files byte for byte, and --jobs never changes file
contents, only scheduling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .bases import orthonormal_basis
from .bench import (
    DATA_DIR_ENV,
    STATUS_OK,
    approx_bench,
    bench_setup,
    build_family_rule,
    grid_to_csv,
    grid_to_json_obj,
    records_to_csv,
    records_to_json_obj,
    scan_cond,
    scan_eta,
)
from .domains import Domain, domain_from_token
from .mz import analyze
from .rules import RuleParseError, dump_rule, load_rule, verify_ade

EXIT_OK = 0
EXIT_NO_MZ = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66
EXIT_CANT_WRITE = 73


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_range(text: str) -> list[int]:
    """Parse "a:b" (inclusive) or a single integer."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _resolve_domain(args) -> Domain:
    domain = domain_from_token(args.domain, getattr(args, "measure", None))
    family = getattr(args, "family", None)
    if family == "mpx" and args.measure is None:
        domain = domain_from_token(args.domain, "cheb")
    return domain


def _write_output(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _CantWrite(str(exc)) from exc


class _CantWrite(Exception):
    pass


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def build_parser() -> _Parser:
    p = _Parser(prog="mzquad", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, family=True, ranges=False):
        if family:
            sp.add_argument("--family", required=True, help="rule family token")
        sp.add_argument("--domain", required=True, help="interval|square|cube|disk|simplex|sphere")
        sp.add_argument("--measure", choices=["lebesgue", "cheb"], default=None)
        sp.add_argument("--data-dir", default=None,
                        help=f"directory with external rule files (default ${DATA_DIR_ENV} or built-in fixtures)")
        if ranges:
            sp.add_argument("--m", default=None, help="rule parameter range a:b or single value")
            sp.add_argument("--n", default=None, help="degree range a:b or single value")
            sp.add_argument("--jobs", type=int, default=None,
                            help="worker threads over m-columns (default: logical CPUs)")

    sp = sub.add_parser("report", help="single (rule, degree) MZ report as JSON")
    add_common(sp)
    sp.add_argument("--m", type=int, default=None, help="rule parameter (ADE; 2^m cardinality for qmc)")
    sp.add_argument("--n", type=int, required=True, help="polynomial degree")
    sp.add_argument("--rule-file", default=None, help="load the rule from a file instead of constructing it")
    sp.add_argument("--out", default=None)

    for kind in ("scan-eta", "scan-cond"):
        sp = sub.add_parser(kind, help=f"(m, n) grid of {'eta' if kind.endswith('eta') else 'cond2'} values")
        add_common(sp, ranges=True)
        sp.add_argument("--out", default=None, help="output file (stdout if omitted)")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--no-fig", action="store_true", help="skip the figure next to --out")

    sp = sub.add_parser("bench", help="hyperinterpolation vs least-squares error comparison")
    sp.add_argument("--domain", required=True, help="interval|square|cube")
    sp.add_argument("--ade", type=int, default=15, help="exactness of the relaxed rule (default 15)")
    sp.add_argument("--n-max", type=int, default=15, help="largest degree (default 15)")
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--no-fig", action="store_true")

    sp = sub.add_parser("rule-dump", help="construct a rule and write its text file")
    add_common(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("rule-check", help="parse a rule file and certify its exactness claim")
    sp.add_argument("path")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--measure", choices=["lebesgue", "cheb"], default=None)
    sp.add_argument("--ade", default="header", help="exactness claim to verify (default: file header)")
    return p


def _config_lines(pairs) -> list[str]:
    return [f"{k}={v}" for k, v in pairs]


def _cmd_report(args) -> int:
    domain = _resolve_domain(args)
    if args.rule_file is not None:
        claim = args.m if args.m is not None else "header"
        rule = load_rule(args.rule_file, domain, ade_claim=claim)
        family = args.family
    else:
        if args.m is None:
            raise UsageError("--m is required unless --rule-file is given")
        rule = build_family_rule(args.family, domain, args.m, args.data_dir)
        family = args.family
    basis = orthonormal_basis(domain, args.n)
    report = analyze(rule, basis, family=family)
    obj = {
        "config": {
            "command": "report", "family": family, "domain": str(domain),
            "m": args.m, "n": args.n, "rule_file": args.rule_file,
        },
    }
    obj.update(report.to_json_dict())
    _write_output(_json_dumps(obj), args.out)
    return EXIT_OK if report.has_mz_property else EXIT_NO_MZ


def _default_ranges(args, family):
    ms = _parse_range(args.m) if args.m else list(range(1, 21))
    if args.n:
        ns = _parse_range(args.n)
    else:
        ns = list(range(0, 21)) if family == "qmc" else list(range(0, 31))
    return ms, ns


def _scan_summary(grid) -> str:
    ok = [c for c in grid.cells if c.status == STATUS_OK]
    parts = [f"cells={len(grid.cells)}", f"ok={len(ok)}",
             f"eta<1={sum(1 for c in ok if c.eta < 1.0)}"]
    hist = {}
    for c in ok:
        hist[c.bucket] = hist.get(c.bucket, 0) + 1
    for _, _, label in bench_mod.COND_BUCKETS:
        if label in hist:
            parts.append(f"{label}={hist[label]}")
    return " ".join(parts)


def _cmd_scan(args, kind) -> int:
    domain = _resolve_domain(args)
    ms, ns = _default_ranges(args, args.family)
    jobs = args.jobs if args.jobs is not None else os.cpu_count()
    runner = scan_eta if kind == "eta" else scan_cond
    grid = runner(args.family, domain, ms, ns, data_dir=args.data_dir, jobs=jobs)
    config = [
        ("command", f"scan-{kind}"), ("family", args.family), ("domain", str(domain)),
        ("m", f"{ms[0]}:{ms[-1]}"), ("n", f"{ns[0]}:{ns[-1]}"),
        ("data_dir", args.data_dir or os.environ.get(DATA_DIR_ENV) or "builtin"),
        ("format", args.format),
    ]
    if args.format == "csv":
        text = grid_to_csv(grid, _config_lines(config))
    else:
        text = _json_dumps(grid_to_json_obj(grid, dict(config)))
    _write_output(text, args.out)
    if args.out:
        print(f"wrote {args.out}: {_scan_summary(grid)}")
        if not args.no_fig:
            from .figures import save_scan_figure

            fig_path = str(Path(args.out).with_suffix(".png"))
            save_scan_figure(grid, fig_path)
            print(f"wrote {fig_path}")
    else:
        print(_scan_summary(grid), file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    domain = domain_from_token(args.domain)
    setup = bench_setup(domain, args.ade)
    records = approx_bench(domain, args.ade, args.n_max, setup=setup)
    config = [
        ("command", "bench"), ("domain", str(domain)), ("build_ade", args.ade),
        ("n_max", args.n_max),
        ("relaxed_family", setup.relaxed_family), ("relaxed_M", setup.relaxed.size),
        ("relaxed_ade", "unknown" if setup.relaxed.ade is None else setup.relaxed.ade),
        ("classical_M", setup.classical.size), ("classical_ade", setup.classical.ade),
        ("reference_M", setup.reference.size),
        ("format", args.format),
    ]
    if args.format == "csv":
        text = records_to_csv(records, _config_lines(config))
    else:
        text = _json_dumps(records_to_json_obj(records, dict(config)))
    _write_output(text, args.out)
    if args.out:
        print(f"wrote {args.out}: {len(records)} records")
        if not args.no_fig:
            from .figures import save_bench_figure

            fig_path = str(Path(args.out).with_suffix(".png"))
            save_bench_figure(records, fig_path)
            print(f"wrote {fig_path}")
    return EXIT_OK


def _cmd_rule_dump(args) -> int:
    domain = _resolve_domain(args)
    rule = build_family_rule(args.family, domain, args.m, args.data_dir)
    try:
        dump_rule(rule, args.out)
    except OSError as exc:
        raise _CantWrite(str(exc)) from exc
    print(f"wrote {args.out}: {rule.size} nodes, ade={rule.ade}")
    return EXIT_OK


def _cmd_rule_check(args) -> int:
    domain = domain_from_token(args.domain, args.measure)
    claim = args.ade if args.ade == "header" else (None if args.ade == "unknown" else int(args.ade))
    rule = load_rule(args.path, domain, ade_claim=claim)
    obj = {
        "path": args.path,
        "domain": str(domain),
        "provenance": rule.provenance.value,
        "count": rule.size,
        "ade": rule.ade,
        "weight_sum": float(rule.weights.sum()),
        "weight_min": float(rule.weights.min()),
    }
    ok = True
    if rule.ade is not None:
        residual = verify_ade(rule, rule.ade)
        obj["ade_residual"] = residual
        ok = residual <= 1e-8
        obj["ade_certified"] = bool(ok)
    print(_json_dumps(obj), end="")
    return EXIT_OK if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "scan-eta":
            return _cmd_scan(args, "eta")
        if args.command == "scan-cond":
            return _cmd_scan(args, "cond")
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "rule-dump":
            return _cmd_rule_dump(args)
        if args.command == "rule-check":
            return _cmd_rule_check(args)
        raise AssertionError(args.command)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuleParseError as exc:
        print(f"rule file error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except bench_mod.UnsupportedCellError as exc:
        if exc.status == bench_mod.STATUS_DATASET_MISSING:
            print(f"missing input: {exc}", file=sys.stderr)
            return EXIT_NO_INPUT
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_NO_INPUT
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _CantWrite as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CANT_WRITE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

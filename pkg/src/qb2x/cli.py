"""Command line entry point: ``qb2x {run,converge,stability-demo,table}``."""
import argparse
import json
import logging
import sys

import numpy as np

from .boundary import RootFindingError
from .config import ConfigError, load_config
from .experiments import (convergence_csv, load_or_build_table, parse_n_list, run_convergence,
                          run_error_grid, stability_demo, table_path)
from .kernels import SingularEvaluationError
from .qb2x import AmbiguousSideError, InvalidClusterError
from .qbx import IllConditionedCenterError
from .specfun import DomainError
from .svg import heatmap

log = logging.getLogger("qb2x")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_run(args):
    cfg = load_config(args.config)
    grid = run_error_grid(cfg)
    _write(args.csv or cfg.csv, grid.to_csv())
    summary = grid.summary()
    spath = args.summary or cfg.summary
    if spath:
        _write(spath, json.dumps(summary, indent=2) + "\n")
    svg = args.svg or cfg.svg
    if svg:
        _write(svg, heatmap(grid.points, grid.log10_err, cfg.box, cfg.nx, cfg.ny,
                            title=f"{cfg.method} log10 error"))
    log.info("linf error %.3e at %s", summary["linf_err"], summary["argmax"])
    return EXIT_OK


def cmd_converge(args):
    cfg = load_config(args.config)
    n_list = parse_n_list(args.n)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rows = run_convergence(cfg, n_list, methods)
    _write(args.csv, convergence_csv(rows, methods))
    return EXIT_OK


def cmd_stability(args):
    rep = stability_demo(M=args.M)
    if args.json:
        out = {k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in rep.items()}
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    else:
        print(f"reference (40 digits): {rep['reference_str']}")
        print(f"naive  : {rep['naive']!r}  abs error {rep['naive_abs_err']:.3e}")
        print(f"stable : {rep['stable']!r}  rel error {rep['stable_rel_err']:.3e} (M={rep['M']})")
        print(f"separated roots, |naive - stable| = {rep['separated_diff']:.3e}")
    return EXIT_OK


def cmd_table(args):
    cfg = load_config(args.config)
    if args.cache:
        cfg = type(cfg)(**{**cfg.__dict__, "cache_dir": args.cache})
    if not cfg.cache_dir:
        raise ConfigError("table needs --cache or cache_dir in the config")
    table = load_or_build_table(cfg)
    path, _ = table_path(cfg, cfg.N)
    print(path)
    if args.dump_json:
        rows = [[[float(v.real), float(v.imag)] for v in row] for row in table]
        _write(args.dump_json, json.dumps({"P": cfg.P, "N": cfg.N, "table": rows}) + "\n")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="qb2x", description="QB2X layer-potential experiments")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="error grid against the oracle")
    r.add_argument("--config", required=True)
    r.add_argument("--csv", help="CSV output path (default stdout)")
    r.add_argument("--summary", help="summary JSON path")
    r.add_argument("--svg", help="SVG heatmap path")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("converge", help="L-infinity error versus N")
    c.add_argument("--config", required=True)
    c.add_argument("--n", default="4:4:36", help="start:step:stop or comma list")
    c.add_argument("--methods", default="qb2x,qbx")
    c.add_argument("--csv")
    c.set_defaults(func=cmd_converge)

    s = sub.add_parser("stability-demo", help="clustered-root residue example")
    s.add_argument("--M", type=int, default=3)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stability)

    t = sub.add_parser("table", help="precompute and cache the tail table")
    t.add_argument("--config", required=True)
    t.add_argument("--cache")
    t.add_argument("--dump-json", help="also write the table as JSON")
    t.set_defaults(func=cmd_table)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (RootFindingError, AmbiguousSideError, InvalidClusterError, IllConditionedCenterError,
            SingularEvaluationError, DomainError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

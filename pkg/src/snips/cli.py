"""Command-line entry point: ``snips run|trial|constants|plotdata``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from . import harness, quantfront
from .harness import format_value


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="flat key = value parameter file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")


def _config(args) -> harness.ExperimentConfig:
    extra = list(args.overrides)
    for key in ("seed", "trials", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            extra.append(f"{key}={value}")
    if getattr(args, "out", None):
        extra.append(f"out={args.out}")
    return harness.load_config(args.config, extra)


def cmd_run(args) -> int:
    cfg = _config(args)
    out = cfg.out or "results.csv"
    result = harness.run_experiment(cfg)
    harness.emit_csv(result, out)
    print(f"wrote {len(result.cells)} cells to {out}")
    for i, k in result.failures:
        print(f"failed: cell {i} trial {k}", file=sys.stderr)
    return 1 if result.failures else 0


def cmd_trial(args) -> int:
    cfg = _config(args)
    if any(len(v) > 1 for v in cfg.sweep.values()):
        print("trial takes a single operating point, not a sweep", file=sys.stderr)
        return 2
    params = cfg.base
    res = harness.run_trial(params, args.index)
    print(f"params: {params}")
    print(f"trial: {args.index}")
    print(f"ber: {format_value(res.ber)} ({res.bit_errors}/{res.bit_count})")
    print("rmsse: " + " ".join(format_value(x) for x in res.rmsse))
    print("served: " + "".join("1" if s else "0" for s in res.served)
          + f"  ({int(np.count_nonzero(res.served))}/{res.served.size})")
    return 0


def cmd_constants(args) -> int:
    print("q,delta,gamma,D,mse")
    for q in [*range(1, args.qmax + 1), float("inf")]:
        s = quantfront.quantizer_spec(q)
        print(",".join(format_value(v) for v in (s.q, s.delta, s.gamma, s.dist_power, s.mse())))
    return 0


def cmd_plotdata(args) -> int:
    rows = harness.read_csv(args.csv)
    curves = defaultdict(list)
    for r in rows:
        curves[(r["rho_db"], r["S"], r["q"])].append(r)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    cols = ("snr_db", "ber_mean", "served_fraction", "rmsse_p50", "rmsse_p90", "trials")
    for (rho, S, q), pts in sorted(curves.items(), key=lambda kv: tuple(map(float, kv[0]))):
        name = f"rho{format_value(rho)}_S{format_value(S)}_q{format_value(q)}.csv"
        with (outdir / name).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in sorted(pts, key=lambda r: r["snr_db"]):
                w.writerow([format_value(r[c]) for c in cols])
        print(outdir / name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snips", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a full sweep and write the results CSV")
    _common(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("trial", help="run one trial and print its result")
    _common(p)
    p.add_argument("--index", type=int, default=0, help="trial index")
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("constants", help="print step size and Bussgang constants per q")
    p.add_argument("--qmax", type=int, default=8)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("plotdata", help="split a results CSV into per-curve series files")
    p.add_argument("csv")
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

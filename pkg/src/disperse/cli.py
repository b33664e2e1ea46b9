"""Command line front end for simulation, estimation and verification."""

import argparse
import csv
import json
import sys
from dataclasses import asdict

from . import bounds as bounds_lib
from . import harness, idla
from .blocks import enumerate_blocks
from .graphs import parse_spec

PROCESS_NAMES = {"seq": "sequential", "par": "parallel", "unif": "uniform",
                 "sequential": "sequential", "parallel": "parallel",
                 "uniform": "uniform"}


def _add_graph(p):
    p.add_argument("--graph", required=True,
                   help="family spec like cycle:64 or gnp:n=128,p=0.05")


def _add_run_flags(p):
    p.add_argument("--origin", type=int, default=0)
    p.add_argument("--process", default="seq", choices=sorted(PROCESS_NAMES),
                   help="seq, par or unif")
    p.add_argument("--lazy", action="store_true")
    p.add_argument("--continuous", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def _write_csv(fh, rows):
    # None renders as an empty cell, not the string "None"
    cleaned = [{k: ("" if v is None else v) for k, v in r.items()}
               for r in rows]
    writer = csv.DictWriter(fh, fieldnames=list(cleaned[0].keys()))
    writer.writeheader()
    writer.writerows(cleaned)


def _emit(rows, fmt, out=None):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        if fmt == "json":
            json.dump(rows if len(rows) != 1 else rows[0], fh, indent=2)
            fh.write("\n")
        else:
            _write_csv(fh, rows)
    finally:
        if out:
            fh.close()


def cmd_simulate(args):
    g = parse_spec(args.graph)
    out = idla.run(g, args.origin, args.seed,
                   process=PROCESS_NAMES[args.process], lazy=args.lazy,
                   continuous=args.continuous)
    print(json.dumps(asdict(out.result), indent=2))
    if args.emit_block:
        with open(args.emit_block, "w") as fh:
            json.dump(out.block.to_json_dict(timing=out.timing), fh)
            fh.write("\n")
    return 0


def cmd_estimate(args):
    g = parse_spec(args.graph)
    quantiles = tuple(float(q) for q in args.quantiles.split(","))
    est = harness.estimate_dispersion(
        g, origin=args.origin, process=PROCESS_NAMES[args.process],
        lazy=args.lazy, continuous=args.continuous, trials=args.trials,
        seed=args.seed, quantiles=quantiles, engine=args.engine,
        workers=args.workers)
    row = harness.estimate_row(g.name, args.origin,
                               PROCESS_NAMES[args.process], args.lazy,
                               args.seed, est, n=g.n)
    _emit([row], args.format)
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            fh.write("# dispersion_time ecdf\n")
            m = len(est.values)
            for i, v in enumerate(est.values):
                fh.write(f"{v} {(i + 1) / m}\n")
    return 0


def cmd_bounds(args):
    g = parse_spec(args.graph)
    rep = bounds_lib.compute_bounds(g, mode=args.mode)
    _emit([rep.to_dict()], args.format)
    return 0


def cmd_verify(args):
    g = parse_spec(args.graph)
    if args.what == "dominance":
        rep = harness.dominance_experiment(g, origin=args.origin,
                                           trials=args.trials,
                                           seed=args.seed, slack=args.slack)
    elif args.what == "bijection":
        rep = harness.bijection_experiment(g, origin=args.origin,
                                           m_max=args.m_max)
    else:
        checks = {"lazy_seq_over_seq": (2.0, args.lazy_tol),
                  "ctu_over_par": (1.0, args.ctu_tol)}
        rep = harness.ratio_experiment(g, origin=args.origin,
                                       trials=args.trials, seed=args.seed,
                                       checks=checks)
    for name, ok in rep.verdicts.items():
        print(f"{'PASS' if ok else 'FAIL'} {rep.name}.{name}")
    print(json.dumps(rep.outputs, default=str, indent=2))
    return 0 if rep.ok else 1


def cmd_table(args):
    families = args.families.split(",")
    sizes = [int(s) for s in args.sizes.split(",")]
    processes = tuple(PROCESS_NAMES[p] for p in args.processes.split(","))
    rows = harness.table_reproduce(families, sizes, trials=args.trials,
                                   seed=args.seed, processes=processes,
                                   workers=args.workers)
    _emit(rows, "csv", out=args.out)
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            groups = {}
            for r in rows:
                groups.setdefault((r["family"], r["process"]), []).append(r)
            for (fam, proc), rs in groups.items():
                fh.write(f"# {fam} {proc}: n mean\n")
                for r in sorted(rs, key=lambda r: r["n"]):
                    fh.write(f"{r['n']} {r['mean']}\n")
                fh.write("\n")
    return 0


def cmd_enumerate(args):
    g = parse_spec(args.graph)
    kind = {"seq": "sequential", "par": "parallel"}[args.kind]
    count = 0
    for block in enumerate_blocks(g, args.origin, args.m, kind):
        count += 1
        if args.dump:
            print(json.dumps(block.to_json_dict()))
    if not args.dump:
        print(count)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="disperse",
        description="Simulate dispersion processes on finite graphs and "
                    "check their dispersion-time bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="single run, optionally saving the "
                                        "trajectory block as JSON")
    _add_graph(p)
    _add_run_flags(p)
    p.add_argument("--emit-block", metavar="FILE")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="Monte Carlo dispersion estimate")
    _add_graph(p)
    _add_run_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--quantiles", default="0.5,0.9,0.99")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--engine", default="fast",
                   choices=["fast", "reference"])
    p.add_argument("--workers", type=int)
    p.add_argument("--plot-data", metavar="FILE",
                   help="write sorted per-trial values with ECDF levels")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bounds", help="exact bound computations")
    _add_graph(p)
    p.add_argument("--mode", default="exact", choices=["exact", "spectral"])
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run a checking experiment; exit 1 "
                                      "on any failed verdict")
    p.add_argument("what", choices=["dominance", "bijection", "ratios"])
    _add_graph(p)
    p.add_argument("--origin", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--slack", type=float, default=3.0)
    p.add_argument("--lazy-tol", type=float, default=0.10)
    p.add_argument("--ctu-tol", type=float, default=0.10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="empirical vs exact statistics table")
    p.add_argument("--families", required=True,
                   help="comma list, entries may carry params: gnp:p=0.1")
    p.add_argument("--sizes", required=True, help="comma list of n values")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--processes", default="seq,par")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--plot-data", metavar="FILE",
                   help="write n-vs-mean blocks per family and process")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("enumerate", help="count (or dump) all valid blocks "
                                         "of one total length")
    _add_graph(p)
    p.add_argument("--origin", type=int, default=0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", default="seq", choices=["seq", "par"])
    p.add_argument("--dump", action="store_true",
                   help="print one block per line as JSON")
    p.set_defaults(func=cmd_enumerate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Proven dispersion bounds next to Monte Carlo estimates.

The lower bounds and the refined upper bounds bracket the lazy process
means; the basic bound caps the parallel tail.  The gap between a mean
and its refined ceiling shows how much the union-bound constants cost.
"""

import argparse

from disperse import bounds, graphs, harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    fams = [graphs.cycle(8), graphs.complete(8), graphs.hypercube(8),
            graphs.binary_tree(7)]
    print(f"{'graph':12s} {'lower':>6s} {'seq_mean':>9s} {'par_mean':>9s} "
          f"{'ref_seq':>8s} {'ref_par':>8s} {'basic':>7s}")
    for g in fams:
        rep = bounds.compute_bounds(g)
        seq = harness.estimate_dispersion(g, lazy=True, trials=args.trials,
                                          seed=args.seed)
        par = harness.estimate_dispersion(g, process="parallel", lazy=True,
                                          trials=args.trials,
                                          seed=args.seed + 1)
        low = max(rep.lower_degree, rep.lower_mixing,
                  rep.lower_tree or 0.0)
        print(f"{g.name:12s} {low:6.0f} {seq.mean:9.1f} {par.mean:9.1f} "
              f"{rep.refined_sequential:8.0f} {rep.refined_parallel:8.0f} "
              f"{rep.basic_upper:7.0f}")

    print("\nclosed forms on the clique, exact vs sampled:")
    for n in (64, 256):
        g = graphs.complete(n)
        est = harness.estimate_dispersion(g, trials=args.trials,
                                          seed=args.seed)
        ctu = harness.estimate_dispersion(g, process="uniform",
                                          continuous=True,
                                          trials=args.trials,
                                          seed=args.seed + 1)
        print(f"  n={n:4d} sequential {est.mean:8.2f} "
              f"(oracle {bounds.clique_sequential_expectation(n):8.2f})  "
              f"continuous-uniform {ctu.mean:8.2f} "
              f"(oracle {bounds.clique_ctu_expectation(n):8.2f})")


if __name__ == "__main__":
    main()

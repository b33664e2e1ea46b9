"""Dispersion growth orders across graph families.

Normalizing the mean dispersion time by each family's growth function
should give a roughly flat column as n doubles: n^2 ln n on cycles,
n ln^2 n on binary trees, n on cliques, hypercubes and random regular
graphs.  The spread factor per family quantifies the flatness.
"""

import argparse

from disperse import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=41)
    args = ap.parse_args()

    configs = [
        ("cycle", [32, 64, 128], ("sequential",)),
        ("hypercube", [64, 128, 256], ("parallel",)),
        ("binary_tree", [63, 127, 255], ("sequential",)),
        ("complete", [128, 256, 512], ("sequential",)),
        ("random_regular:d=4", [64, 128, 256], ("sequential",)),
    ]
    rows = []
    for fam, sizes, procs in configs:
        rows += harness.table_reproduce([fam], sizes, trials=args.trials,
                                        seed=args.seed, processes=procs)

    print(f"{'family':16s} {'process':10s} {'n':>5s} {'mean':>10s} "
          f"{'growth':>9s} {'normalized':>11s}")
    for r in rows:
        print(f"{r['family']:16s} {r['process']:10s} {r['n']:5d} "
              f"{r['mean']:10.1f} {r['growth']:>9s} {r['normalized']:11.4f}")

    print("\nspread factor (max/min of the normalized column):")
    for (fam, proc), f in sorted(harness.growth_ratios(rows).items()):
        print(f"  {fam:16s} {proc:10s} {f:.3f}")


if __name__ == "__main__":
    main()

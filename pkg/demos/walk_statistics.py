"""Exact random-walk statistics across graph families.

Tabulates the quantities the dispersion bounds are built from: worst
pair hitting time, lazy mixing time and spectral gap, conductance, and
the worst stationary hitting time of small vertex sets.  Also checks the
electrical identity commute(u, v) = 2 |E| R_eff(u, v) numerically.
"""

from disperse import graphs, walkstats


def main():
    fams = [graphs.cycle(12), graphs.complete(12), graphs.hypercube(16),
            graphs.star(12), graphs.binary_tree(15)]
    print(f"{'graph':12s} {'n':>3s} {'t_hit':>8s} {'t_mix':>6s} "
          f"{'gap':>7s} {'phi':>7s} {'set2_hit':>9s}")
    for g in fams:
        t_hit = walkstats.max_hitting_time(g)
        t_mix = walkstats.mixing_time(g, lazy=True)
        _, gap = walkstats.spectral_gap(g, lazy=True)
        phi, cut = walkstats.conductance(g)
        s2, _ = walkstats.max_set_hitting(g, 2, lazy=True, subset_cap=16)
        print(f"{g.name:12s} {g.n:3d} {t_hit:8.1f} {t_mix:6d} "
              f"{gap:7.4f} {phi:7.4f} {s2:9.1f}")

    g = graphs.binary_tree(15)
    phi, cut = walkstats.conductance(g)
    print(f"\nworst conductance cut of {g.name} n={g.n}: {sorted(cut)}")

    print("\ncommute identity, worst deviation over all pairs:")
    for g in fams:
        worst = 0.0
        for u in range(g.n):
            for v in range(u + 1, g.n):
                lhs = walkstats.commute_time(g, u, v)
                rhs = 2.0 * g.edge_weight * \
                    walkstats.effective_resistance(g, u, v)
                worst = max(worst, abs(lhs - rhs))
        print(f"  {g.name:12s} {worst:.2e}")


if __name__ == "__main__":
    main()

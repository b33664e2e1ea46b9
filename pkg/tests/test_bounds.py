import math
from fractions import Fraction

import pytest

from disperse import _fast, bounds, graphs, rng
from disperse.errors import CapabilityError, DomainError


# --- basic upper bound ---------------------------------------------------


def test_basic_upper_path2():
    assert bounds.basic_upper(graphs.path(2)) == 6.0


def test_basic_upper_cycle4():
    # worst-pair hitting time on C_4 is 4, log2(4) = 2
    assert bounds.basic_upper(graphs.cycle(4)) == pytest.approx(48.0)


def test_basic_upper_complete5():
    want = 6.0 * 4.0 * math.log2(5)
    assert bounds.basic_upper(graphs.complete(5)) == pytest.approx(want)
    assert bounds.basic_upper(graphs.complete(5)) == pytest.approx(
        55.726274277, abs=1e-6)


def test_basic_upper_singleton():
    assert bounds.basic_upper(graphs.complete(1)) == 0.0


# --- lower bounds --------------------------------------------------------


def test_degree_lower_cycle10():
    lb = bounds.lower_bounds(graphs.cycle(10))
    assert lb.degree == 10.0
    assert lb.tree is None


def test_degree_lower_star5():
    lb = bounds.lower_bounds(graphs.star(5))
    assert lb.degree == 2.0


def test_tree_lower_star5():
    assert bounds.lower_bounds(graphs.star(5)).tree == 7.0


def test_tree_lower_binary7():
    lb = bounds.lower_bounds(graphs.binary_tree(7))
    assert lb.tree == 11.0
    assert lb.degree == 4.0
    assert lb.mixing == 9.0


# --- set-hitting estimate ------------------------------------------------

RETRY = 5.0 / (1.0 - math.exp(-1.0))


def test_set_hitting_estimate_small_case():
    # n=8, lam2=1/2, s=2: retry * 8 * (1 + ceil(ln 2)) / (0.5 * 2)
    got = bounds.set_hitting_estimate(8, 0.5, 2)
    assert got == pytest.approx(16.0 * RETRY)
    assert got == pytest.approx(126.558137, abs=1e-5)


def test_set_hitting_estimate_trivial():
    # s=1, lam2=0: the bare retry factor
    assert bounds.set_hitting_estimate(1, 0.0, 1) == pytest.approx(RETRY)
    assert RETRY == pytest.approx(7.9098835, abs=1e-6)


def test_set_hitting_estimate_halves_with_s():
    # doubling s at fixed ceil(log s) halves the estimate exactly
    a = bounds.set_hitting_estimate(100, 0.5, 3)
    b = bounds.set_hitting_estimate(100, 0.5, 6)
    assert b == pytest.approx(a / 2.0)


def test_set_hitting_estimate_log_base_2():
    # base-2 logs only coarsen the ceiling, never shrink it
    e_base = bounds.set_hitting_estimate(64, 0.5, 5)
    two_base = bounds.set_hitting_estimate(64, 0.5, 5, log_base="2")
    assert two_base >= e_base


def test_set_hitting_estimate_poly_form():
    got = bounds.set_hitting_estimate(16, None, 4, poly=(1.0, 1.0))
    assert got == pytest.approx(RETRY * 3.0 * 16.0 / 2.0)


@pytest.mark.parametrize("kw", [
    dict(n=0, lam2=0.5, s=1),
    dict(n=4, lam2=0.5, s=0),
    dict(n=4, lam2=0.5, s=5),
    dict(n=4, lam2=1.0, s=2),
    dict(n=4, lam2=None, s=2),
    dict(n=4, lam2=0.5, s=2, log_base="10"),
    dict(n=4, lam2=0.5, s=2, poly=(0.0, 1.0)),
    dict(n=4, lam2=0.5, s=2, poly=(1.0, -1.0)),
])
def test_set_hitting_estimate_rejects(kw):
    with pytest.raises(DomainError):
        bounds.set_hitting_estimate(**kw)


# --- refined upper bounds ------------------------------------------------


def test_refined_cycle8_exact_values():
    c8 = graphs.cycle(8)
    assert bounds.refined_parallel_upper(c8) == pytest.approx(4440.0)
    assert bounds.refined_sequential_upper(c8) == pytest.approx(1800.0)


def test_refined_complete4_exact_values():
    k4 = graphs.complete(4)
    assert bounds.refined_parallel_upper(k4) == pytest.approx(780.0)
    assert bounds.refined_sequential_upper(k4) == pytest.approx(390.0)


@pytest.mark.parametrize("g", [
    graphs.cycle(8), graphs.complete(4), graphs.hypercube(8),
    graphs.path(6), graphs.star(7),
])
def test_refined_sequential_never_exceeds_parallel(g):
    par = bounds.refined_parallel_upper(g)
    seq = bounds.refined_sequential_upper(g)
    assert seq <= par + 1e-9


def test_spectral_mode_is_looser_than_exact():
    c8 = graphs.cycle(8)
    assert (bounds.refined_parallel_upper(c8, mode="spectral")
            >= bounds.refined_parallel_upper(c8))


def test_spectral_mode_rejects_very_irregular():
    with pytest.raises(CapabilityError):
        bounds.refined_parallel_upper(graphs.star(5), mode="spectral",
                                      almost_regular=True)


def test_exact_mode_capped_by_subset_cap():
    with pytest.raises(CapabilityError):
        bounds.refined_parallel_upper(graphs.cycle(16))
    # raising the cap unlocks the computation
    v = bounds.refined_parallel_upper(graphs.cycle(16), subset_cap=16)
    assert v > 0


def test_refined_unknown_mode():
    with pytest.raises(DomainError):
        bounds.refined_parallel_upper(graphs.cycle(4), mode="best")


def test_refined_singleton_is_zero():
    g = graphs.complete(1)
    assert bounds.refined_parallel_upper(g) == 0.0
    assert bounds.refined_sequential_upper(g) == 0.0


def test_refined_dominate_monte_carlo_means():
    # the bounds target the lazy processes; their Monte Carlo means must
    # sit far below the proven ceilings
    k4 = graphs.complete(4)
    c8 = graphs.cycle(8)
    par = [_fast.run(k4, 0, rng.child(80, t), process="parallel",
                     lazy=True).dispersion_time for t in range(300)]
    seq = [_fast.run(c8, 0, rng.child(81, t),
                     lazy=True).dispersion_time for t in range(300)]
    assert sum(par) / len(par) <= bounds.refined_parallel_upper(k4)
    assert sum(seq) / len(seq) <= bounds.refined_sequential_upper(c8)


# --- complete-graph oracles ----------------------------------------------


def test_clique_sequential_small():
    assert bounds.clique_sequential_expectation(1) == 1.0
    # n=2: one particle, geometric with success 1/2
    assert bounds.clique_sequential_expectation(2) == pytest.approx(
        2.0, abs=1e-6)


def test_clique_sequential_large_frozen():
    got = bounds.clique_sequential_expectation(1000)
    assert got == pytest.approx(1254.6234550674, abs=1e-3)


def test_clique_sequential_rejects():
    with pytest.raises(DomainError):
        bounds.clique_sequential_expectation(0)


def test_clique_ctu_small():
    assert bounds.clique_ctu_expectation(1) == 0.0
    assert bounds.clique_ctu_expectation(2) == pytest.approx(1.0)
    # n=3: 2 * (1 + 1/4)
    assert bounds.clique_ctu_expectation(3) == pytest.approx(2.5)


def test_clique_ctu_large_near_basel():
    got = bounds.clique_ctu_expectation(1000) / 1000.0
    assert got == pytest.approx(math.pi ** 2 / 6.0, abs=0.01)
    assert got == pytest.approx(1.6422896331, abs=1e-6)


def test_clique_ctu_rejects():
    with pytest.raises(DomainError):
        bounds.clique_ctu_expectation(-1)


# --- series partials -----------------------------------------------------


def test_series_partial_one_term():
    sp = bounds.dispersion_constant_partial(1)
    assert sp.partial == Fraction(1, 2)
    assert sp.tail_bound == pytest.approx(0.25)


def test_series_partial_two_terms():
    sp = bounds.dispersion_constant_partial(2)
    assert sp.partial == Fraction(39, 70)


def test_series_partial_converges_monotone():
    vals = [bounds.dispersion_constant_partial(t).value
            for t in (1, 2, 4, 8, 64)]
    assert vals == sorted(vals)
    last = bounds.dispersion_constant_partial(64)
    assert last.value + last.tail_bound < 0.6


def test_series_partial_rejects():
    with pytest.raises(DomainError):
        bounds.dispersion_constant_partial(0)


# --- bundled report ------------------------------------------------------


def test_compute_bounds_cycle8_exact():
    rep = bounds.compute_bounds(graphs.cycle(8))
    assert rep.n == 8
    assert rep.refined_parallel == pytest.approx(4440.0)
    assert rep.refined_sequential == pytest.approx(1800.0)
    assert rep.lower_degree == 8.0
    assert rep.lower_tree is None
    assert rep.notes == []


def test_compute_bounds_skips_large_exact():
    rep = bounds.compute_bounds(graphs.cycle(16))
    assert rep.refined_parallel is None
    assert rep.refined_sequential is None
    assert rep.notes and "capped" in rep.notes[0]
    # the basic bound still comes through
    assert rep.basic_upper > 0


def test_compute_bounds_spectral_irregular_note():
    rep = bounds.compute_bounds(graphs.star(5), mode="spectral")
    assert rep.refined_parallel is None
    assert rep.notes


def test_compute_bounds_to_dict_keys():
    rep = bounds.compute_bounds(graphs.complete(4))
    d = rep.to_dict()
    assert list(d) == [
        "family", "n", "t_hit_max", "t_mix_lazy", "lambda2_lazy",
        "basic_upper", "refined_parallel", "refined_sequential",
        "lower_degree", "lower_mixing", "lower_tree", "mode"]
    assert d["family"] == rep.family
    assert "notes" not in d

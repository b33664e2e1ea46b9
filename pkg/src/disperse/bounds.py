"""Dispersion-time bounds and closed-form oracles.

The upper bounds come in two strengths: a basic one from the worst-pair
hitting time, and refined ones built from the lazy walk's mixing time
plus worst set-hitting times over dyadic set sizes.  Refined bounds run
in exact mode (exhaustive subset maximization, small graphs) or spectral
mode (relaxation-based set-hitting estimate, regular graphs).  Lower
bounds and the complete-graph oracles are closed forms.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import walkstats
from .errors import CapabilityError, DomainError

# 5 / (1 - 1/e), the retry factor in the set-hitting estimate
_RETRY = 5.0 / (1.0 - math.exp(-1.0))


def basic_upper(graph):
    """``6 t_hit log2(n)`` with the worst-pair hitting time of the walk.

    The parallel dispersion time exceeds this with probability at most
    ``1/n**2``, and the sequential and uniform times are stochastically
    dominated by the parallel one.
    """
    n = graph.n
    if n == 1:
        return 0.0
    return 6.0 * walkstats.max_hitting_time(graph) * math.log2(n)


def _dyadic_sizes(n):
    return [max(1, math.ceil(2 ** (j - 2))) for j in
            range(1, max(1, math.ceil(math.log2(n))) + 1)]


def _set_hitting_terms(graph, mode, eps, subset_cap, almost_regular):
    """Per-scale ``t_mix + worst set hitting`` terms of the lazy walk."""
    n = graph.n
    tmix = walkstats.mixing_time(graph, eps=eps, lazy=True)
    sizes = _dyadic_sizes(n)
    if mode == "exact":
        terms = [tmix + walkstats.max_set_hitting(
            graph, s, lazy=True, subset_cap=subset_cap)[0] for s in sizes]
    elif mode == "spectral":
        slack = 1.0
        if not graph.is_regular():
            ratio = graph.max_degree / graph.min_degree
            if not (almost_regular and ratio <= 2.0):
                raise CapabilityError(
                    "spectral mode needs a regular graph (or "
                    "almost_regular=True with degree ratio at most 2)")
            slack = ratio
        lam2, _ = walkstats.spectral_gap(graph, lazy=True)
        terms = [tmix + slack * set_hitting_estimate(n, lam2, s)
                 for s in sizes]
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return terms


def refined_parallel_upper(graph, mode="exact", eps=0.25, subset_cap=14,
                           almost_regular=False):
    """``60 * sum_j (t_mix + max_{|S| >= 2**(j-2)} t_hit(pi, S))``.

    Scales ``j`` run to ``ceil(log2 n)``; the worst case over sets of at
    least a given size is attained at exactly that size because hitting
    times shrink as targets grow.
    """
    if graph.n == 1:
        return 0.0
    return 60.0 * sum(_set_hitting_terms(graph, mode, eps, subset_cap,
                                         almost_regular))


def refined_sequential_upper(graph, mode="exact", eps=0.25, subset_cap=14,
                             almost_regular=False):
    """``30 * max_j j * (t_mix + max_{|S| >= 2**(j-2)} t_hit(pi, S))``.

    Never exceeds :func:`refined_parallel_upper` in matched mode, since
    the terms decrease in ``j``.
    """
    if graph.n == 1:
        return 0.0
    terms = _set_hitting_terms(graph, mode, eps, subset_cap, almost_regular)
    return 30.0 * max((j + 1) * t for j, t in enumerate(terms))


def set_hitting_estimate(n, lam2, s, log_base="e", poly=None):
    """Upper estimate on the worst stationary hitting time of an
    ``s``-set, for the lazy walk on a regular graph.

    The spectral form is ``5/(1-1/e) * n (1 + ceil(log s)) /
    ((1 - lam2) s)``; with ``poly=(C, eps)`` the relaxation-free
    polynomial form ``5/(1-1/e) * (C+2) n / s**(eps/(1+eps))`` is used
    instead and ``lam2`` is ignored.
    """
    if n < 1 or not 1 <= s <= max(n, 1):
        raise DomainError("need 1 <= s <= n")
    if poly is not None:
        C, eps = poly
        if C <= 0 or eps <= 0:
            raise DomainError("poly constants must be positive")
        return _RETRY * (C + 2.0) * n / s ** (eps / (1.0 + eps))
    if lam2 is None or not 0.0 <= lam2 < 1.0:
        raise DomainError("lam2 must lie in [0, 1)")
    if log_base == "e":
        log_s = math.log(s)
    elif log_base == "2":
        log_s = math.log2(s)
    else:
        raise DomainError("log_base is 'e' or '2'")
    return _RETRY * n * (1.0 + math.ceil(log_s)) / ((1.0 - lam2) * s)


@dataclass
class LowerBounds:
    degree: float
    mixing: float
    tree: float | None


def lower_bounds(graph, eps=0.25):
    """Proven lower bounds on the expected sequential dispersion time.

    ``degree`` is ``2|E|/max_deg`` from the commute identity, ``mixing``
    is the lazy mixing time, and ``tree`` is ``2n - 3`` on trees (the
    round trip to the farthest leaf), absent otherwise.
    """
    n = graph.n
    degree = 2.0 * graph.edge_weight / graph.max_degree
    mixing = float(walkstats.mixing_time(graph, eps=eps, lazy=True))
    tree = float(2 * n - 3) if graph.is_tree() and n >= 2 else None
    return LowerBounds(degree=degree, mixing=mixing, tree=tree)


# --- complete-graph oracles ----------------------------------------------


def clique_sequential_expectation(n, cutoff=1e-9):
    """Expected sequential dispersion time on the complete graph.

    The slowest particle is a maximum of independent geometrics whose
    success rates are ``i/n``; the tail sum is truncated once a term
    drops under ``cutoff``, good to about ``n * cutoff`` absolutely.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    if n == 1:
        return 1.0
    q = np.arange(1, n) / n
    x = q.copy()
    total = 1.0
    while True:
        tail = -np.expm1(np.log1p(-x).sum())
        total += tail
        if tail < cutoff:
            return float(total)
        x *= q


def clique_ctu_expectation(n):
    """Expected continuous uniform dispersion time on the complete graph.

    Stage with ``k`` unsettled particles lasts an exponential of mean
    ``(n - 1) / k**2``, so the total is ``(n-1) sum_{k<n} k**-2``, about
    ``(pi**2 / 6) n`` for large ``n``.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    if n == 1:
        return 0.0
    k = np.arange(1, n, dtype=float)
    return float((n - 1) * np.sum(1.0 / (k * k)))


@dataclass
class SeriesPartial:
    terms: int
    partial: Fraction
    value: float
    tail_bound: float


def dispersion_constant_partial(terms):
    """Partial sums of the printed series for the complete-graph
    dispersion constant.

    Term ``i`` is ``2/(i(3i-1)) - 2/(i(3i+1))``, summed exactly in
    rational arithmetic.  The tail after ``T`` terms is bounded by
    ``1/(4 T**2)`` since term ``i`` equals ``4/(i(9i**2-1)) <=
    1/(2 i**3)``.  The series converges to about 0.585, which does not
    match the constant quoted alongside it; the acceptance checks
    therefore pin the complete-graph oracle, not this series.
    """
    if terms < 1:
        raise DomainError("terms >= 1 required")
    partial = Fraction(0)
    for i in range(1, terms + 1):
        partial += Fraction(2, i * (3 * i - 1)) - Fraction(2, i * (3 * i + 1))
    return SeriesPartial(terms=terms, partial=partial, value=float(partial),
                         tail_bound=1.0 / (4.0 * terms * terms))


# --- report for the CLI --------------------------------------------------


@dataclass
class BoundsReport:
    family: str
    n: int
    t_hit_max: float
    t_mix_lazy: float
    lambda2_lazy: float
    basic_upper: float
    refined_parallel: float | None
    refined_sequential: float | None
    lower_degree: float
    lower_mixing: float
    lower_tree: float | None
    mode: str
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {k: getattr(self, k) for k in (
            "family", "n", "t_hit_max", "t_mix_lazy", "lambda2_lazy",
            "basic_upper", "refined_parallel", "refined_sequential",
            "lower_degree", "lower_mixing", "lower_tree", "mode")}


def compute_bounds(graph, mode="exact", eps=0.25, subset_cap=14,
                   almost_regular=True):
    """Bundle every bound the graph's size and structure allows.

    Refined bounds are skipped, with a note, when the graph is too large
    for exhaustive subset maximization in exact mode or irregular beyond
    the documented slack in spectral mode.
    """
    notes = []
    lam2, _ = walkstats.spectral_gap(graph, lazy=True)
    lows = lower_bounds(graph, eps=eps)
    try:
        ref_par = refined_parallel_upper(graph, mode=mode, eps=eps,
                                         subset_cap=subset_cap,
                                         almost_regular=almost_regular)
        ref_seq = refined_sequential_upper(graph, mode=mode, eps=eps,
                                           subset_cap=subset_cap,
                                           almost_regular=almost_regular)
    except CapabilityError as exc:
        ref_par = ref_seq = None
        notes.append(str(exc))
    return BoundsReport(
        family=graph.name, n=graph.n,
        t_hit_max=walkstats.max_hitting_time(graph),
        t_mix_lazy=float(walkstats.mixing_time(graph, eps=eps, lazy=True)),
        lambda2_lazy=lam2, basic_upper=basic_upper(graph),
        refined_parallel=ref_par, refined_sequential=ref_seq,
        lower_degree=lows.degree, lower_mixing=lows.mixing,
        lower_tree=lows.tree, mode=mode, notes=notes)

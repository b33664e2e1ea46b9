"""Seeded Monte Carlo experiments over the dispersion simulators.

Everything here is deterministic in (inputs, master seed): trial ``j``
runs under ``rng.child(seed, j)``, sub-experiments derive disjoint child
seeds, and aggregation is order-insensitive, so reports regenerate
bit-identically no matter how many worker threads execute the trials.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _fast, idla, rng, walkstats
from .blocks import block_stats, check, enumerate_blocks, pts, stp
from .errors import DomainError
from .graphs import parse_spec


@dataclass
class Estimate:
    """Summary statistics of one dispersion estimator."""

    mean: float
    stderr: float
    quantiles: dict
    min: float
    max: float
    trials: int
    master_seed: object
    values: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass
class ExperimentReport:
    """Outcome of a verification experiment.

    ``runtime`` is informational and excluded from reproducibility
    comparisons; all other fields regenerate identically from the same
    inputs and seed.
    """

    name: str
    inputs: dict
    outputs: dict
    verdicts: dict
    runtime: float = field(compare=False)

    @property
    def ok(self):
        return all(self.verdicts.values())


def _summarize(values, quantiles, trials, seed, keep_values):
    arr = np.asarray(sorted(values), dtype=float)
    if len(arr) > 1:
        stderr = float(arr.std(ddof=1) / math.sqrt(len(arr)))
    else:
        stderr = 0.0
    qs = {float(q): float(np.quantile(arr, q)) for q in quantiles}
    return Estimate(
        mean=float(arr.mean()),
        stderr=stderr,
        quantiles=qs,
        min=float(arr[0]),
        max=float(arr[-1]),
        trials=trials,
        master_seed=seed,
        values=arr if keep_values else None,
    )


def _run_stats(engine, graph, origin, seed, **kw):
    if engine == "fast":
        return _fast.run(graph, origin, seed, **kw)
    return idla.run(graph, origin, seed, **kw).result


def estimate_dispersion(graph, origin=0, process="sequential", lazy=False,
                        continuous=False, rule=None, trials=100, seed=0,
                        quantiles=(0.5, 0.9, 0.99), engine="fast",
                        workers=None, keep_values=True):
    """Estimate the dispersion time of a process by independent trials.

    Parameters
    ----------
    graph : Graph
        Graph to run on.
    origin : int
        Start vertex of every particle.
    process : str
        ``"sequential"``, ``"parallel"`` or ``"uniform"``.
    lazy, continuous : bool
        Process variant flags, as in :func:`disperse.run`.
    rule : SettleRule, optional
        Non-default settling rule.
    trials : int
        Number of independent runs.
    seed : int or SeedSequence
        Master seed; trial ``j`` uses child ``j``.
    quantiles : sequence of float
        Quantile levels to report alongside mean and stderr.
    engine : str
        ``"fast"`` (compiled) or ``"reference"``.
    workers : int, optional
        Thread count for concurrent trials.  Results are identical for
        any value because seeds are derived per trial.
    keep_values : bool
        Retain the sorted per-trial values on the result.

    Returns
    -------
    Estimate
        Mean, stderr (sample standard deviation / sqrt(trials)),
        requested quantiles, min, max.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")

    def one(j):
        r = _run_stats(engine, graph, origin, rng.child(seed, j),
                       process=process, lazy=lazy, continuous=continuous,
                       rule=rule)
        return r.dispersion_time

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, range(trials)))
    else:
        values = [one(j) for j in range(trials)]
    return _summarize(values, quantiles, trials, seed, keep_values)


def quantile_column(q):
    # 0.5 -> "q50", 0.99 -> "q99", 0.999 -> "q99.9"
    return f"q{100 * float(q):g}"


CSV_COLUMNS = ("family", "n", "origin", "process", "lazy", "trials", "seed",
               "mean", "stderr", "q50", "q90", "q99", "min", "max")


def estimate_row(family, origin, process, lazy, seed, est, n):
    """Flatten an Estimate into a stable CSV row dict."""
    row = {
        "family": family,
        "n": n,
        "origin": origin,
        "process": process,
        "lazy": int(lazy),
        "trials": est.trials,
        "seed": seed,
        "mean": est.mean,
        "stderr": est.stderr,
    }
    for q in sorted(est.quantiles):
        row[quantile_column(q)] = est.quantiles[q]
    row["min"] = est.min
    row["max"] = est.max
    return row


# -- dominance -------------------------------------------------------------

def _rank_band(sorted_vals, q, slack):
    # order-statistic confidence band for the q-quantile
    n = len(sorted_vals)
    sigma = math.sqrt(n * q * (1.0 - q))
    lo = sorted_vals[max(0, int(math.floor(q * n - slack * sigma)))]
    hi = sorted_vals[min(n - 1, int(math.ceil(q * n + slack * sigma)))]
    return lo, hi


def dominance_experiment(graph, origin=0, trials=1000, seed=0,
                         quantile_levels=(0.25, 0.5, 0.75, 0.9), slack=3.0):
    """Check that turning sequential runs into parallel ones never shrinks them.

    For each trial a sequential run is transformed with :func:`stp` and
    three exact facts are asserted: the longest row never gets shorter,
    the total number of cells is unchanged, and the result is a valid
    parallel block.  A second, independent pool of parallel runs is then
    compared quantile by quantile: each parallel quantile must not fall
    below the matching sequential quantile by more than an
    order-statistic confidence band of ``slack`` sigmas.
    """
    t0 = time.time()
    bad_max = bad_len = bad_valid = 0
    first_bad = None
    seq_times = []
    for j in range(trials):
        out = idla.run_sequential(graph, origin, rng.child(seed, j))
        stats = block_stats(out.block)
        par = stp(out.block, graph)
        pstats = block_stats(par)
        if pstats.max_row_length < stats.max_row_length:
            bad_max += 1
        if pstats.total_length != stats.total_length:
            bad_len += 1
        if not check(par, graph, kind="parallel").ok:
            bad_valid += 1
        if first_bad is None and bad_max + bad_len + bad_valid:
            first_bad = j
        seq_times.append(out.result.dispersion_time)
    par_times = [
        _fast.run_parallel(graph, origin, rng.child(seed, trials + j))
        .dispersion_time
        for j in range(trials)
    ]
    seq_sorted = sorted(seq_times)
    par_sorted = sorted(par_times)
    quantile_ok = {}
    for q in quantile_levels:
        seq_lo, _ = _rank_band(seq_sorted, q, slack)
        _, par_hi = _rank_band(par_sorted, q, slack)
        quantile_ok[q] = par_hi >= seq_lo
    verdicts = {
        "max_row_never_shrinks": bad_max == 0,
        "total_length_preserved": bad_len == 0,
        "output_parallel_valid": bad_valid == 0,
        "quantile_dominance": all(quantile_ok.values()),
    }
    return ExperimentReport(
        name="dominance",
        inputs={"graph": graph.name, "origin": origin, "trials": trials,
                "seed": seed, "slack": slack},
        outputs={"violations": {"max_row": bad_max, "total_length": bad_len,
                                "validity": bad_valid},
                 "first_bad_trial": first_bad,
                 "quantile_ok": quantile_ok,
                 "seq_mean": float(np.mean(seq_times)),
                 "par_mean": float(np.mean(par_times))},
        verdicts=verdicts,
        runtime=time.time() - t0,
    )


# -- bijection -------------------------------------------------------------

def _block_key(block):
    return (block.origin, tuple(tuple(r) for r in block.rows))


def bijection_experiment(graph, origin=0, m_max=6):
    """Exhaustively match sequential and parallel block counts up to ``m_max``.

    For every total length m the two enumerations must have equal size,
    ``stp`` must map the sequential set injectively into the parallel
    set, and ``pts`` must undo it exactly.
    """
    t0 = time.time()
    per_m = []
    counts_ok = injective_ok = roundtrip_ok = True
    witness = None
    for m in range(1, m_max + 1):
        seqs = list(enumerate_blocks(graph, origin, m, "sequential"))
        pars = list(enumerate_blocks(graph, origin, m, "parallel"))
        par_keys = {_block_key(b) for b in pars}
        images = set()
        bad = None
        for b in seqs:
            image = stp(b, graph)
            key = _block_key(image)
            if key in images or key not in par_keys:
                injective_ok = False
                bad = b
            images.add(key)
            back = pts(image, graph)
            if _block_key(back) != _block_key(b):
                roundtrip_ok = False
                bad = b
        if len(seqs) != len(pars):
            counts_ok = False
        if bad is not None and witness is None:
            witness = bad.to_json_dict()
        per_m.append({"m": m, "sequential": len(seqs), "parallel": len(pars)})
    return ExperimentReport(
        name="bijection",
        inputs={"graph": graph.name, "origin": origin, "m_max": m_max},
        outputs={"counts": per_m, "witness": witness},
        verdicts={"counts_equal": counts_ok,
                  "stp_injective": injective_ok,
                  "pts_inverts_stp": roundtrip_ok},
        runtime=time.time() - t0,
    )


# -- ratios ----------------------------------------------------------------

def _ratio(a, b):
    r = a.mean / b.mean
    rel = math.hypot(a.stderr / a.mean, b.stderr / b.mean)
    return r, r * rel


def ratio_experiment(graph, origin=0, trials=2000, seed=0, engine="fast",
                     checks=None, workers=None):
    """Compare mean dispersion across process variants.

    Estimates sequential, lazy sequential, parallel, lazy parallel and
    continuous-uniform dispersion under disjoint child seeds and reports
    the mean ratios with delta-method standard errors.  ``checks`` maps a
    ratio name to ``(target, relative tolerance)``; the defaults pin the
    two laziness/continuity collapses near their limits.
    """
    t0 = time.time()
    if checks is None:
        checks = {"lazy_seq_over_seq": (2.0, 0.10),
                  "ctu_over_par": (1.0, 0.10)}
    kw = dict(origin=origin, trials=trials, engine=engine, workers=workers,
              keep_values=False)
    est = {
        "seq": estimate_dispersion(graph, seed=rng.child(seed, 0), **kw),
        "lazy_seq": estimate_dispersion(graph, lazy=True,
                                        seed=rng.child(seed, 1), **kw),
        "par": estimate_dispersion(graph, process="parallel",
                                   seed=rng.child(seed, 2), **kw),
        "lazy_par": estimate_dispersion(graph, process="parallel", lazy=True,
                                        seed=rng.child(seed, 3), **kw),
        "ctu": estimate_dispersion(graph, process="uniform", continuous=True,
                                   seed=rng.child(seed, 4), **kw),
    }
    ratios = {
        "lazy_seq_over_seq": _ratio(est["lazy_seq"], est["seq"]),
        "lazy_par_over_par": _ratio(est["lazy_par"], est["par"]),
        "ctu_over_par": _ratio(est["ctu"], est["par"]),
        "par_over_seq": _ratio(est["par"], est["seq"]),
    }
    verdicts = {}
    for name, (target, tol) in checks.items():
        value = ratios[name][0]
        verdicts[name] = abs(value - target) <= tol * target
    return ExperimentReport(
        name="ratios",
        inputs={"graph": graph.name, "origin": origin, "trials": trials,
                "seed": seed, "checks": checks},
        outputs={"means": {k: e.mean for k, e in est.items()},
                 "ratios": {k: v[0] for k, v in ratios.items()},
                 "ratio_stderr": {k: v[1] for k, v in ratios.items()}},
        verdicts=verdicts,
        runtime=time.time() - t0,
    )


# -- multi-walk set hitting ------------------------------------------------

def multiwalk_set_hitting_mc(graph, j, subset, trials=1000, seed=0,
                             quantiles=(0.5, 0.9), step_cap=10 ** 7):
    """Monte Carlo first-hit time of a set by several lazy walks.

    Parameters
    ----------
    graph : Graph
        Graph to walk on.
    j : int
        Number of independent lazy walks, each started from the
        stationary distribution.
    subset : sequence of int
        Nonempty target set; the estimate is the first step at which any
        walk occupies it (0 when a start already does).
    trials, seed, quantiles
        As in :func:`estimate_dispersion`.
    step_cap : int
        Hard per-trial step limit.

    Returns
    -------
    Estimate
    """
    targets = set(int(v) for v in subset)
    if not targets:
        raise DomainError("subset must be nonempty")
    if j < 1:
        raise DomainError("need at least one walk")
    pi = walkstats.stationary(graph)
    adj = graph.adj
    values = []
    for t in range(trials):
        gen = np.random.Generator(np.random.Philox(rng.child(seed, t)))
        walks = list(gen.choice(graph.n, size=j, p=pi))
        steps = 0
        while not any(v in targets for v in walks):
            for i, v in enumerate(walks):
                move = rng.lazy_pick(gen.random(), len(adj[v]))
                if move >= 0:
                    walks[i] = adj[v][move]
            steps += 1
            if steps > step_cap:
                raise DomainError(f"no hit within {step_cap} steps")
        values.append(steps)
    return _summarize(values, quantiles, trials, seed, True)


# -- non-concentration -----------------------------------------------------

def non_concentration_experiment(graph, origin=0, trials=500, seed=0,
                                 low_divisor=5.0, high_multiple=4.0,
                                 fraction=0.25, engine="fast"):
    """Show that dispersion on a clique with a hair does not concentrate.

    A constant fraction of runs finishes far below the mean (no particle
    ever walks the hair) while rare runs pay for the full traversal, so
    either many trials sit under mean / ``low_divisor`` or many exceed
    ``high_multiple`` times the median.
    """
    t0 = time.time()
    est = estimate_dispersion(graph, origin=origin, trials=trials, seed=seed,
                              quantiles=(0.5,), engine=engine)
    vals = est.values
    med = est.quantiles[0.5]
    below = float(np.mean(vals < est.mean / low_divisor))
    above = float(np.mean(vals > high_multiple * med))
    return ExperimentReport(
        name="non_concentration",
        inputs={"graph": graph.name, "origin": origin, "trials": trials,
                "seed": seed},
        outputs={"mean": est.mean, "median": med,
                 "frac_below_mean_fraction": below,
                 "frac_above_median_multiple": above},
        verdicts={"spread": below >= fraction or above >= fraction},
        runtime=time.time() - t0,
    )


# -- growth table ----------------------------------------------------------

# family -> (label, growth function) for normalized dispersion columns
GROWTH = {
    "complete": ("n", lambda n: float(n)),
    "star": ("n", lambda n: float(n)),
    "hypercube": ("n", lambda n: float(n)),
    "gnp": ("n", lambda n: float(n)),
    "random_regular": ("n", lambda n: float(n)),
    "cycle": ("n^2 ln n", lambda n: n * n * math.log(n)),
    "binary_tree": ("n ln^2 n", lambda n: n * math.log(n) ** 2),
}


def _family_graph(entry, n):
    if ":" in entry:
        name, rest = entry.split(":", 1)
        return name, parse_spec(f"{name}:n={n},{rest}")
    return entry, parse_spec(f"{entry}:n={n}")


def table_reproduce(families, sizes, trials=50, seed=0,
                    processes=("sequential", "parallel"), origin=0,
                    engine="fast", workers=None, exact_cap=2048):
    """Tabulate empirical dispersion against exact walk statistics.

    For each family x size, runs ``trials`` estimates per process and
    joins them with the exact maximum hitting time of the plain walk,
    the lazy-walk mixing time and spectral gap value, and the dispersion
    normalized by the family's growth function (``None`` for families
    without one).  Origin 0 is the adversarial start under the builder
    conventions here: clique end of a lollipop, root of a tree, center
    of a star; vertex-transitive families make it arbitrary.

    Returns a list of row dicts in ``CSV_COLUMNS`` order plus the exact
    columns ``t_hit``, ``t_mix``, ``lam2``, ``growth``, ``normalized``.
    """
    rows = []
    index = 0
    for entry in families:
        for n in sizes:
            fam, g = _family_graph(entry, n)
            if g.n <= exact_cap:
                t_hit = walkstats.max_hitting_time(g)
                t_mix = walkstats.mixing_time(g, lazy=True)
                lam2 = walkstats.spectral_gap(g, lazy=True)[0]
            else:
                t_hit = t_mix = lam2 = None
            label, fn = GROWTH.get(fam, (None, None))
            for process in processes:
                est = estimate_dispersion(
                    g, origin=origin, process=process, trials=trials,
                    seed=rng.child(seed, index), engine=engine,
                    workers=workers, keep_values=False)
                row = estimate_row(fam, origin, process, False, seed, est,
                                   n=g.n)
                row["t_hit"] = t_hit
                row["t_mix"] = t_mix
                row["lam2"] = lam2
                row["growth"] = label
                row["normalized"] = est.mean / fn(g.n) if fn else None
                rows.append(row)
                index += 1
    return rows


def growth_ratios(rows):
    """Max/min spread of normalized dispersion per (family, process)."""
    groups = {}
    for row in rows:
        if row["normalized"] is None:
            continue
        groups.setdefault((row["family"], row["process"]), []).append(
            row["normalized"])
    return {key: max(vals) / min(vals) for key, vals in groups.items()}

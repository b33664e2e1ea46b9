"""Reference dispersion engine.

Runs the sequential, parallel and uniform processes in pure Python,
recording the full trajectory block of every run.  Each particle draws
from its own keyed stream (stream index = row index) and process-level
draws use stream 0, so a sequential and a parallel run under the same
seed move their particles along coupled trajectories.  The jit engine in
``_fast`` reproduces these runs draw for draw; this one is the readable
version and the one that keeps histories.
"""

import math
from dataclasses import dataclass, field

from . import rng
from .blocks import Block
from .errors import DomainError


class SettleRule:
    """Decides whether a particle settles on its current vertex.

    A particle settles when the vertex is vacant and either its elapsed
    step count has reached ``step_cap``, the vertex equals
    ``special_vertex``, or ``predicate(vertex, elapsed)`` holds.  The cap
    is mandatory and finite: it is what guarantees every walk terminates,
    so a rule without one is rejected at construction.  Rules that leave
    ``predicate`` unset can run on the jit engine.
    """

    def __init__(self, step_cap=0, special_vertex=None, predicate=None,
                 name="first-vacant"):
        if step_cap is None or math.isinf(step_cap) or step_cap < 0:
            raise DomainError("step_cap must be a finite non-negative int")
        self.step_cap = int(step_cap)
        self.special_vertex = special_vertex
        self.predicate = predicate
        self.name = name

    def decide(self, vertex, elapsed, vacant):
        if not vacant:
            return False
        if elapsed >= self.step_cap:
            return True
        if self.special_vertex is not None and vertex == self.special_vertex:
            return True
        return self.predicate is not None and self.predicate(vertex, elapsed)

    def kernel_params(self):
        """``(step_cap, special_vertex)`` when jit-expressible, else None."""
        if self.predicate is not None:
            return None
        special = -1 if self.special_vertex is None else self.special_vertex
        return self.step_cap, special

    def __repr__(self):
        return f"SettleRule({self.name})"


FIRST_VACANT = SettleRule()


def least_action_rule(graph):
    """Settle only at the hair tip until ``3 n ln n`` steps have passed.

    Built for the clique-with-hair graphs, whose tip vertex otherwise
    waits for a walker that has nowhere else to go.
    """
    tip = graph.meta.get("tip")
    if tip is None:
        raise DomainError("graph has no tip vertex in meta")
    n = graph.n
    cap = int(math.ceil(3.0 * n * math.log(n)))
    return SettleRule(step_cap=cap, special_vertex=tip, name="least-action")


@dataclass
class DispersionResult:
    """Outcome of one run.

    ``dispersion_time`` is the maximum per-particle step count for
    discrete sequential and parallel runs; for uniform runs it is the
    global clock at the last settle (wasted ticks included), and for
    continuous runs the last settle time on the real clock.
    """
    process: str
    lazy: bool
    time_model: str
    origin: int
    n: int
    dispersion_time: float
    per_particle_steps: list
    settle_order: list
    total_length: int
    partial_time: float | None = None


@dataclass
class RunOutput:
    block: Block
    result: DispersionResult
    timing: list | None = None
    ticks: list | None = field(default=None, repr=False)


def _check_origin(graph, origin):
    if not 0 <= origin < graph.n:
        raise DomainError(f"origin {origin} outside 0..{graph.n - 1}")


def _move(graph, v, u, lazy):
    d = graph.degree(v)
    if lazy:
        j = rng.lazy_pick(u, d)
        return v if j < 0 else graph.adj[v][j]
    return graph.adj[v][rng.pick(u, d)]


def run_sequential(graph, origin, seed, lazy=False, continuous=False,
                   rule=None):
    """Sequential run: each particle walks to rest before the next starts.

    Particle 1 settles at the origin with zero steps.  With
    ``continuous`` set, every move is retroactively given an
    exponential(1) duration from the particle's own stream and the
    dispersion time is the slowest particle's total.
    """
    _check_origin(graph, origin)
    rule = rule or FIRST_VACANT
    n = graph.n
    occupied = [False] * n
    occupied[origin] = True
    rows = [[origin]]
    settle_order = [origin]
    durations = [0.0]
    for p in range(1, n):
        gen = rng.stream(seed, p)
        v = origin
        elapsed = 0
        row = [origin]
        while True:
            v = _move(graph, v, gen.random(), lazy)
            elapsed += 1
            row.append(v)
            if rule.decide(v, elapsed, not occupied[v]):
                break
        occupied[v] = True
        rows.append(row)
        settle_order.append(v)
        if continuous:
            total = 0.0
            for _ in range(elapsed):
                total += rng.exp_time(gen.random(), 1.0)
            durations.append(total)
    block = Block(origin, rows)
    steps = block.row_lengths
    dispersion = max(durations) if continuous else max(steps)
    result = DispersionResult(
        process="sequential", lazy=lazy,
        time_model="continuous" if continuous else "discrete",
        origin=origin, n=n, dispersion_time=dispersion,
        per_particle_steps=steps, settle_order=settle_order,
        total_length=block.total_length)
    return RunOutput(block, result)


def run_parallel(graph, origin, seed, lazy=False, priority=None,
                 partial_k=None, rule=None):
    """Parallel run: every unsettled particle moves at each step.

    Particles arriving at the same vacant vertex are contested; the one
    with the best priority settles and the rest keep walking from there.
    ``priority`` is a row permutation (row 0 first) giving the contest
    order; by default the lowest row index wins.  ``partial_k`` also
    records the first step with fewer than ``2**k - 1`` vertices left.
    """
    _check_origin(graph, origin)
    rule = rule or FIRST_VACANT
    n = graph.n
    if priority is None:
        rank = list(range(n))
    else:
        priority = list(priority)
        if sorted(priority) != list(range(n)) or priority[0] != 0:
            raise DomainError("priority must permute rows and start at 0")
        rank = [0] * n
        for pos_, p in enumerate(priority):
            rank[p] = pos_
    threshold = None if partial_k is None else 2 ** partial_k - 1
    occupied = [False] * n
    occupied[origin] = True
    rows = [[origin] for _ in range(n)]
    settle_order = [origin]
    settled = [False] * n
    settled[0] = True
    elapsed = [0] * n
    pos = [origin] * n
    streams = [None] + [rng.stream(seed, p) for p in range(1, n)]
    active = list(range(1, n))
    partial = 0 if threshold is not None and n - 1 < threshold else None
    step = 0
    while active:
        step += 1
        claims = {}
        for p in active:
            w = _move(graph, pos[p], streams[p].random(), lazy)
            pos[p] = w
            rows[p].append(w)
            elapsed[p] += 1
            if rule.decide(w, elapsed[p], not occupied[w]):
                best = claims.get(w)
                if best is None or rank[p] < rank[best]:
                    claims[w] = p
        if claims:
            for w, p in sorted(claims.items(), key=lambda kv: rank[kv[1]]):
                occupied[w] = True
                settled[p] = True
                settle_order.append(w)
            active = [p for p in active if not settled[p]]
            if (partial is None and threshold is not None
                    and n - len(settle_order) < threshold):
                partial = step
    block = Block(origin, rows)
    steps = block.row_lengths
    result = DispersionResult(
        process="parallel", lazy=lazy, time_model="discrete",
        origin=origin, n=n, dispersion_time=max(steps),
        per_particle_steps=steps, settle_order=settle_order,
        total_length=block.total_length, partial_time=partial)
    return RunOutput(block, result)


def run_uniform(graph, origin, seed, lazy=False, continuous=False,
                rule=None):
    """Uniform run: one tick, one uniformly chosen particle.

    Discrete ticks pick uniformly among particles ``2..n`` whether or
    not they have settled; a settled pick wastes the tick.  The
    dispersion time is the clock at the last settle, not any row length.
    Continuous mode gives each unsettled particle a rate-1 clock,
    simulated by thinning: with ``k`` particles loose the next event
    arrives after an exponential of mean ``1/k`` and picks uniformly
    among them, which has the same law as the independent clocks because
    rings of settled particles change nothing.
    """
    _check_origin(graph, origin)
    rule = rule or FIRST_VACANT
    n = graph.n
    occupied = [False] * n
    occupied[origin] = True
    rows = [[origin] for _ in range(n)]
    trows = [[0] for _ in range(n)]
    settle_order = [origin]
    settled = [False] * n
    settled[0] = True
    elapsed = [0] * n
    pos = [origin] * n
    gen0 = rng.stream(seed, 0)
    streams = [None] + [rng.stream(seed, p) for p in range(1, n)]
    ticks = [] if not continuous else None
    clock = 0 if not continuous else 0.0
    active = list(range(1, n))
    while active:
        if continuous:
            k = len(active)
            clock += rng.exp_time(gen0.random(), 1.0 / k)
            p = active[rng.pick(gen0.random(), k)]
        else:
            clock += 1
            p = 1 + rng.pick(gen0.random(), n - 1)
            ticks.append(p)
            if settled[p]:
                continue
        w = _move(graph, pos[p], streams[p].random(), lazy)
        pos[p] = w
        rows[p].append(w)
        trows[p].append(clock)
        elapsed[p] += 1
        if rule.decide(w, elapsed[p], not occupied[w]):
            occupied[w] = True
            settled[p] = True
            settle_order.append(w)
            active.remove(p)
    block = Block(origin, rows)
    steps = block.row_lengths
    result = DispersionResult(
        process="uniform", lazy=lazy,
        time_model="continuous" if continuous else "discrete",
        origin=origin, n=n, dispersion_time=clock if n > 1 else 0,
        per_particle_steps=steps, settle_order=settle_order,
        total_length=block.total_length)
    return RunOutput(block, result, timing=trows, ticks=ticks)


PROCESSES = ("sequential", "parallel", "uniform")


def run(graph, origin, seed, process="sequential", lazy=False,
        continuous=False, priority=None, partial_k=None, rule=None):
    """Dispatch a single run; see the per-process functions."""
    if process == "sequential":
        return run_sequential(graph, origin, seed, lazy=lazy,
                              continuous=continuous, rule=rule)
    if process == "parallel":
        if continuous:
            raise DomainError("the parallel process is discrete-time only")
        return run_parallel(graph, origin, seed, lazy=lazy,
                            priority=priority, partial_k=partial_k,
                            rule=rule)
    if process == "uniform":
        return run_uniform(graph, origin, seed, lazy=lazy,
                           continuous=continuous, rule=rule)
    raise DomainError(f"unknown process {process!r}; pick from {PROCESSES}")

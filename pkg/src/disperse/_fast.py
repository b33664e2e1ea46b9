"""Jit engine: draw-for-draw twin of the reference engine, stats only.

Kernels walk over CSR adjacency consuming per-particle buffers of
uniform draws.  A buffer is a chunk of the particle's keyed stream; when
a kernel runs dry mid-run it returns the needy stream index, the Python
wrapper refills that one buffer from the same generator and re-enters,
so chunking never changes which draw a particle sees.  The inverse-CDF
expressions are copied verbatim from ``rng``; the cross-engine tests
hold the two engines to bitwise equality, so any edit here must happen
there too.

Settle rules run here only in their ``(step_cap, special_vertex)`` form;
rules with a Python predicate need the reference engine.
"""

import math

import numpy as np
from numba import njit
from numba.typed import List

from . import rng
from .errors import CapabilityError, DomainError
from .idla import FIRST_VACANT, DispersionResult

_CHUNK0 = 1024
_CHUNK_MAX = 1 << 20


def _rule_params(rule):
    params = (rule or FIRST_VACANT).kernel_params()
    if params is None:
        raise CapabilityError(
            "settle rules with a Python predicate need the reference engine")
    return params


@njit(cache=True, nogil=True)
def _step(indptr, indices, v, u, lazy):
    d = indptr[v + 1] - indptr[v]
    if lazy:
        if u < 0.5:
            return v
        j = int((u - 0.5) * 2.0 * d)
        if j >= d:
            j = d - 1
    else:
        j = int(u * d)
        if j >= d:
            j = d - 1
    return indices[indptr[v] + j]


@njit(cache=True, nogil=True)
def _seq_walk(indptr, indices, occupied, v, elapsed, buf, lazy, cap, special):
    used = 0
    while used < buf.shape[0]:
        v = _step(indptr, indices, v, buf[used], lazy)
        used += 1
        elapsed += 1
        if (not occupied[v]) and (elapsed >= cap or v == special):
            return v, elapsed, used, True
    return v, elapsed, used, False


def run_sequential(graph, origin, seed, lazy=False, continuous=False,
                   rule=None):
    """Stats of a sequential run; see the reference engine for semantics."""
    cap, special = _rule_params(rule)
    indptr, indices = graph.csr()
    n = graph.n
    occupied = np.zeros(n, dtype=np.bool_)
    occupied[origin] = True
    steps = [0]
    settle_order = [origin]
    durations = [0.0]
    for p in range(1, n):
        gen = rng.stream(seed, p)
        v = origin
        elapsed = 0
        chunk = _CHUNK0
        leftover = None
        while True:
            buf = gen.random(chunk)
            v, elapsed, used, done = _seq_walk(
                indptr, indices, occupied, v, elapsed, buf, lazy, cap,
                special)
            if done:
                leftover = buf[used:]
                break
            chunk = min(chunk * 2, _CHUNK_MAX)
        occupied[v] = True
        elapsed = int(elapsed)
        steps.append(elapsed)
        settle_order.append(int(v))
        if continuous:
            # the reference engine draws move durations right after the
            # walk, so the overdrawn tail of the last buffer comes first
            need = elapsed
            total = 0.0
            while need > 0:
                if leftover.shape[0] == 0:
                    leftover = gen.random(need)
                take = min(need, leftover.shape[0])
                for u in leftover[:take]:
                    total += -1.0 * math.log1p(-u)
                leftover = leftover[take:]
                need -= take
            durations.append(total)
    dispersion = max(durations) if continuous else max(steps)
    return DispersionResult(
        process="sequential", lazy=lazy,
        time_model="continuous" if continuous else "discrete",
        origin=origin, n=n, dispersion_time=dispersion,
        per_particle_steps=steps, settle_order=settle_order,
        total_length=sum(steps))


@njit(cache=True, nogil=True)
def _par_kernel(indptr, indices, bufs, ptrs, pos, elapsed, occupied,
                settled, rank, active, claim, claimed, settle_v,
                settle_step, state, lazy, cap, special):
    # state holds (n_active, step, settle_count)
    n_active = state[0]
    step = state[1]
    out = state[2]
    while n_active > 0:
        for idx in range(n_active):
            p = active[idx]
            if ptrs[p] >= bufs[p].shape[0]:
                state[0] = n_active
                state[1] = step
                state[2] = out
                return p
        step += 1
        n_arr = 0
        for idx in range(n_active):
            p = active[idx]
            u = bufs[p][ptrs[p]]
            ptrs[p] += 1
            w = _step(indptr, indices, pos[p], u, lazy)
            pos[p] = w
            elapsed[p] += 1
            if (not occupied[w]) and (elapsed[p] >= cap or w == special):
                if claim[w] < 0:
                    claimed[n_arr] = w
                    n_arr += 1
                    claim[w] = p
                elif rank[p] < rank[claim[w]]:
                    claim[w] = p
        if n_arr > 0:
            # settle winners in rank order for a canonical event order
            for a in range(1, n_arr):
                w = claimed[a]
                key = rank[claim[w]]
                b = a - 1
                while b >= 0 and rank[claim[claimed[b]]] > key:
                    claimed[b + 1] = claimed[b]
                    b -= 1
                claimed[b + 1] = w
            for a in range(n_arr):
                w = claimed[a]
                p = claim[w]
                occupied[w] = True
                settled[p] = True
                settle_step[p] = step
                settle_v[out] = w
                out += 1
                claim[w] = -1
            na = 0
            for idx in range(n_active):
                p = active[idx]
                if not settled[p]:
                    active[na] = p
                    na += 1
            n_active = na
    state[0] = 0
    state[1] = step
    state[2] = out
    return -1


def run_parallel(graph, origin, seed, lazy=False, priority=None,
                 partial_k=None, rule=None):
    """Stats of a parallel run; see the reference engine for semantics."""
    cap, special = _rule_params(rule)
    indptr, indices = graph.csr()
    n = graph.n
    if priority is None:
        rank = np.arange(n, dtype=np.int64)
    else:
        priority = list(priority)
        if sorted(priority) != list(range(n)) or priority[0] != 0:
            raise DomainError("priority must permute rows and start at 0")
        rank = np.empty(n, dtype=np.int64)
        for pos_, p in enumerate(priority):
            rank[p] = pos_
    pos = np.full(n, origin, dtype=np.int64)
    elapsed = np.zeros(n, dtype=np.int64)
    occupied = np.zeros(n, dtype=np.bool_)
    occupied[origin] = True
    settled = np.zeros(n, dtype=np.bool_)
    settled[0] = True
    active = np.arange(1, n + 1, dtype=np.int64)
    active[n - 1] = 0  # scratch slot; only the first n-1 entries are live
    claim = np.full(n, -1, dtype=np.int64)
    claimed = np.zeros(n, dtype=np.int64)
    settle_v = np.zeros(n, dtype=np.int64)
    settle_v[0] = origin
    settle_step = np.zeros(n, dtype=np.int64)
    state = np.array([n - 1, 0, 1], dtype=np.int64)
    streams = [None] + [rng.stream(seed, p) for p in range(1, n)]
    chunks = [0] + [_CHUNK0] * (n - 1)
    bufs = List()
    bufs.append(np.zeros(1))
    for p in range(1, n):
        bufs.append(streams[p].random(_CHUNK0))
    ptrs = np.zeros(n, dtype=np.int64)
    if n > 1:
        while True:
            need = _par_kernel(indptr, indices, bufs, ptrs, pos, elapsed,
                               occupied, settled, rank, active, claim,
                               claimed, settle_v, settle_step, state, lazy,
                               cap, special)
            if need < 0:
                break
            chunks[need] = min(chunks[need] * 2, _CHUNK_MAX)
            bufs[need] = streams[need].random(chunks[need])
            ptrs[need] = 0
    partial = None
    if partial_k is not None:
        threshold = 2 ** partial_k - 1
        order = np.sort(settle_step)
        idx = max(1, n - threshold + 1)
        partial = int(order[idx - 1])
    return DispersionResult(
        process="parallel", lazy=lazy, time_model="discrete",
        origin=origin, n=n, dispersion_time=int(state[1]),
        per_particle_steps=[int(x) for x in elapsed],
        settle_order=[int(v) for v in settle_v],
        total_length=int(elapsed.sum()), partial_time=partial)


@njit(cache=True, nogil=True)
def _unif_kernel(indptr, indices, buf0, bufs, ptrs, pos, occupied, settled,
                 settle_clock, state, lazy, cap, special, n, elapsed):
    # state holds (unsettled, clock, stream0 cursor)
    while state[0] > 0:
        if state[2] >= buf0.shape[0]:
            return -2
        u = buf0[state[2]]
        r = 1 + int(u * (n - 1))
        if r > n - 1:
            r = n - 1
        if (not settled[r]) and ptrs[r] >= bufs[r].shape[0]:
            return r
        state[2] += 1
        state[1] += 1
        if settled[r]:
            continue
        w = _step(indptr, indices, pos[r], bufs[r][ptrs[r]], lazy)
        ptrs[r] += 1
        pos[r] = w
        elapsed[r] += 1
        if (not occupied[w]) and (elapsed[r] >= cap or w == special):
            occupied[w] = True
            settled[r] = True
            settle_clock[r] = state[1]
            state[0] -= 1
    return -1


@njit(cache=True, nogil=True)
def _ctu_kernel(indptr, indices, buf0, bufs, ptrs, pos, occupied, settled,
                settle_clock, istate, clock, active, lazy, cap, special,
                elapsed):
    # istate holds (n_active, stream0 cursor)
    while istate[0] > 0:
        if istate[1] + 2 > buf0.shape[0]:
            return -2
        u1 = buf0[istate[1]]
        u2 = buf0[istate[1] + 1]
        k = istate[0]
        mean = 1.0 / k
        dt = -mean * math.log1p(-u1)
        idx = int(u2 * k)
        if idx >= k:
            idx = k - 1
        r = active[idx]
        if ptrs[r] >= bufs[r].shape[0]:
            return r
        istate[1] += 2
        clock[0] += dt
        w = _step(indptr, indices, pos[r], bufs[r][ptrs[r]], lazy)
        ptrs[r] += 1
        pos[r] = w
        elapsed[r] += 1
        if (not occupied[w]) and (elapsed[r] >= cap or w == special):
            occupied[w] = True
            settled[r] = True
            settle_clock[r] = clock[0]
            for j in range(idx, istate[0] - 1):
                active[j] = active[j + 1]
            istate[0] -= 1
    return -1


def run_uniform(graph, origin, seed, lazy=False, continuous=False,
                rule=None):
    """Stats of a uniform run; see the reference engine for semantics."""
    cap, special = _rule_params(rule)
    indptr, indices = graph.csr()
    n = graph.n
    pos = np.full(n, origin, dtype=np.int64)
    elapsed = np.zeros(n, dtype=np.int64)
    occupied = np.zeros(n, dtype=np.bool_)
    occupied[origin] = True
    settled = np.zeros(n, dtype=np.bool_)
    settled[0] = True
    gen0 = rng.stream(seed, 0)
    streams = [None] + [rng.stream(seed, p) for p in range(1, n)]
    chunks = [0] + [_CHUNK0] * (n - 1)
    bufs = List()
    bufs.append(np.zeros(1))
    for p in range(1, n):
        bufs.append(streams[p].random(_CHUNK0))
    ptrs = np.zeros(n, dtype=np.int64)
    chunk0 = _CHUNK0
    buf0 = gen0.random(chunk0)
    if continuous:
        settle_clock = np.zeros(n)
        istate = np.array([n - 1, 0], dtype=np.int64)
        clock = np.zeros(1)
        active = np.arange(1, max(n, 2), dtype=np.int64)[:max(n - 1, 1)]
        while n > 1:
            need = _ctu_kernel(indptr, indices, buf0, bufs, ptrs, pos,
                               occupied, settled, settle_clock, istate,
                               clock, active, lazy, cap, special, elapsed)
            if need == -1:
                break
            if need == -2:
                tail = buf0[istate[1]:]
                chunk0 = min(chunk0 * 2, _CHUNK_MAX)
                buf0 = np.concatenate([tail, gen0.random(chunk0)])
                istate[1] = 0
            else:
                chunks[need] = min(chunks[need] * 2, _CHUNK_MAX)
                bufs[need] = streams[need].random(chunks[need])
                ptrs[need] = 0
        dispersion = float(clock[0])
    else:
        settle_clock = np.zeros(n, dtype=np.int64)
        state = np.array([n - 1, 0, 0], dtype=np.int64)
        while n > 1:
            need = _unif_kernel(indptr, indices, buf0, bufs, ptrs, pos,
                                occupied, settled, settle_clock, state,
                                lazy, cap, special, n, elapsed)
            if need == -1:
                break
            if need == -2:
                tail = buf0[state[2]:]
                chunk0 = min(chunk0 * 2, _CHUNK_MAX)
                buf0 = np.concatenate([tail, gen0.random(chunk0)])
                state[2] = 0
            else:
                chunks[need] = min(chunks[need] * 2, _CHUNK_MAX)
                bufs[need] = streams[need].random(chunks[need])
                ptrs[need] = 0
        dispersion = int(state[1])
    order = np.argsort(settle_clock[1:], kind="stable") + 1
    settle_order = [origin] + [int(pos[p]) for p in order]
    return DispersionResult(
        process="uniform", lazy=lazy,
        time_model="continuous" if continuous else "discrete",
        origin=origin, n=n, dispersion_time=dispersion if n > 1 else 0,
        per_particle_steps=[int(x) for x in elapsed],
        settle_order=settle_order,
        total_length=int(elapsed.sum()))


def run(graph, origin, seed, process="sequential", lazy=False,
        continuous=False, priority=None, partial_k=None, rule=None):
    """Dispatch mirroring ``idla.run`` but returning stats only."""
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
    raise DomainError(f"unknown process {process!r}")

"""Deterministic random streams for dispersion runs.

Every random quantity in the package comes from a counter-based generator
(Philox) through an explicit inverse-CDF transform of uniform float64
draws.  Streams are keyed rather than split sequentially: stream ``i`` of
a run depends only on the run seed and ``i``, so the order in which
streams are consumed never changes what any one of them yields.  That is
what lets a sequential and a parallel run share per-particle trajectory
randomness, and lets trials of an experiment be aggregated in any order.

Stream layout for a single run:

* stream 0 drives process-level draws (the uniform tick sequence,
  continuous-time event clocks),
* stream ``i`` for ``i >= 1`` drives every move of particle ``i + 1``
  (particle 1 never moves).

An experiment over many trials gives trial ``j`` the child seed
``(master, j)`` and the run then keys its streams under that, so the full
key of a particle stream is ``(master, trial, particle)``.
"""

import math

import numpy as np


def child(seed, index):
    """Return the child ``SeedSequence`` of ``seed`` at ``index``.

    ``seed`` may be an int or a ``SeedSequence``; the child is formed by
    appending ``index`` to the spawn key, so nesting is associative and
    independent of call order.
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            entropy=seed.entropy, spawn_key=tuple(seed.spawn_key) + (index,)
        )
    return np.random.SeedSequence(entropy=seed, spawn_key=(index,))


def stream(seed, index):
    """Return a Philox ``Generator`` for stream ``index`` under ``seed``."""
    return np.random.Generator(np.random.Philox(child(seed, index)))


# Inverse-CDF transforms.  The jit kernels inline the same expressions;
# any change here must be mirrored there or the two engines will diverge.

def pick(u, k):
    """Uniform index in ``range(k)`` from a uniform ``u`` in [0, 1)."""
    # min() guards the float edge u*k rounding up to k
    return min(int(u * k), k - 1)


def lazy_pick(u, k):
    """Lazy choice: -1 (hold) with probability 1/2, else an index."""
    if u < 0.5:
        return -1
    return min(int((u - 0.5) * 2.0 * k), k - 1)


def exp_time(u, mean):
    """Exponential waiting time with the given mean."""
    return -mean * math.log1p(-u)

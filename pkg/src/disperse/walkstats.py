"""Exact random-walk statistics on small graphs.

Dense linear algebra throughout: hitting times via the fundamental
matrix, set hitting times via absorbing solves, mixing time by matrix
powering with a doubling bracket, conductance by exhaustive subset scan.
Every routine that admits an independent identity checks it before
returning.
"""

import math
from itertools import combinations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import CapabilityError, DomainError, IntegrityError

# residual tolerance for the hitting-time post-check
HIT_RESIDUAL_TOL = 1e-10
# agreement required between the return-probability solve and the
# resistance identity
RETURN_PROB_TOL = 1e-9


def transition_matrix(graph, lazy=False):
    """Dense one-step transition matrix of the simple random walk.

    Parameters
    ----------
    graph : Graph
        Host graph; self-loops contribute holding probability.
    lazy : bool
        If set, return ``(I + P) / 2``.

    Returns
    -------
    ndarray of shape (n, n)
    """
    n = graph.n
    P = np.zeros((n, n))
    for v in range(n):
        d = graph.degree(v)
        for w in graph.adj[v]:
            P[v, w] += 1.0 / d
    if lazy:
        P = 0.5 * (np.eye(n) + P)
    return P


def stationary(graph):
    """Stationary distribution, proportional to degree.

    Laziness does not change it, so there is no ``lazy`` switch.
    """
    d = graph.degrees.astype(float)
    return d / d.sum()


def hitting_time_matrix(graph, lazy=False):
    """All-pairs expected hitting times.

    Uses the fundamental matrix ``Z = (I - P + 1 pi^T)^{-1}``, giving
    ``H[u, v] = (Z[v, v] - Z[u, v]) / pi[v]``.  The result is checked
    against the defining linear system; a relative residual above
    ``HIT_RESIDUAL_TOL`` raises ``IntegrityError``.

    Returns
    -------
    ndarray of shape (n, n)
        ``H[u, v]`` is the expected time to reach ``v`` from ``u``;
        the diagonal is zero.
    """
    P = transition_matrix(graph, lazy=lazy)
    pi = stationary(graph)
    n = graph.n
    Z = np.linalg.inv(np.eye(n) - P + np.outer(np.ones(n), pi))
    H = (np.diag(Z)[None, :] - Z) / pi[None, :]
    np.fill_diagonal(H, 0.0)
    # h_v = 1 + P h_v away from v is the defining system for each column
    resid = H - 1.0 - P @ H
    np.fill_diagonal(resid, 0.0)
    rel = np.abs(resid).max() / max(1.0, H.max())
    if rel > HIT_RESIDUAL_TOL:
        raise IntegrityError(f"hitting-time residual {rel:.3e}")
    return H


def hitting_time(graph, u, v, lazy=False):
    """Expected hitting time of ``v`` from ``u``."""
    return float(hitting_time_matrix(graph, lazy=lazy)[u, v])


def max_hitting_time(graph, lazy=False):
    """Worst hitting time over ordered vertex pairs."""
    return float(hitting_time_matrix(graph, lazy=lazy).max())


def hitting_time_to_set(graph, targets, start=None, lazy=False):
    """Expected time to reach a vertex set.

    Parameters
    ----------
    graph : Graph
    targets : iterable of int
        Non-empty target set.
    start : int or None
        Starting vertex; ``None`` averages over the stationary
        distribution (targets contribute zero).
    lazy : bool

    Returns
    -------
    float
    """
    S = sorted(set(int(t) for t in targets))
    if not S:
        raise DomainError("target set is empty")
    if any(not 0 <= t < graph.n for t in S):
        raise DomainError("target outside vertex range")
    P = transition_matrix(graph, lazy=lazy)
    n = graph.n
    A = np.eye(n) - P
    b = np.ones(n)
    for t in S:
        A[t, :] = 0.0
        A[t, t] = 1.0
        b[t] = 0.0
    h = scipy.linalg.solve(A, b)
    if start is None:
        return float(stationary(graph) @ h)
    return float(h[start])


def commute_time(graph, u, v, lazy=False):
    """Expected round trip ``u -> v -> u``."""
    H = hitting_time_matrix(graph, lazy=lazy)
    return float(H[u, v] + H[v, u])


def effective_resistance(graph, u, v):
    """Effective resistance between two vertices, unit edge conductance.

    Solved electrically from the graph Laplacian (self-loops carry no
    current and are ignored), independently of any hitting-time
    computation.
    """
    if u == v:
        return 0.0
    n = graph.n
    L = np.zeros((n, n))
    for x in range(n):
        for w in graph.adj[x]:
            if w != x:
                L[x, x] += 1.0
                L[x, w] -= 1.0
    rhs = np.zeros(n)
    rhs[u], rhs[v] = 1.0, -1.0
    # ground one vertex to make the system nonsingular
    L[0, :] = 0.0
    L[0, 0] = 1.0
    rhs[0] = 0.0
    x = scipy.linalg.solve(L, rhs)
    return float(x[u] - x[v])


def hit_before_return(graph, r, u):
    """Probability that a walk from ``r`` reaches ``u`` before returning.

    Solved as an absorbing system, then checked against the identity
    ``1 / (R(r, u) deg(r))``; disagreement beyond ``RETURN_PROB_TOL``
    raises ``IntegrityError``.
    """
    if r == u:
        raise DomainError("start and target coincide")
    P = transition_matrix(graph)
    n = graph.n
    A = np.eye(n) - P
    b = np.zeros(n)
    for t, val in ((r, 0.0), (u, 1.0)):
        A[t, :] = 0.0
        A[t, t] = 1.0
        b[t] = val
    q = scipy.linalg.solve(A, b)
    p = float(P[r, :] @ q)
    expected = 1.0 / (effective_resistance(graph, r, u) * graph.degree(r))
    if abs(p - expected) > RETURN_PROB_TOL:
        raise IntegrityError(
            f"escape probability {p:.12f} disagrees with "
            f"resistance identity {expected:.12f}")
    return p


def spectral_gap(graph, lazy=False, method="auto", dense_cap=2000):
    """Second eigenvalue magnitude and spectral gap of the walk.

    Parameters
    ----------
    graph : Graph
    lazy : bool
    method : {"auto", "dense", "iterative"}
        Dense symmetric eigensolve up to ``dense_cap`` vertices;
        ``auto`` switches to a sparse iterative solve beyond that.
        ``dense`` past the cap raises ``CapabilityError``.
    dense_cap : int

    Returns
    -------
    (lambda2, gap) : pair of float
        ``lambda2`` is the second-largest eigenvalue magnitude, so for a
        non-lazy bipartite walk it is 1 and the gap is 0.
    """
    n = graph.n
    if n == 1:
        return 0.0, 1.0
    if method == "auto":
        method = "dense" if n <= dense_cap else "iterative"
    if method == "dense" and n > dense_cap:
        raise CapabilityError(
            f"dense eigensolve capped at n={dense_cap}; "
            "pass method='iterative'")
    d = graph.degrees.astype(float)
    scale = np.sqrt(d)
    if method == "dense":
        P = transition_matrix(graph, lazy=lazy)
        # D^{1/2} P D^{-1/2} is symmetric for a reversible walk
        M = P * (scale[:, None] / scale[None, :])
        w = scipy.linalg.eigh(M, eigvals_only=True)
    elif method == "iterative":
        indptr, indices = graph.csr()
        data = np.repeat(1.0 / d, np.diff(indptr))
        P = scipy.sparse.csr_matrix(
            (data, indices, indptr), shape=(n, n))
        M = scipy.sparse.diags(scale) @ P @ scipy.sparse.diags(1.0 / scale)
        if lazy:
            M = 0.5 * (scipy.sparse.eye(n) + M)
        M = 0.5 * (M + M.T)  # symmetrize away roundoff
        w = scipy.sparse.linalg.eigsh(
            M, k=2, which="LM", return_eigenvectors=False)
    else:
        raise DomainError(f"unknown method {method!r}")
    mags = np.sort(np.abs(w))[::-1]
    lam2 = float(min(mags[1], 1.0))
    return lam2, 1.0 - lam2


def _tv_from_stationary(M, pi):
    return 0.5 * np.abs(M - pi[None, :]).sum(axis=1).max()


def mixing_time(graph, eps=0.25, lazy=False, step_cap=None):
    """Smallest ``t`` with worst-start total variation at most ``eps``.

    Powers the transition matrix by repeated squaring to bracket the
    answer, then binary searches inside the bracket; worst-start TV is
    non-increasing in ``t``, which is what makes the search valid.

    Returns
    -------
    int or math.inf
        ``math.inf`` when no power below ``step_cap`` mixes, as happens
        for non-lazy walks on bipartite graphs.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must be in (0, 1)")
    n = graph.n
    if n == 1:
        return 0
    if step_cap is None:
        step_cap = max(4096, 16 * n ** 3)
    P = transition_matrix(graph, lazy=lazy)
    pi = stationary(graph)
    if _tv_from_stationary(P, pi) <= eps:
        return 1
    # square until mixed: squares[j] holds P^(2^j)
    squares = [P]
    M = P
    while True:
        t = 2 ** len(squares)
        if t > step_cap:
            return math.inf
        M = squares[-1] @ squares[-1]
        squares.append(M)
        if _tv_from_stationary(M, pi) <= eps:
            break
    lo, hi = 2 ** (len(squares) - 2), 2 ** (len(squares) - 1)
    # invariant: TV(lo) > eps >= TV(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        M = None
        bits, j = mid, 0
        while bits:
            if bits & 1:
                M = squares[j] if M is None else M @ squares[j]
            bits >>= 1
            j += 1
        if _tv_from_stationary(M, pi) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


def conductance(graph, subset_cap=20):
    """Conductance of the lazy walk by exhaustive subset minimization.

    Scans every vertex set with stationary mass at most 1/2; beyond
    ``subset_cap`` vertices this is refused with ``CapabilityError``
    (use ``spectral_gap`` and the Cheeger bounds instead).

    Returns
    -------
    (phi, best) : float and frozenset of int
    """
    n = graph.n
    if n < 2:
        raise DomainError("conductance needs n >= 2")
    if n > subset_cap:
        raise CapabilityError(
            f"exhaustive conductance capped at n={subset_cap}; "
            "use spectral_gap and Cheeger bounds for larger graphs")
    pi = stationary(graph)
    Q = pi[:, None] * transition_matrix(graph, lazy=True)
    best, best_mask = math.inf, 0
    masks = np.arange(1, 2 ** n - 1, dtype=np.int64)
    for chunk in np.array_split(masks, max(1, len(masks) // 65536)):
        bits = ((chunk[:, None] >> np.arange(n)) & 1).astype(float)
        vol = bits @ pi
        ok = vol <= 0.5 + 1e-12
        if not ok.any():
            continue
        cut = ((bits[ok] @ Q) * (1.0 - bits[ok])).sum(axis=1)
        phi = cut / vol[ok]
        j = int(np.argmin(phi))
        if phi[j] < best:
            best = float(phi[j])
            best_mask = int(chunk[ok][j])
    members = frozenset(v for v in range(n) if best_mask >> v & 1)
    return best, members


def max_set_hitting(graph, size, lazy=False, subset_cap=14):
    """Worst stationary-start hitting time over target sets of one size.

    Exhausts all ``size``-subsets, so the graph is capped at
    ``subset_cap`` vertices.  Monotonicity under set inclusion makes the
    worst case over "at least this size" equal to the worst case at
    exactly this size, which is how the refined bounds use it.

    Returns
    -------
    (value, worst) : float and frozenset of int
    """
    n = graph.n
    if not 1 <= size <= n:
        raise DomainError(f"size must be in [1, {n}]")
    if n > subset_cap:
        raise CapabilityError(
            f"exhaustive set maximization capped at n={subset_cap}")
    best, best_set = -math.inf, None
    for S in combinations(range(n), size):
        val = hitting_time_to_set(graph, S, start=None, lazy=lazy)
        if val > best:
            best, best_set = val, frozenset(S)
    return best, best_set

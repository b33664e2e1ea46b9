"""Finite host graphs.

A graph is stored as sorted adjacency lists over vertices ``0..n-1``.
Distinct neighbours appear once; a self-loop at ``v`` appears as ``v``
inside its own list, repeated once per loop.  Every loop adds 1 to the
degree, so the walk at ``v`` holds with probability ``loops(v)/deg(v)``.
All builders return connected graphs and every constructor validates.
"""

from collections import deque

import numpy as np


class Graph:
    """Connected multigraph restricted to simple edges plus self-loops.

    Parameters
    ----------
    n : int
        Number of vertices, labelled ``0..n-1``.
    adj : sequence of sequences of int
        Neighbour lists.  They are sorted and symmetry-checked on entry.
    name : str
        Family tag used in reports and CSV rows.
    meta : dict, optional
        Construction parameters worth reporting (sizes, p, retries).
    """

    def __init__(self, n, adj, name="custom", meta=None):
        self.n = int(n)
        self.adj = [sorted(int(w) for w in row) for row in adj]
        self.name = name
        self.meta = dict(meta or {})
        self._csr = None
        self.validate()

    def validate(self):
        if self.n < 1 or len(self.adj) != self.n:
            raise ValueError("adjacency size does not match n")
        counts = [{} for _ in range(self.n)]
        for v, row in enumerate(self.adj):
            for w in row:
                if not 0 <= w < self.n:
                    raise ValueError(f"vertex {w} out of range in list of {v}")
                counts[v][w] = counts[v].get(w, 0) + 1
        for v in range(self.n):
            for w, c in counts[v].items():
                if w != v and c != 1:
                    raise ValueError(f"duplicate edge {v}-{w}")
                if counts[w].get(v, 0) != c:
                    raise ValueError(f"asymmetric adjacency at {v}-{w}")
        if self.n > 1 and any(len(row) == 0 for row in self.adj):
            raise ValueError("isolated vertex")
        # connectivity by BFS from 0
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        reached = 1
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    reached += 1
                    queue.append(w)
        if reached != self.n:
            raise ValueError("graph is not connected")

    # --- size accounting -------------------------------------------------

    @property
    def degrees(self):
        return np.array([len(row) for row in self.adj], dtype=np.int64)

    def degree(self, v):
        return len(self.adj[v])

    def loops(self, v):
        return self.adj[v].count(v)

    @property
    def total_loops(self):
        return sum(self.loops(v) for v in range(self.n))

    @property
    def simple_edge_count(self):
        return (int(self.degrees.sum()) - self.total_loops) // 2

    @property
    def edge_weight(self):
        """Half the total degree: plain ``|E|`` plus half a unit per loop."""
        return int(self.degrees.sum()) / 2.0

    @property
    def max_degree(self):
        return int(self.degrees.max())

    @property
    def min_degree(self):
        return int(self.degrees.min())

    def is_regular(self):
        return self.max_degree == self.min_degree

    def is_tree(self):
        return self.total_loops == 0 and self.simple_edge_count == self.n - 1

    def is_bipartite(self):
        if self.total_loops:
            return False
        colour = [-1] * self.n
        colour[0] = 0
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if colour[w] == -1:
                    colour[w] = colour[v] ^ 1
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return False
        return True

    def csr(self):
        """Adjacency in CSR form ``(indptr, indices)`` for the jit kernels."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for v in range(self.n):
                indptr[v + 1] = indptr[v] + len(self.adj[v])
            indices = np.fromiter(
                (w for row in self.adj for w in row), dtype=np.int64,
                count=int(indptr[-1]),
            )
            self._csr = (indptr, indices)
        return self._csr

    def __repr__(self):
        return f"Graph({self.name}, n={self.n})"


# --- families ------------------------------------------------------------


def complete(n):
    """Complete graph on ``n`` vertices."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return Graph(n, [[w for w in range(n) if w != v] for v in range(n)],
                 name="complete", meta={"n": n})


def path(n):
    """Path on ``n`` vertices, endpoints 0 and ``n - 1``."""
    if n < 1:
        raise ValueError("n >= 1 required")
    adj = [[] for _ in range(n)]
    for v in range(n - 1):
        adj[v].append(v + 1)
        adj[v + 1].append(v)
    return Graph(n, adj, name="path", meta={"n": n})


def cycle(n):
    """Cycle on ``n >= 3`` vertices."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    adj = [[(v - 1) % n, (v + 1) % n] for v in range(n)]
    return Graph(n, adj, name="cycle", meta={"n": n})


def star(n):
    """Star on ``n`` vertices: centre 0, leaves ``1..n-1``."""
    if n < 2:
        raise ValueError("star needs n >= 2")
    adj = [list(range(1, n))] + [[0] for _ in range(n - 1)]
    return Graph(n, adj, name="star", meta={"n": n})


def binary_tree(n):
    """Complete binary tree on ``n = 2**k - 1`` vertices in heap order."""
    k = (n + 1).bit_length() - 1
    if n < 1 or 2 ** k - 1 != n:
        raise ValueError(f"binary tree needs n = 2**k - 1, got {n}")
    adj = [[] for _ in range(n)]
    for v in range(n):
        for c in (2 * v + 1, 2 * v + 2):
            if c < n:
                adj[v].append(c)
                adj[c].append(v)
    return Graph(n, adj, name="binary_tree", meta={"n": n})


def hypercube(n):
    """Hypercube on ``n = 2**d`` vertices; neighbours differ in one bit."""
    d = n.bit_length() - 1
    if n < 2 or 2 ** d != n:
        raise ValueError(f"hypercube needs n = 2**d, got {n}")
    adj = [[v ^ (1 << b) for b in range(d)] for v in range(n)]
    return Graph(n, adj, name="hypercube", meta={"n": n})


def torus(d, side):
    """``d``-dimensional discrete torus with ``side`` vertices per axis.

    ``side == 2`` collapses the +1/-1 neighbours, leaving a simple graph.
    """
    if d < 1 or side < 2:
        raise ValueError("torus needs d >= 1 and side >= 2")
    n = side ** d
    adj = []
    for v in range(n):
        coords = []
        x = v
        for _ in range(d):
            coords.append(x % side)
            x //= side
        nb = set()
        for axis in range(d):
            for step in (1, -1):
                c = list(coords)
                c[axis] = (c[axis] + step) % side
                w = 0
                for val in reversed(c):
                    w = w * side + val
                nb.add(w)
        adj.append(sorted(nb))
    return Graph(n, adj, name="torus", meta={"d": d, "side": side})


def grid(d, side):
    """``d``-dimensional box grid with ``side`` vertices per axis."""
    if d < 1 or side < 2:
        raise ValueError("grid needs d >= 1 and side >= 2")
    n = side ** d
    adj = [[] for _ in range(n)]
    for v in range(n):
        coords = []
        x = v
        for _ in range(d):
            coords.append(x % side)
            x //= side
        for axis in range(d):
            if coords[axis] + 1 < side:
                w = v + side ** axis
                adj[v].append(w)
                adj[w].append(v)
    return Graph(n, adj, name="grid", meta={"d": d, "side": side})


def lollipop(n):
    """Clique on ``ceil(n/2)`` vertices joined by one edge to a path.

    Clique vertices are ``0..ceil(n/2)-1``; the bridge runs from the last
    clique vertex to the first of the ``floor(n/2)`` path vertices.
    """
    if n < 3:
        raise ValueError("lollipop needs n >= 3")
    k = (n + 1) // 2
    adj = [[] for _ in range(n)]
    for v in range(k):
        for w in range(v + 1, k):
            adj[v].append(w)
            adj[w].append(v)
    for v in range(k - 1, n - 1):
        adj[v].append(v + 1)
        adj[v + 1].append(v)
    return Graph(n, adj, name="lollipop", meta={"n": n, "clique": k})


def clique_with_hair(n):
    """Clique on ``n - 1`` vertices plus a hair tip.

    The tip ``n - 1`` hangs off base vertex 0.  Worst origins for greedy
    settling are inside the clique; the tip is the hard-to-find vertex.
    """
    if n < 3:
        raise ValueError("clique_with_hair needs n >= 3")
    adj = [[w for w in range(n - 1) if w != v] for v in range(n - 1)]
    adj[0].append(n - 1)
    adj.append([0])
    return Graph(n, adj, name="clique_with_hair",
                 meta={"n": n, "base": 0, "tip": n - 1})


def clique_hair_on_pimple(n, h=None):
    """Clique on ``n - 2`` vertices, a pimple vertex, and a hair tip.

    The pimple ``n - 2`` attaches to the first ``h - 1`` clique vertices
    and carries the tip ``n - 1``.  Default ``h`` is ``ceil(n / ln n)``.
    """
    if n < 5:
        raise ValueError("clique_hair_on_pimple needs n >= 5")
    if h is None:
        h = int(np.ceil(n / np.log(n)))
    if not 2 <= h <= n - 2:
        raise ValueError(f"h must be in [2, n-2], got {h}")
    v, tip = n - 2, n - 1
    adj = [[w for w in range(n - 2) if w != u] for u in range(n - 2)]
    adj.append([])
    adj.append([v])
    for w in range(h - 1):
        adj[w].append(v)
        adj[v].append(w)
    adj[v].append(tip)
    return Graph(n, adj, name="clique_hair_on_pimple",
                 meta={"n": n, "h": h, "pimple": v, "tip": tip})


def binary_tree_with_path(n, eps=0.1):
    """Complete binary tree with a path of ``ceil(n**(1/2 - eps))`` extra
    vertices hanging off the root.

    ``n = 2**k - 1`` counts the tree alone; path vertices are labelled
    from ``n`` up.
    """
    g = binary_tree(n)
    extra = int(np.ceil(n ** (0.5 - eps)))
    adj = [list(row) for row in g.adj] + [[] for _ in range(extra)]
    prev = 0
    for j in range(extra):
        w = n + j
        adj[prev].append(w)
        adj[w].append(prev)
        prev = w
    return Graph(n + extra, adj, name="binary_tree_with_path",
                 meta={"n": n, "eps": eps, "path_len": extra})


def gnp(n, p, seed=0):
    """Connected Erdos-Renyi graph.

    Samples ``G(n, p)`` under sub-seeds ``(seed, 0), (seed, 1), ...``
    until the draw is connected; the number of rejected draws is recorded
    in ``meta['retries']``.
    """
    if n < 2 or not 0.0 < p <= 1.0:
        raise ValueError("gnp needs n >= 2 and p in (0, 1]")
    from . import rng

    for attempt in range(1000):
        gen = np.random.Generator(np.random.Philox(rng.child(seed, attempt)))
        mask = gen.random((n, n)) < p
        adj = [[] for _ in range(n)]
        for v in range(n):
            for w in range(v + 1, n):
                if mask[v, w]:
                    adj[v].append(w)
                    adj[w].append(v)
        try:
            return Graph(n, adj, name="gnp",
                         meta={"n": n, "p": p, "seed": seed,
                               "retries": attempt})
        except ValueError:
            continue
    raise ValueError(f"gnp({n}, {p}) produced no connected draw in 1000 tries")


def random_regular(n, d, seed=0):
    """Connected random ``d``-regular graph by the pairing model.

    Stubs are shuffled and paired under sub-seeds ``(seed, 0), (seed,
    1), ...``; draws with self-loops, repeated edges, or a disconnected
    result are rejected.  Expected rejections grow like ``e**(d*d/4)``,
    so keep ``d`` small; retries end up in ``meta['retries']``.
    """
    if n < d + 1 or d < 1 or (n * d) % 2:
        raise ValueError("random_regular needs n > d >= 1 and n*d even")
    from . import rng

    for attempt in range(50000):
        gen = np.random.Generator(np.random.Philox(rng.child(seed, attempt)))
        stubs = np.repeat(np.arange(n), d)
        gen.shuffle(stubs)
        u = np.minimum(stubs[0::2], stubs[1::2])
        w = np.maximum(stubs[0::2], stubs[1::2])
        if (u == w).any() or len(np.unique(u * n + w)) < len(u):
            continue
        adj = [[] for _ in range(n)]
        for a, b in zip(u, w):
            adj[a].append(int(b))
            adj[b].append(int(a))
        try:
            return Graph(n, adj, name="random_regular",
                         meta={"n": n, "d": d, "seed": seed,
                               "retries": attempt})
        except ValueError:
            continue
    raise ValueError(f"random_regular({n}, {d}) failed to produce a "
                     "simple connected draw")


def from_edge_list(text):
    """Graph from an edge-list description.

    First line is the vertex count; each further non-empty line is an
    edge ``u v``.  A line ``u u`` adds one self-loop; repeat it for
    higher multiplicity.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge list")
    n = int(lines[0])
    adj = [[] for _ in range(n)]
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        adj[u].append(v)
        if u != v:
            adj[v].append(u)
    return Graph(n, adj, name="custom", meta={"n": n})


# --- CLI spec strings ----------------------------------------------------

FAMILIES = {
    "complete": complete,
    "path": path,
    "cycle": cycle,
    "star": star,
    "binary_tree": binary_tree,
    "hypercube": hypercube,
    "torus": torus,
    "grid": grid,
    "lollipop": lollipop,
    "clique_with_hair": clique_with_hair,
    "clique_hair_on_pimple": clique_hair_on_pimple,
    "binary_tree_with_path": binary_tree_with_path,
    "tree_with_path": binary_tree_with_path,
    "gnp": gnp,
    "random_regular": random_regular,
}


def parse_spec(spec):
    """Build a graph from a CLI string like ``cycle:64`` or ``gnp:n=128,p=0.05``.

    The part before ``:`` names the family; the rest is either a bare
    integer (taken as ``n``) or comma-separated ``key=value`` pairs.
    ``custom:path=FILE`` reads an edge-list file.
    """
    fam, _, rest = spec.partition(":")
    if fam == "custom":
        key, _, fname = rest.partition("=")
        if key != "path" or not fname:
            raise ValueError("custom graph needs custom:path=FILE")
        with open(fname) as fh:
            return from_edge_list(fh.read())
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {fam!r}; "
                         f"choose from {', '.join(sorted(FAMILIES))}")
    if not rest:
        raise ValueError(f"family {fam!r} needs parameters, e.g. {fam}:16")
    kwargs = {}
    if "=" not in rest:
        kwargs["n"] = int(rest)
    else:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise ValueError(f"bad parameter {part!r} in {spec!r}")
            try:
                kwargs[key] = int(val)
            except ValueError:
                kwargs[key] = float(val)
    return FAMILIES[fam](**kwargs)

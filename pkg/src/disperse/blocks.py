"""Trajectory blocks and the cut-and-paste surgery.

A block is an irregular array: row ``i`` holds the trajectory of
particle ``i + 1`` starting at the origin, so cell ``(i, t)`` is the
particle's position after ``t`` moves.  Row 0 is always the bare origin.
The three process flavours (sequential, parallel, uniform) leave
different footprints in the same array, characterized by where first
occurrences of vertices may sit; the ``stp``/``pts``/``ptu`` transforms
carry one footprint to another through endpoint surgery while preserving
total length.

Rows, cells and vertices are all 0-indexed here.  Tick sequences select
rows ``1..n-1``; row 0 never moves.
"""

from dataclasses import dataclass
from itertools import product

from .errors import DomainError, IntegrityError


class Block:
    """Immutable-by-convention trajectory array.

    Parameters
    ----------
    origin : int
        Common starting vertex of all rows.
    rows : sequence of sequences of int
        ``rows[0]`` must equal ``[origin]``; every row must start at the
        origin and be non-empty.
    """

    __slots__ = ("origin", "rows")

    def __init__(self, origin, rows):
        self.origin = int(origin)
        self.rows = [list(map(int, r)) for r in rows]
        if not self.rows:
            raise DomainError("block needs at least one row")
        if self.rows[0] != [self.origin]:
            raise DomainError("row 0 must be exactly the origin")
        for i, r in enumerate(self.rows):
            if not r or r[0] != self.origin:
                raise DomainError(f"row {i} does not start at the origin")

    @property
    def n_rows(self):
        return len(self.rows)

    @property
    def row_lengths(self):
        """Moves per row (cells minus one)."""
        return [len(r) - 1 for r in self.rows]

    @property
    def total_length(self):
        return sum(len(r) - 1 for r in self.rows)

    @property
    def endpoints(self):
        return [r[-1] for r in self.rows]

    def copy(self):
        return Block(self.origin, [list(r) for r in self.rows])

    def __eq__(self, other):
        return (isinstance(other, Block) and self.origin == other.origin
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.origin, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Block(origin={self.origin}, rows={self.rows})"

    def to_json_dict(self, timing=None):
        d = {"origin": self.origin, "rows": [list(r) for r in self.rows]}
        if timing is not None:
            d["timing"] = [list(t) for t in timing]
        return d

    @classmethod
    def from_json_dict(cls, d):
        block = cls(d["origin"], d["rows"])
        timing = d.get("timing")
        if timing is not None:
            if [len(t) for t in timing] != [len(r) for r in block.rows]:
                raise DomainError("timing shape does not match rows")
            return block, [list(t) for t in timing]
        return block, None


def seq_cells(rows):
    """Cells in sequential reading order: row by row."""
    for i, r in enumerate(rows):
        for t in range(len(r)):
            yield i, t


def par_cells(rows):
    """Cells in parallel reading order: column by column, gaps skipped."""
    width = max(len(r) for r in rows)
    for t in range(width):
        for i, r in enumerate(rows):
            if t < len(r):
                yield i, t


@dataclass
class ValidityReport:
    ok: bool
    property_a: bool
    paths_ok: bool
    order_ok: bool
    violation: str | None = None


def check(block, graph=None, kind="any", allow_stay=False):
    """Validity report for a block.

    Parameters
    ----------
    block : Block
    graph : Graph or None
        When given, consecutive cells in a row must be adjacent in it.
        A repeated vertex needs a self-loop unless ``allow_stay`` is set
        (lazy histories hold in place without loops).
    kind : {"any", "sequential", "parallel"}
        ``sequential`` additionally demands that the first occurrence of
        every vertex in row-major reading order sits at the end of its
        row; ``parallel`` demands the same in column-major order.

    Returns
    -------
    ValidityReport
    """
    if kind not in ("any", "sequential", "parallel"):
        raise DomainError(f"unknown kind {kind!r}")
    rows = block.rows
    violation = None

    ends = block.endpoints
    property_a = len(set(ends)) == len(ends)
    if not property_a:
        dup = next(v for v in ends if ends.count(v) > 1)
        violation = f"endpoint {dup} repeats"

    paths_ok = True
    if graph is not None:
        for i, r in enumerate(rows):
            for t in range(1, len(r)):
                u, w = r[t - 1], r[t]
                if u == w and allow_stay:
                    continue
                if not 0 <= w < graph.n or w not in graph.adj[u]:
                    paths_ok = False
                    if violation is None:
                        violation = f"step {u}->{w} at cell ({i},{t}) " \
                                    f"is not an edge"
                    break
            if not paths_ok:
                break

    order_ok = True
    if kind != "any":
        reader = seq_cells if kind == "sequential" else par_cells
        seen = set()
        for i, t in reader(rows):
            v = rows[i][t]
            if v not in seen:
                seen.add(v)
                if t != len(rows[i]) - 1:
                    order_ok = False
                    if violation is None:
                        violation = (f"first occurrence of {v} at cell "
                                     f"({i},{t}) is not a row end")
                    break

    ok = property_a and paths_ok and order_ok
    return ValidityReport(ok, property_a, paths_ok, order_ok, violation)


@dataclass
class BlockStats:
    total_length: int
    max_row_length: int
    row_lengths: list
    endpoints: list


def block_stats(block):
    """Length accounting of a block."""
    lengths = block.row_lengths
    return BlockStats(sum(lengths), max(lengths), lengths, block.endpoints)


# --- surgery -------------------------------------------------------------


def _cut_paste(rows, i, t, trows=None):
    """In-place cut-and-paste at cell ``(i, t)``.

    The tail after ``(i, t)`` moves behind the unique row whose endpoint
    equals the cell's value.  ``t`` at the row end is the identity.  With
    ``trows`` given, timing tails travel along.
    """
    r = rows[i]
    if not 0 <= t < len(r):
        raise DomainError(f"cell ({i},{t}) does not exist")
    if t == len(r) - 1:
        return
    val = r[t]
    matches = [j for j, rr in enumerate(rows) if rr[-1] == val]
    if len(matches) != 1:
        raise IntegrityError(
            f"{len(matches)} rows end with {val}; cut-and-paste needs "
            "exactly one")
    k = matches[0]
    rows[k] = rows[k] + r[t + 1:]
    del r[t + 1:]
    if trows is not None:
        trows[k] = trows[k] + trows[i][t + 1:]
        del trows[i][t + 1:]


def cut_paste(block, i, t):
    """Cut-and-paste transform at cell ``(i, t)``, returning a new block.

    Preserves endpoint distinctness and total length; when ``t`` indexes
    the last cell of the row it is the identity.
    """
    rows = [list(r) for r in block.rows]
    _cut_paste(rows, i, t)
    return Block(block.origin, rows)


def _require(block, graph, kind, allow_stay):
    rep = check(block, graph, kind=kind, allow_stay=allow_stay)
    if not rep.ok:
        raise DomainError(f"input is not a valid {kind} block: "
                          f"{rep.violation}")


def stp(block, graph=None, allow_stay=False, kind="sequential"):
    """Sequential-to-parallel conversion.

    Scans cells column by column; whenever a vertex is seen for the
    first time, the tail after that cell is cut and pasted.  The result
    is the parallel block of the same total length, and its longest row
    is never shorter than the input's.

    The same scan converts a uniform history to its parallel block,
    since it never looks at tick stamps; pass ``kind="any"`` to skip the
    sequential-order precheck in that case.
    """
    _require(block, graph, kind, allow_stay)
    rows = [list(r) for r in block.rows]
    n = len(rows)
    seen = set()
    t = 0
    while len(seen) < n:
        if t > block.total_length + 1:
            raise IntegrityError("column scan ran past total length")
        for i in range(n):
            if t < len(rows[i]) and rows[i][t] not in seen:
                seen.add(rows[i][t])
                _cut_paste(rows, i, t)
        t += 1
    return Block(block.origin, rows)


def pts(block, graph=None, row_order=None, allow_stay=False):
    """Parallel-to-sequential conversion.

    Reads rows one after another (in ``row_order`` if given, which must
    fix row 0 first); the first not-yet-seen vertex in each row triggers
    a cut at its cell, after which the row is final.  Inverse of ``stp``.
    """
    _require(block, graph, "parallel", allow_stay)
    rows = [list(r) for r in block.rows]
    n = len(rows)
    if row_order is None:
        row_order = range(n)
    else:
        row_order = list(row_order)
        if sorted(row_order) != list(range(n)) or row_order[0] != 0:
            raise DomainError("row_order must permute rows and start at 0")
    seen = set()
    for i in row_order:
        for t in range(len(rows[i])):
            if rows[i][t] not in seen:
                seen.add(rows[i][t])
                _cut_paste(rows, i, t)
                break
        else:
            raise IntegrityError(f"row {i} held no unseen vertex")
    return Block(block.origin, rows)


def ptu(block, ticks, graph=None, allow_stay=False):
    """Parallel-to-uniform conversion under a tick sequence.

    ``ticks[t - 1]`` names the row whose clock fires at time ``t``
    (values ``1..n-1``; row 0 never fires).  Each firing reads the first
    unread cell of that row in its current state, stamping it with the
    time; a fully read row wastes the tick.  First-time vertices trigger
    the cut, whose unread tail migrates to another row and is read, and
    timed, there.  Inverse of ``stp`` for the tick sequence that drove
    the uniform run.

    Returns
    -------
    (Block, timing) : the uniform history and its time stamps, with
        ``timing[i][j]`` the tick at which particle ``i + 1`` made move
        ``j`` (0 for cell 0).
    """
    _require(block, graph, "parallel", allow_stay)
    rows = [list(r) for r in block.rows]
    n = len(rows)
    trows = [[0] for _ in range(n)]
    frontier = [1] * n
    seen = {rows[0][0]}
    clock = 0
    for tick in ticks:
        if len(seen) == n:
            break
        clock += 1
        i = int(tick)
        if not 1 <= i < n:
            raise DomainError(f"tick {clock} selects row {i}; "
                              "rows 1..n-1 are selectable")
        if frontier[i] >= len(rows[i]):
            continue
        t = frontier[i]
        frontier[i] += 1
        trows[i].append(clock)
        if rows[i][t] not in seen:
            seen.add(rows[i][t])
            _cut_paste(rows, i, t)
    if len(seen) < n:
        missing = {i: len(rows[i]) - frontier[i]
                   for i in range(n) if frontier[i] < len(rows[i])}
        raise DomainError(
            f"tick sequence exhausted after {clock} ticks with unread "
            f"cells per row: {missing}")
    if any(frontier[i] != len(rows[i]) for i in range(n)):
        raise IntegrityError("conversion finished with unread cells")
    return Block(block.origin, rows), trows


def permute_rows(block, order):
    """Block with rows rearranged; ``order[0]`` must be 0."""
    order = list(order)
    if sorted(order) != list(range(block.n_rows)) or order[0] != 0:
        raise DomainError("order must permute rows and keep row 0 first")
    return Block(block.origin, [block.rows[i] for i in order])


# --- exhaustive enumeration ----------------------------------------------


def _compositions(total, parts):
    # positive parts only: a zero-length row would repeat the origin
    # endpoint and fail endpoint distinctness anyway
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_blocks(graph, origin, m, kind):
    """All valid blocks of one kind with ``graph.n`` rows and length ``m``.

    Brute force: every split of ``m`` moves over rows ``1..n-1``, every
    walk of the right length per row, filtered through :func:`check`.
    Intended as an oracle on small instances; the candidate count grows
    like ``degree**m``.
    """
    n = graph.n
    if m < n - 1:
        return
    walk_cache = {0: [(origin,)]}

    def walks(length):
        if length not in walk_cache:
            out = []
            for w in walks(length - 1):
                for nxt in graph.adj[w[-1]]:
                    out.append(w + (nxt,))
            walk_cache[length] = out
        return walk_cache[length]

    for comp in _compositions(m, n - 1):
        for tail in product(*(walks(c) for c in comp)):
            rows = [[origin]] + [list(w) for w in tail]
            ends = [r[-1] for r in rows]
            if len(set(ends)) != n:
                continue
            block = Block(origin, rows)
            if check(block, graph, kind=kind).ok:
                yield block

"""Simple undirected graphs, text formats, named constructors and classical
distance-balance checks.

Vertices are always the dense integers ``0..n-1``; external labels are mapped
once, at parse time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import DisconnectedError, GraphValidationError, ParseError


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphValidationError(f"adjacency has {len(self.adj)} rows for order {self.n}")
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if v == u:
                    raise GraphValidationError(f"self-loop at vertex {u}")
                if not 0 <= v < self.n:
                    raise GraphValidationError(f"vertex {v} out of range for order {self.n}")
                if u not in self.adj[v]:
                    raise GraphValidationError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) out of range for order {n}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(s) for s in adj))

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def size(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def relabel(self, perm: list[int]) -> Graph:
        """Graph with vertex ``u`` renamed ``perm[u]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# -- edge-list text --------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (0-indexed); ``#`` comments and blank lines are skipped.

    An optional first data line ``n=<count>`` fixes the order, otherwise it is
    the largest index plus one.
    """
    declared = None
    edges = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if seen_data:
                raise ParseError("order declaration must precede edges", lineno)
            try:
                declared = int(line[2:])
            except ValueError:
                raise ParseError(f"bad order declaration {line!r}", lineno) from None
            if declared < 0:
                raise ParseError("negative order", lineno)
            seen_data = True
            continue
        seen_data = True
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex in {line!r}", lineno)
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop at vertex {u}")
        edges.append((u, v))
    inferred = max((max(e) for e in edges), default=-1) + 1
    if declared is None:
        n = inferred
    elif inferred > declared:
        raise ParseError(f"vertex {inferred - 1} exceeds declared order {declared}")
    else:
        n = declared
    return Graph.from_edges(n, edges)


def emit_edge_list(g: Graph, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append(f"n={g.n}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -- graph6 ----------------------------------------------------------------

_G6_HEADER = b">>graph6<<"


def _encode_order(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 68719476736:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in range(30, -1, -6)])
    raise GraphValidationError(f"order {n} too large for graph6")


def emit_graph6(g: Graph) -> bytes:
    """graph6 bytes for ``g`` (no header, no trailing newline)."""
    bits = [1 if i in g.adj[j] else 0 for j in range(1, g.n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    body = bytes(
        63 + int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6)
    )
    return _encode_order(g.n) + body


def parse_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii", errors="replace")
    data = data.strip()
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):]
    if not data:
        raise ParseError("empty graph6 record")
    bad = [c for c in data if not 63 <= c <= 126]
    if bad:
        raise ParseError(f"graph6 character {bad[0]!r} outside [63,126]")
    vals = [c - 63 for c in data]
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] != 63:
        if len(vals) < 4:
            raise ParseError("truncated graph6 order")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    else:
        if len(vals) < 8:
            raise ParseError("truncated graph6 order")
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    nbits = n * (n - 1) // 2
    body = vals[pos:]
    if len(body) != -(-nbits // 6):
        raise ParseError(f"graph6 body has {len(body)} characters, expected {-(-nbits // 6)}")
    bits = []
    for v in body:
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise ParseError("nonzero graph6 padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


# -- named graphs ----------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphValidationError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def wheel(n: int) -> Graph:
    """Hub 0 joined to every vertex of the cycle 1..n-1 (n vertices in total)."""
    if n < 4:
        raise GraphValidationError("wheel needs n >= 4")
    rim = [(i, i % (n - 1) + 1) for i in range(1, n)]
    return Graph.from_edges(n, rim + [(0, i) for i in range(1, n)])


def generalized_petersen(n: int, k: int) -> Graph:
    """Outer cycle 0..n-1, spokes i -- n+i, inner edges n+i -- n+(i+k mod n)."""
    if n < 3 or not 1 <= k or 2 * k >= n:
        raise GraphValidationError(f"generalized_petersen needs n >= 3 and 1 <= k < n/2, got ({n}, {k})")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return Graph.from_edges(2 * n, edges)


def hypercube(d: int) -> Graph:
    n = 1 << d
    return Graph.from_edges(n, ((v, v ^ (1 << b)) for v in range(n) for b in range(d) if not v >> b & 1))


def _bundled(name: str) -> Graph:
    try:
        text = resources.files("tsbalance").joinpath(f"data/{name}.edges").read_text()
    except FileNotFoundError:
        raise GraphValidationError(f"bundled data file for {name!r} is missing") from None
    return parse_edge_list(text)


_BUILTINS = {
    "complete": (complete, 1),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "wheel": (wheel, 1),
    "generalized_petersen": (generalized_petersen, 2),
    "gp": (generalized_petersen, 2),
    "hypercube": (hypercube, 1),
    "h9": (lambda: _bundled("h9"), 0),
    "handa24": (lambda: _bundled("handa24"), 0),
}


def builtin(name: str, *params: int) -> Graph:
    """Named graph, e.g. ``builtin("wheel", 7)`` or ``builtin("h9")``."""
    try:
        ctor, arity = _BUILTINS[name]
    except KeyError:
        raise GraphValidationError(
            f"unknown builtin graph {name!r}; choose from {', '.join(sorted(_BUILTINS))}"
        ) from None
    if len(params) != arity:
        raise GraphValidationError(f"builtin {name!r} takes {arity} parameter(s), got {len(params)}")
    return ctor(*params)


# -- distances -------------------------------------------------------------

def _adjacency_matrix(g: Graph) -> csr_matrix:
    rows = [u for u in range(g.n) for _ in g.adj[u]]
    cols = [v for u in range(g.n) for v in g.adj[u]]
    return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(g.n, g.n))


def apsp(g: Graph) -> np.ndarray:
    """All-pairs hop distances as a read-only integer matrix.

    Raises DisconnectedError naming an unreachable pair.
    """
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int32)
    raw = shortest_path(_adjacency_matrix(g), directed=False, unweighted=True)
    unreachable = np.argwhere(np.isinf(raw))
    if len(unreachable):
        u, v = unreachable[0]
        raise DisconnectedError(int(u), int(v))
    dist = raw.astype(np.int32)
    dist.flags.writeable = False
    return dist


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    return False
    return True


class Classification(NamedTuple):
    connected: bool
    bipartite: bool
    regular: int | None
    degree_sequence: tuple[int, ...]


def classify(g: Graph) -> Classification:
    """``regular`` holds the common degree, or None for non-regular graphs."""
    degs = tuple(sorted((g.degree(u) for u in range(g.n)), reverse=True))
    regular = degs[0] if degs and degs[0] == degs[-1] else None
    return Classification(is_connected(g), is_bipartite(g), regular, degs)


# -- classical balance -----------------------------------------------------

class EdgeBalance(NamedTuple):
    u: int
    v: int
    closer_to_u: int
    closer_to_v: int


def edge_balance(g: Graph, dist: np.ndarray, u: int, v: int) -> EdgeBalance:
    if not g.has_edge(u, v):
        raise GraphValidationError(f"vertices {u} and {v} are not adjacent")
    du, dv = dist[:, u], dist[:, v]
    return EdgeBalance(u, v, int((du < dv).sum()), int((dv < du).sum()))


def _balances(g: Graph, dist: np.ndarray | None) -> list[EdgeBalance]:
    if dist is None:
        dist = apsp(g)
    edges = np.array(g.edges(), dtype=np.intp).reshape(-1, 2)
    if not len(edges):
        return []
    du = dist[:, edges[:, 0]]
    dv = dist[:, edges[:, 1]]
    wu = (du < dv).sum(axis=0)
    wv = (dv < du).sum(axis=0)
    return [EdgeBalance(int(a), int(b), int(x), int(y)) for (a, b), x, y in zip(edges, wu, wv)]


def is_distance_balanced(g: Graph, dist: np.ndarray | None = None) -> bool:
    return all(b.closer_to_u == b.closer_to_v for b in _balances(g, dist))


def is_nicely_distance_balanced(g: Graph, dist: np.ndarray | None = None) -> bool:
    counts = {(b.closer_to_u, b.closer_to_v) for b in _balances(g, dist)}
    return len(counts) <= 1 and all(a == b for a, b in counts)


def total_distance(g: Graph, u: int, dist: np.ndarray | None = None) -> Fraction:
    """Normalized total distance: mean distance from ``u`` to every vertex."""
    if dist is None:
        dist = apsp(g)
    return Fraction(int(dist[u].sum()), g.n)


def median_vertices(g: Graph, dist: np.ndarray | None = None) -> frozenset[int]:
    if dist is None:
        dist = apsp(g)
    sums = dist.sum(axis=1)
    return frozenset(int(u) for u in np.flatnonzero(sums == sums.min()))

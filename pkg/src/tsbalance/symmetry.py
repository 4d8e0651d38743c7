"""Automorphism orbits and the search for vertices that share a total distance
vector without being related by an automorphism.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .balance import TotalDistanceVector, _vector_from_dist
from .errors import GuardError, TsbError
from .graph import Graph, apsp, emit_graph6, is_connected, parse_graph6
from .walks import max_n_guard

log = logging.getLogger(__name__)

MAX_ORBIT_N = 20


def _refined_colors(dist: np.ndarray) -> list[int]:
    """Vertex colours from the sorted distance row, refined once by neighbours' colours."""
    n = dist.shape[0]
    base = [tuple(sorted(int(d) for d in dist[v])) for v in range(n)]
    keys = [
        (base[v], tuple(sorted((int(dist[v, w]), base[w]) for w in range(n))))
        for v in range(n)
    ]
    ids = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [ids[k] for k in keys]


def _find_automorphism(dist: np.ndarray, colors: list[int], u: int, v: int) -> list[int] | None:
    """A distance-preserving bijection sending u to v, or None."""
    n = dist.shape[0]
    # map vertices near u first so distance constraints bite early
    order = sorted(range(n), key=lambda w: (int(dist[u, w]), w))
    image = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        a = order[pos]
        mapped = order[:pos]
        for b in (v,) if pos == 0 else range(n):
            if used[b] or colors[b] != colors[a]:
                continue
            if any(dist[a, c] != dist[b, image[c]] for c in mapped):
                continue
            image[a] = b
            used[b] = True
            if extend(pos + 1):
                return True
            used[b] = False
            image[a] = -1
        return False

    return list(image) if extend(0) else None


def automorphism_orbits(g: Graph, max_n: int = MAX_ORBIT_N) -> list[frozenset[int]]:
    """Orbits of Aut(g), sorted by smallest member."""
    if g.n > max_n:
        raise GuardError(f"order {g.n} exceeds the orbit guard {max_n}")
    if g.n == 0:
        return []
    dist = _distances_or_components(g)
    colors = _refined_colors(dist)
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in range(g.n):
        reps = sorted({find(u) for u in range(v)})
        for r in reps:
            if find(v) == find(r):
                break
            if colors[r] != colors[v]:
                continue
            phi = _find_automorphism(dist, colors, r, v)
            if phi is None:
                continue
            for a, b in enumerate(phi):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            break
    classes: dict[int, set[int]] = {}
    for a in range(g.n):
        classes.setdefault(find(a), set()).add(a)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def _distances_or_components(g: Graph) -> np.ndarray:
    """Distance matrix; unreachable pairs get distance n (still automorphism-invariant)."""
    if is_connected(g):
        return apsp(g)
    from scipy.sparse.csgraph import shortest_path

    from .graph import _adjacency_matrix

    raw = shortest_path(_adjacency_matrix(g), directed=False, unweighted=True)
    raw[np.isinf(raw)] = g.n
    return raw.astype(np.int32)


def is_vertex_transitive(g: Graph, max_n: int = MAX_ORBIT_N) -> bool:
    return len(automorphism_orbits(g, max_n)) <= 1


# -- counterexample search -------------------------------------------------

@dataclass(frozen=True)
class SearchHit:
    graph6: str
    u: int
    v: int
    vector: TotalDistanceVector
    orbit_u: tuple[int, ...]
    orbit_v: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "graph6": self.graph6,
            "u": self.u,
            "v": self.v,
            "vector": list(self.vector),
            "orbit_u": list(self.orbit_u),
            "orbit_v": list(self.orbit_v),
        }


@dataclass
class SearchStats:
    processed: int = 0
    skipped: int = 0
    hits: int = 0
    skipped_reasons: dict[str, int] = field(default_factory=dict)

    def skip(self, reason: str) -> None:
        self.skipped += 1
        self.skipped_reasons[reason] = self.skipped_reasons.get(reason, 0) + 1

    def to_json(self) -> dict:
        return {"processed": self.processed, "skipped": self.skipped, "hits": self.hits}


def graph_hits(g: Graph, max_n: int | None = None) -> list[SearchHit]:
    """Cross-orbit vertex pairs of ``g`` with equal total distance vectors.

    One hit per pair of orbits, reported on the orbits' smallest vertices.
    """
    limit = min(max_n_guard(max_n), MAX_ORBIT_N)
    if g.n > limit:
        raise GuardError(f"order {g.n} exceeds the search guard {limit}")
    orbits = automorphism_orbits(g)
    if len(orbits) < 2:
        return []
    dist = apsp(g)
    reps = [min(o) for o in orbits]
    # W_0 is the total distance, so only equal totals can collide
    groups: dict[int, list[int]] = {}
    for i, r in enumerate(reps):
        groups.setdefault(int(dist[r].sum()), []).append(i)
    hits = []
    code = None
    for members in groups.values():
        if len(members) < 2:
            continue
        vecs = {i: _vector_from_dist(dist, reps[i]) for i in members}
        for a_pos, a in enumerate(members):
            for b in members[a_pos + 1:]:
                if vecs[a] == vecs[b]:
                    if code is None:
                        code = emit_graph6(g).decode("ascii")
                    hits.append(SearchHit(
                        graph6=code,
                        u=reps[a],
                        v=reps[b],
                        vector=vecs[a],
                        orbit_u=tuple(sorted(orbits[a])),
                        orbit_v=tuple(sorted(orbits[b])),
                    ))
    return sorted(hits, key=lambda h: (h.u, h.v))


def search_counterexamples(
    lines: Iterable[str | bytes], stats: SearchStats | None = None, max_n: int | None = None
) -> Iterator[SearchHit]:
    """Stream hits over graph6 records; bad records are counted and skipped."""
    if stats is None:
        stats = SearchStats()
    for lineno, line in enumerate(lines, start=1):
        if isinstance(line, bytes):
            line = line.decode("ascii", errors="replace")
        line = line.strip()
        if not line:
            continue
        try:
            g = parse_graph6(line)
        except TsbError as exc:
            log.warning("record %d skipped: %s", lineno, exc)
            stats.skip("malformed")
            continue
        if not is_connected(g) or g.n == 0:
            stats.skip("disconnected")
            continue
        try:
            found = graph_hits(g, max_n)
        except GuardError:
            stats.skip("guard")
            continue
        stats.processed += 1
        for hit in found:
            stats.hits += 1
            yield hit

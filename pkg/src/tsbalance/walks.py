"""Shortest visiting walks.

``rho(g, A, u, v)`` is the length of a shortest walk from ``u`` to ``v`` that
passes through every vertex of ``A``.  Walks may revisit vertices, so an
optimal walk is a concatenation of geodesics between consecutive required
vertices; everything here works on the distance matrix (the metric closure)
with a Held-Karp style subset recursion.

Subsets are bitmasks: bit ``i`` set means vertex ``i`` is required.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import GraphValidationError, GuardError
from .graph import Graph, apsp

DEFAULT_MAX_N = 20

# Larger than any real entry (entries stay below n^2 <= 400 under the guard).
_INF = np.int32(1 << 20)


def max_n_guard(max_n: int | None = None) -> int:
    if max_n is not None:
        return max_n
    return int(os.environ.get("TSB_MAX_N", DEFAULT_MAX_N))


def check_order(g: Graph, max_n: int | None = None) -> None:
    limit = max_n_guard(max_n)
    if g.n > limit:
        raise GuardError(f"order {g.n} exceeds the walk guard {limit} (raise --max-n / TSB_MAX_N)")


def to_mask(a: Iterable[int] | int, n: int) -> int:
    if isinstance(a, (int, np.integer)):
        mask = int(a)
        if mask < 0 or mask >> n:
            raise GraphValidationError(f"subset mask {mask:#x} has bits outside 0..{n - 1}")
        return mask
    mask = 0
    for i in a:
        if not 0 <= i < n:
            raise GraphValidationError(f"vertex {i} out of range for order {n}")
        mask |= 1 << i
    return mask


def mask_members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def rho_from_dist(dist: np.ndarray, mask: int, u: int, v: int) -> int:
    """rho on a precomputed distance matrix; small DP over the members of ``mask``."""
    req = mask_members(mask)
    k = len(req)
    if k == 0:
        return int(dist[u, v])
    d = [[int(dist[a, b]) for b in req] for a in req]
    # best[s][j]: start at u, visit subset s of req, stand on req[j]
    best = [[None] * k for _ in range(1 << k)]
    for j in range(k):
        best[1 << j][j] = int(dist[u, req[j]])
    for s in range(1, 1 << k):
        row = best[s]
        for j in range(k):
            c = row[j]
            if c is None:
                continue
            for t in range(k):
                if s >> t & 1:
                    continue
                s2 = s | (1 << t)
                cand = c + d[j][t]
                if best[s2][t] is None or cand < best[s2][t]:
                    best[s2][t] = cand
    full = best[(1 << k) - 1]
    return min(full[j] + int(dist[req[j], v]) for j in range(k))


def rho(g: Graph, a: Iterable[int] | int, u: int, v: int, dist: np.ndarray | None = None) -> int:
    """Length of a shortest ``u``-``v`` walk visiting every vertex in ``a``."""
    mask = to_mask(a, g.n)
    for w in (u, v):
        if not 0 <= w < g.n:
            raise GraphValidationError(f"vertex {w} out of range for order {g.n}")
    if dist is None:
        dist = apsp(g)
    return rho_from_dist(dist, mask, u, v)


# -- batched tables --------------------------------------------------------

class _Layout:
    """Masks grouped by popcount plus the position of every mask in its layer."""

    _cache: dict[int, _Layout] = {}

    def __init__(self, n: int):
        all_masks = np.arange(1 << n, dtype=np.int64)
        pc = np.zeros(1 << n, dtype=np.int64)
        for b in range(n):
            pc += (all_masks >> b) & 1
        self.layers = [np.flatnonzero(pc == k) for k in range(n + 1)]
        self.pos = np.empty(1 << n, dtype=np.int64)
        for layer in self.layers:
            self.pos[layer] = np.arange(len(layer))
        # members[k][j]: boolean column "mask has bit j" for masks of layer k
        self.members = [np.stack([(layer >> j) & 1 == 1 for j in range(n)], axis=1) if n else None
                        for layer in self.layers]

    @classmethod
    def get(cls, n: int) -> _Layout:
        if n not in cls._cache:
            cls._cache[n] = cls(n)
        return cls._cache[n]


def walk_layers(dist: np.ndarray, u: int) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(k, masks, cost)`` for k = 1..n in increasing order.

    ``cost[r, j]`` is the shortest walk from ``u`` visiting every vertex of
    ``masks[r]`` and ending at ``j`` (``_INF`` when ``j`` is not in the mask).
    Only the previous layer is kept alive.
    """
    n = dist.shape[0]
    lay = _Layout.get(n)
    dist = np.asarray(dist, dtype=np.int32)
    prev = None
    for k in range(1, n + 1):
        masks = lay.layers[k]
        cost = np.full((len(masks), n), _INF, dtype=np.int32)
        if k == 1:
            for j in range(n):
                cost[lay.pos[1 << j], j] = dist[u, j]
        else:
            member = lay.members[k]
            for j in range(n):
                sel = member[:, j]
                rows = lay.pos[masks[sel] ^ (1 << j)]
                cost[sel, j] = (prev[rows] + dist[:, j]).min(axis=1)
        yield k, masks, cost
        prev = cost


def endpoint_rows(cost: np.ndarray, dist: np.ndarray) -> np.ndarray:
    """rho_S(u, v) for every row S of a layer and every endpoint v."""
    out = np.full((cost.shape[0], dist.shape[0]), _INF, dtype=np.int32)
    for j in range(dist.shape[0]):
        np.minimum(out, cost[:, j, None] + dist[j], out=out)
    return out


@dataclass(frozen=True)
class WalkCostTable:
    """Per-source table: ``cost[S, j]`` for every nonempty mask S and j in S.

    Row 0 (the empty mask) holds the geodesic row ``d(source, .)``.
    Entries for ``j`` outside ``S`` are a large sentinel.
    """

    source: int
    dist: np.ndarray
    cost: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def cost_at(self, a: Iterable[int] | int, j: int) -> int:
        mask = to_mask(a, self.n)
        if mask and not mask >> j & 1:
            raise GraphValidationError(f"end vertex {j} is not in the visit set")
        if not mask:
            return int(self.dist[self.source, j])
        return int(self.cost[mask, j])

    def row(self, a: Iterable[int] | int) -> np.ndarray:
        """rho_A(source, v) for every v."""
        mask = to_mask(a, self.n)
        if not mask:
            return self.dist[self.source].copy()
        return endpoint_rows(self.cost[mask:mask + 1], self.dist)[0]

    def rho(self, a: Iterable[int] | int, v: int) -> int:
        return int(self.row(a)[v])

    def rho_matrix(self) -> np.ndarray:
        """rho_S(source, v) for every mask S (row) and endpoint v (column)."""
        # row 0 holds d(source, .), which endpoint_rows maps to itself
        return endpoint_rows(self.cost, self.dist)


def rho_table(g: Graph, u: int, max_n: int | None = None, dist: np.ndarray | None = None) -> WalkCostTable:
    check_order(g, max_n)
    if dist is None:
        dist = apsp(g)
    n = g.n
    full = np.full((1 << n, n), _INF, dtype=np.int32)
    full[0] = dist[u]
    for _, masks, cost in walk_layers(dist, u):
        full[masks] = cost
    full.flags.writeable = False
    return WalkCostTable(u, dist, full)


def _closed_full_walk(dist: np.ndarray, u: int) -> np.ndarray:
    """rho_{V}(u, v) for all v."""
    for k, _, cost in walk_layers(dist, u):
        if k == dist.shape[0]:
            return endpoint_rows(cost, dist)[0]
    raise AssertionError("unreachable")


def is_hamiltonian(g: Graph, max_n: int | None = None) -> bool:
    if g.n < 3:
        raise GraphValidationError("Hamiltonicity is defined here for n >= 3")
    check_order(g, max_n)
    dist = apsp(g)
    return int(_closed_full_walk(dist, 0)[0]) == g.n


def is_hamilton_connected(g: Graph, max_n: int | None = None) -> bool:
    check_order(g, max_n)
    dist = apsp(g)
    for u in range(g.n):
        row = _closed_full_walk(dist, u)
        if any(int(row[v]) != g.n - 1 for v in range(g.n) if v != u):
            return False
    return True

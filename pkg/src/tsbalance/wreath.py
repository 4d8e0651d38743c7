"""Wreath (lamplighter) products G wr H.

A vertex is a lamp colouring ``y`` (one H-vertex per G-vertex) together with
the lamplighter position ``x`` in G.  The integer code is

    idx = x * m**n + sum_i y[i] * m**i

so lamp i is the i-th base-m digit and the position is the top digit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .balance import combine, is_pts_distance_balanced, total_distance_vector
from .errors import GraphValidationError, GuardError
from .graph import Graph, apsp, is_distance_balanced
from .walks import check_order, rho_from_dist, rho_table

DEFAULT_MAX_PRODUCT = 100_000


def product_guard(size_guard: int | None = None) -> int:
    if size_guard is not None:
        return size_guard
    return int(os.environ.get("TSB_MAX_PRODUCT", DEFAULT_MAX_PRODUCT))


class WreathVertex(NamedTuple):
    coloring: tuple[int, ...]
    position: int


@dataclass(frozen=True)
class WreathCodec:
    n: int  # order of the base graph G
    m: int  # order of the colour graph H

    @property
    def order(self) -> int:
        return self.n * self.m**self.n

    def encode(self, w: WreathVertex | tuple[Sequence[int], int]) -> int:
        coloring, x = w
        if len(coloring) != self.n:
            raise GraphValidationError(f"colouring has {len(coloring)} lamps, expected {self.n}")
        if not 0 <= x < self.n:
            raise GraphValidationError(f"position {x} out of range")
        idx = 0
        for y in reversed(coloring):
            if not 0 <= y < self.m:
                raise GraphValidationError(f"colour {y} out of range")
            idx = idx * self.m + y
        return x * self.m**self.n + idx

    def decode(self, idx: int) -> WreathVertex:
        if not 0 <= idx < self.order:
            raise GraphValidationError(f"index {idx} out of range for order {self.order}")
        x, rest = divmod(idx, self.m**self.n)
        coloring = []
        for _ in range(self.n):
            rest, y = divmod(rest, self.m)
            coloring.append(y)
        return WreathVertex(tuple(coloring), x)

    def describe(self) -> str:
        return (
            f"wreath codec: n={self.n} m={self.m}; "
            f"idx = x*{self.m}^{self.n} + sum_i y_i*{self.m}^i (lamp i = base-{self.m} digit i, position = top digit)"
        )


def wreath_product(g: Graph, h: Graph, size_guard: int | None = None) -> tuple[Graph, WreathCodec]:
    codec = WreathCodec(g.n, h.n)
    limit = product_guard(size_guard)
    if codec.order > limit:
        raise GuardError(f"wreath product order {codec.order} exceeds the size guard {limit} (raise --max-product)")
    n, m = g.n, h.n
    top = m**n
    place = [m**i for i in range(n)]
    adj: list[list[int]] = [[] for _ in range(codec.order)]
    for idx in range(codec.order):
        x, rest = divmod(idx, top)
        y = rest // place[x] % m
        # type I: recolour the lamp under the lamplighter along an H-edge
        for y2 in h.adj[y]:
            adj[idx].append(idx + (y2 - y) * place[x])
        # type II: move the lamplighter along a G-edge
        for x2 in g.adj[x]:
            adj[idx].append(idx + (x2 - x) * top)
    return Graph(codec.order, tuple(frozenset(a) for a in adj)), codec


def _as_vertex(codec: WreathCodec, w: WreathVertex | tuple | int) -> WreathVertex:
    if isinstance(w, (int, np.integer)):
        return codec.decode(int(w))
    coloring, x = w
    codec.encode((coloring, x))  # range checks
    return WreathVertex(tuple(coloring), x)


def wreath_distance(
    g: Graph,
    h: Graph,
    u: WreathVertex | tuple | int,
    v: WreathVertex | tuple | int,
    g_dist: np.ndarray | None = None,
    h_dist: np.ndarray | None = None,
) -> int:
    """Distance in G wr H from the factors alone; the product is never built."""
    codec = WreathCodec(g.n, h.n)
    (ys, x), (ys2, x2) = _as_vertex(codec, u), _as_vertex(codec, v)
    if g_dist is None:
        g_dist = apsp(g)
    if h_dist is None:
        h_dist = apsp(h)
    lamp_cost = 0
    differ = 0
    for i, (a, b) in enumerate(zip(ys, ys2)):
        if a != b:
            lamp_cost += int(h_dist[a, b])
            differ |= 1 << i
    return lamp_cost + rho_from_dist(g_dist, differ, x, x2)


def wreath_distances_from(
    g: Graph, h: Graph, u: WreathVertex | tuple | int, max_n: int | None = None
) -> np.ndarray:
    """Distances from ``u`` to every product vertex (indexed by code), by the
    same closed form as :func:`wreath_distance`, vectorized over targets."""
    codec = WreathCodec(g.n, h.n)
    ys, x = _as_vertex(codec, u)
    g_dist, h_dist = apsp(g), apsp(h)
    n, m = g.n, h.n
    x2, rest = np.divmod(np.arange(codec.order, dtype=np.int64), m**n)
    lamps = np.zeros(codec.order, dtype=np.int64)
    differ = np.zeros(codec.order, dtype=np.int64)
    for i in range(n):
        rest, y = np.divmod(rest, m)
        lamps += h_dist[ys[i], y]
        differ |= (y != ys[i]).astype(np.int64) << i
    walks = rho_table(g, x, max_n, g_dist).rho_matrix()
    return lamps + walks[differ, x2]


def lamp_probability(h: Graph) -> Fraction:
    """p = (m-1)/m: chance that a uniformly random lamp differs from a fixed one."""
    return Fraction(h.n - 1, h.n)


def wreath_total_distance(g: Graph, h: Graph, u: WreathVertex | tuple | int, max_n: int | None = None) -> Fraction:
    """Normalized total distance of ``u`` in G wr H via factor quantities."""
    check_order(g, max_n)
    codec = WreathCodec(g.n, h.n)
    ys, x = _as_vertex(codec, u)
    h_dist = apsp(h)
    lamps = sum((Fraction(int(h_dist[y].sum()), h.n) for y in ys), Fraction(0))
    p = lamp_probability(h)
    return lamps + combine(total_distance_vector(g, x, max_n), p) / g.n


@dataclass(frozen=True)
class WreathBalanceCheck:
    product_db: bool
    factor_pts_db: bool
    factor_h_db: bool
    theorem_consistent: bool
    product_order: int
    p: Fraction


def check_wreath_balance(
    g: Graph, h: Graph, size_guard: int | None = None, max_n: int | None = None
) -> WreathBalanceCheck:
    """Compare factor-level prediction with a direct check on the built product."""
    p = lamp_probability(h)
    factor_pts = is_pts_distance_balanced(g, p, max_n)
    factor_h = is_distance_balanced(h)
    product, codec = wreath_product(g, h, size_guard)
    product_db = is_distance_balanced(product)
    return WreathBalanceCheck(
        product_db=product_db,
        factor_pts_db=factor_pts,
        factor_h_db=factor_h,
        theorem_consistent=(factor_pts and factor_h) == product_db,
        product_order=codec.order,
        p=p,
    )

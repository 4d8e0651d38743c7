"""Expected visiting-walk distances and TS-type balance certification.

A vertex ``u`` of a graph of order n gets a total distance vector
``W(u) = (W_0, ..., W_n)`` with ``W_k = sum_{|A|=k} sum_v rho_A(u, v)``.  For a
probability p (each vertex required independently with probability p, target
uniform) the expected walk length is

    d^p(u) = (1/n) * sum_k p^k (1-p)^(n-k) W_k

so every question about a fixed p, or about all p at once, reduces to the
integer vectors and the degree-n polynomial ``P_u(x) = sum_k W_k x^k (1-x)^(n-k)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import GraphValidationError
from .exact import IdenticallyZero, IntPolynomial, RootSet, isolate_roots, poly_from_vector, poly_gcd
from .graph import Graph, apsp, is_distance_balanced
from .walks import check_order, endpoint_rows, walk_layers

ALL = "all"

TotalDistanceVector = tuple[int, ...]


def as_probability(p: Fraction | int | str) -> Fraction:
    """Exact probability in [0, 1]; strings must be ``num/den``, ``0`` or ``1``."""
    if isinstance(p, float):
        raise ValueError(f"probability {p!r} must be exact; pass a Fraction or 'num/den'")
    if isinstance(p, str):
        if any(c in p for c in ".eE"):
            try:
                hint = f"write it as {Fraction(p)}"
            except ValueError:
                hint = "write it as num/den"
            raise ValueError(f"decimal probability {p!r} rejected; {hint}")
        try:
            p = Fraction(p)
        except ValueError:
            raise ValueError(f"cannot parse probability {p!r}; expected num/den") from None
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


def _vector_from_dist(dist: np.ndarray, u: int) -> TotalDistanceVector:
    n = dist.shape[0]
    out = [int(dist[u].sum())]
    for _, _, cost in walk_layers(dist, u):
        # int64 sum: entries < n^2 and at most 2^n rows
        out.append(int(endpoint_rows(cost, dist).sum(dtype=np.int64)))
    assert len(out) == n + 1
    return tuple(out)


def total_distance_vector(g: Graph, u: int, max_n: int | None = None) -> TotalDistanceVector:
    check_order(g, max_n)
    if not 0 <= u < g.n:
        raise GraphValidationError(f"vertex {u} out of range for order {g.n}")
    return _vectors(g)[u]


def total_distance_vectors(
    g: Graph, max_n: int | None = None, threads: int | None = None
) -> tuple[TotalDistanceVector, ...]:
    """Vectors for every vertex; sources are independent and may run on a thread pool."""
    check_order(g, max_n)
    if threads is None or threads <= 1:
        return _vectors(g)
    dist = apsp(g)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return tuple(pool.map(lambda u: _vector_from_dist(dist, u), range(g.n)))


@lru_cache(maxsize=64)
def _vectors(g: Graph) -> tuple[TotalDistanceVector, ...]:
    dist = apsp(g)
    return tuple(_vector_from_dist(dist, u) for u in range(g.n))


def weight(p: Fraction, n: int, k: int) -> Fraction:
    """Probability of one particular k-subset of an n-set: p^k (1-p)^(n-k)."""
    return p**k * (1 - p) ** (n - k)


def combine(vector: TotalDistanceVector, p: Fraction) -> Fraction:
    """n * d^p(u) from the vector of u."""
    n = len(vector) - 1
    return sum((weight(p, n, k) * w for k, w in enumerate(vector)), Fraction(0))


def expected_distance(g: Graph, u: int, p: Fraction | int | str, max_n: int | None = None) -> Fraction:
    p = as_probability(p)
    return combine(total_distance_vector(g, u, max_n), p) / g.n


def balance_polynomial(g: Graph, u: int, max_n: int | None = None) -> IntPolynomial:
    """P_u with P_u(p) = n * d^p(u)."""
    return poly_from_vector(total_distance_vector(g, u, max_n))


def edge_walk_counts(
    g: Graph, edges: list[tuple[int, int]] | None = None, max_n: int | None = None
) -> dict[tuple[int, int], tuple[list[int], list[int]]]:
    """Per-cardinality counts behind the edge weights, by literal classification.

    For each edge (u, v) returns ``(cu, cv)`` where ``cu[k]`` counts pairs
    (A, z) with |A| = k and rho_A(z, u) < rho_A(z, v), and ``cv[k]`` the
    mirror.  Every z runs its own walk DP once, shared by all edges.
    """
    check_order(g, max_n)
    if edges is None:
        edges = g.edges()
    for u, v in edges:
        if not g.has_edge(u, v):
            raise GraphValidationError(f"vertices {u} and {v} are not adjacent")
    dist = apsp(g)
    n = g.n
    out = {}
    for u, v in edges:
        cu = [0] * (n + 1)
        cv = [0] * (n + 1)
        cu[0] = int((dist[:, u] < dist[:, v]).sum())
        cv[0] = int((dist[:, v] < dist[:, u]).sum())
        out[(u, v)] = (cu, cv)
    if not edges:
        return out
    us = np.array([e[0] for e in edges])
    vs = np.array([e[1] for e in edges])
    for z in range(n):
        for k, _, cost in walk_layers(dist, z):
            rows = endpoint_rows(cost, dist)
            at_u, at_v = rows[:, us], rows[:, vs]
            closer_u = (at_u < at_v).sum(axis=0)
            closer_v = (at_v < at_u).sum(axis=0)
            for i, e in enumerate(edges):
                out[e][0][k] += int(closer_u[i])
                out[e][1][k] += int(closer_v[i])
    return out


def w_p_edges(
    g: Graph, p: Fraction | int | str, max_n: int | None = None, counts: dict | None = None
) -> dict[tuple[int, int], tuple[Fraction, Fraction]]:
    """(w^p_uv, w^p_vu) for every edge: expected sizes of the sets of z with
    rho_A(z, u) < rho_A(z, v) and of the mirror set, A random with rate p.

    ``counts`` may carry a previous :func:`edge_walk_counts` result so several
    p values share one DP pass.
    """
    p = as_probability(p)
    n = g.n
    weights = [weight(p, n, k) for k in range(n + 1)]
    if counts is None:
        counts = edge_walk_counts(g, max_n=max_n)
    result = {}
    for e, (cu, cv) in counts.items():
        result[e] = (
            sum((w * c for w, c in zip(weights, cu)), Fraction(0)),
            sum((w * c for w, c in zip(weights, cv)), Fraction(0)),
        )
    return result


def w_p_edge(g: Graph, u: int, v: int, p: Fraction | int | str, max_n: int | None = None) -> tuple[Fraction, Fraction]:
    """(w^p_uv, w^p_vu) for one edge.

    Computed literally: every z runs its own walk DP and is classified for
    every subset A, so this does not lean on the vector shortcut.
    """
    p = as_probability(p)
    cu, cv = edge_walk_counts(g, [(u, v)], max_n)[(u, v)]
    n = g.n
    w_uv = sum((weight(p, n, k) * c for k, c in enumerate(cu)), Fraction(0))
    w_vu = sum((weight(p, n, k) * c for k, c in enumerate(cv)), Fraction(0))
    return w_uv, w_vu


def is_pts_distance_balanced_by_edges(
    g: Graph, p: Fraction | int | str, max_n: int | None = None, counts: dict | None = None
) -> bool:
    """The edge-weight definition checked directly: w^p_uv = w^p_vu on every edge."""
    return all(a == b for a, b in w_p_edges(g, p, max_n, counts).values())


def pts_median_vertices(g: Graph, p: Fraction | int | str, max_n: int | None = None) -> frozenset[int]:
    p = as_probability(p)
    check_order(g, max_n)
    values = [combine(vec, p) for vec in _vectors(g)]
    best = min(values)
    return frozenset(u for u, val in enumerate(values) if val == best)


def is_pts_distance_balanced(g: Graph, p: Fraction | int | str, max_n: int | None = None) -> bool:
    """Decided through self-median-ness: d^p constant over the vertices."""
    return len(pts_median_vertices(g, p, max_n)) == g.n


def is_ts_distance_balanced(g: Graph, max_n: int | None = None) -> bool:
    check_order(g, max_n)
    return len(set(_vectors(g))) <= 1


def _edge_differences(g: Graph) -> list[IntPolynomial]:
    polys = [poly_from_vector(vec) for vec in _vectors(g)]
    diffs = {}
    for u, v in g.edges():
        d = polys[u] - polys[v]
        if d:
            diffs[d.primitive()] = None
    return list(diffs)


def balancing_probabilities(g: Graph, max_n: int | None = None) -> Literal["all"] | RootSet:
    """Every p in [0, 1] at which ``g`` is pTS-distance-balanced.

    Returns ``ALL`` when every vertex has the same vector, otherwise the roots in
    [0, 1] of the gcd of the edge difference polynomials.
    """
    check_order(g, max_n)
    diffs = _edge_differences(g)
    if not diffs:
        return ALL
    common = diffs[0]
    for d in diffs[1:]:
        common = poly_gcd(common, d)
    if common.degree <= 0:
        return RootSet(common, Fraction(0), Fraction(1), (), ())
    try:
        roots = isolate_roots(common, 0, 1)
    except IdenticallyZero:  # pragma: no cover - diffs are nonzero
        return ALL
    # the gcd divides every difference; rational roots are re-checked anyway
    exact = tuple(r for r in roots.exact if all(d(r) == 0 for d in diffs))
    return RootSet(roots.poly, roots.lo, roots.hi, exact, roots.intervals)


@dataclass(frozen=True)
class BalanceReport:
    vectors: tuple[TotalDistanceVector, ...]
    polynomials: tuple[IntPolynomial, ...]
    distance_balanced: bool
    ts_balanced: bool
    balancing_set: Literal["all"] | RootSet = field(repr=False)

    def pts_balanced_at(self, p: Fraction | int | str) -> bool:
        p = as_probability(p)
        return len({poly(p) for poly in self.polynomials}) <= 1


def analyze(g: Graph, max_n: int | None = None, threads: int | None = None) -> BalanceReport:
    vectors = total_distance_vectors(g, max_n, threads)
    return BalanceReport(
        vectors=vectors,
        polynomials=tuple(poly_from_vector(v) for v in vectors),
        distance_balanced=is_distance_balanced(g),
        ts_balanced=len(set(vectors)) <= 1,
        balancing_set=balancing_probabilities(g, max_n),
    )

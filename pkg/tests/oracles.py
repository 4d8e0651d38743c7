"""Brute-force reference implementations, deliberately independent of the package.

Nothing here imports tsbalance internals beyond the Graph container.
"""

from collections import deque
from fractions import Fraction
from itertools import combinations, permutations


def bfs_distances(adj):
    """adj: list of neighbour collections. Returns list-of-lists distances (None if unreachable)."""
    n = len(adj)
    out = []
    for s in range(n):
        dist = [None] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] is None:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        out.append(dist)
    return out


def rho_brute(dist, visit, u, v):
    """Minimum over every ordering of the required vertices of the geodesic-segment sum."""
    visit = list(visit)
    if not visit:
        return dist[u][v]
    best = None
    for order in permutations(visit):
        total = dist[u][order[0]] + sum(dist[a][b] for a, b in zip(order, order[1:])) + dist[order[-1]][v]
        if best is None or total < best:
            best = total
    return best


def rho_brute_all(dist, visit):
    """Full n x n matrix of rho for one required set, still by enumerating every ordering.

    Each ordering's inner length is computed once and kept per (first, last)
    pair; endpoints are attached afterwards.
    """
    n = len(dist)
    visit = list(visit)
    if not visit:
        return [row[:] for row in dist]
    inner = {}
    for order in permutations(visit):
        length = sum(dist[a][b] for a, b in zip(order, order[1:]))
        key = (order[0], order[-1])
        if key not in inner or length < inner[key]:
            inner[key] = length
    return [
        [min(dist[u][f] + c + dist[l][v] for (f, l), c in inner.items()) for v in range(n)]
        for u in range(n)
    ]


def vector_brute(dist, u):
    n = len(dist)
    return tuple(
        sum(rho_brute(dist, a, u, v) for a in combinations(range(n), k) for v in range(n))
        for k in range(n + 1)
    )


def k_n_rho(n, a, u, v):
    """Closed form for complete graphs with nonempty required set a."""
    a = set(a)
    k = len(a)
    if u not in a and v not in a:
        return k + 1
    if (u in a) != (v in a):
        return k
    if u != v:
        return k - 1
    return k if k > 1 else 0


def expected_distance_by_subsets(dist, u, p):
    """Average over all 2^n subsets weighted p^|A| (1-p)^(n-|A|), uniform target."""
    n = len(dist)
    total = Fraction(0)
    for k in range(n + 1):
        w = p**k * (1 - p) ** (n - k)
        for a in combinations(range(n), k):
            total += w * sum(rho_brute(dist, a, u, v) for v in range(n))
    return total / n


def sign_changes_on_grid(coeffs, samples):
    """Roots of an integer polynomial in [0, 1] seen by evaluation on the grid i/samples.

    Counts grid points that are exact zeros plus sign changes between
    consecutive nonzero samples.  Values are scaled by samples**deg so the
    whole scan stays in integers.
    """
    count = 0
    prev = None
    for i in range(samples + 1):
        # homogeneous Horner: sum_k c_k i^k samples^(deg-k)
        acc = 0
        power = 1
        for c in reversed(coeffs):
            acc = acc * i + c * power
            power *= samples
        if acc == 0:
            count += 1
            prev = None
            continue
        s = acc > 0
        if prev is not None and s != prev:
            count += 1
        prev = s
    return count

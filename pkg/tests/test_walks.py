import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rho_brute
from strategies import connected_graphs, random_connected
from tsbalance.errors import DisconnectedError, GraphValidationError, GuardError
from tsbalance.graph import Graph, apsp, complete, cycle, path, wheel
from tsbalance.walks import (
    is_hamilton_connected,
    is_hamiltonian,
    mask_members,
    rho,
    rho_table,
    to_mask,
    walk_layers,
)


def subsets(n):
    for k in range(n + 1):
        yield from combinations(range(n), k)


def test_rho_examples():
    assert rho(complete(5), {1, 2}, 0, 3) == 3
    g = cycle(7)
    assert rho(g, set(), 1, 5) == apsp(g)[1, 5]
    assert rho(cycle(4), {2}, 0, 0) == 4


def test_rho_rejects_out_of_range():
    with pytest.raises(GraphValidationError):
        rho(cycle(4), {4}, 0, 1)


def test_rho_disconnected():
    with pytest.raises(DisconnectedError):
        rho(Graph.from_edges(3, [(0, 1)]), {1}, 0, 1)


def test_mask_helpers():
    assert to_mask({0, 3}, 5) == 0b1001
    assert mask_members(0b10110) == [1, 2, 4]


def test_table_examples():
    t = rho_table(complete(3), 0)
    assert t.cost_at({1}, 1) == 1
    assert t.cost_at({1, 2}, 2) == 2
    t = rho_table(path(3), 0)
    assert t.cost_at({2}, 2) == 2
    assert t.cost_at({1, 2}, 2) == 2
    assert t.cost_at({1, 2}, 1) == 3


@given(connected_graphs(max_n=7))
def test_table_matches_brute_force(g):
    d = apsp(g).tolist()
    for u in range(g.n):
        t = rho_table(g, u)
        for a in subsets(g.n):
            for v in range(g.n):
                assert t.rho(a, v) == rho_brute(d, a, u, v)


@given(connected_graphs(min_n=2, max_n=7))
def test_table_recurrence(g):
    d = apsp(g)
    t = rho_table(g, 0)
    for a in subsets(g.n):
        if len(a) < 2:
            if len(a) == 1:
                assert t.cost_at(a, a[0]) == d[0, a[0]]
            continue
        for j in a:
            rest = [i for i in a if i != j]
            assert t.cost_at(a, j) == min(t.cost_at(rest, i) + d[i, j] for i in rest)


def test_layers_ascend_by_cardinality():
    d = apsp(cycle(8))
    ks = [k for k, _masks, _cost in walk_layers(d, 0)]
    assert ks == list(range(1, 9))


def test_guard():
    with pytest.raises(GuardError):
        rho_table(cycle(10), 0, max_n=9)


def test_guard_env(monkeypatch):
    monkeypatch.setenv("TSB_MAX_N", "5")
    with pytest.raises(GuardError):
        rho_table(cycle(6), 0)


# -- Remark-style properties on sampled inputs --------------------------------------

@st.composite
def graph_with_sets(draw):
    g = draw(connected_graphs(min_n=1, max_n=8))
    n = g.n
    a = draw(st.sets(st.integers(0, n - 1)))
    b = draw(st.sets(st.integers(0, n - 1)))
    u, v, z = (draw(st.integers(0, n - 1)) for _ in range(3))
    return g, a, b, u, v, z


@given(graph_with_sets())
def test_symmetry(case):
    g, a, _b, u, v, _z = case
    assert rho(g, a, u, v) == rho(g, a, v, u)


@given(graph_with_sets())
def test_monotonicity(case):
    g, a, b, u, v, _z = case
    assert rho(g, a & b, u, v) <= rho(g, a, u, v)
    assert rho(g, a, u, v) <= rho(g, a | b, u, v)


@given(graph_with_sets())
def test_triangle(case):
    g, a, b, u, v, z = case
    assert rho(g, a | b, u, v) <= rho(g, a, u, z) + rho(g, b, z, v)


@given(graph_with_sets())
def test_bound(case):
    g, a, _b, u, v, _z = case
    assert rho(g, a, u, v) < g.n**2


@given(graph_with_sets())
def test_lipschitz(case):
    g, a, _b, u, v, z = case
    d = apsp(g)
    assert abs(rho(g, a, u, z) - rho(g, a, v, z)) <= d[u, v]
    for w in g.adj[u]:
        assert rho(g, a, u, z) - rho(g, a, w, z) in (-1, 0, 1)


def test_empty_set_is_distance():
    r = random.Random(3)
    for _ in range(20):
        g = random_connected(r, r.randint(1, 10))
        d = apsp(g)
        for u in range(g.n):
            for v in range(g.n):
                assert rho(g, (), u, v) == d[u, v]


# -- Hamiltonicity -------------------------------------------------------------------

def test_hamiltonian_examples():
    assert is_hamiltonian(cycle(5))
    assert not is_hamiltonian(path(4))
    assert is_hamiltonian(complete(4))


def test_hamiltonian_small_order():
    with pytest.raises(GraphValidationError):
        is_hamiltonian(complete(2))


def test_hamilton_connected_examples():
    assert is_hamilton_connected(wheel(7))
    assert not is_hamilton_connected(cycle(5))
    assert is_hamilton_connected(complete(4))


def test_hamiltonian_any_vertex_agrees():
    r = random.Random(11)
    for _ in range(40):
        g = random_connected(r, r.randint(3, 8), 0.35)
        full = set(range(g.n))
        values = {rho(g, full, u, u) == g.n for u in range(g.n)}
        assert len(values) == 1
        assert values.pop() == is_hamiltonian(g)

import random
from itertools import permutations

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from oracles import bfs_distances, vector_brute
from strategies import random_connected
from tsbalance.balance import is_ts_distance_balanced, total_distance_vector
from tsbalance.errors import GuardError
from tsbalance.graph import (
    Graph,
    builtin,
    complete,
    cycle,
    emit_graph6,
    generalized_petersen,
    hypercube,
    is_connected,
    parse_graph6,
    path,
    wheel,
)
from tsbalance.symmetry import (
    SearchStats,
    automorphism_orbits,
    graph_hits,
    is_vertex_transitive,
    search_counterexamples,
)


def nx_orbits(g: Graph):
    """Orbits from networkx's VF2 automorphism enumeration."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for phi in GraphMatcher(h, h).isomorphisms_iter():
        for a, b in phi.items():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes = {}
    for a in range(g.n):
        classes.setdefault(find(a), set()).add(a)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def test_orbit_examples():
    assert automorphism_orbits(complete(6)) == [frozenset(range(6))]
    assert automorphism_orbits(wheel(7)) == [frozenset({0}), frozenset(range(1, 7))]
    assert len(automorphism_orbits(generalized_petersen(7, 3))) > 1


def test_vertex_transitive_examples():
    for g in (cycle(6), hypercube(3), generalized_petersen(5, 2)):
        assert is_vertex_transitive(g)
    assert not is_vertex_transitive(builtin("h9"))
    assert not is_vertex_transitive(generalized_petersen(7, 3))


def test_h9_orbits():
    assert automorphism_orbits(builtin("h9")) == [frozenset({0, 5, 6}), frozenset({1, 2, 3, 4, 7, 8})]


def test_orbit_guard():
    with pytest.raises(GuardError):
        automorphism_orbits(cycle(21))


def test_orbits_on_disconnected_input():
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
    assert automorphism_orbits(g) == [frozenset({0, 1}), frozenset({2, 4}), frozenset({3})]


def test_orbits_match_networkx():
    r = random.Random(41)
    for _ in range(120):
        g = random_connected(r, r.randint(1, 9), r.choice([0.0, 0.2, 0.5, 0.8]))
        assert automorphism_orbits(g) == nx_orbits(g)


@pytest.mark.parametrize("g", [generalized_petersen(8, 3), hypercube(4), generalized_petersen(10, 3)])
def test_orbits_match_networkx_larger(g):
    assert automorphism_orbits(g) == nx_orbits(g)


def test_orbits_relabel_invariant():
    r = random.Random(43)
    for _ in range(60):
        g = random_connected(r, r.randint(2, 10), r.choice([0.1, 0.3]))
        perm = list(range(g.n))
        r.shuffle(perm)
        moved = automorphism_orbits(g.relabel(perm))
        expected = sorted((frozenset(perm[v] for v in orbit) for orbit in automorphism_orbits(g)), key=min)
        assert moved == expected


def test_vectors_constant_on_orbits():
    r = random.Random(47)
    for _ in range(60):
        g = random_connected(r, r.randint(2, 9), r.choice([0.0, 0.3, 0.6]))
        for orbit in automorphism_orbits(g):
            assert len({total_distance_vector(g, u) for u in orbit}) == 1


def test_vertex_transitive_implies_ts_balanced():
    graphs = [cycle(n) for n in range(3, 11)] + [complete(n) for n in range(2, 9)]
    graphs += [hypercube(3), generalized_petersen(5, 2), generalized_petersen(8, 3)]
    r = random.Random(53)
    graphs += [random_connected(r, r.randint(2, 8), 0.5) for _ in range(60)]
    for g in graphs:
        if is_vertex_transitive(g):
            assert is_ts_distance_balanced(g)


# -- search --------------------------------------------------------------------------

def test_search_h9_no_hit():
    stats = SearchStats()
    hits = list(search_counterexamples([emit_graph6(builtin("h9"))], stats))
    assert hits == []
    assert stats.processed == 1


def test_search_transitive_no_hit():
    lines = [emit_graph6(g).decode() for g in (cycle(4), cycle(5), complete(4))]
    stats = SearchStats()
    assert list(search_counterexamples(lines, stats)) == []
    assert stats.to_json() == {"processed": 3, "skipped": 0, "hits": 0}


def test_search_skips_bad_records():
    lines = ["Bw", "not graph6 \x01", "", emit_graph6(Graph.from_edges(4, [(0, 1), (2, 3)])).decode(), "D??"]
    stats = SearchStats()
    list(search_counterexamples(lines, stats))
    assert stats.processed == 1
    assert stats.skipped == 3
    assert stats.skipped_reasons == {"malformed": 1, "disconnected": 2}


def test_search_guard_skip():
    stats = SearchStats()
    list(search_counterexamples([emit_graph6(cycle(12))], stats, max_n=10))
    assert stats.skipped_reasons == {"guard": 1}


def test_cross_orbit_equal_vectors_small_graph():
    """Vertex 0 carries two leaves, vertex 3 sits on the triangle 3-4-5; the edge 0-3 joins them.

    No automorphism swaps them, yet their total distance vectors coincide.
    """
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (4, 5)])
    hits = graph_hits(g)
    assert [(h.u, h.v) for h in hits] == [(0, 3)]
    hit = hits[0]
    # independent oracles: permutation brute force for the vectors, VF2 for the orbits
    d = bfs_distances([sorted(a) for a in g.adj])
    assert vector_brute(d, 0) == vector_brute(d, 3) == hit.vector
    orbits = nx_orbits(g)
    assert not any({0, 3} <= orbit for orbit in orbits)
    # and no automorphism at all maps 0 to 3
    assert not any(
        all(g.has_edge(p[a], p[b]) for a, b in g.edges()) and p[0] == 3
        for p in permutations(range(6))
    )


def test_hit_json_shape():
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (4, 5)])
    record = graph_hits(g)[0].to_json()
    assert record["graph6"] == emit_graph6(g).decode()
    assert set(record) == {"graph6", "u", "v", "vector", "orbit_u", "orbit_v"}


def test_search_small_atlas_reports_count():
    # every graph on at most 5 vertices; the count is reported, not asserted
    from networkx.generators.atlas import graph_atlas_g

    lines = []
    for h in graph_atlas_g()[1:53]:
        g = Graph.from_edges(h.number_of_nodes(), h.edges())
        lines.append(emit_graph6(g))
    stats = SearchStats()
    hits = list(search_counterexamples(lines, stats))
    assert stats.processed + stats.skipped == len(lines)
    assert stats.hits == len(hits)
    for hit in hits:
        assert hit.vector == total_distance_vector(parse_graph6(hit.graph6), hit.v)


def test_path_orbits():
    assert automorphism_orbits(path(5)) == [frozenset({0, 4}), frozenset({1, 3}), frozenset({2})]


def brute_hits(g: Graph):
    d = bfs_distances([sorted(a) for a in g.adj])
    reps = [min(o) for o in nx_orbits(g)]
    vecs = [vector_brute(d, r) for r in reps]
    return sorted(
        (reps[i], reps[j]) for i in range(len(reps)) for j in range(i + 1, len(reps)) if vecs[i] == vecs[j]
    )


def test_hits_with_different_degrees():
    # equal vectors do not force equal degrees, so a degree prefilter would miss this pair
    g = parse_graph6(b"EBe?")
    hits = graph_hits(g)
    assert [(h.u, h.v) for h in hits] == [(3, 4)]
    assert g.degree(3) != g.degree(4)
    assert brute_hits(g) == [(3, 4)]


def test_hits_complete_against_unfiltered_scan():
    from networkx.generators.atlas import graph_atlas_g

    graphs = [Graph.from_edges(h.number_of_nodes(), h.edges()) for h in graph_atlas_g()[1:209]]
    r = random.Random(59)
    graphs += [random_connected(r, r.randint(5, 7), r.choice([0.1, 0.3, 0.5])) for _ in range(60)]
    for g in graphs:
        if not is_connected(g):
            continue
        assert sorted((h.u, h.v) for h in graph_hits(g)) == brute_hits(g)

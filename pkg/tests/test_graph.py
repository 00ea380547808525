import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from graphs import (
    FIG2, FIG5, FIG7, K4, P7, atlas_connected, brute_alpha_w, complete, cycle, from_nx,
    nx_maximal_independent_sets, path, star, to_nx,
)
from netgame.graph import (
    CapExceededError,
    Graph,
    GraphFormatError,
    check_cap,
    clique_number,
    connected_components,
    enumerate_maximal_independent_sets,
    independence_number,
    is_clique,
    is_independent,
    is_k_dominating_independent,
    is_tree,
    load_graph,
    maximum_independent_sets,
    parse_graph_document,
    tree_structure,
    unique_max_independent_set,
    weighted_max_independent_set,
)

SMALL = atlas_connected(6)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


def brute_independent_sets(g):
    for k in range(g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            if is_independent(g, s):
                yield s


# --------------------------------------------------------------------------
# parsing


def test_load_k4_edge_list():
    g = load_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3")
    assert g == K4
    assert g.degrees == [3, 3, 3, 3]


def test_single_isolated_node():
    g = load_graph("1 0")
    assert g.n == 1 and g.m == 0


def test_comments_and_blank_lines():
    g = load_graph("# triangle\n3 3\n\n0 1  # first\n1 2\n2 0\n")
    assert g == complete(3)


@pytest.mark.parametrize("text, needle", [
    ("3 2\n0 1\n1 1", "self-loop"),
    ("3 2\n0 1\n1 0", "duplicate"),
    ("3 1\n0 3", "out of range"),
    ("3 1\n0 x", "malformed"),
    ("3 1\n0 1 2", "malformed"),
    ("3 2\n0 1", "declares 2 edges"),
    ("three 1\n0 1", "header"),
    ("", "empty"),
])
def test_parse_errors_are_distinct(text, needle):
    with pytest.raises(GraphFormatError, match=needle):
        load_graph(text)


def test_json_document_with_weights():
    g, w = parse_graph_document('{"n": 3, "edges": [[0, 1], [1, 2]], "weights": [1, 5, 1]}')
    assert g == path(3) and w == [1.0, 5.0, 1.0]


@pytest.mark.parametrize("text", [
    '{"n": 3}',
    '{"n": 3, "edges": [[0, 0]]}',
    '{"n": 3, "edges": [[0, 1]], "weights": [1]}',
    '{"n": 3, "edges": [[0, 1.5]]}',
    '{"n": 3, ',
])
def test_json_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph_document(text)


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 1), (1, 0)])


def test_adjacency_matrix_round_trip():
    g = FIG2
    assert Graph.from_adjacency_matrix(g.adjacency_matrix()) == g


def test_cap(monkeypatch):
    check_cap(20)
    with pytest.raises(CapExceededError):
        check_cap(21)
    monkeypatch.setenv("NETGAME_CAP", "5")
    with pytest.raises(CapExceededError):
        enumerate_maximal_independent_sets(path(6))
    assert enumerate_maximal_independent_sets(path(6), cap=6)


# --------------------------------------------------------------------------
# independence and cliques


@pytest.mark.parametrize("g, alpha, witness", [
    (K4, 1, (0,)),
    (P7, 4, (0, 2, 4, 6)),
    (FIG2, 4, None),
    (FIG7, 5, (0, 2, 3, 5, 6)),
    (Graph.from_edges(3, []), 3, (0, 1, 2)),
])
def test_independence_number(g, alpha, witness):
    a, w = independence_number(g)
    assert a == alpha == nx.algorithms.clique.max_weight_clique(
        nx.complement(to_nx(g)), weight=None)[1]
    assert is_independent(g, w) and len(w) == a
    if witness is not None:
        assert w == witness


def test_fig2_reference_mis_is_maximum():
    assert is_independent(FIG2, (0, 5, 8, 9))
    assert independence_number(FIG2)[0] == 4


@pytest.mark.parametrize("g", SMALL, ids=str)
def test_witness_is_lexicographically_smallest(g):
    a, w = independence_number(g)
    sizes = [s for s in brute_independent_sets(g) if len(s) == a]
    assert w == min(sizes)
    assert sorted(maximum_independent_sets(g)) == sorted(sizes)


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_alpha_omega_against_networkx(g):
    h = to_nx(g)
    omega = max(len(c) for c in nx.find_cliques(h))
    alpha = max(len(c) for c in nx.find_cliques(nx.complement(h)))
    assert clique_number(g) == omega
    assert independence_number(g)[0] == alpha
    assert clique_number(g) == independence_number(g.complement())[0]


@pytest.mark.parametrize("g, expected", [
    (FIG7, (0, 2, 3, 5, 6)),
    (path(2), None),
    (P7, (0, 2, 4, 6)),
    (cycle(6), None),
    (star(3), (1, 2, 3)),
])
def test_unique_max_independent_set(g, expected):
    assert unique_max_independent_set(g) == expected


@pytest.mark.parametrize("g", SMALL, ids=str)
def test_unique_mis_brute_force(g):
    a = independence_number(g)[0]
    biggest = [s for s in brute_independent_sets(g) if len(s) == a]
    assert unique_max_independent_set(g) == (biggest[0] if len(biggest) == 1 else None)


def test_fig2_clique_number_is_three():
    assert clique_number(FIG2) == 3
    assert is_clique(FIG2, (0, 1, 2))


@pytest.mark.parametrize("g, expected", [
    (complete(3), [(0,), (1,), (2,)]),
    (cycle(4), [(0, 2), (1, 3)]),
])
def test_maximal_independent_sets_small(g, expected):
    assert enumerate_maximal_independent_sets(g) == expected


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_maximal_independent_sets_against_networkx(g):
    got = enumerate_maximal_independent_sets(g)
    assert got == nx_maximal_independent_sets(g)
    for s in got:
        assert is_k_dominating_independent(g, s, 1)


def test_every_independent_set_extends_to_a_maximal_one():
    sets = [set(s) for s in enumerate_maximal_independent_sets(P7)]
    for s in brute_independent_sets(P7):
        assert any(set(s) <= t for t in sets)


@pytest.mark.parametrize("s, k, expected", [
    ((1, 2, 3), 1, True),
    ((1, 2, 3), 3, True),
    ((0,), 1, True),
    ((0,), 2, False),
    ((0, 1), 1, False),
])
def test_k_domination_on_star(s, k, expected):
    assert is_k_dominating_independent(star(3), s, k) is expected


def test_k_domination_on_path_by_direct_count():
    s = {0, 2, 4, 6}
    counts = [len(P7.neighbors(v) & s) for v in range(7) if v not in s]
    assert counts == [2, 2, 2]
    assert is_k_dominating_independent(P7, s, 2)
    assert not is_k_dominating_independent(P7, s, 3)


@pytest.mark.parametrize("g, w, alpha_w, witness", [
    (path(3), [1, 5, 1], 5, (1,)),
    (path(3), [1, 1, 1], 2, (0, 2)),
    (star(3), [3, 1, 1, 1], 3, (0,)),
])
def test_weighted_mis(g, w, alpha_w, witness):
    assert weighted_max_independent_set(g, w) == (alpha_w, witness)


def test_weighted_mis_fig2_degrees_brute_force():
    w = FIG2.degrees
    a, s = weighted_max_independent_set(FIG2, w)
    assert a == brute_alpha_w(FIG2, w)
    assert is_independent(FIG2, s) and sum(w[i] for i in s) == a


def test_weighted_mis_unit_weights_matches_alpha():
    for g in SMALL[::7]:
        assert weighted_max_independent_set(g, [1] * g.n)[0] == independence_number(g)[0]


@given(graphs(), st.lists(st.floats(0.1, 10), min_size=8, max_size=8))
@settings(max_examples=100, deadline=None)
def test_weighted_mis_property(g, w):
    w = w[: g.n]
    a, s = weighted_max_independent_set(g, w)
    assert is_independent(g, s)
    assert a == pytest.approx(brute_alpha_w(g, w), rel=1e-12)


def test_weighted_mis_rejects_nonpositive():
    with pytest.raises(ValueError):
        weighted_max_independent_set(path(2), [1, 0])


# --------------------------------------------------------------------------
# components and trees


def test_components():
    (only, nodes), = connected_components(P7)
    assert only == P7 and nodes == tuple(range(7))
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert [c.n for c, _ in connected_components(two)] == [2, 2]
    g, keep = P7.remove_node(3)
    comps = connected_components(g)
    assert sorted(tuple(keep[i] for i in nodes) for _, nodes in comps) == [(0, 1, 2), (4, 5, 6)]


def test_fig5_structure():
    ts = tree_structure(FIG5)
    assert ts.kind == "general_tree"
    assert set(ts.centers) == {1, 2, 4, 9}
    interiors = sorted(tuple(b.interior) for b in ts.branches if b.interior)
    # listed branches {1},{9},{11},{12},{4},{8},{6,7} in 1-based labels
    assert sorted(tuple(sorted(i)) for i in interiors) == sorted(
        [(0,), (8,), (10,), (11,), (3,), (7,), (5, 6)])
    assert (ts.m, ts.m_listed, ts.r) == (9, 7, 6)


def test_fig7_structure():
    ts = tree_structure(FIG7)
    assert ts.centers == (1, 4) and ts.m == 5 and ts.r == 5 and ts.all_odd


@pytest.mark.parametrize("g, kind", [
    (P7, "line"),
    (star(3), "star"),
    (K4, "not_a_tree"),
    (Graph.from_edges(4, [(0, 1), (2, 3)]), "not_a_tree"),
    (Graph.from_edges(1, []), "line"),
])
def test_tree_kinds(g, kind):
    assert tree_structure(g).kind == kind


@given(st.integers(1, 14), st.integers(0, 2 ** 30))
@settings(max_examples=150, deadline=None)
def test_tree_structure_invariants(n, seed):
    g = from_nx(nx.random_labeled_tree(n, seed=seed))
    assert is_tree(g)
    ts = tree_structure(g)
    interiors = [v for b in ts.branches for v in b.interior]
    assert len(interiors) == len(set(interiors))
    assert all(g.degree(v) <= 2 for v in interiors)
    if ts.centers:
        assert sorted(interiors + list(ts.centers)) == list(range(n))
        # every edge lies on exactly one branch when centers exist
        assert sum(b.size + b.ends_at_center for b in ts.branches) == g.m

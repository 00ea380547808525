"""Named test graphs (0-based labels) and networkx helpers used as independent oracles."""

import itertools
import random

import networkx as nx
import numpy as np

from netgame.graph import Graph


def from_one_based(n, edges):
    """Edges given with 1-based labels."""
    return Graph.from_edges(n, [(a - 1, b - 1) for a, b in edges])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def star(k):
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def from_nx(h):
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), list(h.edges()))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.sorted_edges())
    return h


P7 = path(7)
K4 = complete(4)
FIG2 = from_one_based(10, [(1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6), (6, 7), (7, 8),
                       (9, 8), (10, 7), (3, 1)])
FIG5 = from_one_based(12, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8), (3, 10),
                       (10, 11), (9, 2), (10, 12)])
FIG6 = from_one_based(7, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7)])
FIG7 = from_one_based(7, [(1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (5, 7)])


def atlas_connected(max_n=7):
    """Every connected graph on 1..max_n nodes, one per isomorphism class."""
    return [from_nx(h) for h in nx.graph_atlas_g()[1:]
            if h.number_of_nodes() <= max_n and nx.is_connected(h)]


def random_graphs(n, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        h = nx.gnp_random_graph(n, rng.uniform(0.2, 0.7), seed=rng.randrange(1 << 30))
        out.append(from_nx(h))
    return out


def random_trees(count, seed, n_min=2, n_max=12):
    rng = random.Random(seed)
    return [from_nx(nx.random_labeled_tree(rng.randint(n_min, n_max),
                                           seed=rng.randrange(1 << 30)))
            for _ in range(count)]


def nx_maximal_independent_sets(g):
    comp = nx.complement(to_nx(g))
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(comp))


def brute_alpha_w(g, w):
    return max(sum(w[i] for i in s) for s in nx_maximal_independent_sets(g))


def best_response_fixed_point(g, delta, x, tol=1e-8):
    """Independent Nash check: every coordinate equals max(0, 1 - delta * neighbour sum)."""
    a = nx.to_numpy_array(to_nx(g), nodelist=range(g.n))
    br = np.maximum(0.0, 1.0 - delta * (a @ x))
    return np.max(np.abs(br - x), initial=0.0) <= tol


def oracle_equilibria(g, delta, tol=1e-9):
    """All equilibria (e* = 1) with a regular support, found independently of the package.

    Every support is tried at once per size: the pseudo-inverse solves the
    support block and candidates are kept when the full complementarity
    conditions hold. Singular blocks are dropped, as in the enumerator.
    """
    n = g.n
    m = np.eye(n) + delta * nx.to_numpy_array(to_nx(g), nodelist=range(n))
    found = []
    for k in range(1, n + 1):
        idx = np.array(list(itertools.combinations(range(n), k)))
        blocks = m[idx[:, :, None], idx[:, None, :]]
        regular = np.linalg.svd(blocks, compute_uv=False)[:, -1] > 1e-10
        idx, blocks = idx[regular], blocks[regular]
        if not len(idx):
            continue
        xs = np.linalg.pinv(blocks) @ np.ones(k)
        full = np.zeros((len(idx), n))
        np.put_along_axis(full, idx, xs, axis=1)
        slack = full @ m.T - 1
        ok = (full.min(axis=1) >= -tol) & (slack.min(axis=1) >= -tol)
        ok &= np.abs(full * slack).max(axis=1) <= tol
        found.extend(np.where(full[ok] > tol, full[ok], 0.0))
    out = []
    for x in found:
        if not any(np.allclose(x, y, atol=1e-7) for y in out):
            out.append(x)
    return out


def oracle_max_play(g, delta):
    return max(x.sum() for x in oracle_equilibria(g, delta))

"""Undirected simple graphs and the exact combinatorics the game bounds need.

Node sets are plain sorted tuples of ints. All exact searches run on
bitmask adjacency (one Python int per node) and are capped at
:func:`enumeration_cap` nodes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

NodeSet = tuple[int, ...]

DEFAULT_CAP = 20


class GraphFormatError(ValueError):
    """Raised when a graph document cannot be parsed."""


class CapExceededError(RuntimeError):
    """Raised when an exhaustive search is requested on too large an input."""


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the node cap: explicit argument, then ``NETGAME_CAP``, then 20."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("NETGAME_CAP")
    return int(env) if env else DEFAULT_CAP


def check_cap(n: int, cap: int | None = None) -> None:
    limit = enumeration_cap(cap)
    if n > limit:
        raise CapExceededError(f"graph has {n} nodes; enumeration cap is {limit}")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise ValueError("node count must be nonnegative")
        seen: set[tuple[int, int]] = set()
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a node outside [0, {n})")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, frozenset(seen), tuple(frozenset(s) for s in nbrs))

    @classmethod
    def from_adjacency_matrix(cls, a) -> "Graph":
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("adjacency matrix has self-loops")
        iu = np.argwhere(np.triu(a, 1))
        return cls.from_edges(a.shape[0], iu.tolist())

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def bitmasks(self) -> list[int]:
        return [sum(1 << j for j in s) for s in self.adjacency]

    def complement(self) -> "Graph":
        return Graph.from_edges(
            self.n,
            [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
             if v not in self.adjacency[u]],
        )

    def induced_subgraph(self, nodes: Iterable[int]) -> tuple["Graph", NodeSet]:
        """Return the induced subgraph and the map ``new index -> old index``."""
        keep = tuple(sorted(set(nodes)))
        pos = {v: k for k, v in enumerate(keep)}
        sub_edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph.from_edges(len(keep), sub_edges), keep

    def remove_node(self, i: int) -> tuple["Graph", NodeSet]:
        return self.induced_subgraph(v for v in range(self.n) if v != i)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# --------------------------------------------------------------------------
# parsing


def _parse_edge_list(text: str) -> Graph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphFormatError("empty graph document")
    lineno, header = rows[0]
    try:
        n, m = (int(t) for t in header)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: header must be 'n m', got {' '.join(header)!r}")
    if n < 1 or m < 0:
        raise GraphFormatError(f"line {lineno}: need n >= 1 and m >= 0")
    if len(rows) - 1 != m:
        raise GraphFormatError(f"header declares {m} edges but {len(rows) - 1} edge lines follow")
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, toks in rows[1:]:
        if len(toks) != 2:
            raise GraphFormatError(f"line {lineno}: malformed edge line {' '.join(toks)!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: malformed edge line {' '.join(toks)!r}")
        _check_edge(lineno, u, v, n, seen)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def _check_edge(where, u: int, v: int, n: int, seen: set) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"line {where}: node index out of range [0, {n}) in edge ({u}, {v})")
    if u == v:
        raise GraphFormatError(f"line {where}: self-loop at node {u}")
    key = (min(u, v), max(u, v))
    if key in seen:
        raise GraphFormatError(f"line {where}: duplicate edge {key}")
    seen.add(key)


def _parse_json(text: str) -> tuple[Graph, list[float] | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphFormatError("JSON graph needs keys 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise GraphFormatError("'n' must be a positive integer")
    seen: set[tuple[int, int]] = set()
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(t, int) for t in e)):
            raise GraphFormatError(f"edge #{k}: malformed edge {e!r}")
        _check_edge(f"edge #{k}", e[0], e[1], n, seen)
        edges.append((e[0], e[1]))
    weights = doc.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != n:
            raise GraphFormatError("'weights' must be a list of length n")
        weights = [float(w) for w in weights]
    return Graph.from_edges(n, edges), weights


def parse_graph_document(text: str) -> tuple[Graph, list[float] | None]:
    """Parse an edge-list or JSON document; returns the graph and optional weights."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_edge_list(text), None


def load_graph(text: str) -> Graph:
    """Parse a graph from edge-list text (``"n m"`` header then ``u v`` lines) or JSON."""
    return parse_graph_document(text)[0]


def read_graph(path) -> tuple[Graph, list[float] | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_document(fh.read())


# --------------------------------------------------------------------------
# cliques and independent sets (bitmask branch and bound)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_to_set(mask: int) -> NodeSet:
    return tuple(_bits(mask))


def _color_order(nbrs: list[int], cand: int) -> tuple[list[int], list[int]]:
    """Greedy sequential coloring of ``cand``; returns vertices and running color bounds."""
    order: list[int] = []
    bounds: list[int] = []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~low & ~nbrs[v]
            uncolored &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


def _max_clique_size(nbrs: list[int], cand: int) -> int:
    best = 0

    def expand(size: int, p: int) -> None:
        nonlocal best
        order, bounds = _color_order(nbrs, p)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if size + bound <= best:
                return
            q = p & nbrs[v]
            if q:
                expand(size + 1, q)
            elif size + 1 > best:
                best = size + 1
            p &= ~(1 << v)

    if cand:
        expand(0, cand)
    return best


def _cliques_of_size(nbrs: list[int], cand: int, k: int) -> Iterator[int]:
    """Yield every clique of exactly ``k`` vertices inside ``cand`` as a bitmask."""

    def expand(chosen: int, size: int, p: int) -> Iterator[int]:
        if size == k:
            yield chosen
            return
        order, bounds = _color_order(nbrs, p)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if size + bound < k:
                return
            yield from expand(chosen | (1 << v), size + 1, p & nbrs[v])
            p &= ~(1 << v)

    if k == 0:
        yield 0
        return
    yield from expand(0, 0, cand)


def _lex_smallest_clique(nbrs: list[int], n: int, size: int) -> int:
    chosen = 0
    cand = (1 << n) - 1
    need = size
    for v in range(n):
        if need == 0:
            break
        if not (cand >> v) & 1:
            continue
        rest = cand & nbrs[v] & ~((1 << (v + 1)) - 1)
        if _max_clique_size(nbrs, rest) >= need - 1:
            chosen |= 1 << v
            cand = rest
            need -= 1
        else:
            cand &= ~(1 << v)
    return chosen


def _complement_masks(g: Graph) -> list[int]:
    full = (1 << g.n) - 1
    return [full & ~m & ~(1 << i) for i, m in enumerate(g.bitmasks())]


def independence_number(g: Graph) -> tuple[int, NodeSet]:
    """Exact independence number and the lexicographically smallest maximum independent set."""
    if g.n == 0:
        return 0, ()
    comp = _complement_masks(g)
    alpha = _max_clique_size(comp, (1 << g.n) - 1)
    return alpha, _mask_to_set(_lex_smallest_clique(comp, g.n, alpha))


def clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    return _max_clique_size(g.bitmasks(), (1 << g.n) - 1)


def maximum_independent_sets(g: Graph, limit: int | None = None) -> list[NodeSet]:
    """All maximum independent sets (at most ``limit`` of them), canonically sorted."""
    alpha, _ = independence_number(g)
    out = []
    for mask in _cliques_of_size(_complement_masks(g), (1 << g.n) - 1, alpha):
        out.append(_mask_to_set(mask))
        if limit is not None and len(out) >= limit:
            break
    return sorted(out)


def unique_max_independent_set(g: Graph) -> NodeSet | None:
    found = maximum_independent_sets(g, limit=2)
    return found[0] if len(found) == 1 else None


def enumerate_maximal_independent_sets(g: Graph, cap: int | None = None) -> list[NodeSet]:
    """Bron-Kerbosch with pivoting on the complement graph."""
    check_cap(g.n, cap)
    comp = _complement_masks(g)
    out: list[NodeSet] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(_mask_to_set(r))
            return
        pivot = max(_bits(p | x), key=lambda u: bin(p & comp[u]).count("1"))
        for v in _bits(p & ~comp[pivot]):
            bit = 1 << v
            bk(r | bit, p & comp[v], x & comp[v])
            p &= ~bit
            x |= bit

    if g.n:
        bk(0, (1 << g.n) - 1, 0)
    return sorted(out)


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    s = set(s)
    return all(not (g.adjacency[v] & s) for v in s)


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    return all(g.has_edge(u, v) for k, u in enumerate(s) for v in s[k + 1:])


def is_k_dominating_independent(g: Graph, s: Iterable[int], k: int) -> bool:
    s = set(s)
    if not is_independent(g, s):
        return False
    return all(len(g.adjacency[v] & s) >= k for v in range(g.n) if v not in s)


def weighted_max_independent_set(g: Graph, w: Sequence[float]) -> tuple[float, NodeSet]:
    """Exact maximum-weight independent set by include/exclude branch and bound.

    Ties are broken toward the lexicographically smallest node set.
    """
    w = [float(v) for v in w]
    if len(w) != g.n:
        raise ValueError(f"need {g.n} weights, got {len(w)}")
    if any(v <= 0 for v in w):
        raise ValueError("weights must be strictly positive")
    nbrs = g.bitmasks()
    best_val = -1.0
    best_set: NodeSet = ()
    eps = 1e-12 * max(1.0, sum(w))

    def search(v: int, cand: int, chosen: list[int], val: float) -> None:
        nonlocal best_val, best_set
        # advance to the next candidate vertex
        while v < g.n and not (cand >> v) & 1:
            v += 1
        if v == g.n:
            t = tuple(chosen)
            if val > best_val + eps or (abs(val - best_val) <= eps and t < best_set):
                best_val, best_set = val, t
            return
        if val + sum(w[u] for u in _bits(cand)) < best_val - eps:
            return
        chosen.append(v)
        search(v + 1, cand & ~nbrs[v] & ~(1 << v), chosen, val + w[v])
        chosen.pop()
        search(v + 1, cand & ~(1 << v), chosen, val)

    search(0, (1 << g.n) - 1, [], 0.0)
    return best_val, best_set


# --------------------------------------------------------------------------
# components and tree structure


def connected_components(g: Graph) -> list[tuple[Graph, NodeSet]]:
    seen = [False] * g.n
    parts = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        parts.append(g.induced_subgraph(comp))
    return parts


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and len(connected_components(g)) == 1


@dataclass(frozen=True)
class Branch:
    """A maximal center-free path. ``end`` is a center or the terminating leaf."""

    start: int
    end: int
    interior: NodeSet
    ends_at_center: bool

    @property
    def size(self) -> int:
        return len(self.interior)


@dataclass(frozen=True)
class TreeStructure:
    kind: str  # line | star | starlike | general_tree | not_a_tree
    centers: NodeSet = ()
    branches: tuple[Branch, ...] = ()

    @property
    def m(self) -> int:
        """Branch count including empty center-to-center branches."""
        return len(self.branches)

    @property
    def m_listed(self) -> int:
        """Branch count ignoring center-to-center branches with no interior."""
        return sum(1 for b in self.branches if b.interior)

    @property
    def r(self) -> int:
        return sum(1 for b in self.branches if b.size % 2 == 1)

    @property
    def leaf_branch_counts(self) -> dict[int, int]:
        counts = {c: 0 for c in self.centers}
        for b in self.branches:
            if not b.ends_at_center:
                counts[b.start] += 1
        return counts

    @property
    def chain_lengths(self) -> list[int]:
        return [b.size for b in self.branches]

    @property
    def all_odd(self) -> bool:
        return bool(self.branches) and all(b.size % 2 == 1 for b in self.branches)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "centers": list(self.centers),
            "branches": [
                {"start": b.start, "end": b.end, "interior": list(b.interior),
                 "ends_at_center": b.ends_at_center}
                for b in self.branches
            ],
            "m": self.m,
            "m_listed": self.m_listed,
            "r": self.r,
        }


def tree_structure(g: Graph) -> TreeStructure:
    if not is_tree(g):
        return TreeStructure("not_a_tree")
    centers = tuple(v for v in range(g.n) if g.degree(v) >= 3)
    if not centers:
        return TreeStructure("line")
    center_set = set(centers)
    branches = []
    seen_cc: set[tuple[int, int, NodeSet]] = set()
    for c in centers:
        for first in sorted(g.adjacency[c]):
            prev, cur, interior = c, first, []
            while cur not in center_set:
                interior.append(cur)
                nxt = [u for u in g.adjacency[cur] if u != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
            if cur in center_set:
                key = (min(c, cur), max(c, cur), tuple(sorted(interior)))
                if key in seen_cc:
                    continue
                seen_cc.add(key)
                branches.append(Branch(c, cur, tuple(interior), True))
            else:
                branches.append(Branch(c, cur, tuple(interior), False))
    if len(centers) > 1:
        kind = "general_tree"
    elif all(b.size == 1 for b in branches):
        kind = "star"
    else:
        kind = "starlike"
    return TreeStructure(kind, centers, tuple(branches))

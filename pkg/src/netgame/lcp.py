"""The linear complementarity problem LCP(I + delta*A, -1) on a graph.

Find x >= 0 with (I + delta*A) x >= 1 and x_i * ((I + delta*A) x - 1)_i = 0.
Solutions are found exactly (up to floating point) by support enumeration.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graph import (
    Graph,
    NodeSet,
    _cliques_of_size,
    check_cap,
    connected_components,
    independence_number,
    is_clique,
    is_independent,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
# smallest |eigenvalue| of a support block below which the block counts as singular
SINGULAR_TOL = 1e-10
_BATCH = 4096


@dataclass(frozen=True)
class LcpInstance:
    graph: Graph
    delta: float

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.eye(self.graph.n) + self.delta * self.graph.adjacency_matrix()

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class LcpSolution:
    x: np.ndarray = field(compare=False)
    support: NodeSet

    @property
    def l1(self) -> float:
        return float(self.x.sum())

    def to_dict(self) -> dict:
        return {"support": list(self.support), "x": self.x.tolist(), "l1": self.l1}


@dataclass
class Verification:
    """Outcome of an LCP check. Truthy iff every constraint holds."""

    ok: bool
    worst_kind: str | None = None
    worst_node: int | None = None
    worst_violation: float = 0.0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "all constraints satisfied"
        return (f"{self.worst_kind} violated at node {self.worst_node} "
                f"by {self.worst_violation:.3e}")

    def to_dict(self) -> dict:
        return {"ok": self.ok, "worst_kind": self.worst_kind,
                "worst_node": self.worst_node, "worst_violation": self.worst_violation}


def build_lcp(g: Graph, delta: float) -> LcpInstance:
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return LcpInstance(g, float(delta))


def verify_solution(inst: LcpInstance, x, tol: float = DEFAULT_TOL) -> Verification:
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"expected a vector of length {inst.n}, got shape {x.shape}")
    if inst.n == 0:
        return Verification(True)
    slack = inst.matrix @ x - 1.0
    checks = [
        ("nonnegativity", -x),
        ("feasibility", -slack),
        ("complementarity", np.abs(x * slack)),
    ]
    worst = max(((kind, int(np.argmax(v)), float(np.max(v))) for kind, v in checks),
                key=lambda t: t[2])
    if worst[2] <= tol:
        return Verification(True)
    return Verification(False, *worst)


def _canonical(x: np.ndarray, tol: float) -> tuple[np.ndarray, NodeSet]:
    x = np.where(x > tol, x, 0.0)
    return x, tuple(int(i) for i in np.flatnonzero(x))


def solve_on_support(inst: LcpInstance, s, tol: float = DEFAULT_TOL) -> LcpSolution | None:
    """Solve the support block ``M_ss x_s = 1`` and keep it if it solves the LCP.

    Entries that come out within ``tol`` of zero are dropped from the
    reported (realized) support.
    """
    s = sorted(set(int(i) for i in s))
    n = inst.n
    if any(not 0 <= i < n for i in s):
        raise ValueError("support has nodes outside the graph")
    x = np.zeros(n)
    if s:
        block = inst.matrix[np.ix_(s, s)]
        if np.min(np.abs(np.linalg.eigvalsh(block))) < SINGULAR_TOL:
            log.debug("singular support block %s at delta=%g", s, inst.delta)
            return None
        xs = np.linalg.solve(block, np.ones(len(s)))
        if np.any(xs < -tol):
            return None
        x[s] = xs
    x, support = _canonical(x, tol)
    if not verify_solution(inst, x, tol):
        return None
    return LcpSolution(x, support)


def _dominating_prefilter(masks: np.ndarray, adj: np.ndarray, delta: float) -> np.ndarray:
    # every off-support node needs delta * (#support neighbours) >= 1 since 0 <= x_j <= 1
    counts = masks.astype(float) @ adj
    short = (~masks) & (counts * delta < 1.0 - 1e-7)
    return ~short.any(axis=1)


@dataclass
class EnumerationStats:
    supports: int = 0
    prefiltered: int = 0
    singular: int = 0
    solutions: int = 0


def _dedup(found: list[np.ndarray], tol: float) -> list[LcpSolution]:
    by_support: dict[NodeSet, list[np.ndarray]] = {}
    for x in found:
        x, support = _canonical(x, tol)
        bucket = by_support.setdefault(support, [])
        if all(np.max(np.abs(x - y)) > 10 * tol for y in bucket):
            bucket.append(x)
    out = [LcpSolution(x, s) for s, xs in by_support.items() for x in xs]
    out.sort(key=lambda sol: (sol.support, tuple(sol.x)))
    return out


def enumerate_solutions(inst: LcpInstance, tol: float = DEFAULT_TOL, cap: int | None = None,
                        return_stats: bool = False):
    """Every solution of the LCP whose support block is nonsingular.

    Supports are processed in batches per size; a cheap domination test
    discards supports that cannot satisfy the off-support constraints.
    """
    g = inst.graph
    check_cap(g.n, cap)
    n = g.n
    stats = EnumerationStats()
    found: list[np.ndarray] = []
    if n == 0:
        return ([], stats) if return_stats else []
    adj = g.adjacency_matrix()
    mat = inst.matrix
    for k in range(1, n + 1):
        combos_iter = itertools.combinations(range(n), k)
        while True:
            chunk = list(itertools.islice(combos_iter, _BATCH))
            if not chunk:
                break
            idx = np.array(chunk, dtype=np.intp)
            stats.supports += len(idx)
            masks = np.zeros((len(idx), n), dtype=bool)
            masks[np.arange(len(idx))[:, None], idx] = True
            keep = _dominating_prefilter(masks, adj, inst.delta)
            stats.prefiltered += int((~keep).sum())
            idx, masks = idx[keep], masks[keep]
            if not len(idx):
                continue
            blocks = mat[idx[:, :, None], idx[:, None, :]]
            eig = np.min(np.abs(np.linalg.eigvalsh(blocks)), axis=1)
            regular = eig >= SINGULAR_TOL
            stats.singular += int((~regular).sum())
            if (~regular).any():
                log.debug("%d singular supports of size %d at delta=%g",
                          int((~regular).sum()), k, inst.delta)
            idx, blocks = idx[regular], blocks[regular]
            if not len(idx):
                continue
            xs = np.linalg.solve(blocks, np.ones((len(idx), k, 1)))[..., 0]
            positive = np.all(xs >= -tol, axis=1)
            for row, vals in zip(idx[positive], xs[positive]):
                x = np.zeros(n)
                x[row] = vals
                x = np.where(x > tol, x, 0.0)
                if verify_solution(inst, x, tol):
                    found.append(x)
    sols = _dedup(found, tol)
    stats.solutions = len(sols)
    return (sols, stats) if return_stats else sols


def enumerate_solutions_naive(inst: LcpInstance, tol: float = DEFAULT_TOL,
                              cap: int | None = None) -> list[LcpSolution]:
    """Reference path: ``solve_on_support`` on every nonempty support, one at a time."""
    check_cap(inst.n, cap)
    found = []
    for k in range(1, inst.n + 1):
        for s in itertools.combinations(range(inst.n), k):
            sol = solve_on_support(inst, s, tol)
            if sol is not None:
                found.append(sol.x)
    return _dedup(found, tol)


def restrict_solution(g: Graph, x, i: int, delta: float | None = None,
                      tol: float = DEFAULT_TOL) -> tuple[Graph, np.ndarray]:
    """Drop a zero coordinate and its node; the rest still solves the smaller LCP.

    When ``delta`` is given the restricted vector is checked against the
    induced subgraph's LCP and an AssertionError is raised on failure.
    """
    x = np.asarray(x.x if isinstance(x, LcpSolution) else x, dtype=float)
    if x[i] > tol:
        raise ValueError(f"x[{i}] = {x[i]:g} is not zero; only free riders can be dropped")
    sub, keep = g.remove_node(i)
    y = x[list(keep)]
    if delta is not None:
        check = verify_solution(build_lcp(sub, delta), y, tol)
        assert check, f"restricted vector fails the LCP: {check.describe()}"
    return sub, y


# --------------------------------------------------------------------------
# independent clique solutions


@dataclass(frozen=True)
class IcsSolution:
    cliques: tuple[NodeSet, ...]
    x: np.ndarray = field(compare=False)

    @property
    def support(self) -> NodeSet:
        return tuple(sorted(v for c in self.cliques for v in c))

    @property
    def l1(self) -> float:
        return float(self.x.sum())


def ics_vector(n: int, cliques, delta: float) -> np.ndarray:
    """Closed-form values 1 / (1 + (|C| - 1) delta) on each clique, zero elsewhere."""
    x = np.zeros(n)
    for c in cliques:
        x[list(c)] = 1.0 / (1.0 + (len(c) - 1) * delta)
    return x


def clique_decomposition(g: Graph, support) -> list[NodeSet] | None:
    """Split ``support`` into pairwise independent cliques, or None if impossible.

    The only candidate split is into the connected pieces of the induced subgraph.
    """
    sub, keep = g.induced_subgraph(support)
    pieces = []
    for comp, local in connected_components(sub):
        nodes = tuple(keep[v] for v in local)
        if not is_clique(g, nodes):
            return None
        pieces.append(nodes)
    return sorted(pieces)


def _candidate_cliques(g: Graph, i: int, mis: set[int]) -> list[NodeSet]:
    pool = {i} | {j for j in g.adjacency[i] if g.adjacency[j] & mis == {i}}
    nodes = sorted(pool)
    pos = {v: k for k, v in enumerate(nodes)}
    masks = [sum(1 << pos[u] for u in g.adjacency[v] if u in pos) for v in nodes]
    root = 1 << pos[i]
    cand = masks[pos[i]]
    out = []
    for size in range(len(nodes), 0, -1):
        for mask in _cliques_of_size(masks, cand, size - 1):
            members = [nodes[k] for k in range(len(nodes)) if (mask | root) >> k & 1]
            out.append(tuple(sorted(members)))
    # within one size, lexicographic order
    out.sort(key=lambda c: (-len(c), c))
    return out


MAX_ICS_ASSIGNMENTS = 200_000


def _pairwise_independent(g: Graph, cliques) -> bool:
    for a, b in itertools.combinations(cliques, 2):
        bs = set(b)
        if any(g.adjacency[v] & bs for v in a):
            return False
    return True


def construct_ics(g: Graph, delta: float, mis, tol: float = DEFAULT_TOL) -> IcsSolution | None:
    """Blow each node of a maximum independent set up into a clique and verify.

    Each node ``i`` of ``mis`` may grow into a clique inside ``i`` plus the
    neighbours whose only ``mis`` neighbour is ``i``. Assignments are tried
    largest cliques first; when one fails the LCP check, later cliques are
    shrunk before earlier ones (lexicographic product order). The first
    assignment that verifies is returned.
    """
    inst = build_lcp(g, delta)
    mis = sorted(set(int(v) for v in mis))
    if not is_independent(g, mis):
        raise ValueError("mis is not an independent set")
    alpha, _ = independence_number(g)
    if len(mis) != alpha:
        raise ValueError(f"mis has {len(mis)} nodes but the independence number is {alpha}")
    mis_set = set(mis)
    options = [_candidate_cliques(g, i, mis_set) for i in mis]
    for count, choice in enumerate(itertools.product(*options)):
        if count >= MAX_ICS_ASSIGNMENTS:
            log.warning("construct_ics gave up after %d assignments", count)
            break
        if not _pairwise_independent(g, choice):
            continue
        x = ics_vector(g.n, choice, delta)
        if verify_solution(inst, x, tol):
            return IcsSolution(tuple(choice), x)
    return None


def solutions_to_json(inst: LcpInstance, sols, tol: float = DEFAULT_TOL) -> dict:
    return {"delta": inst.delta, "tol": tol, "solutions": [s.to_dict() for s in sols]}

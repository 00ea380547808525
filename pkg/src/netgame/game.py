"""Public-goods game with imperfect substitutes on a network.

Player ``i`` gets ``b(x_i + delta * sum_{j ~ i} x_j) - c * x_i``. Effort
profiles are plain float arrays in effort units; dividing by ``e_star``
gives the LCP variables.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .graph import (
    Graph,
    NodeSet,
    check_cap,
    enumerate_maximal_independent_sets,
    independence_number,
    unique_max_independent_set,
)
from .lcp import (
    DEFAULT_TOL,
    Verification,
    build_lcp,
    clique_decomposition,
    construct_ics,
    enumerate_solutions,
    ics_vector,
    verify_solution,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GameConfig:
    delta: float
    e_star: float = 1.0
    c: float = 1.0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not (0.0 < self.delta <= 1.0):
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if self.e_star <= 0:
            raise ValueError("e_star must be positive")
        if self.c <= 0:
            raise ValueError("c must be positive")

    def to_dict(self) -> dict:
        return {"delta": self.delta, "e_star": self.e_star, "c": self.c, "tol": self.tol}


def closed_neighborhood_sums(g: Graph, delta: float, x) -> np.ndarray:
    """``x_i + delta * sum of neighbour efforts`` for every node."""
    x = np.asarray(x, dtype=float)
    return x + delta * (g.adjacency_matrix() @ x)


def best_response(g: Graph, cfg: GameConfig, x, i: int) -> float:
    x = np.asarray(x, dtype=float)
    others = sum(x[j] for j in g.adjacency[i])
    return max(0.0, cfg.e_star - cfg.delta * others)


def nash_report(g: Graph, cfg: GameConfig, x) -> Verification:
    x = np.asarray(x, dtype=float)
    return verify_solution(build_lcp(g, cfg.delta), x / cfg.e_star, cfg.tol)


def is_nash(g: Graph, cfg: GameConfig, x) -> bool:
    return bool(nash_report(g, cfg, x))


def enumerate_equilibria(g: Graph, cfg: GameConfig, cap: int | None = None) -> list[np.ndarray]:
    sols = enumerate_solutions(build_lcp(g, cfg.delta), cfg.tol, cap)
    return [cfg.e_star * s.x for s in sols]


def construct_ice(g: Graph, cfg: GameConfig, mis) -> np.ndarray | None:
    ics = construct_ics(g, cfg.delta, mis, cfg.tol)
    return None if ics is None else cfg.e_star * ics.x


def is_ice(g: Graph, cfg: GameConfig, x, n_cliques: int | None = None) -> bool:
    """True when ``x`` is supported on independent cliques with the closed-form values."""
    x = np.asarray(x, dtype=float) / cfg.e_star
    support = [int(i) for i in np.flatnonzero(x > cfg.tol)]
    cliques = clique_decomposition(g, support)
    if cliques is None or (n_cliques is not None and len(cliques) != n_cliques):
        return False
    expected = ics_vector(g.n, cliques, cfg.delta)
    return bool(np.max(np.abs(expected - x), initial=0.0) <= 10 * cfg.tol)


@dataclass
class MaxPlayResult:
    value: float
    argmax: list[np.ndarray]
    equilibria: list[np.ndarray] = field(repr=False)
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": [x.tolist() for x in self.argmax],
            "n_equilibria": len(self.equilibria),
            "diagnostics": list(self.diagnostics),
        }


def max_aggregate_play(g: Graph, cfg: GameConfig, cap: int | None = None) -> MaxPlayResult:
    """Maximum total effort over all equilibria, with every maximizer.

    For ``delta >= eta(G)`` the maximizers are checked for the independent
    clique structure and, with a unique maximum independent set, for being
    its characteristic vector. Failed checks are reported in ``diagnostics``.
    """
    from .bounds import eta

    eqs = enumerate_equilibria(g, cfg, cap)
    if not eqs:
        return MaxPlayResult(float("nan"), [], eqs, ["no equilibrium with a regular support"])
    totals = np.array([x.sum() for x in eqs])
    best = float(totals.max())
    argmax = [x for x, t in zip(eqs, totals) if t >= best - 10 * cfg.tol]
    result = MaxPlayResult(best, argmax, eqs)
    if cfg.delta >= eta(g):
        alpha, _ = independence_number(g)
        if not any(is_ice(g, cfg, x, alpha) for x in argmax):
            result.diagnostics.append(
                f"no maximizer is an ICE with {alpha} cliques although delta >= eta(G)")
        s = unique_max_independent_set(g)
        if s is not None:
            target = np.zeros(g.n)
            target[list(s)] = cfg.e_star
            if not any(np.max(np.abs(x - target)) <= 10 * cfg.tol for x in argmax):
                result.diagnostics.append(
                    "the unique maximum independent set does not give the maximizer")
    for msg in result.diagnostics:
        log.warning(msg)
    return result


def domination_order(delta: float) -> int:
    """Smallest k with k * delta >= 1, robust to rounding in 1/delta."""
    k = math.ceil(1.0 / delta)
    while k > 1 and (k - 1) * delta >= 1.0 - 1e-12:
        k -= 1
    return k


def specialized_equilibria(g: Graph, cfg: GameConfig, cap: int | None = None) -> list[np.ndarray]:
    """Profiles ``e_star * 1_S`` for every ceil(1/delta)-dominating independent set S."""
    check_cap(g.n, cap)
    k = domination_order(cfg.delta)
    out = []
    for s in enumerate_maximal_independent_sets(g, cap):
        ss = set(s)
        if all(len(g.adjacency[v] & ss) >= k for v in range(g.n) if v not in ss):
            x = np.zeros(g.n)
            x[list(s)] = cfg.e_star
            out.append(x)
    return out


# --------------------------------------------------------------------------
# benefit functions and welfare


@dataclass(frozen=True)
class BenefitSpec:
    """Exponential saturation ``b(y) = b0 + (c/lam) * (1 - exp(-lam * (y - e_star)))``.

    Increasing and strictly concave everywhere, with ``b(e_star) = b0`` and
    ``b'(e_star) = c`` for any ``lam > 0``.
    """

    b0: float
    lam: float
    e_star: float
    c: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return self.b0 - (self.c / self.lam) * np.expm1(-self.lam * (y - self.e_star))

    def derivative(self, y):
        return self.c * np.exp(-self.lam * (np.asarray(y, dtype=float) - self.e_star))

    def second_derivative(self, y):
        return -self.lam * self.derivative(y)


def _secant_ratio(lam: float, span: float) -> float:
    u = lam * span
    return -math.expm1(-u) / u if u > 0 else 1.0


def make_benefit(cfg: GameConfig, n: int, sigma_target: float, b0: float | None = None) -> BenefitSpec:
    """Pick the curvature so the benefit has concavity ``sigma_target`` for this game size."""
    if not (0.0 < sigma_target < 1.0):
        raise ValueError(f"sigma_target must lie in (0, 1), got {sigma_target}")
    if n < 2:
        raise ValueError("concavity needs at least two players")
    span = cfg.delta * (n - 1) * cfg.e_star
    hi = 1.0 / span
    while _secant_ratio(hi, span) > sigma_target:
        hi *= 2.0
    lam = brentq(lambda t: _secant_ratio(t, span) - sigma_target, 0.0, hi,
                 xtol=1e-300, rtol=1e-12, maxiter=500)
    return BenefitSpec(cfg.c * cfg.e_star if b0 is None else float(b0), lam, cfg.e_star, cfg.c)


def sigma_b(spec: BenefitSpec, n: int, delta: float) -> float:
    if n < 2:
        raise ValueError("concavity needs at least two players")
    span = delta * (n - 1) * spec.e_star
    value = float((spec(spec.e_star + span) - spec(spec.e_star)) / (spec.c * span))
    assert 0.0 < value < 1.0, f"concavity {value} outside (0, 1)"
    return value


def welfare(g: Graph, cfg: GameConfig, spec: BenefitSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(spec(closed_neighborhood_sums(g, cfg.delta, x))) - cfg.c * x.sum())


def characteristic_profile(n: int, s: NodeSet, e_star: float = 1.0) -> np.ndarray:
    x = np.zeros(n)
    x[list(s)] = e_star
    return x

"""Closed-form bounds on maximum aggregate play and welfare.

Every function returns a :class:`BoundsReport` tagged with the result that
produced each number and the condition under which it holds. Outside that
condition the report says so (``applicable=False``) instead of
extrapolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import (
    Graph,
    clique_number,
    independence_number,
    tree_structure,
    unique_max_independent_set,
    weighted_max_independent_set,
)
from .game import (
    BenefitSpec,
    GameConfig,
    characteristic_profile,
    is_nash,
    max_aggregate_play,
    sigma_b,
)

INF = math.inf
SIGMA_UPPER_CAVEAT = (
    "stated upper bound scales the degree term by sigma_b; the tangent-line argument behind it "
    "only gives the bound without sigma_b (extras['upper_tangent']), and the stated one fails "
    "whenever every neighbourhood aggregate equals e*")


@dataclass
class BoundsReport:
    quantity: str  # aggregate_play | welfare
    lower: float = -INF
    upper: float = INF
    exact: float | None = None
    theorem_tags: list[str] = field(default_factory=list)
    applicability: str = ""
    applicable: bool = True
    caveats: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if math.isfinite(self.lower) and math.isfinite(self.upper):
            assert self.lower <= self.upper + 1e-9, (self.lower, self.upper)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def to_dict(self) -> dict:
        def num(v):
            return v if v is None or math.isfinite(v) else None

        return {
            "quantity": self.quantity,
            "lower": num(self.lower),
            "upper": num(self.upper),
            "exact": num(self.exact),
            "theorem_tags": list(self.theorem_tags),
            "applicability": self.applicability,
            "applicable": self.applicable,
            "caveats": list(self.caveats),
            "extras": {k: (num(v) if isinstance(v, float) else v) for k, v in self.extras.items()},
        }


def eta(g: Graph) -> float:
    """Threshold on delta above which the play-maximizing equilibrium is an ICE."""
    omega = clique_number(g)
    if omega <= 1:
        return 0.0
    alpha, _ = independence_number(g)
    w = omega
    first = (w - 3 + math.sqrt((w - 3) ** 2 + 4 * (w - 1))) / (2 * (w - 1))
    second = (alpha * (w - 1) - w) / (alpha * (w - 1))
    return max(first, second)


def ice_factor(alpha: int) -> float:
    """``alpha + 1 + 1/(alpha - 1)``, the ICE ceiling on total effort in units of e*."""
    return alpha + 1 + 1 / (alpha - 1)


def aggregate_bounds(g: Graph, delta: float, e_star: float = 1.0) -> BoundsReport:
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    alpha, _ = independence_number(g)
    threshold = eta(g)
    rep = BoundsReport("aggregate_play", lower=e_star * alpha, theorem_tags=["Thm3.2"],
                       applicability=f"delta >= eta(G) = {threshold:.6g} for the upper bound")
    rep.extras.update(alpha=alpha, eta=threshold)
    if alpha == 1:
        exact = g.n * e_star / (1 + (g.n - 1) * delta)
        rep.upper = rep.exact = exact
        rep.theorem_tags.append("Ex3.1")
        rep.caveats.append("complete graph: all players split effort equally, "
                           "exact n e*/(1 + (n-1) delta)")
        return rep
    if delta < threshold:
        rep.applicable = False
        rep.caveats.append("outside theorem range: delta < eta(G), no upper bound")
        return rep
    rep.upper = e_star * ice_factor(alpha)
    rep.theorem_tags.append("Thm3.5")
    if unique_max_independent_set(g) is not None:
        rep.exact = rep.upper = e_star * alpha
        rep.theorem_tags.append("Thm3.6")
    return rep


def _check_equilibrium(g: Graph, cfg: GameConfig, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not is_nash(g, cfg, x):
        raise ValueError("profile is not a Nash equilibrium")
    return x


def welfare_profile_bounds(g: Graph, cfg: GameConfig, spec: BenefitSpec, x) -> BoundsReport:
    """Welfare of one equilibrium sandwiched between two linear functions of its total effort."""
    x = _check_equilibrium(g, cfg, x)
    degs = g.degrees
    d_min, d_max = min(degs), max(degs)
    s = sigma_b(spec, g.n, cfg.delta)
    base = g.n * (spec.b0 - cfg.c * cfg.e_star)
    total = float(x.sum())
    rep = BoundsReport(
        "welfare",
        lower=base + cfg.c * ((d_min * cfg.delta + 1) * s - 1) * total,
        upper=base + cfg.c * d_max * cfg.delta * s * total,
        theorem_tags=["Lem3.7-lower", "Lem3.7-upper"],
        applicability="x is an equilibrium and delta >= eta(G)",
    )
    rep.extras.update(sigma_b=s, total_effort=total, d_min=d_min, d_max=d_max,
                      upper_tangent=base + cfg.c * cfg.delta * float(np.dot(degs, x)))
    rep.caveats.append(SIGMA_UPPER_CAVEAT)
    if cfg.delta < eta(g):
        rep.applicable = False
        rep.caveats.append("delta < eta(G): stated only for delta >= eta(G)")
    return rep


def max_welfare_bounds(g: Graph, cfg: GameConfig, spec: BenefitSpec,
                       cap: int | None = None) -> BoundsReport:
    threshold = eta(g)
    rep = BoundsReport("welfare", applicability=f"delta >= eta(G) = {threshold:.6g}")
    if cfg.delta < threshold:
        rep.applicable = False
        rep.caveats.append("outside theorem range: delta < eta(G)")
        return rep
    alpha, _ = independence_number(g)
    degs = g.degrees
    d_min, d_max = min(degs), max(degs)
    s = sigma_b(spec, g.n, cfg.delta)
    base = g.n * (spec.b0 - cfg.c * cfg.e_star)
    low_coef = cfg.c * ((d_min * cfg.delta + 1) * s - 1)
    up_coef = cfg.c * d_max * cfg.delta * s
    rep.extras.update(sigma_b=s, alpha=alpha, eta=threshold)
    rep.caveats.append(SIGMA_UPPER_CAVEAT)

    if alpha == 1:
        total = g.n * cfg.e_star / (1 + (g.n - 1) * cfg.delta)
        rep.lower, rep.upper = base + low_coef * total, base + up_coef * total
        rep.extras["upper_tangent"] = base + up_coef / s * total
        rep.theorem_tags += ["Lem3.7-lower", "Lem3.7-upper", "Ex3.1"]
        rep.caveats.append("complete graph: exact aggregate play used in place of the ICE ceiling")
    elif unique_max_independent_set(g) is not None:
        total = cfg.e_star * alpha
        rep.lower, rep.upper = base + low_coef * total, base + up_coef * total
        rep.extras["upper_tangent"] = base + up_coef / s * total
        rep.theorem_tags += ["Thm3.8d-lower", "Thm3.8d-upper"]
    else:
        rep.upper = base + up_coef * cfg.e_star * ice_factor(alpha)
        rep.extras["upper_tangent"] = base + up_coef / s * cfg.e_star * ice_factor(alpha)
        rep.theorem_tags.append("Thm3.8a")
        split = 1 / (1 + d_min * cfg.delta)
        candidates = []
        if s <= split:
            candidates.append((base + low_coef * cfg.e_star * ice_factor(alpha), "Thm3.8b"))
        if s >= split:
            candidates.append((base + low_coef * cfg.e_star * alpha, "Thm3.8c"))
        rep.lower, tag = max(candidates)
        rep.theorem_tags.append(tag)

    if d_min == d_max:
        best = max_aggregate_play(g, cfg, cap)
        d = d_max
        rep.extras["regular_limit"] = base + cfg.c * d * cfg.delta * best.value
        rep.extras["regular_limit_with_extra_e_star"] = (
            base + cfg.c * d * cfg.delta * cfg.e_star * best.value)
        rep.theorem_tags.append("Thm3.8e")
        rep.caveats.append("regular graph: sigma_b -> 1 limit uses c d delta sum(x*); the "
                           "statement with an extra e* factor differs unless e* = 1")
    return rep


# --------------------------------------------------------------------------
# trees


def line_bounds(n: int, e_star: float = 1.0, delta: float | None = None) -> BoundsReport:
    if n < 1:
        raise ValueError("a line needs at least one node")
    rep = BoundsReport("aggregate_play", lower=n / 2 * e_star, upper=(n + 1) / 2 * e_star,
                       theorem_tags=["Thm4.1"], applicability="line network, delta >= 1/2")
    if n % 2 == 1:
        rep.exact = rep.lower = rep.upper
    _tree_delta_flag(rep, delta)
    return rep


def _tree_delta_flag(rep: BoundsReport, delta: float | None) -> None:
    if delta is not None and delta < 0.5:
        rep.applicable = False
        rep.caveats.append("outside theorem range: delta < 1/2")


def star_equilibrium(n_peripherals: int, cfg: GameConfig) -> tuple[np.ndarray, BoundsReport]:
    """The unique equilibrium of a star: leaves play e*, the center (node 0) free-rides."""
    if n_peripherals < 3:
        raise ValueError("need at least 3 peripheral nodes")
    if cfg.delta * n_peripherals < 1.0 - 1e-12:
        raise ValueError(f"need delta >= 1/{n_peripherals}")
    x = np.full(n_peripherals + 1, cfg.e_star)
    x[0] = 0.0
    total = n_peripherals * cfg.e_star
    rep = BoundsReport("aggregate_play", lower=total, upper=total, exact=total,
                       theorem_tags=["Thm4.2"], applicability="star, delta >= 1/#peripherals")
    if cfg.delta == 1.0:
        rep.caveats.append("at delta = 1 the center playing e* alone is also an equilibrium; "
                           "the profile is the maximizer but not the only equilibrium")
    return x, rep


def star_graph(n_peripherals: int) -> Graph:
    return Graph.from_edges(n_peripherals + 1, [(0, i) for i in range(1, n_peripherals + 1)])


def starlike_bounds(g: Graph, e_star: float = 1.0, delta: float | None = None) -> BoundsReport:
    ts = tree_structure(g)
    if ts.kind not in ("star", "starlike"):
        raise ValueError(f"expected a starlike tree, got {ts.kind}")
    m, r = ts.m, ts.r
    rep = BoundsReport("aggregate_play", lower=(g.n + r - 1) / 2 * e_star,
                       upper=(g.n + m - 1) / 2 * e_star, theorem_tags=["Thm4.3"],
                       applicability="starlike tree, delta >= 1/2")
    rep.extras.update(m=m, r=r, chain_lengths=ts.chain_lengths)
    if r == m:
        rep.exact = rep.lower = rep.upper
    _tree_delta_flag(rep, delta)
    return rep


def tree_bounds(g: Graph, e_star: float = 1.0, delta: float | None = None) -> BoundsReport:
    ts = tree_structure(g)
    if ts.kind == "not_a_tree":
        raise ValueError("graph is not a tree")
    if ts.kind == "line":
        return line_bounds(g.n, e_star, delta)
    if ts.kind in ("star", "starlike"):
        return starlike_bounds(g, e_star, delta)
    t = len(ts.centers)
    m, r = ts.m, ts.r
    rep = BoundsReport("aggregate_play", lower=(g.n + r - t) / 2 * e_star,
                       upper=(g.n + m - t) / 2 * e_star, theorem_tags=["Thm4.4"],
                       applicability="tree with centers, delta >= 1/2")
    rep.extras.update(m=m, r=r, centers=list(ts.centers), m_listed=ts.m_listed,
                      upper_listed=(g.n + ts.m_listed - t) / 2 * e_star)
    if ts.m_listed != m:
        rep.caveats.append(
            f"branch count: {m} including center-to-center links with no interior "
            f"(used), {ts.m_listed} without them")
    if ts.all_odd:
        rep.exact = rep.lower = rep.upper
    _tree_delta_flag(rep, delta)
    return rep


def tree_welfare_bounds(g: Graph, cfg: GameConfig, spec: BenefitSpec) -> BoundsReport:
    ts = tree_structure(g)
    if ts.kind == "not_a_tree" or not ts.centers:
        raise ValueError("tree welfare bounds need a tree with at least one center")
    t = len(ts.centers)
    d_max = max(g.degrees)
    s = sigma_b(spec, g.n, cfg.delta)
    base = g.n * (spec.b0 - cfg.c * cfg.e_star)
    hi_play = (g.n + ts.m - t) / 2 * cfg.e_star
    lo_play = (g.n + ts.r - t) / 2 * cfg.e_star
    low_coef = cfg.c * ((cfg.delta + 1) * s - 1)
    rep = BoundsReport("welfare", upper=base + cfg.c * d_max * cfg.delta * s * hi_play,
                       theorem_tags=["Thm4.5a"], applicability="tree with centers, delta >= 1/2")
    split = 1 / (1 + cfg.delta)
    candidates = []
    if s <= split:
        candidates.append((base + low_coef * hi_play, "Thm4.5b"))
    if s >= split:
        candidates.append((base + low_coef * lo_play, "Thm4.5c"))
    rep.lower, tag = max(candidates)
    rep.theorem_tags.append(tag)
    rep.extras.update(sigma_b=s, m=ts.m, r=ts.r, d_max=d_max,
                      upper_tangent=base + cfg.c * d_max * cfg.delta * hi_play)
    rep.caveats.append(SIGMA_UPPER_CAVEAT)
    _tree_delta_flag(rep, cfg.delta)
    return rep


# --------------------------------------------------------------------------
# perfect substitutes


def delta1_results(g: Graph, cfg: GameConfig, spec: BenefitSpec | None = None,
                   w=None) -> dict:
    """Weighted-effort maximum and the influential-equilibrium welfare limit at delta = 1."""
    if cfg.delta != 1.0:
        raise ValueError("these results are for perfect substitutes (delta = 1)")
    w = np.ones(g.n) if w is None else np.asarray(w, dtype=float)
    alpha_w, witness = weighted_max_independent_set(g, w)
    profile = characteristic_profile(g.n, witness, cfg.e_star)
    out = {
        "max_weighted_effort": cfg.e_star * alpha_w,
        "witness": list(witness),
        "witness_profile": profile.tolist(),
        "witness_is_nash": is_nash(g, cfg, profile),
        "theorem_tags": ["Thm2.3"],
    }
    if spec is None:
        return out
    if min(g.degrees) == 0:
        raise ValueError("the welfare limit needs a graph without isolated nodes")
    aw = g.adjacency_matrix() @ w
    alpha_aw, influential = weighted_max_independent_set(g, aw)
    out.update(
        degree_weights=aw.tolist(),
        alpha_aw=alpha_aw,
        influential_set=list(influential),
        welfare_limit=g.n * (spec.b0 - cfg.c * cfg.e_star) + cfg.c * cfg.e_star * alpha_aw,
    )
    out["theorem_tags"].append("Thm2.4")
    return out


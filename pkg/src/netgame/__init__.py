"""Nash equilibria and structural bounds for public-goods games on networks."""

from .bounds import (
    BoundsReport,
    aggregate_bounds,
    delta1_results,
    eta,
    line_bounds,
    max_welfare_bounds,
    star_equilibrium,
    starlike_bounds,
    tree_bounds,
    tree_welfare_bounds,
    welfare_profile_bounds,
)
from .game import (
    BenefitSpec,
    GameConfig,
    best_response,
    construct_ice,
    enumerate_equilibria,
    is_ice,
    is_nash,
    make_benefit,
    max_aggregate_play,
    sigma_b,
    specialized_equilibria,
    welfare,
)
from .graph import (
    CapExceededError,
    Graph,
    GraphFormatError,
    clique_number,
    enumerate_maximal_independent_sets,
    independence_number,
    load_graph,
    read_graph,
    tree_structure,
    unique_max_independent_set,
    weighted_max_independent_set,
)
from .lcp import (
    build_lcp,
    construct_ics,
    enumerate_solutions,
    restrict_solution,
    solve_on_support,
    verify_solution,
)

__version__ = "0.1.0"

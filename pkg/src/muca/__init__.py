"""Exact and greedy winner determination for multi-unit combinatorial auctions."""

from .bounds import (
    BoundReport,
    BoundSkipped,
    Method,
    Subproblem,
    avg_price_bound,
    best_bound,
    knapsack_max,
    lp_bound,
    projection_bound,
)
from .greedy import GreedyResult, greedy_allocate
from .instances import GenParams, Graph, adversarial_pair, from_graph, gen_random, normalized_counterexample
from .model import Bid, Instance, InstanceError, Solution, parse_instance, serialize_instance, validate
from .ordering import Criterion, Kind, Ranking, dominance_prune, rank_bids, score
from .search import SolveConfig, SolveResult, brute_force, solve

__version__ = "0.1.0"

__all__ = [
    "Bid",
    "BoundReport",
    "BoundSkipped",
    "Criterion",
    "GenParams",
    "Graph",
    "GreedyResult",
    "Instance",
    "InstanceError",
    "Kind",
    "Method",
    "Ranking",
    "Solution",
    "SolveConfig",
    "SolveResult",
    "Subproblem",
    "adversarial_pair",
    "avg_price_bound",
    "best_bound",
    "brute_force",
    "dominance_prune",
    "from_graph",
    "gen_random",
    "greedy_allocate",
    "knapsack_max",
    "lp_bound",
    "normalized_counterexample",
    "parse_instance",
    "projection_bound",
    "rank_bids",
    "score",
    "serialize_instance",
    "solve",
    "validate",
]

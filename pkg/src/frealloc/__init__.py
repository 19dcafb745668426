"""Exact solvers, online mechanisms, and strategy-proofness audits for
multi-stage facility reallocation on the real line.

All arithmetic is over exact rationals; see the README for the file
format and the ``frealloc`` command-line tool.
"""

from .model import (
    BudgetError,
    Coord,
    Instance,
    Interval,
    Solution,
    StructureError,
    agent_cost,
    as_coord,
    median_interval,
    middle_agent,
    stage_cost,
    supermedian,
    total_cost,
)
from .offline import optimal_cost, solve_offline
from .multi import (
    DEFAULT_STATE_BUDGET,
    FacilityTuple,
    MultiSolution,
    WeightedInstance,
    candidate_set,
    lift_instance,
    solve_multi_dp,
    weighted_cost,
)
from .online import OnlineState, online_step, run_online
from .sp import run_sp, sp_step
from .oracle import DEFAULT_SEQUENCE_BUDGET, oracle_optimal, oracle_optimal_weighted
from .manipulation import (
    DEFAULT_SEARCH_BUDGET,
    AuditEntry,
    AuditReport,
    Deviation,
    MechanismId,
    PairDeviation,
    audit_strategyproof,
    deviation_grid,
    find_manipulation,
    find_pair_manipulation,
)
from .experiments import (
    RatioReport,
    SplitMix64,
    gen_lowerbound_family,
    gen_random,
    gen_sp_tight_family,
    measure_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "AuditEntry",
    "AuditReport",
    "BudgetError",
    "Coord",
    "DEFAULT_SEARCH_BUDGET",
    "DEFAULT_SEQUENCE_BUDGET",
    "DEFAULT_STATE_BUDGET",
    "Deviation",
    "FacilityTuple",
    "Instance",
    "Interval",
    "MechanismId",
    "MultiSolution",
    "OnlineState",
    "PairDeviation",
    "RatioReport",
    "Solution",
    "SplitMix64",
    "StructureError",
    "WeightedInstance",
    "agent_cost",
    "as_coord",
    "audit_strategyproof",
    "candidate_set",
    "deviation_grid",
    "find_manipulation",
    "find_pair_manipulation",
    "gen_lowerbound_family",
    "gen_random",
    "gen_sp_tight_family",
    "lift_instance",
    "measure_ratio",
    "median_interval",
    "middle_agent",
    "online_step",
    "optimal_cost",
    "oracle_optimal",
    "oracle_optimal_weighted",
    "run_online",
    "run_sp",
    "solve_multi_dp",
    "solve_offline",
    "sp_step",
    "stage_cost",
    "supermedian",
    "total_cost",
    "weighted_cost",
]

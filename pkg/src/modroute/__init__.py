"""Routing of modular agent fleets on weighted directed graphs.

Agents route to a set of target nodes; agents traversing the same edge at
the same timestep pay its weight once, so the force-based router trades
slightly longer individual paths for shared travel. The package also
ships a non-modular nearest-target baseline, an exact brute-force solver
for tiny instances, and a batch/sensitivity experiment harness.
"""

from .baselines import OracleLimitError, OracleResult, brute_force_optimal, run_nonmodular_baseline
from .engine import (
    AgentState,
    EdgeForces,
    ForceParams,
    MissionResult,
    MoveIntent,
    StepRecord,
    assign_targets,
    attractive_force,
    compute_edge_forces,
    resolve_waits,
    run_mission,
    select_edge,
    step,
)
from .experiments import (
    BatchConfig,
    BatchResult,
    SweepResult,
    generate_random_mission,
    make_grid_graph,
    mission_hash,
    run_batch,
    sensitivity_sweep,
)
from .graph import (
    Graph,
    GraphFormatError,
    InfeasibleMissionError,
    Mission,
    dump_edge_list,
    dump_graphml,
    load_edge_list,
    load_graphml,
    validate,
)
from .paths import Path, PathCache, PathSet, dijkstra, path_weight, yen_k_shortest

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "BatchConfig",
    "BatchResult",
    "EdgeForces",
    "ForceParams",
    "Graph",
    "GraphFormatError",
    "InfeasibleMissionError",
    "Mission",
    "MissionResult",
    "MoveIntent",
    "OracleLimitError",
    "OracleResult",
    "Path",
    "PathCache",
    "PathSet",
    "StepRecord",
    "SweepResult",
    "assign_targets",
    "attractive_force",
    "brute_force_optimal",
    "compute_edge_forces",
    "dijkstra",
    "dump_edge_list",
    "dump_graphml",
    "generate_random_mission",
    "load_edge_list",
    "load_graphml",
    "make_grid_graph",
    "mission_hash",
    "path_weight",
    "resolve_waits",
    "run_batch",
    "run_mission",
    "run_nonmodular_baseline",
    "select_edge",
    "sensitivity_sweep",
    "step",
    "validate",
    "yen_k_shortest",
]

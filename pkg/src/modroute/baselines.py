"""Comparison methods: a non-modular baseline and an exact tiny-instance solver.

The baseline models conventional vehicles: every agent pays every edge it
traverses, with no shared-edge discount, no waiting, and no attraction,
just per-step nearest-target routing. The brute-force solver exhaustively
searches joint action sequences and is only usable at desk scale; it
exists so heuristic results can be checked against true optima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .engine import AgentState, MissionResult, MoveIntent, StepRecord, assign_targets
from .graph import InfeasibleMissionError, Mission, validate
from .paths import PathCache


class OracleLimitError(ValueError):
    """Instance too large for exhaustive search."""


@dataclass(frozen=True)
class OracleResult:
    """Exact minimum cost with one witness set of per-agent paths."""

    optimal_cost: float
    paths: tuple[tuple[int, ...], ...] | None
    explored_states: int


def run_nonmodular_baseline(
    mission: Mission,
    max_steps: int | None = None,
    cache: PathCache | None = None,
) -> MissionResult:
    """Route conventional, non-joining vehicles by nearest-target steps.

    Each unfinished agent is re-assigned the nearest unclaimed unvisited
    target every step and advances one edge along the shortest path toward
    it. Every traversed edge is paid per agent per traversal: two agents on
    the same edge at the same time pay it twice. StepRecord.traversed still
    holds the deduplicated edge set, but step_cost here charges per agent.
    """
    diags = validate(mission)
    if diags:
        raise InfeasibleMissionError("; ".join(diags))
    graph = mission.graph
    cache = cache or PathCache(graph)
    if max_steps is None:
        max_steps = 4 * graph.node_count * graph.node_count

    agents = [AgentState(i, start) for i, start in enumerate(mission.starts)]
    unvisited = frozenset(mission.targets) - {a.position for a in agents}
    records: list[StepRecord] = []
    diagnostic: str | None = None

    while unvisited:
        if all(a.finished for a in agents):
            diagnostic = f"all agents finished with targets still unvisited: {sorted(unvisited)}"
            break
        if len(records) >= max_steps:
            diagnostic = f"step cap {max_steps} reached with targets still unvisited: {sorted(unvisited)}"
            break
        assignment = assign_targets(graph, agents, unvisited, cache)
        staged = []
        for agent in agents:
            if agent.finished:
                staged.append(agent)
                continue
            target = assignment[agent.agent_id]
            if target is None:
                staged.append(replace(agent, assigned_target=None, finished=True))
            else:
                staged.append(replace(agent, assigned_target=target))
        intents = []
        step_cost = 0.0
        for agent in staged:
            if agent.finished or agent.position == agent.assigned_target:
                continue
            route = cache.k_shortest(agent.position, agent.assigned_target, 1).paths[0]
            nxt = route.nodes[1]
            intents.append(MoveIntent(agent.agent_id, agent.position, nxt))
            step_cost += graph.weight(agent.position, nxt)
        moved = {i.agent_id: i.dst for i in intents}
        staged = [
            replace(a, position=moved.get(a.agent_id, a.position),
                    history=a.history + (moved.get(a.agent_id, a.position),))
            for a in staged
        ]
        traversed = frozenset((i.src, i.dst) for i in intents)
        records.append(StepRecord(t=len(records) + 1, traversed=traversed,
                                  intents=tuple(intents), step_cost=step_cost))
        agents = staged
        unvisited = unvisited - {a.position for a in agents}

    return MissionResult(
        per_agent_paths=tuple(a.history for a in agents),
        steps=tuple(records),
        total_cost=sum(r.step_cost for r in records),
        completed=not unvisited,
        steps_taken=len(records),
        diagnostic=diagnostic,
    )


def brute_force_optimal(mission: Mission, horizon: int) -> OracleResult:
    """Exhaustive minimum over joint action sequences up to ``horizon`` steps.

    Every agent either waits or crosses one out-edge per step; edges shared
    within a step are paid once. Returns infinity with no witness when no
    sequence covers all targets in time. Pruning: abandon branches whose
    partial cost meets the incumbent, and memoize the best partial cost per
    (positions, visited, t) state. Hard instance limits keep the search at
    desk scale: n <= 3 agents, m <= 12 nodes, horizon <= 12.
    """
    graph = mission.graph
    n = len(mission.starts)
    if n > 3:
        raise OracleLimitError(f"at most 3 agents (got {n})")
    if graph.node_count > 12:
        raise OracleLimitError(f"at most 12 nodes (got {graph.node_count})")
    if horizon > 12:
        raise OracleLimitError(f"horizon at most 12 (got {horizon})")
    diags = validate(mission)
    if diags:
        raise InfeasibleMissionError("; ".join(diags))

    targets = frozenset(mission.targets)
    start_positions = tuple(mission.starts)
    start_visited = frozenset(p for p in start_positions if p in targets)

    best_cost = math.inf
    best_actions: list[tuple[int, ...]] | None = None
    seen: dict[tuple[tuple[int, ...], frozenset[int], int], float] = {}
    explored = 0

    moves_from = {
        u: (u,) + tuple(v for v, _ in graph.out_edges(u)) for u in range(graph.node_count)
    }

    def search(positions: tuple[int, ...], visited: frozenset[int], t: int,
               cost: float, actions: list[tuple[int, ...]]) -> None:
        nonlocal best_cost, best_actions, explored
        explored += 1
        if visited == targets:
            if cost < best_cost:
                best_cost = cost
                best_actions = list(actions)
            return
        if t >= horizon or cost >= best_cost:
            return
        key = (positions, visited, t)
        if seen.get(key, math.inf) <= cost:
            return
        seen[key] = cost

        def expand(idx: int, joint: list[int]) -> None:
            if idx == n:
                move = tuple(joint)
                edges = {(positions[i], move[i]) for i in range(n) if move[i] != positions[i]}
                inc = sum(graph.weight(u, v) for u, v in sorted(edges))
                new_visited = visited | (targets & set(move))
                actions.append(move)
                search(move, new_visited, t + 1, cost + inc, actions)
                actions.pop()
                return
            for nxt in moves_from[positions[idx]]:
                joint.append(nxt)
                expand(idx + 1, joint)
                joint.pop()

        expand(0, [])

    search(start_positions, start_visited, 0, 0.0, [])

    if best_actions is None:
        return OracleResult(math.inf, None, explored)
    paths = [[p] for p in start_positions]
    for move in best_actions:
        for i in range(n):
            paths[i].append(move[i])
    return OracleResult(best_cost, tuple(tuple(p) for p in paths), explored)

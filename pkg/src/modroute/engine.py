"""Force-based routing of modular agents.

Each timestep every unfinished agent claims a target, scores its candidate
edges by inverse-square attraction toward its target and toward the other
agents, and moves along the strongest edge; mutually swapping pairs are
defused by a waiting policy. Agents that traverse the same edge at the
same timestep pay its weight once, which is what rewards traveling
together.

The per-step cost unit is the deduplicated set of edges traversed at that
step; a mission's total cost is the sum of its step costs. Runs are fully
deterministic for a fixed (mission, parameters, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .graph import Graph, InfeasibleMissionError, Mission, validate
from .paths import PathCache


@dataclass(frozen=True)
class ForceParams:
    """Tuning constants for the attraction model.

    ``alpha`` scales agent-agent attraction, ``beta`` agent-target
    attraction, and ``k`` is the number of cheapest loopless paths sampled
    per attraction source. With ``force_sum`` every sampled path through a
    candidate edge contributes, instead of only the strongest one.
    """

    alpha: float = 0.5
    beta: float = 1.0
    k: int = 5
    force_sum: bool = False

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("alpha and beta cannot both be zero")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class AgentState:
    """One agent: position, claimed target, and the nodes visited so far."""

    agent_id: int
    position: int
    assigned_target: int | None = None
    finished: bool = False
    history: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.history:
            object.__setattr__(self, "history", (self.position,))


@dataclass(frozen=True)
class EdgeForces:
    """Total attraction per candidate edge out of one agent's position."""

    agent_id: int
    entries: dict[tuple[int, int], float]


@dataclass(frozen=True)
class MoveIntent:
    """One agent's move for the current step; ``src == dst`` is a wait."""

    agent_id: int
    src: int
    dst: int
    waiting: bool = False


@dataclass(frozen=True)
class StepRecord:
    """Edges traversed at one timestep and the cost charged for them."""

    t: int
    traversed: frozenset[tuple[int, int]]
    intents: tuple[MoveIntent, ...]
    step_cost: float


@dataclass(frozen=True)
class MissionResult:
    per_agent_paths: tuple[tuple[int, ...], ...]
    steps: tuple[StepRecord, ...]
    total_cost: float
    completed: bool
    steps_taken: int
    diagnostic: str | None = None


def assign_targets(
    graph: Graph,
    agents: list[AgentState],
    unvisited: frozenset[int] | set[int],
    cache: PathCache | None = None,
) -> dict[int, int | None]:
    """Point each unfinished agent at its nearest unvisited target.

    Agents are processed in ascending id. Each takes the unvisited target
    of minimum Dijkstra distance from its position; two agents may end up
    chasing the same node. Only among exact distance ties does an agent
    prefer a target nobody has claimed this step (then the smallest id),
    which is how co-located agents fan out over equally near targets.
    An agent maps to None, and will stop for good, when it can reach no
    unvisited target or every unvisited target is already claimed while
    none of its nearest ones is free.
    """
    cache = cache or PathCache(graph)
    result: dict[int, int | None] = {}
    claimed: set[int] = set()
    targets = sorted(unvisited)
    for agent in sorted((a for a in agents if not a.finished), key=lambda a: a.agent_id):
        dist = cache.distances(agent.position)
        reachable = [t for t in targets if dist[t] < float("inf")]
        if not reachable:
            result[agent.agent_id] = None
            continue
        d_min = min(dist[t] for t in reachable)
        nearest = [t for t in reachable if dist[t] == d_min]
        free = [t for t in nearest if t not in claimed]
        if free:
            choice = free[0]
        elif all(t in claimed for t in reachable):
            result[agent.agent_id] = None
            continue
        else:
            choice = nearest[0]
        result[agent.agent_id] = choice
        claimed.add(choice)
    return result


def attractive_force(scale: float, d: float) -> float:
    """Inverse-square attraction ``scale / d**2`` for a path of weight d."""
    if d <= 0:
        raise ValueError(f"attraction undefined for non-positive distance {d}")
    return scale / (d * d)


def compute_edge_forces(
    graph: Graph,
    agent: AgentState,
    others: list[AgentState],
    params: ForceParams,
    cache: PathCache | None = None,
) -> EdgeForces:
    """Score the agent's candidate edges by total attraction.

    For the claimed target (scaled by beta) and every unfinished other
    agent at a distinct position (scaled by alpha), the k cheapest loopless
    paths are sampled and each path's force is attributed to its first
    edge. Per source, only the strongest path through a given first edge
    counts (all of them with ``force_sum``); the per-edge totals sum over
    sources. Edges that start no sampled path are absent from the map.
    """
    cache = cache or PathCache(graph)
    destinations: list[tuple[int, float]] = []
    if agent.assigned_target is not None and params.beta > 0:
        destinations.append((agent.assigned_target, params.beta))
    if params.alpha > 0:
        for other in sorted(others, key=lambda a: a.agent_id):
            if other.finished or other.agent_id == agent.agent_id:
                continue
            if other.position == agent.position:
                continue  # co-located pair: zero distance, excluded
            destinations.append((other.position, params.alpha))

    entries: dict[tuple[int, int], float] = {}
    for dest, scale in destinations:
        per_edge: dict[tuple[int, int], float] = {}
        for path in cache.k_shortest(agent.position, dest, params.k).paths:
            if len(path.nodes) < 2:
                continue
            edge = (path.nodes[0], path.nodes[1])
            force = attractive_force(scale, path.total_weight)
            if params.force_sum:
                per_edge[edge] = per_edge.get(edge, 0.0) + force
            else:
                per_edge[edge] = max(per_edge.get(edge, 0.0), force)
        for edge, force in per_edge.items():
            entries[edge] = entries.get(edge, 0.0) + force
    return EdgeForces(agent.agent_id, entries)


def select_edge(forces: EdgeForces, position: int) -> MoveIntent:
    """Pick the strongest candidate edge; wait in place if there is none.

    Exact force ties break toward the smaller destination node id.
    """
    best_edge: tuple[int, int] | None = None
    best_force = float("-inf")
    for edge, force in forces.entries.items():
        if force > best_force or (force == best_force and edge[1] < best_edge[1]):
            best_edge, best_force = edge, force
    if best_edge is None:
        return MoveIntent(forces.agent_id, position, position, waiting=True)
    return MoveIntent(forces.agent_id, best_edge[0], best_edge[1])


def resolve_waits(
    graph: Graph,
    intents: list[MoveIntent],
    agents: list[AgentState],
    rng: random.Random,
    cache: PathCache | None = None,
) -> list[MoveIntent]:
    """Order agents to wait where a one-step delay lets another one join.

    Two triggers, both between unfinished agents at distinct positions:

    * Swap deadlock: the pair intend to move onto each other's nodes. The
      agent whose remaining distance to its claimed target is smaller
      waits one step; an exact distance tie is settled by one fair draw
      from the seeded stream.
    * Catch-up: one agent is about to land on the other's node. If the
      agent being landed on is the one closer to its target, it waits that
      step so the arriving agent joins it instead of chasing a vacated
      node; otherwise both proceed.

    A single pass runs per timestep, re-checking current intents so an
    agent already converted to waiting triggers no further pair.
    """
    cache = cache or PathCache(graph)
    by_id = {a.agent_id: a for a in agents}
    order = sorted(i.agent_id for i in intents)
    current = {i.agent_id: i for i in intents}

    def target_distance(agent: AgentState) -> float:
        return cache.distance(agent.position, agent.assigned_target)

    def make_wait(agent_id: int) -> None:
        pos = by_id[agent_id].position
        current[agent_id] = replace(current[agent_id], dst=pos, waiting=True)

    for idx, first_id in enumerate(order):
        for second_id in order[idx + 1 :]:
            a, b = by_id[first_id], by_id[second_id]
            ia, ib = current[first_id], current[second_id]
            if a.position == b.position:
                continue
            if a.assigned_target is None or b.assigned_target is None:
                continue
            a_lands_on_b = not ia.waiting and ia.dst == b.position
            b_lands_on_a = not ib.waiting and ib.dst == a.position
            if not (a_lands_on_b or b_lands_on_a):
                continue
            dist_a, dist_b = target_distance(a), target_distance(b)
            if a_lands_on_b and b_lands_on_a:
                if dist_a < dist_b:
                    make_wait(first_id)
                elif dist_b < dist_a:
                    make_wait(second_id)
                else:
                    make_wait(first_id if rng.random() < 0.5 else second_id)
            elif a_lands_on_b and dist_b < dist_a:
                make_wait(second_id)
            elif b_lands_on_a and dist_a < dist_b:
                make_wait(first_id)
    return [current[i.agent_id] for i in intents]


def step(
    graph: Graph,
    agents: list[AgentState],
    unvisited: frozenset[int] | set[int],
    params: ForceParams,
    rng: random.Random,
    *,
    t: int = 1,
    cache: PathCache | None = None,
    wait_cost: float = 0.0,
    waiting: bool = True,
) -> tuple[list[AgentState], frozenset[int], StepRecord]:
    """Advance the system one timestep.

    Pipeline: claim targets, score forces, pick edges, defuse swaps, then
    move every agent simultaneously. Agents without a claimable target are
    marked finished and stop moving. After movement any unvisited target
    standing under an agent becomes visited. The step cost sums the weights
    of the deduplicated traversed edge set plus ``wait_cost`` per waiting
    agent.
    """
    cache = cache or PathCache(graph)
    assignment = assign_targets(graph, agents, unvisited, cache)
    staged: list[AgentState] = []
    for agent in agents:
        if agent.finished:
            staged.append(agent)
            continue
        target = assignment[agent.agent_id]
        if target is None:
            staged.append(replace(agent, assigned_target=None, finished=True))
        else:
            staged.append(replace(agent, assigned_target=target))

    active = [a for a in staged if not a.finished]
    intents = [
        select_edge(
            compute_edge_forces(graph, agent, [o for o in active if o is not agent], params, cache),
            agent.position,
        )
        for agent in active
    ]
    if waiting:
        intents = resolve_waits(graph, intents, active, rng, cache)

    moved = {i.agent_id: i.dst for i in intents}
    next_agents = [
        replace(a, position=moved.get(a.agent_id, a.position),
                history=a.history + (moved.get(a.agent_id, a.position),))
        for a in staged
    ]

    traversed = frozenset((i.src, i.dst) for i in intents if i.src != i.dst)
    n_waiting = sum(1 for i in intents if i.waiting)
    step_cost = sum(graph.weight(u, v) for u, v in sorted(traversed)) + wait_cost * n_waiting
    occupied = {a.position for a in next_agents}
    record = StepRecord(t=t, traversed=traversed, intents=tuple(intents), step_cost=step_cost)
    return next_agents, frozenset(unvisited) - occupied, record


def run_mission(
    mission: Mission,
    params: ForceParams | None = None,
    seed: int = 0,
    max_steps: int | None = None,
    *,
    wait_cost: float = 0.0,
    waiting: bool = True,
    cache: PathCache | None = None,
) -> MissionResult:
    """Run the force-based router until all targets are visited.

    Targets occupied at the start count as visited at t=0. The run aborts
    with ``completed=False`` and a diagnostic when the step cap (default
    ``4 * m**2``, a generous multiple of the worst-case step count) is hit,
    which signals oscillation, or when every agent has finished while
    targets remain unreachable.
    """
    diags = validate(mission)
    if diags:
        raise InfeasibleMissionError("; ".join(diags))
    graph = mission.graph
    params = params or ForceParams()
    cache = cache or PathCache(graph)
    rng = random.Random(seed)
    if max_steps is None:
        max_steps = 4 * graph.node_count * graph.node_count

    agents = [AgentState(i, start) for i, start in enumerate(mission.starts)]
    unvisited = frozenset(mission.targets) - {a.position for a in agents}
    records: list[StepRecord] = []
    diagnostic: str | None = None

    while unvisited:
        if all(a.finished for a in agents):
            diagnostic = (
                f"all agents finished with targets still unvisited: {sorted(unvisited)}"
            )
            break
        if len(records) >= max_steps:
            diagnostic = (
                f"step cap {max_steps} reached with targets still unvisited: "
                f"{sorted(unvisited)} (likely oscillation)"
            )
            break
        agents, unvisited, record = step(
            graph, agents, unvisited, params, rng,
            t=len(records) + 1, cache=cache, wait_cost=wait_cost, waiting=waiting,
        )
        records.append(record)

    return MissionResult(
        per_agent_paths=tuple(a.history for a in agents),
        steps=tuple(records),
        total_cost=sum(r.step_cost for r in records),
        completed=not unvisited,
        steps_taken=len(records),
        diagnostic=diagnostic,
    )

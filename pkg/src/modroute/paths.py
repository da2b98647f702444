"""Shortest-path primitives: Dijkstra, k shortest loopless paths, caching.

All tie-breaking is deterministic. Among equal-weight paths the
lexicographically smallest node sequence wins, so outputs are identical
across runs and platforms. A path's weight is always the left-to-right
fold of its edge weights, which keeps floating-point results reproducible
and lets independent recomputations compare exactly.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .graph import Graph


@dataclass(frozen=True)
class Path:
    """A loopless node sequence together with its total edge weight."""

    nodes: tuple[int, ...]
    total_weight: float


@dataclass(frozen=True)
class PathSet:
    """Up to k distinct loopless paths, ascending by (weight, sequence)."""

    origin: int
    destination: int
    paths: tuple[Path, ...]


def path_weight(graph: Graph, nodes: list[int] | tuple[int, ...]) -> float:
    """Sum of edge weights along ``nodes``; 0 for a single-node path.

    Raises ValueError when a consecutive pair is not a graph edge.
    """
    total = 0.0
    for u, v in zip(nodes, nodes[1:]):
        total += graph.weight(u, v)
    return total


def dijkstra(graph: Graph, src: int) -> dict[int, tuple[float, int | None]]:
    """Single-source shortest distances with predecessors.

    Unreachable nodes map to ``(inf, None)``; ``src`` maps to ``(0, None)``.
    """
    m = graph.node_count
    if not (0 <= src < m):
        raise ValueError(f"source {src} out of range [0,{m})")
    dist = [math.inf] * m
    pred: list[int | None] = [None] * m
    dist[src] = 0.0
    heap: list[tuple[float, int]] = [(0.0, src)]
    settled = [False] * m
    while heap:
        d, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        for v, w in graph.out_edges(u):
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return {v: (dist[v], pred[v]) for v in range(m)}


def _lex_shortest(
    graph: Graph,
    src: int,
    dst: int,
    banned_nodes: set[int] = frozenset(),
    banned_edges: set[tuple[int, int]] = frozenset(),
) -> tuple[tuple[int, ...], float] | None:
    """Minimum-weight src->dst path, lexicographically smallest among ties.

    Label-setting search keyed on (distance, node sequence): the first time
    the destination is settled its key is minimal under that order. Banned
    nodes and directed edges are skipped, which is what the deviation step
    of the k-shortest search needs.
    """
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (src,))]
    settled: set[int] = set()
    while heap:
        d, nodes = heapq.heappop(heap)
        u = nodes[-1]
        if u in settled:
            continue
        settled.add(u)
        if u == dst:
            return nodes, d
        for v, w in graph.out_edges(u):
            if v in settled or v in banned_nodes or (u, v) in banned_edges:
                continue
            heapq.heappush(heap, (d + w, nodes + (v,)))
    return None


def yen_k_shortest(graph: Graph, src: int, dst: int, k: int) -> PathSet:
    """The k shortest loopless src->dst paths by deviation search.

    Returns fewer than k paths when fewer exist and an empty PathSet when
    the destination is unreachable. ``src == dst`` yields the single
    zero-length path. Candidates are kept in a heap keyed by
    (weight, node sequence) so the output order is deterministic.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if src == dst:
        return PathSet(src, dst, (Path((src,), 0.0),))
    first = _lex_shortest(graph, src, dst)
    if first is None:
        return PathSet(src, dst, ())

    found: list[tuple[tuple[int, ...], float]] = [(first[0], path_weight(graph, first[0]))]
    found_set = {first[0]}
    candidates: list[tuple[float, tuple[int, ...]]] = []
    in_candidates: set[tuple[int, ...]] = set()

    while len(found) < k:
        prev_nodes, _ = found[-1]
        for i in range(len(prev_nodes) - 1):
            spur = prev_nodes[i]
            root = prev_nodes[: i + 1]
            banned_edges = {
                (p[i], p[i + 1]) for p, _ in found if len(p) > i + 1 and p[: i + 1] == root
            }
            banned_nodes = set(root[:-1])
            spur_result = _lex_shortest(graph, spur, dst, banned_nodes, banned_edges)
            if spur_result is None:
                continue
            total = root[:-1] + spur_result[0]
            if total in found_set or total in in_candidates:
                continue
            heapq.heappush(candidates, (path_weight(graph, total), total))
            in_candidates.add(total)
        if not candidates:
            break
        w, nodes = heapq.heappop(candidates)
        in_candidates.discard(nodes)
        found.append((nodes, w))
        found_set.add(nodes)

    return PathSet(src, dst, tuple(Path(nodes, w) for nodes, w in found))


class PathCache:
    """Memoized shortest-path queries over one immutable graph.

    Dijkstra distance maps and k-shortest path sets are pure functions of
    the graph, so results can be shared across steps, missions, and whole
    experiment batches without affecting determinism.
    """

    def __init__(self, graph: Graph) -> None:
        self.graph = graph
        self._dist: dict[int, list[float]] = {}
        self._kpaths: dict[tuple[int, int, int], PathSet] = {}

    def distances(self, src: int) -> list[float]:
        """Dense distance vector from ``src`` (inf where unreachable)."""
        cached = self._dist.get(src)
        if cached is None:
            full = dijkstra(self.graph, src)
            cached = [full[v][0] for v in range(self.graph.node_count)]
            self._dist[src] = cached
        return cached

    def distance(self, src: int, dst: int) -> float:
        return self.distances(src)[dst]

    def k_shortest(self, src: int, dst: int, k: int) -> PathSet:
        key = (src, dst, k)
        cached = self._kpaths.get(key)
        if cached is None:
            cached = yen_k_shortest(self.graph, src, dst, k)
            self._kpaths[key] = cached
        return cached

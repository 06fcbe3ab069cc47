# lpcut/app/flow/mincut.py
# s-t max-flow / min-cut on a capacitated directed network.

import math
from collections import deque
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.models.pydantic_models import CutResult, CutSide
from app.shared_services.errors import InputError, LpCutError
from app.shared_services.logger_setup import setup_logger

logger = setup_logger()


class Terminal(str, Enum):
    SOURCE = "source"
    SINK = "sink"


SOURCE = Terminal.SOURCE
SINK = Terminal.SINK

Endpoint = Union[int, Terminal]


class FlowNetwork:
    """
    Directed network between a source, a sink and node_count plain nodes.

    Every add_edge call on a node pair shares one pair of residual arcs,
    u->v and v->u, so repeated calls accumulate capacity. Solving uses
    shortest augmenting paths (Edmonds-Karp); arcs keep insertion order,
    which makes the resulting cut deterministic.

    A network is owned by a single writer while it is built and solved.
    """

    def __init__(self, node_count: int = 0):
        if node_count < 0:
            raise InputError("node_count must be non-negative")
        self._node_count = node_count
        self._ends: List[Tuple[Endpoint, Endpoint]] = []
        self._cap: List[float] = []  # arc 2k is u->v, arc 2k+1 is v->u
        self._pairs: Dict[Tuple[Endpoint, Endpoint], int] = {}
        self._residual: Optional[List[float]] = None
        self._result: Optional[CutResult] = None

    # --- construction ---

    @property
    def node_count(self) -> int:
        return self._node_count

    def add_node(self) -> int:
        self._node_count += 1
        self._invalidate()
        return self._node_count - 1

    def add_nodes(self, count: int) -> range:
        start = self._node_count
        self._node_count += count
        self._invalidate()
        return range(start, self._node_count)

    def _check_endpoint(self, v: Endpoint) -> None:
        if isinstance(v, Terminal):
            return
        if isinstance(v, bool) or not isinstance(v, int) or not (0 <= v < self._node_count):
            raise InputError(f"unknown node {v!r}; network has {self._node_count} nodes")

    def add_edge(self, u: Endpoint, v: Endpoint, cap_uv: float, cap_vu: float = 0.0) -> None:
        """Add capacity cap_uv on u->v and cap_vu on v->u."""
        self._check_endpoint(u)
        self._check_endpoint(v)
        if u == v:
            raise InputError(f"arc endpoints must differ, got {u!r} twice")
        if isinstance(u, Terminal) and isinstance(v, Terminal):
            raise InputError("arcs directly between source and sink are not allowed")
        for cap in (cap_uv, cap_vu):
            if not (isinstance(cap, (int, float)) and math.isfinite(cap) and cap >= 0):
                raise InputError(f"capacity must be finite and non-negative, got {cap!r}")
        if (u, v) in self._pairs:
            k = self._pairs[(u, v)]
        elif (v, u) in self._pairs:
            k = self._pairs[(v, u)]
            cap_uv, cap_vu = cap_vu, cap_uv
        else:
            k = len(self._ends)
            self._pairs[(u, v)] = k
            self._ends.append((u, v))
            self._cap.extend([0.0, 0.0])
        self._cap[2 * k] += float(cap_uv)
        self._cap[2 * k + 1] += float(cap_vu)
        self._invalidate()

    def add_tedge(self, i: int, cap_source: float, cap_sink: float) -> None:
        """Terminal arcs source->i and i->sink, as in PyMaxflow."""
        self.add_edge(SOURCE, i, cap_source, 0.0)
        self.add_edge(i, SINK, cap_sink, 0.0)

    @property
    def arcs(self) -> List[Tuple[Endpoint, Endpoint, float, float]]:
        """(tail, head, capacity, reverse_capacity) per node pair, insertion order."""
        return [(u, v, self._cap[2 * k], self._cap[2 * k + 1]) for k, (u, v) in enumerate(self._ends)]

    def _invalidate(self) -> None:
        self._residual = None
        self._result = None

    # --- solving ---

    def _index(self, v: Endpoint) -> int:
        if v == SOURCE:
            return self._node_count
        if v == SINK:
            return self._node_count + 1
        return v

    def max_flow(self, rel_tol: float = 1e-12) -> CutResult:
        """
        Maximum source->sink flow and the minimum cut found by residual
        reachability from the source.

        Residual capacities at or below rel_tol * (largest capacity) count as
        saturated. Unreachable nodes, isolated ones included, are on the sink
        side, so among several minimum cuts the one with the smallest source
        side is returned.
        """
        n = self._node_count
        s, t = n, n + 1
        head: List[int] = []
        adjacency: List[List[int]] = [[] for _ in range(n + 2)]
        for k, (u, v) in enumerate(self._ends):
            iu, iv = self._index(u), self._index(v)
            adjacency[iu].append(2 * k)
            adjacency[iv].append(2 * k + 1)
            head.extend([iv, iu])
        residual = list(self._cap)
        eps = rel_tol * max(self._cap, default=0.0)

        total = 0.0
        augmentations = 0
        while True:
            parent = self._bfs(s, adjacency, head, residual, eps, stop=t)
            if parent[t] == -1:
                break
            bottleneck = math.inf
            v = t
            while v != s:
                arc = parent[v]
                bottleneck = min(bottleneck, residual[arc])
                v = head[arc ^ 1]
            v = t
            while v != s:
                arc = parent[v]
                residual[arc] -= bottleneck
                residual[arc ^ 1] += bottleneck
                v = head[arc ^ 1]
            total += bottleneck
            augmentations += 1

        reached = self._bfs(s, adjacency, head, residual, eps, stop=None)
        side = tuple(CutSide.SOURCE_SIDE if reached[i] != -1 else CutSide.SINK_SIDE for i in range(n))
        self._residual = residual
        self._result = CutResult(flow_value=total, side=side)
        logger.debug(f"max_flow: {n} nodes, {len(self._ends)} arc pairs, {augmentations} augmentations, flow {total}")
        return self._result

    @staticmethod
    def _bfs(s: int, adjacency: List[List[int]], head: List[int], residual: List[float],
             eps: float, stop: Optional[int]) -> List[int]:
        # parent[v] is the arc used to reach v, -2 for the start, -1 if unreached
        parent = [-1] * len(adjacency)
        parent[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for arc in adjacency[u]:
                v = head[arc]
                if parent[v] == -1 and residual[arc] > eps:
                    parent[v] = arc
                    if v == stop:
                        return parent
                    queue.append(v)
        return parent

    # --- results ---

    def _solved(self) -> CutResult:
        if self._result is None:
            raise LpCutError("network has not been solved; call max_flow() first")
        return self._result

    def get_segment(self, i: int) -> CutSide:
        self._check_endpoint(i)
        return self._solved().side[i]

    def residual_capacities(self) -> List[Tuple[Endpoint, Endpoint, float, float]]:
        """(tail, head, residual u->v, residual v->u) per node pair after solving."""
        self._solved()
        return [(u, v, self._residual[2 * k], self._residual[2 * k + 1]) for k, (u, v) in enumerate(self._ends)]

    def arc_flows(self) -> List[Tuple[Endpoint, Endpoint, float]]:
        """Net flow from tail to head per node pair (negative means head->tail)."""
        self._solved()
        return [(u, v, self._cap[2 * k] - self._residual[2 * k]) for k, (u, v) in enumerate(self._ends)]

    def cut_capacity(self, side: Sequence[CutSide]) -> float:
        """Total capacity from the source side (plus source) to the sink side (plus sink)."""
        if len(side) != self._node_count:
            raise InputError(f"side has {len(side)} entries for {self._node_count} nodes")

        def on_source_side(v: Endpoint) -> bool:
            if v == SOURCE:
                return True
            if v == SINK:
                return False
            return side[v] == CutSide.SOURCE_SIDE

        total = 0.0
        for k, (u, v) in enumerate(self._ends):
            su, sv = on_source_side(u), on_source_side(v)
            if su and not sv:
                total += self._cap[2 * k]
            elif sv and not su:
                total += self._cap[2 * k + 1]
        return total

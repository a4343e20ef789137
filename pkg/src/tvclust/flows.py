"""Exact max-flow / min-cut and circulation feasibility on integer networks.

Dinic's algorithm (BFS level graphs + blocking flows, the
shortest-augmenting-path family), exact on integer capacities.  Unbounded
arcs use a finite stand-in capacity that exceeds the total finite capacity
of the network, so they can never lie on a minimum cut; callers get it
from :func:`infinite_capacity`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


def infinite_capacity(finite_caps) -> int:
    """A capacity strictly larger than any cut made of the given finite caps."""
    return int(sum(finite_caps)) + 1


@dataclass
class FlowNetwork:
    """Directed network with integer arc capacities and a residual view.

    Arcs are stored in pairs: arc 2a and its reverse 2a+1, so the residual
    capacity of an arc's reverse is tracked for free.
    """

    num_nodes: int
    _to: list[int] = field(default_factory=list)
    _cap: list[int] = field(default_factory=list)
    _out: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self._out:
            self._out = [[] for _ in range(self.num_nodes)]

    def add_arc(self, u: int, v: int, capacity: int) -> int:
        """Add arc u -> v; returns its index (reverse arc is index ^ 1)."""
        if capacity < 0:
            raise ValueError(f"negative capacity {capacity}")
        idx = len(self._to)
        self._to.extend([v, u])
        self._cap.extend([int(capacity), 0])
        self._out[u].append(idx)
        self._out[v].append(idx + 1)
        return idx

    def flow_on(self, arc: int) -> int:
        """Flow currently routed through arc `arc` (residual of its reverse)."""
        return self._cap[arc ^ 1]

    def max_flow(self, source: int, sink: int) -> int:
        """Push the maximum flow from source to sink; returns its value."""
        if source == sink:
            raise ValueError("source and sink coincide")
        total = 0
        while True:
            level = self._bfs_levels(source, sink)
            if level[sink] < 0:
                return total
            it = [0] * self.num_nodes
            while True:
                pushed = self._dfs_push(source, sink, float("inf"), level, it)
                if pushed == 0:
                    break
                total += pushed

    def _bfs_levels(self, source: int, sink: int) -> list[int]:
        level = [-1] * self.num_nodes
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in self._out[u]:
                v = self._to[a]
                if self._cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def _dfs_push(self, u, sink, limit, level, it) -> int:
        if u == sink:
            return int(limit)
        while it[u] < len(self._out[u]):
            a = self._out[u][it[u]]
            v = self._to[a]
            if self._cap[a] > 0 and level[v] == level[u] + 1:
                pushed = self._dfs_push(v, sink, min(limit, self._cap[a]), level, it)
                if pushed > 0:
                    self._cap[a] -= pushed
                    self._cap[a ^ 1] += pushed
                    return pushed
            it[u] += 1
        level[u] = -1
        return 0

    def reachable_in_residual(self, source: int) -> list[bool]:
        """Nodes reachable from `source` along arcs with residual capacity."""
        seen = [False] * self.num_nodes
        seen[source] = True
        stack = [source]
        while stack:
            u = stack.pop()
            for a in self._out[u]:
                v = self._to[a]
                if self._cap[a] > 0 and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return seen

    def coreachable_in_residual(self, sink: int) -> list[bool]:
        """Nodes that can reach `sink` along arcs with residual capacity."""
        seen = [False] * self.num_nodes
        seen[sink] = True
        stack = [sink]
        while stack:
            v = stack.pop()
            for a in self._out[v]:
                # a points v -> u, so a^1 is u -> v; u co-reaches if that
                # residual arc is open
                u = self._to[a]
                if self._cap[a ^ 1] > 0 and not seen[u]:
                    seen[u] = True
                    stack.append(u)
        return seen


def min_cut(network: FlowNetwork, source: int, sink: int):
    """Run max-flow and return (value, source_side, unique).

    source_side is the set of nodes reachable from the source in the final
    residual network (the minimal minimum cut).  `unique` is True iff the
    minimum cut is unique, decided by comparing the minimal source side
    with the complement of the nodes that co-reach the sink.
    """
    value = network.max_flow(source, sink)
    reach = network.reachable_in_residual(source)
    coreach = network.coreachable_in_residual(sink)
    source_side = {i for i, r in enumerate(reach) if r}
    unique = all(reach[i] != coreach[i] for i in range(network.num_nodes))
    return value, source_side, unique


def circulation_feasible(num_nodes: int, arcs) -> bool:
    """Decide whether a circulation within the given arc bounds exists.

    `arcs` is an iterable of (u, v, lower, upper) with integer
    0 <= lower <= upper.  Uses the classical reduction: route the lower
    bounds unconditionally, then check with one max-flow whether the
    resulting node imbalances can be cancelled inside the residual
    capacities.
    """
    excess = [0] * num_nodes
    net = FlowNetwork(num_nodes + 2)
    s_star, t_star = num_nodes, num_nodes + 1
    for u, v, lo, hi in arcs:
        if not 0 <= lo <= hi:
            raise ValueError(f"invalid bounds [{lo}, {hi}] on arc ({u}, {v})")
        net.add_arc(u, v, hi - lo)
        excess[v] += lo
        excess[u] -= lo
    demand = 0
    for node, e in enumerate(excess):
        if e > 0:
            net.add_arc(s_star, node, e)
            demand += e
        elif e < 0:
            net.add_arc(node, t_star, -e)
    return net.max_flow(s_star, t_star) == demand

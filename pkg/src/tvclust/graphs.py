"""Undirected graphs with a canonical edge orientation.

Every undirected edge {i, j} is stored once as the oriented pair
(head, tail) = (min(i, j), max(i, j)).  With this convention the signed
incidence matrix D (one row per edge, +1 at the head, -1 at the tail)
satisfies D.T @ D == L, the combinatorial Laplacian, and the total
variation of a node signal x is the L1 norm of D @ x.

Node ids are 0-based contiguous integers.  Cluster indices in
:class:`Partition` are 1-based.  All objects are immutable after
construction (backing arrays are marked read-only) and every function
here is pure, so everything can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Dense incidence/Laplacian matrices are refused above this node count;
# TV and quadratic forms stream over the edge list instead.
DENSE_CAP_DEFAULT = 2000


class GraphInputError(ValueError):
    """Base class for invalid graph construction inputs."""


class NodeIndexError(GraphInputError):
    """A node id lies outside 0..num_nodes-1."""


class SelfLoopError(GraphInputError):
    """An edge joins a node to itself."""


class DuplicateEdgeError(GraphInputError):
    """The same undirected edge appears more than once."""


class SignalLengthError(ValueError):
    """A node signal's length does not match the graph's node count."""


class UnknownEdgeError(ValueError):
    """An edge subset refers to a pair that is not an edge of the graph."""


class PartitionError(ValueError):
    """A cluster assignment violates the partition invariants."""


class DenseCapExceededError(ValueError):
    """Dense matrix requested for a graph above the configured node cap."""


class Graph:
    """Immutable undirected graph with oriented edges (head < tail).

    Attributes
    ----------
    num_nodes : int
    edges : (E, 2) int64 array, row e = (head, tail) with head < tail
    degrees : (N,) int64 array
    adjacency : tuple of N sorted int64 arrays (neighbors of each node)
    """

    __slots__ = ("num_nodes", "edges", "degrees", "adjacency", "_edge_index")

    def __init__(self, num_nodes: int, edges: np.ndarray):
        self.num_nodes = int(num_nodes)
        self.edges = edges
        heads, tails = edges[:, 0], edges[:, 1]
        deg = np.bincount(heads, minlength=num_nodes) + np.bincount(
            tails, minlength=num_nodes
        )
        self.degrees = deg.astype(np.int64)
        # adjacency: sort (endpoint, neighbor) pairs once, then slice per node
        src = np.concatenate([heads, tails])
        dst = np.concatenate([tails, heads])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.concatenate([[0], np.cumsum(self.degrees)])
        self.adjacency = tuple(
            dst[offsets[i] : offsets[i + 1]] for i in range(num_nodes)
        )
        self._edge_index = {
            (int(h), int(t)): e for e, (h, t) in enumerate(edges)
        }
        for arr in (self.edges, self.degrees, *self.adjacency):
            arr.flags.writeable = False

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def heads(self) -> np.ndarray:
        return self.edges[:, 0]

    @property
    def tails(self) -> np.ndarray:
        return self.edges[:, 1]

    def edge_id(self, i: int, j: int) -> int:
        """Row index of undirected edge {i, j}; raises UnknownEdgeError."""
        key = (i, j) if i < j else (j, i)
        try:
            return self._edge_index[key]
        except KeyError:
            raise UnknownEdgeError(f"{{{i}, {j}}} is not an edge") from None

    def has_edge(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self._edge_index

    def neighbors(self, i: int) -> np.ndarray:
        return self.adjacency[i]

    def __repr__(self) -> str:
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def build_graph(num_nodes: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Build a validated Graph from unordered node pairs.

    Each pair {i, j} is stored oriented as (min, max).  Out-of-range ids,
    self-loops and duplicate edges raise distinct error types; duplicates
    are treated as corrupt input rather than merged.
    """
    if num_nodes < 1:
        raise GraphInputError(f"num_nodes must be >= 1, got {num_nodes}")
    pairs = np.asarray(list(edge_list), dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise GraphInputError("edge_list must contain node pairs")
    if pairs.shape[0] > 0:
        if pairs.min() < 0 or pairs.max() >= num_nodes:
            bad = pairs[(pairs < 0).any(axis=1) | (pairs >= num_nodes).any(axis=1)]
            raise NodeIndexError(
                f"edge {tuple(bad[0])} has a node id outside 0..{num_nodes - 1}"
            )
        loops = pairs[:, 0] == pairs[:, 1]
        if loops.any():
            raise SelfLoopError(f"self-loop at node {int(pairs[loops][0, 0])}")
    oriented = np.sort(pairs, axis=1)
    codes = oriented[:, 0] * num_nodes + oriented[:, 1]
    uniq, counts = np.unique(codes, return_counts=True)
    if (counts > 1).any():
        dup = int(uniq[counts > 1][0])
        raise DuplicateEdgeError(
            f"duplicate edge {{{dup // num_nodes}, {dup % num_nodes}}}"
        )
    return Graph(num_nodes, oriented)


def _check_signal(g: Graph, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.num_nodes,):
        raise SignalLengthError(
            f"signal has shape {x.shape}, expected ({g.num_nodes},)"
        )
    return x


def incidence_matrix(g: Graph, dense_cap: int = DENSE_CAP_DEFAULT) -> np.ndarray:
    """E x N signed incidence matrix: +1 at each edge's head, -1 at its tail."""
    if g.num_nodes > dense_cap:
        raise DenseCapExceededError(
            f"{g.num_nodes} nodes exceeds dense cap {dense_cap}"
        )
    d = np.zeros((g.num_edges, g.num_nodes))
    rows = np.arange(g.num_edges)
    d[rows, g.heads] = 1.0
    d[rows, g.tails] = -1.0
    return d


def laplacian(g: Graph, dense_cap: int = DENSE_CAP_DEFAULT) -> np.ndarray:
    """N x N combinatorial Laplacian: degrees on the diagonal, -1 per edge."""
    if g.num_nodes > dense_cap:
        raise DenseCapExceededError(
            f"{g.num_nodes} nodes exceeds dense cap {dense_cap}"
        )
    lap = np.zeros((g.num_nodes, g.num_nodes))
    lap[g.heads, g.tails] = -1.0
    lap[g.tails, g.heads] = -1.0
    lap[np.diag_indices(g.num_nodes)] = g.degrees
    return lap


def total_variation(g: Graph, x: np.ndarray) -> float:
    """Sum over edges of |x_j - x_i| (edge-streaming, any graph size)."""
    x = _check_signal(g, x)
    return float(np.abs(x[g.tails] - x[g.heads]).sum())


def total_variation_on_subset(
    g: Graph, x: np.ndarray, edge_subset: Iterable[Sequence[int]]
) -> float:
    """Total variation restricted to the given edges (pairs of node ids)."""
    x = _check_signal(g, x)
    ids = [g.edge_id(int(i), int(j)) for i, j in edge_subset]
    if not ids:
        return 0.0
    ids = np.asarray(ids)
    return float(np.abs(x[g.tails[ids]] - x[g.heads[ids]]).sum())


def laplacian_quadratic(g: Graph, x: np.ndarray) -> float:
    """x.T @ L @ x computed edge-streaming: sum of (x_i - x_j)^2 over edges."""
    x = _check_signal(g, x)
    diff = x[g.tails] - x[g.heads]
    return float(diff @ diff)


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to one of K clusters (indices 1..K)."""

    assignment: np.ndarray  # (N,) int64 values in 1..K
    num_clusters: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.ndim != 1 or a.size == 0:
            raise PartitionError("assignment must be a nonempty 1-d array")
        k = int(self.num_clusters)
        if k < 1:
            raise PartitionError("need at least one cluster")
        if a.min() < 1 or a.max() > k:
            raise PartitionError(f"cluster indices must lie in 1..{k}")
        sizes = np.bincount(a, minlength=k + 1)[1:]
        if (sizes == 0).any():
            empty = int(np.flatnonzero(sizes == 0)[0]) + 1
            raise PartitionError(f"cluster {empty} is empty")
        a.flags.writeable = False
        object.__setattr__(self, "assignment", a)
        object.__setattr__(self, "num_clusters", k)

    @property
    def num_nodes(self) -> int:
        return self.assignment.size

    @property
    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.num_clusters + 1)[1:]

    def nodes_in(self, k: int) -> np.ndarray:
        self._check_k(k)
        return np.flatnonzero(self.assignment == k)

    def _check_k(self, k: int) -> None:
        if not 1 <= k <= self.num_clusters:
            raise PartitionError(
                f"cluster index {k} outside 1..{self.num_clusters}"
            )


def contiguous_partition(cluster_sizes: Sequence[int]) -> Partition:
    """Partition assigning the first n_1 ids to cluster 1, next n_2 to 2, ..."""
    sizes = [int(n) for n in cluster_sizes]
    if any(n < 1 for n in sizes):
        raise PartitionError("all cluster sizes must be >= 1")
    assignment = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    return Partition(assignment, len(sizes))


def boundary_nodes(g: Graph, p: Partition, k: int) -> np.ndarray:
    """Nodes of cluster k adjacent to at least one node outside cluster k."""
    p._check_k(k)
    _check_partition_size(g, p)
    a = p.assignment
    cross = a[g.heads] != a[g.tails]
    on_boundary = np.zeros(g.num_nodes, dtype=bool)
    on_boundary[g.heads[cross]] = True
    on_boundary[g.tails[cross]] = True
    return np.flatnonzero(on_boundary & (a == k))


def boundary_edge_count(g: Graph, p: Partition, k: int) -> int:
    """Number of edges with exactly one endpoint in cluster k.

    This is the Bernoulli-sum reading of the boundary size; the node-set
    reading is :func:`boundary_nodes`.  The two coincide only sometimes.
    """
    p._check_k(k)
    _check_partition_size(g, p)
    a = p.assignment
    in_k = a == k
    return int((in_k[g.heads] != in_k[g.tails]).sum())


def induced_subgraph(g: Graph, nodes: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by `nodes`; returns (subgraph, original-id map).

    New ids 0..len(nodes)-1 follow ascending original id; map[new] = old.
    """
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    new_id = -np.ones(g.num_nodes, dtype=np.int64)
    new_id[nodes] = np.arange(nodes.size)
    keep = (new_id[g.heads] >= 0) & (new_id[g.tails] >= 0)
    sub_edges = np.column_stack([new_id[g.heads[keep]], new_id[g.tails[keep]]])
    return build_graph(nodes.size, sub_edges), nodes


def augmented_subgraph(
    g: Graph, p: Partition, k: int
) -> tuple[Graph, int, np.ndarray]:
    """Cluster k's induced subgraph plus an auxiliary node tied to its boundary.

    Returns (graph, t, node_map): `t` is the new auxiliary node's id (the
    largest id), joined by one edge to every boundary node of cluster k;
    node_map[new_id] = original id for the cluster nodes, and
    node_map[t] = -1.
    """
    members = p.nodes_in(k)
    sub, node_map = induced_subgraph(g, members)
    t = sub.num_nodes
    bnodes = boundary_nodes(g, p, k)
    pos = {int(orig): new for new, orig in enumerate(node_map)}
    extra = [(pos[int(b)], t) for b in bnodes]
    all_edges = np.vstack([sub.edges, np.asarray(extra, dtype=np.int64).reshape(-1, 2)])
    aug = build_graph(t + 1, all_edges)
    return aug, t, np.concatenate([node_map, [-1]])


def _check_partition_size(g: Graph, p: Partition) -> None:
    if p.num_nodes != g.num_nodes:
        raise PartitionError(
            f"partition covers {p.num_nodes} nodes, graph has {g.num_nodes}"
        )


# ---------------------------------------------------------------------------
# File formats: edge lists and partitions as plain text
# ---------------------------------------------------------------------------

def read_edge_list(path, num_nodes: int | None = None) -> Graph:
    """Read a graph from a text file: one `i j` pair per line (0-based ids).

    Lines starting with '#' and blank lines are ignored.  If num_nodes is
    not given it is inferred as max id + 1.
    """
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j = line.split()
            pairs.append((int(i), int(j)))
    if num_nodes is None:
        if not pairs:
            raise GraphInputError(f"{path}: empty edge list and no num_nodes")
        num_nodes = max(max(i, j) for i, j in pairs) + 1
    return build_graph(num_nodes, pairs)


def write_edge_list(path, g: Graph) -> None:
    with open(path, "w") as fh:
        for h, t in g.edges:
            fh.write(f"{h} {t}\n")


def read_partition(path) -> Partition:
    """Read `node_id cluster_index` lines (clusters 1-based)."""
    entries = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            node, c = line.split()
            entries[int(node)] = int(c)
    if not entries:
        raise PartitionError(f"{path}: empty partition file")
    n = max(entries) + 1
    if sorted(entries) != list(range(n)):
        raise PartitionError(f"{path}: node ids must cover 0..{n - 1}")
    assignment = np.array([entries[i] for i in range(n)], dtype=np.int64)
    return Partition(assignment, int(assignment.max()))


def write_partition(path, p: Partition) -> None:
    with open(path, "w") as fh:
        for node, c in enumerate(p.assignment):
            fh.write(f"{node} {c}\n")

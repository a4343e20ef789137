"""Seeded generation of partially labeled stochastic block model instances.

Randomness comes from numpy's Philox engine, a counter-based 64-bit
generator: the Bernoulli variable of node pair (i, j) is read off a fixed
position of one vectorized draw over all pairs in lexicographic order, so
the realized graph depends only on (parameters, seed), never on iteration
or thread order.  Derived streams (graph draw vs. per-cluster seed
selection) are split with numpy's SeedSequence, which is also how sweep
drivers should derive per-run seeds.

Clusters occupy contiguous id blocks: cluster 1 gets ids 0..n_1-1, and so
on.  An optional post-hoc node permutation is available but off by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from tvclust.graphs import (
    Graph,
    Partition,
    build_graph,
    contiguous_partition,
    read_edge_list,
    read_partition,
    write_edge_list,
    write_partition,
)

HEADER_FILE = "header.txt"
EDGES_FILE = "edges.txt"
PARTITION_FILE = "partition.txt"


class SbmParamsError(ValueError):
    """Invalid block-model parameters."""


class SeedCountError(ValueError):
    """Requested more labeled nodes per cluster than the smallest cluster."""


class InstanceFormatError(ValueError):
    """An instance directory is missing files or has a malformed header."""


@dataclass(frozen=True)
class SbmParams:
    """Two-probability block model: p_in within clusters, p_out across."""

    cluster_sizes: tuple[int, ...]
    p_in: float
    p_out: float

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.cluster_sizes)
        if len(sizes) < 1 or any(n < 1 for n in sizes):
            raise SbmParamsError(f"bad cluster sizes {self.cluster_sizes}")
        for name in ("p_in", "p_out"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise SbmParamsError(f"{name}={p} outside [0, 1]")
        object.__setattr__(self, "cluster_sizes", sizes)

    @property
    def num_nodes(self) -> int:
        return sum(self.cluster_sizes)

    @property
    def num_clusters(self) -> int:
        return len(self.cluster_sizes)


@dataclass(frozen=True)
class SeedSet:
    """S labeled nodes per cluster (the sampling set)."""

    per_cluster: tuple[tuple[int, ...], ...]  # index k-1 -> sorted node ids

    @property
    def seeds_per_cluster(self) -> int:
        return len(self.per_cluster[0])

    @property
    def all_nodes(self) -> tuple[int, ...]:
        return tuple(i for group in self.per_cluster for i in group)

    def labels(self) -> dict[int, int]:
        """Mapping node id -> known cluster index (1-based)."""
        return {
            i: k + 1 for k, group in enumerate(self.per_cluster) for i in group
        }


@dataclass(frozen=True)
class SbmInstance:
    graph: Graph
    truth: Partition
    seeds: SeedSet
    params: SbmParams
    rng_seed: int


def generate(params: SbmParams, rng_seed: int) -> tuple[Graph, Partition]:
    """Draw one graph from the block model; bit-reproducible given the seed.

    Each unordered pair i < j gets exactly one Bernoulli draw with success
    probability p_in when both nodes share a cluster and p_out otherwise.
    """
    n = params.num_nodes
    truth = contiguous_partition(params.cluster_sizes)
    rng = np.random.Generator(np.random.Philox(rng_seed))
    iu, ju = np.triu_indices(n, k=1)
    same = truth.assignment[iu] == truth.assignment[ju]
    prob = np.where(same, params.p_in, params.p_out)
    hit = rng.random(iu.size) < prob
    edges = np.column_stack([iu[hit], ju[hit]])
    return build_graph(n, edges), truth


def select_seeds(truth: Partition, s: int, rng_seed: int) -> SeedSet:
    """Draw S labeled nodes uniformly without replacement from each cluster.

    Each cluster uses its own SeedSequence-spawned stream, so the draw for
    cluster k does not depend on how many clusters precede it.
    """
    s = int(s)
    smallest = int(truth.cluster_sizes.min())
    if not 1 <= s <= smallest:
        raise SeedCountError(f"s={s} must be in 1..{smallest} (smallest cluster)")
    if isinstance(rng_seed, np.random.SeedSequence):
        root = rng_seed
    else:
        root = np.random.SeedSequence(rng_seed)
    streams = root.spawn(truth.num_clusters)
    groups = []
    for k in range(1, truth.num_clusters + 1):
        rng = np.random.Generator(np.random.Philox(streams[k - 1]))
        chosen = rng.choice(truth.nodes_in(k), size=s, replace=False)
        groups.append(tuple(int(i) for i in np.sort(chosen)))
    return SeedSet(tuple(groups))


def generate_instance(params: SbmParams, s: int, rng_seed: int) -> SbmInstance:
    """Graph + ground truth + seed set from one recorded 64-bit seed."""
    graph_stream, seed_stream = np.random.SeedSequence(rng_seed).spawn(2)
    graph, truth = generate(params, graph_stream)
    seeds = select_seeds(truth, s, seed_stream)
    return SbmInstance(graph, truth, seeds, params, int(rng_seed))


def permute_instance(instance: SbmInstance, rng_seed: int) -> SbmInstance:
    """Relabel nodes by a uniform random permutation (off the default path)."""
    n = instance.graph.num_nodes
    rng = np.random.Generator(np.random.Philox(rng_seed))
    perm = rng.permutation(n)  # perm[old] = new
    edges = perm[instance.graph.edges]
    graph = build_graph(n, edges)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = instance.truth.assignment
    truth = Partition(assignment, instance.truth.num_clusters)
    seeds = SeedSet(
        tuple(
            tuple(sorted(int(perm[i]) for i in group))
            for group in instance.seeds.per_cluster
        )
    )
    return SbmInstance(graph, truth, seeds, instance.params, instance.rng_seed)


# ---------------------------------------------------------------------------
# Instance serialization: edge list + partition + key=value header
# ---------------------------------------------------------------------------

def write_instance(instance: SbmInstance, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p = instance.params
    seeds_flat = ",".join(str(i) for i in instance.seeds.all_nodes)
    sizes = ",".join(str(n) for n in p.cluster_sizes)
    header = (
        f"n={p.num_nodes}\n"
        f"sizes={sizes}\n"
        f"p_in={p.p_in!r}\n"
        f"p_out={p.p_out!r}\n"
        f"rng_seed={instance.rng_seed}\n"
        f"S={instance.seeds.seeds_per_cluster}\n"
        f"seeds={seeds_flat}\n"
    )
    (out / HEADER_FILE).write_text(header)
    write_edge_list(out / EDGES_FILE, instance.graph)
    write_partition(out / PARTITION_FILE, instance.truth)


def read_instance(in_dir) -> SbmInstance:
    src = Path(in_dir)
    header_path = src / HEADER_FILE
    if not header_path.exists():
        raise InstanceFormatError(f"missing {header_path}")
    fields = {}
    for line in header_path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InstanceFormatError(f"malformed header line: {line!r}")
        key, value = line.split("=", 1)
        fields[key.strip()] = value.strip()
    try:
        n = int(fields["n"])
        sizes = tuple(int(x) for x in fields["sizes"].split(","))
        params = SbmParams(sizes, float(fields["p_in"]), float(fields["p_out"]))
        rng_seed = int(fields["rng_seed"])
        s = int(fields["S"])
        seed_nodes = [int(x) for x in fields["seeds"].split(",") if x != ""]
    except (KeyError, ValueError) as exc:
        raise InstanceFormatError(f"bad header in {header_path}: {exc}") from exc
    if params.num_nodes != n:
        raise InstanceFormatError(f"header n={n} but sizes sum to {params.num_nodes}")
    graph = read_edge_list(src / EDGES_FILE, num_nodes=n)
    truth = read_partition(src / PARTITION_FILE)
    groups: list[list[int]] = [[] for _ in range(truth.num_clusters)]
    for node in seed_nodes:
        groups[int(truth.assignment[node]) - 1].append(node)
    if any(len(g) != s for g in groups):
        raise InstanceFormatError(
            f"header S={s} inconsistent with per-cluster seed counts "
            f"{[len(g) for g in groups]}"
        )
    seeds = SeedSet(tuple(tuple(sorted(g)) for g in groups))
    return SbmInstance(graph, truth, seeds, params, rng_seed)

"""One-vs-rest cluster assignment driver.

For each cluster k the labeled nodes define a 0/1 indicator target (1 on
seeds of cluster k, 0 on every other seed); one TV-minimization solve per
cluster produces an averaged indicator estimate, and every node is
assigned to the cluster whose estimate is largest.  Exact ties go to the
smallest cluster index, which keeps the decoding deterministic and
independent of evaluation order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from tvclust.graphs import Graph, Partition
from tvclust.sbm import SeedSet
from tvclust.solver import SolveDiagnostics, SolverConfig, solve


class SeedLabelError(ValueError):
    """Seed labels that do not cover every cluster index 1..K."""


@dataclass(frozen=True)
class ClusteringResult:
    assignment: np.ndarray  # (N,) estimated cluster index per node, 1..K
    scores: np.ndarray  # (K, N) averaged indicator estimates
    diagnostics: tuple[SolveDiagnostics, ...]  # one entry per cluster

    @property
    def num_clusters(self) -> int:
        return self.scores.shape[0]


def indicator_targets(seed_labels: dict[int, int], k: int) -> dict[int, float]:
    """Seed values for the cluster-k solve: 1 on its seeds, 0 on the rest.

    A k with no seeds yields all-zero targets; callers that cannot make
    sense of that (the full clustering driver) reject it up front.
    """
    return {i: 1.0 if c == k else 0.0 for i, c in seed_labels.items()}


def _check_labels(seed_labels: dict[int, int]) -> int:
    if not seed_labels:
        raise SeedLabelError("no labeled nodes given")
    k_max = max(seed_labels.values())
    if min(seed_labels.values()) < 1:
        raise SeedLabelError("cluster labels must be >= 1")
    present = set(seed_labels.values())
    missing = [k for k in range(1, k_max + 1) if k not in present]
    if missing:
        raise SeedLabelError(f"cluster(s) {missing} have no labeled node")
    return k_max


def cluster(
    g: Graph,
    seed_labels: dict[int, int],
    config: SolverConfig = SolverConfig(),
) -> ClusteringResult:
    """Run K independent indicator solves and decode by argmax.

    The K solves share the immutable graph and are order-independent;
    np.argmax on the stacked score matrix breaks exact ties toward the
    smallest cluster index.
    """
    k_max = _check_labels(seed_labels)
    scores = np.empty((k_max, g.num_nodes))
    diagnostics = []
    for k in range(1, k_max + 1):
        x_bar, diag = solve(g, indicator_targets(seed_labels, k), config)
        scores[k - 1] = x_bar
        diagnostics.append(diag)
    assignment = np.argmax(scores, axis=0) + 1
    return ClusteringResult(assignment, scores, tuple(diagnostics))


def accuracy(
    result: ClusteringResult,
    truth: Partition,
    seeds,
    include_seeds: bool = False,
) -> float:
    """Fraction of unlabeled nodes assigned their true cluster.

    `seeds` is a SeedSet or any iterable of labeled node ids.  When every
    node is labeled (and include_seeds is off) there is nothing to score;
    that degenerate case returns 1.0.  include_seeds adds the labeled
    nodes to the count (debugging aid).
    """
    seed_nodes = seeds.all_nodes if isinstance(seeds, SeedSet) else seeds
    mask = np.ones(truth.num_nodes, dtype=bool)
    if not include_seeds:
        mask[np.asarray(sorted(seed_nodes), dtype=np.int64)] = False
    if not mask.any():
        return 1.0
    correct = result.assignment[mask] == truth.assignment[mask]
    return float(correct.mean())


RESULT_CSV_BASE_COLUMNS = ("node", "true_cluster", "pred_cluster")


def write_result_csv(path, result: ClusteringResult, truth: Partition, seeds) -> None:
    """Per-node results: node,true_cluster,pred_cluster,score_1..score_K,is_seed."""
    seed_nodes = set(seeds.all_nodes if isinstance(seeds, SeedSet) else seeds)
    k_max = result.num_clusters
    header = list(RESULT_CSV_BASE_COLUMNS)
    header += [f"score_{k}" for k in range(1, k_max + 1)]
    header.append("is_seed")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for node in range(truth.num_nodes):
            row = [
                node,
                int(truth.assignment[node]),
                int(result.assignment[node]),
                *[repr(float(result.scores[k, node])) for k in range(k_max)],
                int(node in seed_nodes),
            ]
            writer.writerow(row)

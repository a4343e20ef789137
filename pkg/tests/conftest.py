import numpy as np
import pytest

from tvclust.graphs import build_graph, contiguous_partition

# Two dense 4-node blocks joined by a single bridge edge {3, 4}.
# Nodes 0..3 form block one, nodes 4..7 block two; degrees (2,3,3,3,3,3,3,2).
BRIDGE_EDGES = [
    (0, 1), (0, 2), (1, 2), (1, 3), (2, 3),
    (3, 4),
    (4, 5), (4, 6), (5, 6), (5, 7), (6, 7),
]


@pytest.fixture
def bridge_graph():
    return build_graph(8, BRIDGE_EDGES)


@pytest.fixture
def bridge_partition():
    return contiguous_partition([4, 4])


def random_graph(rng, n, p):
    """Erdos-Renyi draw used as a small-instance generator in tests."""
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.size) < p
    return build_graph(n, np.column_stack([iu[mask], ju[mask]]))


def is_connected(g):
    seen = np.zeros(g.num_nodes, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                stack.append(int(v))
    return bool(seen.all())


def random_connected_graph(rng, n, p, max_tries=1000):
    for _ in range(max_tries):
        g = random_graph(rng, n, p)
        if is_connected(g):
            return g
    raise RuntimeError("failed to draw a connected graph")

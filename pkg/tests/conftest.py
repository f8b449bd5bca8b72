import numpy as np
import pytest

from mdlbackbone.graph import WeightedGraph


def make_graph(src, dst, weights, num_nodes=None, directed=True,
               weight_kind="integer"):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if weight_kind == "integer":
        weights = np.asarray(weights, dtype=np.int64)
    else:
        weights = np.asarray(weights, dtype=float)
    if num_nodes is None:
        num_nodes = int(max(src.max(), dst.max())) + 1 if len(src) else 0
    return WeightedGraph(
        num_nodes=num_nodes, src=src, dst=dst, weights=weights,
        directed=directed, weight_kind=weight_kind,
    )


def random_multigraph_free(rng, max_nodes=6, max_edges=12, max_weight=10,
                           directed=True):
    """Random simple graph with integer weights for oracle comparisons."""
    n = rng.integers(2, max_nodes + 1)
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
    rng.shuffle(pairs)
    m = int(rng.integers(1, min(max_edges, len(pairs)) + 1))
    chosen = pairs[:m]
    w = rng.integers(1, max_weight + 1, size=m)
    src = [p[0] for p in chosen]
    dst = [p[1] for p in chosen]
    return make_graph(src, dst, w, num_nodes=n, directed=directed)


@pytest.fixture
def star_graph():
    # a -> {b, c, d, e} with weights 5, 1, 1, 1
    return make_graph([0, 0, 0, 0], [1, 2, 3, 4], [5, 1, 1, 1], num_nodes=5)


@pytest.fixture
def star_selfloops():
    # one node with four self-loops, weights 5, 1, 1, 1
    return make_graph([0] * 4, [0] * 4, [5, 1, 1, 1], num_nodes=1)

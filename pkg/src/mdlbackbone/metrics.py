"""Backbone evaluation measures: Jaccard overlap, strength-distribution
Hellinger distance, reachability preservation, and a summary bundle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import DomainError

__all__ = [
    "BackboneMetrics",
    "jaccard_similarity",
    "hellinger_strength_distance",
    "reachable_pair_count",
    "reachability_ratio",
    "summarize",
]


@dataclass(frozen=True)
class BackboneMetrics:
    edge_fraction: float
    weight_fraction: float
    nonisolated_fraction: float
    hellinger: float  # None when the backbone is empty
    reachability: float
    eta: float = None


def jaccard_similarity(edges1, edges2):
    """|G1 ∩ G2| / |G1 ∪ G2| over (src, dst) pairs; two empty sets are
    identical, so the similarity is 1."""
    s1, s2 = set(edges1), set(edges2)
    union = s1 | s2
    if not union:
        return 1.0
    return len(s1 & s2) / len(union)


def hellinger_strength_distance(g, bb):
    """Hellinger distance between the normalized strength distributions of
    the graph and the backbone."""
    W = g.total_weight
    W_b = bb.total_weight
    if W <= 0 or W_b <= 0:
        raise DomainError("hellinger distance needs positive total weights")
    p = g.strengths() / W
    q = bb.retained_strengths() / W_b
    return float(np.sqrt(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)))


def _adjacency(num_nodes, src, dst, directed):
    data = np.ones(len(src))
    mat = csr_matrix((data, (src, dst)), shape=(num_nodes, num_nodes))
    if not directed:
        mat = mat + mat.T
    return mat


def reachable_pair_count(num_nodes, src, dst, directed, nodes=None):
    """Number of ordered pairs (i, j), i != j, with a directed path i -> j,
    optionally restricted to the induced subgraph on ``nodes``."""
    if nodes is not None:
        nodes = np.asarray(nodes)
        keep = np.zeros(num_nodes, dtype=bool)
        keep[nodes] = True
        relabel = -np.ones(num_nodes, dtype=np.int64)
        relabel[nodes] = np.arange(len(nodes))
        mask = keep[src] & keep[dst]
        src, dst = relabel[src[mask]], relabel[dst[mask]]
        num_nodes = len(nodes)
    mat = _adjacency(num_nodes, src, dst, directed)
    if not directed:
        _, comp = connected_components(mat, directed=False)
        sizes = np.bincount(comp)
        return int(np.sum(sizes * (sizes - 1)))
    total = 0
    for i in range(num_nodes):
        order = breadth_first_order(mat, i, directed=True, return_predecessors=False)
        total += len(order) - 1
    return total


def reachability_ratio(g, bb, sample_cap=10000, seed=0):
    """Ratio of ordered reachable pairs in the backbone to those in the full
    graph; computed on a seeded random induced subgraph of ``sample_cap``
    nodes when the graph is larger than that."""
    nodes = None
    if g.num_nodes > sample_cap:
        rng = np.random.default_rng(seed)
        nodes = np.sort(rng.choice(g.num_nodes, size=sample_cap, replace=False))
    denom = reachable_pair_count(g.num_nodes, g.src, g.dst, g.directed, nodes)
    if denom == 0:
        raise DomainError("graph has no reachable pairs")
    flags = bb.member_flags
    num = reachable_pair_count(
        g.num_nodes, g.src[flags], g.dst[flags], g.directed, nodes
    )
    return num / denom


def summarize(g, bb, eta=None, sample_cap=10000, seed=0):
    """Bundle of all backbone metrics; fields that are undefined for an
    empty backbone come back as None."""
    E, W = g.num_edges, g.total_weight
    E_b, W_b = bb.num_edges, bb.total_weight
    nonisolated = np.zeros(g.num_nodes, dtype=bool)
    nonisolated[g.src] = True
    nonisolated[g.dst] = True
    n_ref = int(nonisolated.sum())
    retained = np.zeros(g.num_nodes, dtype=bool)
    retained[g.src[bb.member_flags]] = True
    retained[g.dst[bb.member_flags]] = True
    try:
        hell = hellinger_strength_distance(g, bb)
    except DomainError:
        hell = None
    try:
        reach = reachability_ratio(g, bb, sample_cap=sample_cap, seed=seed)
    except DomainError:
        reach = None
    return BackboneMetrics(
        edge_fraction=E_b / E if E else 0.0,
        weight_fraction=W_b / W if W else 0.0,
        nonisolated_fraction=int(retained.sum()) / n_ref if n_ref else 0.0,
        hellinger=hell,
        reachability=reach,
        eta=eta,
    )

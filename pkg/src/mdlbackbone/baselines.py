"""Classical comparison backboners: disparity filter (significance-level and
fixed-size modes), high salience skeleton, and the percolation threshold
backbone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import DomainError
from .graph import (
    Backbone,
    backbone_from_flags,
    collapse_to_undirected,
    directed_view,
    neighborhoods,
)

__all__ = [
    "SalienceTable",
    "disparity_pvalue",
    "disparity_filter",
    "disparity_filter_top_e",
    "edge_disparity_pvalues",
    "high_salience_skeleton",
    "salience_table",
    "percolation_backbone",
]


@dataclass(frozen=True)
class SalienceTable:
    """Per-edge shortest-path-tree occurrence frequencies."""

    saliency: np.ndarray
    trees_sampled: int


def disparity_pvalue(w, s, k):
    """Probability that a uniform split of strength s over k edges puts at
    least w on one edge: (1 - w/s)^(k-1); degree-one edges get p = 1."""
    if k < 1 or w <= 0 or w > s:
        raise DomainError(f"invalid disparity arguments w={w}, s={s}, k={k}")
    if k == 1:
        return 1.0
    return float((1.0 - w / s) ** (k - 1))


def edge_disparity_pvalues(g):
    """Minimum disparity p-value per parent edge over the incident
    out-neighborhoods of the directed view."""
    dg = directed_view(g)
    idx = g.edge_index()
    pvals = np.ones(g.num_edges)
    for view in neighborhoods(dg):
        k, s = view.degree, float(view.weights.sum())
        if k == 0:
            continue
        if k == 1:
            p_edges = np.ones(1)
        else:
            p_edges = (1.0 - np.asarray(view.weights, dtype=float) / s) ** (k - 1)
        for j, p in zip(view.dst, p_edges):
            e = idx[(view.node, int(j))]
            if p < pvals[e]:
                pvals[e] = p
    return pvals


def disparity_filter(g, alpha=0.05):
    """Backbone of edges significant at level ``alpha`` in at least one
    incident out-neighborhood of the directed view."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    pvals = edge_disparity_pvalues(g)
    return backbone_from_flags(g, pvals < alpha)


def disparity_filter_top_e(g, e_target):
    """The ``e_target`` edges with smallest disparity p-values; ties broken
    by larger weight, then (src, dst) index."""
    if not 0 <= e_target <= g.num_edges:
        raise DomainError(f"e_target={e_target} outside [0, {g.num_edges}]")
    pvals = edge_disparity_pvalues(g)
    order = np.lexsort((g.dst, g.src, -np.asarray(g.weights, dtype=float), pvals))
    flags = np.zeros(g.num_edges, dtype=bool)
    flags[order[:e_target]] = True
    return backbone_from_flags(g, flags)


def _distance_matrix(g):
    d = 1.0 / np.asarray(g.weights, dtype=float)
    mat = csr_matrix((d, (g.src, g.dst)), shape=(g.num_nodes, g.num_nodes))
    return mat


def salience_table(g, sample_cap=10000, seed=0):
    """Edge saliency: occurrence frequency in shortest-path trees rooted at
    each of up to ``sample_cap`` nodes, with distances d = 1/w. Parent choice
    on equal-length paths is the smallest predecessor index."""
    dg = directed_view(g)
    n = g.num_nodes
    dist_mat = _distance_matrix(dg)
    idx = g.edge_index()
    d_edge = 1.0 / np.asarray(dg.weights, dtype=float)

    if n <= sample_cap:
        roots = np.arange(n)
    else:
        rng = np.random.default_rng(seed)
        roots = np.sort(rng.choice(n, size=sample_cap, replace=False))

    # in-edges of each node in the directed view, sorted by (dst, src) so the
    # first feasible predecessor within a segment is the smallest-index one
    in_order = np.lexsort((dg.src, dg.dst))
    in_dst = dg.dst[in_order]
    in_starts = np.searchsorted(in_dst, np.arange(n + 1))
    in_src = dg.src[in_order]
    in_d = d_edge[in_order]
    M = dg.num_edges
    to_parent_edge = np.array(
        [idx[(int(dg.src[t]), int(dg.dst[t]))] for t in in_order], dtype=np.int64
    )
    has_in = in_starts[1:] > in_starts[:-1]
    starts_nz = in_starts[:-1][has_in]
    nodes_nz = np.nonzero(has_in)[0]
    positions = np.arange(M)

    counts = np.zeros(g.num_edges)
    for lo in range(0, len(roots), 256):
        chunk = roots[lo:lo + 256]
        dist = np.atleast_2d(dijkstra(dist_mat, directed=True, indices=chunk))
        for r, drow in zip(chunk, dist):
            feas = (drow[in_src] + in_d) == drow[in_dst]
            fpos = np.where(feas, positions, M)
            first = np.minimum.reduceat(fpos, starts_nz) if len(starts_nz) else fpos[:0]
            valid = (first < M) & (nodes_nz != r) & np.isfinite(drow[nodes_nz])
            np.add.at(counts, to_parent_edge[first[valid]], 1.0)
    return SalienceTable(saliency=counts / len(roots), trees_sampled=len(roots))


def high_salience_skeleton(g, sample_cap=10000, threshold=0.5, seed=0):
    """Backbone of edges whose saliency is at least ``threshold``."""
    table = salience_table(g, sample_cap=sample_cap, seed=seed)
    return backbone_from_flags(g, table.saliency >= threshold)


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def percolation_backbone(g):
    """Densest-first backbone: edges added in decreasing weight (whole weight
    classes at a time) until the retained subgraph's weak components over
    non-isolated nodes match those of ``g``."""
    n = g.num_nodes
    adj = csr_matrix(
        (np.ones(g.num_edges), (g.src, g.dst)), shape=(n, n)
    )
    n_comp_target, comp = connected_components(adj, directed=True, connection="weak")
    nonisolated = np.zeros(n, dtype=bool)
    nonisolated[g.src] = True
    nonisolated[g.dst] = True
    # components consisting solely of isolated nodes don't count
    target = len(np.unique(comp[nonisolated])) if nonisolated.any() else 0
    n_nonisolated = int(nonisolated.sum())

    order = np.argsort(-np.asarray(g.weights, dtype=float), kind="stable")
    w_sorted = np.asarray(g.weights, dtype=float)[order]
    dsu = _DisjointSet(n)
    covered = np.zeros(n, dtype=bool)
    n_covered = 0
    n_comp = n_nonisolated
    flags = np.zeros(g.num_edges, dtype=bool)

    pos = 0
    E = g.num_edges
    while pos < E:
        wclass = w_sorted[pos]
        while pos < E and w_sorted[pos] == wclass:
            e = order[pos]
            flags[e] = True
            for node in (int(g.src[e]), int(g.dst[e])):
                if not covered[node]:
                    covered[node] = True
                    n_covered += 1
            if dsu.union(int(g.src[e]), int(g.dst[e])):
                n_comp -= 1
            pos += 1
        # uncovered non-isolated nodes each still count as their own component
        if n_covered == n_nonisolated and n_comp == target:
            break
    return backbone_from_flags(g, flags)

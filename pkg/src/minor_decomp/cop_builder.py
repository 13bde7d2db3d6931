"""Randomized cop-decomposition builder.

Supernodes are carved one at a time from the connected components of the
not-yet-clustered vertices.  Each supernode is a ball of sampled radius
around a pruned shortest-path skeleton: the skeleton is an SSSP tree from
the component's smallest vertex, pruned to the union of shortest paths
toward one contact vertex per previously built neighboring supernode, so
it has at most one leaf per neighbor.  The radius is drawn from a
truncated exponential on [0, delta].

The output deterministically satisfies the radius, skeleton, and
tree-decomposition properties; the buffer is a measured quantity, not a
guarantee, so a retry wrapper re-samples with fresh derived seeds until a
requested buffer target is met (or retries run out and the best attempt is
returned flagged).

Every "arbitrary" choice is resolved by smallest vertex id, which makes a
build a pure function of (graph, config).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._kernels import multisource_dijkstra
from .graph_core import StructuralError, WeightedGraph, connected_components
from .padded import TexpSampler
from .partition_tree import (
    BufferReport,
    PartitionTree,
    SkeletonTree,
    Supernode,
    compute_domains_and_bags,
    verify_buffered,
)
from .seeding import derive_rng, derive_seed_sequence


@dataclass
class CopConfig:
    delta: float
    lambda_radius: float | None = None  # default 2 + 2 ln n, fixed at build time
    seed: int = 0
    max_gamma_retries: int = 16

    def __post_init__(self):
        if self.delta <= 0:
            raise StructuralError("delta must be positive")


def _predecessors(g: WeightedGraph, dist: np.ndarray, comp_mask: np.ndarray, root: int) -> dict[int, int]:
    """Smallest-id predecessor on some shortest path, per reachable vertex.

    dist[v] was produced by Dijkstra relaxations, so for every reachable
    v != root at least one neighbor u satisfies dist[u] + w == dist[v]
    exactly in float arithmetic.
    """
    pred: dict[int, int] = {}
    for v in np.flatnonzero(comp_mask):
        v = int(v)
        if v == root or dist[v] == np.inf:
            continue
        best = -1
        for e in range(g.indptr[v], g.indptr[v + 1]):
            u = int(g.indices[e])
            if comp_mask[u] and dist[u] + g.weights[e] == dist[v]:
                if best == -1 or u < best:
                    best = u
        if best == -1:
            raise StructuralError(f"no shortest-path predecessor for vertex {v}")
        pred[v] = best
    return pred


def build_cop_decomposition(g: WeightedGraph, cfg: CopConfig) -> PartitionTree:
    """Partition g into supernodes; see module docstring for the process."""
    n = g.vertex_count
    if len(connected_components(g)) != 1:
        raise StructuralError("graph must be connected; run per component")
    lam = cfg.lambda_radius if cfg.lambda_radius is not None else 2.0 + 2.0 * np.log(max(n, 2))
    sampler = TexpSampler(lam, rng=derive_rng(cfg.seed, "cop-radius"))

    node_of = np.full(n, -1, dtype=np.int64)
    unprocessed = np.ones(n, dtype=np.bool_)
    supernodes: list[Supernode] = []

    while unprocessed.any():
        comp = connected_components(g, unprocessed)[0]  # holds smallest unprocessed id
        comp_mask = np.zeros(n, dtype=np.bool_)
        comp_mask[comp] = True

        # previously built supernodes adjacent to this component
        adjacent: set[int] = set()
        contact: dict[int, list[int]] = {}  # supernode id -> component vertices touching it
        for v in comp:
            v = int(v)
            for e in range(g.indptr[v], g.indptr[v + 1]):
                u = int(g.indices[e])
                if node_of[u] != -1:
                    j = int(node_of[u])
                    adjacent.add(j)
                    contact.setdefault(j, []).append(v)

        root = int(comp[0])
        dist = multisource_dijkstra(
            g.indptr, g.indices, g.weights, np.array([root], dtype=np.int64), comp_mask, np.inf
        )

        if adjacent:
            pred = _predecessors(g, dist, comp_mask, root)
            skel_edges: set[tuple[int, int]] = set()
            skel_verts = {root}
            for j in sorted(adjacent):
                cand = contact[j]
                leaf = min(cand, key=lambda v: (dist[v], v))
                v = leaf
                while v != root and v not in skel_verts:
                    u = pred[v]
                    skel_edges.add((u, v))
                    skel_verts.add(v)
                    v = u
            skeleton = SkeletonTree(root=root, edges=sorted(skel_edges))
            parent = max(adjacent)  # most recently created neighbor
        else:
            if supernodes:
                raise StructuralError("disconnected leftover component with no neighbor")
            skeleton = SkeletonTree(root=root, edges=[])
            parent = None

        r = cfg.delta * sampler.sample()
        skel_src = np.asarray(skeleton.vertices(), dtype=np.int64)
        sd = multisource_dijkstra(g.indptr, g.indices, g.weights, skel_src, comp_mask, r)
        members = np.flatnonzero(sd <= r).astype(np.int64)

        sid = len(supernodes)
        supernodes.append(
            Supernode(
                id=sid,
                vertices=members,
                skeleton=skeleton,
                parent=parent,
                creation_index=sid,
                radius=float(r),
            )
        )
        node_of[members] = sid
        unprocessed[members] = False

    tree = PartitionTree(supernodes, root=0)
    return compute_domains_and_bags(tree, g)


def _derived_seed(seed: int, attempt: int) -> int:
    return int(derive_seed_sequence(seed, "gamma-retry", attempt).generate_state(1, np.uint64)[0])


def build_with_gamma_search(
    g: WeightedGraph, delta: float, target_gamma: float, cfg: CopConfig
) -> tuple[PartitionTree, BufferReport]:
    """Re-sample decompositions until the measured buffer reaches the target.

    Returns the first attempt with gamma_eff >= target_gamma, or after
    ``max_gamma_retries`` attempts the best one seen, with the report
    flagged ``target_not_met``.  target_gamma = 0 accepts the first build.
    """
    if target_gamma < 0:
        raise StructuralError("target_gamma must be >= 0")
    best: tuple[float, int, PartitionTree, BufferReport] | None = None
    attempts = max(1, cfg.max_gamma_retries)
    for k in range(attempts):
        attempt_cfg = replace(cfg, delta=delta, seed=_derived_seed(cfg.seed, k))
        tree = build_cop_decomposition(g, attempt_cfg)
        report = verify_buffered(tree, g, delta, target_gamma, w=g.vertex_count)
        if report.gamma_eff >= target_gamma:
            return tree, report
        if best is None or report.gamma_eff > best[0]:
            best = (report.gamma_eff, k, tree, report)
    _, _, tree, report = best
    report.target_not_met = True
    return tree, report

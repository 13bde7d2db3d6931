"""Brute-force reference implementations used only by tests.

These deliberately avoid every production code path they validate: the
all-pairs matrix is Floyd-Warshall straight off the edge list, the clique
minor search enumerates connected branch sets over bitmasks, and the
partition checker measures diameters against the brute-force matrix.
Every oracle has a hard size cap and refuses larger inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import StructuralError, WeightedGraph

APSP_LIMIT = 512
MINOR_LIMIT = 12


@dataclass
class OracleReport:
    claim_id: str
    passed: bool
    witness: dict | None = None

    def __post_init__(self):
        if self.passed and self.witness is not None:
            raise ValueError("witness must be absent when the check passes")
        if not self.passed and self.witness is None:
            raise ValueError("failing check needs a witness")


def apsp_bruteforce(g: WeightedGraph, limit: int = APSP_LIMIT) -> np.ndarray:
    """Floyd-Warshall distance matrix; the reference for all distance claims."""
    n = g.vertex_count
    if n > limit:
        raise StructuralError(f"apsp oracle refuses n={n} > {limit}")
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in zip(g.edges_u, g.edges_v, g.edges_w):
        if w < d[u, v]:
            d[u, v] = w
            d[v, u] = w
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def check_padded_definition(
    g: WeightedGraph,
    assignment,
    beta: float,
    delta_param: float,
    Delta: float,
    gamma_grid,
) -> list[OracleReport]:
    """Delta-boundedness of one partition, checked against the brute matrix.

    The probabilistic clause (containment of gamma*Delta balls with
    probability e^(-beta*gamma) for gamma <= delta_param) concerns the
    distribution, not a single partition; it is certified by the Monte
    Carlo harness and only noted here.
    """
    assignment = np.asarray(assignment, dtype=np.int64)
    d = apsp_bruteforce(g)
    witness = None
    for label in np.unique(assignment):
        ids = np.flatnonzero(assignment == label)
        diam = float(d[np.ix_(ids, ids)].max())
        if diam > Delta:
            i, j = np.unravel_index(np.argmax(d[np.ix_(ids, ids)]), (ids.size, ids.size))
            witness = {
                "cluster": int(label),
                "pair": [int(ids[i]), int(ids[j])],
                "distance": diam,
                "bound": float(Delta),
            }
            break
    reports = []
    for gamma in gamma_grid:
        claim = (
            f"partition is Delta-bounded (Delta={Delta}); probabilistic clause at "
            f"gamma={gamma} (beta={beta}, delta={delta_param}) left to the Monte Carlo harness"
        )
        reports.append(OracleReport(claim_id=claim, passed=witness is None, witness=witness))
    return reports


def _connected_subsets(n: int, adj_bits: list[int]) -> list[int]:
    """All bitmasks whose vertices induce a connected subgraph."""
    out = []
    for s in range(1, 1 << n):
        low = s & -s
        reach = low
        frontier = low
        while frontier:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                v = b.bit_length() - 1
                nxt |= adj_bits[v] & s & ~reach
                m ^= b
            reach |= nxt
            frontier = nxt
        if reach == s:
            out.append(s)
    return out


def minor_search(g: WeightedGraph, target_clique: int, limit: int = MINOR_LIMIT) -> bool:
    """Exhaustive test for a K_t minor: t disjoint connected branch sets,
    pairwise joined by an edge."""
    n = g.vertex_count
    if n > limit:
        raise StructuralError(f"minor oracle refuses n={n} > {limit}")
    t = int(target_clique)
    if t <= 1:
        return True  # K_0 and K_1 are minors of every nonempty graph
    adj_bits = [0] * n
    for u, v in zip(g.edges_u, g.edges_v):
        u, v = int(u), int(v)
        adj_bits[u] |= 1 << v
        adj_bits[v] |= 1 << u
    if t > n:
        return False

    subsets = _connected_subsets(n, adj_bits)
    nbr = {}
    by_min: list[list[int]] = [[] for _ in range(n)]
    for s in subsets:
        nb = 0
        m = s
        while m:
            b = m & -m
            nb |= adj_bits[b.bit_length() - 1]
            m ^= b
        nbr[s] = nb & ~s
        by_min[(s & -s).bit_length() - 1].append(s)

    def rec(chosen: list[int], used: int, start: int) -> bool:
        if len(chosen) == t:
            return True
        if n - bin(used).count("1") < t - len(chosen):
            return False
        for minv in range(start, n):
            if used >> minv & 1:
                continue
            for s in by_min[minv]:
                if s & used:
                    continue
                if all(nbr[s] & c for c in chosen):
                    if rec(chosen + [s], used | s, minv + 1):
                        return True
        return False

    return rec([], 0, 0)

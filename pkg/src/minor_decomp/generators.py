"""Deterministic generators for test-graph families with known minor bounds.

Trees exclude K3, outerplanar and series-parallel graphs exclude K4, and
planar grids exclude K5; the complete graph K_m (excluding K_{m+1}) and a
random 4-regular "expander-like" family are included as stress contrasts.
Every generated graph is connected and a pure function of (family spec,
seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import StructuralError, WeightedGraph
from .seeding import derive_rng

FAMILIES = (
    "grid",
    "torus_free_grid_weighted",
    "tree",
    "series_parallel",
    "outerplanar",
    "complete",
    "expander_like",
)

WEIGHT_MODES = ("unit", "uniform", "geometric")


@dataclass
class FamilySpec:
    family: str
    n: int | None = None
    rows: int | None = None
    cols: int | None = None
    weights: str = "unit"
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise StructuralError(f"unknown family {self.family!r}")
        if self.weights not in WEIGHT_MODES:
            raise StructuralError(f"unknown weight mode {self.weights!r}")


def _grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return edges


def _tree_edges(n: int) -> list[tuple[int, int]]:
    # balanced binary tree in heap order
    return [((i - 1) // 2, i) for i in range(1, n)]


def _outerplanar_edges(n: int) -> list[tuple[int, int]]:
    # maximal outerplanar fan: outer cycle plus chords from vertex 0
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    edges += [(0, i) for i in range(2, n - 1)]
    return edges


def _series_parallel_edges(n: int, seed: int) -> list[tuple[int, int]]:
    # grow from a single edge by subdividing an edge (series) or attaching
    # a parallel two-edge path between the endpoints of an edge; both steps
    # preserve simplicity and K4-minor-freeness
    if n == 1:
        return []
    rng = derive_rng(seed, "series-parallel")
    edges = [(0, 1)]
    next_vertex = 2
    while next_vertex < n:
        idx = int(rng.integers(0, len(edges)))
        u, v = edges[idx]
        x = next_vertex
        next_vertex += 1
        if rng.random() < 0.5:
            edges[idx] = (u, x)
            edges.append((x, v))
        else:
            edges.append((u, x))
            edges.append((x, v))
    return edges


def _complete_edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _expander_like_edges(n: int, seed: int, degree: int = 4) -> list[tuple[int, int]]:
    # configuration-model pairing, re-drawn until simple and connected
    if n <= degree:
        raise StructuralError(f"expander_like needs n > {degree}")
    if n * degree % 2 != 0:
        raise StructuralError("n * degree must be even")
    for attempt in range(1000):
        rng = derive_rng(seed, "expander", attempt)
        stubs = np.repeat(np.arange(n), degree)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if not ok:
            continue
        edge_list = sorted(edges)
        if _connected(n, edge_list):
            return edge_list
    raise StructuralError("failed to draw a simple connected regular graph")


def _connected(n: int, edges: list[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def _apply_weights(edges: list[tuple[int, int]], mode: str, seed: int) -> list[tuple[int, int, float]]:
    m = len(edges)
    if mode == "unit":
        w = np.ones(m)
    elif mode == "uniform":
        w = derive_rng(seed, "weights").uniform(0.5, 1.5, m)
    elif mode == "geometric":
        w = 2.0 ** derive_rng(seed, "weights").integers(0, 4, m)
    else:  # pragma: no cover - guarded by FamilySpec
        raise StructuralError(f"unknown weight mode {mode!r}")
    return [(u, v, float(wt)) for (u, v), wt in zip(edges, w)]


def generate(spec: FamilySpec) -> WeightedGraph:
    """Build the graph for a family spec; connected and deterministic."""
    fam = spec.family
    if fam in ("grid", "torus_free_grid_weighted"):
        rows = spec.rows if spec.rows is not None else (int(np.sqrt(spec.n)) if spec.n else None)
        cols = spec.cols if spec.cols is not None else rows
        if not rows or not cols or rows < 1 or cols < 1:
            raise StructuralError("grid needs positive rows and cols (or n)")
        edges = _grid_edges(rows, cols)
        n = rows * cols
        mode = spec.weights
        if fam == "torus_free_grid_weighted" and mode == "unit":
            mode = "uniform"  # the family exists to exercise non-unit weights
    else:
        if spec.n is None or spec.n < 1:
            raise StructuralError(f"{fam} needs a positive n")
        n = spec.n
        mode = spec.weights
        if fam == "tree":
            edges = _tree_edges(n)
        elif fam == "series_parallel":
            edges = _series_parallel_edges(n, spec.seed)
        elif fam == "outerplanar":
            edges = _outerplanar_edges(n)
        elif fam == "complete":
            edges = _complete_edges(n)
        elif fam == "expander_like":
            edges = _expander_like_edges(n, spec.seed)
        else:  # pragma: no cover
            raise StructuralError(f"unknown family {fam!r}")
    return WeightedGraph(n, _apply_weights(edges, mode, spec.seed))


def declared_forbidden_clique(spec: FamilySpec) -> int | None:
    """Smallest clique the family is declared not to contain as a minor."""
    fam = spec.family
    if fam in ("grid", "torus_free_grid_weighted"):
        return 5
    if fam in ("series_parallel", "outerplanar"):
        return 4
    if fam == "tree":
        return 3
    if fam == "complete":
        return (spec.n or 0) + 1
    return None  # expander_like: no minor bound claimed

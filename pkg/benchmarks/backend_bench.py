#!/usr/bin/env python3
"""Compare the numba kernel against the pure-numpy fallback.

Times the raw restricted-Dijkstra kernel and the pipeline stages that sit
on top of it (decomposition + cover, boundary distances, one padded
sample) on unit grids of growing size.  Run from the repository root:

    python3 benchmarks/backend_bench.py [--sizes 100,400,2500] [--repeats 5]

The same sweep is available as CSV via `minor-decomp bench
--compare-backends`.
"""

import argparse
import time

import numpy as np

from minor_decomp import _kernels
from minor_decomp.cop_builder import CopConfig, build_cop_decomposition
from minor_decomp.generators import FamilySpec, generate
from minor_decomp.graph_core import full_mask
from minor_decomp.padded import boundary_distances, sample_padded
from minor_decomp.separator import subtree_view
from minor_decomp.sparse_cover import cover


def time_kernel(g, backend, repeats):
    src = np.array([0], dtype=np.int64)
    rmask = full_mask(g.vertex_count)
    _kernels.multisource_dijkstra(g.indptr, g.indices, g.weights, src, rmask,
                                  np.inf, backend=backend)  # warm up / compile
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        _kernels.multisource_dijkstra(g.indptr, g.indices, g.weights, src, rmask,
                                      np.inf, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def time_stages(g, backend, delta=2.0, rho=1.0, seed=7):
    prev = _kernels.set_backend(backend)
    try:
        t0 = time.perf_counter()
        tree = build_cop_decomposition(g, CopConfig(delta=delta, seed=seed))
        view = subtree_view(tree, g)
        c = cover(view, full_mask(g.vertex_count), rho=rho, delta=delta)
        t_build = time.perf_counter() - t0
        t0 = time.perf_counter()
        boundary = boundary_distances(g, c)
        t_boundary = time.perf_counter() - t0
        t0 = time.perf_counter()
        sample_padded(g, c, (4 + 8 * rho) / rho, (4 + 8 * rho) * delta, seed=0,
                      boundary=boundary)
        t_sample = time.perf_counter() - t0
    finally:
        _kernels.set_backend(prev)
    return t_build, t_boundary, t_sample


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="100,400,2500")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    backends = ["numba", "numpy"] if _kernels.have_numba() else ["numpy"]
    sizes = [int(s) for s in args.sizes.split(",")]

    header = f"{'n':>6} {'backend':>8} {'dijkstra':>10} {'build+cover':>12} {'boundary':>10} {'sample':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        side = max(2, int(round(np.sqrt(n))))
        g = generate(FamilySpec(family="grid", rows=side, cols=side))
        for backend in backends:
            k = time_kernel(g, backend, args.repeats)
            b, bd, sp = time_stages(g, backend)
            print(f"{g.vertex_count:>6} {backend:>8} {k * 1e3:>9.2f}ms "
                  f"{b:>11.3f}s {bd:>9.3f}s {sp * 1e3:>8.2f}ms")


if __name__ == "__main__":
    main()

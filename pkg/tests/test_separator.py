import numpy as np
import pytest

from minor_decomp.cop_builder import CopConfig, build_cop_decomposition
from minor_decomp.graph_core import StructuralError
from minor_decomp.partition_tree import verify_buffered
from minor_decomp.separator import (
    components_after_removal,
    separator_supernodes,
    subtree_view,
    subtree_width,
    threateners,
)

from util import grid_graph, manual_tree, path_graph


def singleton_chain(k):
    """Path graph with one supernode per vertex, chained root -> leaf."""
    g = path_graph(k)
    tree = manual_tree(g, [[i] for i in range(k)], [None] + list(range(k - 1)))
    return g, tree


class TestSeparatorSelection:
    def test_single_node(self):
        g = path_graph(1)
        tree = manual_tree(g, [[0]], [None])
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert sep.supernodes == [0]
        assert sep.marking_trace == {0: 0}

    def test_empty_subtree(self):
        g = path_graph(2)
        tree = manual_tree(g, [[0, 1]], [None])
        view = subtree_view(tree, g, members=[])
        sep = separator_supernodes(view)
        assert sep.supernodes == [] and sep.marking_trace == {}

    def test_chain_all_adjacent_to_root(self):
        # every bag on a 3-vertex chain with groups {0},{1,2}... contains the
        # root, so the root's selection marks everything
        g = path_graph(5)
        tree = manual_tree(g, [[0, 1], [2, 3], [4]], [None, 0, 1])
        # bag(1) = {0,1}; bag(2) = {1,2}: node 2 is NOT adjacent to the root
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert sep.supernodes[0] == view.root

    def test_root_bag_chain_marks_all(self):
        # star: all leaves adjacent to the center; one separator suffices
        g = grid_graph(1, 4)
        tree = manual_tree(g, [[0, 1, 2, 3]], [None])
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert sep.supernodes == [0]

    def test_singleton_chain_alternates(self):
        # bags on the chain are {i-1, i}; selecting the root marks node 1,
        # the next unmarked minimum-depth node is 2, and so on
        g, tree = singleton_chain(8)
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert sep.supernodes == [0, 2, 4, 6]
        assert sep.marking_trace == {0: 0, 1: 0, 2: 2, 3: 2, 4: 4, 5: 4, 6: 6, 7: 6}

    def test_depth2_node_outside_roots_bag_selected_second(self):
        g, tree = singleton_chain(8)
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert tree.depth[sep.supernodes[1]] == 2
        assert 0 not in tree.bags[sep.supernodes[1]]

    def test_selection_depth_nondecreasing(self):
        for seed in range(4):
            g = grid_graph(5, 5)
            tree = build_cop_decomposition(g, CopConfig(delta=1.5, seed=seed))
            view = subtree_view(tree, g)
            sep = separator_supernodes(view)
            depths = [tree.depth[x] for x in sep.supernodes]
            assert depths == sorted(depths)
            assert set(sep.marking_trace) == view.members

    def test_termination_bound(self):
        g = grid_graph(4, 4)
        tree = build_cop_decomposition(g, CopConfig(delta=2.0, seed=0))
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert len(sep.supernodes) <= len(view.members)


class TestSubtreeWidth:
    def test_empty_is_zero(self):
        g = path_graph(2)
        tree = manual_tree(g, [[0, 1]], [None])
        assert subtree_width(subtree_view(tree, g, members=[])) == 0

    def test_single_node_is_one(self):
        g = path_graph(2)
        tree = manual_tree(g, [[0, 1]], [None])
        assert subtree_width(subtree_view(tree, g)) == 1

    def test_grid_tree_within_planar_bound(self):
        g = grid_graph(5, 5)
        tree = build_cop_decomposition(g, CopConfig(delta=2.0, seed=1))
        view = subtree_view(tree, g)
        assert subtree_width(view) <= 4
        assert subtree_width(view) == max(len(b) for b in tree.bags)

    def test_reduction_after_removal(self):
        for seed in range(6):
            g = grid_graph(5, 5)
            tree = build_cop_decomposition(g, CopConfig(delta=1.5, seed=seed))
            view = subtree_view(tree, g)
            stack = [view]
            while stack:
                t = stack.pop()
                if t.is_empty():
                    continue
                w = subtree_width(t)
                sep = separator_supernodes(t)
                for comp in components_after_removal(t, set(sep.supernodes)):
                    assert subtree_width(comp) <= w - 1
                    stack.append(comp)

    def test_invalid_members_rejected(self):
        g, tree = singleton_chain(4)
        with pytest.raises(StructuralError, match="connected"):
            subtree_view(tree, g, members=[0, 2])


class TestThreateners:
    def test_root_vertex_alpha_one(self):
        g = path_graph(3)
        tree = manual_tree(g, [[0, 1, 2]], [None])
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        assert threateners(0, sep, view, alpha=1.0, delta=1.0) == [0]

    def test_distance_filter(self):
        g, tree = singleton_chain(8)
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        # vertex 7 lies in dom(0), dom(2), dom(4), dom(6); with alpha*delta
        # = 1 only separator 6 has a bag member within reach
        assert threateners(7, sep, view, alpha=1.0, delta=1.0) == [6]
        # below the nearest separator distance the list is empty
        assert threateners(7, sep, view, alpha=1.0, delta=0.5) == []

    def test_alpha_below_one_rejected(self):
        g, tree = singleton_chain(4)
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        with pytest.raises(StructuralError):
            threateners(0, sep, view, alpha=0.5, delta=1.0)

    def test_grid_bound_against_gamma_eff(self):
        # |X[v]| <= 2 alpha delta / gamma_eff + 2 whenever gamma_eff > 0
        delta = 2.0
        g = grid_graph(5, 5)
        for seed in range(4):
            tree = build_cop_decomposition(g, CopConfig(delta=delta, seed=seed))
            rep = verify_buffered(tree, g, delta, 0.0, g.vertex_count)
            view = subtree_view(tree, g)
            sep = separator_supernodes(view)
            gamma_eff = rep.gamma_eff
            for alpha in (1.0, 2.0, 4.0):
                for v in range(g.vertex_count):
                    x_v = threateners(v, sep, view, alpha, delta)
                    if gamma_eff == np.inf:
                        chain_len = len(tree.ancestors_of(int(tree.node_of[v]), proper=False))
                        assert len(x_v) <= chain_len
                    else:
                        assert gamma_eff > 0
                        assert len(x_v) <= 2 * alpha * delta / gamma_eff + 2

    def test_threateners_brute_force_oracle(self):
        # re-derive the membership conditions directly from distance maps
        from minor_decomp._kernels import multisource_dijkstra

        delta = 2.0
        g = grid_graph(5, 5)
        tree = build_cop_decomposition(g, CopConfig(delta=delta, seed=2))
        view = subtree_view(tree, g)
        sep = separator_supernodes(view)
        alpha = 2.0
        for v in range(g.vertex_count):
            expect = []
            for x in sep.supernodes:
                if not tree.domains[x][v]:
                    continue
                ok = False
                for xp in tree.bags[x]:
                    if xp not in view.members:
                        continue
                    dist = multisource_dijkstra(
                        g.indptr, g.indices, g.weights,
                        np.asarray(tree.supernodes[xp].vertices, dtype=np.int64),
                        tree.domains[xp], np.inf,
                    )
                    if dist[v] <= alpha * delta:
                        ok = True
                        break
                if ok:
                    expect.append(x)
            assert threateners(v, sep, view, alpha, delta) == expect

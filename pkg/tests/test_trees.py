import pytest
from hypothesis import given, settings, strategies as st

from arbor.errors import CapInfeasible, NotAdjacent, NotATree, PreconditionViolated
from arbor.random_trees import prufer_decode
from arbor.trees import (
    InducedSubgraph,
    VertexClass,
    branch,
    build_graph,
    build_tree,
    classify_vertex,
    complete_forest_to_tree,
    double_star,
    format_tree_text,
    induced_subtree,
    is_path_graph,
    parse_tree_text,
    path,
    path_order,
    pre_leaves,
    star,
)


def random_tree_strategy(max_n=40):
    # a length-(n-2) code over 1..n decodes to a uniform labeled tree
    return st.integers(2, max_n).flatmap(
        lambda n: st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2).map(
            lambda ent: prufer_decode(ent, n)
        )
    )


class TestBuildTree:
    def test_smallest_tree(self):
        t = build_tree([(1, 2)], 2)
        assert t.n == 2 and t.edge_count == 1

    def test_triangle_rejected(self):
        with pytest.raises(NotATree) as exc:
            build_tree([(1, 2), (2, 3), (3, 1)], 3)
        assert exc.value.reason == "cycle"

    def test_disconnected_rejected(self):
        with pytest.raises(NotATree) as exc:
            build_tree([(1, 2), (3, 4)], 4)
        assert exc.value.reason == "disconnected"

    @pytest.mark.parametrize(
        "edges,n,reason",
        [
            ([(1, 1)], 2, "self-loop"),
            ([(1, 2), (2, 1)], 2, "duplicate-edge"),
            ([(1, 5)], 3, "bad-vertex-id"),
            ([(0, 1)], 2, "bad-vertex-id"),
        ],
    )
    def test_bad_input(self, edges, n, reason):
        with pytest.raises(NotATree) as exc:
            build_tree(edges, n)
        assert exc.value.reason == reason


class TestClassify:
    def test_star_center_is_pre_leaf(self):
        assert classify_vertex(star(6), 1) == VertexClass.PRE_LEAF

    def test_p3_middle_is_special(self):
        # degree-two vertex flanked by two leaves: counted as a (special)
        # pre-leaf under the >= deg-1 rule
        assert classify_vertex(path(3), 2) == VertexClass.SPECIAL_PRE_LEAF

    def test_p4_second_is_special(self):
        assert classify_vertex(path(4), 2) == VertexClass.SPECIAL_PRE_LEAF

    def test_leaf_and_internal(self):
        t = path(5)
        assert classify_vertex(t, 1) == VertexClass.LEAF
        assert classify_vertex(t, 3) == VertexClass.INTERNAL

    @settings(max_examples=60, deadline=None)
    @given(random_tree_strategy())
    def test_classes_partition_vertices(self, t):
        counts = {c: 0 for c in VertexClass}
        for v in range(1, t.n + 1):
            counts[classify_vertex(t, v)] += 1
        assert sum(counts.values()) == t.n
        assert set(pre_leaves(t)) == {
            v
            for v in range(1, t.n + 1)
            if classify_vertex(t, v) in (VertexClass.PRE_LEAF, VertexClass.SPECIAL_PRE_LEAF)
        }


class TestBranch:
    def test_path_end(self):
        assert branch(path(3), 2, 1) == frozenset({1})

    def test_star_leaf(self):
        s = star(6)
        assert branch(s, 1, 2) == frozenset({2})

    def test_spider(self):
        t = build_tree([(1, 2), (2, 3), (1, 4), (4, 5)], 5)
        assert branch(t, 1, 2) == frozenset({2, 3})

    def test_not_adjacent(self):
        with pytest.raises(NotAdjacent):
            branch(path(4), 1, 3)

    def test_leaf_rejected(self):
        with pytest.raises(PreconditionViolated):
            branch(path(3), 1, 2)

    @settings(max_examples=60, deadline=None)
    @given(random_tree_strategy(25))
    def test_branches_partition(self, t):
        for v in range(1, t.n + 1):
            if t.degree(v) < 2:
                continue
            seen = set()
            for u in t.adj[v]:
                b = branch(t, v, u)
                assert not (seen & b)
                seen |= b
            assert seen == set(range(1, t.n + 1)) - {v}


class TestPaths:
    @pytest.mark.parametrize("n,expect", [(9, True), (2, True), (4, True)])
    def test_paths_are_paths(self, n, expect):
        assert is_path_graph(path(n)) is expect

    def test_star_is_not(self):
        assert not is_path_graph(star(4))

    def test_path_order(self):
        assert path_order(path(5)) == [1, 2, 3, 4, 5]


class TestInducedSubtree:
    def test_drop_end(self):
        sub = induced_subtree(path(4), {4})
        assert sub.graph.n == 3 and sub.graph.edge_count == 2

    def test_split_middle(self):
        sub = induced_subtree(path(4), {2})
        assert sub.graph.n == 3 and sub.graph.edge_count == 1

    def test_identity(self):
        t = star(5)
        sub = induced_subtree(t, set())
        assert sub.graph.edge_set() == t.edge_set()

    @settings(max_examples=40, deadline=None)
    @given(random_tree_strategy(20), st.data())
    def test_round_trip_via_maps(self, t, data):
        removed = set(data.draw(st.lists(st.integers(1, t.n), max_size=t.n - 1, unique=True)))
        if len(removed) >= t.n:
            removed.pop()
        sub = induced_subtree(t, removed)
        rebuilt = {
            (min(sub.new_to_old[a], sub.new_to_old[b]), max(sub.new_to_old[a], sub.new_to_old[b]))
            for a, b in sub.graph.edges()
        }
        readd = {(u, v) for u, v in t.edges() if u in removed or v in removed}
        assert rebuilt | readd == t.edge_set()


class TestForestCompletion:
    def test_three_singletons_cap_two(self):
        out = complete_forest_to_tree(build_graph([], 3), 2)
        assert out.n == 3 and out.edge_count == 2 and out.max_degree <= 2

    def test_tree_is_fixed_point(self):
        t = star(5)
        assert complete_forest_to_tree(t, t.max_degree).edge_set() == t.edge_set()

    def test_two_edges_cap_two(self):
        out = complete_forest_to_tree(build_graph([(1, 2), (3, 4)], 4), 2)
        assert out.max_degree == 2 and out.edge_count == 3  # a path on 4

    def test_cap_below_forest_degree(self):
        with pytest.raises(CapInfeasible):
            complete_forest_to_tree(star(4), 2)

    def test_cap_one_three_singletons(self):
        with pytest.raises(CapInfeasible):
            complete_forest_to_tree(build_graph([], 3), 1)

    @settings(max_examples=40, deadline=None)
    @given(random_tree_strategy(20), st.data())
    def test_contains_input_edges(self, t, data):
        removed = set(data.draw(st.lists(st.integers(1, t.n), max_size=max(0, t.n - 2), unique=True)))
        sub = induced_subtree(t, removed)
        if sub.graph.n == 0:
            return
        cap = max(sub.graph.max_degree, 2)
        out = complete_forest_to_tree(sub.graph, cap)
        assert sub.graph.edge_set() <= out.edge_set()
        assert out.edge_count == out.n - 1
        assert out.max_degree <= cap


class TestDegreeSum:
    @settings(max_examples=50, deadline=None)
    @given(random_tree_strategy())
    def test_degree_sum_identity(self, t):
        assert sum(t.degree_sequence()) == 2 * (t.n - 1)


class TestTextFormat:
    def test_round_trip(self):
        t = double_star(2, 3)
        assert parse_tree_text(format_tree_text(t)).edge_set() == t.edge_set()

    def test_prufer_line(self):
        t = parse_tree_text("4\nP: 1 1\n")
        assert t.edge_set() == star(4).edge_set()

    def test_prufer_line_n2(self):
        t = parse_tree_text("2\nP:\n")
        assert t.edge_set() == {(1, 2)}

    def test_bad_header(self):
        with pytest.raises(NotATree):
            parse_tree_text("x y\n1 2\n")

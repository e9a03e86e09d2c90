import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from arbor.colorings import KColoring
from arbor.equitable import (
    balanced_targets,
    brute_force_equitable,
    equitable_coloring,
    equitable_three,
    hub_pair_coloring,
    verify_equitable,
    _exact_path_colors,
    _seq_feasible,
)
from arbor.errors import (
    DegreeTooHigh,
    NoTwoPreLeaves,
    PartialColoring,
    PreconditionViolated,
    TooLarge,
)
from arbor.random_trees import enumerate_unlabeled_trees, sample_labeled_tree
from arbor.trees import Tree, build_tree, double_star, path, pre_leaves, star


def assert_good(t, cert, k, constraint=None):
    assert cert.valid
    assert tuple(sorted(cert.coloring.class_sizes, reverse=True)) == balanced_targets(t.n, k)
    recheck = verify_equitable(t, cert.coloring)
    assert recheck.valid and all(m == 0 for m in recheck.mono_edges)
    if constraint:
        p, q = constraint
        assert cert.coloring.color(p) != cert.coloring.color(q)


class TestVerify:
    def test_p9_round_robin(self):
        cert = verify_equitable(path(9), KColoring(3, {v: ((v - 1) % 3) + 1 for v in range(1, 10)}))
        assert cert.valid and cert.coloring.class_sizes == (3, 3, 3)

    def test_monochromatic_edge(self):
        cert = verify_equitable(path(3), KColoring(3, {1: 1, 2: 1, 3: 2}))
        assert not cert.valid and cert.mono_edges == (1, 0, 0)

    def test_two_colors_ok(self):
        cert = verify_equitable(path(3), KColoring(2, {1: 1, 2: 2, 3: 1}))
        assert cert.valid and cert.coloring.class_sizes == (2, 1)

    def test_partial(self):
        with pytest.raises(PartialColoring):
            verify_equitable(path(3), KColoring(3, {1: 1, 3: 2}))


class TestEquitableThree:
    def test_path9(self):
        cert = equitable_three(path(9))
        assert cert.coloring.class_sizes == (3, 3, 3)
        assert_good(path(9), cert, 3)

    def test_star_degree_too_high(self):
        with pytest.raises(DegreeTooHigh):
            equitable_three(star(7))

    def test_single_vertex(self):
        assert_good(Tree(1, ((), ()), 0), equitable_three(Tree(1, ((), ()), 0)), 3)

    def test_bad_constraint(self):
        t = path(9)
        with pytest.raises(NoTwoPreLeaves):
            equitable_three(t, constraint=(2, 2))
        with pytest.raises(NoTwoPreLeaves):
            equitable_three(t, constraint=(1, 2))  # 1 is a leaf
        with pytest.raises(NoTwoPreLeaves):
            equitable_three(t, constraint=(4, 5))  # interior, no leaf neighbors

    @pytest.mark.parametrize("n", [6, 9, 12, 15, 21, 30])
    def test_constrained_paths(self, n):
        t = path(n)
        cert = equitable_three(t, constraint=(2, n - 1))
        assert_good(t, cert, 3, constraint=(2, n - 1))

    def test_small_sweep_against_brute_force(self):
        for n in range(6, 12):
            for t in enumerate_unlabeled_trees(n):
                if t.max_degree * 3 > n:
                    continue
                assert_good(t, equitable_three(t), 3)
                assert brute_force_equitable(t, 3) is not None

    def test_constrained_sweep_small(self):
        for n in range(6, 11):
            for t in enumerate_unlabeled_trees(n):
                if t.max_degree * 3 > n:
                    continue
                for p, q in itertools.combinations(pre_leaves(t), 2):
                    assert_good(t, equitable_three(t, constraint=(p, q)), 3, constraint=(p, q))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(13, 120), st.integers(0, 2**31), st.data())
    def test_random_soundness(self, n, seed, data):
        t = sample_labeled_tree(n, seed)
        if t.max_degree * 3 > n:
            return
        pls = pre_leaves(t)
        constraint = None
        if len(pls) >= 2 and data.draw(st.booleans()):
            perm = data.draw(st.permutations(pls))
            constraint = (perm[0], perm[1])
        cert = equitable_three(t, constraint=constraint)
        assert_good(t, cert, 3, constraint=constraint)

    def test_trace_is_short(self):
        t = sample_labeled_tree(90, seed=8, trial=3)
        if t.max_degree * 3 <= 90:
            cert = equitable_three(t)
            assert len(cert.trace) <= t.n


class TestDoubleBroomRegression:
    def make_broom(self, a, b, mid):
        edges = []
        nxt = 3
        prev = 1
        for _ in range(mid):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 2))
        for _ in range(a):
            edges.append((1, nxt))
            nxt += 1
        for _ in range(b):
            edges.append((2, nxt))
            nxt += 1
        return build_tree(edges, nxt - 1)

    def test_skewed_bundles(self):
        # max degree exactly n/3 with very unequal leaf bundles used to defeat
        # the near-equal skeleton coloring
        t = self.make_broom(3, 9, 16)
        assert t.max_degree * 3 == t.n
        cert = equitable_three(t, constraint=(1, 2))
        assert_good(t, cert, 3, constraint=(1, 2))

    def test_broom_grid(self):
        for a in (1, 2, 5, 9):
            for b in (1, 4, 11):
                for mid in (0, 3, 10, 17):
                    t = self.make_broom(a, b, mid)
                    if t.max_degree * 3 > t.n:
                        continue
                    for pair in itertools.combinations(pre_leaves(t), 2):
                        assert_good(t, equitable_three(t, constraint=pair), 3, constraint=pair)


class TestHubPair:
    def test_u_equals_v(self):
        h = build_tree([(1, 3), (2, 3), (3, 4), (4, 5), (4, 6)], 6)
        with pytest.raises(PreconditionViolated):
            hub_pair_coloring(h, 3, 3, 3, 4)

    def test_low_degree_rejected(self):
        t = path(9)
        with pytest.raises(PreconditionViolated):
            hub_pair_coloring(t, 4, 5, 2, 8)

    def test_h_shape(self):
        h = build_tree([(1, 3), (2, 3), (3, 4), (4, 5), (4, 6)], 6)
        cert = hub_pair_coloring(h, 3, 4, 3, 4)
        assert cert.coloring.class_sizes == (2, 2, 2)
        assert cert.coloring.color(3) != cert.coloring.color(4)

    def test_double_star_centers(self):
        t = double_star(4, 4)
        cert = hub_pair_coloring(t, 1, 2, 1, 2)
        assert_good(t, cert, 3, constraint=(1, 2))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**31))
    def test_planted_hubs(self, seed):
        rng = random.Random(seed)
        n = rng.randrange(13, 60)
        need = -(-n // 3)
        edges = [(1, 2)]
        nxt = 3
        for _ in range(need - 1):
            edges.append((1, nxt))
            nxt += 1
        for _ in range(need - 1):
            edges.append((2, nxt))
            nxt += 1
        verts = list(range(1, nxt))
        while nxt <= n:
            edges.append((rng.choice(verts), nxt))
            verts.append(nxt)
            nxt += 1
        t = build_tree(edges, n)
        if t.degree(1) * 3 < n or t.degree(2) * 3 < n:
            return
        pls = pre_leaves(t)
        if len(pls) < 2:
            return
        p, q = rng.sample(pls, 2)
        cert = hub_pair_coloring(t, 1, 2, p, q)
        assert_good(t, cert, 3, constraint=(p, q))
        assert cert.coloring.color(1) != cert.coloring.color(2)


class TestForkedSkeletonRegression:
    def test_pre_leaf_pair_behind_shared_stalk(self):
        # both pre-leaves hang off one degree-three junction behind hub 2, so
        # the terminal skeleton is a fork rather than a path with tails
        edges = (
            [(1, 2)]
            + [(1, x) for x in (3, 4, 5, 6, 7, 8, 9, 10, 11, 24, 27)]
            + [(2, x) for x in (12, 13, 14, 15, 16, 17, 18, 19, 20)]
            + [(13, 22), (13, 23), (19, 21), (19, 25), (21, 29), (25, 26), (25, 28)]
        )
        t = build_tree(edges, 29)
        cert = hub_pair_coloring(t, 1, 2, 21, 25)
        assert cert.valid
        assert cert.coloring.color(21) != cert.coloring.color(25)
        assert cert.coloring.color(1) != cert.coloring.color(2)


class TestEquitableK:
    def test_p10_five_colors(self):
        cert = equitable_coloring(path(10), 5)
        assert sorted(cert.coloring.class_sizes) == [2, 2, 2, 2, 2]

    def test_paths_succeed_for_every_feasible_k(self):
        for n in (8, 13, 20, 31):
            t = path(n)
            for k in range(3, n // 2 + 1):  # paths have max degree 2
                assert_good(t, equitable_coloring(t, k), k)

    def test_delegates_to_three(self):
        t = sample_labeled_tree(30, seed=2, trial=0)
        if t.max_degree * 3 <= 30:
            a = equitable_coloring(t, 3)
            b = equitable_three(t)
            assert a.coloring == b.coloring

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            equitable_coloring(path(10), 2)

    def test_degree_too_high(self):
        with pytest.raises(DegreeTooHigh):
            equitable_coloring(star(9), 4)

    def test_n12_k4_vs_brute(self):
        hits = 0
        for trial in range(120):
            t = sample_labeled_tree(12, seed=13, trial=trial)
            if t.max_degree > 3:
                continue
            cert = equitable_coloring(t, 4)
            assert_good(t, cert, 4)
            assert brute_force_equitable(t, 4, limit=4**12) is not None
            hits += 1
        assert hits > 5

    @settings(max_examples=60, deadline=None)
    @given(st.integers(20, 160), st.integers(3, 7), st.integers(0, 2**31))
    def test_random_soundness(self, n, k, seed):
        t = sample_labeled_tree(n, seed)
        if t.max_degree * k > n:
            return
        cert = equitable_coloring(t, k)
        assert_good(t, cert, k)

    def test_class_size_arithmetic(self):
        for trial in range(40):
            n, k = 50 + trial, 3 + trial % 4
            t = sample_labeled_tree(n, seed=77, trial=trial)
            if t.max_degree * k > n:
                continue
            q, r = divmod(n, k)
            sizes = sorted(equitable_coloring(t, k).coloring.class_sizes, reverse=True)
            assert sizes == [q + 1] * r + [q] * (k - r)


class TestBruteForceEquitable:
    def test_p3(self):
        w = brute_force_equitable(path(3), 3)
        assert w is not None and sorted(w.class_sizes) == [1, 1, 1]

    def test_s7_none(self):
        assert brute_force_equitable(star(7), 3) is None

    def test_single_vertex(self):
        w = brute_force_equitable(Tree(1, ((), ()), 0), 5)
        assert w is not None and w.color(1) in range(1, 6)

    def test_guard(self):
        with pytest.raises(TooLarge):
            brute_force_equitable(path(14), 3)

    def test_witnesses_verify(self):
        for n in range(4, 10):
            for t in enumerate_unlabeled_trees(n):
                w = brute_force_equitable(t, 3)
                if w is not None:
                    assert verify_equitable(t, w).valid


class TestExactPathColors:
    def test_feasibility_predicate_matches_brute(self):
        def brute(counts, p, q):
            colors = []
            for c, k in counts.items():
                colors += [c] * k
            if not colors:
                return True
            for perm in set(itertools.permutations(colors)):
                if any(perm[i] == perm[i + 1] for i in range(len(perm) - 1)):
                    continue
                if p is not None and perm[0] == p:
                    continue
                if q is not None and perm[-1] == q:
                    continue
                return True
            return False

        for total in range(0, 8):
            for a in range(total + 1):
                for b in range(total + 1 - a):
                    counts = {1: a, 2: b, 3: total - a - b}
                    for p in (None, 1, 2, 3):
                        for q in (None, 1, 2, 3):
                            assert _seq_feasible(counts, p, q) == brute(counts, p, q), (counts, p, q)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(2, 40), st.data())
    def test_constructor_output_is_valid(self, length, data):
        a = data.draw(st.integers(0, length))
        b = data.draw(st.integers(0, length - a))
        quota = {1: a, 2: b, 3: length - a - b}
        first = data.draw(st.sampled_from((1, 2, 3)))
        last = data.draw(st.sampled_from([c for c in (1, 2, 3) if c != first]))
        cols = _exact_path_colors(length, quota, first, last)
        if cols is None:
            return
        assert cols[0] == first and cols[-1] == last
        assert all(cols[i] != cols[i + 1] for i in range(length - 1))
        assert all(cols.count(c) == quota[c] for c in (1, 2, 3))

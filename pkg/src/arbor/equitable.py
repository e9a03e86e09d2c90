"""Constructive equitable colorings of trees.

A coloring is equitable (strongly k-balanced) when it is proper and the
class sizes pairwise differ by at most one.  Every tree with maximum degree
at most n/k admits one for k >= 3; the construction peels one to three
pendant vertices per step, colors a small or path-shaped core directly, and
extends back up.  For k >= 4 the problem reduces to k-1 colors by removing
an independent set of low-degree vertices and completing the remaining
forest to a tree under the same degree cap.

Everything here is deterministic: ties are always broken toward smaller
vertex ids and smaller color indices, so identical inputs give identical
colorings byte for byte.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .colorings import KColoring
from .errors import (
    DegreeTooHigh,
    IndependentSetNotFound,
    InternalInvariant,
    NoTwoPreLeaves,
    PreconditionViolated,
    TooLarge,
)
from .trees import (
    Graph,
    Tree,
    complete_forest_to_tree,
    format_tree_text,
    induced_subtree,
    is_path_graph,
    is_pre_leaf,
    path_order,
)

EQUITABLE_BRUTE_DEFAULT_LIMIT = 3**12


def balanced_targets(n: int, k: int) -> tuple:
    """Class-size multiset (descending) of an equitable k-coloring of n items."""
    q, r = divmod(n, k)
    return tuple([q + 1] * r + [q] * (k - r))


@dataclass(frozen=True)
class EquitableCertificate:
    """A coloring plus the tallies and construction trace that certify it."""

    coloring: KColoring
    mono_edges: tuple
    trace: tuple

    @property
    def valid(self) -> bool:
        sizes = self.coloring.class_sizes
        return max(sizes) - min(sizes) <= 1 and all(m == 0 for m in self.mono_edges)


def verify_equitable(t: Graph, coloring: KColoring, trace: Iterable[str] = ()) -> EquitableCertificate:
    """Exact per-color monochromatic edge counts and class sizes."""
    coloring.require_total(t)
    col = coloring.assignment
    mono = [0] * coloring.k
    for u, v in t.edges():
        if col[u] == col[v]:
            mono[col[u] - 1] += 1
    return EquitableCertificate(coloring, tuple(mono), tuple(trace))


# ---------------------------------------------------------------------------
# Exhaustive search with pruning: proper colorings hitting an exact class-size
# multiset, honoring optional "these two vertices get different colors" pairs.
# Used as the small-core base case and as the independent test oracle.


def _search_colors(
    vertices: Sequence[int],
    neighbors: Callable[[int], Iterable[int]],
    k: int,
    targets: Sequence[int],
    constraints: Sequence[tuple] = (),
) -> Optional[dict]:
    n = len(vertices)
    if n == 0:
        return {}
    vset = set(vertices)
    start = max(vertices, key=lambda v: (sum(1 for w in neighbors(v) if w in vset), -v))
    order = []
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        order.append(u)
        for w in sorted(neighbors(u), reverse=True):
            if w in vset and w not in seen:
                seen.add(w)
                stack.append(w)
    for v in vertices:
        if v not in seen:
            order.append(v)
            seen.add(v)
    partners = defaultdict(list)
    for a, b in constraints:
        if a != b:
            partners[a].append(b)
            partners[b].append(a)
    cap = max(targets)
    q_lo = min(targets)
    r_hi = sum(1 for t in targets if t == cap) if cap > q_lo else k
    col: dict = {}
    counts = [0] * (k + 1)

    def dfs(i: int, used: int) -> bool:
        if i == n:
            return sorted(counts[1:]) == sorted(targets)
        v = order[i]
        forb = {col[w] for w in neighbors(v) if w in col}
        forb.update(col[x] for x in partners[v] if x in col)
        remaining = n - i - 1
        for c in range(1, min(used + 1, k) + 1):
            if c in forb or counts[c] == cap:
                continue
            counts[c] += 1
            if cap > q_lo and sum(1 for x in range(1, k + 1) if counts[x] > q_lo) > r_hi:
                counts[c] -= 1
                continue
            deficit = sum(q_lo - counts[x] for x in range(1, k + 1) if counts[x] < q_lo)
            if deficit <= remaining:
                col[v] = c
                if dfs(i + 1, max(used, c)):
                    return True
                del col[v]
            counts[c] -= 1
        return False

    if dfs(0, 0):
        return dict(col)
    return None


def brute_force_equitable(t: Graph, k: int, limit: int = EQUITABLE_BRUTE_DEFAULT_LIMIT) -> Optional[KColoring]:
    """Witness equitable k-coloring by pruned exhaustive search, or None."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = t.n
    if n >= 1 and k**n > limit:
        raise TooLarge(f"{k}^{n} exceeds search limit {limit}")
    if n == 0:
        return KColoring(k, {})
    colors = _search_colors(list(range(1, n + 1)), lambda v: t.adj[v], k, balanced_targets(n, k))
    if colors is None:
        return None
    return KColoring(k, colors)


# ---------------------------------------------------------------------------
# Direct colorings of path-shaped trees.


def _round_robin_colors(order: Sequence[int], k: int) -> dict:
    return {v: (i % k) + 1 for i, v in enumerate(order)}


def _path3_colors(order: Sequence[int], constraint: Optional[tuple]) -> dict:
    """Equitable 3-coloring of a path; the two pre-leaves (second and
    second-to-last vertices) get distinct colors when a constraint is given."""
    L = len(order)
    plain = _round_robin_colors(order, 3)
    if constraint is None or L < 4:
        return plain
    pos = {v: i for i, v in enumerate(order)}
    a, b = constraint
    if {pos[a], pos[b]} != {1, L - 2}:
        raise InternalInvariant("path constraint endpoints are not its pre-leaves")
    if (1 - (L - 2)) % 3 != 0:
        return plain  # round robin already separates them
    if L == 6:
        pat = [1, 2, 3, 1, 3, 2]
        return {v: pat[i] for i, v in enumerate(order)}
    # L divisible by 3, L >= 9: round robin head, swapped tail of six
    colors = {}
    tail = [1, 3, 2, 1, 3, 2]
    for i, v in enumerate(order):
        colors[v] = (i % 3) + 1 if i < L - 6 else tail[i - (L - 6)]
    return colors


def _seq_feasible(rem: dict, p_forb: Optional[int], q_forb: Optional[int]) -> bool:
    """Can the count multiset ``rem`` fill a row with no two adjacent colors
    equal, first color != p_forb and last color != q_forb?"""
    total = rem[1] + rem[2] + rem[3]
    if total == 0:
        return True
    m = max(rem.values())
    if m > (total + 1) // 2:
        return False
    tops = [c for c in (1, 2, 3) if rem[c] == m]
    if total % 2 == 1 and m == (total + 1) // 2:
        x = tops[0]  # x must occupy both ends: x _ x _ ... _ x
        return x != p_forb and x != q_forb
    if total % 2 == 0 and m == total // 2:
        if len(tops) == 2:
            x, y = tops  # strict alternation, ends are {x, y} in some order
            return (x != p_forb and y != q_forb) or (y != p_forb and x != q_forb)
        x = tops[0]  # x must occupy at least one end
        return x != p_forb or x != q_forb
    return True


def _exact_path_colors(length: int, quota: dict, first: int, last: int) -> Optional[list]:
    """Proper 3-coloring of a path hitting exact per-color counts with both
    endpoint colors prescribed; None when infeasible."""
    if length == 1:
        if first == last and quota.get(first, 0) == 1 and sum(quota.values()) == 1:
            return [first]
        return None
    if first == last:
        return None
    rem = {c: quota.get(c, 0) for c in (1, 2, 3)}
    rem[first] -= 1
    rem[last] -= 1
    if rem[first] < 0 or rem[last] < 0 or sum(rem.values()) != length - 2:
        return None
    if not _seq_feasible(rem, first, last):
        return None
    out = [first]
    prev = first
    for _ in range(length - 2):
        choice = None
        for c in sorted((1, 2, 3), key=lambda c: (-rem[c], c)):
            if c == prev or rem[c] == 0:
                continue
            rem[c] -= 1
            if _seq_feasible(rem, c, last):
                choice = c
                break
            rem[c] += 1
        if choice is None:
            return None  # initial predicate should prevent this
        out.append(choice)
        prev = choice
    if prev == last:
        return None
    out.append(last)
    return out


# ---------------------------------------------------------------------------
# The peeling machine.  Holds the active subtree with incrementally
# maintained degrees, leaf sets, per-vertex leaf-neighbor sets and the
# pre-leaf set; peeling pushes extension records, then the base coloring is
# extended back up through them.


class _Machine:
    __slots__ = (
        "n0",
        "adj",
        "alive",
        "n_act",
        "leafnbr",
        "bucket",
        "leaf_heap",
        "preleaf",
        "big_count",
        "records",
        "trace",
        "col",
        "sizes",
        "source",
    )

    def __init__(self, t: Graph):
        n = t.n
        self.n0 = n
        self.source = t
        self.adj = [set(t.adj[v]) for v in range(n + 1)]
        self.alive = bytearray(n + 1)
        for v in range(1, n + 1):
            self.alive[v] = 1
        self.n_act = n
        self.leafnbr = [set() for _ in range(n + 1)]
        self.bucket: dict = defaultdict(set)
        leaves = []
        for v in range(1, n + 1):
            d = len(self.adj[v])
            self.bucket[d].add(v)
            if d == 1:
                leaves.append(v)
                self.leafnbr[t.adj[v][0]].add(v)
        self.leaf_heap = leaves[:]
        heapq.heapify(self.leaf_heap)
        self.preleaf = set()
        for v in range(1, n + 1):
            self._refresh_preleaf(v)
        self.big_count = sum(1 for v in range(1, n + 1) if len(self.adj[v]) >= 3)
        self.records: list = []
        self.trace: list = []
        self.col = [0] * (n + 1)
        self.sizes = [0, 0, 0, 0]

    # -- incremental maintenance ------------------------------------------

    def _refresh_preleaf(self, v: int) -> None:
        if self.alive[v]:
            d = len(self.adj[v])
            if d >= 2 and len(self.leafnbr[v]) >= d - 1:
                self.preleaf.add(v)
                return
        self.preleaf.discard(v)

    def delete_leaf(self, w: int) -> int:
        """Remove an active leaf; returns its (former) neighbor."""
        (z,) = self.adj[w]
        self.bucket[1].discard(w)
        self.preleaf.discard(w)
        self.alive[w] = 0
        self.n_act -= 1
        self.adj[w] = set()
        self.leafnbr[z].discard(w)
        dz = len(self.adj[z])
        self.adj[z].discard(w)
        self.bucket[dz].discard(z)
        self.bucket[dz - 1].add(z)
        if dz == 3:
            self.big_count -= 1
        if dz - 1 == 1:
            heapq.heappush(self.leaf_heap, z)
            (y,) = self.adj[z]
            self.leafnbr[y].add(z)
            self._refresh_preleaf(y)
        self._refresh_preleaf(z)
        return z

    def restore(self, w: int, nbrs: tuple) -> None:
        """Re-add a deleted vertex for the unwind; only adj/alive are kept
        consistent past this point."""
        self.alive[w] = 1
        self.n_act += 1
        self.adj[w] = set(nbrs)
        for z in nbrs:
            self.adj[z].add(w)

    def _min_leaf(self, nbr_not_in: frozenset | set = frozenset(), exclude: frozenset | set = frozenset()) -> Optional[int]:
        """Smallest active leaf whose neighbor avoids ``nbr_not_in``."""
        stash = []
        found = None
        while self.leaf_heap:
            w = heapq.heappop(self.leaf_heap)
            if not self.alive[w] or len(self.adj[w]) != 1:
                continue  # stale entry
            (z,) = self.adj[w]
            if w in exclude or z in nbr_not_in:
                stash.append(w)
                continue
            found = w
            stash.append(w)
            break
        for w in stash:
            heapq.heappush(self.leaf_heap, w)
        return found

    def active_vertices(self) -> list:
        return [v for v in range(1, self.n0 + 1) if self.alive[v]]

    def _active_path_order(self) -> list:
        ends = sorted(self.bucket[1])
        if self.n_act == 1:
            return [next(iter(self.active_vertices()))]
        start = ends[0]
        order = [start]
        prev = 0
        cur = start
        while len(order) < self.n_act:
            nxt = min(x for x in self.adj[cur] if x != prev)
            prev, cur = cur, nxt
            order.append(cur)
        return order

    def _bfs_path(self, a: int, b: int) -> list:
        if a == b:
            return [a]
        parent = {a: 0}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                break
            for w in self.adj[u]:
                if w not in parent:
                    parent[w] = u
                    q.append(w)
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        out.reverse()
        return out

    def _dump(self) -> str:
        return format_tree_text(self.source)

    def _fail(self, message: str) -> InternalInvariant:
        return InternalInvariant(message, dump=self._dump())

    # -- base colorings ----------------------------------------------------

    def _commit(self, colors: dict) -> None:
        for v, c in colors.items():
            self.col[v] = c
            self.sizes[c] += 1

    def _base_search(self, constraints: Sequence[tuple]) -> None:
        vertices = self.active_vertices()
        targets = balanced_targets(self.n_act, 3)
        colors = _search_colors(vertices, lambda v: self.adj[v], 3, targets, constraints)
        if colors is None:
            raise self._fail("exhaustive base search found no equitable coloring")
        self.trace.append("direct:search")
        self._commit(colors)

    def _base_path(self, pair: Optional[tuple]) -> None:
        order = self._active_path_order()
        self.trace.append("direct:path")
        self._commit(_path3_colors(order, pair))

    # -- the two-hub construction (two vertices of degree >= n/3 get
    # distinct colors, two pre-leaves get distinct colors) -----------------

    def lemma_run(self, u: int, v: int, p: int, q: int) -> None:
        while True:
            n = self.n_act
            if n <= 12:
                self._base_search([(u, v), (p, q)])
                return
            w = None
            for z in (p, q):
                if z not in (u, v) and len(self.adj[z]) >= 3:
                    w = min(self.leafnbr[z])
                    break
            if w is None:
                w = self._min_leaf(nbr_not_in={u, v, p, q})
            if w is None:
                self._spine_terminal(u, v, p, q)
                return
            (z,) = self.adj[w]
            self.records.append(("hub-peel", w, z, u, v, p, q, ((w, (z,)),)))
            self.trace.append("peel:hub-safe")
            self.delete_leaf(w)

    def _spine_terminal(self, u: int, v: int, p: int, q: int) -> None:
        """Direct coloring when every leaf of the active tree crowds u, v, p
        or q: pendant bundles at the two hubs plus a thin skeleton carrying
        the pre-leaf pair (a u-v path, hanging tails, or a shared stalk that
        forks toward p and q)."""
        targets = balanced_targets(self.n_act, 3)
        for s in {p, q} - {u, v}:
            if len(sorted(self.leafnbr[s])) != 1 or len(self.adj[s]) != 2:
                raise self._fail("designated pre-leaf is not a pendant-path end")
        bundle_u = sorted(self.leafnbr[u])
        bundle_v = sorted(self.leafnbr[v])
        exclude = set(bundle_u) | set(bundle_v)
        skel = [x for x in self.active_vertices() if x not in exclude]
        skel_set = set(skel)
        # BFS from u; dropping pendant leaves keeps the skeleton connected
        order = [u]
        parent: dict = {u: None}
        dq = deque([u])
        while dq:
            x = dq.popleft()
            for y in sorted(self.adj[x]):
                if y in skel_set and y not in parent:
                    parent[y] = x
                    order.append(y)
                    dq.append(y)
        if len(order) != len(skel) or v not in parent:
            raise self._fail("skeleton decomposition does not cover the tree")
        if len(order) + len(bundle_u) + len(bundle_v) != self.n_act:
            raise self._fail("hub bundles and skeleton overlap")
        constraints = [(u, v)]
        if {p, q} != {u, v}:
            constraints.append((p, q))
        partners = defaultdict(list)
        for a, b in constraints:
            partners[a].append(b)
            partners[b].append(a)
        A, B = len(bundle_u), len(bundle_v)
        sk_n = len(order)

        def attempt(priority: tuple, quotas: dict, force_first: Optional[int] = None) -> Optional[dict]:
            rem = dict(quotas)
            col: dict = {}
            for idx, x in enumerate(order):
                forb = set()
                par = parent.get(x)
                if par is not None and par in col:
                    forb.add(col[par])
                for y in partners.get(x, ()):
                    if y in col:
                        forb.add(col[y])
                if force_first is not None and idx == 0:
                    if force_first in forb:
                        return None
                    best = force_first
                else:
                    best = None
                    for c in priority:
                        if c in forb:
                            continue
                        if best is None or rem[c] > rem[best]:
                            best = c
                    if best is None:
                        return None
                col[x] = best
                rem[best] -= 1
            return col

        def settle(col_sk: dict) -> Optional[dict]:
            cnt = {1: 0, 2: 0, 3: 0}
            for c in col_sk.values():
                cnt[c] += 1
            a_col, b_col = col_sk[u], col_sk[v]
            if a_col == b_col:
                return None
            g_col = 6 - a_col - b_col
            for T in sorted(set(itertools.permutations(targets))):
                tm = {1: T[0], 2: T[1], 3: T[2]}
                xb = tm[b_col] - cnt[b_col]
                ya = tm[a_col] - cnt[a_col]
                if 0 <= xb <= A and 0 <= ya <= B and tm[g_col] >= cnt[g_col]:
                    colors = dict(col_sk)
                    for i, leaf in enumerate(bundle_u):
                        colors[leaf] = b_col if i < xb else g_col
                    for i, leaf in enumerate(bundle_v):
                        colors[leaf] = a_col if i < ya else g_col
                    return colors
            return None

        near = balanced_targets(sk_n, 3)
        for priority in itertools.permutations((1, 2, 3)):
            quotas = {priority[i]: near[i] for i in range(3)}
            col_sk = attempt(priority, quotas)
            if col_sk:
                final = settle(col_sk)
                if final:
                    self.trace.append("direct:spine")
                    self._commit(final)
                    return
        skel_deg = {x: sum(1 for y in self.adj[x] if y in skel_set) for x in order}
        is_u_v_path = (
            len(order) >= 2
            and all(d <= 2 for d in skel_deg.values())
            and skel_deg[u] == 1
            and skel_deg[v] == 1
        )
        if is_u_v_path:
            # the skeleton is exactly the u..v path (BFS from an end walks it
            # in order): solve the quota windows exactly
            for alpha, beta in itertools.permutations((1, 2, 3), 2):
                gamma = 6 - alpha - beta
                for T in sorted(set(itertools.permutations(targets))):
                    tm = {1: T[0], 2: T[1], 3: T[2]}
                    lo_a, hi_a = max(0, tm[alpha] - B), min(tm[alpha], sk_n)
                    lo_b, hi_b = max(0, tm[beta] - A), min(tm[beta], sk_n)
                    if lo_a > hi_a or lo_b > hi_b:
                        continue
                    lo_g = max(0, sk_n - hi_a - hi_b)
                    hi_g = min(tm[gamma], sk_n - lo_a - lo_b)
                    if lo_g > hi_g:
                        continue
                    for qg in sorted({lo_g, hi_g, min(max(sk_n // 3, lo_g), hi_g)}):
                        s2 = sk_n - qg
                        lo2, hi2 = max(lo_a, s2 - hi_b), min(hi_a, s2 - lo_b)
                        if lo2 > hi2:
                            continue
                        for qa in sorted({lo2, hi2, min(max(s2 // 2, lo2), hi2)}):
                            cols = _exact_path_colors(
                                sk_n, {alpha: qa, beta: s2 - qa, gamma: qg}, alpha, beta
                            )
                            if cols is None:
                                continue
                            final = settle(dict(zip(order, cols)))
                            if final:
                                self.trace.append("direct:spine")
                                self._commit(final)
                                return
        # skewed quota attempts for lopsided leaf bundles
        for cu, cv in itertools.permutations((1, 2, 3), 2):
            cg = 6 - cu - cv
            for T in sorted(set(itertools.permutations(targets))):
                tm = {1: T[0], 2: T[1], 3: T[2]}
                lo_u, hi_u = max(0, tm[cu] - B), min(tm[cu], sk_n)
                lo_v, hi_v = max(0, tm[cv] - A), min(tm[cv], sk_n)
                if lo_u > hi_u or lo_v > hi_v:
                    continue
                qu = min(max(sk_n // 3, lo_u), hi_u)
                qv = min(max((sk_n - qu) // 2, lo_v), hi_v, sk_n - qu)
                if qv < lo_v:
                    continue
                qg = sk_n - qu - qv
                if qg < 0 or qg > tm[cg]:
                    continue
                col_sk = attempt((cu, cv, cg), {cu: qu, cv: qv, cg: qg}, force_first=cu)
                if col_sk:
                    final = settle(col_sk)
                    if final:
                        self.trace.append("direct:spine")
                        self._commit(final)
                        return
        if sk_n <= 13:
            final = self._exhaust_skeleton(order, parent, partners, settle)
            if final:
                self.trace.append("direct:spine")
                self._commit(final)
                return
        raise self._fail("spine coloring infeasible")

    @staticmethod
    def _exhaust_skeleton(order, parent, partners, settle) -> Optional[dict]:
        col: dict = {}

        def rec(i: int) -> Optional[dict]:
            if i == len(order):
                return settle(col)
            x = order[i]
            forb = set()
            par = parent.get(x)
            if par is not None and par in col:
                forb.add(col[par])
            for y in partners.get(x, ()):
                if y in col:
                    forb.add(col[y])
            for c in (1, 2, 3):
                if c in forb:
                    continue
                col[x] = c
                out = rec(i + 1)
                if out:
                    return out
                del col[x]
            return None

        return rec(0)

    # -- top-level three-coloring flow --------------------------------------

    def run3(self, pair: Optional[tuple]) -> None:
        r = self.n_act % 3
        done = False
        for _ in range(r):
            done = self._peel_one(pair)
            if done:
                break
        while not done:
            if self.big_count == 0:
                self._base_path(pair)
                break
            if self.n_act <= 9:
                self._base_search([pair] if pair else [])
                break
            pair = self._inner_step(pair)
            if pair == "done":
                break
        self._unwind()

    def _peel_one(self, pair: Optional[tuple]) -> bool:
        """Remove one leaf keeping the constraint pair pre-leaves; falls back
        to the direct spine coloring when every leaf crowds the pair.
        Returns True when the tree got colored directly."""
        if pair is None:
            w = self._min_leaf()
        else:
            p, q = pair
            w = self._min_leaf(nbr_not_in={p, q})
            if w is None:
                for z in sorted(pair):
                    if len(self.adj[z]) >= 3 and self.leafnbr[z]:
                        w = min(self.leafnbr[z])
                        break
            if w is None:
                self._spine_terminal(p, q, p, q)
                return True
        if w is None:
            raise self._fail("no leaf available to peel")
        (z,) = self.adj[w]
        self.records.append(("leaf", w, z, ((w, (z,)),)))
        self.trace.append("ext:leaf")
        self.delete_leaf(w)
        return False

    def _select_pair(self) -> tuple:
        it = iter(sorted(self.preleaf))
        try:
            p = next(it)
            q = next(it)
        except StopIteration:
            raise self._fail("fewer than two pre-leaves at an inner level")
        return p, q

    def _inner_step(self, pair: Optional[tuple]):
        """One peel of three vertices at n ≡ 0 (mod 3); returns the pair for
        the next level, or the sentinel 'done' when colored directly."""
        n = self.n_act
        k = n // 3
        if pair is None:
            pair = self._select_pair()
        p, q = pair
        if p not in self.preleaf or q not in self.preleaf:
            raise self._fail("constraint pair stopped being pre-leaves")
        if (len(self.adj[p]), p) > (len(self.adj[q]), q):
            p, q = q, p
        W = self.bucket.get(k, ())
        if len(W) >= 2:
            u0, v0 = sorted(W)[:2]
            self.trace.append("delegate:hubs")
            self.lemma_run(u0, v0, p, q)
            return "done"
        if len(W) == 0:
            if len(self.adj[p]) >= 3:
                return self._case_triple(p, q, cap_vertex=None)
            return self._case_pendant(p, q, cap_vertex=None)
        (v0,) = W
        if self.leafnbr[v0]:
            if len(self.adj[p]) >= 3:
                return self._case_triple(p, q, cap_vertex=v0)
            return self._case_pendant(p, q, cap_vertex=v0)
        return self._case_special(p, q, v0)

    def _case_triple(self, p: int, q: int, cap_vertex: Optional[int]):
        """Delete one leaf at each of p, q and one more elsewhere."""
        v1 = min(self.leafnbr[p])
        v2 = min(self.leafnbr[q])
        if cap_vertex is not None and cap_vertex != q:
            v3 = min(self.leafnbr[cap_vertex])
            w = cap_vertex
        else:
            v3 = self._min_leaf(nbr_not_in={p, q})
            if v3 is None:
                # every leaf sits on p or q: the tree is a double broom
                self._spine_terminal(p, q, p, q)
                return "done"
            (w,) = self.adj[v3]
        self.records.append(("ext3", p, q, v1, v2, v3, w, ((v1, (p,)), (v2, (q,)), (v3, (w,)))))
        self.trace.append("ext:triple" if cap_vertex is None else "ext:triple-capped")
        self.delete_leaf(v1)
        self.delete_leaf(v2)
        self.delete_leaf(v3)
        return (p, q)

    def _case_pendant(self, p: int, q: int, cap_vertex: Optional[int]):
        """p is a degree-two pre-leaf: delete p with its leaf plus one more."""
        v1 = min(self.leafnbr[p])
        (u,) = (x for x in self.adj[p] if x != v1)
        if cap_vertex is not None:
            v2 = min(self.leafnbr[cap_vertex])
        else:
            v2 = self._min_leaf(nbr_not_in={u}, exclude={v1})
            if v2 is None:
                # all leaves hang on u except p's: a broom with heads p and u
                if q != u:
                    raise self._fail("broom fallback expected the second pre-leaf at the heavy head")
                self._spine_terminal(p, u, p, q)
                return "done"
        (w,) = self.adj[v2]
        self.records.append(("pend3", p, q, u, v1, v2, w, ((v1, (p,)), (p, (u,)), (v2, (w,)))))
        self.trace.append("ext:pendant" if cap_vertex is None else "ext:pendant-capped")
        self.delete_leaf(v1)
        self.delete_leaf(p)
        self.delete_leaf(v2)
        return None

    def _case_special(self, p: int, q: int, v0: int):
        """The unique maximal-degree vertex has no pendant leaf: remove the
        special vertex next to it (with its leaf) plus one far leaf."""
        v = None
        for x in sorted(self.adj[v0]):
            if len(self.adj[x]) == 2 and self.leafnbr[x]:
                v = x
                break
        if v is None:
            raise self._fail("no special vertex adjacent to the maximal-degree vertex")
        v1 = min(self.leafnbr[v])
        v2 = self._min_leaf(nbr_not_in={p, q, v})
        if v2 is None:
            raise self._fail("no leaf clear of the constraint pair and the special vertex")
        (w,) = self.adj[v2]
        deleted = ((v1, (v,)), (v, (v0,)), (v2, (w,)))
        if v in (p, q):
            other = q if v == p else p
            self.records.append(("special-swap", v, v1, v2, w, v0, other, deleted))
            self.trace.append("ext:special-swap")
            nxt = None
        else:
            self.records.append(("special", v, v1, v2, w, v0, deleted))
            self.trace.append("ext:special")
            nxt = (p, q)
        self.delete_leaf(v1)
        self.delete_leaf(v)
        self.delete_leaf(v2)
        return nxt

    # -- unwind --------------------------------------------------------------

    def _pick(self, banned: Iterable[int]) -> int:
        banned = set(banned)
        for c in (1, 2, 3):
            if c not in banned:
                return c
        raise self._fail("no color left for an extension")

    def _pick_lightest(self, banned: Iterable[int]) -> int:
        banned = set(banned)
        cands = [c for c in (1, 2, 3) if c not in banned]
        return min(cands, key=lambda c: (self.sizes[c], c))

    def _assign(self, v: int, c: int) -> None:
        self.col[v] = c
        self.sizes[c] += 1

    def _unwind(self) -> None:
        col = self.col
        for rec in reversed(self.records):
            kind = rec[0]
            if kind == "leaf":
                _, w, z, deleted = rec
                self._assign(w, self._pick_lightest([col[z]]))
            elif kind == "ext3":
                _, p, q, v1, v2, v3, w, deleted = rec
                cp, cq = col[p], col[q]
                if cp == cq:
                    raise self._fail("constraint pair shares a color during unwind")
                third = 6 - cp - cq
                if col[w] in (cp, cq):
                    self._assign(v1, cq)
                    self._assign(v2, cp)
                    self._assign(v3, third)
                else:
                    self._assign(v1, third)
                    self._assign(v2, cp)
                    self._assign(v3, cq)
            elif kind == "pend3":
                _, p, q, u, v1, v2, w, deleted = rec
                cp = self._pick([col[u], col[q]])
                self._assign(p, cp)
                cv2 = self._pick([col[w], cp])
                self._assign(v2, cv2)
                self._assign(v1, self._pick([cp, cv2]))
            elif kind == "special":
                _, v, v1, v2, w, v0, deleted = rec
                cv2 = self._pick([col[w]])
                self._assign(v2, cv2)
                cv = self._pick([col[v0], cv2])
                self._assign(v, cv)
                self._assign(v1, self._pick([cv, cv2]))
            elif kind == "special-swap":
                _, v, v1, v2, w, v0, other, deleted = rec
                cv = self._pick([col[v0], col[other]])
                self._assign(v, cv)
                cv2 = self._pick([col[w], cv])
                self._assign(v2, cv2)
                self._assign(v1, self._pick([cv, cv2]))
            elif kind == "hub-peel":
                _, w, z, u, v, p, q, deleted = rec
                self._extend_hub_peel(w, z, u, v, p, q)
            else:
                raise self._fail(f"unknown record {kind}")
            for vtx, nbrs in reversed(deleted):
                self.restore(vtx, nbrs)

    def _extend_hub_peel(self, w: int, z: int, u: int, v: int, p: int, q: int) -> None:
        col = self.col
        col1 = col[z]
        others = sorted((c for c in (1, 2, 3) if c != col1), key=lambda c: (self.sizes[c], c))
        col2 = others[0]
        if self.sizes[col1] >= self.sizes[col2]:
            self._assign(w, col2)
            return
        # the class of w's neighbor is strictly smallest: swap a far leaf into
        # it and give w that leaf's old color
        r = u if col[u] != col1 else v
        comp_found = None
        for nb in sorted(self.adj[r]):
            comp = [nb]
            seen = {r, nb}
            good = col[nb] != col1
            stack = [nb]
            while stack and good:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        if col[y] == col1:
                            good = False
                            break
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            if good:
                comp_found = comp
                break
        if comp_found is None:
            raise self._fail("no branch avoids the deficient color class")
        leaf_cands = [y for y in comp_found if len(self.adj[y]) == 1]
        if not leaf_cands:
            raise self._fail("branch without a leaf")
        x = min(leaf_cands)
        if x in (u, v, p, q):
            raise self._fail("swap leaf collides with a constrained vertex")
        cx = col[x]
        col[x] = col1
        self.sizes[col1] += 1
        self.sizes[cx] -= 1
        self._assign(w, cx)


# ---------------------------------------------------------------------------
# Public constructors.


def _certify(t: Graph, colors: dict, k: int, trace: Iterable[str]) -> EquitableCertificate:
    cert = verify_equitable(t, KColoring(k, colors), trace)
    if not cert.valid:
        raise InternalInvariant("constructed coloring failed verification", dump=format_tree_text(t))
    return cert


def equitable_three(t: Tree, constraint: Optional[tuple] = None) -> EquitableCertificate:
    """Equitable 3-coloring of a tree with max degree at most n/3.

    With ``constraint=(p, q)`` (two distinct pre-leaf vertices) the returned
    coloring additionally separates p and q.
    """
    n = t.n
    if n >= 2 and t.max_degree * 3 > n:
        raise DegreeTooHigh(f"max degree {t.max_degree} exceeds n/3 = {n / 3:.2f}")
    if constraint is not None:
        p, q = constraint
        if p == q or not (1 <= p <= n and 1 <= q <= n) or not (is_pre_leaf(t, p) and is_pre_leaf(t, q)):
            raise NoTwoPreLeaves(f"({p}, {q}) is not a pair of distinct pre-leaf vertices")
    if n == 1:
        return _certify(t, {1: 1}, 3, ("direct:trivial",))
    if is_path_graph(t):
        colors = _path3_colors(path_order(t), constraint)
        cert = _certify(t, colors, 3, ("direct:path",))
    else:
        m = _Machine(t)
        m.run3(constraint)
        cert = _certify(t, {v: m.col[v] for v in range(1, n + 1)}, 3, tuple(m.trace))
    if constraint is not None:
        p, q = constraint
        if cert.coloring.color(p) == cert.coloring.color(q):
            raise InternalInvariant("constraint pair ended up with one color", dump=format_tree_text(t))
    return cert


def hub_pair_coloring(t: Tree, u: int, v: int, p: int, q: int) -> EquitableCertificate:
    """Equitable 3-coloring separating two vertices of degree >= n/3 and two
    pre-leaf vertices."""
    n = t.n
    if u == v or not (1 <= u <= n and 1 <= v <= n):
        raise PreconditionViolated("u and v must be distinct vertices")
    if t.degree(u) * 3 < n or t.degree(v) * 3 < n:
        raise PreconditionViolated("both designated vertices need degree at least n/3")
    if p == q or not (1 <= p <= n and 1 <= q <= n) or not (is_pre_leaf(t, p) and is_pre_leaf(t, q)):
        raise PreconditionViolated("p and q must be distinct pre-leaf vertices")
    m = _Machine(t)
    m.lemma_run(u, v, p, q)
    m._unwind()
    cert = _certify(t, {x: m.col[x] for x in range(1, n + 1)}, 3, tuple(m.trace))
    cc = cert.coloring
    if cc.color(u) == cc.color(v) or cc.color(p) == cc.color(q):
        raise InternalInvariant("hub or pre-leaf pair shares a color", dump=format_tree_text(t))
    return cert


def _independent_low_degree(t: Graph, m: int) -> list:
    """m pairwise non-adjacent vertices of degree <= 2, smallest-id greedy
    with an exact forest fallback."""
    n = t.n
    low = [v for v in range(1, n + 1) if len(t.adj[v]) <= 2]
    blocked = bytearray(n + 1)
    chosen = []
    for v in low:
        if not blocked[v]:
            chosen.append(v)
            if len(chosen) == m:
                return chosen
            for w in t.adj[v]:
                blocked[w] = 1
    # exact maximum independent set on the forest induced by low vertices
    low_set = set(low)
    sub = {v: [w for w in t.adj[v] if w in low_set] for v in low}
    take_flag: dict = {}
    visited = set()
    for root in low:
        if root in visited:
            continue
        order = []
        parent = {root: 0}
        stack = [root]
        visited.add(root)
        while stack:
            x = stack.pop()
            order.append(x)
            for y in sub[x]:
                if y not in visited:
                    visited.add(y)
                    parent[y] = x
                    stack.append(y)
        dp_in = {}
        dp_out = {}
        for x in reversed(order):
            kids = [y for y in sub[x] if parent.get(y) == x]
            dp_in[x] = 1 + sum(dp_out[y] for y in kids)
            dp_out[x] = sum(max(dp_in[y], dp_out[y]) for y in kids)
        for x in order:
            if x == root:
                take_flag[x] = dp_in[x] >= dp_out[x]
            else:
                par = parent[x]
                take_flag[x] = (not take_flag[par]) and dp_in[x] >= dp_out[x]
    exact = sorted(v for v in low if take_flag[v])
    if len(exact) >= m:
        return exact[:m]
    raise IndependentSetNotFound(f"needed {m}, found {len(exact)} among degree-<=2 vertices")


def equitable_coloring(t: Tree, k: int) -> EquitableCertificate:
    """Equitable k-coloring of a tree with max degree at most n/k, k >= 3.

    For k >= 4 the tree sheds floor(n/k) pairwise non-adjacent low-degree
    vertices (they become color k), the remaining forest is completed to a
    tree under the same degree cap, and the completion is colored with k-1
    colors; class sizes come out exactly equitable by arithmetic.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    n = t.n
    if n >= 2 and t.max_degree * k > n:
        raise DegreeTooHigh(f"max degree {t.max_degree} exceeds n/k = {n / k:.2f}")
    if n == 1:
        return _certify(t, {1: 1}, k, ("direct:trivial",))
    if k == 3:
        cert3 = equitable_three(t)
        return cert3
    if is_path_graph(t):
        return _certify(t, _round_robin_colors(path_order(t), k), k, ("direct:path",))
    trace: list = []
    layers: list = []  # (k_level, removed original ids)
    cur = t
    cur_map = tuple(range(0, n + 1))  # new id -> original id
    for k_level in range(k, 3, -1):
        m = cur.n // k_level
        v0 = _independent_low_degree(cur, m)
        removed_orig = [cur_map[x] for x in v0]
        sub = induced_subtree(cur, v0)
        completed = complete_forest_to_tree(sub.graph, max(cur.max_degree, 2))
        if completed.max_degree * (k_level - 1) > completed.n:
            raise InternalInvariant("degree cap lost during forest completion", dump=format_tree_text(t))
        layers.append((k_level, removed_orig))
        cur_map = tuple([0] + [cur_map[old] for old in sub.new_to_old[1:]])
        cur = completed
        trace.append(f"reduce:k{k_level}")
    cert3 = equitable_three(cur)
    colors = {}
    for new_v in range(1, cur.n + 1):
        colors[cur_map[new_v]] = cert3.coloring.color(new_v)
    for k_level, removed in layers:
        for v in removed:
            colors[v] = k_level
    trace.extend(cert3.trace)
    cert = _certify(t, colors, k, tuple(trace))
    if tuple(sorted(cert.coloring.class_sizes, reverse=True)) != balanced_targets(n, k):
        raise InternalInvariant("class sizes missed the exact equitable split", dump=format_tree_text(t))
    return cert

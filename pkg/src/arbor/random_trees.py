"""Uniform labeled random trees via Prüfer codes, exhaustive enumeration at
small sizes, per-tree degree statistics, and canonical forms for
isomorphism-level deduplication.

There are exactly n^(n-2) labeled trees on n vertices, in bijection with
length-(n-2) sequences over 1..n; a vertex of the decoded tree has degree
one plus its multiplicity in the code.  Sampling i.i.d. uniform entries and
decoding therefore samples labeled trees exactly uniformly.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BadEntry, TooLarge
from .trees import Graph, Tree, build_tree

ENUMERATION_LIMIT = 8  # 8^6 = 262144 codes


def prufer_decode(entries: Sequence[int], n: int) -> Tree:
    """Decode a length-(n-2) code into the unique labeled tree on 1..n.

    Repeatedly joins the smallest current leaf to the next code entry; the
    final edge joins the last two survivors.
    """
    if n < 2:
        raise BadEntry(f"need n >= 2, got {n}")
    if len(entries) != n - 2:
        raise BadEntry(f"code length {len(entries)} != n-2 = {n - 2}")
    deg = [1] * (n + 1)
    for a in entries:
        if not (1 <= a <= n):
            raise BadEntry(f"entry {a} outside 1..{n}")
        deg[a] += 1
    leaves = [v for v in range(1, n + 1) if deg[v] == 1]
    heapq.heapify(leaves)
    nbr: list = [[] for _ in range(n + 1)]
    for a in entries:
        v = heapq.heappop(leaves)
        nbr[v].append(a)
        nbr[a].append(v)
        deg[a] -= 1
        if deg[a] == 1:
            heapq.heappush(leaves, a)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    nbr[u].append(v)
    nbr[v].append(u)
    # the decoding always yields a tree, so skip re-validation
    adj = tuple([()] + [tuple(sorted(nbr[x])) for x in range(1, n + 1)])
    t = Tree(n, adj, n - 1)
    t._max_deg = max(len(a) for a in adj[1:])
    return t


def prufer_encode(t: Tree) -> list[int]:
    """Inverse of decoding: strip the smallest leaf, record its neighbor."""
    n = t.n
    if n < 2:
        raise BadEntry("encoding needs n >= 2")
    deg = [len(t.adj[v]) for v in range(n + 1)]
    removed = bytearray(n + 1)
    leaves = [v for v in range(1, n + 1) if deg[v] == 1]
    heapq.heapify(leaves)
    out = []
    for _ in range(n - 2):
        v = heapq.heappop(leaves)
        removed[v] = 1
        for w in t.adj[v]:
            if not removed[w]:
                out.append(w)
                deg[w] -= 1
                if deg[w] == 1:
                    heapq.heappush(leaves, w)
                break
    return out


# ---------------------------------------------------------------------------
# Seeded sampling.  Per-trial streams use a counter-based generator keyed by
# (master seed, trial index) so trial i is independent of how many trials run
# and of any parallel schedule.


def trial_rng(master_seed: int, trial: int = 0) -> np.random.Generator:
    key = np.zeros(2, dtype=np.uint64)
    key[0] = np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF)
    key[1] = np.uint64(trial & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def random_prufer(n: int, rng: np.random.Generator) -> list[int]:
    if n == 2:
        return []
    return rng.integers(1, n + 1, size=n - 2).tolist()


def sample_labeled_tree(n: int, seed: int, trial: int = 0) -> Tree:
    """Uniform over all n^(n-2) labeled trees; deterministic per (seed, trial)."""
    return prufer_decode(random_prufer(n, trial_rng(seed, trial)), n)


def enumerate_labeled_trees(n: int) -> Iterator[Tree]:
    """All labeled trees on 1..n exactly once, in lexicographic code order."""
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"n={n} exceeds enumeration limit {ENUMERATION_LIMIT}")
    if n < 2:
        raise BadEntry(f"need n >= 2, got {n}")
    if n == 2:
        yield prufer_decode([], 2)
        return
    for entries in itertools.product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(list(entries), n)


@dataclass(frozen=True)
class TreeStats:
    max_degree: int
    x1: int  # number of degree-1 vertices
    x2: int  # number of degree-2 vertices


def tree_stats(t: Graph) -> TreeStats:
    d_max = 0
    x1 = 0
    x2 = 0
    for v in range(1, t.n + 1):
        d = len(t.adj[v])
        if d > d_max:
            d_max = d
        if d == 1:
            x1 += 1
        elif d == 2:
            x2 += 1
    return TreeStats(d_max, x1, x2)


def stats_from_prufer(entries: Sequence[int], n: int) -> TreeStats:
    """Stats of the decoded tree, read off the code without building it.

    deg(v) = multiplicity(v) + 1, so the degree histogram is a bincount.
    """
    counts = np.bincount(np.asarray(entries, dtype=np.int64), minlength=n + 1) if len(entries) else np.zeros(n + 1, dtype=np.int64)
    degs = counts[1 : n + 1] + 1
    return TreeStats(int(degs.max()), int((degs == 1).sum()), int((degs == 2).sum()))


# ---------------------------------------------------------------------------
# Canonical forms.  Rooted shapes are encoded as sorted tuples of child
# encodings; a free tree is keyed by the encoding at its centroid (minimum of
# the two encodings when the centroid is an edge).  Used to deduplicate test
# corpora up to isomorphism.


def _centroids(t: Graph) -> list[int]:
    n = t.n
    if n == 1:
        return [1]
    size = [0] * (n + 1)
    order = []
    parent = [0] * (n + 1)
    seen = bytearray(n + 1)
    stack = [1]
    seen[1] = 1
    while stack:
        u = stack.pop()
        order.append(u)
        for w in t.adj[u]:
            if not seen[w]:
                seen[w] = 1
                parent[w] = u
                stack.append(w)
    best: list[int] = []
    best_weight = n + 1
    for u in reversed(order):
        size[u] = 1 + sum(size[w] for w in t.adj[u] if parent[w] == u)
        weight = max(n - size[u], max((size[w] for w in t.adj[u] if parent[w] == u), default=0))
        if weight < best_weight:
            best_weight = weight
            best = [u]
        elif weight == best_weight:
            best.append(u)
    return sorted(best)


def _rooted_encoding(t: Graph, root: int) -> tuple:
    # iterative post-order to stay safe on long paths
    n = t.n
    parent = [0] * (n + 1)
    order = []
    seen = bytearray(n + 1)
    stack = [root]
    seen[root] = 1
    while stack:
        u = stack.pop()
        order.append(u)
        for w in t.adj[u]:
            if not seen[w]:
                seen[w] = 1
                parent[w] = u
                stack.append(w)
    enc: list[tuple] = [()] * (n + 1)
    for u in reversed(order):
        enc[u] = tuple(sorted(enc[w] for w in t.adj[u] if parent[w] == u))
    return enc[root]


def canonical_form(t: Graph) -> tuple:
    """Isomorphism-invariant key: centroid-rooted shape encoding."""
    cents = _centroids(t)
    return min(_rooted_encoding(t, c) for c in cents)


# ---------------------------------------------------------------------------
# Exhaustive unlabeled (isomorphism-distinct) trees at small n via canonical
# rooted shapes; feasible far beyond the labeled enumeration limit.


def _rooted_shapes(n: int, max_shape: tuple | None, cache: dict) -> list[tuple]:
    """Canonical rooted shapes of size n whose encoding is <= max_shape."""
    key = (n, max_shape)
    if key in cache:
        return cache[key]
    if n == 1:
        out = [()] if max_shape is None or () <= max_shape else []
        cache[key] = out
        return out
    out = []
    # children listed in non-increasing encoding order
    def extend(remaining: int, bound: tuple | None, acc: list):
        if remaining == 0:
            shape = tuple(sorted(acc))
            if max_shape is None or shape <= max_shape:
                out.append(shape)
            return
        for size in range(remaining, 0, -1):
            for child in _rooted_shapes(size, bound, cache):
                acc.append(child)
                extend(remaining - size, child, acc)
                acc.pop()

    extend(n - 1, None, [])
    out = sorted(set(out))
    cache[key] = out
    return out


def _shape_to_tree(shape: tuple) -> Tree:
    edges = []
    counter = [1]

    def emit(s: tuple, me: int):
        for child in s:
            counter[0] += 1
            cid = counter[0]
            edges.append((me, cid))
            emit(child, cid)

    emit(shape, 1)
    return build_tree(edges, counter[0])


def enumerate_unlabeled_trees(n: int) -> list[Tree]:
    """One representative per isomorphism class of trees on n vertices."""
    if n == 1:
        return [Tree(1, ((), ()), 0)]
    cache: dict = {}
    seen = set()
    out = []
    for shape in _rooted_shapes(n, None, cache):
        t = _shape_to_tree(shape)
        key = canonical_form(t)
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out

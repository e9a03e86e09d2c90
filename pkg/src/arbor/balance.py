"""Balance of integer sequences and balanced 2-colorings of graphs.

The balance of a sequence is the minimum of |sum(I) - sum(J)| over all
partitions of the index set into near-equicardinal halves.  A graph admits
a 2-coloring with vertex classes and monochromatic edge counts each within
one of each other exactly when the balance of its degree sequence is at
most two, so everything here reduces to arithmetic on degree sequences.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Optional, Sequence

from .colorings import KColoring
from .errors import HypothesisViolated, InternalInvariant, TooLarge
from .trees import Graph

BRUTE_FORCE_VERTEX_LIMIT = 24
K_BRUTE_DEFAULT_LIMIT = 3**15


class DegreeSequence:
    """Sequence of positive integers with cached tallies."""

    __slots__ = ("values", "max_value", "total", "ones_count", "twos_count")

    def __init__(self, values: Iterable[int]):
        vals = tuple(int(v) for v in values)
        if not vals:
            raise ValueError("empty sequence")
        if any(v < 1 for v in vals):
            raise ValueError("values must be positive")
        self.values = vals
        self.max_value = max(vals)
        self.total = sum(vals)
        self.ones_count = sum(1 for v in vals if v == 1)
        self.twos_count = sum(1 for v in vals if v == 2)

    @classmethod
    def from_graph(cls, g: Graph) -> "DegreeSequence":
        return cls(g.degree_sequence())

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"DegreeSequence({list(self.values)})"


def _values_of(seq) -> tuple:
    """Plain non-negative value tuple from a DegreeSequence or any iterable.

    The balance of a sequence is defined for non-negative integers, so zeros
    (isolated vertices) are accepted here even though DegreeSequence itself
    models positive degree lists.
    """
    if isinstance(seq, DegreeSequence):
        return seq.values
    vals = tuple(int(v) for v in seq)
    if not vals:
        raise ValueError("empty sequence")
    if any(v < 0 for v in vals):
        raise ValueError("values must be non-negative")
    return vals


@dataclass(frozen=True)
class Partition:
    """Split of indices 1..n into I and J with the side sums."""

    I: tuple
    J: tuple
    sum_I: int
    sum_J: int

    @property
    def diff(self) -> int:
        return abs(self.sum_I - self.sum_J)

    @property
    def card_diff(self) -> int:
        return abs(len(self.I) - len(self.J))


@dataclass(frozen=True)
class BalanceReport:
    v1: int
    v2: int
    e1: int
    e2: int
    cross: int
    balanced: bool


# ---------------------------------------------------------------------------
# Exact balance via subset-sum DP over (chosen count, chosen sum) states.
# Rows are big-int bitsets (bit s of rows[c] marks an achievable c-subset of
# sum s); the witness is recovered by re-running blocks between checkpoints,
# which keeps memory near sqrt(n) row snapshots.


def _dp_rows(items: Sequence[int], c_max: int, block: int | None = None):
    rows = [0] * (c_max + 1)
    rows[0] = 1
    checkpoints = []
    for i, a in enumerate(items):
        if block is not None and i % block == 0:
            checkpoints.append(list(rows))
        hi = min(i + 1, c_max)
        for c in range(hi, 0, -1):
            prev = rows[c - 1]
            if prev:
                rows[c] |= prev << a
    return rows, checkpoints


def _trace_subset(items: Sequence[int], c_target: int, s_target: int, checkpoints, block: int) -> list[int]:
    chosen = []
    c, s = c_target, s_target
    n = len(items)
    for b in reversed(range(len(checkpoints))):
        start = b * block
        end = min(n, start + block)
        rows = list(checkpoints[b])
        before = []
        for i in range(start, end):
            before.append(list(rows))
            hi = min(i + 1, c_target)
            a = items[i]
            for c2 in range(hi, 0, -1):
                prev = rows[c2 - 1]
                if prev:
                    rows[c2] |= prev << a
        for i in reversed(range(start, end)):
            prev_rows = before[i - start]
            a = items[i]
            if c >= 1 and s >= a and (prev_rows[c - 1] >> (s - a)) & 1:
                chosen.append(i)
                c -= 1
                s -= a
            elif not (prev_rows[c] >> s) & 1:
                raise InternalInvariant("balance DP trace lost its state")
    if c != 0 or s != 0:
        raise InternalInvariant("balance DP trace did not empty")
    chosen.reverse()
    return chosen


def _best_split_sum(row: int, total: int) -> tuple[int, int]:
    """Smallest |2s - total| over set bits s of row, with a witnessing s."""
    for d in range(total % 2, total + 1, 2):
        lo = (total - d) // 2
        if lo >= 0 and (row >> lo) & 1:
            return d, lo
        hi = (total + d) // 2
        if (row >> hi) & 1:
            return d, hi
    raise InternalInvariant("empty DP row")


@functools.lru_cache(maxsize=1 << 14)
def _small_exact(values: tuple) -> tuple[int, tuple]:
    """Memoized value-level answer for short sequences: (F, chosen multiset)."""
    n = len(values)
    c_target = n // 2
    block = max(1, n)
    rows, checkpoints = _dp_rows(values, c_target, block=block)
    f, s_star = _best_split_sum(rows[c_target], sum(values))
    idx = _trace_subset(values, c_target, s_star, checkpoints, block)
    return f, tuple(sorted(values[i] for i in idx))


def balance_exact(seq: DegreeSequence | Sequence[int]) -> tuple[int, Partition]:
    """Exact balance F with a witnessing partition (1-based index sets).

    I is the traced side of floor(n/2) indices; J is its complement.
    """
    values = _values_of(seq)
    n = len(values)
    total = sum(values)
    c_target = n // 2
    if n <= 16:
        f, chosen_values = _small_exact(values)
        pools: dict[int, list[int]] = {}
        for i, v in enumerate(values):
            pools.setdefault(v, []).append(i)
        taken = {v: 0 for v in pools}
        chosen_idx = []
        for v in chosen_values:
            chosen_idx.append(pools[v][taken[v]])
            taken[v] += 1
        chosen = sorted(chosen_idx)
    else:
        block = max(16, isqrt(n))
        rows, checkpoints = _dp_rows(values, c_target, block=block)
        f, s_star = _best_split_sum(rows[c_target], total)
        chosen = _trace_subset(values, c_target, s_star, checkpoints, block)
    in_i = set(chosen)
    I = tuple(i + 1 for i in sorted(in_i))
    J = tuple(i + 1 for i in range(n) if i not in in_i)
    sum_i = sum(values[i] for i in in_i)
    part = Partition(I, J, sum_i, total - sum_i)
    if part.diff != f:
        raise InternalInvariant("witness does not attain the computed balance")
    return f, part


# ---------------------------------------------------------------------------
# Constructive bounds.


def _greedy_pairs(items: list[tuple[int, Optional[int]]]) -> tuple[list, list, int, int]:
    """Pairing construction: sort ascending, walk pairs from the top, give the
    smaller element of each pair to the side whose running sum is larger
    (ties send the larger element to I).  Items are (value, original index);
    a virtual (0, None) is prepended when the length is odd."""
    items = sorted(items, key=lambda t: (t[0], t[1] if t[1] is not None else -1))
    if len(items) % 2 == 1:
        items = [(0, None)] + items
    m = len(items) // 2
    if m == 0:
        return [], [], 0, 0
    I = [items[-1]]
    J = [items[-2]]
    s_i = items[-1][0]
    s_j = items[-2][0]
    for k in range(1, m):
        small = items[2 * m - 2 * k - 2]
        large = items[2 * m - 2 * k - 1]
        if s_i > s_j:
            I.append(small)
            J.append(large)
            s_i += small[0]
            s_j += large[0]
        else:
            I.append(large)
            J.append(small)
            s_i += large[0]
            s_j += small[0]
    return I, J, s_i, s_j


def _as_partition(I, J, s_i, s_j) -> Partition:
    i_idx = tuple(sorted(i + 1 for _, i in I if i is not None))
    j_idx = tuple(sorted(j + 1 for _, j in J if j is not None))
    return Partition(i_idx, j_idx, s_i, s_j)


def greedy_pair_partition(seq: DegreeSequence | Sequence[int]) -> Partition:
    """Near-equicardinal partition with |sum(I) - sum(J)| <= max(seq)."""
    items = [(v, i) for i, v in enumerate(_values_of(seq))]
    return _as_partition(*_greedy_pairs(items))


def ones_twos_partition(seq: DegreeSequence | Sequence[int]) -> Partition:
    """Partition with |sum(I) - sum(J)| <= 2, given enough ones and twos.

    Requires at least max(seq) ones and max(seq) twos.  The reserved block of
    max(seq) ones and twos is split half/half per side, with the number of
    twos sent to the lighter side chosen so the block imbalance cancels the
    greedy remainder difference up to parity.
    """
    values = _values_of(seq)
    m = max(values)
    ones_total = sum(1 for v in values if v == 1)
    twos_total = sum(1 for v in values if v == 2)
    if ones_total < m or twos_total < m:
        raise HypothesisViolated(
            f"need at least max={m} ones and twos; have {ones_total} and {twos_total}"
        )
    ones_pool = [i for i, v in enumerate(values) if v == 1][:m]
    twos_pool = [i for i, v in enumerate(values) if v == 2][:m]
    reserved = set(ones_pool) | set(twos_pool)
    rest = [(v, i) for i, v in enumerate(values) if i not in reserved]
    I, J, s_i, s_j = _greedy_pairs(rest) if rest else ([], [], 0, 0)
    d = s_i - s_j
    light_is_i = d < 0
    t = (m + abs(d)) // 2  # twos handed to the lighter side
    light = [(2, i) for i in twos_pool[:t]] + [(1, i) for i in ones_pool[: m - t]]
    heavy = [(2, i) for i in twos_pool[t:]] + [(1, i) for i in ones_pool[m - t :]]
    light_sum = 2 * t + (m - t)
    heavy_sum = 3 * m - light_sum
    if light_is_i:
        I += light
        J += heavy
        s_i += light_sum
        s_j += heavy_sum
    else:
        I += heavy
        J += light
        s_i += heavy_sum
        s_j += light_sum
    part = _as_partition(I, J, s_i, s_j)
    if part.diff > 2 or part.card_diff > 1:
        raise InternalInvariant("ones/twos construction exceeded its bound")
    return part


# ---------------------------------------------------------------------------
# Graph-level balance.


def partition_coloring(part: Partition) -> KColoring:
    """Color class 1 = I, class 2 = J."""
    assignment = {v: 1 for v in part.I}
    assignment.update({v: 2 for v in part.J})
    return KColoring(2, assignment)


def is_balanced_graph(g: Graph) -> Optional[KColoring]:
    """A balanced 2-coloring when one exists, else None.

    Balancedness depends only on the degree sequence: any partition with
    near-equal cardinalities and degree sums within two yields a balanced
    coloring.  When the sequence has enough ones and twos the constructive
    partition is used directly; otherwise the exact DP decides.
    """
    if g.n == 0:
        return None
    degrees = g.degree_sequence()
    m = max(degrees)
    ones = sum(1 for d in degrees if d == 1)
    twos = sum(1 for d in degrees if d == 2)
    if m >= 1 and ones >= m and twos >= m:
        part = ones_twos_partition(degrees)
        return partition_coloring(part)
    f, part = balance_exact(degrees)
    if f > 2:
        return None
    return partition_coloring(part)


def verify_balanced(g: Graph, coloring: KColoring) -> BalanceReport:
    """Exact class/edge tallies for a 2-coloring."""
    coloring.require_total(g)
    col = coloring.assignment
    v1 = sum(1 for v in range(1, g.n + 1) if col[v] == 1)
    v2 = g.n - v1
    e1 = e2 = cross = 0
    for u, v in g.edges():
        cu, cv = col[u], col[v]
        if cu == cv:
            if cu == 1:
                e1 += 1
            else:
                e2 += 1
        else:
            cross += 1
    balanced = abs(v1 - v2) <= 1 and abs(e1 - e2) <= 1
    return BalanceReport(v1, v2, e1, e2, cross, balanced)


def brute_force_balanced(g: Graph) -> bool:
    """Independent oracle: enumerate all near-equal vertex bipartitions."""
    n = g.n
    if n > BRUTE_FORCE_VERTEX_LIMIT:
        raise TooLarge(f"n={n} exceeds brute-force limit {BRUTE_FORCE_VERTEX_LIMIT}")
    if n == 1:
        return True
    edge_masks = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in g.edges()]
    for subset in itertools.combinations(range(n), n // 2):
        mask = 0
        for b in subset:
            mask |= 1 << b
        e1 = e2 = 0
        for em in edge_masks:
            inside = em & mask
            if inside == em:
                e1 += 1
            elif inside == 0:
                e2 += 1
        if abs(e1 - e2) <= 1:
            return True
    return False


def brute_force_k_balanced(g: Graph, k: int, limit: int = K_BRUTE_DEFAULT_LIMIT) -> Optional[KColoring]:
    """Witness k-balanced coloring by pruned exhaustive search, or None.

    Prunes on class-size caps, on the class-size deficit still to fill, and
    on monochromatic-edge spread that no completion could repair.  Colors are
    introduced in canonical (first-use) order, which is sound because classes
    are interchangeable.
    """
    n = g.n
    if k < 2:
        raise ValueError("k must be at least 2")
    if k**n > limit:
        raise TooLarge(f"{k}^{n} exceeds search limit {limit}")
    cap_hi = -(-n // k)
    q_lo = n // k
    start = max(range(1, n + 1), key=lambda v: (len(g.adj[v]), -v))
    order = []
    seen = bytearray(n + 1)
    stack = [start]
    seen[start] = 1
    while stack:
        u = stack.pop()
        order.append(u)
        for w in g.adj[u]:
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    for v in range(1, n + 1):  # disconnected inputs
        if not seen[v]:
            order.append(v)
            seen[v] = 1
    pos = {v: i for i, v in enumerate(order)}
    nbrs_before = [[w for w in g.adj[v] if pos[w] < pos[v]] for v in order]
    total_edges = g.edge_count
    col = [0] * (n + 1)
    sizes = [0] * (k + 1)
    mono = [0] * (k + 1)

    def dfs(i: int, used: int, edges_done: int) -> bool:
        if i == n:
            return max(mono[1 : k + 1]) - min(mono[1 : k + 1]) <= 1
        v = order[i]
        before = nbrs_before[i]
        remaining_edges = total_edges - edges_done - len(before)
        for c in range(1, min(used + 1, k) + 1):
            if sizes[c] == cap_hi:
                continue
            sizes[c] += 1
            deficit = sum(q_lo - sizes[x] for x in range(1, k + 1) if sizes[x] < q_lo)
            if deficit > n - i - 1:
                sizes[c] -= 1
                continue
            add = sum(1 for w in before if col[w] == c)
            mono[c] += add
            if max(mono[1 : k + 1]) - min(mono[1 : k + 1]) <= 1 + remaining_edges:
                col[v] = c
                if dfs(i + 1, max(used, c), edges_done + len(before)):
                    return True
                col[v] = 0
            mono[c] -= add
            sizes[c] -= 1
        return False

    if dfs(0, 0, 0):
        return KColoring(k, {v: col[v] for v in range(1, n + 1)})
    return None


def k_balance_report(g: Graph, coloring: KColoring) -> tuple[tuple, tuple]:
    """(class sizes, per-color monochromatic edge counts) for any k-coloring."""
    coloring.require_total(g)
    k = coloring.k
    sizes = [0] * (k + 1)
    mono = [0] * (k + 1)
    col = coloring.assignment
    for v in range(1, g.n + 1):
        sizes[col[v]] += 1
    for u, v in g.edges():
        if col[u] == col[v]:
            mono[col[u]] += 1
    return tuple(sizes[1:]), tuple(mono[1:])

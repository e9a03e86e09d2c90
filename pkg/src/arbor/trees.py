"""Graph and tree data model: validation, vertex taxonomy, branches,
induced subgraphs, and completion of forests to trees.

Vertices are integers 1..n throughout; adjacency lists are kept sorted so
that every derived object is reproducible byte for byte.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import CapInfeasible, NotAdjacent, NotATree, PreconditionViolated


class VertexClass(enum.Enum):
    LEAF = "leaf"
    PRE_LEAF = "pre-leaf"
    SPECIAL_PRE_LEAF = "special-pre-leaf"
    INTERNAL = "internal"


class Graph:
    """Finite simple graph on vertices 1..n with sorted adjacency lists."""

    __slots__ = ("n", "adj", "edge_count", "_max_deg")

    def __init__(self, n: int, adj: tuple, edge_count: int):
        self.n = n
        self.adj = adj  # adj[0] unused; adj[v] = sorted tuple of neighbors
        self.edge_count = edge_count
        self._max_deg = -1

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int) -> "Graph":
        """Validate simplicity (no loops, no parallel edges, ids in 1..n)."""
        if n < 1:
            raise NotATree("bad-vertex-id", f"n={n}")
        nbr: list[set] = [set() for _ in range(n + 1)]
        count = 0
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise NotATree("bad-vertex-id", f"edge ({u},{v}) outside 1..{n}")
            if u == v:
                raise NotATree("self-loop", f"vertex {u}")
            if v in nbr[u]:
                raise NotATree("duplicate-edge", f"edge ({u},{v})")
            nbr[u].add(v)
            nbr[v].add(u)
            count += 1
        adj = tuple(tuple(sorted(s)) for s in nbr)
        return cls(n, adj, count)

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degree_sequence(self) -> list[int]:
        """Degrees listed by vertex id (index i holds deg of vertex i+1)."""
        return [len(self.adj[v]) for v in range(1, self.n + 1)]

    @property
    def max_degree(self) -> int:
        if self._max_deg < 0:
            self._max_deg = max((len(self.adj[v]) for v in range(1, self.n + 1)), default=0)
        return self._max_deg

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(1, self.n + 1):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = bytearray(self.n + 1)
        stack = [1]
        seen[1] = 1
        found = 1
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    found += 1
                    stack.append(w)
        return found == self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, edges={self.edge_count})"


class Tree(Graph):
    """Connected acyclic graph; invariant edge_count == n - 1."""


def build_graph(edges: Iterable[tuple[int, int]], n: int) -> Graph:
    """Simple graph from an edge list; may be disconnected."""
    return Graph.from_edges(edges, n)


def build_tree(edges: Iterable[tuple[int, int]], n: int) -> Tree:
    """Validated tree; rejects cyclic, disconnected, or non-simple input."""
    g = Graph.from_edges(edges, n)
    if g.edge_count > n - 1:
        raise NotATree("cycle", f"{g.edge_count} edges on {n} vertices")
    if g.edge_count < n - 1 or not g.is_connected():
        raise NotATree("disconnected", f"{g.edge_count} edges on {n} vertices")
    return Tree(g.n, g.adj, g.edge_count)


def as_tree(g: Graph) -> Tree:
    """Re-tag a graph already known to satisfy the tree invariants."""
    if isinstance(g, Tree):
        return g
    return build_tree(g.edges(), g.n)


def classify_vertex(t: Graph, v: int) -> VertexClass:
    """Leaf / pre-leaf / special pre-leaf / internal taxonomy.

    A non-leaf counts as a pre-leaf when at least deg(v)-1 of its neighbors
    are leaves; degree-two pre-leaves are special.  The ``>=`` reading keeps
    the middle vertex of a 3-vertex path inside the pre-leaf class.
    """
    if not (1 <= v <= t.n):
        raise NotATree("bad-vertex-id", f"vertex {v}")
    deg = len(t.adj[v])
    if deg == 1:
        return VertexClass.LEAF
    leaf_nbrs = sum(1 for w in t.adj[v] if len(t.adj[w]) == 1)
    if deg >= 2 and leaf_nbrs >= deg - 1:
        return VertexClass.SPECIAL_PRE_LEAF if deg == 2 else VertexClass.PRE_LEAF
    return VertexClass.INTERNAL


def is_pre_leaf(t: Graph, v: int) -> bool:
    return classify_vertex(t, v) in (VertexClass.PRE_LEAF, VertexClass.SPECIAL_PRE_LEAF)


def pre_leaves(t: Graph) -> list[int]:
    """All pre-leaf vertices (special ones included), ascending."""
    out = []
    for v in range(1, t.n + 1):
        deg = len(t.adj[v])
        if deg < 2:
            continue
        leaf_nbrs = sum(1 for w in t.adj[v] if len(t.adj[w]) == 1)
        if leaf_nbrs >= deg - 1:
            out.append(v)
    return out


def branch(t: Tree, v: int, u: int) -> frozenset:
    """Vertex set of the component of t - v that contains u."""
    if not (1 <= v <= t.n and 1 <= u <= t.n):
        raise NotATree("bad-vertex-id", f"({v},{u})")
    if u not in t.adj[v]:
        raise NotAdjacent(f"{u} is not adjacent to {v}")
    if len(t.adj[v]) < 2:
        raise PreconditionViolated(f"branches are defined at non-leaf vertices; {v} is a leaf")
    seen = {v, u}
    stack = [u]
    while stack:
        x = stack.pop()
        for w in t.adj[x]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    seen.discard(v)
    return frozenset(seen)


def is_path_graph(t: Graph) -> bool:
    """True iff the tree has maximum degree at most two."""
    return all(len(t.adj[v]) <= 2 for v in range(1, t.n + 1))


def path_order(t: Graph) -> list[int]:
    """Vertices of a path-shaped tree in order, starting at the smaller end."""
    if t.n == 1:
        return [1]
    ends = [v for v in range(1, t.n + 1) if len(t.adj[v]) == 1]
    if len(ends) != 2 or not is_path_graph(t):
        raise PreconditionViolated("not a path-shaped tree")
    cur = min(ends)
    order = [cur]
    prev = 0
    while len(order) < t.n:
        nxt = [w for w in t.adj[cur] if w != prev]
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


class InducedSubgraph:
    """Induced subgraph relabeled to 1..m plus the old/new vertex maps."""

    __slots__ = ("graph", "old_to_new", "new_to_old")

    def __init__(self, graph: Graph, old_to_new: dict, new_to_old: tuple):
        self.graph = graph
        self.old_to_new = old_to_new
        self.new_to_old = new_to_old  # new_to_old[new_id] = old_id; index 0 unused


def induced_subtree(t: Graph, removed: Iterable[int]) -> InducedSubgraph:
    """Delete ``removed`` and relabel the rest to 1..m (a forest in general)."""
    removed = set(removed)
    for v in removed:
        if not (1 <= v <= t.n):
            raise NotATree("bad-vertex-id", f"vertex {v}")
    kept = [v for v in range(1, t.n + 1) if v not in removed]
    old_to_new = {v: i + 1 for i, v in enumerate(kept)}
    adj = [()]
    count = 0
    for u in kept:
        row = tuple(old_to_new[w] for w in t.adj[u] if w not in removed)
        count += len(row)
        adj.append(row)  # already sorted: relabeling preserves order
    g = Graph(len(kept), tuple(adj), count // 2)
    return InducedSubgraph(g, old_to_new, tuple([0] + kept))


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by minimum vertex."""
    seen = bytearray(g.n + 1)
    out = []
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = 1
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        out.append(comp)
    return out


def complete_forest_to_tree(f: Graph, degree_cap: int) -> Tree:
    """Join the components of a forest into one tree without exceeding the cap.

    Components are merged in ascending min-vertex order; each new edge joins
    the (degree, id)-minimal attachable vertex of the tree built so far with
    the (degree, id)-minimal attachable vertex of the next component.
    """
    if degree_cap < f.max_degree:
        raise CapInfeasible(f"cap {degree_cap} below forest max degree {f.max_degree}")
    comps = components(f)
    if f.edge_count != f.n - len(comps):
        raise NotATree("cycle", "forest completion needs acyclic input")
    deg = [len(f.adj[v]) for v in range(0, f.n + 1)]
    nbr = [list(f.adj[v]) for v in range(0, f.n + 1)]

    import heapq

    def best(vertices: Sequence[int]) -> int | None:
        cand = None
        for v in vertices:
            if deg[v] < degree_cap and (cand is None or (deg[v], v) < (deg[cand], cand)):
                cand = v
        return cand

    # lazy heap of (degree, id) over the growing tree; degrees only grow, so
    # stale or over-cap entries can be dropped for good
    heap = [(deg[v], v) for v in comps[0]]
    heapq.heapify(heap)
    for comp in comps[1:]:
        a = None
        while heap:
            d, v = heap[0]
            if d != deg[v] or d >= degree_cap:
                heapq.heappop(heap)
                continue
            a = v
            break
        b = best(comp)
        if a is None or b is None:
            raise CapInfeasible(f"no attachment point under cap {degree_cap}")
        nbr[a].append(b)
        nbr[b].append(a)
        deg[a] += 1
        deg[b] += 1
        heapq.heappush(heap, (deg[a], a))
        for v in comp:
            if deg[v] < degree_cap:
                heapq.heappush(heap, (deg[v], v))
    adj = tuple([()] + [tuple(sorted(nbr[v])) for v in range(1, f.n + 1)])
    t = Tree(f.n, adj, f.n - 1)
    t._max_deg = max(deg[1:], default=0)
    return t


# ---------------------------------------------------------------------------
# Text format: first line "n", then "u v" edge lines, or one "P: ..." line
# carrying a Prüfer code.


def parse_tree_text(text: str) -> Tree:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise NotATree("bad-vertex-id", "empty input")
    try:
        n = int(lines[0])
    except ValueError:
        raise NotATree("bad-vertex-id", f"first line must be the vertex count, got {lines[0]!r}")
    body = lines[1:]
    if body and body[0].startswith("P:"):
        from .random_trees import prufer_decode

        entries = [int(x) for x in body[0][2:].split()]
        return prufer_decode(entries, n)
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise NotATree("bad-vertex-id", f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return build_tree(edges, n)


def format_tree_text(t: Graph) -> str:
    lines = [str(t.n)]
    lines.extend(f"{u} {v}" for u, v in t.edges())
    return "\n".join(lines) + "\n"


# Small constructors used all over the test corpus.


def path(n: int) -> Tree:
    return build_tree([(i, i + 1) for i in range(1, n)], n)


def star(n: int) -> Tree:
    """Star on n vertices: center 1 adjacent to n-1 leaves."""
    return build_tree([(1, i) for i in range(2, n + 1)], n)


def double_star(p: int, q: int) -> Tree:
    """Adjacent centers 1 and 2 carrying p and q pendant leaves."""
    edges = [(1, 2)]
    nxt = 3
    for _ in range(p):
        edges.append((1, nxt))
        nxt += 1
    for _ in range(q):
        edges.append((2, nxt))
        nxt += 1
    return build_tree(edges, p + q + 2)


def complete_graph(n: int) -> Graph:
    return build_graph([(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], n)


def bfs_path(t: Graph, a: int, b: int) -> list[int]:
    """Unique path from a to b in a tree, endpoints included."""
    if a == b:
        return [a]
    parent = {a: 0}
    q = deque([a])
    while q:
        u = q.popleft()
        if u == b:
            break
        for w in t.adj[u]:
            if w not in parent:
                parent[w] = u
                q.append(w)
    if b not in parent:
        raise NotAdjacent(f"{a} and {b} are not connected")
    out = [b]
    while out[-1] != a:
        out.append(parent[out[-1]])
    out.reverse()
    return out

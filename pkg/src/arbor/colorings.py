"""Vertex colorings shared by the balance and equitable modules."""

from __future__ import annotations

from .errors import PartialColoring
from .trees import Graph


class KColoring:
    """Total map vertex -> color in 1..k with cached class sizes."""

    __slots__ = ("k", "assignment")

    def __init__(self, k: int, assignment: dict):
        self.k = k
        self.assignment = assignment

    @classmethod
    def from_list(cls, k: int, colors: list) -> "KColoring":
        """Build from a list where colors[v] is the color of vertex v (index 0 ignored)."""
        return cls(k, {v: colors[v] for v in range(1, len(colors))})

    def color(self, v: int) -> int:
        return self.assignment[v]

    @property
    def class_sizes(self) -> tuple:
        sizes = [0] * self.k
        for c in self.assignment.values():
            sizes[c - 1] += 1
        return tuple(sizes)

    def require_total(self, g: Graph) -> None:
        for v in range(1, g.n + 1):
            c = self.assignment.get(v)
            if c is None or not (1 <= c <= self.k):
                raise PartialColoring(f"vertex {v} has no valid color")

    def __eq__(self, other) -> bool:
        if not isinstance(other, KColoring):
            return NotImplemented
        return self.k == other.k and self.assignment == other.assignment

    def __repr__(self) -> str:
        return f"KColoring(k={self.k}, sizes={self.class_sizes})"

"""Digraphs, walks, and the predicates relating congruent walks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from lhom.errors import InputError, ParseError

__all__ = [
    "Digraph",
    "Direction",
    "Walk",
    "has_edge",
    "validate_walk",
    "congruent",
    "reverse_walk",
    "avoids",
    "protects",
    "parse_digraph",
    "format_digraph",
]


class Direction(enum.Enum):
    FORWARD = "F"
    BACKWARD = "B"

    def flip(self) -> "Direction":
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD


F = Direction.FORWARD
B = Direction.BACKWARD


class Digraph:
    """A finite digraph on vertices ``0..n-1``. Loops are allowed.

    Instances are immutable; ``adj[u][v]`` is a precomputed membership table
    used by every product construction in the package.
    """

    __slots__ = ("n", "arcs", "adj", "succ", "pred")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        arc_set = set()
        for u, v in arcs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"arc ({u},{v}) out of range for n={n}")
            arc_set.add((u, v))
        adj = [[False] * n for _ in range(n)]
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(arc_set):
            adj[u][v] = True
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", frozenset(arc_set))
        object.__setattr__(self, "adj", tuple(tuple(row) for row in adj))
        object.__setattr__(self, "succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "pred", tuple(tuple(p) for p in pred))

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.n, self.arcs))

    def __repr__(self):
        return f"Digraph({self.n}, {sorted(self.arcs)})"

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def edge(self, u: int, v: int, direction: Direction) -> bool:
        """Unchecked ``has_edge`` for hot loops."""
        return self.adj[u][v] if direction is F else self.adj[v][u]

    def neighbours(self, u: int, direction: Direction) -> tuple[int, ...]:
        """Vertices ``v`` such that ``uv`` is an edge in ``direction``."""
        return self.succ[u] if direction is F else self.pred[u]


@dataclass(frozen=True)
class Walk:
    start: int
    steps: tuple[tuple[Direction, int], ...] = ()

    @classmethod
    def from_vertices(cls, vertices: Sequence[int], directions: Sequence[Direction]) -> "Walk":
        if len(vertices) != len(directions) + 1:
            raise InputError("a walk needs exactly one more vertex than directions")
        return cls(vertices[0], tuple(zip(directions, vertices[1:])))

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.start,) + tuple(v for _, v in self.steps)

    @property
    def pattern(self) -> tuple[Direction, ...]:
        return tuple(d for d, _ in self.steps)

    @property
    def end(self) -> int:
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def concat(self, other: "Walk") -> "Walk":
        if self.end != other.start:
            raise InputError("walks do not meet")
        return Walk(self.start, self.steps + other.steps)


def _check_vertex(D: Digraph, v: int) -> None:
    if not (0 <= v < D.n):
        raise InputError(f"vertex {v} out of range for n={D.n}")


def has_edge(D: Digraph, u: int, v: int, direction: Direction) -> bool:
    _check_vertex(D, u)
    _check_vertex(D, v)
    return D.edge(u, v, direction)


def validate_walk(D: Digraph, w: Walk) -> bool:
    if not isinstance(w.start, int) or not (0 <= w.start < D.n):
        return False
    cur = w.start
    for step in w.steps:
        try:
            direction, nxt = step
        except (TypeError, ValueError):
            return False
        if not isinstance(direction, Direction) or not isinstance(nxt, int):
            return False
        if not (0 <= nxt < D.n) or not D.edge(cur, nxt, direction):
            return False
        cur = nxt
    return True


def congruent(*walks: Walk) -> bool:
    if not walks:
        return True
    first = walks[0].pattern
    return all(w.pattern == first for w in walks[1:])


def reverse_walk(w: Walk) -> Walk:
    verts = w.vertices
    dirs = w.pattern
    rev_dirs = [d.flip() for d in reversed(dirs)]
    return Walk.from_vertices(list(reversed(verts)), rev_dirs)


def _faithful(D: Digraph, src: Walk, dst: Walk) -> list[int]:
    """Indices ``i`` such that ``src_i dst_{i+1}`` is a faithful edge."""
    sv, dv = src.vertices, dst.vertices
    return [i for i, d in enumerate(src.pattern) if D.edge(sv[i], dv[i + 1], d)]


def avoids(D: Digraph, X: Walk, Y: Walk) -> bool:
    if not congruent(X, Y):
        raise InputError("avoids() needs congruent walks")
    xv, yv = X.vertices, Y.vertices
    return not any(D.edge(xv[i], yv[i + 1], d) for i, d in enumerate(X.pattern))


def protects(D: Digraph, Z: Walk, Y: Walk, X: Walk) -> bool:
    """True iff ``Z`` protects ``Y`` from ``X``.

    Every faithful X->Z index must be at least every faithful Z->Y index, so
    it suffices to compare the first of the former with the last of the latter.
    """
    if not congruent(X, Y, Z):
        raise InputError("protects() needs pairwise congruent walks")
    xz = _faithful(D, X, Z)
    zy = _faithful(D, Z, Y)
    if not xz or not zy:
        return True
    return zy[-1] <= xz[0]


def parse_digraph(text: str) -> Digraph:
    """Parse the ``.dg`` format: a vertex count, then one ``u v`` arc per line."""
    n = None
    arcs: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise ParseError("header must be a single non-negative vertex count", lineno)
            n = nums[0]
            continue
        if len(nums) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = nums
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"arc {u} {v} out of range for n={n}", lineno)
        if (u, v) in arcs:
            raise ParseError(f"duplicate arc {u} {v} (first on line {arcs[(u, v)]})", lineno)
        arcs[(u, v)] = lineno
    if n is None:
        raise ParseError("missing vertex-count header", 0)
    return Digraph(n, arcs)


def format_digraph(D: Digraph) -> str:
    lines = [str(D.n)] + [f"{u} {v}" for u, v in D.sorted_arcs()]
    return "\n".join(lines) + "\n"

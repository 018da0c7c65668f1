"""Reduction from directed st-connectivity to list homomorphism, driven by a
circular N witness: every arc becomes a path shaped like the witness walks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from lhom.detect import CircularNWitness
from lhom.digraph import F, Digraph
from lhom.errors import InputError
from lhom.solver import Instance

# ("vertex", v) for an original vertex, ("path", arc, position) for a path vertex
Provenance = Union[tuple[str, int], tuple[str, tuple[int, int], int]]


@dataclass(frozen=True)
class GadgetOutput:
    instance: Instance
    provenance: tuple[Provenance, ...]


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, u: int) -> int:
        while self.parent[u] != u:
            self.parent[u] = self.parent[self.parent[u]]
            u = self.parent[u]
        return u

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            self.parent[max(ru, rv)] = min(ru, rv)


def build_gadget(H: Digraph, w: CircularNWitness, st_graph: Digraph, s: int, t: int) -> GadgetOutput:
    """Build an instance over ``H`` that is solvable iff ``st_graph`` has no
    directed path from ``s`` to ``t``."""
    bad = w.problems(H)
    if bad:
        raise InputError(f"witness does not validate: {'; '.join(bad)}")
    N = st_graph.n
    if not (0 <= s < N and 0 <= t < N):
        raise InputError("s or t out of range")
    if s == t:
        raise InputError("s and t must differ")

    xs, ys, zs = w.X.vertices, w.Y.vertices, w.Z.vertices
    pattern = w.X.pattern
    length = len(pattern)
    arcs = st_graph.sorted_arcs()

    # raw ids: originals first, then positions 0..length of each path copy
    total = N + len(arcs) * (length + 1)
    raw_lists: list[set[int]] = [{w.x, w.y} for _ in range(N)]
    raw_prov: list[Provenance] = [("vertex", v) for v in range(N)]
    raw_arcs = []
    uf = _UnionFind(total)
    for idx, (u, v) in enumerate(arcs):
        base = N + idx * (length + 1)
        for i in range(length + 1):
            raw_lists.append({xs[i], ys[i], zs[i]})
            raw_prov.append(("path", (u, v), i))
        for i, d in enumerate(pattern):
            p, q = base + i, base + i + 1
            raw_arcs.append((p, q) if d is F else (q, p))
        uf.union(u, base)
        uf.union(v, base + length)
    raw_lists[s] &= {w.x}
    raw_lists[t] &= {w.y}

    roots = sorted({uf.find(r) for r in range(total)})
    new_id = {r: i for i, r in enumerate(roots)}
    lists: list[set[int] | None] = [None] * len(roots)
    for r in range(total):
        i = new_id[uf.find(r)]
        lists[i] = set(raw_lists[r]) if lists[i] is None else lists[i] & raw_lists[r]
    g = Digraph(len(roots), {(new_id[uf.find(p)], new_id[uf.find(q)]) for p, q in raw_arcs})
    # an identified vertex is reported by its smallest raw id, i.e. the original vertex
    provenance = tuple(raw_prov[r] for r in roots)
    return GadgetOutput(Instance(g, lists), provenance)


def has_directed_path(D: Digraph, s: int, t: int) -> bool:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in D.succ[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False

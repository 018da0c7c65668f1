"""Detectors for circular N's, DATs, bicycles and independent edges, and the
four-way complexity classification built from them."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from lhom.digraph import B, F, Digraph, Direction, Walk, avoids, congruent, protects, validate_walk
from lhom.errors import InternalError
from lhom.pairs import PairStructure

Triple = tuple[int, int, int]


class Colour(enum.Enum):
    GREEN = "green"  # neither ab' nor bc' present
    BLUE = "blue"  # only ab' missing
    BROWN = "brown"  # only bc' missing
    RED = "red"  # both present: the single step where protection may switch


class Verdict(str, enum.Enum):
    NP_COMPLETE = "NP-complete"
    P_NL_HARD = "P∩NL-hard"
    L_L_HARD = "L∩L-hard"
    FO = "FO-definable"


@dataclass(frozen=True)
class ColouredTripleDigraph:
    """Triples ``(a, b, c)`` track the walks X, Z, Y in that order."""

    n: int
    arcs: tuple[tuple[Triple, Triple, Direction, Colour], ...]

    def out_arcs(self) -> dict[Triple, list[tuple[Triple, Direction, Colour]]]:
        out: dict[Triple, list] = {}
        for s, t, d, c in self.arcs:
            out.setdefault(s, []).append((t, d, c))
        return out


@dataclass(frozen=True)
class CircularNWitness:
    x: int
    y: int
    X: Walk
    Y: Walk
    Z: Walk

    def problems(self, H: Digraph) -> list[str]:
        out = []
        for name, w in (("X", self.X), ("Y", self.Y), ("Z", self.Z)):
            if not validate_walk(H, w):
                out.append(f"{name} is not a walk in H")
        if not congruent(self.X, self.Y, self.Z):
            return out + ["walks are not congruent"]
        if self.x == self.y:
            out.append("x == y")
        if (self.X.start, self.X.end) != (self.x, self.x):
            out.append("X is not closed at x")
        if (self.Y.start, self.Y.end) != (self.y, self.y):
            out.append("Y is not closed at y")
        if (self.Z.start, self.Z.end) != (self.y, self.x):
            out.append("Z does not run from y to x")
        if not out:
            if not avoids(H, self.X, self.Y):
                out.append("X does not avoid Y")
            if not protects(H, self.Z, self.Y, self.X):
                out.append("Z does not protect Y from X")
        return out


@dataclass(frozen=True)
class DATWitness:
    triple: tuple[int, int, int]
    s: dict[int, int]
    b: dict[int, int]


@dataclass(frozen=True)
class BicycleWitness:
    X: Walk
    Y: Walk


@dataclass(frozen=True)
class IndependentEdges:
    first: tuple[int, int]
    second: tuple[int, int]
    direction: Direction = F


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    circular_n: Optional[CircularNWitness] = None
    dat: Optional[DATWitness] = None
    bicycle: Optional[BicycleWitness] = None
    independent_edges: Optional[IndependentEdges] = None
    hm_chain_length: Optional[int] = None

    @property
    def has_dat(self) -> bool:
        return self.dat is not None

    @property
    def has_circular_n(self) -> bool:
        return self.circular_n is not None

    @property
    def has_bicycle(self) -> bool:
        return self.bicycle is not None

    @property
    def has_independent_edges(self) -> bool:
        return self.independent_edges is not None


# -- coloured triple digraph / circular N ------------------------------------

def _coloured_arc(H: Digraph, s: Triple, t: Triple, d: Direction) -> Optional[Colour]:
    a, b, c = s
    a2, b2, c2 = t
    e = H.edge
    if not (e(a, a2, d) and e(b, b2, d) and e(c, c2, d)) or e(a, c2, d):
        return None
    ab, bc = e(a, b2, d), e(b, c2, d)
    if not ab and not bc:
        return Colour.GREEN
    if not ab:
        return Colour.BLUE
    if not bc:
        return Colour.BROWN
    return Colour.RED


def _triple_moves(H: Digraph, s: Triple, d: Direction):
    a, b, c = s
    nb = H.neighbours
    for a2 in nb(a, d):
        for b2 in nb(b, d):
            for c2 in nb(c, d):
                yield (a2, b2, c2)


def build_coloured_triple(H: Digraph) -> ColouredTripleDigraph:
    n = H.n
    arcs = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                s = (a, b, c)
                for d in (F, B):
                    for t in _triple_moves(H, s, d):
                        colour = _coloured_arc(H, s, t, d)
                        if colour is not None:
                            arcs.append((s, t, d, colour))
    return ColouredTripleDigraph(n, tuple(arcs))


def _bfs(start: Triple, adjacency: dict, allowed) -> dict:
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v, d, colour in adjacency.get(u, ()):
            if colour in allowed and v not in parent:
                parent[v] = (u, d)
                queue.append(v)
    return parent


def find_circular_n(H: Digraph, triples: Optional[ColouredTripleDigraph] = None) -> Optional[CircularNWitness]:
    """Search ``H++`` for a walk from ``(x,y,y)`` to ``(x,x,y)`` on which no
    brown arc precedes a blue one and at most one red arc sits between them.

    Green and blue arcs are followed from the start, green and brown arcs
    backwards from the end; the two halves meet at a common triple or are
    joined by one red arc.
    """
    T = triples if triples is not None else build_coloured_triple(H)
    forward: dict = {}
    backward: dict = {}
    red: list[tuple[Triple, Triple, Direction]] = []
    for s, t, d, c in T.arcs:
        forward.setdefault(s, []).append((t, d, c))
        backward.setdefault(t, []).append((s, d, c))
        if c is Colour.RED:
            red.append((s, t, d))
    no_brown = {Colour.GREEN, Colour.BLUE}
    no_blue = {Colour.GREEN, Colour.BROWN}
    n = H.n
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            source, target = (x, y, y), (x, x, y)
            head = _bfs(source, forward, no_brown)
            tail = _bfs(target, backward, no_blue)
            common = head.keys() & tail.keys()
            if common:
                meet = min(common)
                bridge = None
            else:
                links = sorted((s, t, d.value) for s, t, d in red if s in head and t in tail)
                if not links:
                    continue
                meet, after, dv = links[0]
                bridge = (Direction(dv), after)
            steps: list[tuple[Direction, Triple]] = []
            cur = meet
            while head[cur] is not None:
                prev, d = head[cur]
                steps.append((d, cur))
                cur = prev
            steps.reverse()
            cur = meet
            if bridge is not None:
                steps.append(bridge)
                cur = bridge[1]
            while tail[cur] is not None:
                nxt, d = tail[cur]
                steps.append((d, nxt))
                cur = nxt
            X = Walk(x, tuple((d, t[0]) for d, t in steps))
            Z = Walk(y, tuple((d, t[1]) for d, t in steps))
            Y = Walk(y, tuple((d, t[2]) for d, t in steps))
            witness = CircularNWitness(x, y, X, Y, Z)
            bad = witness.problems(H)
            if bad:
                raise InternalError(f"decoded circular N fails validation: {bad}")
            return witness
    return None


# -- first-order obstructions --------------------------------------------------

def has_independent_edges(H: Digraph) -> Optional[IndependentEdges]:
    # A backward independent pair is the forward pair on the same two arcs
    # with roles swapped, so scanning forward arcs is exhaustive.
    arcs = H.sorted_arcs()
    adj = H.adj
    for a, b in arcs:
        for c, d in arcs:
            if not adj[a][d] and not adj[c][b]:
                return IndependentEdges((a, b), (c, d), F)
    return None


def find_bicycle(H: Digraph) -> Optional[BicycleWitness]:
    n, adj = H.n, H.adj
    g = nx.DiGraph()
    nodes = [(x, y) for x in range(n) for y in range(n) if x != y]
    g.add_nodes_from(nodes)
    for x, y in nodes:
        for x2 in H.succ[x]:
            if not adj[y][x2]:
                continue
            for y2 in H.succ[y]:
                if x2 != y2 and not adj[x][y2]:
                    g.add_edge((x, y), (x2, y2))
    for comp in sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0]):
        start = comp[0]
        if len(comp) == 1 and not g.has_edge(start, start):
            continue
        cycle = nx.find_cycle(g.subgraph(comp), source=start)
        pairs = [u for u, _ in cycle] + [cycle[0][0]]
        X = Walk(pairs[0][0], tuple((F, p[0]) for p in pairs[1:]))
        Y = Walk(pairs[0][1], tuple((F, p[1]) for p in pairs[1:]))
        xv, yv = X.vertices, Y.vertices
        ok = (
            validate_walk(H, X) and validate_walk(H, Y)
            and X.end == X.start and Y.end == Y.start
            and avoids(H, X, Y)
            and all(adj[yv[i]][xv[i + 1]] for i in range(len(X)))
        )
        if not ok:
            raise InternalError("decoded bicycle fails validation")
        return BicycleWitness(X, Y)
    return None


# -- DAT ---------------------------------------------------------------------------

def _double_avoid_reach(H: Digraph, start: Triple) -> set[Triple]:
    """Triples reachable from ``start`` along steps where the first walk avoids
    both of the others."""
    seen = {start}
    queue = deque([start])
    e = H.edge
    while queue:
        s = queue.popleft()
        a = s[0]
        for d in (F, B):
            for t in _triple_moves(H, s, d):
                if t in seen or e(a, t[1], d) or e(a, t[2], d):
                    continue
                seen.add(t)
                queue.append(t)
    return seen


def find_dat(H: Digraph, P: Optional[PairStructure] = None) -> Optional[DATWitness]:
    n = H.n
    if n < 3:
        return None
    P = P if P is not None else PairStructure(H)
    # endpoint[(x, y, z)] = some invertible (s, b) with (s, b, b) reachable
    endpoint: dict[Triple, Optional[tuple[int, int]]] = {}

    def reach_endpoint(x: int, y: int, z: int):
        key = (x, min(y, z), max(y, z))
        if key not in endpoint:
            found = None
            for p, q, r in sorted(_double_avoid_reach(H, key)):
                if q == r and p != q and P.is_invertible(p, q):
                    found = (p, q)
                    break
            endpoint[key] = found
        return endpoint[key]

    for u in range(n):
        for v in range(u + 1, n):
            for w in range(v + 1, n):
                s, b = {}, {}
                for x, y, z in ((u, v, w), (v, u, w), (w, u, v)):
                    hit = reach_endpoint(x, y, z)
                    if hit is None:
                        break
                    s[x], b[x] = hit
                else:
                    return DATWitness((u, v, w), s, b)
    return None


# -- classification ------------------------------------------------------------------

def classify(H: Digraph, P: Optional[PairStructure] = None) -> Classification:
    P = P if P is not None else PairStructure(H)
    cn = find_circular_n(H)
    dat = find_dat(H, P)
    bicycle = find_bicycle(H)
    indep = has_independent_edges(H)
    if dat is not None:
        verdict = Verdict.NP_COMPLETE
    elif cn is not None:
        verdict = Verdict.P_NL_HARD
    elif bicycle is not None or indep is not None:
        verdict = Verdict.L_L_HARD
    else:
        verdict = Verdict.FO
    length = None if cn is not None else max(1, P.max_mu)
    return Classification(verdict, cn, dat, bicycle, indep, length)

"""The pair digraph of a template: arcs, strong components, processing order, mu."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import networkx as nx

from lhom.digraph import Digraph
from lhom.errors import InputError, InternalError

Pair = tuple[int, int]


class PairStructure:
    """Pair digraph ``H+`` on ordered pairs of distinct template vertices.

    There is an arc ``(x,y) -> (x',y')`` when ``xx'`` and ``yy'`` are edges in
    one direction and ``xy'`` is not an edge in that direction. An arc is
    *double* when the reverse arc ``(x',y') -> (x,y)`` is also present.

    Pairs are stored under the integer id ``x*n + y``.
    """

    def __init__(self, H: Digraph):
        n = H.n
        adj = H.adj
        self.H = H
        self.n = n
        self.pairs: list[Pair] = [(x, y) for x in range(n) for y in range(n) if x != y]

        succ: dict[Pair, list[Pair]] = {p: [] for p in self.pairs}
        for x, y in self.pairs:
            out = succ[(x, y)]
            for x2, y2 in self.pairs:
                fwd = adj[x][x2] and adj[y][y2] and not adj[x][y2]
                bwd = adj[x2][x] and adj[y2][y] and not adj[y2][x]
                if fwd or bwd:
                    out.append((x2, y2))
        self.succ = succ
        self.arcs: dict[tuple[Pair, Pair], bool] = {}
        for p, outs in succ.items():
            for q in outs:
                self.arcs[(p, q)] = False
        for p, q in self.arcs:
            self.arcs[(p, q)] = (q, p) in self.arcs

        for (x, y), (x2, y2) in self.arcs:
            if ((y2, x2), (y, x)) not in self.arcs:
                raise InternalError(f"skew property fails on ({x},{y})->({x2},{y2})")

        g = nx.DiGraph()
        g.add_nodes_from(self.pairs)
        g.add_edges_from(self.arcs)
        components = [sorted(c) for c in nx.strongly_connected_components(g)]
        condensed = nx.condensation(g, scc=[set(c) for c in components])
        # condensation node i corresponds to components[i]
        topo = list(nx.lexicographical_topological_sort(condensed, key=lambda c: components[c][0]))

        self.components: list[list[Pair]] = [components[c] for c in topo]
        self.scc_id: dict[Pair, int] = {}
        for idx, comp in enumerate(self.components):
            for p in comp:
                self.scc_id[p] = idx
        self.order: list[Pair] = [p for comp in self.components for p in comp]
        self.position: dict[Pair, int] = {p: i + 1 for i, p in enumerate(self.order)}

        preds: list[set[int]] = [set() for _ in self.components]
        for p, q in self.arcs:
            cp, cq = self.scc_id[p], self.scc_id[q]
            if cp != cq:
                preds[cq].add(cp)
        self.component_mu: list[int] = []
        for idx in range(len(self.components)):
            best = max((self.component_mu[c] for c in preds[idx]), default=0)
            self.component_mu.append(best + 1)

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def max_mu(self) -> int:
        return max(self.component_mu, default=0)

    def is_double(self, p: Pair, q: Pair) -> bool:
        return self.arcs[(p, q)]

    def single_arcs(self) -> list[tuple[Pair, Pair]]:
        return [a for a, double in self.arcs.items() if not double]

    def mu(self, x: int, y: int) -> int:
        if x == y:
            return 0
        return self.component_mu[self.scc_id[(x, y)]]

    def mu_table(self) -> list[list[int]]:
        return [[self.mu(x, y) for y in range(self.n)] for x in range(self.n)]

    def is_invertible(self, x: int, y: int) -> bool:
        if x == y:
            raise InputError("invertibility needs two distinct vertices")
        return self.scc_id[(x, y)] == self.scc_id[(y, x)]

    def pair_at(self, k: int) -> Pair:
        """The pair ``p_k`` (1-based)."""
        return self.order[k - 1]

    def is_k_good(self, lists: Iterable[Iterable[int]], k: int) -> bool:
        for lst in lists:
            members = sorted(set(lst))
            for i, u in enumerate(members):
                for v in members[i + 1:]:
                    if self.position[(u, v)] > k or self.position[(v, u)] > k:
                        return False
        return True

    def invariant_violations(self, circular_n_free: bool) -> list[str]:
        """Check the structural facts that hold for every template, plus the
        double-arc and mu-monotonicity facts that need a circular-N-free one."""
        out = []
        for (x, y), (x2, y2) in self.arcs:
            if ((y2, x2), (y, x)) not in self.arcs:
                out.append(f"skew: ({x},{y})->({x2},{y2})")
        for (p, q) in self.arcs:
            if self.scc_id[p] > self.scc_id[q]:
                out.append(f"order: arc {p}->{q} goes backwards")
            if self.mu(*p) > self.mu(*q):
                out.append(f"mu not monotone on {p}->{q}")
        for p in self.pairs:
            rev = (p[1], p[0])
            rev_comp = {(b, a) for a, b in self.components[self.scc_id[p]]}
            if set(self.components[self.scc_id[rev]]) != rev_comp:
                out.append(f"reverse component of {p} is not a component")
        if circular_n_free:
            for (p, q), double in self.arcs.items():
                same = self.scc_id[p] == self.scc_id[q]
                if same and not double:
                    out.append(f"single arc {p}->{q} inside a strong component")
                if not double:
                    if self.position[p] >= self.position[q]:
                        out.append(f"single arc {p}->{q} against the processing order")
                    if self.mu(*p) >= self.mu(*q):
                        out.append(f"single arc {p}->{q} does not increase mu")
        return out

    def summary(self) -> dict:
        return {
            "m": self.m,
            "components": len(self.components),
            "k": self.max_mu,
            "order": [list(p) for p in self.order],
        }


def build_pair_structure(H: Digraph) -> PairStructure:
    return PairStructure(H)


def mu(P: PairStructure, x: int, y: int) -> int:
    return P.mu(x, y)


def processing_order(P: PairStructure) -> list[Pair]:
    return list(P.order)


def is_invertible(P: PairStructure, x: int, y: int) -> bool:
    return P.is_invertible(x, y)


def is_k_good(P: PairStructure, lists: Sequence[Iterable[int]] | Mapping[int, Iterable[int]], k: int) -> bool:
    values = lists.values() if isinstance(lists, Mapping) else lists
    return P.is_k_good(values, k)

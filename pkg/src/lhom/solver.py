"""List-homomorphism solving: a backtracking oracle and the transducer chain.

The chain algorithm removes, for each pair ``p_k = (a, b)`` of the processing
order from last to first, one of ``a`` or ``b`` from every list holding both,
so that satisfiability is preserved. Deciding which one to remove needs the
ab-test, which recursively solves a sub-instance with strictly shorter lists.
Connectivity questions in the triple digraph use plain graph search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from lhom.detect import find_circular_n
from lhom.digraph import Digraph
from lhom.errors import InputError, InternalError, PreconditionError
from lhom.pairs import PairStructure

log = logging.getLogger(__name__)

Homomorphism = tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    g: Digraph
    lists: tuple[frozenset[int], ...]

    def __init__(self, g: Digraph, lists: Sequence[Iterable[int]]):
        if len(lists) != g.n:
            raise InputError(f"expected {g.n} lists, got {len(lists)}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "lists", tuple(frozenset(int(v) for v in lst) for lst in lists))

    def check_against(self, H: Digraph) -> None:
        for y, lst in enumerate(self.lists):
            for v in lst:
                if not (0 <= v < H.n):
                    raise InputError(f"list of vertex {y} mentions {v}, outside the template")

    def key(self):
        return (self.g.n, self.g.arcs, self.lists)


def is_homomorphism(H: Digraph, inst: Instance, f: Sequence[int]) -> bool:
    if len(f) != inst.g.n:
        return False
    if any(f[y] not in inst.lists[y] for y in range(inst.g.n)):
        return False
    return all(H.adj[f[u]][f[v]] for u, v in inst.g.arcs)


# -- brute force --------------------------------------------------------------------

def _search(H: Digraph, inst: Instance) -> Iterator[Homomorphism]:
    """All list homomorphisms in lexicographic order (backtracking with
    forward checking)."""
    g = inst.g
    n = g.n
    adj = H.adj
    loops = [g.adj[v][v] for v in range(n)]
    later_out = [[w for w in g.succ[v] if w > v] for v in range(n)]
    later_in = [[w for w in g.pred[v] if w > v] for v in range(n)]
    domains = [sorted(lst) for lst in inst.lists]
    assignment = [0] * n

    def rec(v: int, doms: list[list[int]]):
        if v == n:
            yield tuple(assignment)
            return
        for val in doms[v]:
            if loops[v] and not adj[val][val]:
                continue
            new = doms
            ok = True
            touched = {}
            for w in later_out[v]:
                touched[w] = [c for c in touched.get(w, new[w]) if adj[val][c]]
            for w in later_in[v]:
                touched[w] = [c for c in touched.get(w, new[w]) if adj[c][val]]
            for w, dom in touched.items():
                if not dom:
                    ok = False
                    break
            if not ok:
                continue
            if touched:
                new = list(doms)
                for w, dom in touched.items():
                    new[w] = dom
            assignment[v] = val
            yield from rec(v + 1, new)

    yield from rec(0, domains)


def oracle_solve(H: Digraph, inst: Instance) -> Optional[Homomorphism]:
    """Lexicographically first list homomorphism, or ``None``."""
    return next(_search(H, inst), None)


def oracle_all(H: Digraph, inst: Instance) -> Iterator[Homomorphism]:
    return _search(H, inst)


# -- triple digraph ------------------------------------------------------------------

class TripleDigraph:
    """Triples ``(y, c, d)`` with ``c != d`` in ``L(y)``; arcs follow an arc of
    G with ``cc'`` and ``dd'`` arcs of H and ``cd'``, ``dc'`` non-arcs."""

    def __init__(self, H: Digraph, inst: Instance):
        adj = H.adj
        self.vertices: list[tuple[int, int, int]] = [
            (y, c, d)
            for y, lst in enumerate(inst.lists)
            for c in sorted(lst)
            for d in sorted(lst)
            if c != d
        ]
        self.index = {t: i for i, t in enumerate(self.vertices)}
        arcs = []
        pairs_of = [[(c, d) for c in sorted(lst) for d in sorted(lst) if c != d] for lst in inst.lists]
        for y, y2 in inst.g.sorted_arcs():
            for c, d in pairs_of[y]:
                for c2, d2 in pairs_of[y2]:
                    if adj[c][c2] and adj[d][d2] and not adj[c][d2] and not adj[d][c2]:
                        arcs.append((self.index[(y, c, d)], self.index[(y2, c2, d2)]))
        self.arcs = arcs
        nbrs: list[list[int]] = [[] for _ in self.vertices]
        for s, t in arcs:
            nbrs[s].append(t)
            nbrs[t].append(s)
        self.undirected = nbrs
        self._component: Optional[list[int]] = None

    @property
    def component(self) -> list[int]:
        """Weak component label per triple index."""
        if self._component is None:
            label = [-1] * len(self.vertices)
            nxt = 0
            for s in range(len(self.vertices)):
                if label[s] >= 0:
                    continue
                label[s] = nxt
                stack = [s]
                while stack:
                    u = stack.pop()
                    for v in self.undirected[u]:
                        if label[v] < 0:
                            label[v] = nxt
                            stack.append(v)
                nxt += 1
            self._component = label
        return self._component

    def comp(self, y: int, c: int, d: int) -> int:
        return self.component[self.index[(y, c, d)]]

    def members(self, label: int) -> list[tuple[int, int, int]]:
        comp = self.component
        return [t for i, t in enumerate(self.vertices) if comp[i] == label]


def build_triple_digraph(H: Digraph, inst: Instance) -> TripleDigraph:
    return TripleDigraph(H, inst)


# -- the chain ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransducerEvent:
    k: int
    a: int
    b: int
    depth: int
    before: Instance
    after: Instance
    relevant: tuple[int, ...]


@dataclass
class _Context:
    H: Digraph
    P: PairStructure
    observer: Optional[Callable[[TransducerEvent], None]] = None
    memo: dict = field(default_factory=dict)
    memoize: bool = True
    stats: dict = field(default_factory=lambda: {"transducers": 0, "ab_tests": 0, "recursive_solves": 0})


def _context(H, P, ctx) -> _Context:
    if ctx is not None:
        return ctx
    return _Context(H, P if P is not None else PairStructure(H))


def _max_list(inst: Instance) -> int:
    return max((len(l) for l in inst.lists), default=0)


def ab_test(H: Digraph, P: PairStructure, inst: Instance, x: int, a: int, b: int,
            tr: Optional[TripleDigraph] = None, ctx: Optional[_Context] = None, depth: int = 0) -> bool:
    """Decide whether the sub-instance carved out by the weak component of
    ``(x, a, b)`` has a list homomorphism sending ``x`` to ``a``."""
    lst = inst.lists[x]
    if a == b or a not in lst or b not in lst:
        raise InputError(f"ab-test needs distinct {a}, {b} in the list of {x}")
    ctx = _context(H, P, ctx)
    ctx.stats["ab_tests"] += 1
    sub = ab_subinstance(H, inst, x, a, b, tr)
    return _solve_rec(ctx, sub.instance, depth + 1, _max_list(inst))


@dataclass(frozen=True)
class SubInstance:
    instance: Instance
    vertices: tuple[int, ...]  # sub-instance vertex i is original vertex vertices[i]


def ab_subinstance(H: Digraph, inst: Instance, x: int, a: int, b: int,
                   tr: Optional[TripleDigraph] = None) -> SubInstance:
    tr = tr if tr is not None else TripleDigraph(H, inst)
    g = inst.g
    label = tr.comp(x, a, b)
    members = tr.members(label)
    verts = sorted({y for y, _, _ in members})
    inside = set(verts)
    # induced on the component's G-vertices: gluing a sub-solution to an outside
    # solution needs every arc between two inside vertices to be respected
    sub_arcs = [(u, v) for u, v in g.sorted_arcs() if u in inside and v in inside]
    firsts: dict[int, set[int]] = {}
    seconds: dict[int, set[int]] = {}
    for y, c, d in members:
        firsts.setdefault(y, set()).add(c)
        seconds.setdefault(y, set()).add(d)
    adj = H.adj

    def fits_outside(y: int, c: int) -> bool:
        # every neighbour outside the sub-instance keeps a compatible value
        return all(any(adj[t][c] for t in inst.lists[z]) for z in g.pred[y] if z not in inside) and \
            all(any(adj[c][t] for t in inst.lists[z]) for z in g.succ[y] if z not in inside)

    new_lists = {}
    for y in verts:
        if y == x:
            candidates = {a}
        else:
            candidates = firsts.get(y, set()) - seconds.get(y, set())
        new_lists[y] = {c for c in candidates if fits_outside(y, c)}
    for y in verts:
        if len(new_lists[y]) > len(inst.lists[y]) - 1:
            raise InternalError(f"sub-instance list of {y} did not shrink")
    pos = {y: i for i, y in enumerate(verts)}
    sub_g = Digraph(len(verts), [(pos[u], pos[v]) for u, v in sub_arcs])
    return SubInstance(Instance(sub_g, [new_lists[y] for y in verts]), tuple(verts))


def apply_transducer(H: Digraph, P: PairStructure, inst: Instance, k: int,
                     ctx: Optional[_Context] = None, depth: int = 0) -> Instance:
    """Run the transducer for ``p_k = (a, b)`` on k-good lists."""
    ctx = _context(H, P, ctx)
    if not P.is_k_good(inst.lists, k):
        raise InputError(f"lists are not {k}-good")
    a, b = P.pair_at(k)
    relevant = [x for x, lst in enumerate(inst.lists) if a in lst and b in lst]
    if not relevant:
        return inst
    ctx.stats["transducers"] += 1
    tr = TripleDigraph(H, inst)
    new_lists = [set(lst) for lst in inst.lists]

    def ca_labels(y: int) -> set[int]:
        return {tr.comp(y, c, a) for c in inst.lists[y] if c != a}

    successful: list[int] = []  # component labels of (x_j, a, b) for successful representatives
    for i, x in enumerate(relevant):
        if ca_labels(x) & set(successful):
            continue  # already in an earlier group
        if ab_test(H, P, inst, x, a, b, tr, ctx, depth):
            new_lists[x].discard(b)
            own = tr.comp(x, a, b)
            earlier = set(successful)
            for y in relevant[i + 1:]:
                labels = ca_labels(y)
                if own in labels and not labels & earlier:
                    new_lists[y].discard(a)
            successful.append(own)
        else:
            new_lists[x].discard(a)

    out = Instance(inst.g, new_lists)
    for x in relevant:
        if len(out.lists[x]) != len(inst.lists[x]) - 1:
            raise InternalError(f"transducer ({a},{b}) removed the wrong number of values at {x}")
    if not P.is_k_good(out.lists, k - 1):
        raise InternalError(f"transducer output is not {k - 1}-good")
    if ctx.observer is not None:
        ctx.observer(TransducerEvent(k, a, b, depth, inst, out, tuple(relevant)))
    return out


def _final_map(H: Digraph, inst: Instance) -> Optional[Homomorphism]:
    """Accept iff the singleton lists form a list homomorphism."""
    if any(len(l) == 0 for l in inst.lists):
        return None
    if any(len(l) > 1 for l in inst.lists):
        raise InternalError("lists are not singletons after the chain")
    f = tuple(next(iter(l)) for l in inst.lists)
    adj = H.adj
    if all(adj[f[u]][f[v]] for u, v in inst.g.arcs):
        return f
    return None


def _run_chain(ctx: _Context, inst: Instance, depth: int) -> Optional[Homomorphism]:
    if any(len(l) == 0 for l in inst.lists):
        return None
    for k in range(ctx.P.m, 0, -1):
        inst = apply_transducer(ctx.H, ctx.P, inst, k, ctx, depth)
    return _final_map(ctx.H, inst)


def _solve_rec(ctx: _Context, inst: Instance, depth: int, parent_max: int) -> bool:
    if depth > ctx.H.n:
        raise InternalError(f"recursion depth {depth} exceeds template size {ctx.H.n}")
    if _max_list(inst) >= parent_max:
        raise InternalError("recursive call without shorter lists")
    key = inst.key()
    if ctx.memoize and key in ctx.memo:
        return ctx.memo[key]
    ctx.stats["recursive_solves"] += 1
    result = _run_chain(ctx, inst, depth) is not None
    if ctx.memoize:
        ctx.memo[key] = result
    return result


def solve_rec(H: Digraph, P: PairStructure, inst: Instance) -> bool:
    ctx = _Context(H, P)
    return _run_chain(ctx, inst, 0) is not None


def solve(H: Digraph, inst: Instance, P: Optional[PairStructure] = None, *, force: bool = False,
          observer: Optional[Callable[[TransducerEvent], None]] = None,
          memoize: bool = True, stats: Optional[dict] = None) -> Optional[Homomorphism]:
    """Decide the instance with the transducer chain and return a witness map.

    Refuses templates with a circular N unless ``force`` is given; on such
    templates the answer carries no guarantee.
    """
    inst.check_against(H)
    if not force and find_circular_n(H) is not None:
        raise PreconditionError("template has a circular N; use the oracle instead (--oracle) or --force")
    ctx = _Context(H, P if P is not None else PairStructure(H), observer, memoize=memoize)
    f = _run_chain(ctx, inst, 0)
    if stats is not None:
        stats.update(ctx.stats)
    if f is not None and not is_homomorphism(H, inst, f):
        raise InternalError("chain accepted a map that is not a list homomorphism")
    return f

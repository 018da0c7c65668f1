"""Exhaustive and seeded-random consistency suites.

Each suite returns a :class:`SuiteReport`; ``run_selftest`` bundles them.
Reports contain only counts and violation strings (sorted), so two runs with
the same arguments render byte-identical output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from lhom import fixtures
from lhom.detect import CircularNWitness, find_bicycle, find_circular_n, find_dat, has_independent_edges
from lhom.digraph import B, F, Digraph
from lhom.gadget import build_gadget, has_directed_path
from lhom.hmchain import TernaryOpTable, build_hm_chain, verify_hm_identities, verify_polymorphism
from lhom.pairs import PairStructure
from lhom.solver import (
    Instance,
    TransducerEvent,
    TripleDigraph,
    is_homomorphism,
    oracle_solve,
    solve,
)

ChainHook = Callable[[Digraph, list[TernaryOpTable]], list[TernaryOpTable]]

DENSITIES = (0.2, 0.5)


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {len(self.violations)} violations"

    def to_json(self) -> dict:
        return {"name": self.name, "cases": self.cases, "ok": self.ok, "violations": sorted(self.violations)}


# -- generators --------------------------------------------------------------------

def all_digraphs(n: int) -> Iterator[Digraph]:
    cells = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << len(cells)):
        yield Digraph(n, [c for i, c in enumerate(cells) if mask >> i & 1])


def random_digraph(rng: random.Random, n: int, density: Optional[float] = None) -> Digraph:
    p = rng.choice(DENSITIES) if density is None else density
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if rng.random() < p])


def random_circular_n_free(rng: random.Random, min_n: int = 2, max_n: int = 5) -> Digraph:
    while True:
        H = random_digraph(rng, rng.randint(min_n, max_n))
        if find_circular_n(H) is None:
            return H


def random_instance(rng: random.Random, H: Digraph, max_g: int = 8) -> Instance:
    """Half the time plant a homomorphism (arcs only where its image is an
    arc, lists containing its value); otherwise draw arcs and lists freely."""
    n = rng.randint(1, max_g)
    p = rng.choice(DENSITIES)
    if rng.random() < 0.5:
        h = [rng.randrange(H.n) for _ in range(n)]
        arcs = [(u, v) for u in range(n) for v in range(n) if rng.random() < p and H.adj[h[u]][h[v]]]
        lists = [{h[v]} | {c for c in range(H.n) if rng.random() < 0.6} for v in range(n)]
    else:
        arcs = [(u, v) for u in range(n) for v in range(n) if rng.random() < p]
        lists = [{c for c in range(H.n) if rng.random() < 0.7} or {rng.randrange(H.n)} for _ in range(n)]
    return Instance(Digraph(n, arcs), lists)


def random_st_graph(rng: random.Random, max_vertices: int = 8, max_arcs: int = 14) -> tuple[Digraph, int, int]:
    n = rng.randint(2, max_vertices)
    p = rng.choice(DENSITIES)
    arcs = [(u, v) for u in range(n) for v in range(n) if rng.random() < p]
    if len(arcs) > max_arcs:
        arcs = rng.sample(arcs, max_arcs)
    s, t = rng.sample(range(n), 2)
    return Digraph(n, arcs), s, t


def label(H: Digraph) -> str:
    return f"H(n={H.n}, arcs={H.sorted_arcs()})"


# -- suites ------------------------------------------------------------------------

def _star_violations(H: Digraph, P: PairStructure) -> list[str]:
    """Exhaustive check that N-shaped steps move strictly forward in the component order."""
    out = []
    for ai, bi in P.pairs:
        for aj, bj in P.pairs:
            for d in (F, B):
                e = H.edge
                if e(ai, aj, d) and e(bi, bj, d) and e(bi, aj, d) and not e(ai, bj, d):
                    if not P.scc_id[(ai, bi)] < P.scc_id[(aj, bj)]:
                        out.append(f"(*) fails for ({ai},{bi}) -> ({aj},{bj})")
    return out


def _same_mu_reach_violations(P: PairStructure) -> list[str]:
    out = []
    for p in P.pairs:
        seen = {p}
        stack = [p]
        while stack:
            u = stack.pop()
            for v in P.succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        for q in seen:
            if P.mu(*p) == P.mu(*q) and P.scc_id[p] != P.scc_id[q]:
                out.append(f"equal mu and reachable but different components: {p} {q}")
    return out


def dichotomy_suites(digraphs: Iterable[Digraph], chain_hook: Optional[ChainHook] = None
                     ) -> tuple[SuiteReport, SuiteReport, SuiteReport]:
    """Compare circular-N absence with chain verification, collecting chain-shape
    and pair-digraph violations on the side."""
    equiv = SuiteReport("dichotomy equivalence")
    shape = SuiteReport("chain length and identity regions")
    pairs = SuiteReport("pair digraph invariants")
    for H in digraphs:
        P = PairStructure(H)
        cn = find_circular_n(H)
        chain = build_hm_chain(H, P, force=True)
        if chain_hook is not None:
            chain = chain_hook(H, chain)
        ids = verify_hm_identities(chain)
        poly = [(i + 1, v) for i, f in enumerate(chain) for v in verify_polymorphism(H, f, limit=1)]
        valid = not ids and not poly
        equiv.cases += 1
        if (cn is None) != valid:
            if cn is None:
                detail = str(ids[0]) if ids else f"f_{poly[0][0]} not a polymorphism on arcs {poly[0][1]}"
                equiv.violations.append(f"{label(H)}: no circular N but chain fails: {detail}")
            else:
                equiv.violations.append(f"{label(H)}: circular N present but forced chain verifies")
        for v in ids if cn is None else ():
            equiv.violations.append(f"{label(H)}: {v}")

        pairs.cases += 1
        free = cn is None
        pairs.violations.extend(f"{label(H)}: {v}" for v in P.invariant_violations(free))
        if free:
            pairs.violations.extend(f"{label(H)}: {v}" for v in _star_violations(H, P))
            pairs.violations.extend(f"{label(H)}: {v}" for v in _same_mu_reach_violations(P))
            shape.cases += 1
            k = max(1, P.max_mu)
            if len(chain) != k:
                shape.violations.append(f"{label(H)}: chain length {len(chain)} != max mu {k}")
            for i, f in enumerate(chain, start=1):
                for x in range(H.n):
                    for y in range(H.n):
                        m = P.mu(x, y)
                        if x != y and (f(x, x, y) == y) != (m <= i):
                            shape.violations.append(f"{label(H)}: f_{i}({x},{x},{y}) region, mu={m}")
                        if x != y and (f(x, y, y) == y) != (m < i):
                            shape.violations.append(f"{label(H)}: f_{i}({x},{y},{y}) region, mu={m}")
    return equiv, shape, pairs


def monotonicity_suite(digraphs: Iterable[Digraph]) -> SuiteReport:
    rep = SuiteReport("structural monotonicity")
    for H in digraphs:
        rep.cases += 1
        cn = find_circular_n(H) is not None
        dat = find_dat(H) is not None
        bic = find_bicycle(H) is not None
        ind = has_independent_edges(H) is not None
        if dat and not cn:
            rep.violations.append(f"{label(H)}: DAT without circular N")
        if cn and not (bic or ind):
            rep.violations.append(f"{label(H)}: circular N without bicycle or independent edges")
        if bic and not cn:
            rep.violations.append(f"{label(H)}: bicycle without circular N")
    return rep


def _event_violations(H: Digraph, P: PairStructure, ev: TransducerEvent) -> list[str]:
    out = []
    a, b = ev.a, ev.b
    if not P.is_k_good(ev.after.lists, ev.k - 1):
        out.append(f"T({a},{b}) output not {ev.k - 1}-good")
    relevant = set(ev.relevant)
    for y, (old, new) in enumerate(zip(ev.before.lists, ev.after.lists)):
        if y in relevant:
            if new not in (old - {a}, old - {b}):
                out.append(f"T({a},{b}) at vertex {y}: {sorted(old)} -> {sorted(new)}")
        elif new != old:
            out.append(f"T({a},{b}) touched non-relevant vertex {y}")
    if (oracle_solve(H, ev.before) is None) != (oracle_solve(H, ev.after) is None):
        out.append(f"T({a},{b}) changed satisfiability (depth {ev.depth})")
    return out


def solver_suites(rng: random.Random, cases: int, max_h: int = 5, max_g: int = 8
                  ) -> tuple[SuiteReport, SuiteReport]:
    agree = SuiteReport("solver vs oracle")
    trans = SuiteReport("transducer soundness")
    for case in range(cases):
        H = random_circular_n_free(rng, 2, max_h)
        P = PairStructure(H)
        inst = random_instance(rng, H, max_g)
        events: list[TransducerEvent] = []
        f = solve(H, inst, P, observer=events.append)
        o = oracle_solve(H, inst)
        agree.cases += 1
        if (f is None) != (o is None):
            agree.violations.append(f"case {case} {label(H)}: solver {f is not None}, oracle {o is not None}")
        if f is not None and not is_homomorphism(H, inst, f):
            agree.violations.append(f"case {case}: returned map is not a list homomorphism")
        for ev in events:
            trans.cases += 1
            trans.violations.extend(f"case {case}: {v}" for v in _event_violations(H, P, ev))
    return agree, trans


def reachability_suite(rng: random.Random, cases: int, max_h: int = 5, max_g: int = 6) -> SuiteReport:
    """Within each transducer step, a solution sending x to a never sends x' to
    b' when (x', a', b') shares a weak component with (x, a, b)."""
    rep = SuiteReport("triple-digraph reachability forbids values")
    for case in range(cases):
        H = random_circular_n_free(rng, 2, max_h)
        P = PairStructure(H)
        inst = random_instance(rng, H, max_g)
        events: list[TransducerEvent] = []
        solve(H, inst, P, observer=events.append)
        for ev in events:
            tr = TripleDigraph(H, ev.before)
            for x in ev.relevant:
                for x2, a2, b2 in tr.members(tr.comp(x, ev.a, ev.b)):
                    lists = list(ev.before.lists)
                    lists[x] = lists[x] & {ev.a}
                    lists[x2] = lists[x2] & {b2}
                    rep.cases += 1
                    if oracle_solve(H, Instance(ev.before.g, lists)) is not None:
                        rep.violations.append(
                            f"case {case} {label(H)}: f({x})={ev.a} allows f({x2})={b2} via ({x2},{a2},{b2})")
    return rep


def gadget_suite(templates: Sequence[tuple[str, Digraph, CircularNWitness]], st_graphs: Sequence[tuple[Digraph, int, int]]
                 ) -> SuiteReport:
    rep = SuiteReport("hardness gadget")
    for name, H, w in templates:
        for idx, (D, s, t) in enumerate(st_graphs):
            inst = build_gadget(H, w, D, s, t).instance
            solvable = oracle_solve(H, inst) is not None
            rep.cases += 1
            if solvable == has_directed_path(D, s, t):
                rep.violations.append(f"{name} st-graph {idx}: solvable={solvable}, path={not solvable}")
    return rep


# -- driver --------------------------------------------------------------------

@dataclass
class SelftestReport:
    args: dict
    suites: list[SuiteReport]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def render(self, max_violations: int = 10) -> str:
        lines = [f"selftest {' '.join(f'{k}={v}' for k, v in self.args.items())}"]
        for s in self.suites:
            lines.append(s.line())
            for v in sorted(s.violations)[:max_violations]:
                lines.append(f"    {v}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"args": self.args, "ok": self.ok, "suites": [s.to_json() for s in self.suites]}


def template_sample(max_n: int, samples: int, rng: random.Random) -> list[Digraph]:
    out = [H for n in range(1, min(max_n, 3) + 1) for H in all_digraphs(n)]
    if max_n >= 4:
        out += [random_digraph(rng, rng.randint(4, max_n)) for _ in range(samples)]
    return out


def run_selftest(max_n: int = 3, samples: int = 0, seed: int = 42, solver_cases: int = 100,
                 st_graphs: int = 10, chain_hook: Optional[ChainHook] = None) -> SelftestReport:
    rng = random.Random(seed)
    templates = template_sample(max_n, samples, rng)
    equiv, shape, pairs = dichotomy_suites(templates, chain_hook)
    mono = monotonicity_suite(templates)
    agree, trans = solver_suites(rng, solver_cases)
    graphs = [random_st_graph(rng) for _ in range(st_graphs)]
    hard = [(label(H), H, w) for H in templates if H.n <= 3 for w in [find_circular_n(H)] if w is not None]
    hard.append(("reflexive 4-cycle", fixtures.reflexive_cycle(), fixtures.cycle_witness()))
    gadget = gadget_suite(hard, graphs)
    args = {"max_n": max_n, "samples": samples, "seed": seed, "solver_cases": solver_cases, "st_graphs": st_graphs}
    return SelftestReport(args, [equiv, shape, pairs, mono, agree, trans, gadget])

"""Construction and verification of Hagemann-Mitschke chains of polymorphisms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from lhom.detect import find_circular_n
from lhom.digraph import B, F, Digraph
from lhom.errors import InputError, InternalError
from lhom.pairs import PairStructure


class TernaryOpTable:
    """A total ternary operation on ``0..n-1``, stored as an ``n x n x n`` array."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values):
        arr = np.asarray(values, dtype=np.int64).reshape((n, n, n))
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise InputError("table values out of range")
        self.n = n
        self.values = arr
        self.values.setflags(write=False)

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int, int], int]) -> "TernaryOpTable":
        return cls(n, [[[f(a, b, c) for c in range(n)] for b in range(n)] for a in range(n)])

    def __call__(self, a: int, b: int, c: int) -> int:
        return int(self.values[a, b, c])

    def is_conservative(self) -> bool:
        n = self.n
        a, b, c = np.indices((n, n, n))
        v = self.values
        return bool(np.all((v == a) | (v == b) | (v == c)))

    def flat(self) -> list[int]:
        return [int(v) for v in self.values.ravel()]

    def __eq__(self, other):
        return isinstance(other, TernaryOpTable) and self.n == other.n and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"TernaryOpTable(n={self.n})"


class Distinguishers:
    """For every start triple, the largest ``mu(x, y)`` over triples ``(x, y, y)``
    reachable along steps where neither companion walk has a faithful edge to
    the first walk. ``a`` is an i-distinguisher of ``(a, b, c)`` iff that value
    is at least ``i``."""

    def __init__(self, H: Digraph, P: PairStructure):
        n = H.n
        e = H.edge
        succ: dict[tuple[int, int, int], list] = {}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    out = []
                    for d in (F, B):
                        for a2 in H.neighbours(a, d):
                            for b2 in H.neighbours(b, d):
                                if e(b, a2, d):
                                    continue
                                for c2 in H.neighbours(c, d):
                                    if not e(c, a2, d):
                                        out.append((a2, b2, c2))
                    succ[(a, b, c)] = out
        self.best = {}
        for start in succ:
            seen = {start}
            queue = deque([start])
            best = 0
            while queue:
                t = queue.popleft()
                if t[1] == t[2]:
                    best = max(best, P.mu(t[0], t[1]))
                for u in succ[t]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            self.best[start] = best

    def __call__(self, i: int, a: int, b: int, c: int) -> bool:
        return self.best[(a, b, c)] >= i


def is_distinguisher(H: Digraph, P: PairStructure, i: int, a: int, b: int, c: int,
                     table: Optional[Distinguishers] = None) -> bool:
    if i < 1:
        raise InputError("distinguisher level must be positive")
    table = table if table is not None else Distinguishers(H, P)
    return table(i, a, b, c)


def chain_member(i: int, a: int, b: int, c: int, mu, dist) -> int:
    mbc = mu(b, c)
    if mbc > i:
        return b if mu(a, b) < i else a
    if mbc == i:
        mac = mu(a, c)
        if mac < i or (mac == i and not dist(i, a, b, c)):
            return c
        return a
    return c if mu(a, c) < i else a


def build_hm_chain(H: Digraph, P: Optional[PairStructure] = None, force: bool = False
                   ) -> Optional[list[TernaryOpTable]]:
    """Build ``f_1 .. f_k`` from the mu values and i-distinguishers.

    Returns ``None`` when ``H`` has a circular N, unless ``force`` is set, in
    which case the tables are filled anyway (and will fail verification).
    """
    if not force and find_circular_n(H) is not None:
        return None
    P = P if P is not None else PairStructure(H)
    n = H.n
    k = max(1, P.max_mu)
    mu_t = P.mu_table()
    mu = lambda x, y: mu_t[x][y]
    dist = Distinguishers(H, P)
    chain = []
    for i in range(1, k + 1):
        table = TernaryOpTable.from_function(n, lambda a, b, c: chain_member(i, a, b, c, mu, dist))
        if not table.is_conservative():
            raise InternalError(f"f_{i} is not conservative")
        chain.append(table)
    return chain


@dataclass(frozen=True)
class IdentityViolation:
    identity: str  # "first", "link" or "last"
    i: int
    x: int
    y: int

    def __str__(self):
        if self.identity == "first":
            return f"f_1({self.x},{self.y},{self.y}) != {self.x}"
        if self.identity == "last":
            return f"f_{self.i}({self.x},{self.x},{self.y}) != {self.y}"
        return f"f_{self.i}({self.x},{self.x},{self.y}) != f_{self.i + 1}({self.x},{self.y},{self.y})"


def verify_hm_identities(chain: Sequence[TernaryOpTable]) -> list[IdentityViolation]:
    if not chain:
        raise InputError("empty chain")
    n = chain[0].n
    if any(f.n != n for f in chain):
        raise InputError("chain members disagree on domain size")
    k = len(chain)
    out = []
    for x in range(n):
        for y in range(n):
            if chain[0](x, y, y) != x:
                out.append(IdentityViolation("first", 1, x, y))
    for i in range(k - 1):
        for x in range(n):
            for y in range(n):
                if chain[i](x, x, y) != chain[i + 1](x, y, y):
                    out.append(IdentityViolation("link", i + 1, x, y))
    for x in range(n):
        for y in range(n):
            if chain[-1](x, x, y) != y:
                out.append(IdentityViolation("last", k, x, y))
    return out


def verify_polymorphism(H: Digraph, f: TernaryOpTable, limit: Optional[int] = None
                        ) -> list[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
    """Arc triples whose image under ``f`` is not an arc."""
    arcs = np.array(H.sorted_arcs(), dtype=np.int64).reshape(-1, 2)
    if len(arcs) == 0:
        return []
    adj = np.array(H.adj, dtype=bool).reshape(H.n, H.n)
    src, dst = arcs[:, 0], arcs[:, 1]
    v = f.values
    img_src = v[src[:, None, None], src[None, :, None], src[None, None, :]]
    img_dst = v[dst[:, None, None], dst[None, :, None], dst[None, None, :]]
    bad = np.argwhere(~adj[img_src, img_dst])
    if limit is not None:
        bad = bad[:limit]
    return [(tuple(map(int, arcs[i])), tuple(map(int, arcs[j])), tuple(map(int, arcs[l]))) for i, j, l in bad]


def chain_is_valid(H: Digraph, chain: Optional[Sequence[TernaryOpTable]]) -> bool:
    if not chain:
        return False
    if verify_hm_identities(chain):
        return False
    return all(not verify_polymorphism(H, f, limit=1) for f in chain)

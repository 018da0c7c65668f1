"""Small named templates used by the tests, the self-test and the docs."""

from lhom.detect import CircularNWitness
from lhom.digraph import F, Digraph, Walk


def single_arc() -> Digraph:
    return Digraph(2, [(0, 1)])


def n_shape() -> Digraph:
    return Digraph(4, [(0, 1), (2, 3), (2, 1)])


def reflexive_cycle(length: int = 4) -> Digraph:
    arcs = set()
    for i in range(length):
        j = (i + 1) % length
        arcs |= {(i, i), (i, j), (j, i)}
    return Digraph(length, arcs)


def reflexive_path(length: int = 4) -> Digraph:
    arcs = {(i, i) for i in range(length)}
    for i in range(length - 1):
        arcs |= {(i, i + 1), (i + 1, i)}
    return Digraph(length, arcs)


def cycle_witness() -> CircularNWitness:
    """Circular N in the reflexive 4-cycle on a,b,c,d = 0,1,2,3."""
    fwd = [F] * 4
    X = Walk.from_vertices([0, 1, 2, 3, 0], fwd)
    Y = Walk.from_vertices([1, 2, 3, 0, 1], fwd)
    Z = Walk.from_vertices([1, 2, 2, 3, 0], fwd)
    return CircularNWitness(0, 1, X, Y, Z)


NAMED = {
    "arc": single_arc,
    "n": n_shape,
    "c4r": reflexive_cycle,
    "p4r": reflexive_path,
}

import random

import pytest
from hypothesis import strategies as st

from lhom import fixtures
from lhom.digraph import B, F, Digraph, Walk


@pytest.fixture
def h_arc():
    return fixtures.single_arc()


@pytest.fixture
def h_n():
    return fixtures.n_shape()


@pytest.fixture
def c4r():
    return fixtures.reflexive_cycle()


@pytest.fixture
def p4r():
    return fixtures.reflexive_path()


@st.composite
def digraphs(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    cells = [(u, v) for u in range(n) for v in range(n)]
    mask = draw(st.lists(st.booleans(), min_size=len(cells), max_size=len(cells)))
    return Digraph(n, [c for c, keep in zip(cells, mask) if keep])


def random_walk(rng: random.Random, D: Digraph, pattern) -> Walk | None:
    """A walk following ``pattern`` in ``D`` chosen uniformly step by step, or None if stuck."""
    u = rng.randrange(D.n)
    start, steps = u, []
    for d in pattern:
        options = D.neighbours(u, d)
        if not options:
            return None
        u = rng.choice(options)
        steps.append((d, u))
    return Walk(start, tuple(steps))


@st.composite
def congruent_walks(draw, count=2, max_len=5):
    """A digraph plus ``count`` congruent walks in it (retrying until one exists)."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    while True:
        n = rng.randint(1, 4)
        D = Digraph(n, [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.5])
        pattern = [rng.choice((F, B)) for _ in range(rng.randint(0, max_len))]
        walks = [random_walk(rng, D, pattern) for _ in range(count)]
        if all(w is not None for w in walks):
            return D, walks


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])

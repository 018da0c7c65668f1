import random

import numpy as np

from lhom.hmchain import TernaryOpTable
from lhom.selftest import (
    all_digraphs,
    dichotomy_suites,
    random_circular_n_free,
    random_st_graph,
    run_selftest,
)
from lhom.detect import find_circular_n


def corrupt_first_cell(H, chain):
    if H.n < 2:
        return chain
    vals = np.array(chain[0].values)
    vals[0, 1, 1] = 1
    return [TernaryOpTable(H.n, vals)] + list(chain[1:])


def test_three_vertex_run_is_clean():
    report = run_selftest(3, 0, 42, solver_cases=20, st_graphs=3)
    assert report.ok, report.render()
    equiv = report.suites[0]
    assert equiv.cases == 2 + 16 + 512


def test_byte_identical_reports():
    a = run_selftest(3, 4, 7, solver_cases=15, st_graphs=2).render()
    b = run_selftest(3, 4, 7, solver_cases=15, st_graphs=2).render()
    assert a == b


def test_different_seed_changes_samples():
    a = run_selftest(4, 3, 1, solver_cases=3, st_graphs=1).to_json()
    b = run_selftest(4, 3, 2, solver_cases=3, st_graphs=1).to_json()
    assert a["args"] != b["args"]


def test_fault_injection_names_the_identity():
    report = run_selftest(2, 0, 42, solver_cases=2, st_graphs=1, chain_hook=corrupt_first_cell)
    assert not report.ok
    text = report.render()
    assert "FAIL dichotomy equivalence" in text
    assert "f_1(0,1,1) != 0" in text


def test_fault_injection_on_longer_chain_link():
    def break_link(H, chain):
        if len(chain) < 2:
            return chain
        vals = np.array(chain[0].values)
        P_pairs = [(x, y) for x in range(H.n) for y in range(H.n) if x != y]
        for x, y in P_pairs:
            if vals[x, x, y] == y:
                vals[x, x, y] = x
                break
        return [TernaryOpTable(H.n, vals)] + list(chain[1:])

    equiv, _, _ = dichotomy_suites(all_digraphs(3), chain_hook=break_link)
    assert any("!= f_2(" in v for v in equiv.violations)


def test_random_generators_respect_bounds():
    rng = random.Random(0)
    for _ in range(30):
        H = random_circular_n_free(rng, 2, 5)
        assert 2 <= H.n <= 5 and find_circular_n(H) is None
        D, s, t = random_st_graph(rng)
        assert 2 <= D.n <= 8 and len(D.arcs) <= 14 and s != t

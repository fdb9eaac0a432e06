import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookem.embedding import SpineOrder, verify
from bookem.graphs import (
    Graph,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_k_tree,
    gen_path,
    gen_random_graph,
)
from bookem.solver import (
    Budget,
    BudgetExhausted,
    FixedSpine,
    Param,
    SolveRequest,
    canonical_spine_count,
    canonical_spines,
    oracle_all,
    set_partitions,
    solve,
    solve_all,
    solve_fixed_spine,
)

from conftest import graphs_on_exactly


def min_coloring_brute(n, edges, conflicts):
    """Chromatic number of the conflict graph on edge indices."""
    m = len(edges)
    if m == 0:
        return 0
    for k in range(1, m + 1):
        for colors in itertools.product(range(k), repeat=m):
            if all(colors[i] != colors[j] for i, j in conflicts):
                return k
    return m


def conflicts_on_spine(graph, order):
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for (i, e), (j, f) in itertools.combinations(enumerate(graph.edges), 2):
        a, b = sorted((pos[e[0]], pos[e[1]]))
        c, d = sorted((pos[f[0]], pos[f[1]]))
        if a < c < b < d or c < a < d < b:
            out.append((i, j))
    return out


def test_param_parse():
    assert Param.parse("pnl") is Param.PN_LOCAL
    assert Param.parse("pnu") is Param.PN_UNION
    assert Param.parse("pn") is Param.PN
    with pytest.raises(ValueError):
        Param.parse("xyz")


def test_canonical_spines():
    assert canonical_spine_count(7) == 360
    assert len(list(canonical_spines(7))) == 360
    assert list(canonical_spines(2)) == [(0, 1)]
    seen = set()
    for p in canonical_spines(5):
        # neither a rotation nor a reflection of another listed spine
        cyc = [p[i:] + p[:i] for i in range(5)]
        cyc += [tuple(reversed(c)) for c in cyc]
        assert not seen & set(cyc)
        seen.add(p)
    assert len(seen) == math.factorial(4) // 2


def test_set_partitions_bell_numbers():
    assert [len(set_partitions(m)) for m in range(1, 7)] == [1, 2, 5, 15, 52, 203]


def test_k5_natural_spine_pn():
    g = gen_complete(5)
    conf = conflicts_on_spine(g, range(5))
    assert min_coloring_brute(5, g.edges, conf) == 3
    r = solve_fixed_spine(g, SpineOrder.identity(5), Param.PN)
    assert r.value == 3


@pytest.mark.parametrize("seed", range(15))
def test_fixed_spine_pn_against_coloring(seed):
    g = gen_random_graph(6, 0.6, seed)
    if g.m == 0 or g.m > 9:
        return
    order = tuple((seed * 5 + i * 7) % 6 for i in range(6))
    if len(set(order)) < 6:
        order = tuple(range(6))
    want = min_coloring_brute(6, g.edges, conflicts_on_spine(g, order))
    assert solve_fixed_spine(g, SpineOrder(order), Param.PN).value == want


def test_small_exact_values():
    k5 = solve_all(gen_complete(5))
    assert (k5[Param.PN].value, k5[Param.PN_LOCAL].value, k5[Param.PN_UNION].value) == (3, 2, 3)
    k33 = solve_all(gen_complete_bipartite(3, 3))
    assert (k33[Param.PN].value, k33[Param.PN_LOCAL].value, k33[Param.PN_UNION].value) == (3, 2, 2)


@pytest.mark.parametrize("n, pn", [(2, 1), (3, 1), (4, 2), (5, 3), (6, 3), (7, 4)])
def test_pn_complete(n, pn):
    assert solve(SolveRequest(gen_complete(n), Param.PN)).value == pn


def test_pn_local_k7():
    r = solve(SolveRequest(gen_complete(7), Param.PN_LOCAL))
    assert r.value == 3
    cert = verify(r.certificate)
    assert cert.is_book and cert.locality == 3


def test_oracle_small():
    assert oracle_all(gen_complete(4), Param.PN) == 2
    assert oracle_all(gen_complete(4), "pnl") == 2
    assert oracle_all(gen_cycle(5), Param.PN) == 1
    with pytest.raises(ValueError):
        oracle_all(gen_complete(6), Param.PN)


@pytest.mark.parametrize("param", list(Param))
def test_solver_matches_oracle_on_four_vertices(param):
    for g in graphs_on_exactly(4):
        assert solve(SolveRequest(g, param)).value == oracle_all(g, param)


def test_empty_graph():
    r = solve(SolveRequest(Graph(3, ()), Param.PN))
    assert r.value == 0 and r.certificate.page_count == 0


def test_certificates_verify():
    for param in Param:
        r = solve(SolveRequest(gen_complete_bipartite(3, 3), param))
        rep = verify(r.certificate)
        assert rep.is_union
        if param is not Param.PN_UNION:
            assert rep.is_book


def test_budget_gives_interval():
    # the density bound for K7 is 2, the true value 3; proving it needs every spine
    r = solve(SolveRequest(gen_complete(7), Param.PN_LOCAL, node_limit=20))
    assert not r.exact and r.value is None
    assert r.lower == 2 and r.upper >= 3
    assert verify(r.certificate).locality == r.upper


def test_budget_tick():
    b = Budget(node_limit=2)
    b.tick()
    b.tick()
    with pytest.raises(BudgetExhausted):
        b.tick()


def test_memo_skips_equivalent_spines():
    r = solve(SolveRequest(gen_complete_bipartite(3, 3), Param.PN))
    assert r.distinct_spines < r.spines


def test_decide_local_count_prune_agrees():
    g = gen_complete(6)
    for order in itertools.islice(canonical_spines(6), 10):
        fs = FixedSpine(g, SpineOrder(order))
        for k in (2, 3):
            a = fs.decide_local(k, Budget()) is not None
            b = fs.decide_local(k, Budget(), count_prune=False) is not None
            assert a == b


def test_parallel_matches_serial():
    g = gen_k_tree(2, 7, seed=3)
    serial = solve(SolveRequest(g, Param.PN_LOCAL))
    par = solve(SolveRequest(g, Param.PN_LOCAL, jobs=2))
    assert serial.value == par.value


@given(st.integers(2, 6), st.floats(0.2, 0.9), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_value_chain(n, p, seed):
    g = gen_random_graph(n, p, seed)
    vals = {param: solve(SolveRequest(g, param)).value for param in Param}
    assert vals[Param.PN_LOCAL] <= vals[Param.PN_UNION] <= vals[Param.PN]


def test_to_dict():
    d = solve(SolveRequest(gen_path(4), Param.PN)).to_dict()
    assert d["value"] == 1 and d["exact"] and d["parameter"] == "pn"

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookem.bounds import (
    Target,
    arboricity_partition,
    bound_report,
    density_report,
    eq4_chain_check,
    is_forest,
    lemma1_lower_bound,
    lemma1_value,
    mad,
    max_density,
    nash_williams,
    refined_local_bound,
)
from bookem.graphs import (
    Graph,
    gen_complete,
    gen_complete_bipartite,
    gen_k_tree,
    gen_path,
    gen_random_graph,
    gen_stacked_triangulation,
)

from conftest import brute_density, random_corpus


@st.composite
def small_graphs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    p = draw(st.floats(0.05, 0.95))
    seed = draw(st.integers(0, 2**32))
    return gen_random_graph(n, p, seed)


def test_mad_examples():
    assert mad(gen_complete(5)) == 4
    assert mad(gen_stacked_triangulation(1)) == Fraction(18, 5)
    assert mad(gen_path(4)) == Fraction(3, 2)
    # a triangle with a pendant vertex: densest part is the triangle
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert mad(g) == 2
    assert max_density(g)[1] in ((0, 1, 2), (0, 1, 2, 3))


def test_outerplanar_density_values():
    assert lemma1_value(gen_complete(5)) == Fraction(10, 7)
    assert lemma1_lower_bound(gen_complete(5)) == 2
    assert lemma1_value(gen_complete(7)) == Fraction(21, 11)
    assert lemma1_value(Graph(3, ())) == 0
    # a single edge has density 1 / (2*2 - 3)
    assert lemma1_value(gen_path(2)) == 1


def test_nash_williams_examples():
    assert nash_williams(gen_complete(5)) == 3
    assert nash_williams(gen_stacked_triangulation(2)) == 3
    assert nash_williams(gen_path(6)) == 1
    assert nash_williams(gen_complete_bipartite(3, 3)) == 2


@given(small_graphs(), st.sampled_from([(1, 0), (2, 3), (1, 1)]))
@settings(max_examples=500, deadline=None)
def test_max_density_against_subset_listing(g, wc):
    w, c = wc
    if g.m == 0 and c:
        return
    value, witness = max_density(g, c=c, w=w)
    assert value == brute_density(g, w, c)
    e = sum(1 for u, v in g.edges if u in witness and v in witness)
    assert Fraction(e, w * len(witness) - c) == value


@pytest.mark.parametrize("seed", range(12))
def test_flow_route_matches_brute(seed):
    g = gen_random_graph(13, 0.2 + 0.05 * seed, seed)
    for w, c in [(1, 0), (2, 3), (1, 1)]:
        if g.m == 0:
            continue
        assert max_density(g, c, w, method="flow")[0] == max_density(g, c, w, method="brute")[0]


def test_flow_route_large():
    t5 = gen_stacked_triangulation(5)
    # a stacked triangulation's densest part is itself: m = 3n - 6
    assert mad(t5) == Fraction(2 * t5.m, t5.n)
    assert nash_williams(t5) == 3
    assert lemma1_value(t5) == Fraction(t5.m, 2 * t5.n - 3)


def test_unknown_method():
    with pytest.raises(ValueError):
        max_density(gen_path(3), method="magic")


def test_refined_local_bound():
    assert refined_local_bound(gen_complete(7), 4) == 3
    assert refined_local_bound(gen_complete(7), 1) == 2
    assert refined_local_bound(Graph(4, ()), 0) == 0


def check_partition(g, fp):
    assert sorted(e for f in fp.forests for e in f) == list(g.edges)
    assert all(is_forest(g.n, f) for f in fp.forests)


def test_arboricity_examples():
    for g, a in [(gen_complete(5), 3), (gen_stacked_triangulation(2), 3), (gen_complete(8), 4), (gen_path(5), 1)]:
        fp = arboricity_partition(g)
        check_partition(g, fp)
        assert fp.arboricity == a


@given(small_graphs(max_n=10))
@settings(max_examples=150, deadline=None)
def test_arboricity_equals_nash_williams(g):
    fp = arboricity_partition(g)
    check_partition(g, fp)
    expected = math.ceil(brute_density(g, 1, 1)) if g.m else 0
    assert fp.arboricity == expected


@given(small_graphs(max_n=9), st.data())
@settings(max_examples=100, deadline=None)
def test_monotone_on_subgraphs(g, data):
    keep = data.draw(st.lists(st.booleans(), min_size=g.m, max_size=g.m))
    h = g.edge_subgraph([e for e, k in zip(g.edges, keep) if k])
    assert mad(h) <= mad(g)
    assert lemma1_value(h) <= lemma1_value(g)
    assert arboricity_partition(h).arboricity <= arboricity_partition(g).arboricity


def test_value_chain_check():
    k5 = gen_complete(5)
    assert eq4_chain_check(k5, 2, 3, 3)
    assert not eq4_chain_check(k5, 3, 2, 3)
    # K9 has mad 8, so a local value of 1 is impossible
    assert not eq4_chain_check(gen_complete(9), 1, 5, 5)


def test_density_report_fields():
    r = density_report(gen_complete(4))
    assert r.mad == 3 and r.lemma1_value == Fraction(6, 5)
    assert r.mad_witness == (0, 1, 2, 3)


def test_bound_report_local():
    r = bound_report(gen_complete(7), Target.PN_LOCAL, pn_lower=4)
    assert r.lower == 3
    rules = {rule for _, rule, _ in r.provenance}
    assert {"mad/4", "outerplanar density", "refined local count"} <= rules
    assert r.upper is not None and r.upper >= r.lower
    d = r.to_dict()
    assert d["target"] == "pn_local" and d["lower"] == 3


def test_bound_report_edgeless():
    r = bound_report(Graph(3, ()), Target.PN_UNION)
    assert (r.lower, r.upper) == (0, 0)


@pytest.mark.parametrize("g", random_corpus(20, 14, seed=5), ids=lambda g: f"n{g.n}m{g.m}")
def test_bound_report_consistent(g):
    for t in Target:
        r = bound_report(g, t)
        assert r.upper is None or r.lower <= r.upper


def test_k_tree_density():
    # k-trees have m = kn - k(k+1)/2, and the whole graph is densest
    g = gen_k_tree(3, 12, seed=3)
    assert mad(g) == Fraction(2 * g.m, g.n)

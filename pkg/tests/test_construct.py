import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookem.bounds import arboricity_partition, mad
from bookem.construct import (
    ConstructionError,
    CyclicTemplate,
    StarForestPartition,
    TemplateSearchTimeout,
    canonical_template_key,
    degeneracy_order,
    degeneracy_stars,
    kn_zigzag,
    ktree_color_embedding,
    ktree_color_partition,
    lemma2_amplifier,
    local_embedding_from_stars,
    pack_stars,
    star_forests_from_forests,
    template_search,
    union_embedding_from_arboricity,
    zigzag_path,
)
from bookem.embedding import verify
from bookem.solver import Param, oracle_all
from bookem.graphs import (
    Graph,
    gen_complete,
    gen_cycle,
    gen_k_tree,
    gen_path,
    gen_random_graph,
    gen_stacked_triangulation,
    is_k_tree,
)

from conftest import random_corpus


def star_arboricity_brute(g):
    """Fewest star forests covering g, by trying every edge coloring."""
    def ok(part):
        # a forest whose components are stars: no path with three edges, no cycle
        adj = {}
        for u, v in part:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        for u, v in part:
            if len(adj[u]) > 1 and len(adj[v]) > 1:
                return False
        return True

    for k in range(1, g.m + 1):
        for colors in itertools.product(range(k), repeat=g.m):
            parts = [[e for e, c in zip(g.edges, colors) if c == i] for i in range(k)]
            if all(ok(p) for p in parts):
                return k
    return 0


def test_star_arboricity_oracle():
    assert star_arboricity_brute(gen_path(4)) == 2
    assert star_arboricity_brute(gen_path(3)) == 1
    assert star_arboricity_brute(gen_complete(4)) == 3


def test_star_forests_of_path():
    g = gen_path(4)
    sfp = star_forests_from_forests(arboricity_partition(g), g)
    assert sfp.is_valid(g)
    assert len(sfp.star_forests) == 2


def test_star_forest_validity_check():
    g = gen_path(4)
    bad = StarForestPartition([{1: [(0, 1), (1, 2)], 2: [(2, 3)]}])
    assert not bad.is_valid(g)
    good = StarForestPartition([{1: [(0, 1), (1, 2)]}, {2: [(2, 3)]}])
    assert good.is_valid(g)


@pytest.mark.parametrize("g", random_corpus(25, 9, seed=2), ids=lambda g: f"n{g.n}m{g.m}")
def test_union_embedding_bounds(g):
    if g.m == 0:
        return
    a = arboricity_partition(g).arboricity
    sfp = star_forests_from_forests(arboricity_partition(g), g)
    assert sfp.is_valid(g)
    emb = union_embedding_from_arboricity(g)
    r = verify(emb)
    assert r.is_union
    assert r.page_count <= 2 * a
    assert r.page_count <= mad(g) + 2
    if g.m <= 8:
        assert len(sfp.star_forests) >= star_arboricity_brute(g)
    if g.n <= 5:
        assert r.page_count >= oracle_all(g, Param.PN_UNION)


def test_pack_stars_merges_disjoint_stars():
    # two stars from different forests fit on one union page
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    sfp = StarForestPartition([{0: [(0, 1)]}, {2: [(2, 3)]}])
    assert pack_stars(sfp, g).page_count == 1


def test_degeneracy_order_examples():
    assert degeneracy_order(gen_path(4)) == [0, 1, 2, 3]
    assert degeneracy_order(gen_cycle(4)) == [0, 1, 2, 3]
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert degeneracy_order(star) == [1, 2, 0, 3]


def test_triangle_stars():
    emb = local_embedding_from_stars(gen_complete(3))
    r = verify(emb)
    assert r.is_book and r.locality == 2


def test_stars_reject_non_star():
    with pytest.raises(ValueError):
        local_embedding_from_stars(gen_path(4), [[(0, 1), (2, 3)], [(1, 2)]])


@given(st.integers(2, 14), st.floats(0.1, 0.9), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_degeneracy_stars_locality(n, p, seed):
    g = gen_random_graph(n, p, seed)
    if g.m == 0:
        return
    order = degeneracy_order(g)
    rank = {v: i for i, v in enumerate(order)}
    degen = max(sum(1 for u in g.neighbors(v) if rank[u] > rank[v]) for v in range(n))
    r = verify(local_embedding_from_stars(g))
    assert r.is_book
    assert r.locality <= degen + 1
    assert sum(len(s) for _, s in degeneracy_stars(g)) == g.m


def test_zigzag_path():
    assert zigzag_path(6, 0) == [0, 1, 5, 2, 4, 3]
    assert zigzag_path(6, 2) == [2, 3, 1, 4, 0, 5]


@pytest.mark.parametrize("n, pages", [(2, 1), (3, 2), (4, 2), (5, 3), (8, 4), (9, 5), (16, 8)])
def test_kn_zigzag(n, pages):
    r = verify(kn_zigzag(n))
    assert r.is_book and r.page_count == pages
    assert r.locality == pages


def test_kn_zigzag_rejects_tiny():
    with pytest.raises(ValueError):
        kn_zigzag(1)


def test_cyclic_template_pages():
    t = CyclicTemplate(4, (((0, 1), (0, 2), (2, 3)),), 2, 1)
    assert t.pages() == [[(0, 1), (0, 2), (2, 3)], [(0, 3), (1, 2), (1, 3)]]
    assert verify(t.embedding()).is_book
    clash = CyclicTemplate(4, (((0, 1), (0, 2), (1, 2)),), 2, 2)
    with pytest.raises(ValueError, match="twice"):
        clash.embedding()


def test_template_search_k6():
    t = template_search(6, 2, num_templates=1, shifts=3)
    assert t is not None
    r = verify(t.embedding())
    assert r.is_book and r.locality <= 2 and r.page_count == 3


def test_template_search_k5_one_template():
    # five rotations of one template touch each template vertex five times,
    # so locality 2 only allows a single edge per page
    assert template_search(5, 2, num_templates=1) is None
    t = template_search(5, 3, num_templates=1)
    assert t is not None
    assert verify(t.embedding()).locality <= 3


def test_template_search_not_found():
    # K5 has mad 4, so no embedding with locality 1 exists
    assert template_search(5, 1, num_templates=2) is None
    assert template_search(6, 2, shifts=4) is None


def test_template_search_limits():
    with pytest.raises(TemplateSearchTimeout):
        template_search(11, 3, num_templates=1, node_limit=5)


@given(st.integers(4, 7), st.integers(1, 3), st.integers(1, 2), st.data())
@settings(max_examples=40, deadline=None)
def test_template_order_does_not_change_outcome(n, locality, t, data):
    total = n * (n - 1) // 2
    shifts = data.draw(st.sampled_from([s for s in range(1, n + 1) if total % s == 0]))
    try:
        a = template_search(n, locality, t, shifts, order="lex", node_limit=20000)
        b = template_search(n, locality, t, shifts, order="reverse", node_limit=20000)
    except TemplateSearchTimeout:
        return
    assert (a is None) == (b is None)
    for res in (a, b):
        if res is not None:
            r = verify(res.embedding())
            assert r.is_book and r.locality <= locality


def test_canonical_key_rotation_invariant():
    t = template_search(6, 2, shifts=3)
    shifted = [sorted(tuple(sorted(((a + 1) % 6, (b + 1) % 6))) for a, b in tp) for tp in t.templates]
    rotated = CyclicTemplate(6, tuple(tuple(tp) for tp in shifted), 3)
    assert canonical_template_key(rotated) == canonical_template_key(t)


def test_ktree_partition_2tree():
    g = gen_k_tree(2, 5, seed=4)
    col = ktree_color_partition(g, 2)
    assert len(col.pair_trees) == 3
    assert sum(len(t) for t in col.pair_trees.values()) == 7
    assert all(col.trees_at(v) == 2 for v in range(g.n))


def test_ktree_partition_3tree():
    g = gen_k_tree(3, 10, seed=1)
    col = ktree_color_partition(g, 3)
    assert len(col.pair_trees) == 6
    assert all(col.trees_at(v) == 3 for v in range(g.n))
    emb = ktree_color_embedding(col, g)
    assert emb.page_count == 6 and verify(emb).locality == 3


@given(st.integers(1, 4), st.integers(0, 26), st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_ktree_partition_property(k, extra, seed):
    g = gen_k_tree(k, k + 1 + extra, seed)
    col = ktree_color_partition(g, k)
    assert len(col.pair_trees) == k * (k + 1) // 2
    for u, v in g.edges:
        assert col.colors[u] != col.colors[v]
    assert all(col.trees_at(v) == k for v in range(g.n))


def test_ktree_partition_rejects():
    with pytest.raises(ValueError):
        ktree_color_partition(gen_cycle(5), 2)


def test_amplifier_counts():
    h = lemma2_amplifier(gen_complete(3), 2, 1)
    assert h.n == 39
    assert is_k_tree(h, 2)
    assert h.m == 2 * 39 - 3
    k2 = gen_complete(2)
    assert lemma2_amplifier(k2, 1, 1) is k2


def test_amplifier_cap():
    with pytest.raises(ValueError):
        lemma2_amplifier(gen_complete(3), 2, 1, cap=30)
    with pytest.raises(ValueError):
        lemma2_amplifier(gen_cycle(4), 2, 1)


def test_star_pipeline_t3():
    g = gen_stacked_triangulation(3)
    r = verify(local_embedding_from_stars(g))
    assert r.is_book and r.locality <= 4


def test_construction_error_is_raised_for_bad_pages():
    assert issubclass(ConstructionError, RuntimeError)

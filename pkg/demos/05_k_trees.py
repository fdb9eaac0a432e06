"""
k-trees and color-pair trees
============================

"""

from bookem import Param, SolveRequest, gen_k_tree, ktree_color_partition, lemma2_amplifier, solve, verify
from bookem.construct import ktree_color_embedding
from bookem.graphs import gen_complete

# seeded, so the same instance appears everywhere
g = gen_k_tree(3, 12, seed=42)
print("3-tree:", g.n, "vertices", g.m, "edges")

# a proper 4-coloring; each pair of colors induces a tree
col = ktree_color_partition(g, 3)
for pair, edges in col.pair_trees.items():
    print("  colors", pair, "->", len(edges), "edges")
emb = ktree_color_embedding(col, g)
print("forest embedding locality", verify(emb).locality)

# 2-trees need at least two pages around some vertex
two = gen_k_tree(2, 8, seed=7)
print("pn_local of a 2-tree on 8 vertices:", solve(SolveRequest(two, Param.PN_LOCAL)).value)

# hang 3*k*k*ell new vertices on every k-clique
big = lemma2_amplifier(gen_complete(3), k=2, ell=1)
print("amplified triangle:", big.n, "vertices")

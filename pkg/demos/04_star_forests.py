"""
Forests, star forests and union pages
=====================================

"""

from bookem import (
    arboricity_partition,
    gen_complete,
    mad,
    pack_stars,
    split_components,
    star_forests_from_forests,
    union_embedding_from_arboricity,
    verify,
)
from bookem.graphs import gen_random_graph

g = gen_random_graph(20, 0.4, seed=3)
fp = arboricity_partition(g)
print(f"{g.m} edges into {fp.arboricity} forests")

# each forest splits into two star forests by depth parity
sfp = star_forests_from_forests(fp, g)
print("star forests:", len(sfp.star_forests), "valid", sfp.is_valid(g))

# stars are crossing-free on any spine; packing them tightly needs fewer pages
emb = union_embedding_from_arboricity(g)
r = verify(emb)
print(f"union pages {r.page_count}, 2a = {2 * fp.arboricity}, mad + 2 = {float(mad(g)) + 2:.2f}")

# a union page may hold crossing components; splitting them yields a book embedding
k6 = gen_complete(6)
emb = pack_stars(star_forests_from_forests(arboricity_partition(k6), k6), k6)
before, after = verify(emb), verify(split_components(emb))
print("K6 union:", before.page_count, "pages, book", before.is_book)
print("after split:", after.page_count, "pages, book", after.is_book, "locality", after.locality)

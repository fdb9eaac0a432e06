"""
Complete graphs: zigzag pages and cyclic templates
==================================================

"""

from bookem import kn_zigzag, template_search, verify

# ceil(n/2) zigzag paths cover K_n
for n in (6, 9, 16):
    r = verify(kn_zigzag(n))
    print(f"K{n}: {r.page_count} pages, book {r.is_book}")

# one template page rotated 3 times gives a 2-local embedding of K6
t = template_search(6, 2, num_templates=1, shifts=3)
print("K6 template:", t.templates[0])
print("  locality", verify(t.embedding()).locality)

# rotating all the way around: K11 with every vertex on at most 4 pages
t = template_search(11, 4, num_templates=1, shifts=11)
r = verify(t.embedding())
print("K11 template:", t.templates[0])
print("  pages", r.page_count, "locality", r.locality)

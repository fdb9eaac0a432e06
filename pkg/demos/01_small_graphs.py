"""
Exact page numbers of small graphs
==================================

"""

from bookem import Param, SolveRequest, gen_complete, gen_complete_bipartite, solve, verify

# the solver tries every spine order up to rotation and reflection
for name, g in [("K5", gen_complete(5)), ("K3,3", gen_complete_bipartite(3, 3))]:
    for param in Param:
        r = solve(SolveRequest(g, param))
        print(f"{name:5} {param.value:9} = {r.value}   ({r.distinct_spines} distinct spines)")

# every answer comes with a certificate that can be checked on its own
r = solve(SolveRequest(gen_complete(5), Param.PN_LOCAL))
report = verify(r.certificate)
print("K5 certificate: book", report.is_book, "locality", report.locality, "pages", report.page_count)
print("per-vertex pages:", report.per_vertex_locality)

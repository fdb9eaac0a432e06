"""
Stacked triangulations
======================

"""

import time
from pathlib import Path

from bookem import Param, SolveRequest, gen_stacked_triangulation, local_embedding_from_stars, solve, verify
from bookem.render import render

t2 = gen_stacked_triangulation(2)
start = time.perf_counter()
r = solve(SolveRequest(t2, Param.PN_LOCAL))
print(f"pn_local(T_2) = {r.value}  ({time.perf_counter() - start:.1f}s, {r.distinct_spines} spines)")

# far too big for exact search, but degeneracy stars still give locality 4
t9 = gen_stacked_triangulation(9)
rep = verify(local_embedding_from_stars(t9))
print(f"T_9: {t9.n} vertices, {rep.page_count} star pages, locality {rep.locality}")

# draw the T_2 certificate as an arc diagram
out = Path("t2_local.svg")
out.write_text(render(r.certificate))
print("wrote", out)

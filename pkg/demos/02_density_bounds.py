"""
Density lower bounds
====================

"""

import math

from bookem import gen_complete, gen_stacked_triangulation, mad, refined_local_bound
from bookem.bounds import lemma1_value, max_density, nash_williams

# exact rationals throughout
t1 = gen_stacked_triangulation(1)
print("mad(T_1) =", mad(t1))

# densest part for |E(H)| / (2|V(H)| - 3), the outerplanar edge budget
value, witness = max_density(gen_complete(5), c=3, w=2)
print("K5 outerplanar density", value, "on", witness)

# density alone only gives 2 for K7
k7 = gen_complete(7)
print("K7: outerplanar density", lemma1_value(k7), "rounds up to", math.ceil(lemma1_value(k7)))
# knowing pn(K7) = 4 forces at least 4 pages, which pushes it to 3
print("K7: refined bound with pn >= 4:", refined_local_bound(k7, 4))

# larger graphs switch from subset listing to parametric min cut
t5 = gen_stacked_triangulation(5)
print("T_5:", t5.n, "vertices, mad", mad(t5), "arboricity", nash_williams(t5))

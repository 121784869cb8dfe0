"""Matlis duality on single-parameter modules.

Free modules and injective hulls of k are exchanged by duality; the flat
cover of a module is read off the injective hull of its dual.
"""

from flange import Box, F2, FLAT, INJECTIVE, Summand, flat_cover, injective_hull, matlis_dual, standard_module
from flange.functors import top_table

box = Box((-3,), (3,))

# R = k[0, +inf) and E(k) = k(-inf, 0] as indicator modules on a window
R = standard_module(Summand(FLAT, (), (0,)), box, F2)
E = standard_module(Summand(INJECTIVE, (), (0,)), box, F2)
print("R    dims on", box.low, "..", box.high, ":", R.dims.tolist())
print("E(k) dims on", box.low, "..", box.high, ":", E.dims.tolist())

# the dual of R is E(k), as raw grid data and not just up to isomorphism
print("dual(R) == E(k):", matlis_dual(R) == E)

# shifting the generator shifts the dual the other way
R2 = standard_module(Summand(FLAT, (), (2,)), box, F2)
E2 = standard_module(Summand(INJECTIVE, (), (-2,)), box, F2)
print("dual(R(-2)) == E(k)(2):", matlis_dual(R2) == E2)

# injective hull of R: the whole line k[Z] (the socle of R lives on the face {1})
hull, phi = injective_hull(R)
print("hull of R:", [(s.kind, s.sigma, s.a) for s in hull.summands])

# flat cover of E(k): also the whole line; computed as the dual of a hull
cover, f = flat_cover(E)
print("cover of E(k):", [(s.kind, s.sigma, s.a) for s in cover.summands])
print("top table of E(k):", dict(top_table(E)))

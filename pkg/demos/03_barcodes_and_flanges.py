"""Single-parameter barcodes against flange presentations.

A bar [b, d) is born where a free summand R(-b) starts and dies where an
injective summand k(-inf, d-1] ends, so the flat cover lists left ends and
the injective hull lists right ends.  The barcode here is computed from
ranks alone and shares no code with the hull/cover machinery.
"""

import math

from flange import Box, F2, Summand, INJECTIVE, direct_sum, flange_presentation, rectangle_module, standard_module
from flange.oracle import GenParams, barcode_1d, flange_matches_barcode, random_module

box = Box((-1,), (4,))
M, _, _ = direct_sum([
    rectangle_module((0,), (2,), box, F2),          # k[0, 3)
    rectangle_module((1,), (math.inf,), box, F2),   # k[1, +inf)
    standard_module(Summand(INJECTIVE, (), (0,)), box, F2),  # k(-inf, 1)
])

print("bars:", sorted(barcode_1d(M).items()))
fp = flange_presentation(M)
print("cover:", sorted((s.sigma, s.a) for s in fp.cover.summands))
print("hull: ", sorted((s.sigma, s.a) for s in fp.hull.summands))
print(flange_matches_barcode(M))

# the same check over a batch of random modules
ok = sum(flange_matches_barcode(random_module(GenParams(n=1, width=5, seed=s))).ok for s in range(50))
print(f"random modules matching: {ok}/50")

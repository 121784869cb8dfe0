"""A two-parameter module from a presentation file, end to end.

The module has generators at (0, 0) and (1, 1) with two relations.  We
compute its flat cover and injective hull, their multiplicity tables, and
check the Soc/Top duality under Matlis duality.  The same numbers are
available from the command line, e.g.

    flange cover --input module.pmod
    flange injres --input module.pmod --box-pad 2
"""

from flange import matlis_dual, soc_table, top_table
from flange.pdio import parse_presentation, realize_presentation, serialize_grid
from flange.resolve import flange_presentation, minimal_injective_resolution

TEXT = """\
pmod 2 2
gens 2
0 0
1 1
rels 2
2 0  1 0   # x^2 kills the first generator
2 2  1 1   # and x^2 y^2 g1 = x y g2
"""

P = parse_presentation(TEXT)
M = realize_presentation(P)
print(M)
print(M.dims.T[::-1])  # rows run from the top y value down, x increases to the right

fp = flange_presentation(M)
print("flat cover:     ", sorted((s.sigma, s.a) for s in fp.cover.summands))
print("injective hull: ", sorted((s.sigma, s.a) for s in fp.hull.summands))
print("top table:", dict(top_table(M)))
print("soc table:", dict(soc_table(M)))

# socle multiplicities of M are top multiplicities of its dual at negated degrees
print("Soc(M) = Top(M^v) negated:", soc_table(M) == top_table(matlis_dual(M)).negated())

res = minimal_injective_resolution(M)
print("injective resolution ranks:", res.ranks())

# grid JSON is the interchange format for modules that have no presentation
print(serialize_grid(matlis_dual(M))[:120], "...")

"""Cohomology dimensions from minimal resolutions, and prime-avoidance pairs."""

from permcx import (ElemAbGroup, all_subgroups, cohomology_dims, find_avoidance_pair, make_permutation,
                    minimal_free_resolution, verify_avoidance_pair)
from permcx.gmod import make_trivial
from permcx.groups import subgroup_from_generators

for p, r in [(2, 2), (3, 2), (2, 3)]:
    G = ElemAbGroup(p, r)
    res = minimal_free_resolution(make_trivial(G, G.prime_field), 6)
    print(f"{G!r}: Betti numbers of k = {res.ranks}")

# H^*(G, k[G/E]) has the dimensions of H^*(E, k).
G = ElemAbGroup(3, 2)
print()
for E in all_subgroups(G):
    print(f"  E = {E!r:12s} rank {E.rank}: dim H^j(G, k[G/E]) = {cohomology_dims(make_permutation(E, G.prime_field), 5)}")

# Products of linear forms vanishing on Hdoubleprime and regular on each member of Hprime.
G = ElemAbGroup(2, 3)
sg = lambda *gens: subgroup_from_generators(G, gens)
Hp = [sg((1, 0, 0), (0, 1, 0)), sg((0, 1, 0), (0, 0, 1))]
Hd = [sg((1, 1, 1))]
pair = find_avoidance_pair(Hp, Hd)
print(f"\nu = {pair.u}, v = {pair.v} over {pair.field_used!r}")
print(f"verified: {verify_avoidance_pair(pair.u, pair.v, Hp, Hd).ok}")

# When F_2 runs out of forms, the search moves to F_4.
Hd = [sg((0, 0, 1)), sg((1, 0, 1)), sg((1, 1, 1))]
pair = find_avoidance_pair([G.whole()], Hd)
print(f"u = {pair.u}\nv = {pair.v}\nover {pair.field_used!r}")

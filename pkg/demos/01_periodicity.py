"""Exact but not contractible: the periodicity complex and its induced copies.

Run with ``python3 demos/01_periodicity.py``.
"""

from permcx import ElemAbGroup, chain_pair_counterexample, is_contractible, is_exact, periodicity_complex
from permcx.groups import subgroup_from_generators

# Over C_p: 0 -> k -> kC_p -> kC_p -> k -> 0 with norm, g - 1, augmentation.
for p in (2, 3, 5):
    C = periodicity_complex(p)
    print(f"C_{p}: dims {C.dims}, exact={is_exact(C).exact}, contractible={is_contractible(C).contractible}")

# The differential g - 1 over C_3, in the group-element basis.
print("\ng - 1 over F_3:")
print(periodicity_complex(3).differentials[1].tolist())

# Any E < F of index p in G gives such a complex with terms k[G/F], k[G/E], k[G/E], k[G/F].
G = ElemAbGroup(3, 2)
E = G.trivial_subgroup()
F = subgroup_from_generators(G, [(1, 2)])
rep = chain_pair_counterexample(G, E, F)
print(f"\n{G!r}, E = {E!r}, F = {F!r}")
print(f"  dims {rep.complex.dims}, exact={rep.exact}, contractible={rep.contractible}, certified={rep.certified}")
for i, M in enumerate(rep.complex.terms):
    print(f"  C^{i}: " + ", ".join(t.describe() for t in M.tags))

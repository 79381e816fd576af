"""The chain condition, seen from both sides.

Collections without index-p containments only admit contractible exact
complexes in Add; each violating pair yields a certified counterexample.
"""

from collections import Counter

from permcx import ElemAbGroup, all_subgroups, check_chain_condition, check_theorem31, necessity_report, random_addS_complex

G = ElemAbGroup(2, 2)
H = [G.trivial_subgroup(), G.whole()]
print(f"H = {{1, G}} in {G!r}: chain condition ok = {check_chain_condition(H).ok}")

verdicts = Counter()
for seed in range(30):
    C = random_addS_complex(H, 2, None, seed=seed)
    rep = check_theorem31(H, C)
    verdicts[(rep.verdict, rep.exact, rep.contractible)] += 1
for (verdict, exact, contractible), n in sorted(verdicts.items()):
    print(f"  {n:3d} random complexes: exact={exact} contractible={contractible} -> {verdict}")

# All subgroups of C_2^3: every index-2 containment is a violation.
G = ElemAbGroup(2, 3)
reports = necessity_report(all_subgroups(G))
print(f"\nall subgroups of {G!r}: {len(reports)} violating pairs")
by_dims = Counter(tuple(r.complex.dims) for r in reports)
for dims, n in sorted(by_dims.items()):
    print(f"  {n:3d} counterexamples with dims {list(dims)}")
print(f"  all certified: {all(r.certified for r in reports)}")

import pytest

from permcx import counterexamples
from permcx.complexes import is_contractible, is_exact, validate
from permcx.counterexamples import chain_pair_counterexample, necessity_report, periodicity_complex
from permcx.exactla import GF, Matrix
from permcx.groups import ElemAbGroup, all_subgroups, subgroup_from_generators

G22 = ElemAbGroup(2, 2)


def test_periodicity_p2():
    C = periodicity_complex(2)
    assert C.dims == [1, 2, 2, 1]
    assert C.differentials[1] == Matrix(GF(2), [[1, 1], [1, 1]])
    assert is_exact(C).exact and not is_contractible(C).contractible


def test_periodicity_p3():
    C = periodicity_complex(3)
    assert C.dims == [1, 3, 3, 1]
    d1 = C.differentials[1]
    assert (d1 @ d1).rank() == 1
    assert is_exact(C).exact


@pytest.mark.parametrize("p", [2, 3, 5])
def test_norm_killed_by_g_minus_one(p):
    C = periodicity_complex(p)
    assert (C.differentials[1] @ C.differentials[0]).is_zero()
    assert validate(C) == []


def test_periodicity_over_extension_field():
    C = periodicity_complex(2, GF(2, 2))
    assert is_exact(C).exact and not is_contractible(C).contractible


@pytest.mark.parametrize("G,E,F,dims", [
    (G22, [], [(1, 0)], [2, 4, 4, 2]),
    (G22, [(1, 0)], [(1, 0), (0, 1)], [1, 2, 2, 1]),
    (ElemAbGroup(3, 2), [], [(1, 0)], [3, 9, 9, 3]),
])
def test_chain_pair_examples(G, E, F, dims):
    E, F = subgroup_from_generators(G, E), subgroup_from_generators(G, F)
    rep = chain_pair_counterexample(G, E, F)
    assert rep.complex.dims == dims
    assert rep.exact and not rep.contractible and rep.certified and rep.member
    assert {t.summand_subgroup(G) for M in rep.complex.terms for t in M.tags} == {E, F}


def test_chain_pair_rejects_wrong_index():
    with pytest.raises(ValueError):
        chain_pair_counterexample(G22, G22.trivial_subgroup(), G22.whole())


def test_necessity_examples():
    assert necessity_report([G22.trivial_subgroup(), G22.whole()]) == []
    L = subgroup_from_generators(G22, [(0, 1)])
    reps = necessity_report([G22.trivial_subgroup(), L, G22.whole()])
    assert [r.violating_pair for r in reps] == [(G22.trivial_subgroup(), L), (L, G22.whole())]
    reps = necessity_report(all_subgroups(G22))
    assert len(reps) == 6 and all(r.certified for r in reps)


def test_sabotaged_differential_breaks_certification(monkeypatch):
    from permcx.exactla import Matrix as M

    monkeypatch.setattr(counterexamples, "_mult_by_g_minus_one", lambda A: A + M.identity(A.field, A.rows))
    C = periodicity_complex(3)
    assert validate(C) or not is_exact(C).exact

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permcx import complexes as cx
from permcx.complexes import (BoundedComplex, SplittingError, check_theorem31, identity_complex, induce_complex,
                              is_contractible, is_exact, random_addS_complex, restrict_complex, shift,
                              split_via_rank_two_subgroup, validate, zero_complex)
from permcx.counterexamples import periodicity_complex
from permcx.exactla import GF, Matrix
from permcx.gmod import direct_sum, make_free, make_permutation, make_trivial
from permcx.groups import ElemAbGroup, subgroup_from_generators

G22 = ElemAbGroup(2, 2)
F2 = GF(2)


def test_validate_examples():
    assert validate(zero_complex(G22, F2)) == []
    assert validate(identity_complex(make_free(G22, F2))) == []


def test_validate_names_non_equivariant_generator():
    k, kG = make_trivial(G22, F2), make_free(G22, F2)
    d = Matrix(F2, [[1], [1], [0], [0]])  # e_00 + e_01 is fixed by g_2 only
    (v,) = validate(BoundedComplex((k, kG), (d,)))
    assert v.kind == "equivariance" and v.generator == 0
    assert "g_1" in str(v)


def test_validate_detects_nonzero_composite():
    k = make_trivial(G22, F2)
    one = Matrix.identity(F2, 1)
    (v,) = validate(BoundedComplex((k, k, k), (one, one)))
    assert "d^1 d^0" in str(v)


def test_exactness_examples():
    rep = is_exact(periodicity_complex(2))
    assert rep.exact and rep.homology_dims == [0, 0, 0, 0]
    rep = is_exact(BoundedComplex((make_trivial(G22, F2),), ()))
    assert not rep.exact and rep.homology_dims == [1]
    assert is_exact(identity_complex(make_free(G22, F2))).exact


def test_contractibility_examples():
    M = make_permutation(subgroup_from_generators(G22, [(1, 1)]), F2)
    rep = is_contractible(identity_complex(M))
    assert rep.contractible and rep.certificate.maps == (M.identity(),)
    for p in (2, 3):
        rep = is_contractible(periodicity_complex(p))
        assert not rep.contractible and rep.certificate is None
    C = random_addS_complex([G22.trivial_subgroup(), G22.whole()], 2, 1, seed=3)
    doubled = cx.direct_sum(C, C)
    rep = is_contractible(doubled)
    assert rep.contractible and not rep.certificate.failures(doubled)


def test_empty_and_zero_length_complexes():
    assert is_contractible(zero_complex(G22, F2)).contractible
    assert not is_contractible(BoundedComplex((make_trivial(G22, F2),), ())).contractible
    assert is_contractible(BoundedComplex((make_trivial(G22, F2, 0),), ())).contractible


def test_operations():
    per = periodicity_complex(2)
    induced = induce_complex(per, [(1, 0)], G22)
    assert induced.dims == [2, 4, 4, 2] and is_exact(induced).exact
    C = random_addS_complex([G22.trivial_subgroup(), G22.whole()], 2, 1, seed=0)
    assert restrict_complex(C, G22.whole()) == C
    k = BoundedComplex((make_trivial(G22, F2),), ())
    assert is_exact(shift(k, 1)).homology_dims == [0, 1]


def test_theorem_check_examples():
    H = [G22.trivial_subgroup(), G22.whole()]
    C = cx.direct_sum(identity_complex(make_free(G22, F2)), identity_complex(make_trivial(G22, F2)))
    rep = check_theorem31(H, C)
    assert rep.exact and rep.contractible and rep.verdict == cx.CONSISTENT

    C2 = ElemAbGroup(2, 1)
    rep = check_theorem31([C2.trivial_subgroup(), C2.whole()], periodicity_complex(2))
    assert not rep.condition and rep.exact and not rep.contractible
    assert rep.verdict == cx.CONSISTENT and rep.reason.startswith("hypothesis void")
    assert rep.violations == [(C2.trivial_subgroup(), C2.whole())]


def test_theorem_check_untagged_is_inconclusive():
    C = identity_complex(make_free(G22, F2).untagged())
    assert check_theorem31([G22.trivial_subgroup()], C).verdict == cx.INCONCLUSIVE


def test_theorem_check_flags_a_hypothetical_violation():
    # exact, non-contractible, in Add(k, kG) over C_2 with the chain condition
    # forced true by lying about the collection: the report must say VIOLATION
    C2 = ElemAbGroup(2, 1)
    per = periodicity_complex(2)
    orig = cx.check_chain_condition
    try:
        cx.check_chain_condition = lambda H: orig([])
        rep = check_theorem31([C2.trivial_subgroup(), C2.whole()], per)
    finally:
        cx.check_chain_condition = orig
    assert rep.verdict == cx.VIOLATION


def test_split_trivial_identity():
    k = make_trivial(G22, F2)
    psi = split_via_rank_two_subgroup(identity_complex(k), G22.whole())
    assert psi.matrix == Matrix.identity(F2, 1)


def test_split_through_free_and_trivial():
    kG, k = make_free(G22, F2), make_trivial(G22, F2)
    middle = direct_sum([kG, k])
    d0 = Matrix(F2, np.vstack([np.eye(4, dtype=np.int64), np.ones((1, 4), dtype=np.int64)]))
    d1 = Matrix(F2, np.ones((1, 5), dtype=np.int64))
    C = BoundedComplex((kG, middle, k), (d0, d1))
    assert validate(C) == []
    psi = split_via_rank_two_subgroup(C, G22.whole())
    assert psi.matrix == Matrix(F2, [[0], [0], [0], [0], [1]])
    assert d1 @ psi.matrix == Matrix.identity(F2, 1)


def test_split_rejects_free_terminal_term():
    with pytest.raises(SplittingError, match="terminal term must be a sum of trivial modules"):
        split_via_rank_two_subgroup(identity_complex(make_free(G22, F2)), G22.whole())


def test_random_complex_examples():
    H = [G22.trivial_subgroup(), G22.whole()]
    Z = random_addS_complex(H, 2, 0, seed=1)
    assert all(d == 0 for d in Z.dims)
    a = json.dumps(random_addS_complex(H, 2, None, seed=42).to_json(), sort_keys=True)
    b = json.dumps(random_addS_complex(H, 2, None, seed=42).to_json(), sort_keys=True)
    assert a == b


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3)]), st.integers(1, 3), st.integers(0, 10**6))
def test_random_complexes_are_exact_and_contractible(pr, length, seed):
    G = ElemAbGroup(*pr)
    H = [G.trivial_subgroup(), subgroup_from_generators(G, [G.generators()[0]]), G.whole()]
    C = random_addS_complex(H, length, None, seed=seed)
    assert validate(C) == []
    assert is_exact(C).exact
    rep = is_contractible(C)
    assert rep.contractible and not rep.certificate.failures(C)


@pytest.mark.parametrize("e", [1, 2])
def test_complex_json_round_trip(e):
    H = [G22.trivial_subgroup(), G22.whole()]
    C = random_addS_complex(H, 2, 1, seed=5, field=GF(2, e))
    back = BoundedComplex.from_json(json.loads(json.dumps(C.to_json())))
    assert back == C
    Z = zero_complex(G22, F2)
    assert BoundedComplex.from_json(Z.to_json()) == Z

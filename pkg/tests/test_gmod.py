import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import double_coset_hom_dim
from permcx.exactla import GF, Matrix
from permcx.gmod import (EquivariantMap, GModule, direct_sum, fixed_points, hom_basis_array, hom_space, induce,
                         inflate, make_free, make_permutation, make_trivial, radical, recognize_permutation_module,
                         restrict, subspace_contains, verify_tags)
from permcx.groups import ElemAbGroup, all_subgroups, subgroup_from_generators

G22 = ElemAbGroup(2, 2)
F2 = GF(2)


def line(G, v):
    return subgroup_from_generators(G, [v])


# -- constructors ----------------------------------------------------------

def test_make_trivial_examples():
    assert make_trivial(G22, F2, 1).action == (Matrix.identity(F2, 1),) * 2
    assert make_trivial(G22, F2, 0).dim == 0
    M = make_trivial(G22, F2, 3)
    assert M.dim == 3 and all(A == Matrix.identity(F2, 3) for A in M.action)


def test_make_permutation_examples():
    assert make_permutation(G22.whole(), F2).dim == 1
    kG = make_permutation(G22.trivial_subgroup(), F2)
    assert kG.dim == 4
    for A in kG.action:
        assert A @ A == kG.identity() and not np.diag(A.a).any()
    M = make_permutation(line(G22, (1, 0)), F2)
    assert M.action == (Matrix.identity(F2, 2), Matrix(F2, [[0, 1], [1, 0]]))


def test_direct_sum_examples():
    assert direct_sum([make_trivial(G22, F2, 0)] * 2).dim == 0
    M = direct_sum([make_trivial(G22, F2), make_free(G22, F2)])
    assert M.dim == 5
    assert [(t.kind, t.start, t.stop) for t in M.tags] == [("trivial", 0, 1), ("free", 1, 5)]
    two_lines = direct_sum([make_permutation(line(G22, (1, 0)), F2), make_permutation(line(G22, (0, 1)), F2)])
    assert two_lines.dim == 4 and two_lines.tags_verified


def test_invariant_violations_are_named():
    A = Matrix(F2, [[1, 1], [0, 1]])
    B = Matrix(F2, [[1, 0], [1, 1]])
    with pytest.raises(ValueError, match="commutativity"):
        GModule(G22, F2, 2, (A, B))
    with pytest.raises(ValueError, match="unipotence"):
        GModule(ElemAbGroup(3, 1), GF(3), 1, (Matrix(GF(3), [[2]]),))


def test_bad_tags_fail_verification():
    M = make_permutation(line(G22, (1, 0)), F2)
    wrong = M.with_tags(make_permutation(line(G22, (0, 1)), F2).tags)
    assert verify_tags(wrong) and not wrong.tags_verified
    assert not verify_tags(M)


# -- hom spaces -------------------------------------------------------------

def test_hom_examples():
    k, kG = make_trivial(G22, F2), make_free(G22, F2)
    maps = hom_space(k, kG)
    assert len(maps) == 1 and maps[0].matrix.T == fixed_points(kG)
    M = make_permutation(line(G22, (1, 1)), F2)
    assert len(hom_space(kG, M)) == M.dim
    E = line(G22, (1, 0))
    assert len(hom_space(make_permutation(E, F2), make_permutation(E, F2))) == 2


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_hom_dims_match_double_cosets(p, r):
    G = ElemAbGroup(p, r)
    f = G.prime_field
    subs = all_subgroups(G)
    for E in subs:
        for F in subs:
            assert hom_basis_array(make_permutation(E, f), make_permutation(F, f)).shape[0] == double_coset_hom_dim(E, F)


def _random_tagged(G, f, rng, n):
    subs = all_subgroups(G)
    picks = rng.integers(0, len(subs), size=n)
    return direct_sum([make_permutation(subs[i], f) for i in sorted(picks)], group=G, field=f)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3)]), st.integers(0, 10**6))
def test_blockwise_hom_equals_direct_solve(pr, seed):
    G = ElemAbGroup(*pr)
    f = G.prime_field
    rng = np.random.default_rng(seed)
    M, N = _random_tagged(G, f, rng, 2), _random_tagged(G, f, rng, 2)
    assert M.tags_verified and N.tags_verified
    assert np.array_equal(hom_basis_array(M, N), hom_basis_array(M.untagged(), N.untagged()))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2)]), st.integers(0, 10**6))
def test_hom_basis_maps_are_equivariant(pr, seed):
    G = ElemAbGroup(*pr)
    f = G.prime_field
    rng = np.random.default_rng(seed)
    M, N = _random_tagged(G, f, rng, 2), _random_tagged(G, f, rng, 1)
    for phi in hom_space(M, N):
        assert not EquivariantMap(M, N, phi.matrix).equivariance_failures()


# -- fixed points and radical ----------------------------------------------

def test_fixed_point_and_radical_examples():
    kG = make_free(G22, F2)
    assert fixed_points(make_trivial(G22, F2, 3)).rows == 3
    assert fixed_points(kG) == Matrix(F2, [[1, 1, 1, 1]])
    assert fixed_points(make_permutation(line(G22, (1, 0)), F2)).rows == 1
    assert radical(make_trivial(G22, F2)).rows == 0
    assert radical(kG).rows == 3
    assert radical(make_free(G22, F2, 2)).rows == 6


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_free_fixed_points_lie_in_radical_of_restriction(p, r):
    # for E of rank >= 1, the E-fixed points of kG lie in rad kG
    G = ElemAbGroup(p, r)
    kG = make_free(G, G.prime_field)
    for E in all_subgroups(G):
        if E.rank:
            assert subspace_contains(radical(kG), fixed_points(restrict(kG, E)))


# -- functors ----------------------------------------------------------------

def test_restrict_examples():
    M = make_permutation(line(G22, (1, 0)), F2)
    assert restrict(M, G22.whole()) is M
    R = restrict(make_free(G22, F2), line(G22, (1, 0)))
    (A,) = R.action
    assert not np.diag(A.a).any() and A @ A == R.identity()
    assert restrict(make_trivial(G22, F2, 2), line(G22, (1, 1))).tags_verified


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_induce_trivial_is_make_permutation(p, r):
    G = ElemAbGroup(p, r)
    f = G.prime_field
    for H in all_subgroups(G):
        k_H = make_trivial(ElemAbGroup(p, H.rank), f)
        induced = induce(k_H, list(H.basis), G)
        canon = make_permutation(H, f)
        assert induced.action == canon.action and induced.tags == canon.tags


def test_induce_free_and_identity():
    f = GF(3)
    G = ElemAbGroup(3, 2)
    H = line(G, (1, 1))
    free_H = make_free(ElemAbGroup(3, 1), f)
    induced = induce(free_H, list(H.basis), G)
    assert induced.dim == 9 and recognize_permutation_module(induced).subgroup == G.trivial_subgroup()
    M = make_permutation(line(G, (0, 1)), f)
    assert induce(M, G.generators(), G).action == M.action


def test_inflate_examples():
    G = ElemAbGroup(3, 2)
    f = G.prime_field
    C3 = ElemAbGroup(3, 1)
    assert inflate(make_trivial(C3, f), [(1,), (0,)], G).tags_verified
    M = inflate(make_free(C3, f), [(1,), (0,)], G)
    assert M.action == make_permutation(line(G, (0, 1)), f).action
    N = make_permutation(line(G, (1, 0)), f)
    assert inflate(N, [(1, 0), (0, 1)], G).action == N.action


def test_inflate_rejects_non_surjective():
    with pytest.raises(ValueError, match="surjective"):
        inflate(make_free(ElemAbGroup(2, 1), F2), [(0,), (0,)], G22)


def test_recognize_conjugated_permutation_module():
    G = ElemAbGroup(3, 2)
    f = G.prime_field
    E = line(G, (1, 2))
    M = make_permutation(E, f)
    perm = Matrix(f, np.eye(3, dtype=np.int64)[[2, 0, 1]])
    scrambled = GModule(G, f, 3, tuple(perm @ A @ perm.inverse() for A in M.action))
    iso = recognize_permutation_module(scrambled)
    assert iso.subgroup == E
    assert all(iso.matrix @ A @ iso.matrix.inverse() == B for A, B in zip(scrambled.action, M.action))
    assert recognize_permutation_module(direct_sum([make_trivial(G, f, 2)])) is None


@pytest.mark.parametrize("e", [1, 2])
def test_module_json_round_trip(e):
    G = ElemAbGroup(2, 2)
    f = GF(2, e)
    M = direct_sum([make_trivial(G, f), make_permutation(line(G, (1, 1)), f)])
    assert GModule.from_json(M.to_json()) == M
    Z = make_trivial(G, f, 0)
    assert GModule.from_json(Z.to_json()) == Z

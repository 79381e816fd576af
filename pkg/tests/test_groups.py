from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_subgroups
from permcx.groups import (ElemAbGroup, Subgroup, SubgroupCollection, all_subgroups, check_chain_condition,
                           coset_reps, lattice_ops, parse_group, subgroup_from_generators)

G22 = ElemAbGroup(2, 2)


def line(G, v):
    return subgroup_from_generators(G, [v])


def test_subgroup_from_generators_examples():
    assert subgroup_from_generators(G22, [(1, 0), (1, 0)]).basis == ((1, 0),)
    assert subgroup_from_generators(G22, []).rank == 0
    assert subgroup_from_generators(G22, [(1, 1), (1, 0)]) == G22.whole()


def test_noncanonical_basis_rejected():
    with pytest.raises(ValueError):
        Subgroup(G22, ((1, 1), (1, 0)))


def test_lattice_ops_examples():
    E = line(G22, (1, 0))
    rel = lattice_ops(E, G22.whole())
    assert rel.contains and rel.index == 2
    rel = lattice_ops(E, line(G22, (0, 1)))
    assert rel.intersection.rank == 0 and rel.sum == G22.whole()
    rel = lattice_ops(E, E)
    assert rel.contains and rel.index == 1


def test_coset_reps_examples():
    assert coset_reps(G22.whole()) == [(0, 0)]
    assert coset_reps(G22.trivial_subgroup()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert coset_reps(line(G22, (1, 0))) == [(0, 0), (0, 1)]


def test_subgroup_counts():
    assert len(all_subgroups(G22, rank=1)) == 3
    assert len(all_subgroups(ElemAbGroup(3, 2), rank=1)) == 4
    for p, r in [(2, 2), (3, 3)]:
        assert list(all_subgroups(ElemAbGroup(p, r), rank=0)) == [ElemAbGroup(p, r).trivial_subgroup()]


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2)])
def test_all_subgroups_matches_closure_oracle(p, r):
    G = ElemAbGroup(p, r)
    ours = {frozenset(E.elements()) for E in all_subgroups(G)}
    assert ours == brute_subgroups(p, r)
    assert len(all_subgroups(G)) == len(ours)


def test_chain_condition_examples():
    assert check_chain_condition([G22.trivial_subgroup(), G22.whole()]).ok
    E = line(G22, (1, 0))
    chain = check_chain_condition([E, G22.whole()])
    assert not chain.ok and chain.violations == [(E, G22.whole())]
    assert check_chain_condition(all_subgroups(G22, rank=1)).ok


@settings(max_examples=40)
@given(st.sampled_from([(2, 3), (3, 2), (5, 2)]), st.data())
def test_cosets_partition_group(pr, data):
    G = ElemAbGroup(*pr)
    gens = data.draw(st.lists(st.tuples(*[st.integers(0, G.p - 1)] * G.r), max_size=3))
    E = subgroup_from_generators(G, gens)
    reps = coset_reps(E)
    assert len(reps) == E.index and reps == sorted(reps)
    seen = set()
    for rep in reps:
        coset = {G.add(rep, e) for e in E.elements()}
        assert min(coset) == rep
        assert not coset & seen
        seen |= coset
    assert seen == set(G.elements())
    for v in G.elements():
        assert E.reduce(v) in reps


@settings(max_examples=40)
@given(st.data())
def test_lattice_dimension_formula(data):
    G = ElemAbGroup(3, 3)
    vec = st.tuples(*[st.integers(0, 2)] * 3)
    E = subgroup_from_generators(G, data.draw(st.lists(vec, max_size=3)))
    F = subgroup_from_generators(G, data.draw(st.lists(vec, max_size=3)))
    rel = lattice_ops(E, F)
    assert rel.sum.rank + rel.intersection.rank == E.rank + F.rank
    assert set(rel.intersection.elements()) == set(E.elements()) & set(F.elements())
    assert rel.contains == (set(E.elements()) <= set(F.elements()))


@settings(max_examples=40)
@given(st.data())
def test_subgroup_canonical_form_is_generator_independent(data):
    G = ElemAbGroup(3, 3)
    vec = st.tuples(*[st.integers(0, 2)] * 3)
    gens = data.draw(st.lists(vec, min_size=1, max_size=3))
    i, j = data.draw(st.integers(0, len(gens) - 1)), data.draw(st.integers(0, len(gens) - 1))
    c = data.draw(st.integers(1, 2))
    moved = list(gens)
    if i != j:
        moved[i] = G.add(moved[i], tuple(c * x for x in moved[j]))
    moved.reverse()
    assert subgroup_from_generators(G, moved) == subgroup_from_generators(G, gens)


def test_collection_rejects_duplicates_and_mixed_groups():
    E = line(G22, (1, 0))
    with pytest.raises(ValueError):
        SubgroupCollection([E, E])
    with pytest.raises(ValueError):
        SubgroupCollection([E, ElemAbGroup(2, 3).whole()])


def test_json_round_trip_and_parse():
    G = parse_group("p=3,r=2")
    assert G == ElemAbGroup(3, 2)
    H = all_subgroups(G)
    assert SubgroupCollection.from_json(H.to_json()) == H
    with pytest.raises(ValueError):
        parse_group("q=3")


def test_enumeration_bound():
    with pytest.raises(ValueError):
        all_subgroups(ElemAbGroup(3, 5))


def test_elements_in_lex_order():
    G = ElemAbGroup(3, 2)
    assert G.elements() == list(product(range(3), repeat=2))

"""Exact, non-contractible complexes built from the periodicity complex.

Over C_p the sequence ``0 -> k -> kC_p -> kC_p -> k -> 0`` (norm,
multiplication by g - 1, augmentation) is exact but does not split.
Inflating it along F -> F/E ~ C_p and inducing from F to G gives such a
complex with terms k[G/F], k[G/E], k[G/E], k[G/F] whenever [F:E] = p.
Every complex produced here is re-certified by the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complexes import BoundedComplex, conjugate, induce_complex, inflate_complex, is_contractible, is_exact, membership, validate
from .exactla import Field, Matrix
from .gmod import make_free, make_tag, make_trivial, recognize_permutation_module
from .groups import ElemAbGroup, Subgroup, check_chain_condition, lattice_ops


def _mult_by_g_minus_one(A: Matrix) -> Matrix:
    return A - Matrix.identity(A.field, A.rows)


def periodicity_complex(p: int, field: Field | None = None) -> BoundedComplex:
    """0 -> k -> kC_p -> kC_p -> k -> 0 over C_p, group-element basis."""
    G = ElemAbGroup(p, 1)
    field = field or G.prime_field
    if field.p != p:
        raise ValueError(f"field {field} does not have characteristic {p}")
    k = make_trivial(G, field, 1)
    kG = make_free(G, field, 1)
    norm = Matrix(field, np.ones((p, 1), dtype=np.int64))
    augmentation = Matrix(field, np.ones((1, p), dtype=np.int64))
    return BoundedComplex((k, kG, kG, k), (norm, _mult_by_g_minus_one(kG.action[0]), augmentation))


def quotient_to_cyclic(E: Subgroup, F: Subgroup) -> list[tuple[int]]:
    """F -> F/E ~ C_p on F's canonical basis, as a rank(F) x 1 matrix.

    E's basis is completed to a basis of F by the first canonical basis
    vector of F outside E; the map reads off that vector's coordinate.
    """
    G = F.group
    f = G.prime_field
    completion = next(b for b in F.basis if not E.contains(b))
    new_basis = Matrix(f, list(E.basis) + [completion])
    out = []
    for b in F.basis:
        coeffs = new_basis.T.solve(Matrix(f, [[x] for x in b]))
        out.append((int(coeffs.a[-1, 0]),))
    return out


def canonicalize_permutation_terms(C: BoundedComplex) -> BoundedComplex:
    """Rebase each transitive permutation-module term onto its coset basis."""
    terms, isos = [], []
    for M in C.terms:
        iso = recognize_permutation_module(M)
        if iso is None:
            raise ValueError(f"term {M!r} is not a transitive permutation module")
        tagged = M.with_tags((make_tag(M.group, iso.subgroup, 1, 0),))
        canon = type(M)(M.group, M.field, M.dim, tuple(iso.matrix @ A @ iso.matrix.inverse() for A in M.action), tagged.tags)
        terms.append(canon)
        isos.append(iso.matrix)
    return conjugate(C, isos, terms)


@dataclass
class CounterexampleReport:
    violating_pair: tuple[Subgroup, Subgroup]
    complex: BoundedComplex
    exact: bool
    contractible: bool
    member: bool | None = None

    @property
    def certified(self) -> bool:
        return self.exact and not self.contractible and not validate(self.complex)

    def to_json(self, include_complex: bool = True) -> dict:
        out = {
            "pair": [self.violating_pair[0].to_json(), self.violating_pair[1].to_json()],
            "dims": self.complex.dims,
            "exact": self.exact,
            "contractible": self.contractible,
            "membership": self.member,
            "certified": self.certified,
        }
        if include_complex:
            out["complex"] = self.complex.to_json()
        return out


def chain_pair_counterexample(G: ElemAbGroup, E: Subgroup, F: Subgroup, field: Field | None = None) -> CounterexampleReport:
    field = field or G.prime_field
    if E.group != G or F.group != G:
        raise ValueError("subgroups must belong to G")
    rel = lattice_ops(E, F)
    if not rel.contains or rel.index != G.p:
        raise ValueError(f"need E <= F with index {G.p}; got contains={rel.contains}, index={rel.index}")
    per = periodicity_complex(G.p, field)
    F_as_group = ElemAbGroup(G.p, F.rank)
    inflated = inflate_complex(per, quotient_to_cyclic(E, F), F_as_group)
    induced = induce_complex(inflated, list(F.basis), G)
    C = canonicalize_permutation_terms(induced)
    problems = validate(C)
    if problems:
        raise AssertionError(f"constructed complex is invalid: {[str(v) for v in problems]}")
    return CounterexampleReport((E, F), C, is_exact(C).exact, is_contractible(C).contractible, membership(C, [E, F]))


def necessity_report(H: Sequence[Subgroup], field: Field | None = None) -> list[CounterexampleReport]:
    """A certified counterexample for every violating pair of H."""
    chain = check_chain_condition(H)
    return [chain_pair_counterexample(E.group, E, F, field) for E, F in chain.violations]

"""Elementary abelian p-groups C_p^r as vector spaces F_p^r.

Subgroups are subspaces stored by their reduced row echelon basis, so
two Subgroup objects are equal exactly when they are the same subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exactla import GF, Field, Matrix, is_prime

Vector = tuple[int, ...]

#: default cap on |G| for exhaustive subgroup enumeration
ENUMERATION_BOUND = 3**4


@dataclass(frozen=True)
class ElemAbGroup:
    p: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 0:
            raise ValueError(f"rank must be nonnegative, got {self.r}")

    def __repr__(self):
        return f"C_{self.p}^{self.r}"

    @property
    def order(self) -> int:
        return self.p**self.r

    @property
    def prime_field(self) -> Field:
        return GF(self.p)

    def elements(self) -> list[Vector]:
        """All of F_p^r in lexicographic order."""
        return list(product(range(self.p), repeat=self.r))

    def generators(self) -> list[Vector]:
        return [tuple(int(i == j) for j in range(self.r)) for i in range(self.r)]

    def element_index(self, v: Sequence[int]) -> int:
        idx = 0
        for x in v:
            idx = idx * self.p + (int(x) % self.p)
        return idx

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return tuple((a + b) % self.p for a, b in zip(u, v))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, ())

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.generators()))

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r}


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``group``; ``basis`` must already be canonical.

    Build subgroups with :func:`subgroup_from_generators`.
    """

    group: ElemAbGroup
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", basis)
        for row in basis:
            if len(row) != self.group.r:
                raise ValueError(f"basis vector {row} does not lie in F_{self.group.p}^{self.group.r}")
        if basis:
            m = Matrix(self.group.prime_field, basis)
            red, piv, rank = m.rref()
            if rank != len(basis) or red.tolist() != [list(b) for b in basis]:
                raise ValueError(f"basis {basis} is not in reduced row echelon form")

    def __repr__(self):
        if not self.basis:
            return "1"
        if self.rank == self.group.r:
            return f"{self.group!r}"
        gens = ",".join("".join(map(str, b)) for b in self.basis)
        return f"<{gens}>"

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.group.p**self.rank

    @property
    def index(self) -> int:
        return self.group.p ** (self.group.r - self.rank)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(b) if x) for b in self.basis)

    def basis_matrix(self) -> Matrix:
        f = self.group.prime_field
        if not self.basis:
            return Matrix.zeros(f, 0, self.group.r)
        return Matrix(f, self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Lexicographically smallest element of the coset ``v + self``."""
        p = self.group.p
        w = [int(x) % p for x in v]
        for b, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c:
                w = [(x - c * y) % p for x, y in zip(w, b)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of ``v`` (which must lie in self) on the canonical basis."""
        if not self.contains(v):
            raise ValueError(f"{tuple(v)} is not in {self!r}")
        return tuple(int(v[pc]) % self.group.p for pc in self.pivots)

    def elements(self) -> list[Vector]:
        out = []
        for coeffs in product(range(self.group.p), repeat=self.rank):
            v = [0] * self.group.r
            for c, b in zip(coeffs, self.basis):
                v = [(x + c * y) % self.group.p for x, y in zip(v, b)]
            out.append(tuple(v))
        return sorted(out)

    def __le__(self, other: "Subgroup") -> bool:
        return lattice_ops(self, other).contains

    def to_json(self) -> dict:
        return {"p": self.group.p, "r": self.group.r, "basis": [list(b) for b in self.basis]}

    @classmethod
    def from_json(cls, obj: dict, group: ElemAbGroup | None = None) -> "Subgroup":
        g = ElemAbGroup(int(obj["p"]), int(obj["r"]))
        if group is not None and group != g:
            raise ValueError(f"subgroup of {g!r} given where {group!r} expected")
        return subgroup_from_generators(g, obj.get("basis", []))


def subgroup_from_generators(group: ElemAbGroup, vectors: Iterable[Sequence[int]]) -> Subgroup:
    vectors = [list(v) for v in vectors]
    for v in vectors:
        if len(v) != group.r:
            raise ValueError(f"vector {v} has length {len(v)}, expected {group.r}")
    if not vectors:
        return Subgroup(group, ())
    m = Matrix(group.prime_field, vectors)
    return Subgroup(group, tuple(tuple(row) for row in m.row_space().tolist()))


class LatticeRelation(NamedTuple):
    contains: bool
    index: int | None
    sum: Subgroup
    intersection: Subgroup


def lattice_ops(E: Subgroup, F: Subgroup) -> LatticeRelation:
    """Containment E <= F, index [F:E] when contained, E + F and E n F."""
    if E.group != F.group:
        raise ValueError(f"subgroups of different groups {E.group!r}, {F.group!r}")
    G = E.group
    contains = all(F.contains(b) for b in E.basis)
    index = G.p ** (F.rank - E.rank) if contains else None
    total = subgroup_from_generators(G, list(E.basis) + list(F.basis))
    # x = sum a_i e_i = sum b_j f_j  <=>  (a, -b) in ker [E; F]^T
    if E.rank and F.rank:
        stacked = Matrix(G.prime_field, list(E.basis) + list(F.basis))
        ker = stacked.T.kernel()
        vecs = (ker[:, : E.rank] @ E.basis_matrix()).tolist() if ker.rows else []
        inter = subgroup_from_generators(G, vecs)
    else:
        inter = G.trivial_subgroup()
    return LatticeRelation(contains, index, total, inter)


def coset_reps(E: Subgroup) -> list[Vector]:
    """Lex-minimal representative of each coset of E, in lex order.

    The lex-minimal element of ``v + E`` is ``v`` reduced against E's
    echelon basis, i.e. the vector that is zero at every pivot column.
    """
    G = E.group
    free = [i for i in range(G.r) if i not in set(E.pivots)]
    reps = []
    for vals in product(range(G.p), repeat=len(free)):
        v = [0] * G.r
        for i, x in zip(free, vals):
            v[i] = x
        reps.append(tuple(v))
    return reps


def all_subgroups(group: ElemAbGroup, rank: int | None = None, bound: int = ENUMERATION_BOUND) -> "SubgroupCollection":
    """Every subgroup (optionally of one rank), ordered by rank then basis."""
    if group.order > bound:
        raise ValueError(f"|G| = {group.order} exceeds the enumeration bound {bound}")
    p, r = group.p, group.r
    ranks = range(r + 1) if rank is None else [rank]
    out = []
    for s in ranks:
        if not 0 <= s <= r:
            continue
        found = []
        for pivots in combinations(range(r), s):
            slots = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, r) if c not in pivots]
            for vals in product(range(p), repeat=len(slots)):
                rows = [[0] * r for _ in range(s)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, c), x in zip(slots, vals):
                    rows[i][c] = x
                found.append(tuple(tuple(row) for row in rows))
        out.extend(Subgroup(group, b) for b in sorted(found))
    return SubgroupCollection(out)


class SubgroupCollection(tuple):
    """Ordered tuple of distinct subgroups of one group."""

    def __new__(cls, subgroups: Iterable[Subgroup] = ()):
        subgroups = tuple(subgroups)
        seen = set()
        for E in subgroups:
            if not isinstance(E, Subgroup):
                raise TypeError(f"expected Subgroup, got {type(E).__name__}")
            if E in seen:
                raise ValueError(f"duplicate subgroup {E!r} in collection")
            seen.add(E)
        groups = {E.group for E in subgroups}
        if len(groups) > 1:
            raise ValueError(f"collection mixes groups {sorted(map(repr, groups))}")
        return super().__new__(cls, subgroups)

    @property
    def group(self) -> ElemAbGroup | None:
        return self[0].group if self else None

    def to_json(self) -> list:
        return [E.to_json() for E in self]

    @classmethod
    def from_json(cls, obj: list, group: ElemAbGroup | None = None) -> "SubgroupCollection":
        return cls(Subgroup.from_json(x, group) for x in obj)


class ChainCheck(NamedTuple):
    ok: bool
    violations: list[tuple[Subgroup, Subgroup]]


def check_chain_condition(H: Sequence[Subgroup]) -> ChainCheck:
    """Find every ordered pair E != F in H with E <= F of index p."""
    violations = []
    for E in H:
        for F in H:
            if E == F:
                continue
            rel = lattice_ops(E, F)
            if rel.contains and rel.index == E.group.p:
                violations.append((E, F))
    return ChainCheck(not violations, violations)


def parse_group(text: str) -> ElemAbGroup:
    """Parse ``p=2,r=3``."""
    try:
        parts = dict(item.split("=", 1) for item in text.replace(" ", "").split(","))
        return ElemAbGroup(int(parts["p"]), int(parts["r"]))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"cannot parse group {text!r}; expected p=<prime>,r=<rank>") from exc


def element_power_indices(group: ElemAbGroup) -> np.ndarray:
    """Table ``T[g, h] = index(g + h)`` over lex-ordered elements."""
    elems = np.array(group.elements(), dtype=np.int64).reshape(group.order, group.r)
    weights = group.p ** np.arange(group.r - 1, -1, -1)
    sums = (elems[:, None, :] + elems[None, :, :]) % group.p
    return sums @ weights

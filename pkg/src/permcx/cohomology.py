"""Polynomial part of H*(C_p^r, k), restriction to subgroups, avoidance pairs.

The polynomial generators x_1..x_r are dual to the group generators and
have degree 1 for p = 2, degree 2 for odd p.  Restriction to a subgroup E
with ordered basis b_1..b_s sends x_i to sum_j b_j[i] y_j.

Avoidance pairs (u, v) are products of linear forms: every factor of u
and of v vanishes on a prescribed lower-rank subgroup, and on each
top-rank subgroup the restrictions of u and v share no factor up to
scalars, which makes them a regular sequence in the polynomial ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

import numpy as np

from .exactla import GF, Field, Matrix
from .groups import ElemAbGroup, Subgroup, check_chain_condition, lattice_ops

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class PolyClass:
    """Homogeneous polynomial class; ``degree`` is the polynomial degree."""

    group: ElemAbGroup
    field: Field
    terms: tuple[tuple[Exponents, int], ...]
    degree: int

    def __post_init__(self):
        merged: dict[Exponents, int] = {}
        for exps, c in self.terms:
            exps = tuple(int(a) for a in exps)
            if len(exps) != self.group.r:
                raise ValueError(f"exponent vector {exps} has wrong length for {self.group!r}")
            if sum(exps) != self.degree:
                raise ValueError(f"monomial {exps} is not of degree {self.degree}")
            merged[exps] = int(self.field.add(merged.get(exps, 0), int(c)))
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in merged.items() if c)))

    @property
    def generator_degree(self) -> int:
        return 1 if self.group.p == 2 else 2

    @property
    def graded_degree(self) -> int:
        return self.degree * self.generator_degree

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolyClass") -> "PolyClass":
        self._compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("sum of classes of different degrees")
        return PolyClass(self.group, self.field, self.terms + other.terms, self.degree)

    def __mul__(self, other: "PolyClass") -> "PolyClass":
        self._compatible(other)
        f = self.field
        out: dict[Exponents, int] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = int(f.add(out.get(e, 0), f.mul(ca, cb)))
        return PolyClass(self.group, f, tuple(out.items()), self.degree + other.degree)

    def scale(self, c: int) -> "PolyClass":
        return PolyClass(self.group, self.field, tuple((e, int(self.field.mul(x, c))) for e, x in self.terms), self.degree)

    def _compatible(self, other):
        if self.group != other.group or self.field != other.field:
            raise ValueError("classes over different groups or fields")

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(exps) if a)
            coef = _scalar_str(self.field, c)
            parts.append(mono if coef == "1" and mono else (f"{coef}{mono}" if mono else coef))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            **self.field.to_json(),
            "r": self.group.r,
            "generator_degree": self.generator_degree,
            "degree": self.graded_degree,
            "terms": [{"coeff": list(self.field.coeffs(c)), "exponents": list(e)} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolyClass":
        f = Field.from_json(obj)
        g = ElemAbGroup(f.p, int(obj["r"]))
        terms = tuple((tuple(t["exponents"]), f.from_coeffs(_as_coeffs(t["coeff"]))) for t in obj["terms"])
        gen_deg = 1 if f.p == 2 else 2
        return cls(g, f, terms, int(obj["degree"]) // gen_deg)


def _as_coeffs(c):
    return c if isinstance(c, list) else [c]


def _scalar_str(f: Field, c: int) -> str:
    if f.e == 1:
        return str(c)
    s = repr(f.element(c))
    return s if "+" not in s else f"({s})"


def constant(group: ElemAbGroup, field: Field, c: int = 1) -> PolyClass:
    return PolyClass(group, field, (((0,) * group.r, c),), 0)


def variable(group: ElemAbGroup, field: Field, i: int) -> PolyClass:
    exps = tuple(int(j == i) for j in range(group.r))
    return PolyClass(group, field, ((exps, 1),), 1)


def linear_class(group: ElemAbGroup, field: Field, coeffs: Sequence[int]) -> PolyClass:
    terms = tuple((tuple(int(j == i) for j in range(group.r)), int(c)) for i, c in enumerate(coeffs))
    return PolyClass(group, field, terms, 1)


def restriction_images(E: Subgroup, basis=None) -> list[list[int]]:
    """images[i] = coefficients of res(x_i) on y_1..y_s (transpose of the inclusion)."""
    basis = [tuple(b) for b in (E.basis if basis is None else basis)]
    return [[b[i] for b in basis] for i in range(E.group.r)]


def restrict_class(c: PolyClass, E: Subgroup, basis=None) -> PolyClass:
    if E.group != c.group:
        raise ValueError(f"{E!r} is not a subgroup of {c.group!r}")
    images = restriction_images(E, basis)
    sub = ElemAbGroup(c.group.p, len(images[0]) if images else 0)
    f = c.field
    lin = [linear_class(sub, f, row) for row in images]
    out = PolyClass(sub, f, (), c.degree)
    for exps, coeff in c.terms:
        term = constant(sub, f, coeff)
        for L, a in zip(lin, exps):
            for _ in range(a):
                term = term * L
        out = out + term
    if out.is_zero():
        return PolyClass(sub, f, (), c.degree)
    return out


# ---------------------------------------------------------------------------
# linear forms

def evaluate_form(field: Field, form: Sequence[int], vectors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """(form(b) for b in vectors); subgroup vectors have F_p entries."""
    if not vectors:
        return ()
    return tuple(int(x) for x in field.matmul(np.array([form], dtype=np.int64),
                                             np.array(vectors, dtype=np.int64).T)[0])


def proportional(field: Field, a: Sequence[int], b: Sequence[int]) -> bool:
    """Both nonzero and a = c b for a scalar c."""
    if not any(a) or not any(b):
        return False
    return Matrix(field, [list(a), list(b)]).rank() == 1


def form_str(field: Field, form: Sequence[int], var: str = "x") -> str:
    parts = []
    for i, c in enumerate(form):
        if c:
            s = _scalar_str(field, int(c))
            parts.append(f"{var}{i + 1}" if s == "1" else f"{s}{var}{i + 1}")
    return "+".join(parts) or "0"


@dataclass(frozen=True)
class LinearFormProduct:
    group: ElemAbGroup
    field: Field
    factors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        facs = tuple(tuple(int(c) for c in f) for f in self.factors)
        for fac in facs:
            if len(fac) != self.group.r:
                raise ValueError(f"linear form {fac} has wrong length")
            if not any(fac):
                raise ValueError("zero linear form in a product")
        object.__setattr__(self, "factors", facs)

    def expand(self) -> PolyClass:
        out = constant(self.group, self.field, 1)
        for fac in self.factors:
            out = out * linear_class(self.group, self.field, fac)
        return out

    def restricted_factors(self, E: Subgroup) -> list[tuple[int, ...]]:
        return [evaluate_form(self.field, fac, E.basis) for fac in self.factors]

    def __repr__(self):
        return "*".join(f"({form_str(self.field, f)})" for f in self.factors) or "1"

    def to_json(self) -> dict:
        return {"factors": [[list(self.field.coeffs(c)) for c in fac] for fac in self.factors]}

    @classmethod
    def from_json(cls, obj: dict, group: ElemAbGroup, field: Field) -> "LinearFormProduct":
        return cls(group, field, tuple(tuple(field.from_coeffs(_as_coeffs(c)) for c in fac) for fac in obj["factors"]))


class AvoidancePair(NamedTuple):
    u: LinearFormProduct
    v: LinearFormProduct
    field_used: Field

    def to_json(self) -> dict:
        return {"u": self.u.to_json(), "v": self.v.to_json(), "field_used": self.field_used.to_json(),
                "u_str": repr(self.u), "v_str": repr(self.v)}


class AvoidanceCheck(NamedTuple):
    ok: bool
    witness: str | None


class AvoidancePreconditionError(ValueError):
    pass


def _check_avoidance_input(Hprime: Sequence[Subgroup], Hdoubleprime: Sequence[Subgroup]) -> int:
    if not Hprime:
        raise AvoidancePreconditionError("Hprime is empty")
    groups = {E.group for E in list(Hprime) + list(Hdoubleprime)}
    if len(groups) != 1:
        raise AvoidancePreconditionError(f"subgroups from several groups: {sorted(map(repr, groups))}")
    ranks = {E.rank for E in Hprime}
    if len(ranks) != 1:
        raise AvoidancePreconditionError(f"Hprime mixes ranks {sorted(ranks)}")
    s = ranks.pop()
    if s < 2:
        raise AvoidancePreconditionError(
            "maximum rank s = 1: the cohomology ring of a rank-one subgroup has Krull dimension 1, "
            "so no regular sequence of length two exists; such collections are only checked empirically")
    for E2 in Hdoubleprime:
        if E2.rank >= s:
            raise AvoidancePreconditionError(f"{E2!r} in Hdoubleprime has rank {E2.rank} >= {s}")
        for E1 in Hprime:
            rel = lattice_ops(E2, E1)
            if rel.contains and rel.index == E1.group.p:
                raise AvoidancePreconditionError(
                    f"{E2!r} has index p in {E1!r}: the chain condition fails and no avoidance pair exists")
    return s


def _all_forms(field: Field, basis: np.ndarray) -> np.ndarray:
    """Every nonzero combination of ``basis`` rows, sorted by code (x_1 least significant)."""
    d, r = basis.shape
    if d == 0:
        return np.zeros((0, r), dtype=np.int64)
    coeffs = np.array(list(product(range(field.q), repeat=d)), dtype=np.int64)
    forms = field.matmul(coeffs, basis)
    forms = forms[forms.any(axis=1)]
    keys = forms @ (field.q ** np.arange(r, dtype=np.int64))
    forms = forms[np.argsort(keys, kind="stable")]
    return forms


def _restrict_forms(field: Field, forms: np.ndarray, E: Subgroup) -> np.ndarray:
    return field.matmul(forms, np.array(E.basis, dtype=np.int64).T)


def _proportional_rows(field: Field, rows: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean mask: rows that are scalar multiples of the nonzero vector b."""
    s = rows.shape[1]
    mask = rows.any(axis=1)
    for i in range(s):
        for j in range(i + 1, s):
            minor = field.sub(field.mul(rows[:, i], int(b[j])), field.mul(rows[:, j], int(b[i])))
            mask &= minor == 0
    return mask


def _try_field(field: Field, Hprime, Hdoubleprime):
    G = Hprime[0].group
    r = G.r
    eye = np.eye(r, dtype=np.int64)
    nontrivial = [E for E in Hdoubleprime if E.rank > 0]

    def usable(forms):
        ok = np.ones(len(forms), dtype=bool)
        for E1 in Hprime:
            ok &= _restrict_forms(field, forms, E1).any(axis=1)
        return forms[ok]

    def avoids(forms, u_factors):
        ok = np.ones(len(forms), dtype=bool)
        for E1 in Hprime:
            res = _restrict_forms(field, forms, E1)
            for lam in u_factors:
                lam_res = _restrict_forms(field, np.array([lam]), E1)[0]
                ok &= ~_proportional_rows(field, res, lam_res)
        return forms[ok]

    if not nontrivial:
        cands = usable(_all_forms(field, eye))
        if len(cands) == 0:
            return None
        u = tuple(cands[0])
        rest = avoids(cands, [u])
        if len(rest) == 0:
            return None
        return [u], [tuple(rest[0])]

    u_factors, per_subgroup = [], []
    for E2 in nontrivial:
        ann = Matrix(field, np.array(E2.basis, dtype=np.int64)).kernel().a
        cands = usable(_all_forms(field, ann))
        if len(cands) == 0:
            return None
        u_factors.append(tuple(cands[0]))
        per_subgroup.append(cands)
    v_factors = []
    for cands in per_subgroup:
        rest = avoids(cands, u_factors)
        if len(rest) == 0:
            return None
        v_factors.append(tuple(rest[-1]))
    return u_factors, v_factors


def find_avoidance_pair(Hprime: Sequence[Subgroup], Hdoubleprime: Sequence[Subgroup],
                        field: Field | None = None, max_degree: int = 8) -> AvoidancePair:
    """Products u, v of linear forms vanishing on Hdoubleprime, regular on each Hprime.

    u takes, for each E'' in order, the first admissible form vanishing on
    E''; v takes the last one sharing no restricted factor with u.  When
    the current field is too small, it is enlarged to GF(p^(e+1)).
    """
    _check_avoidance_input(Hprime, Hdoubleprime)
    G = Hprime[0].group
    field = field or G.prime_field
    if field.p != G.p:
        raise ValueError(f"field {field} has the wrong characteristic")
    e = field.e
    while True:
        found = _try_field(field, list(Hprime), list(Hdoubleprime))
        if found is not None:
            u, v = found
            return AvoidancePair(LinearFormProduct(G, field, tuple(u)), LinearFormProduct(G, field, tuple(v)), field)
        e += 1
        if e > max_degree:
            raise RuntimeError(f"no avoidance pair over GF({G.p}^e) for e <= {max_degree}")
        field = GF(G.p, e)


def verify_avoidance_pair(u: LinearFormProduct, v: LinearFormProduct,
                          Hprime: Sequence[Subgroup], Hdoubleprime: Sequence[Subgroup]) -> AvoidanceCheck:
    f = u.field
    if v.field != f:
        return AvoidanceCheck(False, "u and v are over different fields")
    U, V = u.expand(), v.expand()
    for E2 in Hdoubleprime:
        for name, cls in (("u", U), ("v", V)):
            if not restrict_class(cls, E2).is_zero():
                return AvoidanceCheck(False, f"{name} does not restrict to zero on {E2!r}")
    for E1 in Hprime:
        for name, cls in (("u", U), ("v", V)):
            if restrict_class(cls, E1).is_zero():
                return AvoidanceCheck(False, f"{name} restricts to zero on {E1!r}")
        for lam, lr in zip(u.factors, u.restricted_factors(E1)):
            for mu, mr in zip(v.factors, v.restricted_factors(E1)):
                if proportional(f, lr, mr):
                    return AvoidanceCheck(
                        False, f"common factor {form_str(f, lam)} ~ {form_str(f, mu)} on {E1!r}")
    return AvoidanceCheck(True, None)


def random_avoidance_instance(group: ElemAbGroup, rng: np.random.Generator):
    """A random valid (Hprime, Hdoubleprime) in ``group`` satisfying the chain condition."""
    from .groups import all_subgroups

    subs = all_subgroups(group)
    while True:
        s = int(rng.integers(2, group.r + 1))
        top = [E for E in subs if E.rank == s]
        k = int(rng.integers(1, min(3, len(top)) + 1))
        picks = rng.choice(len(top), size=k, replace=False)
        Hprime = [top[i] for i in sorted(picks)]
        lower = [E for E in subs if E.rank < s and not any(
            lattice_ops(E, E1).contains and lattice_ops(E, E1).index == group.p for E1 in Hprime)]
        if not lower:
            continue
        m = int(rng.integers(1, min(4, len(lower)) + 1))
        picks = rng.choice(len(lower), size=m, replace=False)
        Hdouble = [lower[i] for i in sorted(picks)]
        if check_chain_condition(Hprime + Hdouble).ok:
            return Hprime, Hdouble

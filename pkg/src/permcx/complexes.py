"""Bounded cochain complexes of kG-modules and their contractibility.

A complex ``0 -> C^0 -> ... -> C^l -> 0`` is stored as its terms and
the matrices of its differentials.  Contractibility is decided by one
global linear solve for a homotopy ``h^i: C^i -> C^{i-1}`` with
``d h + h d = 1``, where each ``h^i`` is sought inside Hom_kG(C^i, C^{i-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exactla import Field, Matrix, block_diag
from .gmod import (
    EquivariantMap,
    GModule,
    direct_sum as module_sum,
    fixed_points,
    hom_basis_array,
    induce,
    inflate,
    make_trivial,
    radical,
    restrict,
    subspace_contains,
)
from .groups import ElemAbGroup, Subgroup, check_chain_condition

CONSISTENT = "CONSISTENT-WITH-THEOREM"
VIOLATION = "THEOREM-VIOLATION-CANDIDATE"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, eq=False)
class BoundedComplex:
    terms: tuple[GModule, ...]
    differentials: tuple[Matrix, ...]
    group: ElemAbGroup | None = None
    field: Field | None = None

    def __post_init__(self):
        terms, diffs = tuple(self.terms), tuple(self.differentials)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "differentials", diffs)
        if terms:
            object.__setattr__(self, "group", self.group or terms[0].group)
            object.__setattr__(self, "field", self.field or terms[0].field)
        if self.group is None or self.field is None:
            raise ValueError("an empty complex needs an explicit group and field")
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValueError(f"{len(terms)} terms need {max(len(terms) - 1, 0)} differentials, got {len(diffs)}")
        for i, M in enumerate(terms):
            if M.group != self.group or M.field != self.field:
                raise ValueError(f"term {i} is over {M.group!r}/{M.field!r}, complex over {self.group!r}/{self.field!r}")
        for i, d in enumerate(diffs):
            if d.shape != (terms[i + 1].dim, terms[i].dim):
                raise ValueError(f"d^{i} has shape {d.shape}, expected {(terms[i + 1].dim, terms[i].dim)}")

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def dims(self) -> list[int]:
        return [M.dim for M in self.terms]

    def d(self, i: int) -> Matrix:
        """d^i : C^i -> C^{i+1}, zero outside the stored range."""
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        src = self.terms[i].dim if 0 <= i < len(self.terms) else 0
        tgt = self.terms[i + 1].dim if 0 <= i + 1 < len(self.terms) else 0
        return Matrix.zeros(self.field, tgt, src)

    def maps(self) -> list[EquivariantMap]:
        return [EquivariantMap(self.terms[i], self.terms[i + 1], d, check=False) for i, d in enumerate(self.differentials)]

    def __eq__(self, other):
        if not isinstance(other, BoundedComplex):
            return NotImplemented
        return (self.group, self.field, self.terms, self.differentials) == (
            other.group, other.field, other.terms, other.differentials)

    def __repr__(self):
        return f"BoundedComplex({self.group!r}, {self.field!r}, dims={self.dims})"

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            **self.field.to_json(),
            "modules": [M.to_json() for M in self.terms],
            "differentials": [d.to_json() for d in self.differentials],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoundedComplex":
        terms = [GModule.from_json(m) for m in obj["modules"]]
        group = field = None
        if terms:
            group, field = terms[0].group, terms[0].field
        else:
            field = Field.from_json(obj)
            group = ElemAbGroup(int(obj["group"]["p"]), int(obj["group"]["r"]))
        diffs = []
        for i, d in enumerate(obj.get("differentials", [])):
            m = Matrix.from_json(field, d)
            if m.rows == 0 or m.cols == 0:
                m = Matrix.zeros(field, terms[i + 1].dim, terms[i].dim)
            diffs.append(m)
        return cls(tuple(terms), tuple(diffs), group, field)


def zero_complex(group: ElemAbGroup, field: Field) -> BoundedComplex:
    return BoundedComplex((), (), group, field)


def identity_complex(M: GModule) -> BoundedComplex:
    """0 -> M --id--> M -> 0."""
    return BoundedComplex((M, M), (M.identity(),))


# ---------------------------------------------------------------------------
# validation and exactness

class Violation(NamedTuple):
    kind: str  # "equivariance" or "d∘d"
    position: int
    generator: int | None

    def __str__(self):
        if self.kind == "equivariance":
            return f"d^{self.position} is not equivariant for generator g_{self.generator + 1}"
        return f"d^{self.position + 1} d^{self.position} != 0"


def validate(C: BoundedComplex) -> list[Violation]:
    """Empty list when every differential is equivariant and d∘d = 0."""
    out = []
    for i, d in enumerate(C.differentials):
        src, tgt = C.terms[i], C.terms[i + 1]
        for g, (A, B) in enumerate(zip(src.action, tgt.action)):
            if d @ A != B @ d:
                out.append(Violation("equivariance", i, g))
    for i in range(len(C.differentials) - 1):
        if not (C.differentials[i + 1] @ C.differentials[i]).is_zero():
            out.append(Violation("d∘d", i, None))
    return out


class ExactnessReport(NamedTuple):
    exact: bool
    homology_dims: list[int]


def is_exact(C: BoundedComplex) -> ExactnessReport:
    ranks = [d.rank() for d in C.differentials]
    dims = []
    for i, M in enumerate(C.terms):
        rank_out = ranks[i] if i < len(ranks) else 0
        rank_in = ranks[i - 1] if i >= 1 else 0
        dims.append(M.dim - rank_out - rank_in)
    return ExactnessReport(all(h == 0 for h in dims), dims)


# ---------------------------------------------------------------------------
# contractibility

@dataclass(frozen=True, eq=False)
class Homotopy:
    """h^1 .. h^l with h^i: C^i -> C^{i-1}; ``maps[i-1]`` is h^i."""

    maps: tuple[Matrix, ...]

    def h(self, C: BoundedComplex, i: int) -> Matrix:
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        src = C.terms[i].dim if 0 <= i < len(C.terms) else 0
        tgt = C.terms[i - 1].dim if 0 <= i - 1 < len(C.terms) else 0
        return Matrix.zeros(C.field, tgt, src)

    def failures(self, C: BoundedComplex) -> list[str]:
        """Why this is not a contracting homotopy of C (empty when it is)."""
        out = []
        if len(self.maps) != max(C.length, 0):
            return [f"expected {max(C.length, 0)} maps, got {len(self.maps)}"]
        for i in range(1, C.length + 1):
            h = self.maps[i - 1]
            if h.shape != (C.terms[i - 1].dim, C.terms[i].dim):
                return [f"h^{i} has shape {h.shape}"]
            for g, (A, B) in enumerate(zip(C.terms[i].action, C.terms[i - 1].action)):
                if h @ A != B @ h:
                    out.append(f"h^{i} not equivariant for g_{g + 1}")
        for i in range(len(C.terms)):
            lhs = C.d(i - 1) @ self.h(C, i) + self.h(C, i + 1) @ C.d(i)
            if lhs != C.terms[i].identity():
                out.append(f"dh + hd != 1 on C^{i}")
        return out

    def to_json(self) -> list:
        return [h.to_json() for h in self.maps]


class ContractibilityReport(NamedTuple):
    contractible: bool
    certificate: Homotopy | None


def _homotopy_system(C: BoundedComplex):
    """The linear system dh + hd = 1 over per-position hom bases."""
    f = C.field
    l = C.length
    dims = C.dims
    bases = [hom_basis_array(C.terms[i], C.terms[i - 1]) for i in range(1, l + 1)]
    eq_offsets = np.cumsum([0] + [n * n for n in dims])
    n_eq = int(eq_offsets[-1])
    n_unknowns = sum(b.shape[0] for b in bases)
    A = np.zeros((n_eq, n_unknowns), dtype=np.int64)
    col = 0
    for i in range(1, l + 1):
        basis = bases[i - 1]
        k = basis.shape[0]
        if k == 0:
            continue
        n_src, n_tgt = dims[i], dims[i - 1]
        H = basis.reshape(k, n_tgt, n_src)
        # contributes d^{i-1} h^i to equation i  and  h^i d^{i-1} to equation i-1
        d = C.d(i - 1).a
        left = f.matmul(d, H.transpose(1, 0, 2).reshape(n_tgt, k * n_src))
        left = left.reshape(n_src, k, n_src).transpose(1, 0, 2).reshape(k, n_src * n_src)
        right = f.matmul(H.reshape(k * n_tgt, n_src), d).reshape(k, n_tgt * n_tgt)
        A[eq_offsets[i] : eq_offsets[i + 1], col : col + k] = left.T
        A[eq_offsets[i - 1] : eq_offsets[i], col : col + k] = f.add(
            A[eq_offsets[i - 1] : eq_offsets[i], col : col + k], right.T)
        col += k
    rhs = np.concatenate([np.eye(n, dtype=np.int64).ravel() for n in dims]) if dims else np.zeros(0, dtype=np.int64)
    return A, rhs, bases


def is_contractible(C: BoundedComplex) -> ContractibilityReport:
    """Decide C ~ 0 over kG; the returned certificate is re-verified exactly."""
    f = C.field
    if not C.terms:
        return ContractibilityReport(True, Homotopy(()))
    if C.length == 0:
        ok = C.terms[0].dim == 0
        return ContractibilityReport(ok, Homotopy(()) if ok else None)
    A, rhs, bases = _homotopy_system(C)
    if not rhs.any():
        sol = Matrix.zeros(f, A.shape[1], 1)
    else:
        sol = Matrix(f, A).solve(Matrix(f, rhs.reshape(-1, 1)))
    if sol is None:
        return ContractibilityReport(False, None)
    coeffs = sol.a.ravel()
    maps, col = [], 0
    for i in range(1, C.length + 1):
        basis = bases[i - 1]
        k = basis.shape[0]
        n_src, n_tgt = C.terms[i].dim, C.terms[i - 1].dim
        if k:
            vec = f.matmul(coeffs[col : col + k].reshape(1, k), basis).ravel()
        else:
            vec = np.zeros(n_src * n_tgt, dtype=np.int64)
        maps.append(Matrix(f, vec.reshape(n_tgt, n_src)))
        col += k
    cert = Homotopy(tuple(maps))
    problems = cert.failures(C)
    if problems:
        raise AssertionError(f"homotopy solver produced an invalid certificate: {problems}")
    return ContractibilityReport(True, cert)


# ---------------------------------------------------------------------------
# operations on complexes

def _pad(C: BoundedComplex, n: int) -> BoundedComplex:
    zero = make_trivial(C.group, C.field, 0)
    terms = list(C.terms) + [zero] * (n - len(C.terms))
    diffs = [C.d(i) for i in range(len(terms) - 1)]
    return BoundedComplex(tuple(terms), tuple(diffs), C.group, C.field)


def direct_sum(C: BoundedComplex, D: BoundedComplex) -> BoundedComplex:
    if C.group != D.group or C.field != D.field:
        raise ValueError("complexes over different groups/fields")
    n = max(len(C.terms), len(D.terms))
    C, D = _pad(C, n), _pad(D, n)
    terms = tuple(module_sum([a, b]) for a, b in zip(C.terms, D.terms))
    diffs = tuple(block_diag([C.d(i), D.d(i)], C.field) for i in range(n - 1))
    return BoundedComplex(terms, diffs, C.group, C.field)


def shift(C: BoundedComplex, n: int = 1) -> BoundedComplex:
    """C[-n]: prepend n zero terms; differentials pick up the sign (-1)^n."""
    if n < 0:
        raise ValueError("only nonnegative shifts are supported for complexes starting at 0")
    if not C.terms:
        return C
    zero = make_trivial(C.group, C.field, 0)
    terms = (zero,) * n + C.terms
    sign = int(C.field.neg(1)) if n % 2 else 1
    diffs = []
    for i in range(len(terms) - 1):
        if i < n:
            diffs.append(Matrix.zeros(C.field, terms[i + 1].dim, 0))
        else:
            diffs.append(C.d(i - n).scale(sign))
    return BoundedComplex(terms, tuple(diffs), C.group, C.field)


def restrict_complex(C: BoundedComplex, H: Subgroup, basis=None) -> BoundedComplex:
    terms = tuple(restrict(M, H, basis) for M in C.terms)
    group = terms[0].group if terms else ElemAbGroup(C.group.p, H.rank)
    return BoundedComplex(terms, C.differentials, group, C.field)


def induce_complex(C: BoundedComplex, embedding, group: ElemAbGroup) -> BoundedComplex:
    from .gmod import _embedding_coordinates
    from .exactla import kron

    H, _ = _embedding_coordinates(group, embedding)
    terms = tuple(induce(M, embedding, group) for M in C.terms)
    ident = Matrix.identity(C.field, H.index)
    diffs = tuple(kron(ident, d) for d in C.differentials)
    return BoundedComplex(terms, diffs, group, C.field)


def inflate_complex(C: BoundedComplex, quotient_map, group: ElemAbGroup) -> BoundedComplex:
    terms = tuple(inflate(M, quotient_map, group) for M in C.terms)
    return BoundedComplex(terms, C.differentials, group, C.field)


def conjugate(C: BoundedComplex, autos: Sequence[Matrix], terms: Sequence[GModule] | None = None) -> BoundedComplex:
    """Transport C along isomorphisms ``autos[i]: C^i -> C'^i``."""
    terms = tuple(terms) if terms is not None else C.terms
    diffs = tuple(autos[i + 1] @ d @ autos[i].inverse() for i, d in enumerate(C.differentials))
    return BoundedComplex(terms, diffs, C.group, C.field)


# ---------------------------------------------------------------------------
# the main-theorem harness

def membership(C: BoundedComplex, H: Sequence[Subgroup]) -> bool | None:
    """Whether verified tags put every term in Add(k[G/E] : E in H); None if unknown."""
    allowed = set(H)
    result = True
    for M in C.terms:
        if M.tags is None or not M.tags_verified:
            return None
        for t in M.tags:
            if t.multiplicity and t.summand_subgroup(C.group) not in allowed:
                result = False
    return result


@dataclass
class Theorem31Report:
    membership: bool | None
    condition: bool
    violations: list
    exact: bool
    homology_dims: list[int]
    contractible: bool
    verdict: str
    reason: str
    certificate: Homotopy | None = None

    def to_json(self) -> dict:
        return {
            "membership": "unknown" if self.membership is None else self.membership,
            "condition": {"ok": self.condition,
                          "violations": [[E.to_json(), F.to_json()] for E, F in self.violations]},
            "exact": self.exact,
            "homology_dims": self.homology_dims,
            "contractible": self.contractible,
            "verdict": self.verdict,
            "reason": self.reason,
            "certificate": self.certificate.to_json() if self.certificate is not None else None,
        }


def check_theorem31(H: Sequence[Subgroup], C: BoundedComplex) -> Theorem31Report:
    """Run every ingredient of the main theorem on (H, C) and classify."""
    problems = validate(C)
    if problems:
        raise ValueError(f"not a valid complex: {[str(v) for v in problems]}")
    mem = membership(C, H)
    chain = check_chain_condition(H)
    ex = is_exact(C)
    con = is_contractible(C)
    if mem is None:
        verdict, reason = INCONCLUSIVE, "term membership unknown (untagged or unverifiable tags)"
    elif chain.ok and mem and ex.exact:
        if con.contractible:
            verdict, reason = CONSISTENT, "theorem confirmed: hypotheses hold and C is contractible"
        else:
            verdict, reason = VIOLATION, "hypotheses hold but no contracting homotopy exists"
    else:
        missing = [name for name, ok in (("chain condition", chain.ok), ("membership", mem), ("exactness", ex.exact)) if not ok]
        verdict, reason = CONSISTENT, "hypothesis void: " + ", ".join(missing) + " fails"
    return Theorem31Report(mem, chain.ok, chain.violations, ex.exact, ex.homology_dims,
                           con.contractible, verdict, reason, con.certificate)


# ---------------------------------------------------------------------------
# splitting through a rank-two subgroup

class SplittingError(ValueError):
    pass


def split_via_rank_two_subgroup(C: BoundedComplex, E: Subgroup) -> EquivariantMap:
    """A kG-splitting psi of the last differential, built through kE.

    A homotopy of C restricted to E gives an E-equivariant theta with
    d theta = 1.  Its component in the free part P of C^{l-1} consists of
    E-fixed vectors, which lie in rad P and so die under d; dropping it
    leaves psi = (inclusion of M)(projection to M) theta, M the trivial part.
    """
    if E.rank != 2:
        raise SplittingError(f"{E!r} has rank {E.rank}, need 2")
    if C.length < 1:
        raise SplittingError("complex has no differential to split")
    for i, M in enumerate(C.terms):
        if M.tags is None or not M.tags_verified:
            raise SplittingError(f"term {i} lacks verified tags")
        if any(t.kind not in ("trivial", "free") for t in M.tags):
            raise SplittingError(f"term {i} is not tagged trivial + free")
    last, prev = C.terms[-1], C.terms[-2]
    if any(t.kind == "free" and t.multiplicity for t in last.tags):
        raise SplittingError("terminal term must be a sum of trivial modules")

    restricted = restrict_complex(C, E)
    report = is_contractible(restricted)
    if not report.contractible:
        raise SplittingError(f"restriction to {E!r} is not contractible")
    theta = report.certificate.maps[-1]

    f = C.field
    triv = np.zeros(prev.dim, dtype=bool)
    for t in prev.tags:
        if t.kind == "trivial":
            triv[t.start : t.stop] = True
    free_idx = np.flatnonzero(~triv)
    if free_idx.size:
        P = GModule(C.group, f, free_idx.size,
                    tuple(Matrix(f, A.a[np.ix_(free_idx, free_idx)]) for A in prev.action))
        P_fixed_E = fixed_points(restrict(P, E))
        P_rad = radical(P)
        if not subspace_contains(P_rad, P_fixed_E):
            raise AssertionError("fixed points of E on the free part are not in its radical")
        theta_P = Matrix(f, theta.a[free_idx, :]).T
        if not subspace_contains(P_fixed_E, theta_P):
            raise AssertionError("theta does not land in the E-fixed points of the free part")
    proj = np.zeros_like(theta.a)
    proj[triv, :] = theta.a[triv, :]
    psi = EquivariantMap(last, prev, Matrix(f, proj))
    if C.differentials[-1] @ psi.matrix != last.identity():
        raise AssertionError("psi does not split the last differential")
    return psi


# ---------------------------------------------------------------------------
# random contractible complexes

def random_automorphism(M: GModule, rng: np.random.Generator, max_tries: int = 1000) -> Matrix:
    f = M.field
    if M.dim == 0:
        return M.identity()
    basis = hom_basis_array(M, M)
    for _ in range(max_tries):
        coeffs = f.random(rng, (1, basis.shape[0]))
        X = Matrix(f, f.matmul(coeffs, basis).reshape(M.dim, M.dim))
        if X.is_invertible():
            return X
    raise RuntimeError("no invertible endomorphism found")


def random_addS_complex(H: Sequence[Subgroup], length: int, multiplicities=None, seed: int = 0,
                        field: Field | None = None) -> BoundedComplex:
    """Contractible complex in Add(k[G/E] : E in H), scrambled by automorphisms.

    Piece i is ``0 -> M_i --id--> M_i -> 0`` in positions i, i+1, with
    ``M_i = sum_E k[G/E]^{m[i][E]}``.  ``multiplicities`` is an int (every
    entry), a length x |H| nested sequence, or None (random 0..2 per
    entry from the seed).  Each term is then conjugated by a random
    kG-automorphism.  The result is contractible by construction.
    """
    from .gmod import make_permutation

    H = list(H)
    if not H:
        raise ValueError("need a nonempty subgroup collection")
    group = H[0].group
    field = field or group.prime_field
    rng = np.random.default_rng(seed)
    if multiplicities is None:
        mult = rng.integers(0, 3, size=(length, len(H))).tolist()
    elif isinstance(multiplicities, int):
        mult = [[multiplicities] * len(H) for _ in range(length)]
    else:
        mult = [list(row) for row in multiplicities]
        if len(mult) != length or any(len(row) != len(H) for row in mult):
            raise ValueError(f"multiplicities must be {length} x {len(H)}")
    pieces = []
    for row in mult:
        parts = [make_permutation(E, field) for E, m in zip(H, row) for _ in range(m)]
        pieces.append(module_sum(parts, group=group, field=field))
    zero = make_trivial(group, field, 0)
    terms = []
    for j in range(length + 1):
        before = pieces[j - 1] if j >= 1 else zero
        after = pieces[j] if j < length else zero
        terms.append(module_sum([before, after]))
    diffs = []
    for j in range(length):
        a = pieces[j].dim
        src_before = pieces[j - 1].dim if j >= 1 else 0
        tgt_after = pieces[j + 1].dim if j + 1 < length else 0
        d = np.zeros((a + tgt_after, src_before + a), dtype=np.int64)
        d[:a, src_before:] = np.eye(a, dtype=np.int64)
        diffs.append(Matrix(field, d))
    C = BoundedComplex(tuple(terms), tuple(diffs), group, field)
    autos = [random_automorphism(M, rng) for M in C.terms]
    return conjugate(C, autos)

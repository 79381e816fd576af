"""kG-modules for G = C_p^r as tuples of commuting unipotent matrices.

Generator ``g_i`` acts on column vectors by ``action[i]``.  A module may
carry *tags*, a claimed decomposition into blocks of trivial, free and
permutation summands; tags are checked against the matrices by
:func:`verify_tags` before anything relies on them.

Over a p-group in characteristic p the only one-dimensional module is
the trivial one (a unipotent 1x1 matrix is 1), so "one-dimensional"
summands are always represented by trivial tags.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exactla import (
    Field,
    Matrix,
    _kernel,
    block_diag,
    kron,
    vstack,
)
from .groups import ElemAbGroup, Subgroup, coset_reps, subgroup_from_generators

KINDS = ("trivial", "free", "permutation")


@dataclass(frozen=True)
class Tag:
    """``multiplicity`` copies of one summand on coordinates ``[start, stop)``."""

    kind: str
    subgroup: Subgroup | None
    multiplicity: int
    start: int
    stop: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tag kind {self.kind!r}")
        if (self.kind == "permutation") != (self.subgroup is not None):
            raise ValueError("permutation tags (and only they) name a subgroup")

    def summand_subgroup(self, group: ElemAbGroup) -> Subgroup:
        if self.kind == "trivial":
            return group.whole()
        if self.kind == "free":
            return group.trivial_subgroup()
        return self.subgroup

    def summand_dim(self, group: ElemAbGroup) -> int:
        return self.summand_subgroup(group).index

    def shifted(self, offset: int) -> "Tag":
        return Tag(self.kind, self.subgroup, self.multiplicity, self.start + offset, self.stop + offset)

    def describe(self) -> str:
        name = {"trivial": "k", "free": "kG"}.get(self.kind) or f"k[G/{self.subgroup!r}]"
        power = f"^{self.multiplicity}" if self.multiplicity != 1 else ""
        return f"{name}{power} on [{self.start}, {self.stop})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "subgroup": [list(b) for b in self.subgroup.basis] if self.subgroup is not None else None,
            "multiplicity": self.multiplicity,
            "start": self.start,
            "stop": self.stop,
        }


def make_tag(group: ElemAbGroup, E: Subgroup, multiplicity: int, start: int) -> Tag:
    """Tag for ``multiplicity`` copies of k[G/E], normalising E = G and E = 1."""
    dim = E.index * multiplicity
    if E.rank == group.r:
        return Tag("trivial", None, multiplicity, start, start + dim)
    if E.rank == 0:
        return Tag("free", None, multiplicity, start, start + dim)
    return Tag("permutation", E, multiplicity, start, start + dim)


@dataclass(frozen=True)
class GModule:
    group: ElemAbGroup
    field: Field
    dim: int
    action: tuple[Matrix, ...]
    tags: tuple[Tag, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(self.action))
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(self.tags))
        if self.field.p != self.group.p:
            raise ValueError(f"field characteristic {self.field.p} differs from group prime {self.group.p}")
        if len(self.action) != self.group.r:
            raise ValueError(f"expected {self.group.r} action matrices, got {len(self.action)}")
        ident = Matrix.identity(self.field, self.dim)
        for i, A in enumerate(self.action):
            if A.field != self.field:
                raise ValueError(f"action matrix {i} is over {A.field}, module over {self.field}")
            if A.shape != (self.dim, self.dim):
                raise ValueError(f"action matrix {i} has shape {A.shape}, expected {(self.dim, self.dim)}")
            if A ** self.group.p != ident:
                raise ValueError(f"unipotence violated: action matrix {i} does not satisfy g^{self.group.p} = 1")
        for i in range(len(self.action)):
            for j in range(i + 1, len(self.action)):
                if self.action[i] @ self.action[j] != self.action[j] @ self.action[i]:
                    raise ValueError(f"commutativity violated: action matrices {i} and {j} do not commute")
        if self.tags is not None:
            pos = 0
            for t in self.tags:
                if t.start != pos or t.stop < t.start:
                    raise ValueError(f"tag ranges do not partition [0, {self.dim}): {t.describe()}")
                if t.stop - t.start != t.multiplicity * t.summand_dim(self.group):
                    raise ValueError(f"tag {t.describe()} has the wrong length")
                if t.subgroup is not None and t.subgroup.group != self.group:
                    raise ValueError(f"tag {t.describe()} names a subgroup of another group")
                pos = t.stop
            if pos != self.dim:
                raise ValueError(f"tag ranges do not partition [0, {self.dim})")

    def __repr__(self):
        tags = "" if self.tags is None else " [" + ", ".join(t.describe() for t in self.tags) + "]"
        return f"GModule({self.group!r}, {self.field!r}, dim={self.dim}{tags})"

    def identity(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    def element_matrix(self, v: Sequence[int]) -> Matrix:
        """Action of the group element with coordinates ``v``."""
        out = self.identity()
        for A, c in zip(self.action, v):
            c = int(c) % self.group.p
            if c:
                out = out @ (A**c)
        return out

    @cached_property
    def element_matrices(self) -> np.ndarray:
        """Stack of action matrices of all group elements, lex order."""
        mats = np.zeros((self.group.order, self.dim, self.dim), dtype=np.int64)
        for k, v in enumerate(self.group.elements()):
            mats[k] = self.element_matrix(v).a
        return mats

    def untagged(self) -> "GModule":
        return GModule(self.group, self.field, self.dim, self.action, None)

    def with_tags(self, tags: Iterable[Tag] | None) -> "GModule":
        return GModule(self.group, self.field, self.dim, self.action, None if tags is None else tuple(tags))

    @cached_property
    def tags_verified(self) -> bool:
        return self.tags is not None and not verify_tags(self)

    def summands(self) -> list[tuple[int, Subgroup]]:
        """(start coordinate, subgroup E) for each k[G/E] summand; needs verified tags."""
        if not self.tags_verified:
            raise ValueError("module has no verified tags")
        out = []
        for t in self.tags:
            E = t.summand_subgroup(self.group)
            for c in range(t.multiplicity):
                out.append((t.start + c * E.index, E))
        return out

    def to_json(self) -> dict:
        return {
            **self.field.to_json(),
            "r": self.group.r,
            "dim": self.dim,
            "action": [A.to_json() for A in self.action],
            "tags": None if self.tags is None else [t.to_json() for t in self.tags],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GModule":
        field = Field.from_json(obj)
        group = ElemAbGroup(field.p, int(obj["r"]))
        dim = int(obj["dim"])
        # an empty JSON matrix loses its shape; restore it from dim
        action = [Matrix.from_json(field, a) for a in obj["action"]]
        action = [A if A.shape != (0, 0) else Matrix.zeros(field, dim, dim) for A in action]
        tags = None
        if obj.get("tags") is not None:
            tags = []
            for t in obj["tags"]:
                E = subgroup_from_generators(group, t["subgroup"]) if t.get("subgroup") is not None else None
                tags.append(Tag(t["kind"], E, int(t["multiplicity"]), int(t["start"]), int(t["stop"])))
        return cls(group, field, dim, tuple(action), tags)


def verify_tags(M: GModule) -> list[str]:
    """Problems with M's tags; empty when they exactly describe the action."""
    if M.tags is None:
        return ["module is untagged"]
    problems = []
    for i, A in enumerate(M.action):
        expected = block_diag(
            [_perm_action(t.summand_subgroup(M.group), M.field)[i] for t in M.tags for _ in range(t.multiplicity)],
            M.field,
        )
        if expected != A:
            problems.append(f"generator {i}: action does not match tags {[t.describe() for t in M.tags]}")
    return problems


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    source: GModule
    target: GModule
    matrix: Matrix
    check: bool = True

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"map matrix has shape {self.matrix.shape}, expected {(self.target.dim, self.source.dim)}")
        if self.check:
            bad = self.equivariance_failures()
            if bad:
                raise ValueError(f"map is not equivariant for generator(s) {bad}")

    def equivariance_failures(self) -> list[int]:
        return [
            i
            for i, (A, B) in enumerate(zip(self.source.action, self.target.action))
            if self.matrix @ A != B @ self.matrix
        ]

    def __matmul__(self, other: "EquivariantMap") -> "EquivariantMap":
        return EquivariantMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "EquivariantMap") -> "EquivariantMap":
        return EquivariantMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __eq__(self, other):
        if not isinstance(other, EquivariantMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"EquivariantMap({self.source.dim} -> {self.target.dim}, {self.matrix.tolist()})"


# ---------------------------------------------------------------------------
# constructors

@lru_cache(maxsize=None)
def _perm_action(E: Subgroup, field: Field) -> tuple[Matrix, ...]:
    G = E.group
    reps = coset_reps(E)
    index = {t: k for k, t in enumerate(reps)}
    mats = []
    for g in G.generators():
        a = np.zeros((len(reps), len(reps)), dtype=np.int64)
        for k, t in enumerate(reps):
            a[index[E.reduce(G.add(t, g))], k] = 1
        mats.append(Matrix(field, a))
    return tuple(mats)


def make_trivial(group: ElemAbGroup, field: Field, multiplicity: int = 1) -> GModule:
    if multiplicity < 0:
        raise ValueError("multiplicity must be nonnegative")
    ident = Matrix.identity(field, multiplicity)
    tags = (make_tag(group, group.whole(), multiplicity, 0),) if multiplicity else ()
    return GModule(group, field, multiplicity, (ident,) * group.r, tags)


def make_permutation(E: Subgroup, field: Field) -> GModule:
    """k[G/E] on the basis ``coset_reps(E)``; g_i translates cosets."""
    G = E.group
    if field.p != G.p:
        raise ValueError(f"field characteristic {field.p} differs from group prime {G.p}")
    return GModule(G, field, E.index, _perm_action(E, field), (make_tag(G, E, 1, 0),))


def make_free(group: ElemAbGroup, field: Field, rank: int = 1) -> GModule:
    return direct_sum([make_permutation(group.trivial_subgroup(), field)] * rank, group=group, field=field)


def direct_sum(modules: Sequence[GModule], group: ElemAbGroup | None = None, field: Field | None = None) -> GModule:
    modules = list(modules)
    if not modules:
        if group is None or field is None:
            raise ValueError("empty direct sum needs an explicit group and field")
        return make_trivial(group, field, 0)
    group = group or modules[0].group
    field = field or modules[0].field
    for M in modules:
        if M.group != group or M.field != field:
            raise ValueError(f"cannot sum modules over {M.group!r}/{M.field!r} and {group!r}/{field!r}")
    action = tuple(block_diag([M.action[i] for M in modules], field) for i in range(group.r))
    dim = sum(M.dim for M in modules)
    tags = None
    if all(M.tags is not None for M in modules):
        tags, offset = [], 0
        for M in modules:
            for t in M.tags:
                t = t.shifted(offset)
                if tags and tags[-1].kind == t.kind and tags[-1].subgroup == t.subgroup:
                    last = tags.pop()
                    t = Tag(t.kind, t.subgroup, last.multiplicity + t.multiplicity, last.start, t.stop)
                tags.append(t)
            offset += M.dim
    return GModule(group, field, dim, action, tags)


# ---------------------------------------------------------------------------
# hom spaces, fixed points, radical

def _hom_system(M: GModule, N: GModule) -> np.ndarray:
    # vec(X) row-major, X: N.dim x M.dim;  X A_i - B_i X = 0
    f = M.field
    n, m = N.dim, M.dim
    blocks = []
    for A, B in zip(M.action, N.action):
        blocks.append(kron(Matrix.identity(f, n), A.T) - kron(B, Matrix.identity(f, m)))
    return vstack(blocks, f, n * m).a


def _hom_direct(M: GModule, N: GModule) -> np.ndarray:
    return _kernel(M.field, _hom_system(M, N))


@lru_cache(maxsize=None)
def _hom_perm(E: Subgroup, F: Subgroup, field: Field) -> np.ndarray:
    """Canonical basis of Hom(k[G/E], k[G/F]) as vectorised rows."""
    basis = _hom_direct(make_permutation(E, field), make_permutation(F, field))
    basis.setflags(write=False)
    return basis


def hom_basis_array(M: GModule, N: GModule) -> np.ndarray:
    """Canonical basis of Hom_kG(M, N); row k is vec(X_k), X_k of shape N.dim x M.dim.

    The result is the kernel basis of the full commutation system.  When
    both modules carry verified tags the system is block diagonal in the
    summands, so the basis is assembled from cached summand blocks.
    """
    if M.group != N.group or M.field != N.field:
        raise ValueError("hom space between modules over different groups/fields")
    n, m = N.dim, M.dim
    if n == 0 or m == 0:
        return np.zeros((0, n * m), dtype=np.int64)
    if not (M.tags_verified and N.tags_verified):
        return _hom_direct(M, N)
    vecs, lasts = [], []
    for ns, F in N.summands():
        for ms, E in M.summands():
            local = _hom_perm(E, F, M.field)
            if local.shape[0] == 0:
                continue
            dn, dm = F.index, E.index
            rows = (ns + np.arange(dn))[:, None] * m + (ms + np.arange(dm))[None, :]
            idx = rows.ravel()
            for v in local:
                full = np.zeros(n * m, dtype=np.int64)
                full[idx] = v
                vecs.append(full)
                lasts.append(int(idx[np.flatnonzero(v)[-1]]))
    if not vecs:
        return np.zeros((0, n * m), dtype=np.int64)
    order = np.argsort(lasts, kind="stable")
    return np.array(vecs)[order]


def hom_space(M: GModule, N: GModule) -> list[EquivariantMap]:
    basis = hom_basis_array(M, N)
    return [EquivariantMap(M, N, Matrix(M.field, v.reshape(N.dim, M.dim)), check=False) for v in basis]


def fixed_points(M: GModule) -> Matrix:
    """Rows span M^G = intersection of ker(g_i - 1)."""
    if M.group.r == 0 or M.dim == 0:
        return Matrix.identity(M.field, M.dim)
    ident = M.identity()
    return vstack([A - ident for A in M.action], M.field, M.dim).kernel()


def radical(M: GModule) -> Matrix:
    """Rows (RREF) span rad M = sum of im(g_i - 1)."""
    if M.group.r == 0 or M.dim == 0:
        return Matrix.zeros(M.field, 0, M.dim)
    ident = M.identity()
    return vstack([(A - ident).T for A in M.action], M.field, M.dim).row_space()


def subspace_contains(big: Matrix, small: Matrix) -> bool:
    """Row space of ``small`` inside row space of ``big``."""
    return big.contains_rows(small)


# ---------------------------------------------------------------------------
# functors

def restrict(M: GModule, H: Subgroup, basis: Sequence[Sequence[int]] | None = None) -> GModule:
    """Restriction to H, realised as C_p^s on the given ordered basis of H."""
    basis = [tuple(b) for b in (H.basis if basis is None else basis)]
    if H.group != M.group:
        raise ValueError(f"{H!r} is not a subgroup of {M.group!r}")
    for b in basis:
        if not H.contains(b):
            raise ValueError(f"basis vector {b} is not in {H!r}")
    if subgroup_from_generators(M.group, basis) != H or len(basis) != H.rank:
        raise ValueError(f"{basis} is not a basis of {H!r}")
    if basis == M.group.generators():
        return M
    sub = ElemAbGroup(M.group.p, len(basis))
    action = tuple(M.element_matrix(b) for b in basis)
    tags = None
    if M.tags is not None and all(t.kind == "trivial" for t in M.tags):
        tags = tuple(Tag("trivial", None, t.multiplicity, t.start, t.stop) for t in M.tags)
    return GModule(sub, M.field, M.dim, action, tags)


def _embedding_coordinates(group: ElemAbGroup, embedding: Sequence[Sequence[int]]):
    """Subgroup H spanned by ``embedding`` and h -> coordinates on ``embedding``."""
    emb = [tuple(int(x) % group.p for x in row) for row in embedding]
    H = subgroup_from_generators(group, emb)
    if H.rank != len(emb):
        raise ValueError(f"embedding rows {emb} are linearly dependent")
    f = group.prime_field
    if not emb:
        return H, lambda h: ()
    # canonical coords of each embedding row; coords_emb = coords_canon @ inv
    C = Matrix(f, [H.coordinates(b) for b in emb])
    inv = C.inverse()

    def coords(h):
        c = Matrix(f, [H.coordinates(h)]) @ inv
        return tuple(c.tolist()[0])

    return H, coords


def induce(M: GModule, embedding: Sequence[Sequence[int]], group: ElemAbGroup) -> GModule:
    """k G (x)_{kH} M, basis (coset rep of H, basis of M), coset-major."""
    if M.group.r != len(embedding):
        raise ValueError(f"module is over C_p^{M.group.r} but embedding has {len(embedding)} rows")
    if group.p != M.group.p:
        raise ValueError("embedding into a group of a different prime")
    H, coords = _embedding_coordinates(group, embedding)
    reps = coset_reps(H)
    index = {t: k for k, t in enumerate(reps)}
    d = M.dim
    n = len(reps) * d
    action = []
    for g in group.generators():
        a = np.zeros((n, n), dtype=np.int64)
        for k, t in enumerate(reps):
            w = group.add(t, g)
            t2 = H.reduce(w)
            h = tuple((x - y) % group.p for x, y in zip(w, t2))
            j = index[t2]
            a[j * d : (j + 1) * d, k * d : (k + 1) * d] = M.element_matrix(coords(h)).a
        action.append(Matrix(M.field, a))
    tags = None
    if M.tags is not None and M.dim <= 1 and all(t.kind == "trivial" for t in M.tags):
        tags = (make_tag(group, H, 1, 0),) if M.dim else ()
    return GModule(group, M.field, n, tuple(action), tags)


def induce_map(f: EquivariantMap, embedding, group: ElemAbGroup,
               source: GModule | None = None, target: GModule | None = None) -> EquivariantMap:
    source = source or induce(f.source, embedding, group)
    target = target or induce(f.target, embedding, group)
    H = subgroup_from_generators(group, embedding)
    blocks = kron(Matrix.identity(f.matrix.field, H.index), f.matrix)
    return EquivariantMap(source, target, blocks, check=False)


def inflate(M: GModule, quotient_map: Sequence[Sequence[int]], group: ElemAbGroup) -> GModule:
    """Pull M back along G -> Q; row i of ``quotient_map`` is the image of g_i."""
    qm = [tuple(int(x) % group.p for x in row) for row in quotient_map]
    if len(qm) != group.r or any(len(row) != M.group.r for row in qm):
        raise ValueError(f"quotient map must be {group.r} x {M.group.r}")
    if M.group.r and Matrix(group.prime_field, qm).rank() != M.group.r:
        raise ValueError("quotient map is not surjective")
    action = tuple(M.element_matrix(row) for row in qm)
    tags = None
    if M.tags is not None and all(t.kind == "trivial" for t in M.tags):
        tags = tuple(Tag("trivial", None, t.multiplicity, t.start, t.stop) for t in M.tags)
    return GModule(group, M.field, M.dim, action, tags)


# ---------------------------------------------------------------------------
# permutation-module recognition

class PermutationIso(NamedTuple):
    subgroup: Subgroup
    matrix: Matrix  # Q with Q M Q^-1 = make_permutation(subgroup)


def recognize_permutation_module(M: GModule) -> PermutationIso | None:
    """If M permutes its basis transitively, the iso to the canonical k[G/E]."""
    G = M.group
    perms = []
    for A in M.action:
        a = A.a
        if not ((a == 0) | (a == 1)).all() or not (a.sum(axis=0) == 1).all() or not (a.sum(axis=1) == 1).all():
            return None
        perms.append(a.argmax(axis=0))
    # orbit of basis vector 0: element g sends b_0 to b_{image[g]}
    image = {}
    for v in G.elements():
        pos = 0
        for perm, c in zip(perms, v):
            for _ in range(c):
                pos = int(perm[pos])
        image[v] = pos
    if len(set(image.values())) != M.dim:
        return None
    E = subgroup_from_generators(G, [v for v, pos in image.items() if pos == 0])
    reps = coset_reps(E)
    q = np.zeros((M.dim, M.dim), dtype=np.int64)
    for k, t in enumerate(reps):
        q[k, image[t]] = 1
    Q = Matrix(M.field, q)
    if any(Q @ A != B @ Q for A, B in zip(M.action, _perm_action(E, M.field))):
        return None
    return PermutationIso(E, Q)

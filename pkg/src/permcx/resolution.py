"""Minimal free resolutions over kG and dimensions of H^j(G, M).

Free modules kG^b use the basis (generator a, group element g) with index
``a * |G| + index(g)``, elements in lex order, so ``g . e_a`` is a basis
vector.  A differential is recorded by the images of its generators:
``images[c]`` is the vector in P_{j-1} that generator c of P_j maps to.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .exactla import Field, Matrix, _kernel, _rref
from .gmod import EquivariantMap, GModule, make_free, make_permutation, make_trivial
from .groups import ElemAbGroup


def _difference_table(G: ElemAbGroup) -> np.ndarray:
    """S[g, h] = index(g - h)."""
    elems = np.array(G.elements(), dtype=np.int64).reshape(G.order, G.r)
    weights = G.p ** np.arange(G.r - 1, -1, -1)
    return (((elems[:, None, :] - elems[None, :, :]) % G.p) @ weights).astype(np.int64)


def _generator_shifts(G: ElemAbGroup) -> list[np.ndarray]:
    """For each generator g_i, the index array idx -> index(elem - g_i)."""
    S = _difference_table(G)
    gen_idx = [G.element_index(g) for g in G.generators()]
    return [S[:, gi] for gi in gen_idx]


def free_map_matrix(G: ElemAbGroup, images: np.ndarray, b_target: int) -> np.ndarray:
    """Matrix of the kG-map kG^b -> kG^{b_target} sending e_c to images[c]."""
    n = G.order
    b = images.shape[0]
    if b == 0 or b_target == 0:
        return np.zeros((b_target * n, b * n), dtype=np.int64)
    W = images.reshape(b, b_target, n)
    S = _difference_table(G)
    D = W[:, :, S]  # [c, a, g, h] = W[c, a, g - h]
    return D.transpose(1, 2, 0, 3).reshape(b_target * n, b * n)


def _minimal_generators(field: Field, K: np.ndarray, act) -> np.ndarray:
    """Rows of K whose images span K / rad K, chosen greedily in order."""
    if K.shape[0] == 0:
        return K
    rad_rows = np.concatenate([act(K, i) for i in range(act.r)], axis=0) if act.r else np.zeros((0, K.shape[1]), dtype=np.int64)
    R, piv = _rref(field, rad_rows) if rad_rows.shape[0] else (rad_rows, [])
    R = R[: len(piv)]
    reduced = K
    if piv:
        reduced = field.sub(K, field.matmul(K[:, piv], R))
    _, keep = _rref(field, reduced.T)
    return K[keep]


class _FreeAction:
    """(g_i - 1) applied to row vectors of kG^b."""

    def __init__(self, G: ElemAbGroup, field: Field):
        self.G, self.field, self.r = G, field, G.r
        self.shifts = _generator_shifts(G)

    def __call__(self, rows: np.ndarray, i: int) -> np.ndarray:
        n = self.G.order
        m = rows.shape[0]
        blocks = rows.reshape(m, -1, n)
        moved = blocks[:, :, self.shifts[i]].reshape(m, -1)
        return self.field.sub(moved, rows)


class _ModuleAction:
    """(g_i - 1) applied to row vectors of an arbitrary module M."""

    def __init__(self, M: GModule):
        self.M, self.field, self.r = M, M.field, M.group.r

    def __call__(self, rows: np.ndarray, i: int) -> np.ndarray:
        A = self.M.action[i].a
        return self.field.sub(self.field.matmul(rows, A.T), rows)


@dataclass
class ResolutionSlice:
    """P_J -> ... -> P_0 -> M -> 0 with P_j = kG^{ranks[j]}."""

    module: GModule
    ranks: list[int]
    images: list[np.ndarray]  # images[j] describes d_{j+1}: P_{j+1} -> P_j
    augmentation_images: np.ndarray  # row c = image of generator c in M
    _maps: list = dc_field(default_factory=list, repr=False)

    @property
    def group(self) -> ElemAbGroup:
        return self.module.group

    @property
    def field(self) -> Field:
        return self.module.field

    def free_module(self, j: int) -> GModule:
        return make_free(self.group, self.field, self.ranks[j])

    def differential_matrix(self, j: int) -> Matrix:
        """d_j: P_j -> P_{j-1}, for 1 <= j <= J."""
        return Matrix(self.field, free_map_matrix(self.group, self.images[j - 1], self.ranks[j - 1]))

    @property
    def differentials(self) -> list[EquivariantMap]:
        if not self._maps:
            for j in range(1, len(self.ranks)):
                self._maps.append(EquivariantMap(self.free_module(j), self.free_module(j - 1),
                                                 self.differential_matrix(j), check=False))
        return self._maps

    def augmentation_matrix(self) -> Matrix:
        M = self.module
        n = self.group.order
        b0 = self.ranks[0]
        cols = np.zeros((M.dim, b0 * n), dtype=np.int64)
        mats = M.element_matrices
        for c in range(b0):
            m = self.augmentation_images[c]
            for h in range(n):
                cols[:, c * n + h] = self.field.matmul(mats[h], m.reshape(-1, 1)).ravel()
        return Matrix(self.field, cols)

    def coefficients(self, j: int) -> np.ndarray:
        """alpha[c, a, g]: d_{j+1}(e'_c) = sum_a (sum_g alpha[c, a, g] g) e_a."""
        return self.images[j].reshape(self.ranks[j + 1], self.ranks[j], self.group.order)

    def is_minimal(self) -> bool:
        """Every kG-coefficient of every differential lies in the augmentation ideal."""
        f = self.field
        for j in range(len(self.images)):
            alpha = self.coefficients(j)
            if alpha.size and (alpha.sum(axis=2) % f.p if f.e == 1 else _field_sum(f, alpha)).any():
                return False
        return True

    def composites_vanish(self) -> bool:
        if len(self.ranks) > 1 and not (self.augmentation_matrix() @ self.differential_matrix(1)).is_zero():
            return False
        for j in range(2, len(self.ranks)):
            if not (self.differential_matrix(j - 1) @ self.differential_matrix(j)).is_zero():
                return False
        return True


def _field_sum(f: Field, alpha: np.ndarray) -> np.ndarray:
    out = np.zeros(alpha.shape[:2], dtype=np.int64)
    for g in range(alpha.shape[2]):
        out = f.add(out, alpha[:, :, g])
    return out


def minimal_free_resolution(M: GModule, J: int) -> ResolutionSlice:
    if J < 0:
        raise ValueError("resolution length must be nonnegative")
    G, f = M.group, M.field
    n = G.order
    # P_0: lift a basis of M / rad M, greedily from the standard basis
    gens0 = _minimal_generators(f, np.eye(M.dim, dtype=np.int64), _ModuleAction(M))
    ranks = [gens0.shape[0]]
    res = ResolutionSlice(M, ranks, [], gens0)
    K = _kernel(f, res.augmentation_matrix().a) if ranks[0] else np.zeros((0, 0), dtype=np.int64)
    act = _FreeAction(G, f)
    for j in range(1, J + 1):
        gens = _minimal_generators(f, K, act) if K.shape[0] else np.zeros((0, ranks[-1] * n), dtype=np.int64)
        ranks.append(gens.shape[0])
        res.images.append(gens)
        if gens.shape[0] == 0:
            K = np.zeros((0, 0), dtype=np.int64)
            continue
        K = _kernel(f, free_map_matrix(G, gens, ranks[-2]))
    return res


@lru_cache(maxsize=None)
def trivial_resolution(group: ElemAbGroup, field: Field, J: int) -> ResolutionSlice:
    return minimal_free_resolution(make_trivial(group, field, 1), J)


def cochain_matrix(res: ResolutionSlice, M: GModule, j: int) -> np.ndarray:
    """delta^j : Hom(P_j, M) = M^{b_j} -> M^{b_{j+1}} = Hom(P_{j+1}, M)."""
    f = M.field
    d = M.dim
    b_j, b_next = res.ranks[j], res.ranks[j + 1]
    if b_j == 0 or b_next == 0 or d == 0:
        return np.zeros((b_next * d, b_j * d), dtype=np.int64)
    alpha = res.coefficients(j).reshape(b_next * b_j, -1)
    R = M.element_matrices.reshape(res.group.order, d * d)
    blocks = f.matmul(alpha, R).reshape(b_next, b_j, d, d)
    return blocks.transpose(0, 2, 1, 3).reshape(b_next * d, b_j * d)


def _cohomology_direct(M: GModule, J: int) -> list[int]:
    res = trivial_resolution(M.group, M.field, J + 1)
    f = M.field
    ranks = []
    for j in range(J + 1):
        delta = cochain_matrix(res, M, j)
        ranks.append(len(_rref(f, delta)[1]) if delta.size else 0)
    return [res.ranks[j] * M.dim - ranks[j] - (ranks[j - 1] if j else 0) for j in range(J + 1)]


@lru_cache(maxsize=None)
def _summand_cohomology(E, field: Field, J: int) -> tuple[int, ...]:
    return tuple(_cohomology_direct(make_permutation(E, field), J))


def cohomology_dims(M: GModule, J: int) -> list[int]:
    """dim H^j(G, M) for 0 <= j <= J, from Hom(P_*, M) with P_* minimal for k.

    A module with verified tags splits Hom(P_*, M) into one block per
    summand; each k[G/E] block is computed once and cached.
    """
    if J < 0:
        raise ValueError("top degree must be nonnegative")
    if M.dim == 0:
        return [0] * (J + 1)
    if M.tags_verified:
        total = np.zeros(J + 1, dtype=np.int64)
        for _, E in M.summands():
            total += np.array(_summand_cohomology(E, M.field, J))
        return total.tolist()
    return _cohomology_direct(M, J)


def e1_dimension_table(C, J: int) -> list[list[int]]:
    """table[j][i] = dim H^j(G, C^i)."""
    from .complexes import validate

    problems = validate(C)
    if problems:
        raise ValueError(f"not a valid complex: {[str(v) for v in problems]}")
    cols = [cohomology_dims(M, J) for M in C.terms]
    return [[col[j] for col in cols] for j in range(J + 1)]

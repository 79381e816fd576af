"""Exact arithmetic in GF(p^e) and dense linear algebra over it.

Field elements are encoded as integers ``0 <= c < q``: the element
``sum_k a_k t^k`` of ``F_p[t]/(modulus)`` has code ``sum_k a_k p^k``.
For a prime field the code is just the residue.  Matrices hold numpy
``int64`` arrays of codes; row operations are vectorised, using plain
modular arithmetic for prime fields and lookup tables otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low -> high

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``e`` over F_p.

    Coefficients are returned low degree first, so ``(1, 1, 1)`` is
    ``t^2 + t + 1``.  For ``e == 1`` this is ``t``, i.e. ``(0, 1)``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    for low in product(range(p), repeat=e):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("unreachable: irreducibles exist in every degree")


# ---------------------------------------------------------------------------
# fields

@dataclass(frozen=True)
class Field:
    """The finite field F_q, q = p^e, as F_p[t]/(modulus).

    Use :func:`GF` to build one with the canonical modulus.
    """

    p: int
    e: int = 1
    modulus: tuple[int, ...] = dc_field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise ValueError(f"extension degree must be >= 1, got {self.e}")
        mod = tuple(int(c) % self.p for c in self.modulus) or find_irreducible(self.p, self.e)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise ValueError(f"modulus {mod} is not monic of degree {self.e}")
        if self.e == 1 and mod != (0, 1):
            raise ValueError("prime fields use the modulus convention t = (0, 1)")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={self.modulus})"

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # -- scalar encode/decode ------------------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.e:
            coeffs = _poly_mod(list(coeffs), list(self.modulus), self.p)
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + int(c) % self.p
        return code

    def __call__(self, value) -> "Scalar":
        """Coerce an int (residue or code) or coefficient list to a Scalar."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise ValueError(f"scalar from {value.field} used in {self}")
            return value
        if isinstance(value, (list, tuple)):
            return Scalar(self, self.from_coeffs(value))
        return Scalar(self, int(value) % self.p if self.e == 1 else self._int_code(int(value)))

    def _int_code(self, n: int) -> int:
        if not 0 <= n < self.q:
            raise ValueError(f"code {n} out of range for {self}")
        return n

    def element(self, code: int) -> "Scalar":
        return Scalar(self, self._int_code(code))

    def elements(self):
        return [Scalar(self, c) for c in range(self.q)]

    # -- tables ----------------------------------------------------------

    @cached_property
    def _digits(self) -> np.ndarray:
        codes = np.arange(self.q)
        return np.stack([(codes // self.p**k) % self.p for k in range(self.e)], axis=1)

    @cached_property
    def _reduction(self) -> np.ndarray:
        # row m: coefficients of t^m reduced modulo the modulus, m < 2e-1
        rows = []
        for m in range(2 * self.e - 1):
            v = [0] * m + [1]
            r = _poly_mod(v, list(self.modulus), self.p) if m >= self.e else v
            rows.append(list(r) + [0] * (self.e - len(r)))
        return np.array(rows, dtype=np.int64)

    @cached_property
    def _add_table(self) -> np.ndarray:
        d = self._digits
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return s @ (self.p ** np.arange(self.e))

    @cached_property
    def _mul_table(self) -> np.ndarray:
        d = self._digits
        conv = np.zeros((self.q, self.q, 2 * self.e - 1), dtype=np.int64)
        for i in range(self.e):
            for j in range(self.e):
                conv[:, :, i + j] += d[:, None, i] * d[None, :, j]
        red = (conv @ self._reduction) % self.p
        return red @ (self.p ** np.arange(self.e))

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return ((-self._digits) % self.p) @ (self.p ** np.arange(self.e))

    @cached_property
    def _inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        mt = self._mul_table
        for a in range(1, self.q):
            inv[a] = int(np.nonzero(mt[a] == 1)[0][0])
        return inv

    # -- vectorised arithmetic on codes (ints or arrays) -----------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._add_table[a, b]

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self._neg_table[a]

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return self._add_table[a, self._neg_table[b]]

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.e == 1:
            return pow(int(a), self.p - 2, self.p) if np.ndim(a) == 0 else \
                np.array([pow(int(x), self.p - 2, self.p) for x in np.ravel(a)]).reshape(np.shape(a))
        return self._inv_table[a]

    def power(self, a: int, n: int) -> int:
        result, base = 1, a
        if n < 0:
            base, n = self.inv(a), -n
        while n:
            if n & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            n >>= 1
        return result

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a @ b) % self.p
        da = [(a // self.p**k) % self.p for k in range(self.e)]
        db = [(b // self.p**k) % self.p for k in range(self.e)]
        out_shape = (a.shape[0], b.shape[1])
        comps = np.zeros((self.e,) + out_shape, dtype=np.int64)
        red = self._reduction
        for i in range(self.e):
            for j in range(self.e):
                prod = (da[i] @ db[j]) % self.p
                for k in range(self.e):
                    if red[i + j, k]:
                        comps[k] += red[i + j, k] * prod
        comps %= self.p
        return np.tensordot(self.p ** np.arange(self.e), comps, axes=1)

    def random(self, rng: np.random.Generator, shape=None):
        return rng.integers(0, self.q, size=shape)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "Field":
        return cls(int(obj["p"]), int(obj.get("e", 1)), tuple(obj.get("modulus", ())))


FieldSpec = Field


@lru_cache(maxsize=None)
def GF(p: int, e: int = 1) -> Field:
    return Field(p, e, find_irreducible(p, e))


# ---------------------------------------------------------------------------
# scalars

@dataclass(frozen=True)
class Scalar:
    """A single element of a :class:`Field`, with operator overloads."""

    field: Field
    code: int

    def _other(self, other) -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError(f"cannot mix {self.field} and {other.field}")
            return other.code
        return self.field(other).code

    def __add__(self, other):
        return Scalar(self.field, int(self.field.add(self.code, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, int(self.field.sub(self.code, self._other(other))))

    def __rsub__(self, other):
        return Scalar(self.field, int(self.field.sub(self._other(other), self.code)))

    def __mul__(self, other):
        return Scalar(self.field, int(self.field.mul(self.code, self._other(other))))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, int(self.field.neg(self.code)))

    def inverse(self) -> "Scalar":
        if self.code == 0:
            raise ZeroDivisionError(f"inverse of zero in {self.field}")
        return Scalar(self.field, int(self.field.inv(self.code)))

    def __truediv__(self, other):
        return self * Scalar(self.field, self._other(other)).inverse()

    def __pow__(self, n: int):
        return Scalar(self.field, self.field.power(self.code, n))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.code}"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
                terms.append(f"{c}{mono}" if (c != 1 or not mono) else mono)
        return " + ".join(reversed(terms)) or "0"


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Functional front end: ``op`` is one of add, mul, neg, inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# dense elimination on raw code arrays

def _rref(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64, copy=True)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r, c:] = field.mul(a[r, c:], field.inv(lead))
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, c:] = field.sub(a[rows, c:], field.mul(col[rows, None], a[r, c:][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def _kernel(field: Field, a: np.ndarray) -> np.ndarray:
    nrows, ncols = a.shape
    red, pivots = _rref(field, a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = field.neg(red[row, f])
    return basis


def _canonical_kernel_form(field: Field, rows: np.ndarray) -> np.ndarray:
    """The basis ``kernel_basis`` would return for a space spanned by ``rows``.

    That basis is reduced echelon with respect to reversed column order,
    so row-reducing the column-reversed rows recovers it.
    """
    if rows.shape[0] == 0:
        return rows.reshape(0, rows.shape[1])
    red, piv = _rref(field, rows[:, ::-1])
    red = red[: len(piv), ::-1]
    return red[::-1]


# ---------------------------------------------------------------------------
# matrices

class Matrix:
    """Immutable dense matrix over a finite field."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ValueError(f"matrix entries must be 2-dimensional, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            if field.e == 1:
                arr = arr % field.p
            else:
                raise ValueError(f"entry codes out of range for {field}")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], cols: int | None = None) -> "Matrix":
        """Rows of Scalars, codes, or (for extension fields) coefficient lists."""
        rows = list(rows)
        out = []
        for row in rows:
            out.append([_to_code(field, x) for x in row])
        if not out:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, out)

    # -- shape / access ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __getitem__(self, idx):
        out = self.a[idx]
        if np.ndim(out) == 0:
            return Scalar(self.field, int(out))
        return Matrix(self.field, np.atleast_2d(out))

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.a.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"cannot mix {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, self.field.sub(self.a, other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.neg(self.a))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.field, self.field.matmul(self.a, other.a))

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.field.mul(self.a, _to_code(self.field, c)))

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __pow__(self, n: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T)

    # -- linear algebra ----------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int], int]:
        red, piv = _rref(self.field, self.a)
        return Matrix(self.field, red), piv, len(piv)

    def rank(self) -> int:
        if self.a.size == 0:
            return 0
        return len(_rref(self.field, self.a)[1])

    def kernel(self) -> "Matrix":
        """Rows form the canonical basis of the right null space."""
        return Matrix(self.field, _kernel(self.field, self.a))

    def row_space(self) -> "Matrix":
        """Canonical (RREF, zero rows removed) basis of the row space."""
        red, piv = _rref(self.field, self.a)
        return Matrix(self.field, red[: len(piv)])

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """One solution X of ``self @ X == rhs`` (free variables zero), or None."""
        self._check(rhs)
        if rhs.rows != self.rows:
            raise ValueError(f"rhs has {rhs.rows} rows, system has {self.rows}")
        n = self.cols
        aug = np.concatenate([self.a, rhs.a], axis=1)
        red, piv = _rref(self.field, aug)
        if piv and piv[-1] >= n:
            return None
        x = np.zeros((n, rhs.cols), dtype=np.int64)
        for row, pc in enumerate(piv):
            x[pc] = red[row, n:]
        return Matrix(self.field, x)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(Matrix.identity(self.field, self.rows))
        if x is None or self.rank() != self.rows:
            raise ZeroDivisionError("matrix is singular")
        return x

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def contains_rows(self, other: "Matrix") -> bool:
        """Whether every row of ``other`` lies in the row space of ``self``."""
        if other.rows == 0:
            return True
        return self.rank() == vstack([self, other], self.field, self.cols).rank()

    def to_json(self) -> dict:
        if self.field.e == 1:
            entries = self.a.tolist()
        else:
            entries = [[list(self.field.coeffs(int(c))) for c in row] for row in self.a]
        return {"rows": self.rows, "cols": self.cols, "entries": entries}

    @classmethod
    def from_json(cls, field: Field, obj) -> "Matrix":
        if isinstance(obj, list):
            return cls.from_rows(field, obj)
        rows, cols = int(obj["rows"]), int(obj["cols"])
        m = cls.from_rows(field, obj["entries"], cols=cols)
        if rows == 0:
            m = cls.zeros(field, 0, cols)
        if m.shape != (rows, cols):
            raise ValueError(f"declared shape {(rows, cols)} but entries have shape {m.shape}")
        return m


def _to_code(field: Field, x) -> int:
    if isinstance(x, Scalar):
        if x.field != field:
            raise ValueError(f"scalar from {x.field} used in {field}")
        return x.code
    if isinstance(x, (list, tuple)):
        return field.from_coeffs(x)
    x = int(x)
    if field.e == 1:
        return x % field.p
    if not 0 <= x < field.q:
        raise ValueError(f"code {x} out of range for {field}")
    return x


def hstack(mats: Sequence[Matrix], field: Field, rows: int) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows, 0)
    return Matrix(field, np.concatenate([m.a for m in mats], axis=1))


def vstack(mats: Sequence[Matrix], field: Field, cols: int) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols)
    return Matrix(field, np.concatenate([m.a for m in mats], axis=0))


def block_diag(mats: Sequence[Matrix], field: Field) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    i = j = 0
    for m in mats:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix(field, out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    big = f.mul(a.a[:, None, :, None], b.a[None, :, None, :])
    return Matrix(f, big.reshape(a.rows * b.rows, a.cols * b.cols))


# functional aliases

def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    return m.rref()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel()


def solve(m: Matrix, rhs: Matrix) -> Matrix | None:
    return m.solve(rhs)


def canonical_kernel_form(m: Matrix) -> Matrix:
    return Matrix(m.field, _canonical_kernel_form(m.field, m.a))

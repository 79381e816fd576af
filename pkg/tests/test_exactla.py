import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import code, digits, nullity_prime, poly_mulmod
from permcx.exactla import GF, Field, Matrix, Scalar, field_arith, find_irreducible, is_irreducible, kron

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)]


# -- moduli -------------------------------------------------------------------

def test_prime_field_modulus_is_t():
    assert find_irreducible(2, 1) == (0, 1)


def test_gf4_modulus():
    assert find_irreducible(2, 2) == (1, 1, 1)


def test_gf9_modulus_is_lex_smallest():
    assert find_irreducible(3, 2) == (1, 0, 1)
    # every smaller monic quadratic (compared low to high) is reducible
    smaller = [(a, b, 1) for a in range(3) for b in range(3) if (a, b) < (1, 0)]
    assert not any(is_irreducible(m, 3) for m in smaller)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError, match="reducible"):
        Field(2, 2, (1, 0, 1))


def test_composite_characteristic_rejected():
    with pytest.raises(ValueError, match="not prime"):
        GF(4)


# -- arithmetic ----------------------------------------------------------------

def test_f3_inverse_of_two():
    f = GF(3)
    assert field_arith(f(2), None, "inv") == f(2)


def test_f4_t_squared():
    f = GF(2, 2)
    t = f([0, 1])
    assert (t * t).coeffs == (1, 1)


@pytest.mark.parametrize("p,e", FIELDS)
def test_add_neg_is_zero(p, e):
    f = GF(p, e)
    for x in range(f.q):
        assert f.add(x, f.neg(x)) == 0


@pytest.mark.parametrize("p,e", FIELDS)
def test_mul_table_matches_polynomial_oracle(p, e):
    f = GF(p, e)
    for x in range(f.q):
        for y in range(f.q):
            want = code(poly_mulmod(digits(x, p, e), digits(y, p, e), list(f.modulus), p), p)
            assert f.mul(x, y) == want


@pytest.mark.parametrize("p,e", FIELDS)
def test_inverse_and_frobenius(p, e):
    f = GF(p, e)
    for x in range(1, f.q):
        assert f.mul(x, f.inv(x)) == 1
        assert f.power(x, f.q) == x
    for x in range(f.q):
        for y in range(f.q):
            # Frobenius is additive
            assert f.power(f.add(x, y), p) == f.add(f.power(x, p), f.power(y, p))


@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pe, data):
    f = GF(*pe)
    a, b, c = (f.element(data.draw(st.integers(0, f.q - 1))) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == f(0)


def test_scalar_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        GF(5)(0).inverse()


# -- elimination ---------------------------------------------------------------

def test_rref_identity():
    f = GF(3)
    R, piv, rank = Matrix.identity(f, 3).rref()
    assert R == Matrix.identity(f, 3) and piv == [0, 1, 2] and rank == 3


def test_rref_ones():
    f = GF(2)
    R, piv, rank = Matrix(f, [[1, 1], [1, 1]]).rref()
    assert R == Matrix(f, [[1, 1], [0, 0]]) and rank == 1


def test_rref_zero():
    f = GF(2)
    R, piv, rank = Matrix.zeros(f, 2, 3).rref()
    assert R.is_zero() and piv == [] and rank == 0


def test_kernel_examples():
    f = GF(2)
    assert Matrix.identity(f, 3).kernel().rows == 0
    assert Matrix(f, [[1, 1], [1, 1]]).kernel() == Matrix(f, [[1, 1]])
    assert Matrix.zeros(f, 1, 2).kernel() == Matrix.identity(f, 2)


def test_solve_examples():
    f = GF(2)
    v = Matrix(f, [[1], [0], [1]])
    assert Matrix.identity(f, 3).solve(v) == v
    assert Matrix(f, [[1, 1]]).solve(Matrix(f, [[1]])) == Matrix(f, [[1], [0]])
    assert Matrix(f, [[0]]).solve(Matrix(f, [[1]])) is None


def test_inverse_of_singular_raises():
    with pytest.raises(ZeroDivisionError):
        Matrix(GF(3), [[1, 2], [2, 1]]).inverse()


def _matrices(p, max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=60)
@given(st.sampled_from([2, 3]), st.data())
def test_rank_nullity_against_enumeration(p, data):
    rows = data.draw(_matrices(p))
    A = Matrix(GF(p), rows)
    K = A.kernel()
    assert A.rank() + K.rows == A.cols
    assert K.rows == nullity_prime(rows, p)
    assert (A @ K.T).is_zero()


@settings(max_examples=60)
@given(st.sampled_from(FIELDS), st.data())
def test_rref_is_canonical(pe, data):
    f = GF(*pe)
    rows = data.draw(st.lists(st.lists(st.integers(0, f.q - 1), min_size=4, max_size=4), min_size=1, max_size=4))
    A = Matrix(f, rows)
    R, piv, rank = A.rref()
    # row operations do not change the reduced form
    P = Matrix(f, np.eye(A.rows, dtype=np.int64)[::-1])
    assert (P @ A).rref()[0] == R
    assert R.rref()[0] == R
    for i, c in enumerate(piv):
        assert R[i, c] == f(1)
        assert all(R[j, c] == f(0) for j in range(R.rows) if j != i)


@settings(max_examples=60)
@given(st.sampled_from(FIELDS), st.data())
def test_solve_and_inverse(pe, data):
    f = GF(*pe)
    n = data.draw(st.integers(1, 4))
    rows = data.draw(st.lists(st.lists(st.integers(0, f.q - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    A = Matrix(f, rows)
    b = Matrix(f, [[data.draw(st.integers(0, f.q - 1))] for _ in range(n)])
    x = A.solve(b)
    if x is not None:
        assert A @ x == b
    if A.is_invertible():
        assert A @ A.inverse() == Matrix.identity(f, n)
        assert A ** -2 @ A ** 2 == Matrix.identity(f, n)
    else:
        assert A.rank() < n


def test_extension_matmul_matches_scalar_loop():
    f = GF(3, 2)
    rng = np.random.default_rng(0)
    A, B = f.random(rng, (3, 4)), f.random(rng, (4, 2))
    want = np.zeros((3, 2), dtype=np.int64)
    for i in range(3):
        for j in range(2):
            for k in range(4):
                want[i, j] = f.add(want[i, j], f.mul(A[i, k], B[k, j]))
    assert np.array_equal(f.matmul(A, B), want)


def test_kron_shape_and_entries():
    f = GF(2)
    K = kron(Matrix(f, [[1, 1]]), Matrix.identity(f, 2))
    assert K == Matrix(f, [[1, 0, 1, 0], [0, 1, 0, 1]])


@pytest.mark.parametrize("p,e", [(2, 1), (3, 2)])
def test_matrix_json_round_trip(p, e):
    f = GF(p, e)
    A = Matrix(f, f.random(np.random.default_rng(1), (2, 3)))
    assert Matrix.from_json(f, A.to_json()) == A
    assert Field.from_json(f.to_json()) == f


def test_matrix_is_immutable():
    A = Matrix.identity(GF(2), 2)
    with pytest.raises((AttributeError, ValueError)):
        A.a[0, 0] = 0
    assert isinstance(A[0, 0], Scalar)

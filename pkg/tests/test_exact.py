import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from totpos.exact import (
    MinorIndex,
    RatMatrix,
    all_minors,
    as_rat,
    bareiss_det,
    cauchy_binet_check,
    direct_sum,
    minor,
    minor_indices,
)
from totpos.radical import (
    FactorizationCapError,
    PRIME_CAP,
    RadicalScalar,
    ScaledMatrix,
    factor_int,
    rational_power,
    rational_root,
)

from oracles import brute_minors, cofactor_det, naive_matmul

M = RatMatrix.from_rows
VANDERMONDE = [[1, 1, 1], [1, 2, 4], [1, 3, 9]]


def rand_rows(rng, m, n, lo=-6, hi=6):
    return [[Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(n)] for _ in range(m)]


# -- coercion and matrices ---------------------------------------------------

def test_as_rat_rejects_floats_and_bools():
    assert as_rat("3/6") == Fraction(1, 2)
    assert as_rat(4) == 4
    with pytest.raises(TypeError):
        as_rat(0.5)
    with pytest.raises(TypeError):
        as_rat(True)


def test_matrix_validation():
    with pytest.raises(ValueError):
        M([[1, 2], [3]])
    with pytest.raises(TypeError):
        M([[1.0]])


def test_unit_and_antidiag():
    assert M([[1, 3], [0, 1]]) == RatMatrix.unit(2, 1, 2, 3)
    assert RatMatrix.antidiag([1, 2]) == M([[0, 1], [2, 0]])


def test_matmul_against_naive_product():
    rng = random.Random(1)
    for _ in range(50):
        m, k, n = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        A, B = rand_rows(rng, m, k), rand_rows(rng, k, n)
        assert (M(A) @ M(B)).to_rows() == naive_matmul(A, B)


def test_inverse_and_det():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 5)
        A = M(rand_rows(rng, n, n))
        d = cofactor_det(A.to_rows())
        assert A.det() == d
        if d:
            assert A @ A.inverse() == RatMatrix.identity(n)
        else:
            with pytest.raises(ValueError):
                A.inverse()


def test_bareiss_against_cofactor():
    rng = random.Random(3)
    for _ in range(40):
        rows = rand_rows(rng, 4, 4)
        assert bareiss_det([r[:] for r in rows]) == cofactor_det(rows)


def test_direct_sum():
    assert direct_sum(M([[2]]), M([[1, 1], [0, 1]])) == M([[2, 0, 0], [0, 1, 1], [0, 0, 1]])


# -- minors -----------------------------------------------------------------

def test_minor_examples():
    assert minor(RatMatrix.identity(3), MinorIndex((1, 2), (1, 2))) == 1
    assert minor(M([[2, 1], [1, 1]]), MinorIndex((1, 2), (1, 2))) == 1
    assert minor(M(VANDERMONDE), MinorIndex((1, 2, 3), (1, 2, 3))) == 2
    assert cofactor_det(VANDERMONDE) == 2


def test_minor_index_validation():
    with pytest.raises(ValueError):
        MinorIndex((1, 2), (1,))
    with pytest.raises(ValueError):
        MinorIndex((2, 1), (1, 2))
    with pytest.raises(ValueError):
        MinorIndex((0,), (1,))
    with pytest.raises(IndexError):
        minor(RatMatrix.identity(2), MinorIndex((3,), (1,)))


def test_all_minors_against_cofactor_oracle():
    rng = random.Random(4)
    for _ in range(30):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        rows = rand_rows(rng, m, n)
        assert all_minors(M(rows)) == brute_minors(rows)


def test_minor_indices_order_and_count():
    idx = list(minor_indices(3))
    assert len(idx) == 9 + 9 + 1
    assert idx[0] == MinorIndex((1,), (1,))
    assert idx[-1] == MinorIndex((1, 2, 3), (1, 2, 3))


# -- Cauchy-Binet -----------------------------------------------------------

def test_cauchy_binet_examples():
    r = cauchy_binet_check(RatMatrix.identity(2), RatMatrix.identity(2))
    assert r.equal and r.det_product == 1
    A = M([[1, 1, 0], [0, 1, 1]])
    r = cauchy_binet_check(A, A.T)
    assert r.equal and r.det_product == r.expansion == 3
    r = cauchy_binet_check(M([[1, 2], [3, 4]]), RatMatrix.identity(2))
    assert r.equal and r.det_product == -2


def test_cauchy_binet_random_pairs():
    rng = random.Random(5)
    for _ in range(60):
        m = rng.randint(1, 3)
        n = rng.randint(m, 5)
        A, B = M(rand_rows(rng, m, n)), M(rand_rows(rng, n, m))
        r = cauchy_binet_check(A, B)
        assert r.equal
        assert r.det_product == cofactor_det(naive_matmul(A.to_rows(), B.to_rows()))


def test_cauchy_binet_shape_errors():
    with pytest.raises(ValueError):
        cauchy_binet_check(M([[1], [2]]), M([[1, 2]]))
    with pytest.raises(ValueError):
        cauchy_binet_check(M([[1, 2]]), M([[1, 2]]))


# -- radical scalars ----------------------------------------------------------

def test_radical_examples():
    half = Fraction(1, 2)
    s = RadicalScalar.from_prime_powers({2: half}) * RadicalScalar.from_prime_powers({2: half})
    assert s == RadicalScalar(2) and s.as_dict() == {2: 1}
    t = RadicalScalar.from_prime_powers({3: Fraction(1, 3)}) * RadicalScalar.from_prime_powers({3: Fraction(2, 3)})
    assert t.as_dict() == {3: 1}
    assert rational_root(12, 2).as_dict() == {2: 1, 3: half}


def test_rational_root_examples():
    assert rational_root(1, 5).as_dict() == {}
    assert rational_root(1, 5) == RadicalScalar.one()
    assert rational_root(4, 2).as_dict() == {2: 1}
    assert rational_root(Fraction(8, 27), 3).as_dict() == {2: 1, 3: -1}
    with pytest.raises(ValueError):
        rational_root(0, 2)
    with pytest.raises(ValueError):
        rational_root(-4, 2)


def test_factorization_cap():
    p = 1_000_003  # prime above the cap
    with pytest.raises(FactorizationCapError):
        factor_int(p)
    assert factor_int(PRIME_CAP - 1)  # composite below the cap factors fine
    # large rational parts are fine as long as no radicand needs them
    big = RadicalScalar(Fraction(p, 7))
    assert (big * big.inverse()) == RadicalScalar()
    with pytest.raises(FactorizationCapError):
        rational_root(p, 2)


pos_rat = st.builds(Fraction, st.integers(1, 500), st.integers(1, 500))
small_exp = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 6))


@settings(max_examples=200, deadline=None)
@given(pos_rat, small_exp, small_exp)
def test_power_laws(x, a, b):
    s = RadicalScalar.from_rational(x)
    assert (s ** a) * (s ** b) == s ** (a + b)
    assert (s ** a) ** b == s ** (a * b)
    if a:
        assert float(s ** a) == pytest.approx(float(x) ** float(a), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(pos_rat, pos_rat, small_exp)
def test_multiplication_is_commutative_and_invertible(x, y, e):
    s, t = rational_power(x, e), rational_power(y, e)
    assert s * t == t * s
    assert s * t == rational_power(x * y, e)
    assert (s / t) * t == s
    assert s * s.inverse() == RadicalScalar.one()


@settings(max_examples=100, deadline=None)
@given(pos_rat, st.integers(1, 6))
def test_root_to_the_power_is_identity(x, k):
    assert rational_root(x, k) ** k == RadicalScalar.from_rational(x)


def test_radical_canonical_form():
    s = RadicalScalar(Fraction(3), ((2, Fraction(5, 2)),))
    assert s.rational == 12 and s.factors == ((2, Fraction(1, 2)),)
    assert RadicalScalar(Fraction(1), ((2, Fraction(-1, 2)),)).factors == ((2, Fraction(1, 2)),)
    with pytest.raises(ValueError):
        RadicalScalar(Fraction(-1))


def test_scaled_matrix_normal_form():
    S = ScaledMatrix.of(M([[2, 4], [0, 6]]))
    assert S.scale == RadicalScalar(2) and S.body == M([[1, 2], [0, 3]])
    T = ScaledMatrix.of(M([[0, 3], [1, 0]]), rational_root(2, 2))
    assert T.body[0, 1] == 1
    assert not T.is_rational()
    with pytest.raises(ValueError):
        T.to_matrix()
    assert ScaledMatrix.of(M([[1, 1], [0, 1]]), RadicalScalar(3)).to_matrix() == M([[3, 3], [0, 3]])
    with pytest.raises(ValueError):
        ScaledMatrix.of(RatMatrix.zeros(2))
    with pytest.raises(ValueError):
        ScaledMatrix.of(M([[-1, 0], [0, 1]]))

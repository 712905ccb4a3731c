from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hbinv.scalar import (Cyc, Matrix, cyclotomic_polynomial, euler_phi,
                          FieldMismatchError)

CONDUCTORS = [1, 3, 4, 5, 7, 8, 12]


def cycs(n):
    phi = euler_phi(n)
    coeff = st.integers(min_value=-9, max_value=9)
    return st.builds(
        lambda num, den: Cyc(n, tuple(num), den),
        st.lists(coeff, min_size=phi, max_size=phi),
        st.integers(min_value=1, max_value=6))


any_cyc = st.sampled_from(CONDUCTORS).flatmap(cycs)


@given(st.sampled_from(CONDUCTORS).flatmap(
    lambda n: st.tuples(cycs(n), cycs(n), cycs(n))))
@settings(max_examples=200, deadline=None)
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == Cyc.zero(a.n)
    assert a * Cyc.one(a.n) == a


@given(any_cyc)
@settings(max_examples=150, deadline=None)
def test_multiplicative_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == Cyc.one(a.n)
        assert (a / a) == Cyc.one(a.n)


@given(any_cyc)
@settings(max_examples=150, deadline=None)
def test_conjugation_is_a_ring_involution(a):
    assert a.conj().conj() == a
    b = Cyc.zeta(a.n) + Cyc.from_rational(Fraction(1, 2))
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@pytest.mark.parametrize("n", CONDUCTORS)
def test_zeta_is_a_primitive_root(n):
    z = Cyc.zeta(n)
    assert z ** n == Cyc.one(n)
    for k in range(1, n):
        assert z ** k != Cyc.one(n)
    assert z.conj() == z ** (n - 1)


@pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 12])
def test_cyclotomic_polynomial_kills_zeta(n):
    poly = cyclotomic_polynomial(n)
    assert len(poly) == euler_phi(n) + 1
    z = Cyc.zeta(n)
    acc = Cyc.zero(n)
    for i, c in enumerate(poly):
        acc = acc + Cyc.from_rational(c) * z ** i
    assert acc.is_zero()


def test_canonical_form_examples():
    z = Cyc.zeta(4)
    assert z * z == Cyc.from_rational(-1, 4)
    assert (z + 1) * (z - 1) == z * z - Cyc.one(4)
    # conductor 3: 1 + z + z^2 = 0
    w = Cyc.zeta(3)
    assert Cyc.one(3) + w + w * w == Cyc.zero(3)


def test_rational_interop_and_lift():
    half = Cyc.from_rational(Fraction(1, 2))
    z = Cyc.zeta(8)
    assert (half * z) + (half * z) == z
    assert half.lift(8) * Cyc.from_rational(2, 8) == Cyc.one(8)
    with pytest.raises(FieldMismatchError):
        Cyc.zeta(3) + Cyc.zeta(4)


def test_negative_powers():
    z = Cyc.zeta(5)
    assert z ** -1 == z ** 4
    assert (z + 1) ** -2 * (z + 1) ** 2 == Cyc.one(5)


def test_matrix_inverse_and_solve():
    z = Cyc.zeta(4)
    M = Matrix.from_rows([[Cyc.one(4), z], [z, Cyc.one(4) + z]], 4)
    Minv = M.inverse()
    assert M @ Minv == Matrix.identity(2, 4)
    b = [z, Cyc.one(4)]
    x = M.solve(b)
    got = [sum((M[i, j] * x[j] for j in range(2)), Cyc.zero(4))
           for i in range(2)]
    assert got == b


def test_nullspace_is_exact():
    one = Cyc.one(1)
    two = Cyc.from_rational(2)
    M = Matrix.from_rows([[one, two], [two, two + two]], 1)
    basis = M.nullspace()
    assert len(basis) == 1
    v = basis[0]
    for i in range(2):
        acc = sum((M[i, j] * v[j] for j in range(2)), Cyc.zero(1))
        assert acc.is_zero()

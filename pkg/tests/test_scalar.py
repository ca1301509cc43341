import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from extremal_marginals.scalar import I, ONE, ZERO, RadScalar, is_squarefree, sqrt, squarefree_split

RADICANDS = [1, 2, 3, 5, 6, 7, 10, 11, 15]

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, max_terms=3):
    n = draw(st.integers(0, max_terms))
    rads = draw(st.lists(st.sampled_from(RADICANDS), min_size=n, max_size=n, unique=True))
    return RadScalar.from_terms((m, draw(fractions), draw(fractions)) for m in rads)


def close(a: RadScalar, z: complex, tol=1e-9) -> bool:
    return abs(a.to_float() - z) <= tol * max(1.0, abs(z))


def test_squarefree_split():
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(49) == (7, 1)
    assert is_squarefree(30) and not is_squarefree(18)


def test_sqrt_normalizes_radicand():
    assert sqrt(8) == sqrt(2) * 2
    assert sqrt(Fraction(1, 2)) == sqrt(2) / 2
    assert sqrt(Fraction(9, 4)) == RadScalar(Fraction(3, 2))
    assert sqrt(-3) == sqrt(3) * I
    assert sqrt(0) == ZERO


def test_radical_products():
    assert sqrt(2) * sqrt(2) == RadScalar(2)
    assert sqrt(2) * sqrt(3) == sqrt(6)
    assert sqrt(6) * sqrt(10) == sqrt(15) * 2
    assert sqrt(3) * sqrt(2) * I == sqrt(6) * I
    assert I * I == -ONE


def test_zero_terms_never_stored():
    x = sqrt(2) - sqrt(2)
    assert x.is_zero() and x == 0 and not x
    assert (sqrt(2) + 1 - 1).terms == {2: (Fraction(1), Fraction(0))}


def test_inverse_of_multi_radical():
    x = 1 + sqrt(2) + sqrt(3)
    assert x * x.inverse() == ONE
    y = sqrt(3) * I + sqrt(2)
    assert y * (1 / y) == ONE
    # 3/(4 sqrt 11) = 3 sqrt 11 / 44
    assert RadScalar(Fraction(3, 4)) / sqrt(11) == sqrt(11) * Fraction(3, 44)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_conjugate_and_realness():
    z = sqrt(3) * I + 2
    assert z.conjugate() == 2 - sqrt(3) * I
    assert (z * z.conjugate()).is_rational()
    assert (z * z.conjugate()).to_rational() == 7
    assert not z.is_real() and sqrt(5).is_real()


def test_json_round_trip():
    x = RadScalar.from_terms([(1, Fraction(1, 3), 0), (6, -2, Fraction(5, 7))])
    data = x.to_json()
    assert data[0] == {"rad": 1, "re": "1/3", "im": "0"}
    assert RadScalar.from_json(data) == x


def test_from_json_rejects_non_squarefree():
    with pytest.raises(ValueError):
        RadScalar.from_json([{"rad": 4, "re": "1", "im": "0"}])


def test_float_image():
    assert close(sqrt(2) * 3 + I, complex(3 * math.sqrt(2), 1))


def test_str():
    assert str(ZERO) == "0"
    assert str(sqrt(2) * 3) == "3*sqrt(2)"


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a


@settings(max_examples=60)
@given(scalars(max_terms=4))
def test_inverse_property(a):
    if a.is_zero():
        return
    assert a * a.inverse() == ONE


@given(scalars(), scalars())
def test_float_homomorphism(a, b):
    assert close(a * b, a.to_float() * b.to_float(), 1e-8)
    assert close(a + b, a.to_float() + b.to_float(), 1e-8)
    assert close(a.conjugate(), a.to_float().conjugate(), 1e-8)


@given(scalars())
def test_hash_consistent_with_equality(a):
    b = RadScalar.from_json(a.to_json())
    assert a == b and hash(a) == hash(b)


def test_power():
    assert sqrt(2) ** 4 == RadScalar(4)
    assert sqrt(2) ** -2 == RadScalar(Fraction(1, 2))
    assert cmath.isclose((I ** 3).to_float(), -1j)

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from posthopf.exactmath import (
    FpElement,
    is_odd_prime,
    kernel_basis,
    mat_vec,
    parse_rational,
    rational_mod_p,
    rref,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def test_fraction_examples():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    assert Fraction(2, 4) == Fraction(1, 2)
    assert Fraction(2, 4).numerator == 1 and Fraction(2, 4).denominator == 2


def test_fraction_serialization():
    assert str(Fraction(3, 4)) == "3/4"
    assert str(Fraction(-3, 4)) == "-3/4"
    assert str(Fraction(7)) == "7"
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-5") == Fraction(-5)
    with pytest.raises(ValueError):
        parse_rational("1.5")
    with pytest.raises(ValueError):
        parse_rational("a")


@given(rationals, rationals)
def test_fraction_roundtrip_add(a, b):
    assert (a + b) - b == a


@given(rationals, rationals.filter(lambda x: x != 0))
def test_fraction_roundtrip_mul(a, b):
    assert (a * b) / b == a


def test_odd_prime_detection():
    assert [p for p in range(2, 30) if is_odd_prime(p)] == [3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_fp_basic():
    x = FpElement(7, 5)
    assert x.value == 2 and x == 2
    assert FpElement(2, 5).inv() == FpElement(3, 5)
    assert FpElement(2, 5) / FpElement(3, 5) == FpElement(4, 5)
    assert -FpElement(1, 5) == FpElement(4, 5)
    assert FpElement(2, 5) ** 3 == FpElement(3, 5)


def test_fp_rejects_bad_modulus():
    with pytest.raises(ValueError):
        FpElement(1, 2)
    with pytest.raises(ValueError):
        FpElement(1, 9)


def test_fp_mixed_moduli():
    with pytest.raises(ValueError):
        FpElement(1, 5) + FpElement(1, 7)
    assert FpElement(1, 5) != FpElement(1, 7)


def test_fp_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        FpElement(0, 5).inv()
    with pytest.raises(ZeroDivisionError):
        FpElement(1, 5) / FpElement(0, 5)


def test_fp_rational_coercion():
    assert rational_mod_p(Fraction(1, 2), 5) == FpElement(3, 5)
    assert Fraction(1, 2) * FpElement(2, 5) == FpElement(1, 5)
    with pytest.raises(ZeroDivisionError):
        rational_mod_p(Fraction(1, 5), 5)


def F(*vals):
    return [Fraction(v) for v in vals]


def test_rref_examples():
    red, pivots = rref([F(1, 0), F(0, 1)])
    assert red == [F(1, 0), F(0, 1)] and pivots == [0, 1]

    red, pivots = rref([F(2, 4), F(1, 2)])
    assert red == [F(1, 2), F(0, 0)] and pivots == [0]

    red, pivots = rref([F(0, 1), F(1, 0)])
    assert red == [F(1, 0), F(0, 1)] and pivots == [0, 1]


def test_kernel_examples():
    assert kernel_basis([F(1, 0), F(0, 1)]) == []
    assert kernel_basis([F(1, -1)]) == [[Fraction(1), Fraction(1)]]
    assert kernel_basis([F(0, 0), F(0, 0)]) == [
        [Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(1)],
    ]


def _random_matrix(rng, rows, cols):
    return [
        [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
        for _ in range(rows)
    ]


def test_rref_idempotent_and_rank_nullity():
    rng = random.Random(7)
    for _ in range(60):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        red, pivots = rref(m)
        again, pivots2 = rref(red)
        assert again == red and pivots2 == pivots
        ker = kernel_basis(m)
        assert len(pivots) + len(ker) == len(m[0])
        for v in ker:
            assert all(x == 0 for x in mat_vec(m, v))


def test_kernel_over_prime_field():
    rng = random.Random(11)
    p = 7
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = [[FpElement(rng.randrange(p), p) for _ in range(cols)] for _ in range(rows)]
        _red, pivots = rref(m)
        ker = kernel_basis(m)
        assert len(pivots) + len(ker) == cols
        for v in ker:
            assert all(x == 0 for x in mat_vec(m, v))

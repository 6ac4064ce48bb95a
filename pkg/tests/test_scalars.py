import math
from fractions import Fraction

import pytest

from cutproject.scalars import (
    GOLDEN,
    GOLDEN_CONJ,
    SQRT5,
    ExactnessError,
    Scalar,
    parse_scalar,
)


def test_rational_arithmetic():
    a = Scalar(Fraction(3, 4))
    b = Scalar(Fraction(1, 4))
    assert (a + b).as_fraction() == 1
    assert (a - b).as_fraction() == Fraction(1, 2)
    assert (a * b).as_fraction() == Fraction(3, 16)
    assert (a / b).as_fraction() == 3


def test_sqrt5_identities():
    assert SQRT5 * SQRT5 == Scalar(5)
    # golden ratio satisfies x^2 = x + 1
    assert GOLDEN * GOLDEN == GOLDEN + 1
    assert GOLDEN * GOLDEN_CONJ == Scalar(-1)
    assert GOLDEN + GOLDEN_CONJ == Scalar(1)


def test_mixed_radicals_multiply():
    r2 = Scalar.sqrt(2)
    r5 = Scalar.sqrt(5)
    r10 = Scalar.sqrt(10)
    assert r2 * r5 == r10
    assert r2 * r2 == Scalar(2)
    c = Scalar.root(2, 3)
    assert c * c * c == Scalar(2)
    assert c ** 3 == Scalar(2)


def test_sign_and_order():
    # decimal expansions checked against 60-digit references
    assert SQRT5.sign() == 1
    assert (SQRT5 - Scalar(Fraction(9, 4))).sign() < 0  # sqrt5 = 2.2360...
    assert (SQRT5 - Scalar(Fraction(2236, 1000))).sign() > 0
    assert GOLDEN > 1
    assert GOLDEN < 2
    assert GOLDEN_CONJ < 0
    vals = [Scalar(1), GOLDEN, SQRT5, Scalar(3), Scalar.root(2, 3)]
    assert sorted(vals) == [Scalar(1), Scalar.root(2, 3), GOLDEN, SQRT5, Scalar(3)]


def test_equality_is_exact():
    # (1+sqrt5)/2 assembled two different ways
    x = (Scalar(1) + SQRT5) / 2
    y = Scalar(Fraction(1, 2)) + SQRT5 * Fraction(1, 2)
    assert x == y
    assert hash(x) == hash(y)
    assert x != y + Scalar(Fraction(1, 10 ** 30))


def test_inverse_single_term():
    assert Scalar.sqrt(2).inverse() == Scalar.sqrt(2) / 2
    c = Scalar.root(2, 3)
    assert c.inverse() * c == Scalar(1)
    assert c.inverse() == c * c / 2


def test_inverse_sum():
    x = GOLDEN  # 1/golden = golden - 1
    assert x.inverse() == GOLDEN - 1
    y = Scalar(1) + Scalar.sqrt(2) + Scalar.sqrt(3)
    assert y.inverse() * y == Scalar(1)
    z = Scalar(1) + Scalar.root(2, 3)
    assert z.inverse() * z == Scalar(1)


def test_floor():
    assert Scalar(Fraction(7, 2)).floor() == 3
    assert Scalar(Fraction(-7, 2)).floor() == -4
    assert SQRT5.floor() == 2
    assert (-SQRT5).floor() == -3
    assert (GOLDEN * 10).floor() == 16  # 16.18...
    assert Scalar.root(2, 3).floor() == 1


def test_pi_and_e():
    pi = Scalar.const("pi")
    e = Scalar.const("e")
    lo, hi = pi.bounds(30)
    # pi = 3.14159265358979323846264338327950...
    assert Fraction(314159265358979323846, 10 ** 20) < lo < hi
    assert hi < Fraction(314159265358979323847, 10 ** 20)
    assert float(hi - lo) < 1e-29
    assert (pi - 3).sign() == 1
    assert (pi - Fraction(22, 7)).sign() == -1
    assert (e - Fraction(27182, 10000)).sign() > 0
    inv = Scalar(1) / pi
    assert (inv * pi) == Scalar(1)
    with pytest.raises(ExactnessError):
        _ = pi + e  # mixing named constants is unsupported


def test_pi_is_not_algebraic_here():
    x = Scalar(1) / Scalar.const("pi") + GOLDEN
    assert x != GOLDEN
    assert (x - GOLDEN).sign() == 1


def test_float_mode_contagion():
    f = Scalar.from_float(1.25)
    x = f + Scalar(1)
    assert not x.is_exact
    assert x.to_float() == 2.25
    assert Scalar.from_float(1.0) == Scalar.from_float(1.0 + 1e-12)
    assert Scalar.from_float(1.0) != Scalar.from_float(1.1)


def test_floats_and_floor():
    assert Scalar.from_float(2.7).floor() == 2
    assert float(GOLDEN) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-15)


def test_serialization_roundtrip():
    values = [
        Scalar(Fraction(-3, 7)),
        GOLDEN,
        Scalar.root(2, 3) * 5 - Scalar(Fraction(1, 2)),
        Scalar(1) / Scalar.const("pi"),
        Scalar.from_float(0.5),
        Scalar.sqrt(10) + 2,
    ]
    for v in values:
        assert Scalar.from_obj(v.to_obj()) == v


def test_quad_tag_used_for_quadratic_values():
    obj = GOLDEN.to_obj()
    assert obj["type"] == "quad"
    assert obj["d"] == 5
    obj = Scalar(Fraction(2, 3)).to_obj()
    assert obj["type"] == "rat"
    obj = Scalar.root(2, 3).to_obj()
    assert obj["type"] == "alg"


def test_parse_scalar():
    assert parse_scalar("3/4") == Scalar(Fraction(3, 4))
    assert parse_scalar("sqrt(5)") == SQRT5
    assert parse_scalar("(1+sqrt(5))/2") == GOLDEN
    assert parse_scalar("golden") == GOLDEN
    assert parse_scalar("root(2,3)") == Scalar.root(2, 3)
    assert parse_scalar("-2*golden + 1") == Scalar(1) - GOLDEN * 2
    assert parse_scalar("1/pi") == Scalar(1) / Scalar.const("pi")
    assert parse_scalar("golden^2") == GOLDEN + 1
    with pytest.raises(ValueError):
        parse_scalar("sqrt(5")
    with pytest.raises(ValueError):
        parse_scalar("2 $ 3")


def test_zero_handling():
    z = GOLDEN - GOLDEN
    assert z.is_zero()
    assert z == Scalar(0)
    assert z.sign() == 0
    with pytest.raises(ZeroDivisionError):
        z.inverse()

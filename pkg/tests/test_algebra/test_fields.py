"""Tests for specred.algebra.fields."""
from fractions import Fraction

import pytest
import sympy

from specred.algebra.fields import ExactField, FloatField, GaussianRational, common_field


class TestGaussianRational:
    def test_product_with_conjugate_is_norm(self):
        z = GaussianRational(1, 2)
        assert z * z.conjugate() == 5

    def test_division_by_i(self):
        assert GaussianRational(1) / GaussianRational(0, 1) == GaussianRational(0, -1)

    def test_division_by_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    def test_lift_complex(self):
        assert GaussianRational.lift(0.5 - 2j) == GaussianRational(Fraction(1, 2), -2)

    def test_negative_power(self):
        assert GaussianRational(2) ** -2 == GaussianRational(Fraction(1, 4))

    def test_equals_int_and_fraction(self):
        assert GaussianRational(3) == 3
        assert GaussianRational(Fraction(1, 3)) == Fraction(1, 3)
        assert GaussianRational(3, 1) != 3

    def test_hash_matches_fraction_for_reals(self):
        assert hash(GaussianRational(Fraction(2, 3))) == hash(Fraction(2, 3))

    def test_str(self):
        assert str(GaussianRational(Fraction(1, 2), -1)) == "1/2-1i"
        assert str(GaussianRational(4)) == "4"

    def test_complex_conversion(self):
        assert complex(GaussianRational(Fraction(3, 4), 1)) == 0.75 + 1j

    def test_sympy_round_trip(self):
        z = GaussianRational(Fraction(-2, 7), Fraction(5, 3))
        assert z.to_sympy() == sympy.Rational(-2, 7) + sympy.Rational(5, 3) * sympy.I
        assert GaussianRational.from_sympy(z.to_sympy()) == z

    def test_parts_are_fractions(self):
        z = GaussianRational("3/8", -1)
        assert isinstance(z.re, Fraction) and z.re == Fraction(3, 8)
        assert z.im == -1


def _random_gaussian(rng):
    re = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
    im = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
    return GaussianRational(re, im)


class TestFieldAxioms:
    def test_ring_laws(self, rng):
        for _ in range(50):
            a, b, c = (_random_gaussian(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a and a * b == b * a
            assert a - a == 0 and a + 0 == a and a * 1 == a

    def test_inverses(self, rng):
        for _ in range(50):
            a = _random_gaussian(rng)
            if not a:
                continue
            assert a * (1 / a) == 1
            assert (a**-3) * a**3 == 1
            assert (a * a.conjugate()).is_real
            assert complex(a / a.conjugate()) == pytest.approx(complex(a) / complex(a).conjugate())


class TestExactField:
    def test_rationalize(self):
        value = ExactField().rationalize(0.5 + 0.25j)
        assert value == GaussianRational(Fraction(1, 2), Fraction(1, 4))

    def test_is_zero(self):
        field = ExactField()
        assert field.is_zero(field.zero)
        assert not field.is_zero(field.one)


class TestFloatField:
    def test_equal_within_eps(self):
        field = FloatField(eps=1e-9)
        assert field.equal(1.0, 1.0 + 1e-12)
        assert not field.equal(1.0, 1.001)

    def test_equal_is_relative(self):
        assert FloatField(eps=1e-9).equal(1e6, 1e6 + 1e-4)

    def test_is_zero_scaled(self):
        field = FloatField(eps=1e-9)
        assert field.is_zero(1e-7, scale=1000)
        assert not field.is_zero(1e-7)


class TestCommonField:
    def test_float_wins(self):
        assert common_field(ExactField(), FloatField()).exact is False
        assert common_field(FloatField(), ExactField()).exact is False

    def test_exact_with_exact(self):
        assert common_field(ExactField(), ExactField()).exact is True

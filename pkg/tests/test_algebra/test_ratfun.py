"""Tests for specred.algebra.ratfun."""
import math
from fractions import Fraction

import numpy as np
import pytest

from specred.algebra.fields import ExactField, FloatField, GaussianRational
from specred.algebra.ratfun import (
    Polynomial,
    RationalFunction,
    cluster_roots,
    irreducible_factors,
    pfd_scalar,
    poly_gcd,
    squarefree_factors,
)
from specred.errors import (
    DivisionByZeroFunction,
    EvaluationAtPole,
    IllConditionedRoots,
    IrrationalPoles,
    NotProper,
    ZeroDenominator,
)

EXACT = ExactField()
FLOAT = FloatField()


def poly(*coeffs, field=EXACT):
    return Polynomial.of(coeffs, field)


def ratio(num, den, field=EXACT):
    return RationalFunction.normalize(Polynomial.of(num, field), Polynomial.of(den, field))


class TestPolynomial:
    def test_trailing_zeros_trimmed(self):
        assert poly(1, 2, 0, 0).degree == 1

    def test_zero_degree_is_negative_infinity(self):
        assert Polynomial.zero(EXACT).degree == -math.inf

    def test_divmod(self):
        q, r = divmod(poly(-1, 0, 1), poly(-1, 1))
        assert q.coeffs == (1, 1)
        assert r.is_zero

    def test_gcd_is_monic(self):
        g = poly_gcd(poly(-2, 0, 2), poly(1, -2, 1))
        assert g.coeffs == (-1, 1)

    def test_squarefree_factors(self):
        # (λ - 1)²(λ + 2)
        f = poly(-1, 1) * poly(-1, 1) * poly(2, 1)
        factors = squarefree_factors(f)
        assert [(p.coeffs, m) for p, m in factors] == [((2, 1), 1), ((-1, 1), 2)]

    def test_call_exact(self):
        assert poly(1, 0, 1)(GaussianRational(0, 1)) == 0

    def test_taylor(self):
        # λ² = 1 + 2(λ-1) + (λ-1)²
        assert poly(0, 0, 1).taylor(1, 3) == [1, 2, 1]

    def test_roots_float(self):
        roots = np.sort(poly(-1, 0, 1, field=FLOAT).roots().real)
        assert np.allclose(roots, [-1, 1])

    def test_sympy_round_trip_keeps_gaussian_coefficients(self):
        p = poly(GaussianRational(1, 2), Fraction(-3, 4), 1)
        assert Polynomial.from_sympy(p.to_sympy(), EXACT) == p

    def test_taylor_at_gaussian_point(self):
        # λ² at i: -1 + 2i(λ - i) + (λ - i)²
        assert poly(0, 0, 1).taylor(GaussianRational(0, 1), 3) == [-1, GaussianRational(0, 2), 1]

    def test_irreducible_factors_over_gaussian_rationals(self):
        # λ² + 1 splits over Q(i); λ² - 2 does not
        factors = irreducible_factors(poly(1, 0, 1) * poly(-2, 0, 1))
        assert sorted(p.degree for p, _ in factors) == [1, 1, 2]


class TestRationalFunction:
    def test_normalize_cancels_common_factor(self):
        r = ratio([-1, 0, 1], [-1, 1])
        assert r.num.coeffs == (1, 1)
        assert r.den.coeffs == (1,)

    def test_normalize_float_cancels_common_root(self):
        r = ratio([-1, 0, 1], [-1, 1], field=FLOAT)
        assert r.den.degree == 0
        assert np.allclose(r.num.complex_coeffs, [1, 1])

    def test_denominator_made_monic(self):
        r = ratio([1], [2, 2])
        assert r.den.coeffs == (1, 1)
        assert r.num.coeffs == (Fraction(1, 2),)

    def test_zero_denominator_raises(self):
        with pytest.raises(ZeroDenominator):
            RationalFunction.normalize(poly(1), Polynomial.zero(EXACT))

    def test_sum_of_simple_poles(self):
        r = RationalFunction.simple_pole(1, 1, 1, EXACT) + RationalFunction.simple_pole(1, -1, 1, EXACT)
        assert r.num.coeffs == (0, 2)
        assert r.den.coeffs == (-1, 0, 1)

    def test_difference_to_zero(self):
        r = RationalFunction.simple_pole(1, 2, 1, EXACT)
        assert (r - r).is_zero

    def test_division_by_zero_function_raises(self):
        with pytest.raises(DivisionByZeroFunction):
            RationalFunction.variable(EXACT) / RationalFunction.zero(EXACT)

    def test_evaluate_at_pole_raises(self):
        with pytest.raises(EvaluationAtPole):
            RationalFunction.simple_pole(1, 3, 1, EXACT).evaluate(3)

    def test_evaluate_float_near_pole_raises(self):
        with pytest.raises(EvaluationAtPole):
            RationalFunction.simple_pole(1, 3, 1, FLOAT).evaluate(3 + 1e-9)

    def test_evaluate_exact(self):
        assert ratio([1], [0, 1]).evaluate(4) == Fraction(1, 4)

    def test_limit_at_infinity(self):
        assert ratio([1, 2], [-3, 1]).limit_at_infinity() == 2
        assert ratio([1], [-3, 1]).limit_at_infinity() == 0

    def test_improper_limit_raises(self):
        with pytest.raises(NotProper):
            ratio([0, 0, 1], [-1, 1]).limit_at_infinity()

    def test_expand_at_infinity(self):
        # 1/(λ - 1) = λ^-1 + λ^-2 + ...
        assert RationalFunction.simple_pole(1, 1, 1, EXACT).expand_at_infinity(4) == [0, 1, 1, 1]

    def test_conjugate(self):
        r = RationalFunction.simple_pole(GaussianRational(0, 1), 0, 1, EXACT)
        assert r.conjugate().num.coeffs == (GaussianRational(0, -1),)


class TestPartialFractions:
    def test_two_simple_poles(self):
        pfd = pfd_scalar(ratio([1], [-1, 0, 1]))
        assert pfd.constant == 0
        assert [(t.pole, t.order, t.coefficient) for t in pfd.terms] == [
            (-1, 1, Fraction(-1, 2)),
            (1, 1, Fraction(1, 2)),
        ]

    def test_double_pole(self):
        # λ / (λ - 1)² = 1/(λ - 1) + 1/(λ - 1)²
        pfd = pfd_scalar(ratio([0, 1], [1, -2, 1]))
        assert [(t.order, t.coefficient) for t in pfd.terms] == [(1, 1), (2, 1)]

    def test_constant_part(self):
        pfd = pfd_scalar(ratio([1, 2], [-3, 1]))
        assert pfd.constant == 2
        assert pfd.terms[0].coefficient == 7

    def test_round_trip_exact(self):
        r = ratio([3, 1, 2], [2, -3, 1])
        assert pfd_scalar(r).to_rational() == r

    def test_float_poles(self):
        pfd = pfd_scalar(ratio([1], [-1, 0, 1], field=FLOAT))
        poles = sorted(complex(t.pole).real for t in pfd.terms)
        coefficients = sorted(complex(t.coefficient).real for t in pfd.terms)
        assert np.allclose(poles, [-1, 1])
        assert np.allclose(coefficients, [-0.5, 0.5])

    def test_irrational_poles_fall_back_to_float(self, caplog):
        r = ratio([1], [-2, 0, 1])
        with caplog.at_level("WARNING", logger="specred"):
            pfd = pfd_scalar(r)
        assert pfd.field.exact is False
        assert "Irrational poles" in caplog.text
        assert np.allclose(sorted(complex(p).real for p in pfd.poles), [-math.sqrt(2), math.sqrt(2)])
        for z in (0.3, 2.5 + 1j, -4.0):
            assert np.isclose(pfd.evaluate_complex(z), r.evaluate_complex(z))

    def test_mixed_poles_all_float(self):
        # (λ - 1)(λ² - 2): the rational pole is carried on the float backend too
        r = ratio([1], [2, -2, -1, 1])
        pfd = pfd_scalar(r)
        assert not pfd.field.exact
        assert np.allclose(sorted(complex(p).real for p in pfd.poles), [-math.sqrt(2), 1, math.sqrt(2)])
        assert np.isclose(pfd.evaluate_complex(0.5j), r.evaluate_complex(0.5j))

    def test_irrational_poles_raise_when_float_disallowed(self):
        with pytest.raises(IrrationalPoles):
            pfd_scalar(ratio([1], [-2, 0, 1]), allow_float=False)

    def test_gaussian_poles_stay_exact(self):
        # 1 / (λ² + 1) = (i/2)/(λ + i) - (i/2)/(λ - i)
        pfd = pfd_scalar(ratio([1], [1, 0, 1]))
        assert pfd.field.exact
        assert {t.pole for t in pfd.terms} == {GaussianRational(0, 1), GaussianRational(0, -1)}
        assert pfd.to_rational() == ratio([1], [1, 0, 1])

    def test_improper_raises(self):
        with pytest.raises(NotProper):
            pfd_scalar(ratio([0, 0, 1], [1]))


class TestClusterRoots:
    def test_merges_close_roots(self):
        clusters = cluster_roots([1, 1 + 1e-9, 3], 1e-6)
        assert sorted(m for _, m in clusters) == [1, 2]

    def test_ambiguous_clusters_raise(self):
        with pytest.raises(IllConditionedRoots):
            cluster_roots([1, 1 + 5e-6], 1e-6)

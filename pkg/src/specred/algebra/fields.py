"""Coefficient fields: exact Gaussian rationals and tolerance-compared complex floats.

Exact arithmetic is carried by sympy's Gaussian rational domain ``QQ_I``;
:class:`GaussianRational` wraps one of its elements so the rest of the package
can mix exact coefficients with ints, Fractions and Python complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational
from typing import Any

import sympy
from sympy.polys.domains import QQ, QQ_I


def _fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _qq(value: Any) -> Any:
    f = _fraction(value)
    return QQ(f.numerator, f.denominator)


def _as_fraction(q: Any) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class GaussianRational:
    """Element of Q(i), backed by a ``QQ_I`` domain element in ``value``."""

    __slots__ = ("value",)

    def __init__(self, re: Any = 0, im: Any = 0) -> None:
        self.value = QQ_I.dtype(_qq(re), _qq(im))

    @classmethod
    def from_domain(cls, value: Any) -> GaussianRational:
        out = cls.__new__(cls)
        out.value = value
        return out

    @classmethod
    def lift(cls, value: Any) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, Integral):
            return cls(int(value), 0)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, sympy.Basic):
            return cls.from_sympy(value)
        if hasattr(value, "imag") and hasattr(value, "real") and not isinstance(value, (int, Fraction)):
            # numpy scalars
            return cls(Fraction(float(value.real)), Fraction(float(value.imag)))
        return cls(value, 0)

    @classmethod
    def from_sympy(cls, expr: Any) -> GaussianRational:
        return cls.from_domain(QQ_I.from_sympy(sympy.sympify(expr)))

    def to_sympy(self) -> sympy.Expr:
        return QQ_I.to_sympy(self.value)

    @property
    def re(self) -> Fraction:
        return _as_fraction(self.value.x)

    @property
    def im(self) -> Fraction:
        return _as_fraction(self.value.y)

    @property
    def is_real(self) -> bool:
        return not self.value.y

    def conjugate(self) -> GaussianRational:
        return GaussianRational.from_domain(QQ_I.dtype(self.value.x, -self.value.y))

    def __add__(self, other: Any) -> GaussianRational:
        return GaussianRational.from_domain(self.value + GaussianRational.lift(other).value)

    __radd__ = __add__

    def __sub__(self, other: Any) -> GaussianRational:
        return GaussianRational.from_domain(self.value - GaussianRational.lift(other).value)

    def __rsub__(self, other: Any) -> GaussianRational:
        return GaussianRational.lift(other) - self

    def __mul__(self, other: Any) -> GaussianRational:
        return GaussianRational.from_domain(self.value * GaussianRational.lift(other).value)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> GaussianRational:
        o = GaussianRational.lift(other)
        if not o.value:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational.from_domain(QQ_I.quo(self.value, o.value))

    def __rtruediv__(self, other: Any) -> GaussianRational:
        return GaussianRational.lift(other) / self

    def __neg__(self) -> GaussianRational:
        return GaussianRational.from_domain(-self.value)

    def __pow__(self, exponent: int) -> GaussianRational:
        if exponent < 0:
            return (GaussianRational(1) / self) ** (-exponent)
        return GaussianRational.from_domain(QQ_I.pow(self.value, int(exponent)))

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (Integral, Fraction)):
            return self.is_real and self.re == other
        if isinstance(other, GaussianRational):
            return self.value == other.value
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_real:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.value)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __float__(self) -> float:
        return float(self.re)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        return f"{re}{'+' if im >= 0 else '-'}{abs(im)}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


@dataclass(frozen=True)
class ExactField:
    """Q(i) with exact equality."""

    exact: bool = True
    name: str = "exact"

    @property
    def domain(self) -> Any:
        return QQ_I

    @property
    def zero(self) -> GaussianRational:
        return GaussianRational(0)

    @property
    def one(self) -> GaussianRational:
        return GaussianRational(1)

    def coerce(self, value: Any) -> GaussianRational:
        return GaussianRational.lift(value)

    def is_zero(self, value: GaussianRational) -> bool:
        return not value

    def equal(self, a: Any, b: Any) -> bool:
        return self.coerce(a) == self.coerce(b)

    def to_complex(self, value: Any) -> complex:
        return complex(self.coerce(value))

    def conjugate(self, value: GaussianRational) -> GaussianRational:
        return value.conjugate()

    def rationalize(self, value: complex, max_denominator: int = 10**6) -> GaussianRational:
        """Closest Gaussian rational with bounded denominators."""
        return GaussianRational(
            Fraction(value.real).limit_denominator(max_denominator),
            Fraction(value.imag).limit_denominator(max_denominator),
        )


@dataclass(frozen=True)
class FloatField:
    """Double-precision complex numbers compared with relative tolerance ``eps``.

    ``delta`` is the pole-cluster tolerance used for root identification.
    """

    eps: float = 1e-9
    delta: float = 1e-6
    exact: bool = False
    name: str = "float"

    @property
    def zero(self) -> complex:
        return 0j

    @property
    def one(self) -> complex:
        return 1 + 0j

    def coerce(self, value: Any) -> complex:
        return complex(value)

    def is_zero(self, value: complex, scale: float = 1.0) -> bool:
        return abs(value) <= self.eps * max(1.0, scale)

    def equal(self, a: Any, b: Any) -> bool:
        a, b = complex(a), complex(b)
        return abs(a - b) <= self.eps * max(1.0, abs(a), abs(b))

    def to_complex(self, value: Any) -> complex:
        return complex(value)

    def conjugate(self, value: complex) -> complex:
        return value.conjugate()


Field = ExactField | FloatField


def common_field(a: Field, b: Field) -> Field:
    """Float wins over exact; mixing two float fields keeps the first."""
    if not a.exact:
        return a
    return b

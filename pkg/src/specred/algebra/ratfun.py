"""Polynomials and rational functions in one variable over a pluggable field.

The exact backend stores coefficients as :class:`GaussianRational` and hands
gcd, square-free and factor computations to sympy polynomials over
``QQ_I``. The float backend stores Python complex numbers and identifies
common roots that lie within the cluster tolerance ``delta``.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np
import sympy
from scipy import linalg
from sympy.polys.domains import QQ_I

from specred.algebra.fields import Field, FloatField, GaussianRational, common_field
from specred.errors import (
    DivisionByZeroFunction,
    EvaluationAtPole,
    IllConditionedRoots,
    IrrationalPoles,
    NotProper,
    ZeroDenominator,
)

logger = logging.getLogger("specred")

NEG_INF = -math.inf

# Relative size under which the sum of two float coefficients counts as cancelled.
CANCELLATION = 1e-10

# Clusters closer than this multiple of delta are reported as ambiguous.
CLUSTER_AMBIGUITY = 10.0

# Indeterminate of the sympy polynomials behind the exact backend.
LAM = sympy.Symbol("lambda")


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple
    field: Field

    @classmethod
    def of(cls, coeffs: Iterable[Any], field: Field) -> Polynomial:
        values = [field.coerce(c) for c in coeffs]
        while values and not values[-1]:
            values.pop()
        return cls(tuple(values), field)

    @classmethod
    def zero(cls, field: Field) -> Polynomial:
        return cls((), field)

    @classmethod
    def constant(cls, value: Any, field: Field) -> Polynomial:
        return cls.of([value], field)

    @classmethod
    def variable(cls, field: Field) -> Polynomial:
        return cls.of([0, 1], field)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], field: Field, lead: Any = 1) -> Polynomial:
        result = cls.constant(lead, field)
        for r in roots:
            result = result * cls.of([-r, 1], field)
        return result

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Any:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coefficient(self, k: int) -> Any:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    @cached_property
    def complex_coeffs(self) -> np.ndarray:
        """Ascending complex coefficients."""
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_field(self, field: Field) -> Polynomial:
        if field.exact == self.field.exact and field == self.field:
            return self
        if field.exact:
            return Polynomial.of(self.coeffs, field)
        return Polynomial.of((complex(c) for c in self.coeffs), field)

    def to_sympy(self) -> sympy.Poly:
        """The exact polynomial as a sympy ``Poly`` over ``QQ_I``."""
        coeffs = [GaussianRational.lift(c).to_sympy() for c in reversed(self.coeffs)]
        return sympy.Poly(coeffs or [0], LAM, domain=QQ_I)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly, field: Field) -> Polynomial:
        return cls.of((GaussianRational.from_sympy(c) for c in reversed(poly.all_coeffs())), field)

    def _unify(self, other: Any) -> tuple[Polynomial, Polynomial]:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.field)
        field = common_field(self.field, other.field)
        return self.to_field(field), other.to_field(field)

    def __add__(self, other: Any) -> Polynomial:
        a, b = self._unify(other)
        n = max(len(a.coeffs), len(b.coeffs))
        zero = a.field.zero
        out = []
        for k in range(n):
            x = a.coeffs[k] if k < len(a.coeffs) else zero
            y = b.coeffs[k] if k < len(b.coeffs) else zero
            s = x + y
            if not a.field.exact and s and abs(s) <= CANCELLATION * max(abs(x), abs(y)):
                s = zero
            out.append(s)
        return Polynomial.of(out, a.field)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs), self.field)

    def __sub__(self, other: Any) -> Polynomial:
        a, b = self._unify(other)
        return a + (-b)

    def __rsub__(self, other: Any) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Any) -> Polynomial:
        a, b = self._unify(other)
        if a.is_zero or b.is_zero:
            return Polynomial.zero(a.field)
        if not a.field.exact:
            product = np.convolve(a.complex_coeffs, b.complex_coeffs)
            return Polynomial.of(product.tolist(), a.field)
        return Polynomial.from_sympy(a.to_sympy() * b.to_sympy(), a.field)

    __rmul__ = __mul__

    def scale(self, factor: Any) -> Polynomial:
        factor = self.field.coerce(factor)
        return Polynomial.of((c * factor for c in self.coeffs), self.field)

    def __pow__(self, exponent: int) -> Polynomial:
        result = Polynomial.constant(1, self.field)
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        a, b = self._unify(other)
        if b.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if a.field.exact:
            q, r = a.to_sympy().div(b.to_sympy())
            return Polynomial.from_sympy(q, a.field), Polynomial.from_sympy(r, a.field)
        rem = list(a.coeffs)
        db = len(b.coeffs) - 1
        if len(rem) - 1 < db:
            return Polynomial.zero(a.field), a
        quot = [a.field.zero] * (len(rem) - db)
        inv_lead = a.field.one / b.lead
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] * inv_lead
            quot[k] = q
            if q:
                for j, c in enumerate(b.coeffs):
                    rem[k + j] = rem[k + j] - q * c
            rem[k + db] = a.field.zero
        return Polynomial.of(quot, a.field), Polynomial.of(rem[:db], a.field)

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def __call__(self, x: Any) -> Any:
        x = self.field.coerce(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_complex(self, z: complex | np.ndarray) -> complex | np.ndarray:
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return np.polyval(self.complex_coeffs[::-1], z)

    def derivative(self) -> Polynomial:
        return Polynomial.of((c * k for k, c in enumerate(self.coeffs) if k), self.field)

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return self.scale(self.field.one / self.lead)

    def conjugate(self) -> Polynomial:
        return Polynomial(tuple(self.field.conjugate(c) for c in self.coeffs), self.field)

    def roots(self) -> np.ndarray:
        """Complex roots as eigenvalues of the companion matrix."""
        if self.degree == NEG_INF or self.degree < 1:
            return np.zeros(0, dtype=complex)
        coeffs = self.complex_coeffs
        if self.degree == 1:
            return np.array([-coeffs[0] / coeffs[1]])
        return linalg.eigvals(linalg.companion(coeffs[::-1]))

    def taylor(self, point: Any, count: int) -> list:
        """First ``count`` Taylor coefficients at ``point``.

        Exact polynomials are shifted by sympy; floats use repeated synthetic division.
        """
        point = self.field.coerce(point)
        if self.field.exact:
            shifted = Polynomial.from_sympy(self.to_sympy().shift(point.to_sympy()), self.field)
            return [shifted.coefficient(k) for k in range(count)]
        work = list(self.coeffs)
        out = []
        for _ in range(count):
            if not work:
                out.append(self.field.zero)
                continue
            acc = self.field.zero
            quotient = [self.field.zero] * (len(work) - 1)
            for k in range(len(work) - 1, -1, -1):
                acc = acc * point + work[k]
                if k:
                    quotient[k - 1] = acc
            out.append(acc)
            work = quotient
        return out

    def deflate(self, root: complex) -> Polynomial:
        """Quotient by (λ - root), forward or backward depending on |root|."""
        c = self.complex_coeffs
        d = len(c) - 1
        if d < 1:
            return self
        q = np.zeros(d, dtype=complex)
        if abs(root) <= 1:
            q[d - 1] = c[d]
            for k in range(d - 1, 0, -1):
                q[k - 1] = c[k] + root * q[k]
        else:
            q[0] = -c[0] / root
            for k in range(1, d):
                q[k] = (q[k - 1] - c[k]) / root
        return Polynomial.of(q.tolist(), self.field)

    def trimmed(self, radius: float, rel: float) -> Polynomial:
        """Drop float coefficients negligible on the circle of the given radius."""
        if self.field.exact or self.is_zero:
            return self
        weights = np.abs(self.complex_coeffs) * radius ** np.arange(len(self.coeffs))
        cutoff = rel * weights.max()
        values = [0j if w <= cutoff else c for c, w in zip(self.coeffs, weights)]
        return Polynomial.of(values, self.field)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            parts.append(f"({c})" + ("" if k == 0 else "λ" if k == 1 else f"λ^{k}"))
        return " + ".join(reversed(parts))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q(i)."""
    if a.is_zero and b.is_zero:
        return a
    return Polynomial.from_sympy(a.to_sympy().gcd(b.to_sympy()), a.field).monic()


def squarefree_factors(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Square-free decomposition of an exact polynomial into monic factors."""
    if f.degree < 1:
        return []
    _, factors = f.to_sympy().sqf_list()
    return [(Polynomial.from_sympy(g, f.field).monic(), k) for g, k in factors]


def irreducible_factors(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors over Q(i) with multiplicities."""
    if f.degree < 1:
        return []
    _, factors = f.to_sympy().factor_list()
    return [(Polynomial.from_sympy(g, f.field).monic(), k) for g, k in factors]


def cluster_roots(roots: Sequence[complex], delta: float) -> list[tuple[complex, int]]:
    """Single-linkage clusters of roots within ``delta`` as (center, multiplicity).

    Raises IllConditionedRoots when distinct clusters sit within a small
    multiple of ``delta`` of each other.
    """
    pending = [complex(r) for r in roots]
    clusters: list[list[complex]] = []
    while pending:
        group = [pending.pop(0)]
        grew = True
        while grew:
            grew = False
            for r in list(pending):
                if any(abs(r - g) <= delta * max(1.0, abs(g)) for g in group):
                    group.append(r)
                    pending.remove(r)
                    grew = True
        clusters.append(group)
    centers = [(complex(np.mean(g)), len(g)) for g in clusters]
    for i, (p, _) in enumerate(centers):
        for q, _ in centers[i + 1 :]:
            if abs(p - q) <= CLUSTER_AMBIGUITY * delta * max(1.0, abs(p)):
                raise IllConditionedRoots(
                    "root clusters are not separated at the cluster tolerance",
                    first=p,
                    second=q,
                    delta=delta,
                )
    return centers


def _match_common_roots(rn: np.ndarray, rd: np.ndarray, delta: float) -> list[tuple[int, int]]:
    if not len(rn) or not len(rd):
        return []
    dist = np.abs(rn[:, None] - rd[None, :])
    scale = np.maximum(1.0, np.abs(rd))[None, :]
    pairs = []
    used_n: set[int] = set()
    used_d: set[int] = set()
    for flat in np.argsort(dist, axis=None):
        i, j = divmod(int(flat), len(rd))
        if dist[i, j] > delta * scale[0, j]:
            break
        if i in used_n or j in used_d:
            continue
        used_n.add(i)
        used_d.add(j)
        pairs.append((i, j))
    return pairs


@dataclass(frozen=True)
class RationalFunction:
    num: Polynomial
    den: Polynomial

    @classmethod
    def normalize(cls, num: Polynomial, den: Polynomial) -> RationalFunction:
        return rf_normalize(num, den)

    @classmethod
    def constant(cls, value: Any, field: Field) -> RationalFunction:
        return cls(Polynomial.constant(value, field), Polynomial.constant(1, field))

    @classmethod
    def zero(cls, field: Field) -> RationalFunction:
        return cls(Polynomial.zero(field), Polynomial.constant(1, field))

    @classmethod
    def variable(cls, field: Field) -> RationalFunction:
        return cls(Polynomial.variable(field), Polynomial.constant(1, field))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> RationalFunction:
        return cls(p, Polynomial.constant(1, p.field))

    @classmethod
    def simple_pole(cls, coefficient: Any, pole: Any, order: int, field: Field) -> RationalFunction:
        """coefficient / (λ - pole)^order"""
        den = Polynomial.of([-field.coerce(pole), 1], field) ** order
        return cls(Polynomial.constant(coefficient, field), den)

    @property
    def field(self) -> Field:
        return self.num.field if not self.num.is_zero else self.den.field

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    @property
    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree

    def to_field(self, field: Field) -> RationalFunction:
        if field == self.den.field:
            return self
        return RationalFunction(self.num.to_field(field), self.den.to_field(field))

    def _coerce(self, other: Any) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        return RationalFunction.constant(other, self.den.field)

    def __add__(self, other: Any) -> RationalFunction:
        return rf_arith(self, self._coerce(other), "+")

    __radd__ = __add__

    def __sub__(self, other: Any) -> RationalFunction:
        return rf_arith(self, self._coerce(other), "-")

    def __rsub__(self, other: Any) -> RationalFunction:
        return rf_arith(self._coerce(other), self, "-")

    def __mul__(self, other: Any) -> RationalFunction:
        return rf_arith(self, self._coerce(other), "*")

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> RationalFunction:
        return rf_arith(self, self._coerce(other), "/")

    def __rtruediv__(self, other: Any) -> RationalFunction:
        return rf_arith(self._coerce(other), self, "/")

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def conjugate(self) -> RationalFunction:
        """Coefficient-wise conjugate, the value of r(λ)* at real λ."""
        return RationalFunction(self.num.conjugate(), self.den.conjugate())

    @cached_property
    def pole_estimates(self) -> np.ndarray:
        return self.den.roots()

    def evaluate(self, x: Any) -> Any:
        field = self.den.field
        x = field.coerce(x)
        if field.exact:
            d = self.den(x)
            if not d:
                raise EvaluationAtPole("evaluation at a pole", point=str(x))
            return self.num(x) / d
        delta = getattr(field, "delta", 1e-6)
        for p in self.pole_estimates:
            if abs(p - x) <= delta * max(1.0, abs(p)):
                raise EvaluationAtPole("evaluation at a pole", point=x, pole=complex(p))
        return self.num(x) / self.den(x)

    def evaluate_complex(self, z: complex | np.ndarray) -> complex | np.ndarray:
        d = self.den.evaluate_complex(z)
        if np.any(d == 0):
            raise EvaluationAtPole("evaluation at a pole", point=z)
        return self.num.evaluate_complex(z) / d

    def limit_at_infinity(self) -> Any:
        if not self.is_proper:
            raise NotProper("no finite limit at infinity", degree_num=self.num.degree, degree_den=self.den.degree)
        if self.num.degree == self.den.degree:
            return self.num.lead / self.den.lead
        return self.den.field.zero

    def expand_at_infinity(self, count: int) -> list:
        """Coefficients r_0, r_1, ... of r(λ) = Σ r_k λ^-k."""
        if not self.is_proper:
            raise NotProper("expansion at infinity needs a proper function")
        field = self.den.field
        d = int(self.den.degree)
        a = [self.num.coefficient(d - j) for j in range(count)]
        b = [self.den.coefficient(d - j) for j in range(count)]
        out = []
        for m in range(count):
            acc = a[m]
            for j in range(1, m + 1):
                if b[j]:
                    acc = acc - b[j] * out[m - j]
            out.append(acc / b[0] if b[0] != field.one else acc)
        return out

    def partial_fractions(self, config=None) -> ScalarPFD:
        return pfd_scalar(self, config)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"[{self.num}] / [{self.den}]"


def _divides(den: Polynomial, num: Polynomial, eps: float) -> bool:
    """den | num up to a remainder below eps relative to the coefficients of num."""
    rem = num % den
    if rem.is_zero:
        return True
    scale = max(1.0, float(np.max(np.abs(num.complex_coeffs))))
    return float(np.max(np.abs(rem.complex_coeffs))) <= eps * scale


def rf_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduce by the gcd and make the denominator monic."""
    field = common_field(num.field, den.field)
    num, den = num.to_field(field), den.to_field(field)
    if den.is_zero:
        raise ZeroDenominator("denominator is the zero polynomial")
    if num.is_zero:
        return RationalFunction.zero(field)
    if field.exact:
        if den.degree >= 1 and num.degree >= 1:
            g = poly_gcd(num, den)
            if g.degree >= 1:
                num, den = num // g, den // g
    elif den.degree >= 1 and num.degree >= den.degree and _divides(den, num, field.eps):
        # repeated roots defeat root matching, so exact divisibility is tried first
        num, den = num // den, Polynomial.constant(1, field)
    elif den.degree >= 1 and num.degree >= 1:
        rn, rd = num.roots(), den.roots()
        pairs = _match_common_roots(rn, rd, field.delta)
        for i, j in pairs:
            num = num.deflate(rn[i])
            den = den.deflate(rd[j])
        if pairs:
            logger.debug(f"Cancelled {len(pairs)} common root(s)")
    lead = den.lead
    if lead != field.one:
        inv = field.one / lead
        num, den = num.scale(inv), den.scale(inv)
    return RationalFunction(num, den)


def _float_lcm(a: Polynomial, b: Polynomial, delta: float) -> tuple[Polynomial, Polynomial]:
    """Cofactors (x, y) with a*x = b*y = lcm(a, b) for monic float polynomials."""
    ra, rb = a.roots(), b.roots()
    pairs = _match_common_roots(ra, rb, delta)
    shared_a = {i for i, _ in pairs}
    shared_b = {j for _, j in pairs}
    only_b = [rb[j] for j in range(len(rb)) if j not in shared_b]
    only_a = [ra[i] for i in range(len(ra)) if i not in shared_a]
    return Polynomial.from_roots(only_b, a.field), Polynomial.from_roots(only_a, a.field)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    field = common_field(a.field, b.field)
    a, b = a.to_field(field), b.to_field(field)
    if op == "-":
        b, op = -b, "+"
    if op == "/":
        if b.is_zero:
            raise DivisionByZeroFunction("division by the zero rational function")
        b, op = RationalFunction(b.den, b.num), "*"
    if op == "+":
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        if a.den == b.den:
            return rf_normalize(a.num + b.num, a.den)
        if field.exact:
            g = poly_gcd(a.den, b.den)
            x, y = b.den // g, a.den // g
            return rf_normalize(a.num * x + b.num * y, a.den * x)
        if a.den.degree == 0 or b.den.degree == 0:
            return rf_normalize(a.num * b.den + b.num * a.den, a.den * b.den)
        x, y = _float_lcm(a.den.monic(), b.den.monic(), field.delta)
        num = a.num.scale(field.one / a.den.lead) * x + b.num.scale(field.one / b.den.lead) * y
        return rf_normalize(num, a.den.monic() * x)
    if op == "*":
        if a.is_zero or b.is_zero:
            return RationalFunction.zero(field)
        if b.is_constant:
            a, b = b, a
        if a.is_constant:
            num, den = b.num.scale(a.num.coeffs[0] / a.den.coeffs[0]), b.den
            if den.lead != field.one:
                inv = field.one / den.lead
                num, den = num.scale(inv), den.scale(inv)
            return RationalFunction(num, den)
        if a.den.degree == 0 and b.den.degree == 0:
            return rf_normalize(a.num * b.num, a.den * b.den)
        if field.exact:
            g1 = poly_gcd(a.num, b.den)
            g2 = poly_gcd(b.num, a.den)
            return rf_normalize((a.num // g1) * (b.num // g2), (a.den // g2) * (b.den // g1))
        return rf_normalize(a.num * b.num, a.den * b.den)
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(r: RationalFunction, x: Any) -> Any:
    return r.evaluate(x)


# Interpolation on a circle, used by the float determinant, adjugate and reductions.


def circle_nodes(count: int, radius: float) -> np.ndarray:
    """Half-step rotated roots of unity, avoiding the real axis."""
    return radius * np.exp(2j * np.pi * (np.arange(count) + 0.5) / count)


def interpolate_on_circle(values: np.ndarray, radius: float, field: FloatField, rel: float = 1e-11) -> Polynomial:
    count = len(values)
    spectrum = np.fft.fft(np.asarray(values, dtype=complex)) / count
    k = np.arange(count)
    coeffs = spectrum * np.exp(-1j * np.pi * k / count) / radius**k
    return Polynomial.of(coeffs.tolist(), field).trimmed(radius, rel * max(1, count))


# Partial fractions.


@dataclass(frozen=True)
class PFTerm:
    pole: Any
    order: int
    coefficient: Any


@dataclass(frozen=True)
class ScalarPFD:
    constant: Any
    terms: tuple[PFTerm, ...]
    field: Field

    @property
    def poles(self) -> list:
        seen = []
        for term in self.terms:
            if not any(term.pole == p for p in seen):
                seen.append(term.pole)
        return seen

    def evaluate_complex(self, z: complex) -> complex:
        total = complex(self.constant)
        for term in self.terms:
            total += complex(term.coefficient) / (z - complex(term.pole)) ** term.order
        return total

    def to_rational(self) -> RationalFunction:
        total = RationalFunction.constant(self.constant, self.field)
        for term in self.terms:
            total = total + RationalFunction.simple_pole(term.coefficient, term.pole, term.order, self.field)
        return total


def _polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    desc = coeffs[::-1]
    ddesc = np.polyder(desc)
    for _ in range(steps):
        d = np.polyval(ddesc, z)
        if d == 0:
            break
        z = z - np.polyval(desc, z) / d
    return complex(z)


def _exact_pole_candidates(den: Polynomial) -> tuple[list[tuple[Any, int]], bool]:
    """Poles of an exact denominator with multiplicities.

    Returns (poles, exact). Linear factors over Q(i) give exact poles. Any
    factor of higher degree has irrational roots, and then every pole is
    returned as a polished float.
    """
    exact_poles: list[tuple[Any, int]] = []
    float_poles: list[tuple[Any, int]] = []
    for factor, mult in irreducible_factors(den):
        if factor.degree == 1:
            root = -factor.coeffs[0]
            exact_poles.append((root, mult))
            float_poles.append((complex(root), mult))
            continue
        cc = factor.complex_coeffs
        for z in factor.roots():
            float_poles.append((_polish(cc, complex(z)), mult))
    if len(exact_poles) == len(float_poles):
        return exact_poles, True
    return float_poles, False


def _series_divide(a: list, b: list, count: int, field: Field) -> list:
    out = []
    for m in range(count):
        acc = a[m]
        for j in range(1, m + 1):
            acc = acc - b[j] * out[m - j]
        out.append(acc / b[0])
    return out


def pfd_scalar(r: RationalFunction, config=None, allow_float: bool = True) -> ScalarPFD:
    """Partial fraction decomposition of a proper rational function.

    An exact function whose denominator has a factor with no root in Q(i)
    cannot be split over Q(i). It is then decomposed on the float backend
    of ``config`` and the returned :class:`ScalarPFD` carries that float
    field, so callers can tell from ``pfd.field.exact``. With
    ``allow_float=False`` it raises :class:`IrrationalPoles` instead.
    """
    from specred.config import resolve

    config = resolve(config)
    if not r.is_proper:
        raise NotProper("partial fractions need deg num <= deg den", degree_num=r.num.degree, degree_den=r.den.degree)
    field = r.den.field
    constant = r.limit_at_infinity()
    if r.den.degree == 0 or r.is_zero:
        return ScalarPFD(constant, (), field)
    rem = r.num - r.den.scale(constant)
    den = r.den
    if field.exact:
        poles, exact = _exact_pole_candidates(den)
        if not exact:
            if not allow_float:
                raise IrrationalPoles("denominator has roots outside Q(i)", denominator=str(den))
            logger.warning(f"Irrational poles in degree {den.degree} denominator, partial fractions fall back to float")
            field = config.float_field()
            rem, den = rem.to_field(field), den.to_field(field)
            constant = complex(constant)
    else:
        poles = cluster_roots(den.roots(), field.delta)
    terms = []
    for pole, mult in poles:
        a = rem.taylor(pole, mult)
        b = den.taylor(pole, 2 * mult)[mult:]
        coefficients = _series_divide(a, b, mult, field)
        for j, c in enumerate(coefficients):
            order = mult - j
            if order == mult or not field.is_zero(c):
                terms.append(PFTerm(pole, order, c))
    terms.sort(key=lambda t: (complex(t.pole).real, complex(t.pole).imag, t.order))
    return ScalarPFD(constant, tuple(terms), field)


def phase(z: complex) -> complex:
    return cmath.exp(1j * cmath.phase(z)) if z else 1 + 0j

"""Trigonometric polynomial walks and their Laplace transforms.

A walk block is a matrix of finite sums a·cos(kt) and a·sin(kt). Powers of
cos t and i·sin t are linearized exactly through z = e^{it}:
cos t = (z + 1/z)/2 and i sin t = (z - 1/z)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Hashable, Sequence

import numpy as np

from specred.algebra.fields import ExactField, Field, GaussianRational
from specred.algebra.ratfun import Polynomial, RationalFunction
from specred.algebra.ratmat import RatMatrix
from specred.errors import DimensionMismatch
from specred.spectral.labeled import LabeledMatrix, Subset

KINDS = ("cos", "sin")


@dataclass(frozen=True)
class TrigTerm:
    amplitude: Any
    frequency: int
    kind: str = "cos"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS} (got {self.kind})")
        if int(self.frequency) != self.frequency or self.frequency < 0:
            raise ValueError(f"frequency must be a nonnegative integer (got {self.frequency})")

    def evaluate(self, t: float) -> complex:
        wave = np.cos if self.kind == "cos" else np.sin
        return complex(self.amplitude) * wave(self.frequency * t)

    def laplace(self, field: Field) -> RationalFunction:
        """Transform at s = -iλ: cos kt -> iλ/(λ² - k²), sin kt -> -k/(λ² - k²)."""
        k = self.frequency
        den = Polynomial.of([-(k * k), 0, 1], field)
        amp = field.coerce(self.amplitude)
        if self.kind == "cos":
            num = Polynomial.of([0, amp * field.coerce(1j)], field)
        else:
            num = Polynomial.of([amp * (-k)], field)
        return RationalFunction.normalize(num, den)


@dataclass(frozen=True)
class TrigWalkSpec:
    """Square matrix of trigonometric polynomials in t."""

    entries: tuple[tuple[tuple[TrigTerm, ...], ...], ...]

    def __post_init__(self) -> None:
        entries = tuple(tuple(tuple(cell) for cell in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(len(row) != len(entries) for row in entries):
            raise DimensionMismatch("walk spec must be square", rows=len(entries))
        for i, row in enumerate(entries):
            for j, cell in enumerate(row):
                keys = [(term.frequency, term.kind) for term in cell]
                if len(keys) != len(set(keys)):
                    raise ValueError(f"entry ({i}, {j}) repeats a frequency")

    @property
    def size(self) -> int:
        return len(self.entries)

    def evaluate(self, t: float) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, cell in enumerate(row):
                out[i, j] = sum((term.evaluate(t) for term in cell), 0j)
        return out

    def laplace(self, field: Field) -> RatMatrix:
        """Entrywise Laplace transform with s = -iλ substituted."""
        values = []
        for row in self.entries:
            for cell in row:
                total = RationalFunction.zero(field)
                for term in cell:
                    total = total + term.laplace(field)
                values.append(total)
        return RatMatrix(self.size, self.size, tuple(values), field)


# Linearization


def laurent_power(k: int, sign: int) -> dict[int, Fraction]:
    """((z + sign/z) / 2)^k as {exponent: coefficient}."""
    out: dict[int, Fraction] = {}
    for j in range(k + 1):
        out[k - 2 * j] = out.get(k - 2 * j, Fraction(0)) + Fraction(comb(k, j) * sign**j, 2**k)
    return out


def laurent_to_terms(laurent: dict[int, Any]) -> tuple[TrigTerm, ...]:
    """Σ c_m z^m with z = e^{it} as cos/sin terms."""
    terms = []
    zero = GaussianRational(0)
    for m in sorted({abs(e) for e in laurent}):
        plus = GaussianRational.lift(laurent.get(m, zero))
        minus = GaussianRational.lift(laurent.get(-m, zero))
        if m == 0:
            if plus != 0:
                terms.append(TrigTerm(plus, 0, "cos"))
            continue
        cos_amp = plus + minus
        sin_amp = (plus - minus) * GaussianRational(0, 1)
        if cos_amp != 0:
            terms.append(TrigTerm(cos_amp, m, "cos"))
        if sin_amp != 0:
            terms.append(TrigTerm(sin_amp, m, "sin"))
    return tuple(terms)


def linearize(coeffs: Sequence[Any], argument: str = "cos") -> tuple[TrigTerm, ...]:
    """p(cos t) or p(i sin t) as a sum of multiple-angle terms; ``coeffs`` ascending."""
    if argument not in ("cos", "isin"):
        raise ValueError(f"argument must be 'cos' or 'isin' (got {argument})")
    sign = 1 if argument == "cos" else -1
    laurent: dict[int, GaussianRational] = {}
    for k, c in enumerate(coeffs):
        if not c:
            continue
        for e, v in laurent_power(k, sign).items():
            laurent[e] = laurent.get(e, GaussianRational(0)) + GaussianRational.lift(c) * v
    return laurent_to_terms(laurent)


ODD_POWER_COEFFS = (0, 0, 0, Fraction(1, 8), 0, 0, 0, Fraction(3, 8), 0, 0, 0, Fraction(3, 8), 0, 0, 0, Fraction(1, 8))


def odd_power_target(coeffs: Sequence[Any] = ODD_POWER_COEFFS) -> TrigWalkSpec:
    """[[p(cos t), p(i sin t)], [p(i sin t), p(cos t)]].

    With the default p(x) = (x¹⁵ + 3x¹¹ + 3x⁷ + x³)/8 the walk moves the first
    vertex onto the second at t = π/2 with phase -i.
    """
    diagonal = linearize(coeffs, "cos")
    off = linearize(coeffs, "isin")
    return TrigWalkSpec(((diagonal, off), (off, diagonal)))


def trig_spec_from_integer_spectrum(
    a: LabeledMatrix,
    subset: Subset | Sequence[Hashable],
    tol: float = 1e-8,
    max_denominator: int = 10**6,
) -> TrigWalkSpec:
    """Exact trig form of (e^{-itA})_SS for a Hermitian A with integer eigenvalues.

    Each eigenvalue θ contributes E_θ·(cos |θ|t - i·sign(θ) sin |θ|t), with the
    restricted eigenprojections E_θ recognized as Gaussian rationals.
    """
    labels = subset.labels if isinstance(subset, Subset) else tuple(subset)
    keep = a.index_of(labels)
    w, v = a.eigh
    thetas = np.round(w)
    if np.max(np.abs(w - thetas), initial=0.0) > tol:
        raise ValueError("spectrum is not integral")
    field = ExactField()
    s = len(keep)
    cells: list[list[dict[tuple[int, str], GaussianRational]]] = [[{} for _ in range(s)] for _ in range(s)]
    for theta in sorted(set(int(x) for x in thetas)):
        cols = np.flatnonzero(thetas == theta)
        block = v[np.ix_(keep, cols)]
        projection = block @ block.conj().T
        k = abs(theta)
        for i in range(s):
            for j in range(s):
                e = field.rationalize(complex(projection[i, j]), max_denominator)
                if e == 0:
                    continue
                cell = cells[i][j]
                cell[(k, "cos")] = cell.get((k, "cos"), GaussianRational(0)) + e
                if theta:
                    sin_amp = e * GaussianRational(0, -1 if theta > 0 else 1)
                    cell[(k, "sin")] = cell.get((k, "sin"), GaussianRational(0)) + sin_amp
    entries = tuple(
        tuple(
            tuple(TrigTerm(amp, k, kind) for (k, kind), amp in sorted(cells[i][j].items()) if amp != 0)
            for j in range(s)
        )
        for i in range(s)
    )
    return TrigWalkSpec(entries)

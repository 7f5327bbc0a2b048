"""Dense matrices over rational functions.

On the exact backend inversion and determinants run on a sympy
``DomainMatrix`` over the function field Q(i)(λ). The float backend clears
denominators to a polynomial matrix and recovers adjugate and determinant by
LU factorizations on a circle of complex nodes followed by interpolation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import sympy
from scipy import linalg
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from specred.algebra.fields import ExactField, Field, common_field
from specred.algebra.ratfun import (
    LAM,
    Polynomial,
    RationalFunction,
    _match_common_roots,
    circle_nodes,
    cluster_roots,
    interpolate_on_circle,
    pfd_scalar,
)
from specred.errors import DimensionMismatch, EvaluationAtPole, NotProper, SingularOverFunctionField

logger = logging.getLogger("specred")


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[RationalFunction, ...]
    field: Field

    def __post_init__(self) -> None:
        if self.rows * self.cols != len(self.entries):
            raise DimensionMismatch(
                "entry count does not match the shape", rows=self.rows, cols=self.cols, entries=len(self.entries)
            )

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: Field) -> RatMatrix:
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        entries = []
        for r in rows:
            if len(r) != n_cols:
                raise DimensionMismatch("ragged rows", expected=n_cols, got=len(r))
            entries.extend(_lift(x, field) for x in r)
        return cls(n_rows, n_cols, tuple(entries), field)

    @classmethod
    def from_scalars(cls, matrix: Any, field: Field) -> RatMatrix:
        array = np.asarray(matrix, dtype=object)
        if array.ndim != 2:
            raise DimensionMismatch("scalar matrix must be two-dimensional", ndim=array.ndim)
        r, c = array.shape
        return cls(r, c, tuple(RationalFunction.constant(x, field) for x in array.ravel()), field)

    @classmethod
    def identity(cls, n: int, field: Field) -> RatMatrix:
        return cls.from_scalars(np.eye(n, dtype=int), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> RatMatrix:
        return cls(rows, cols, tuple(RationalFunction.zero(field) for _ in range(rows * cols)), field)

    @classmethod
    def lambda_identity(cls, n: int, field: Field) -> RatMatrix:
        lam = RationalFunction.variable(field)
        zero = RationalFunction.zero(field)
        return cls(n, n, tuple(lam if i == j else zero for i in range(n) for j in range(n)), field)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> RationalFunction:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[RationalFunction]]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        return RatMatrix(len(rows), len(cols), tuple(self[i, j] for i in rows for j in cols), self.field)

    def to_field(self, field: Field) -> RatMatrix:
        if field == self.field:
            return self
        return RatMatrix(self.rows, self.cols, tuple(e.to_field(field) for e in self.entries), field)

    # arithmetic

    def _check_same_shape(self, other: RatMatrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch("shapes differ", left=self.shape, right=other.shape)

    def _unify(self, other: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
        field = common_field(self.field, other.field)
        return self.to_field(field), other.to_field(field)

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other)
        a, b = self._unify(other)
        return RatMatrix(a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)), a.field)

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other)
        a, b = self._unify(other)
        return RatMatrix(a.rows, a.cols, tuple(x - y for x, y in zip(a.entries, b.entries)), a.field)

    def __neg__(self) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, tuple(-x for x in self.entries), self.field)

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ", left=self.shape, right=other.shape)
        a, b = self._unify(other)
        zero = RationalFunction.zero(a.field)
        out = []
        for i in range(a.rows):
            for j in range(b.cols):
                acc = zero
                for k in range(a.cols):
                    x, y = a[i, k], b[k, j]
                    if x.is_zero or y.is_zero:
                        continue
                    acc = acc + x * y
                out.append(acc)
        return RatMatrix(a.rows, b.cols, tuple(out), a.field)

    def scale(self, factor: Any) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, tuple(e * factor for e in self.entries), self.field)

    def transpose(self) -> RatMatrix:
        return RatMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)), self.field)

    def adjoint(self) -> RatMatrix:
        """Conjugate transpose as a function of real λ."""
        return RatMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j].conjugate() for j in range(self.cols) for i in range(self.rows)),
            self.field,
        )

    def inverse(self) -> RatMatrix:
        return rm_inverse(self)

    def det(self) -> RationalFunction:
        return rm_det(self)

    # predicates and evaluation

    @property
    def is_proper(self) -> bool:
        return all(e.is_proper for e in self.entries)

    @property
    def is_constant(self) -> bool:
        return all(e.is_constant or e.is_zero for e in self.entries)

    def constant_part(self) -> np.ndarray:
        """Entrywise limit at infinity."""
        if not self.is_proper:
            raise NotProper("constant part needs a proper matrix")
        return _as_array([e.limit_at_infinity() for e in self.entries], self.rows, self.cols, self.field)

    def evaluate(self, x: Any) -> np.ndarray:
        values = []
        for idx, e in enumerate(self.entries):
            try:
                values.append(e.evaluate(x))
            except EvaluationAtPole as exc:
                raise EvaluationAtPole(
                    "evaluation at a pole", point=str(x), entry=divmod(idx, self.cols)
                ) from exc
        return _as_array(values, self.rows, self.cols, self.field)

    def evaluate_complex(self, z: complex) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=complex)
        for idx, e in enumerate(self.entries):
            out[divmod(idx, self.cols)] = e.evaluate_complex(z)
        return out

    def pole_estimates(self) -> np.ndarray:
        parts = [e.pole_estimates for e in self.entries if e.den.degree >= 1]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def partial_fractions(self, config=None) -> PartialFractionForm:
        return pfd_matrix(self, config)

    def equals(self, other: RatMatrix) -> bool:
        """Structural equality of normal forms."""
        return self.shape == other.shape and all(x == y for x, y in zip(self.entries, other.entries))


def _lift(x: Any, field: Field) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x.to_field(field)
    if isinstance(x, Polynomial):
        return RationalFunction.from_polynomial(x.to_field(field))
    return RationalFunction.constant(x, field)


def _as_array(values: list, rows: int, cols: int, field: Field) -> np.ndarray:
    if field.exact:
        out = np.empty((rows, cols), dtype=object)
        for idx, v in enumerate(values):
            out[divmod(idx, cols)] = v
        return out
    return np.array(values, dtype=complex).reshape(rows, cols)


def rm_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    return a @ b


def rm_add(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    return a + b


def rm_sub(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    return a - b


def rm_scale(a: RatMatrix, factor: Any) -> RatMatrix:
    return a.scale(factor)


def rm_eval(a: RatMatrix, x: Any) -> np.ndarray:
    return a.evaluate(x)


def hstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    rows = blocks[0].rows
    field = blocks[0].field
    out = []
    for i in range(rows):
        for b in blocks:
            if b.rows != rows:
                raise DimensionMismatch("row counts differ", expected=rows, got=b.rows)
            out.extend(b.to_field(field).entries[i * b.cols : (i + 1) * b.cols])
    return RatMatrix(rows, sum(b.cols for b in blocks), tuple(out), field)


def vstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    cols = blocks[0].cols
    field = blocks[0].field
    out: list[RationalFunction] = []
    for b in blocks:
        if b.cols != cols:
            raise DimensionMismatch("column counts differ", expected=cols, got=b.cols)
        out.extend(b.to_field(field).entries)
    return RatMatrix(sum(b.rows for b in blocks), cols, tuple(out), field)


# Clearing denominators.


def _clear_denominators(a: RatMatrix) -> tuple[Polynomial, list[list[Polynomial]]]:
    """Common denominator L and polynomial matrix P with A = P / L (float backend)."""
    field = a.field
    roots: list[complex] = []
    for e in a.entries:
        if e.den.degree < 1:
            continue
        er = e.den.roots()
        pairs = _match_common_roots(er, np.array(roots, dtype=complex), field.delta)
        matched = {i for i, _ in pairs}
        roots.extend(complex(er[i]) for i in range(len(er)) if i not in matched)
    common = Polynomial.from_roots(roots, field)
    all_roots = np.array(roots, dtype=complex)
    rows = []
    for i in range(a.rows):
        row = []
        for j in range(a.cols):
            e = a[i, j]
            if e.den.degree < 1:
                row.append(e.num.scale(field.one / e.den.lead) * common)
                continue
            pairs = _match_common_roots(all_roots, e.den.roots(), field.delta)
            matched = {k for k, _ in pairs}
            cofactor = Polynomial.from_roots(
                [all_roots[k] for k in range(len(all_roots)) if k not in matched], field, field.one / e.den.lead
            )
            row.append(e.num * cofactor)
        rows.append(row)
    return common, rows


def _degree_bound(p: list[list[Polynomial]]) -> int | None:
    """Row-degree bound of det(P); None when some row is identically zero."""
    total = 0
    for row in p:
        degrees = [q.degree for q in row if not q.is_zero]
        if not degrees:
            return None
        total += int(max(degrees))
    return total


def function_field() -> Any:
    """Q(i)(λ) as a sympy domain."""
    return QQ_I.frac_field(LAM)


def to_domain_matrix(a: RatMatrix) -> DomainMatrix:
    k = function_field()
    rows = [[k.from_sympy(e.num.to_sympy().as_expr() / e.den.to_sympy().as_expr()) for e in row] for row in a.to_rows()]
    return DomainMatrix(rows, a.shape, k)


def from_function_field(element: Any, field: Field) -> RationalFunction:
    num = Polynomial.from_sympy(sympy.Poly(element.numer.as_expr(), LAM, domain=QQ_I), field)
    den = Polynomial.from_sympy(sympy.Poly(element.denom.as_expr(), LAM, domain=QQ_I), field)
    return RationalFunction.normalize(num, den)


def from_domain_matrix(m: DomainMatrix, field: Field) -> RatMatrix:
    rows, cols = m.shape
    entries = [from_function_field(x, field) for row in m.to_list() for x in row]
    return RatMatrix(rows, cols, tuple(entries), field)


def _entry_size(q: Polynomial) -> float:
    if q.is_zero:
        return 0.0
    if q.degree < 1:
        return abs(complex(q.coeffs[0]))
    return float(np.max(np.abs(q.roots())))


def _circle_radius(p: list[list[Polynomial]]) -> float:
    """Radius enclosing the roots of det P: a norm bound for pencils, Gershgorin otherwise."""
    degrees = [q.degree for row in p for q in row if not q.is_zero]
    if degrees and max(degrees) == 1:
        p1 = np.array([[complex(q.coefficient(1)) for q in row] for row in p])
        p0 = np.array([[complex(q.coefficient(0)) for q in row] for row in p])
        if np.linalg.cond(p1) < 1e8:
            return 1.1 * max(1.0, float(np.linalg.norm(linalg.solve(p1, p0), 2)))
    return 1.1 * max([1.0] + [sum(_entry_size(q) for q in row) for row in p])


def _float_node_solves(p: list[list[Polynomial]], nodes: np.ndarray, want_inverse: bool):
    dets = np.empty(len(nodes), dtype=complex)
    adjs = []
    singular = 0
    n = len(p)
    for k, z in enumerate(nodes):
        m = np.array([[q.evaluate_complex(z) for q in row] for row in p], dtype=complex)
        s = linalg.svdvals(m)
        if s[-1] <= 1e-14 * max(s[0], 1e-300):
            singular += 1
        lu, piv = linalg.lu_factor(m, check_finite=False)
        sign = -1.0 if np.count_nonzero(piv != np.arange(n)) % 2 else 1.0
        dets[k] = sign * np.prod(np.diag(lu))
        if want_inverse:
            adjs.append(dets[k] * linalg.lu_solve((lu, piv), np.eye(n)))
    return dets, adjs, singular


def _adjugate_and_det(a: RatMatrix, want_inverse: bool):
    """(L, det P, adj P) with P = L·A; adj is None unless requested."""
    if not a.is_square:
        raise DimensionMismatch("square matrix required", shape=a.shape)
    field = a.field
    n = a.rows
    common, p = _clear_denominators(a)
    bound = _degree_bound(p)
    if bound is None:
        if want_inverse:
            raise SingularOverFunctionField("matrix has a zero row")
        return common, Polynomial.zero(field), None
    count = bound + 1
    radius = _circle_radius(p)
    for attempt in range(3):
        nodes = circle_nodes(count, radius)
        dets, adjs, singular = _float_node_solves(p, nodes, want_inverse)
        if singular == 0:
            break
        if singular == len(nodes):
            if want_inverse:
                raise SingularOverFunctionField("matrix is singular at every node", size=n)
            return common, Polynomial.zero(field), None
        radius *= 1.37
        logger.debug(f"Node circle hit a singular point, retrying with radius {radius:.3g}")
    det_poly = interpolate_on_circle(dets, radius, field)
    if det_poly.is_zero:
        if want_inverse:
            raise SingularOverFunctionField("determinant vanishes identically", size=n)
        return common, det_poly, None
    adj = None
    if want_inverse:
        stack = np.array(adjs)
        adj = [[interpolate_on_circle(stack[:, i, j], radius, field) for j in range(n)] for i in range(n)]
    return common, det_poly, adj


def _exact_inverse(a: RatMatrix) -> RatMatrix:
    if not a.is_square:
        raise DimensionMismatch("square matrix required", shape=a.shape)
    m = to_domain_matrix(a)
    if not m.det():
        raise SingularOverFunctionField("determinant vanishes identically", size=a.rows)
    return from_domain_matrix(m.inv(), a.field)


def rm_inverse(a: RatMatrix) -> RatMatrix:
    """Inverse over the function field: L·adj(P)/det(P)."""
    if a.rows == 0:
        return a
    if a.field.exact:
        return _exact_inverse(a)
    common, det_poly, adj = _adjugate_and_det(a, want_inverse=True)
    n = a.rows
    entries = []
    for i in range(n):
        for j in range(n):
            entries.append(RationalFunction.normalize(common * adj[i][j], det_poly))
    return RatMatrix(n, n, tuple(entries), a.field)


def rm_det(a: RatMatrix) -> RationalFunction:
    if a.rows == 0:
        return RationalFunction.constant(1, a.field)
    if a.field.exact:
        if not a.is_square:
            raise DimensionMismatch("square matrix required", shape=a.shape)
        return from_function_field(to_domain_matrix(a).det(), a.field)
    common, det_poly, _ = _adjugate_and_det(a, want_inverse=False)
    return RationalFunction.normalize(det_poly, common ** a.rows)


# Matrix partial fractions.


@dataclass(frozen=True)
class MatrixTerm:
    pole: Any
    order: int
    coefficient: np.ndarray


@dataclass(frozen=True, eq=False)
class PartialFractionForm:
    constant: np.ndarray
    terms: tuple[MatrixTerm, ...]
    field: Field

    @property
    def poles(self) -> list[tuple[Any, int]]:
        """Distinct poles with their top order."""
        out: list[tuple[Any, int]] = []
        for term in self.terms:
            for idx, (pole, order) in enumerate(out):
                if pole == term.pole:
                    out[idx] = (pole, max(order, term.order))
                    break
            else:
                out.append((term.pole, term.order))
        return out

    def coefficient(self, pole: Any, order: int) -> np.ndarray | None:
        for term in self.terms:
            if term.pole == pole and term.order == order:
                return term.coefficient
        return None

    def evaluate_complex(self, z: complex) -> np.ndarray:
        total = np.array(self.constant, dtype=complex)
        for term in self.terms:
            total = total + np.array(term.coefficient, dtype=complex) / (z - complex(term.pole)) ** term.order
        return total

    def to_ratmatrix(self) -> RatMatrix:
        rows, cols = self.constant.shape
        result = RatMatrix.from_scalars(self.constant, self.field)
        for term in self.terms:
            rf = RationalFunction.simple_pole(1, term.pole, term.order, self.field)
            result = result + RatMatrix.from_scalars(term.coefficient, self.field).scale(rf)
        return result


def pfd_matrix(r: RatMatrix, config=None) -> PartialFractionForm:
    """Entrywise partial fractions pooled into matrix coefficients."""
    from specred.config import resolve

    config = resolve(config)
    if not r.is_proper:
        raise NotProper("partial fractions need a proper matrix")
    pieces = [pfd_scalar(e, config) for e in r.entries]
    exact = all(p.field.exact for p in pieces)
    field: Field = ExactField() if exact else (r.field if not r.field.exact else config.float_field())

    def convert(value: Any) -> Any:
        return value if exact else complex(value)

    constant = _as_array([convert(p.constant) for p in pieces], r.rows, r.cols, field)
    if exact:
        centers: list[Any] = []
        for piece in pieces:
            for term in piece.terms:
                if not any(term.pole == c for c in centers):
                    centers.append(term.pole)

        def locate(pole: Any) -> int:
            return next(i for i, c in enumerate(centers) if c == pole)
    else:
        raw = sorted({complex(t.pole) for p in pieces for t in p.terms}, key=lambda z: (z.real, z.imag))
        clusters = cluster_roots(raw, field.delta)
        centers = [c for c, _ in clusters]

        def locate(pole: Any) -> int:
            return int(np.argmin([abs(complex(pole) - c) for c in centers]))

    blocks: dict[tuple[int, int], np.ndarray] = {}
    for idx, piece in enumerate(pieces):
        i, j = divmod(idx, r.cols)
        for term in piece.terms:
            key = (locate(term.pole), term.order)
            if key not in blocks:
                blocks[key] = _as_array([field.zero] * (r.rows * r.cols), r.rows, r.cols, field)
            blocks[key][i, j] = blocks[key][i, j] + convert(term.coefficient)
    order = sorted(blocks, key=lambda k: (complex(centers[k[0]]).real, complex(centers[k[0]]).imag, k[1]))
    terms = tuple(MatrixTerm(centers[c], k, blocks[(c, k)]) for c, k in order)
    return PartialFractionForm(constant, terms, field)

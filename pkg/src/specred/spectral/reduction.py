"""Isospectral reductions and the identities they satisfy.

``reduce`` computes R(λ) = M + C(λI - F)^-1 D for a vertex subset.
``reduce_frame`` and ``reduce_via_formula2`` evaluate λI - (Σ*(λI - A)^-1 Σ)^-1
instead and serve as independent routes to the same object. On the exact
backend both run on sympy ``DomainMatrix`` objects over Q(i)(λ); on the float
backend the numerators and the common denominator are interpolated from
solves on a circle of complex nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from scipy import linalg
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from specred.algebra.fields import Field, GaussianRational
from specred.algebra.ratfun import Polynomial, RationalFunction, circle_nodes, interpolate_on_circle
from specred.algebra.ratmat import RatMatrix, from_domain_matrix, to_domain_matrix
from specred.config import SolverConfig, resolve
from specred.errors import (
    DimensionMismatch,
    EvaluationAtPole,
    NotAUnitaryCompletion,
    NotAnEigenpair,
    NotNormalF,
    SingularOverFunctionField,
    SingularQ,
    SubsetViolation,
)
from specred.spectral.labeled import Frame, LabeledMatrix, Subset, lift, to_numeric
from specred.utils.linalg import block_diag, exact_matmul, is_unitary
from specred.utils.sampling import functions_agree, ratfunctions_agree, ratmatrices_agree, values_close

logger = logging.getLogger("specred")

# Node samples below this fraction of the largest one are rounding noise.
NODE_NOISE = 1e-12


def _as_subset(selection: Subset | Sequence[Hashable]) -> Subset:
    return selection if isinstance(selection, Subset) else Subset(tuple(selection))


def _real_coefficients(p: Polynomial) -> Polynomial:
    if p.field.exact:
        return p
    return Polynomial.of((complex(c.real, 0.0) for c in p.coeffs), p.field)


def _blocks(lifted: np.ndarray, keep: list[int], rest: list[int]):
    return (
        lifted[np.ix_(keep, keep)],
        lifted[np.ix_(keep, rest)],
        lifted[np.ix_(rest, keep)],
        lifted[np.ix_(rest, rest)],
    )


def _domain(array: np.ndarray, field: Field) -> DomainMatrix:
    return to_domain_matrix(RatMatrix.from_scalars(array, field))


def _reduce_exact(m, c, d, f, field: Field) -> RatMatrix:
    """M + C(λI - F)^-1 D over Q(i)(λ)."""
    size = f.shape[0]
    shifted = to_domain_matrix(RatMatrix.lambda_identity(size, field) - RatMatrix.from_scalars(f, field))
    r = _domain(m, field) + _domain(c, field).matmul(shifted.inv()).matmul(_domain(d, field))
    return from_domain_matrix(r, field)


def _lu_det(lu: np.ndarray, piv: np.ndarray) -> complex:
    sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
    return sign * np.prod(np.diag(lu))


def _interpolate_entry(samples: np.ndarray, floor: float, radius: float, field: Field) -> Polynomial:
    if float(np.max(np.abs(samples))) <= floor:
        return Polynomial.zero(field)
    return interpolate_on_circle(samples, radius, field)


def _node_radius(matrix: np.ndarray) -> float:
    """Circle radius past the numerical range, so every node is regular."""
    if not matrix.size:
        return 1.0
    return 1.1 * max(1.0, float(np.linalg.norm(matrix, 2)))


def _sandwich_float(m, c, d, f, field: Field, real: bool, hermitian: bool):
    size = f.shape[0]
    s = m.shape[0]
    radius = _node_radius(f)
    nodes = circle_nodes(size + 1, radius)
    dets = np.empty(len(nodes), dtype=complex)
    values = np.empty((len(nodes), s, s), dtype=complex)
    eye = np.eye(size)
    for k, z in enumerate(nodes):
        lu, piv = linalg.lu_factor(z * eye - f, check_finite=False)
        dets[k] = _lu_det(lu, piv)
        values[k] = dets[k] * (c @ linalg.lu_solve((lu, piv), d))
    chi = interpolate_on_circle(dets, radius, field)
    if real or hermitian:
        chi = _real_coefficients(chi)
    floor = NODE_NOISE * float(np.max(np.abs(values), initial=0.0))
    numerators = []
    for i in range(s):
        row = []
        for j in range(s):
            p = _interpolate_entry(values[:, i, j], floor, radius, field)
            row.append(_real_coefficients(p) if real else p)
        numerators.append(row)
    return chi, numerators


def reduce(a: LabeledMatrix, subset: Subset | Sequence[Hashable], config: SolverConfig | None = None) -> RatMatrix:
    """R(λ, S, A) = M + C(λI - F)^-1 D."""
    config = resolve(config)
    field = config.field()
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    lifted = a.lifted(field)
    if not rest:
        return RatMatrix.from_scalars(lifted[np.ix_(keep, keep)], field)
    m, c, d, f = _blocks(lifted, keep, rest)
    s = len(keep)
    logger.debug(f"Reducing {a.n}x{a.n} matrix to {s} vertices")
    if field.exact:
        return _reduce_exact(m, c, d, f, field)
    real = not np.iscomplexobj(a.numeric) or a.is_real
    chi, numerators = _sandwich_float(m, c, d, f, field, real, a.hermitian)
    entries = []
    for i in range(s):
        for j in range(s):
            num = chi.scale(m[i, j]) + numerators[i][j]
            entries.append(RationalFunction.normalize(num, chi))
    return RatMatrix(s, s, tuple(entries), field)


def reduce_ratmatrix(r: RatMatrix, keep: Sequence[int]) -> RatMatrix:
    """Reduction of a matrix over the function field to the index block ``keep``."""
    keep = list(keep)
    rest = [i for i in range(r.rows) if i not in set(keep)]
    m = r.block(keep, keep)
    if not rest:
        return m
    c = r.block(keep, rest)
    d = r.block(rest, keep)
    f = r.block(rest, rest)
    resolvent = (RatMatrix.lambda_identity(len(rest), r.field) - f).inverse()
    return m + c @ resolvent @ d


def _frame_reduction_exact(x: RatMatrix, sigma: np.ndarray) -> RatMatrix:
    field = x.field
    n, k = sigma.shape
    star = np.vectorize(field.conjugate, otypes=[object])(sigma).T
    shifted = to_domain_matrix(RatMatrix.lambda_identity(n, field) - x)
    inner = _domain(star, field).matmul(shifted.inv()).matmul(_domain(sigma, field))
    if not inner.det():
        raise SingularOverFunctionField("Σ*(λI - X)^-1 Σ is singular", columns=k)
    return from_domain_matrix(to_domain_matrix(RatMatrix.lambda_identity(k, field)) - inner.inv(), field)


def _frame_reduction_float(x: np.ndarray, sigma: np.ndarray, field: Field) -> RatMatrix:
    """λI - G(λ)^-1 with G = Σ*(λI - X)^-1 Σ, interpolated on a circle.

    det(λI - X)·det G(λ) is the characteristic polynomial of the compression
    of X to the orthogonal complement of Σ, of degree n - k, and it clears
    every denominator of the result.
    """
    n, k = sigma.shape
    radius = _node_radius(x)
    nodes = circle_nodes(n - k + 1, radius)
    dens = np.empty(len(nodes), dtype=complex)
    values = np.empty((len(nodes), k, k), dtype=complex)
    eye_n, eye_k = np.eye(n), np.eye(k)
    star = sigma.conj().T
    for idx, z in enumerate(nodes):
        lu, piv = linalg.lu_factor(z * eye_n - x, check_finite=False)
        g = star @ linalg.lu_solve((lu, piv), sigma)
        g_lu, g_piv = linalg.lu_factor(g, check_finite=False)
        dens[idx] = _lu_det(lu, piv) * _lu_det(g_lu, g_piv)
        values[idx] = dens[idx] * (z * eye_k - linalg.lu_solve((g_lu, g_piv), eye_k))
    real = bool(np.all(np.imag(x) == 0) and np.all(np.imag(sigma) == 0))
    hermitian = bool(np.allclose(x, x.conj().T, rtol=0, atol=field.eps))
    den = interpolate_on_circle(dens, radius, field)
    if real or hermitian:
        den = _real_coefficients(den)
    floor = NODE_NOISE * float(np.max(np.abs(values)))
    entries = []
    for i in range(k):
        for j in range(k):
            num = _interpolate_entry(values[:, i, j], floor, radius, field)
            entries.append(RationalFunction.normalize(_real_coefficients(num) if real else num, den))
    return RatMatrix(k, k, tuple(entries), field)


def generalized_reduction(x: RatMatrix, sigma: np.ndarray) -> RatMatrix:
    """λI - (Σ*(λI - X)^-1 Σ)^-1 over the function field.

    A constant X on the float backend is sampled on a circle of nodes; a
    function-valued X goes through the function-field inverse.
    """
    field = x.field
    n, k = sigma.shape
    if x.rows != n:
        raise DimensionMismatch("frame rows differ from matrix size", rows=n, size=x.rows)
    if field.exact:
        return _frame_reduction_exact(x, sigma)
    if x.is_constant:
        return _frame_reduction_float(x.evaluate_complex(0.0), np.asarray(sigma, dtype=complex), field)
    sig = RatMatrix.from_scalars(sigma, field)
    sig_star = RatMatrix.from_scalars(np.vectorize(field.conjugate, otypes=[object])(sigma).T, field)
    resolvent = (RatMatrix.lambda_identity(n, field) - x).inverse()
    inner = sig_star @ resolvent @ sig
    return RatMatrix.lambda_identity(k, field) - inner.inverse()


def frame_reduction_value(x: np.ndarray, sigma: np.ndarray, z: complex) -> np.ndarray:
    """zI - (Σ*(zI - X)^-1 Σ)^-1 at a single point."""
    x = np.asarray(x, dtype=complex)
    sigma = np.asarray(to_numeric(sigma), dtype=complex)
    n, k = sigma.shape
    g = sigma.conj().T @ linalg.solve(z * np.eye(n) - x, sigma)
    return z * np.eye(k) - linalg.inv(g)


def reduction_value(x: np.ndarray, keep: Sequence[int], z: complex) -> np.ndarray:
    """M + C(zI - F)^-1 D of a numeric matrix at a single point."""
    x = np.asarray(x, dtype=complex)
    keep = list(keep)
    rest = [i for i in range(x.shape[0]) if i not in set(keep)]
    m, c, d, f = _blocks(x, keep, rest)
    if not rest:
        return m
    return m + c @ linalg.solve(z * np.eye(len(rest)) - f, d)


def reduce_frame(a: LabeledMatrix, frame: Frame | np.ndarray, config: SolverConfig | None = None) -> RatMatrix:
    config = resolve(config)
    frame = frame if isinstance(frame, Frame) else Frame(np.asarray(frame))
    frame.validate(config.eps)
    field = config.field()
    return generalized_reduction(a.to_ratmatrix(field), frame.lifted(field))


def reduce_via_formula2(
    a: LabeledMatrix, subset: Subset | Sequence[Hashable], config: SolverConfig | None = None
) -> RatMatrix:
    """λI - (Σᵀ(λI - A)^-1 Σ)^-1 with the coordinate frame of the subset."""
    config = resolve(config)
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    field = config.field()
    if not rest:
        return RatMatrix.from_scalars(a.lifted(field)[np.ix_(keep, keep)], field)
    return generalized_reduction(a.to_ratmatrix(field), subset.as_frame(a).lifted(field))


def reduce_sequential_check(
    a: LabeledMatrix,
    subset: Sequence[Hashable],
    inner: Sequence[Hashable],
    config: SolverConfig | None = None,
) -> bool:
    subset, inner = _as_subset(subset), _as_subset(inner)
    if not set(inner.labels) <= set(subset.labels):
        raise SubsetViolation("inner subset must lie inside the outer subset", inner=list(inner.labels))
    config = resolve(config)
    outer = reduce(a, subset, config)
    positions = [subset.labels.index(label) for label in inner.labels]
    rhs = reduce(a, inner, config)
    if config.exact:
        return ratmatrices_agree(reduce_ratmatrix(outer, positions), rhs, config)
    # the outer reduction is compared point by point, without a float function-field inverse
    poles = np.concatenate([outer.pole_estimates(), rhs.pole_estimates()])
    return functions_agree(
        lambda z: reduction_value(outer.evaluate_complex(z), positions, z), rhs.evaluate_complex, poles, config
    )


@dataclass(frozen=True)
class CharPolyIdentity:
    lhs: RationalFunction
    rhs: RationalFunction
    equal: bool


def _char_poly(matrix: np.ndarray, field: Field) -> RationalFunction:
    n = matrix.shape[0]
    if n == 0:
        return RationalFunction.constant(1, field)
    return (RatMatrix.lambda_identity(n, field) - RatMatrix.from_scalars(matrix, field)).det()


def char_poly_identity(
    a: LabeledMatrix, subset: Sequence[Hashable], config: SolverConfig | None = None
) -> CharPolyIdentity:
    """det(λI - R) against det(λI - A) / det(λI - F)."""
    config = resolve(config)
    field = config.field()
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    r = reduce(a, subset, config)
    lhs = (RatMatrix.lambda_identity(r.rows, field) - r).det()
    lifted = a.lifted(field)
    rhs = _char_poly(lifted, field) / _char_poly(lifted[np.ix_(rest, rest)], field)
    return CharPolyIdentity(lhs, rhs, ratfunctions_agree(lhs, rhs, config))


def _check_eigenpair(a: LabeledMatrix, eigenvalue: complex, vector: np.ndarray, eps: float) -> None:
    m = a.numeric
    residual = np.linalg.norm(m @ vector - eigenvalue * vector)
    if residual > eps * max(1.0, np.linalg.norm(m) * np.linalg.norm(vector)):
        raise NotAnEigenpair("A u differs from λ0 u", residual=float(residual))


def _evaluate_off_poles(r: RatMatrix, x: complex, delta: float) -> np.ndarray:
    poles = r.pole_estimates()
    if len(poles) and np.min(np.abs(poles - x)) <= delta * max(1.0, abs(x)):
        raise EvaluationAtPole("λ0 is a pole of the reduction", point=complex(x))
    return r.evaluate_complex(x)


def eigvec_restriction_check(
    a: LabeledMatrix,
    selector: Subset | Frame | Sequence[Hashable],
    eigenvalue: complex,
    vector: Sequence[complex],
    config: SolverConfig | None = None,
) -> bool:
    """R(λ0) Σ*u = λ0 Σ*u for an eigenpair (λ0, u) of A."""
    config = resolve(config)
    u = np.asarray(vector, dtype=complex)
    _check_eigenpair(a, eigenvalue, u, config.eps)
    if isinstance(selector, Frame):
        restricted = selector.sigma.astype(complex).conj().T @ u
        r = reduce_frame(a, selector, config)
    else:
        selector = _as_subset(selector)
        restricted = u[a.index_of(selector.labels)]
        r = reduce(a, selector, config)
    if np.linalg.norm(restricted) <= config.eps * max(1.0, np.linalg.norm(u)):
        return True
    value = _evaluate_off_poles(r, complex(eigenvalue), config.delta)
    return values_close(value @ restricted, eigenvalue * restricted, max(config.eps, 1e-8))


def eigenframe_reduction_check(
    a: LabeledMatrix, eigenvectors: np.ndarray, config: SolverConfig | None = None
) -> bool:
    """The frame of orthonormal eigenvectors reduces A to the diagonal of their eigenvalues."""
    config = resolve(config)
    v = np.asarray(eigenvectors, dtype=complex)
    values = np.real_if_close(np.einsum("ij,ik,kj->j", v.conj(), a.numeric, v))
    for j in range(v.shape[1]):
        _check_eigenpair(a, values[j], v[:, j], max(config.eps, 1e-8))
    r = reduce_frame(a, Frame(v), config.with_backend("float"))
    expected = RatMatrix.from_scalars(np.diag(values), r.field)
    return ratmatrices_agree(r, expected, config, tol=1e-8)


def cospectral_check(a: LabeledMatrix, u: Hashable, v: Hashable, config: SolverConfig | None = None) -> bool:
    if u == v:
        raise SubsetViolation("cospectrality compares two different vertices", vertex=u)
    a.index_of([u, v])
    return ratmatrices_agree(reduce(a, [u], config), reduce(a, [v], config), config)


@dataclass(frozen=True, eq=False)
class ResidueReport:
    expected: np.ndarray
    actual: np.ndarray
    equal: bool
    pole_present: bool


def eigenprojection(f: np.ndarray, mu: complex, tol: float = 1e-8) -> np.ndarray:
    """Orthogonal projection onto the μ-eigenspace of a normal matrix."""
    t, z = linalg.schur(np.asarray(f, dtype=complex), output="complex")
    scale = max(1.0, float(np.max(np.abs(np.diag(t)), initial=0.0)))
    cols = [k for k in range(t.shape[0]) if abs(t[k, k] - mu) <= tol * scale]
    basis = z[:, cols]
    return basis @ basis.conj().T


def residue_check(
    a: LabeledMatrix,
    subset: Sequence[Hashable],
    mu: complex,
    config: SolverConfig | None = None,
    tol: float = 1e-8,
) -> ResidueReport:
    """Residue of R at μ against C E_μ D."""
    config = resolve(config)
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    m = a.numeric.astype(complex)
    _, c, d, f = _blocks(m, keep, rest)
    scale = max(1.0, float(np.linalg.norm(f)))
    if np.max(np.abs(f @ f.conj().T - f.conj().T @ f), initial=0.0) > config.eps * scale**2:
        raise NotNormalF("the complement block is not normal")
    expected = c @ eigenprojection(f, mu) @ d
    pff = reduce(a, subset, config.with_backend("float")).partial_fractions(config)
    actual = np.zeros((len(keep), len(keep)), dtype=complex)
    present = False
    for term in pff.terms:
        if term.order == 1 and abs(complex(term.pole) - mu) <= config.delta * max(1.0, abs(mu)):
            actual = np.asarray(term.coefficient, dtype=complex)
            present = True
    if not present:
        logger.info(f"Eigenvalue {mu} of F is not a pole of the reduction")
    equal = bool(np.max(np.abs(expected - actual), initial=0.0) <= tol * max(1.0, np.abs(expected).max(initial=0.0)))
    return ResidueReport(expected, actual, equal, present)


def assemble_parts(m: np.ndarray, parts: Sequence[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]) -> np.ndarray:
    """[[M + ΣM_i, C_1 C_2 ...], [D_1; D_2; ..., diag(F_1, F_2, ...)]]"""
    s = m.shape[0]
    top_left = np.array(m)
    for mi, _, _, _ in parts:
        if mi.shape != (s, s):
            raise DimensionMismatch("all parts must share the reduced block size", expected=s, got=mi.shape)
        top_left = top_left + mi
    cs = [ci for _, ci, _, _ in parts if ci.shape[1]]
    ds = [di for _, _, di, _ in parts if di.shape[0]]
    fs = [fi for _, _, _, fi in parts if fi.shape[0]]
    if not fs:
        return top_left
    top = np.hstack([top_left] + cs)
    bottom = np.hstack([np.vstack(ds), block_diag(*fs)])
    return np.vstack([top, bottom])


def _part_matrix(mi, ci, di, fi) -> np.ndarray:
    return np.block([[mi, ci], [di, fi]]) if fi.shape[0] else np.asarray(mi)


def edge_split_check(
    parts: Sequence[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]], config: SolverConfig | None = None
) -> bool:
    """Reduction of the assembled block matrix equals the sum of the parts' reductions."""
    config = resolve(config)
    parts = [tuple(np.asarray(x) for x in part) for part in parts]
    s = parts[0][0].shape[0]
    zero = np.zeros((s, s), dtype=parts[0][0].dtype)
    whole = LabeledMatrix.of(assemble_parts(zero, parts))
    lhs = reduce(whole, list(whole.labels[:s]), config)
    rhs = None
    for part in parts:
        piece = LabeledMatrix.of(_part_matrix(*part))
        term = reduce(piece, list(piece.labels[:s]), config)
        rhs = term if rhs is None else rhs + term
    return ratmatrices_agree(lhs, rhs, config)


def _exact_inverse(q: np.ndarray, field: Field) -> np.ndarray | None:
    m = DomainMatrix([[field.coerce(x).value for x in row] for row in q], q.shape, QQ_I)
    if not m.det():
        return None
    return np.array([[GaussianRational.from_domain(x) for x in row] for row in m.inv().to_list()], dtype=object)


def conjugate_by_tail(matrix: np.ndarray, s: int, q: np.ndarray, field: Field) -> np.ndarray:
    """blockdiag(I_s, Q) · A · blockdiag(I_s, Q)^-1, raising SingularQ for singular Q."""
    n = matrix.shape[0]
    if q.shape != (n - s, n - s):
        raise DimensionMismatch("Q must match the tail size", expected=n - s, got=q.shape)
    if field.exact:
        q_lift = lift(q, field)
        q_inv = _exact_inverse(q_lift, field)
        if q_inv is None:
            raise SingularQ("Q is singular")
        x = block_diag(lift(np.eye(s, dtype=int), field), q_lift)
        x_inv = block_diag(lift(np.eye(s, dtype=int), field), q_inv)
        a = lift(matrix, field)
        return exact_matmul(exact_matmul(x, a, field), x_inv, field)
    q = np.asarray(to_numeric(q), dtype=complex)
    if q.size and np.linalg.cond(q) > 1e12:
        raise SingularQ("Q is singular", condition=float(np.linalg.cond(q)))
    x = block_diag(np.eye(s), q)
    result = x @ np.asarray(to_numeric(matrix), dtype=complex) @ np.linalg.inv(x)
    if not np.iscomplexobj(to_numeric(matrix)) and not np.iscomplexobj(to_numeric(q)):
        return result.real
    return result


def similarity_invariance_check(
    a: LabeledMatrix, subset: Sequence[Hashable], q: np.ndarray, config: SolverConfig | None = None
) -> bool:
    config = resolve(config)
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    ordered = a.reorder(keep + rest)
    s = len(keep)
    moved = LabeledMatrix(ordered.labels, conjugate_by_tail(ordered.matrix, s, np.asarray(q), config.field()))
    return ratmatrices_agree(reduce(ordered, subset, config), reduce(moved, subset, config), config, tol=1e-8)


def frame_sequential_check(
    a: LabeledMatrix, sigma1: np.ndarray, sigma2: np.ndarray, config: SolverConfig | None = None
) -> bool:
    """R(λ, Σ1Σ2, A) = R(λ, Σ2, R(λ, Σ1, A))."""
    config = resolve(config)
    f1, f2 = Frame(np.asarray(sigma1)), Frame(np.asarray(sigma2))
    f1.validate(config.eps)
    f2.validate(config.eps)
    field = config.field()
    s1, s2 = f1.lifted(field), f2.lifted(field)
    product = exact_matmul(s1, s2, field) if field.exact else s1 @ s2
    lhs = generalized_reduction(a.to_ratmatrix(field), product)
    inner = reduce_frame(a, f1, config)
    if field.exact:
        return ratmatrices_agree(lhs, generalized_reduction(inner, s2), config)
    poles = np.concatenate([lhs.pole_estimates(), inner.pole_estimates()])
    return functions_agree(
        lhs.evaluate_complex, lambda z: frame_reduction_value(inner.evaluate_complex(z), s2, z), poles, config, tol=1e-8
    )


def frame_det_check(
    a: LabeledMatrix,
    sigma: np.ndarray,
    delta: np.ndarray | None,
    config: SolverConfig | None = None,
    tol: float | None = None,
) -> bool:
    """det(λI - R(λ, Σ, A)) = det(λI - A) / det(λI - Δ*AΔ) for a unitary completion Δ."""
    config = resolve(config)
    field = config.field()
    sigma = np.asarray(sigma)
    delta = np.zeros((sigma.shape[0], 0)) if delta is None else np.asarray(delta)
    whole = np.hstack([to_numeric(sigma), to_numeric(delta)]) if delta.size else to_numeric(sigma)
    if not is_unitary(whole, max(config.eps, 1e-9)):
        raise NotAUnitaryCompletion("[Σ Δ] is not unitary")
    r = reduce_frame(a, sigma, config)
    lhs = (RatMatrix.lambda_identity(r.rows, field) - r).det()
    lifted = a.lifted(field)
    if delta.shape[1]:
        d = lift(delta, field)
        if field.exact:
            star = np.vectorize(field.conjugate, otypes=[object])(d).T
            tail = exact_matmul(exact_matmul(star, lifted, field), d, field)
        else:
            tail = d.conj().T @ lifted @ d
        rhs = _char_poly(lifted, field) / _char_poly(tail, field)
    else:
        rhs = _char_poly(lifted, field)
    return ratfunctions_agree(lhs, rhs, config, tol)


def coordinate_vector(a: LabeledMatrix, label: Hashable) -> np.ndarray:
    e = np.zeros(a.n, dtype=complex)
    e[a.index_of([label])[0]] = 1
    return e


__all__ = [
    "CharPolyIdentity",
    "ResidueReport",
    "assemble_parts",
    "char_poly_identity",
    "conjugate_by_tail",
    "cospectral_check",
    "edge_split_check",
    "eigenframe_reduction_check",
    "eigenprojection",
    "eigvec_restriction_check",
    "frame_det_check",
    "frame_reduction_value",
    "frame_sequential_check",
    "generalized_reduction",
    "reduce",
    "reduce_frame",
    "reduce_ratmatrix",
    "reduce_sequential_check",
    "reduction_value",
    "reduce_via_formula2",
    "residue_check",
    "similarity_invariance_check",
]

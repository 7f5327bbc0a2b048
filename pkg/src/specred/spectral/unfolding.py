"""Unfoldings: matrices whose reduction to the leading block is a given RatMatrix.

Every transform returns a new ``Unfolding`` and re-checks the round trip
``reduce(matrix, leading s labels) == source`` before handing it back.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np
from scipy import linalg

from specred.algebra.fields import ExactField, Field, FloatField
from specred.algebra.ratfun import RationalFunction
from specred.algebra.ratmat import RatMatrix, pfd_matrix
from specred.config import SolverConfig, resolve
from specred.errors import (
    ConstantPartNotHollow,
    DimensionMismatch,
    IllConditionedRoots,
    NotHermitian,
    NotHermitianFeasible,
    NotProper,
    NotRealSymmetric,
    RoundTripFailure,
)
from specred.spectral.labeled import LabeledMatrix, lift, to_numeric
from specred.spectral.reduction import assemble_parts, conjugate_by_tail, reduce
from specred.utils.linalg import block_diag, hollowing_unitary, is_unitary, psd_factor, rank_decomposition
from specred.utils.sampling import ratmatrices_agree

logger = logging.getLogger("specred")

HOLLOW_TOL = 1e-10
FLOAT = FloatField()


@dataclass(frozen=True, eq=False)
class Unfolding:
    """A matrix together with the reduction it unfolds.

    The reduced block is always the first ``s`` labels.
    """

    matrix: LabeledMatrix
    s: int
    source: RatMatrix
    provenance: tuple[dict[str, Any], ...] = ()
    hermitian: bool = False
    hollow: bool = False
    blocks: tuple[int, ...] = ()

    @property
    def subset(self) -> tuple:
        return self.matrix.labels[: self.s]

    @property
    def size(self) -> int:
        return self.matrix.n

    @property
    def tail_size(self) -> int:
        return self.matrix.n - self.s

    @property
    def exact(self) -> bool:
        return self.matrix.matrix.dtype == object

    def parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        m = self.matrix.matrix
        s = self.s
        return m[:s, :s], m[:s, s:], m[s:, :s], m[s:, s:]

    def step(self, matrix: np.ndarray, op: str, params: dict[str, Any] | None = None, **flags: Any) -> Unfolding:
        return replace(
            self,
            matrix=LabeledMatrix.of(matrix),
            provenance=self.provenance + ({"op": op, "params": params or {}},),
            **flags,
        )


@dataclass(frozen=True)
class HermitianFeasibility:
    poles_real: bool
    poles_simple: bool
    residues_hermitian: bool
    residues_psd: tuple[tuple[complex, float], ...]
    limit_hermitian: bool
    proper: bool = True
    tol_psd: float = 1e-8

    @property
    def feasible(self) -> bool:
        return (
            self.proper
            and self.poles_real
            and self.poles_simple
            and self.residues_hermitian
            and all(value >= -self.tol_psd for _, value in self.residues_psd)
            and self.limit_hermitian
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "feasible": self.feasible,
            "proper": self.proper,
            "poles_real": self.poles_real,
            "poles_simple": self.poles_simple,
            "residues_hermitian": self.residues_hermitian,
            "residues_psd": [[[p.real, p.imag], v] for p, v in self.residues_psd],
            "limit_hermitian": self.limit_hermitian,
        }


# Round trip


def verify_round_trip(u: Unfolding, config: SolverConfig | None = None) -> Unfolding:
    """Raise RoundTripFailure unless the unfolding still reduces to its source."""
    config = resolve(config)
    check = config.with_backend("exact" if u.exact and u.source.field.exact else "float")
    r = reduce(u.matrix, list(u.subset), check)
    if not ratmatrices_agree(r, u.source, check, tol=config.tol_roundtrip):
        last = u.provenance[-1]["op"] if u.provenance else "construct"
        raise RoundTripFailure("reduction of the unfolding differs from its source", step=last, size=u.size)
    return u


def _zeros(rows: int, cols: int, field: Field) -> np.ndarray:
    return lift(np.zeros((rows, cols), dtype=int), field)


def _scalar_identity(size: int, value: Any, field: Field) -> np.ndarray:
    out = _zeros(size, size, field)
    for i in range(size):
        out[i, i] = field.coerce(value)
    return out


def _assemble_matrix(m: np.ndarray, c: np.ndarray, d: np.ndarray, f: np.ndarray) -> np.ndarray:
    if not f.shape[0]:
        return np.array(m)
    return np.vstack([np.hstack([m, c]), np.hstack([d, f])])


# Basic unfoldings


def _basic_parts(k: np.ndarray, nu: Any, n: int, field: Field, tol_rank: float):
    """(C, D, F) with C(λI - F)^-1 D = K / (λ - ν)^n."""
    s = k.shape[0]
    x, y = rank_decomposition(k, field, tol_rank)
    r = x.shape[1]
    if r == 0:
        return _zeros(s, 0, field), _zeros(0, s, field), _zeros(0, 0, field)
    if n == 1:
        return lift(x, field), lift(y, field), _scalar_identity(r, nu, field)
    # [[0, 0, C], [Y, νI, 0], [0, D, F]] with (C, D, F) unfolding X̃ / (λ - ν)^(n-1)
    x_pad = _zeros(s, s, field)
    x_pad[:, :r] = lift(x, field)
    y_pad = _zeros(s, s, field)
    y_pad[:r, :] = lift(y, field)
    c, d, f = _basic_parts(x_pad, nu, n - 1, field, tol_rank)
    t = f.shape[0]
    c_new = np.hstack([_zeros(s, s, field), c])
    d_new = np.vstack([y_pad, _zeros(t, s, field)])
    f_new = np.vstack([
        np.hstack([_scalar_identity(s, nu, field), _zeros(s, t, field)]),
        np.hstack([d, f]),
    ])
    return c_new, d_new, f_new


def _source(k: np.ndarray, nu: Any, n: int, field: Field) -> RatMatrix:
    return RatMatrix.from_scalars(k, field).scale(RationalFunction.simple_pole(1, nu, n, field))


def unfold_basic(k: Any, nu: Any, n: int, config: SolverConfig | None = None) -> Unfolding:
    """Unfolding of K / (λ - ν)^n."""
    config = resolve(config)
    if n < 1:
        raise ValueError(f"pole order must be >= 1 (got {n})")
    k = np.atleast_2d(np.asarray(k))
    if k.shape[0] != k.shape[1]:
        raise DimensionMismatch("K must be square", shape=k.shape)
    field = config.field()
    k = lift(k, field)
    s = k.shape[0]
    c, d, f = _basic_parts(k, nu, n, field, config.tol_rank)
    matrix = _assemble_matrix(_zeros(s, s, field), c, d, f)
    u = Unfolding(
        LabeledMatrix.of(matrix),
        s,
        _source(k, nu, n, field),
        ({"op": "unfold_basic", "params": {"pole": str(nu), "order": n, "tail": f.shape[0]}},),
    )
    return verify_round_trip(u, config)


def assemble(unfoldings: Sequence[Unfolding], m: Any = None, config: SolverConfig | None = None) -> Unfolding:
    """Block-diagonal tails side by side; reduces to M plus the sum of the parts."""
    config = resolve(config)
    if not unfoldings:
        raise DimensionMismatch("assemble needs at least one part")
    s = unfoldings[0].s
    if any(u.s != s for u in unfoldings):
        raise DimensionMismatch("parts must share the reduced block size", sizes=[u.s for u in unfoldings])
    exact = all(u.exact for u in unfoldings) and (m is None or np.asarray(m).dtype == object or np.issubdtype(np.asarray(m).dtype, np.integer))
    field: Field = ExactField() if exact else config.float_field()
    m = _zeros(s, s, field) if m is None else lift(np.asarray(m), field)
    if m.shape != (s, s):
        raise DimensionMismatch("constant block must match the reduced block", expected=s, got=m.shape)
    parts = [tuple(lift(p, field) for p in u.parts()) for u in unfoldings]
    matrix = assemble_parts(m, parts)
    source = RatMatrix.from_scalars(m, field)
    for u in unfoldings:
        source = source + u.source.to_field(field)
    u = Unfolding(
        LabeledMatrix.of(matrix),
        s,
        source,
        ({"op": "assemble", "params": {"parts": len(unfoldings), "tails": [x.tail_size for x in unfoldings]}},),
        hermitian=all(x.hermitian for x in unfoldings) and _is_hermitian(m, field, config.eps),
    )
    return verify_round_trip(u, config)


def _is_hermitian(m: np.ndarray, field: Field, eps: float) -> bool:
    v = np.asarray(to_numeric(m), dtype=complex)
    return bool(np.max(np.abs(v - v.conj().T), initial=0.0) <= eps * max(1.0, float(np.max(np.abs(v), initial=0.0))))


def unfold_general(r: RatMatrix, config: SolverConfig | None = None) -> Unfolding:
    """Partial fractions, one basic unfolding per term, constant part on the leading block."""
    config = resolve(config)
    if not r.is_square:
        raise DimensionMismatch("only square matrices unfold", shape=r.shape)
    if not r.is_proper:
        raise NotProper("unfolding needs a proper matrix")
    if r.is_constant:
        u = Unfolding(LabeledMatrix.of(r.constant_part()), r.rows, r, ({"op": "unfold_general", "params": {"terms": 0}},))
        return verify_round_trip(u, config)
    pff = pfd_matrix(r, config)
    field = pff.field
    s = r.rows
    parts = []
    for term in pff.terms:
        c, d, f = _basic_parts(term.coefficient, term.pole, term.order, field, config.tol_rank)
        parts.append((_zeros(s, s, field), c, d, f))
        logger.debug(f"Term at pole {term.pole} order {term.order}: tail {f.shape[0]}")
    matrix = assemble_parts(pff.constant, parts)
    u = Unfolding(
        LabeledMatrix.of(matrix),
        s,
        r,
        ({"op": "unfold_general", "params": {"terms": len(pff.terms), "size": matrix.shape[0]}},),
    )
    logger.info(f"Unfolded {s}x{s} reduction into a {matrix.shape[0]}x{matrix.shape[0]} matrix")
    return verify_round_trip(u, config)


# Hermitian unfoldings


def check_hermitian_feasibility(r: RatMatrix, config: SolverConfig | None = None) -> HermitianFeasibility:
    """Real simple poles, Hermitian PSD residues and a Hermitian limit."""
    config = resolve(config)
    if not r.is_square or not r.is_proper:
        return HermitianFeasibility(False, False, False, (), False, proper=False, tol_psd=config.tol_psd)
    try:
        pff = pfd_matrix(r, config)
    except IllConditionedRoots as exc:
        logger.warning(f"Feasibility check could not separate poles: {exc}")
        return HermitianFeasibility(False, False, False, (), False, tol_psd=config.tol_psd)
    poles_real = all(abs(complex(t.pole).imag) <= config.tol_pole for t in pff.terms)
    poles_simple = all(t.order == 1 for t in pff.terms)
    residues_hermitian = True
    residues = []
    for term in pff.terms:
        if term.order != 1:
            continue
        k = np.asarray(to_numeric(term.coefficient), dtype=complex)
        if not _is_hermitian(k, pff.field, max(config.eps, config.tol_psd)):
            residues_hermitian = False
        lowest = float(linalg.eigvalsh((k + k.conj().T) / 2)[0])
        residues.append((complex(term.pole), lowest))
    limit_hermitian = _is_hermitian(pff.constant, pff.field, config.eps)
    return HermitianFeasibility(
        poles_real, poles_simple, residues_hermitian, tuple(residues), limit_hermitian, tol_psd=config.tol_psd
    )


def unfold_hermitian(r: RatMatrix, config: SolverConfig | None = None) -> Unfolding:
    """[[M, X_1, X_2, ...], [X_1*, ν_1 I, ...], ...] with residues K = X X*."""
    config = resolve(config)
    report = check_hermitian_feasibility(r, config)
    if not report.feasible:
        raise NotHermitianFeasible("no Hermitian unfolding exists", report=report, **report.to_dict())
    s = r.rows
    pff = pfd_matrix(r, config) if not r.is_constant else None
    constant = np.asarray(to_numeric(r.constant_part()), dtype=complex)
    constant = (constant + constant.conj().T) / 2
    parts = []
    for term in pff.terms if pff else ():
        x = psd_factor(np.asarray(to_numeric(term.coefficient), dtype=complex), config.tol_psd)
        nu = float(complex(term.pole).real)
        rank = x.shape[1]
        parts.append((np.zeros((s, s)), x, x.conj().T, nu * np.eye(rank)))
    real = np.all(np.abs(constant.imag) <= config.eps) and all(not np.iscomplexobj(p[1]) for p in parts)
    if real:
        constant = constant.real
    matrix = assemble_parts(constant, parts)
    if real:
        matrix = np.real(matrix)
    u = Unfolding(
        LabeledMatrix.of(matrix),
        s,
        r,
        ({"op": "unfold_hermitian", "params": {"terms": len(parts), "size": matrix.shape[0], "tol_psd": config.tol_psd}},),
        hermitian=True,
    )
    logger.info(f"Hermitian unfolding of size {matrix.shape[0]}")
    return verify_round_trip(u, config)


# Correctness-preserving transforms


def conjugate_tail(u: Unfolding, q: Any, config: SolverConfig | None = None) -> Unfolding:
    """Replace A by blockdiag(I, Q) A blockdiag(I, Q)^-1."""
    config = resolve(config)
    q = np.atleast_2d(np.asarray(q)) if np.size(q) else np.zeros((0, 0))
    exact = u.exact and (q.dtype == object or np.issubdtype(q.dtype, np.integer))
    field: Field = ExactField() if exact else config.float_field()
    matrix = conjugate_by_tail(u.matrix.matrix, u.s, q, field)
    unitary = not q.size or is_unitary(to_numeric(q))
    out = u.step(
        matrix,
        "conjugate_tail",
        {"size": int(q.shape[0]), "unitary": bool(unitary)},
        hermitian=u.hermitian and unitary,
        hollow=u.hollow and bool(np.all(np.abs(np.diag(to_numeric(matrix))) <= HOLLOW_TOL)),
    )
    return verify_round_trip(out, config)


def _require_hermitian(u: Unfolding, config: SolverConfig) -> np.ndarray:
    if not u.matrix.is_hermitian(max(config.eps, 1e-9)):
        raise NotHermitian("transform needs a Hermitian unfolding", size=u.size)
    m = np.asarray(u.matrix.numeric)
    return m.real.astype(float) if not np.iscomplexobj(m) or u.matrix.is_real else m.astype(complex)


def _snap_diagonal(matrix: np.ndarray, indices: Sequence[int]) -> np.ndarray:
    out = np.array(matrix)
    for i in indices:
        if abs(out[i, i]) <= HOLLOW_TOL:
            out[i, i] = 0
    return out


def hollow(u: Unfolding, config: SolverConfig | None = None) -> Unfolding:
    """Hermitian unfolding with an all-zero diagonal."""
    config = resolve(config)
    a = _require_hermitian(u, config)
    s = u.s
    leading = np.diag(a)[:s]
    if np.any(np.abs(leading) > HOLLOW_TOL):
        raise ConstantPartNotHollow(
            "the constant part of the reduction has a nonzero diagonal",
            diagonal=[complex(x).real for x in leading],
        )
    trace = float(np.real(np.trace(a[s:, s:])))
    appended = abs(trace) > HOLLOW_TOL
    if appended:
        a = block_diag(a, np.array([[-trace]], dtype=a.dtype))
        logger.info(f"Appended a tail vertex with diagonal {-trace:.6g}")
    tail = a[s:, s:]
    q = hollowing_unitary(tail, HOLLOW_TOL)
    matrix = conjugate_by_tail(a, s, q.conj().T, config.float_field())
    if not np.iscomplexobj(a):
        matrix = np.real(matrix)
    matrix = _snap_diagonal((matrix + matrix.conj().T) / 2, range(matrix.shape[0]))
    is_hollow = bool(np.all(np.abs(np.diag(matrix)) <= HOLLOW_TOL))
    if not is_hollow:
        logger.warning(f"Hollowing left diagonal entries up to {np.max(np.abs(np.diag(matrix))):.3g}")
    out = u.step(matrix, "hollow", {"appended": int(appended), "trace": trace}, hermitian=True, hollow=is_hollow)
    return verify_round_trip(out, config)


def _traceless(block: np.ndarray) -> bool:
    return abs(np.trace(block)) <= HOLLOW_TOL * max(1.0, float(np.max(np.abs(block), initial=0.0)))


def _hollow_blocks(
    matrix: np.ndarray, s: int, sizes: Sequence[int], pad: bool
) -> tuple[np.ndarray, list[int], int, bool]:
    """Rotate every trace-zero tail block to a hollow block.

    With ``pad`` a block with nonzero trace first takes on a decoupled vertex
    carrying minus that trace on its diagonal, which leaves the reduction
    unchanged.
    """
    real = not np.iscomplexobj(matrix)
    sizes = list(sizes)
    bounds = np.cumsum([s] + sizes)
    appended = 0
    # back to front so the earlier bounds stay valid
    for k in reversed(range(len(sizes)) if pad else ()):
        start, stop = int(bounds[k]), int(bounds[k + 1])
        block = matrix[start:stop, start:stop]
        if not _traceless(block):
            trace = float(np.real(np.trace(block)))
            matrix = np.insert(np.insert(matrix, stop, 0, axis=0), stop, 0, axis=1)
            matrix[stop, stop] = -trace
            sizes[k] += 1
            appended += 1
            logger.debug(f"Padded band block {k} with a decoupled vertex, trace {trace:.6g}")
    rotations = []
    start = s
    for size in sizes:
        block = matrix[start : start + size, start : start + size]
        rotations.append(hollowing_unitary(block, HOLLOW_TOL) if _traceless(block) else np.eye(size, dtype=block.dtype))
        start += size
    if rotations:
        q = block_diag(*rotations)
        matrix = conjugate_by_tail(matrix, s, q.conj().T, FLOAT)
        if real:
            matrix = np.real(matrix)
        matrix = _snap_diagonal((matrix + matrix.conj().T) / 2, range(matrix.shape[0]))
    return matrix, sizes, appended, bool(np.all(np.abs(np.diag(matrix)) <= HOLLOW_TOL))


def compress_band(u: Unfolding, config: SolverConfig | None = None) -> Unfolding:
    """Block-tridiagonal form by successive SVDs of the coupling to the untouched tail.

    Coupling directions with singular values below tol_rank are dropped; a
    tail left without any coupling is decoupled from the leading block and
    is removed. A hollow input stays hollow: tail blocks are rotated to zero
    diagonal, padded by a decoupled vertex where their trace is not zero.
    """
    config = resolve(config)
    a = _require_hermitian(u, config)
    n = a.shape[0]
    band = list(range(u.s))
    pos = u.s
    sizes: list[int] = []
    while pos < n:
        coupling = a[np.ix_(band, range(pos, n))]
        _, sigma, vh = linalg.svd(coupling)
        scale = max(1.0, float(np.linalg.norm(a)))
        rank = int(np.sum(sigma > config.tol_rank * scale))
        if rank == 0:
            logger.info(f"Dropping {n - pos} decoupled tail vertices")
            a = a[:pos, :pos]
            n = pos
            break
        # tail basis V: new coupling C V concentrates in the first ``rank`` columns
        a = conjugate_by_tail(a, pos, vh, FLOAT)
        if not np.iscomplexobj(coupling):
            a = np.real(a)
        a = (a + a.conj().T) / 2
        sizes.append(rank)
        band = list(range(pos, pos + rank))
        pos += rank
        logger.debug(f"Band block of size {rank} at position {band[0]}")
    dropped = u.size - n
    a = _clean_band(a, u.s, sizes)
    a, sizes, appended, is_hollow = _hollow_blocks(a, u.s, sizes, pad=u.hollow)
    if u.hollow and not is_hollow:
        logger.warning("Leading block keeps a nonzero diagonal; band form is not hollow")
    out = u.step(
        a,
        "compress_band",
        {"blocks": [u.s] + sizes, "dropped": dropped, "appended": appended, "tol_rank": config.tol_rank},
        hermitian=True,
        hollow=is_hollow,
        blocks=tuple([u.s] + sizes),
    )
    return verify_round_trip(out, config)


def _clean_band(a: np.ndarray, s: int, sizes: Sequence[int]) -> np.ndarray:
    """Zero the rounding residue outside the block-tridiagonal envelope."""
    bounds = np.cumsum([0, s] + list(sizes))
    block_of = np.searchsorted(bounds, np.arange(a.shape[0]), side="right") - 1
    mask = np.abs(block_of[:, None] - block_of[None, :]) > 1
    out = np.array(a)
    out[mask] = 0
    return out


def band_envelope_ok(u: Unfolding, tol: float = 1e-12) -> bool:
    """Nonzero entries only within the block-tridiagonal envelope of ``u.blocks``."""
    if not u.blocks:
        return False
    a = np.asarray(u.matrix.numeric)
    bounds = np.cumsum([0] + list(u.blocks))
    block_of = np.searchsorted(bounds, np.arange(a.shape[0]), side="right") - 1
    mask = np.abs(block_of[:, None] - block_of[None, :]) > 1
    return bool(np.all(np.abs(a[mask]) <= tol))


def _negatives(a: np.ndarray, signs: np.ndarray, tol: float) -> int:
    signed = signs[:, None] * a * signs[None, :]
    off = ~np.eye(a.shape[0], dtype=bool)
    return int(np.sum((signed < -tol) & off))


def sign_cleanup(u: Unfolding, config: SolverConfig | None = None, tol: float = 1e-12) -> Unfolding:
    """Diagonal ±1 conjugation of the tail making as many off-diagonal entries nonnegative as it can."""
    config = resolve(config)
    m = np.asarray(u.matrix.numeric)
    if np.iscomplexobj(m) or not np.allclose(m, m.T, atol=config.eps):
        raise NotRealSymmetric("sign cleanup needs a real symmetric matrix", size=u.size)
    a = np.asarray(m, dtype=float)
    n, s = a.shape[0], u.s
    signs = np.zeros(n)
    signs[:s] = 1
    queue = deque(range(s))
    while queue:
        i = queue.popleft()
        for j in range(s, n):
            if signs[j] or abs(a[i, j]) <= tol:
                continue
            placed = [k for k in range(n) if signs[k] and abs(a[j, k]) > tol]
            vote = sum(signs[k] * np.sign(a[j, k]) for k in placed)
            signs[j] = 1 if vote >= 0 else -1
            queue.append(j)
    signs[signs == 0] = 1
    # single flips until no flip lowers the count of negative entries
    best = _negatives(a, signs, tol)
    improved = True
    while improved:
        improved = False
        for j in range(s, n):
            signs[j] = -signs[j]
            count = _negatives(a, signs, tol)
            if count < best:
                best, improved = count, True
            else:
                signs[j] = -signs[j]
    matrix = signs[:, None] * a * signs[None, :]
    out = u.step(
        matrix,
        "sign_cleanup",
        {"signs": [int(x) for x in signs[s:]], "negative_entries": best},
    )
    logger.debug(f"Sign cleanup left {best} negative off-diagonal entries")
    return verify_round_trip(out, config)


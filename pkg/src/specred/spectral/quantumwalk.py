"""Continuous-time quantum walks U(t) = e^{-itA} and their certification."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from scipy import optimize

from specred.algebra.ratmat import RatMatrix
from specred.config import SolverConfig, resolve
from specred.errors import (
    DimensionMismatch,
    NotHermitian,
    ReductionsDiffer,
    SingularOverFunctionField,
    SingularTransform,
    SubsetViolation,
)
from specred.spectral.labeled import LabeledMatrix, Subset
from specred.spectral.reduction import _as_subset, reduce
from specred.spectral.trig import TrigWalkSpec
from specred.spectral.unfolding import unfold_hermitian
from specred.utils.sampling import ratmatrices_agree

logger = logging.getLogger("specred")

PST_TOL = 1e-8
# a maximum of |U(t)_vu| pins t only to about sqrt(machine eps); scanned times certify at this looser level
SCAN_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WalkSample:
    subset: tuple[Hashable, ...]
    times: tuple[float, ...]
    blocks: tuple[np.ndarray, ...]

    def matches(self, other: WalkSample, tol: float = 1e-9) -> bool:
        if len(self.blocks) != len(other.blocks):
            return False
        return all(a.shape == b.shape and np.max(np.abs(a - b), initial=0.0) <= tol for a, b in zip(self.blocks, other.blocks))


@dataclass(frozen=True)
class PSTCertificate:
    u: Hashable
    v: Hashable
    tau: float
    gamma: complex
    deviation: float


@dataclass(frozen=True)
class PSTReport:
    """Outcome of a state-transfer test; ``certificate`` is set only on success."""

    u: Hashable
    v: Hashable
    tau: float
    mass: float
    deviation: float
    gamma: complex
    tol: float

    @property
    def certified(self) -> bool:
        return self.deviation <= self.tol

    @property
    def certificate(self) -> PSTCertificate | None:
        if not self.certified:
            return None
        return PSTCertificate(self.u, self.v, self.tau, self.gamma, self.deviation)


@dataclass(frozen=True, eq=False)
class FRReport:
    revival: bool
    tau: float
    h: np.ndarray | None = None
    worst_column: Hashable | None = None
    leaked: float = 0.0


def _require_hermitian(a: LabeledMatrix) -> None:
    if not a.hermitian:
        raise NotHermitian("quantum walks need a Hermitian matrix", size=a.n)


def evolve(a: LabeledMatrix, t: float) -> np.ndarray:
    """e^{-itA} from the cached eigendecomposition of A."""
    _require_hermitian(a)
    w, v = a.eigh
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def restricted_walk(a: LabeledMatrix, subset: Subset | Sequence[Hashable], times: Sequence[float]) -> WalkSample:
    """Blocks (e^{-itA})_SS at each time."""
    _require_hermitian(a)
    subset = _as_subset(subset)
    keep = a.index_of(subset.labels)
    w, v = a.eigh
    rows = v[keep, :]
    blocks = tuple((rows * np.exp(-1j * t * w)) @ rows.conj().T for t in times)
    return WalkSample(subset.labels, tuple(float(t) for t in times), blocks)


def transition_amplitude(a: LabeledMatrix, u: Hashable, v: Hashable, t: float) -> complex:
    iu, iv = a.index_of([u, v])
    w, vecs = a.eigh
    return complex(np.sum(vecs[iv, :] * np.conj(vecs[iu, :]) * np.exp(-1j * t * w)))


def pst_check(a: LabeledMatrix, u: Hashable, v: Hashable, tau: float, tol: float = PST_TOL) -> PSTReport:
    """Test U(τ)e_u = γe_v; the deviation ‖U(τ)e_u - γe_v‖ is measured directly."""
    if u == v:
        raise SubsetViolation("state transfer needs two different vertices", vertex=u)
    iu, iv = a.index_of([u, v])
    column = evolve(a, tau)[:, iu]
    amplitude = column[iv]
    gamma = amplitude / abs(amplitude) if abs(amplitude) > 0 else 1 + 0j
    target = np.zeros(a.n, dtype=complex)
    target[iv] = gamma
    deviation = float(np.linalg.norm(column - target))
    report = PSTReport(u, v, float(tau), float(abs(amplitude) ** 2), deviation, complex(gamma), tol)
    logger.debug(f"PST {u}->{v} at {tau:.6g}: deviation {deviation:.3g}")
    return report


def pst_scan(
    a: LabeledMatrix,
    u: Hashable,
    v: Hashable,
    horizon: float,
    grid: int = 512,
    tol: float = SCAN_TOL,
) -> list[PSTCertificate]:
    """Certified transfer times in [0, horizon].

    Local maxima of |U(t)_vu| on the grid are refined by golden-section search
    and certified with ``pst_check`` at ``tol``. Re-run ``pst_check`` at a
    known time for the tighter PST_TOL.
    """
    if horizon <= 0 or grid < 2:
        raise ValueError("scan needs a positive horizon and at least two grid points")
    _require_hermitian(a)
    ts = np.linspace(0.0, horizon, grid)

    def magnitude(t: float) -> float:
        return abs(transition_amplitude(a, u, v, t))

    values = np.array([magnitude(t) for t in ts])
    found: list[PSTCertificate] = []
    for k in range(grid):
        left = values[k - 1] if k > 0 else -np.inf
        right = values[k + 1] if k < grid - 1 else -np.inf
        if not (values[k] >= left and values[k] >= right) or values[k] < 1 - np.sqrt(tol):
            continue
        tau = float(ts[k])
        if 0 < k < grid - 1 and values[k] > left and values[k] > right:
            tau = float(
                optimize.golden(lambda t: -magnitude(t), brack=(ts[k - 1], ts[k], ts[k + 1]), tol=1e-12)
            )
        certificate = pst_check(a, u, v, tau, tol).certificate
        if certificate and not any(abs(c.tau - tau) < 1e-6 for c in found):
            found.append(certificate)
    logger.info(f"Scan {u}->{v} on [0, {horizon:.4g}]: {len(found)} certified times")
    return found


def fr_check(a: LabeledMatrix, subset: Subset | Sequence[Hashable], tau: float, tol: float = PST_TOL) -> FRReport:
    """Fractional revival on S: columns of U(τ) indexed by S stay inside S."""
    subset = _as_subset(subset)
    keep, rest = subset.split(a)
    u = evolve(a, tau)
    if not rest:
        return FRReport(True, float(tau), u[np.ix_(keep, keep)])
    leaks = np.linalg.norm(u[np.ix_(rest, keep)], axis=0)
    worst = int(np.argmax(leaks))
    if leaks[worst] <= tol:
        return FRReport(True, float(tau), u[np.ix_(keep, keep)], leaked=float(leaks[worst]))
    return FRReport(False, float(tau), None, subset.labels[worst], float(leaks[worst]))


def walk_equivalence_check(
    a1: LabeledMatrix,
    s1: Sequence[Hashable],
    a2: LabeledMatrix,
    s2: Sequence[Hashable],
    times: Sequence[float],
    tol: float = 1e-9,
    config: SolverConfig | None = None,
) -> bool:
    """Equal reductions force equal restricted walks; the reductions are compared first."""
    config = resolve(config)
    s1, s2 = _as_subset(s1), _as_subset(s2)
    if len(s1) != len(s2):
        raise DimensionMismatch("subsets must have the same size", sizes=[len(s1), len(s2)])
    if not ratmatrices_agree(reduce(a1, s1, config), reduce(a2, s2, config), config):
        raise ReductionsDiffer("reductions differ; walk equivalence is vacuous")
    first = restricted_walk(a1, s1, times)
    second = restricted_walk(a2, s2, times)
    return first.matches(second, tol)


def reduction_from_trig_walk(spec: TrigWalkSpec, config: SolverConfig | None = None) -> RatMatrix:
    """R = λI - i·(L(λ))^-1 for the transformed walk block L."""
    config = resolve(config)
    field = config.field()
    transformed = spec.laplace(field)
    try:
        inverse = transformed.inverse()
    except SingularOverFunctionField as exc:
        raise SingularTransform("transformed walk is singular; not a restricted unitary walk") from exc
    return RatMatrix.lambda_identity(spec.size, field) - inverse.scale(field.coerce(1j))


def restricted_walk_from_reduction(r: RatMatrix, times: Sequence[float], config: SolverConfig | None = None) -> WalkSample:
    """The walk a reduction determines, realized through a Hermitian unfolding."""
    unfolding = unfold_hermitian(r, config)
    return restricted_walk(unfolding.matrix, list(unfolding.subset), times)

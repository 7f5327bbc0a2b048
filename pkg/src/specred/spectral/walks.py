"""Walk generating functions restricted to a vertex subset.

The returning series W_S(t) = ((I - tA)^-1)_SS comes from matrix powers; the
non-returning series W*_S(t) is read off the expansion of the reduction at
infinity, R(λ) = Σ w*_ℓ λ^(1-ℓ), so w*_1 is the constant part A_SS.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from specred.algebra.ratmat import RatMatrix
from specred.config import SolverConfig, resolve
from specred.errors import BruteForceTooLarge
from specred.spectral.labeled import LabeledMatrix, Subset, lift
from specred.spectral.reduction import _as_subset, reduce
from specred.utils.sampling import values_close

BRUTE_FORCE_STATES = 100_000


@dataclass(frozen=True, eq=False)
class WalkSeries:
    subset: tuple[Hashable, ...]
    coefficients: tuple[np.ndarray, ...]
    kind: str = "returning"

    @property
    def length(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, index: int) -> np.ndarray:
        return self.coefficients[index]

    def matches(self, other: WalkSeries, tol: float | None = None) -> bool:
        """Coefficient-wise equality; exact unless a tolerance is given."""
        if len(self.coefficients) != len(other.coefficients):
            return False
        for a, b in zip(self.coefficients, other.coefficients):
            if a.shape != b.shape:
                return False
            if tol is None:
                if not all(x == y for x, y in zip(a.ravel(), b.ravel())):
                    return False
            elif not values_close(_numeric(a), _numeric(b), tol):
                return False
        return True


def _numeric(a: np.ndarray) -> np.ndarray:
    return np.array([complex(x) for x in a.ravel()], dtype=complex).reshape(a.shape)


def _working_matrix(a: LabeledMatrix, config: SolverConfig) -> np.ndarray:
    m = a.matrix
    if m.dtype != object and np.issubdtype(m.dtype, np.integer):
        out = np.empty(m.shape, dtype=object)
        for idx in np.ndindex(m.shape):
            out[idx] = int(m[idx])
        return out
    field = config.field()
    return lift(m, field)


def _identity(size: int, like: np.ndarray) -> np.ndarray:
    if like.dtype == object:
        out = np.zeros((size, size), dtype=object)
        for i in range(size):
            out[i, i] = 1
        return out
    return np.eye(size, dtype=like.dtype)


def walk_series_returning(
    a: LabeledMatrix, subset: Subset | Sequence[Hashable], length: int, config: SolverConfig | None = None
) -> WalkSeries:
    """w_ℓ = (A^ℓ)_SS for ℓ = 0..length."""
    config = resolve(config)
    subset = _as_subset(subset)
    if length < 0:
        raise ValueError(f"length must be >= 0 (got {length})")
    keep = a.index_of(subset.labels)
    m = _working_matrix(a, config)
    power = _identity(a.n, m)
    coefficients = []
    for _ in range(length + 1):
        coefficients.append(power[np.ix_(keep, keep)])
        power = power @ m
    return WalkSeries(subset.labels, tuple(coefficients), "returning")


def _expansion(r: RatMatrix, length: int) -> list[np.ndarray]:
    """Coefficients r_0..r_{length-1} of R(λ) = Σ r_k λ^-k."""
    expansions = [e.expand_at_infinity(length) for e in r.entries]
    out = []
    for k in range(length):
        block = np.empty((r.rows, r.cols), dtype=object if r.field.exact else complex)
        for idx, series in enumerate(expansions):
            block[divmod(idx, r.cols)] = series[k]
        out.append(block)
    return out


def nonreturning_from_reduction(r: RatMatrix, length: int, subset: tuple = ()) -> WalkSeries:
    """w*_0 = 0 and w*_ℓ = r_(ℓ-1)."""
    zero = np.zeros((r.rows, r.cols), dtype=object if r.field.exact else complex)
    if r.field.exact:
        zero[...] = 0
    coefficients = [zero] + _expansion(r, length)
    return WalkSeries(subset or tuple(range(1, r.rows + 1)), tuple(coefficients), "nonreturning")


def walk_series_nonreturning(
    a: LabeledMatrix, subset: Subset | Sequence[Hashable], length: int, config: SolverConfig | None = None
) -> WalkSeries:
    config = resolve(config)
    subset = _as_subset(subset)
    if length < 1:
        raise ValueError(f"length must be >= 1 (got {length})")
    return nonreturning_from_reduction(reduce(a, subset, config), length, subset.labels)


def invert_series(star: WalkSeries) -> WalkSeries:
    """Coefficients of (I - W*(t))^-1: X_0 = I, X_n = Σ_k w*_k X_(n-k)."""
    first = star.coefficients[0]
    size = first.shape[0]
    out = [_identity(size, first)]
    for n in range(1, len(star.coefficients)):
        acc = None
        for k in range(1, n + 1):
            term = star.coefficients[k] @ out[n - k]
            acc = term if acc is None else acc + term
        out.append(acc)
    return WalkSeries(star.subset, tuple(out), "returning")


def walk_series_from_reduction(r: RatMatrix, length: int, subset: tuple = ()) -> WalkSeries:
    """The returning series determined by the reduction alone: (I - tR(1/t))^-1."""
    return invert_series(nonreturning_from_reduction(r, length, subset))


def power_restriction(
    a: LabeledMatrix, subset: Subset | Sequence[Hashable], power: int, config: SolverConfig | None = None
) -> np.ndarray:
    """(A^k)_SS recovered from the reduction."""
    subset = _as_subset(subset)
    return walk_series_from_reduction(reduce(a, subset, config), power, subset.labels)[power]


def walk_series_brute(
    a: LabeledMatrix,
    subset: Subset | Sequence[Hashable],
    length: int,
    kind: str = "returning",
    max_states: int = BRUTE_FORCE_STATES,
) -> WalkSeries:
    """Walk counts by explicit traversal of the adjacency lists.

    Weights must be nonnegative integers (edge multiplicities). Non-returning
    walks are absorbed the first time they re-enter the subset.
    """
    subset = _as_subset(subset)
    if a.n * (length + 1) * len(subset) > max_states:
        raise BruteForceTooLarge(
            "walk enumeration refused", vertices=a.n, length=length, limit=max_states
        )
    m = np.asarray(a.numeric)
    if np.iscomplexobj(m) or np.any(m < 0) or np.any(m != np.round(m)):
        raise ValueError("walk enumeration needs nonnegative integer weights")
    adjacency = {u: [(v, int(m[u, v])) for v in range(a.n) if m[u, v]] for u in range(a.n)}
    keep = a.index_of(subset.labels)
    position = {v: i for i, v in enumerate(keep)}
    s = len(keep)
    coefficients = [np.zeros((s, s), dtype=object) for _ in range(length + 1)]
    for block in coefficients:
        block[...] = 0
    for i, start in enumerate(keep):
        frontier = {start: 1}
        if kind == "returning":
            coefficients[0][i, i] = 1
        for step in range(1, length + 1):
            nxt: dict[int, int] = {}
            for u, count in frontier.items():
                for v, weight in adjacency[u]:
                    nxt[v] = nxt.get(v, 0) + count * weight
            for v, count in list(nxt.items()):
                if v in position:
                    coefficients[step][i, position[v]] += count
                    if kind == "nonreturning":
                        del nxt[v]
            frontier = nxt
    return WalkSeries(subset.labels, tuple(coefficients), kind)


def walk_identity_check(
    a: LabeledMatrix, subset: Subset | Sequence[Hashable], length: int, config: SolverConfig | None = None
) -> bool:
    """(I - W*_S(t))^-1 agrees with W_S(t) through the given length."""
    config = resolve(config)
    subset = _as_subset(subset)
    returning = walk_series_returning(a, subset, length, config)
    if length == 0:
        return True
    derived = invert_series(walk_series_nonreturning(a, subset, length, config))
    return derived.matches(returning, None if config.exact else 1e-8)

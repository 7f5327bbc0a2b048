"""Sampled-equality protocol shared by every identity check on the float backend."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from specred.algebra.ratfun import RationalFunction
from specred.algebra.ratmat import RatMatrix
from specred.config import SolverConfig, resolve


def sample_points(poles: Sequence[complex], config: SolverConfig | None = None, count: int | None = None) -> list[float]:
    """Seeded real points in [-radius, radius] kept at least ``margin`` away from every pole."""
    config = resolve(config)
    rng = config.rng()
    count = count or config.sample_count
    poles = np.asarray(list(poles), dtype=complex)
    margin = config.sample_margin
    points: list[float] = []
    draws = 0
    while len(points) < count:
        x = float(rng.uniform(-config.sample_radius, config.sample_radius))
        draws += 1
        if draws % 1000 == 0:
            margin /= 2
        if len(poles) and np.min(np.abs(poles - x)) < margin:
            continue
        points.append(x)
    return points


def values_close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """Entrywise |a-b| <= tol * max(1, |a|, |b|)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return bool(np.all(np.abs(a - b) <= tol * scale))


def functions_agree(
    f: Callable[[float], np.ndarray],
    g: Callable[[float], np.ndarray],
    poles: Sequence[complex],
    config: SolverConfig | None = None,
    tol: float | None = None,
    count: int | None = None,
) -> bool:
    config = resolve(config)
    tol = config.sample_tol if tol is None else tol
    return all(values_close(f(x), g(x), tol) for x in sample_points(poles, config, count))


def ratmatrices_agree(
    a: RatMatrix, b: RatMatrix, config: SolverConfig | None = None, tol: float | None = None
) -> bool:
    """Exact normal-form equality when both sides are exact, sampled otherwise."""
    if a.shape != b.shape:
        return False
    if a.field.exact and b.field.exact:
        return a.equals(b)
    poles = np.concatenate([a.pole_estimates(), b.pole_estimates()])
    return functions_agree(a.evaluate_complex, b.evaluate_complex, poles, config, tol)


def ratfunctions_agree(
    a: RationalFunction, b: RationalFunction, config: SolverConfig | None = None, tol: float | None = None
) -> bool:
    if a.field.exact and b.field.exact:
        return a == b
    poles = np.concatenate([a.pole_estimates, b.pole_estimates])
    return functions_agree(a.evaluate_complex, b.evaluate_complex, poles, config, tol)

"""Dense linear-algebra helpers: rank factorizations, completions, hollowing rotations."""

from __future__ import annotations

from typing import Any

import numpy as np
from scipy import linalg, stats

from specred.algebra.fields import Field


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    blocks = [np.atleast_2d(b) if np.size(b) else np.zeros((0, 0)) for b in blocks]
    if any(b.dtype == object for b in blocks):
        n = sum(b.shape[0] for b in blocks)
        m = sum(b.shape[1] for b in blocks)
        out = np.zeros((n, m), dtype=object)
        r = c = 0
        for b in blocks:
            out[r : r + b.shape[0], c : c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        return out
    return linalg.block_diag(*blocks)


def rank_decomposition(k: np.ndarray, field: Field, tol_rank: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """K = X @ Y with X of full column rank.

    Exact entries use reduced row echelon form (X = pivot columns). Float
    entries use QR with column pivoting, truncated at tol_rank * ||K||.
    """
    rows, cols = k.shape
    if field.exact:
        work = [[field.coerce(x) for x in row] for row in k]
        pivots = []
        r = 0
        for c in range(cols):
            pivot = next((i for i in range(r, rows) if work[i][c]), None)
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            inv = field.one / work[r][c]
            work[r] = [x * inv for x in work[r]]
            for i in range(rows):
                if i != r and work[i][c]:
                    f = work[i][c]
                    work[i] = [x - f * y for x, y in zip(work[i], work[r])]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        x = np.empty((rows, len(pivots)), dtype=object)
        for j, c in enumerate(pivots):
            for i in range(rows):
                x[i, j] = field.coerce(k[i, c])
        y = np.empty((len(pivots), cols), dtype=object)
        for i in range(len(pivots)):
            for j in range(cols):
                y[i, j] = work[i][j]
        return x, y
    k = np.asarray(k, dtype=complex)
    if not np.any(k):
        return np.zeros((rows, 0), dtype=complex), np.zeros((0, cols), dtype=complex)
    q, r_mat, perm = linalg.qr(k, pivoting=True, mode="economic")
    diag = np.abs(np.diag(r_mat))
    rank = int(np.sum(diag > tol_rank * max(np.linalg.norm(k), 1e-300)))
    y = np.zeros((rank, cols), dtype=complex)
    y[:, perm] = r_mat[:rank, :]
    return q[:, :rank], y


def psd_factor(k: np.ndarray, tol_psd: float = 1e-8) -> np.ndarray:
    """X with X X* = K for a Hermitian PSD K, dropping eigenvalues below tol_psd."""
    k = np.asarray(k, dtype=complex)
    w, v = linalg.eigh((k + k.conj().T) / 2)
    keep = w > tol_psd
    x = fix_phases(v[:, keep]) * np.sqrt(w[keep])
    if np.all(np.abs(x.imag) <= 1e-14 * max(1.0, np.abs(x).max(initial=0.0))):
        return x.real
    return x


def fix_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so that its largest-magnitude entry is real and positive."""
    v = np.array(v, dtype=complex)
    for j in range(v.shape[1]):
        col = v[:, j]
        i = int(np.argmax(np.abs(col) - 1e-12 * np.arange(len(col))))
        if col[i] != 0:
            v[:, j] = col * (abs(col[i]) / col[i])
    return v


def unitary_completion(sigma: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the columns of sigma."""
    sigma = np.asarray(sigma, dtype=complex)
    return linalg.null_space(sigma.conj().T)


def is_unitary(q: np.ndarray, tol: float = 1e-9) -> bool:
    q = np.asarray(q, dtype=complex)
    return q.shape[0] == q.shape[1] and bool(np.max(np.abs(q.conj().T @ q - np.eye(q.shape[0])), initial=0.0) <= tol)


def random_unitary(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1)) if real else np.array([[np.exp(2j * np.pi * rng.uniform())]])
    if real:
        return stats.ortho_group.rvs(n, random_state=rng)
    return stats.unitary_group.rvs(n, random_state=rng)


def random_hermitian(n: int, rng: np.random.Generator, real: bool = True, hollow: bool = False) -> np.ndarray:
    a = rng.normal(size=(n, n))
    if not real:
        a = a + 1j * rng.normal(size=(n, n))
    h = (a + a.conj().T) / 2
    if hollow:
        np.fill_diagonal(h, 0)
    return h


def hollowing_unitary(f: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Unitary Q with Q* F Q hollow, for Hermitian F of trace zero.

    Each step takes the extreme eigenvectors v+, v- and mixes them at the angle
    tan^2(theta) = lambda+ / (-lambda-), which makes the quadratic form vanish,
    then recurses on the orthogonal complement.
    """
    f = np.asarray(f)
    n = f.shape[0]
    real = not np.iscomplexobj(f) or bool(np.all(np.abs(np.imag(f)) <= tol))
    dtype = float if real else complex
    f = (np.real(f) if real else f).astype(dtype)
    if n <= 1:
        return np.eye(n, dtype=dtype)
    w, v = linalg.eigh((f + f.conj().T) / 2)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w)) <= tol * scale or not (w[-1] > 0 > w[0]):
        return np.eye(n, dtype=dtype)
    theta = np.arctan(np.sqrt(w[-1] / -w[0]))
    x0 = np.cos(theta) * v[:, -1] + np.sin(theta) * v[:, 0]
    rest = linalg.null_space(x0.conj()[None, :])
    basis = np.column_stack([x0, rest]).astype(dtype)
    deflated = basis.conj().T @ f @ basis
    inner = hollowing_unitary(deflated[1:, 1:], tol)
    return basis @ block_diag(np.eye(1, dtype=dtype), inner)


def exact_matmul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    """Matrix product of object arrays without relying on numpy's object reductions."""
    out = np.empty((a.shape[0], b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc: Any = field.zero
            for k in range(a.shape[1]):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc
    return out

"""Labeled scalar matrices and the selectors that pick a reduced block."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Sequence

import numpy as np

from specred.algebra.fields import Field, GaussianRational
from specred.algebra.ratmat import RatMatrix
from specred.errors import DimensionMismatch, EmptySubset, FrameNotOrthonormal, UnknownLabel

HERMITIAN_EPS = 1e-9


def to_numeric(matrix: Any) -> np.ndarray:
    """Complex (or real) float view of a matrix that may hold exact entries."""
    array = np.asarray(matrix)
    if array.dtype == object:
        values = np.array([complex(x) for x in array.ravel()], dtype=complex).reshape(array.shape)
        if np.all(values.imag == 0):
            return values.real
        return values
    return array


def lift(matrix: Any, field: Field) -> np.ndarray:
    """Matrix of field elements (object dtype for exact, complex for float)."""
    array = np.asarray(matrix)
    if field.exact:
        out = np.empty(array.shape, dtype=object)
        for idx in np.ndindex(array.shape):
            out[idx] = field.coerce(array[idx])
        return out
    return to_numeric(array).astype(complex)


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    labels: tuple[Hashable, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("adjacency matrix must be square", shape=m.shape)
        if m.shape[0] != len(self.labels):
            raise DimensionMismatch("label count differs from matrix size", labels=len(self.labels), size=m.shape[0])
        if len(set(self.labels)) != len(self.labels):
            raise DimensionMismatch("labels must be distinct")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "matrix", m)

    @classmethod
    def of(cls, matrix: Any, labels: Sequence[Hashable] | None = None) -> LabeledMatrix:
        m = np.asarray(matrix)
        if labels is None:
            labels = range(1, m.shape[0] + 1)
        return cls(tuple(labels), m)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def exact_entries(self) -> bool:
        return self.matrix.dtype == object or np.issubdtype(self.matrix.dtype, np.integer)

    @cached_property
    def numeric(self) -> np.ndarray:
        return to_numeric(self.matrix)

    @cached_property
    def hermitian(self) -> bool:
        return self.is_hermitian(HERMITIAN_EPS)

    def is_hermitian(self, eps: float = HERMITIAN_EPS) -> bool:
        m = self.numeric
        return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= eps)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.numeric) or bool(np.all(np.abs(self.numeric.imag) <= HERMITIAN_EPS))

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigendecomposition of the Hermitian part, computed once."""
        from scipy import linalg

        m = self.numeric
        w, v = linalg.eigh((m + m.conj().T) / 2)
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    def index_of(self, labels: Sequence[Hashable]) -> list[int]:
        lookup = {label: i for i, label in enumerate(self.labels)}
        out = []
        for label in labels:
            if label not in lookup:
                raise UnknownLabel(f"unknown vertex label {label!r}", label=label)
            out.append(lookup[label])
        return out

    def lifted(self, field: Field) -> np.ndarray:
        return lift(self.matrix, field)

    def to_ratmatrix(self, field: Field) -> RatMatrix:
        return RatMatrix.from_scalars(self.lifted(field), field)

    def reorder(self, order: Sequence[int]) -> LabeledMatrix:
        order = list(order)
        return LabeledMatrix(tuple(self.labels[i] for i in order), self.matrix[np.ix_(order, order)])

    def relabel(self, labels: Sequence[Hashable]) -> LabeledMatrix:
        return LabeledMatrix(tuple(labels), self.matrix)

    def submatrix(self, labels: Sequence[Hashable]) -> LabeledMatrix:
        idx = self.index_of(labels)
        return LabeledMatrix(tuple(labels), self.matrix[np.ix_(idx, idx)])

    def neighbors(self, index: int) -> list[int]:
        row = self.numeric[index]
        return [j for j in range(self.n) if j != index and row[j] != 0]


@dataclass(frozen=True)
class Subset:
    labels: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise EmptySubset("subset must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise UnknownLabel("subset has repeated labels", labels=list(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def split(self, a: LabeledMatrix) -> tuple[list[int], list[int]]:
        keep = a.index_of(self.labels)
        chosen = set(keep)
        return keep, [i for i in range(a.n) if i not in chosen]

    def as_frame(self, a: LabeledMatrix) -> Frame:
        keep = a.index_of(self.labels)
        sigma = np.zeros((a.n, len(keep)), dtype=int)
        for col, row in enumerate(keep):
            sigma[row, col] = 1
        return Frame(sigma)


@dataclass(frozen=True, eq=False)
class Frame:
    sigma: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.sigma)
        if s.ndim != 2 or s.shape[1] == 0:
            raise EmptySubset("frame needs at least one column", shape=s.shape)
        object.__setattr__(self, "sigma", s)

    @property
    def columns(self) -> int:
        return self.sigma.shape[1]

    def validate(self, eps: float = HERMITIAN_EPS) -> None:
        s = self.sigma
        if s.dtype == object:
            gram = _exact_gram(s)
            ok = all(
                gram[i, j] == (1 if i == j else 0) for i in range(gram.shape[0]) for j in range(gram.shape[1])
            )
            deviation = 0.0 if ok else float("inf")
        else:
            deviation = float(np.max(np.abs(s.conj().T @ s - np.eye(s.shape[1]))))
            ok = deviation <= eps
        if not ok:
            raise FrameNotOrthonormal("frame columns are not orthonormal", deviation=deviation)

    def lifted(self, field: Field) -> np.ndarray:
        return lift(self.sigma, field)


def _exact_gram(s: np.ndarray) -> np.ndarray:
    k = s.shape[1]
    out = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            acc = GaussianRational(0)
            for r in range(s.shape[0]):
                acc = acc + GaussianRational.lift(s[r, i]).conjugate() * GaussianRational.lift(s[r, j])
            out[i, j] = acc
    return out


Selector = Subset | Frame

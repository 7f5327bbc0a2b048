"""Graph constructors, equitable partitions and the 16-vertex hypercube variants."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from functools import reduce as fold
from typing import Any, Callable, Hashable, Iterator, Sequence

import networkx as nx
import numpy as np
from scipy import linalg

from specred.algebra.ratmat import RatMatrix
from specred.config import SolverConfig, resolve
from specred.errors import DisconnectedGraph, DivisorMismatch, InvalidPattern, NotEquitable, SubsetViolation
from specred.spectral.labeled import Frame, LabeledMatrix, lift, to_numeric
from specred.spectral.reduction import reduce_frame
from specred.utils.sampling import ratmatrices_agree

logger = logging.getLogger("specred")


# Constructors


def path(n: int) -> LabeledMatrix:
    if n < 1:
        raise ValueError(f"path needs n >= 1 (got {n})")
    a = np.zeros((n, n), dtype=int)
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = 1
    return LabeledMatrix.of(a)


def cycle(n: int) -> LabeledMatrix:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3 (got {n})")
    a = np.zeros((n, n), dtype=int)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = 1
    return LabeledMatrix.of(a)


def complete(n: int) -> LabeledMatrix:
    return LabeledMatrix.of(np.ones((n, n), dtype=int) - np.eye(n, dtype=int))


def cartesian_product(
    g: LabeledMatrix, h: LabeledMatrix, join: Callable[[Hashable, Hashable], Hashable] | None = None
) -> LabeledMatrix:
    """A_G ⊗ I + I ⊗ A_H with labels (g, h), or join(g, h) when given."""
    join = join or (lambda x, y: (x, y))
    a = np.kron(g.matrix, np.eye(h.n, dtype=int)) + np.kron(np.eye(g.n, dtype=int), h.matrix)
    labels = [join(x, y) for x in g.labels for y in h.labels]
    return LabeledMatrix(tuple(labels), a)


def hypercube(n: int) -> LabeledMatrix:
    """Q_n as the product of n copies of the 2-path, labeled by n-bit strings."""
    if n < 1:
        raise ValueError(f"hypercube needs n >= 1 (got {n})")
    edge = path(2).relabel(("0", "1"))
    return fold(lambda acc, _: cartesian_product(acc, edge, join=lambda x, y: x + y), range(n - 1), edge)


def antipode(label: str) -> str:
    return "".join("1" if bit == "0" else "0" for bit in label)


def hypercube_divisor(n: int) -> np.ndarray:
    """Tridiagonal divisor of the distance partition: d[k, k+1] = n - k, d[k, k-1] = k."""
    d = np.zeros((n + 1, n + 1), dtype=int)
    for k in range(n + 1):
        if k < n:
            d[k, k + 1] = n - k
        if k > 0:
            d[k, k - 1] = k
    return d


def to_networkx(a: LabeledMatrix) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(a.n))
    m = a.numeric
    for i in range(a.n):
        for j in range(i + 1, a.n):
            if m[i, j] != 0 or m[j, i] != 0:
                graph.add_edge(i, j, weight=m[i, j])
    return graph


# Partitions


@dataclass(frozen=True)
class VertexPartition:
    classes: tuple[tuple[Hashable, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(tuple(c) for c in self.classes))
        if any(not c for c in self.classes):
            raise SubsetViolation("partition classes must be nonempty")
        flat = [x for c in self.classes for x in c]
        if len(flat) != len(set(flat)):
            raise SubsetViolation("partition classes must be disjoint")

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def validate(self, a: LabeledMatrix) -> None:
        a.index_of([x for c in self.classes for x in c])
        if sum(self.sizes) != a.n:
            raise SubsetViolation("partition must cover every vertex", covered=sum(self.sizes), size=a.n)

    def indicator(self, a: LabeledMatrix) -> np.ndarray:
        self.validate(a)
        p = np.zeros((a.n, len(self.classes)), dtype=int)
        for j, c in enumerate(self.classes):
            for i in a.index_of(c):
                p[i, j] = 1
        return p

    @classmethod
    def discrete(cls, a: LabeledMatrix) -> VertexPartition:
        return cls(tuple((x,) for x in a.labels))


@dataclass(frozen=True, eq=False)
class EquitableReport:
    equitable: bool
    divisor: np.ndarray | None = None
    witness: dict[str, Any] | None = None


def is_equitable(a: LabeledMatrix, partition: VertexPartition, eps: float = 1e-9) -> EquitableReport:
    """Constant row sums per block; returns the divisor or a witness."""
    p = partition.indicator(a)
    m = a.matrix
    exact = m.dtype == object or np.issubdtype(m.dtype, np.integer)
    if m.dtype == object:
        sums = np.empty((a.n, p.shape[1]), dtype=object)
        for i in range(a.n):
            for j in range(p.shape[1]):
                sums[i, j] = sum((m[i, r] for r in range(a.n) if p[r, j]), 0)
    else:
        sums = m @ p
    k = len(partition.classes)
    divisor = np.empty((k, k), dtype=sums.dtype)
    for ci, cls in enumerate(partition.classes):
        rows = a.index_of(cls)
        first = rows[0]
        for cj in range(k):
            for r in rows[1:]:
                same = sums[r, cj] == sums[first, cj] if exact else abs(sums[r, cj] - sums[first, cj]) <= eps
                if not same:
                    witness = {
                        "row_class": ci,
                        "column_class": cj,
                        "vertices": [a.labels[first], a.labels[r]],
                        "row_sums": [str(sums[first, cj]), str(sums[r, cj])],
                    }
                    return EquitableReport(False, None, witness)
            divisor[ci, cj] = sums[first, cj]
    return EquitableReport(True, divisor, None)


def divisor_matrix(a: LabeledMatrix, partition: VertexPartition) -> np.ndarray:
    report = is_equitable(a, partition)
    if not report.equitable:
        raise NotEquitable("partition is not equitable", witness=report.witness)
    return report.divisor


def normalized_indicator(partition: VertexPartition, a: LabeledMatrix) -> Frame:
    """Indicator matrix with columns scaled to unit length."""
    p = partition.indicator(a).astype(float)
    return Frame(p / np.sqrt(p.sum(axis=0)))


def symmetrized_divisor(a: LabeledMatrix, partition: VertexPartition) -> np.ndarray:
    """PᵀAP for the normalized indicator P."""
    divisor_matrix(a, partition)
    p = normalized_indicator(partition, a).sigma
    return p.T @ to_numeric(a.matrix) @ p


def divisor_is_reduction_check(
    a: LabeledMatrix, partition: VertexPartition, config: SolverConfig | None = None
) -> bool:
    """The generalized reduction over the normalized indicator is the symmetrized divisor.

    The exact backend avoids the square roots of the normalization by testing
    λI - (P₀ᵀ(λI - A)^-1 P₀)^-1 diag(|V_i|) = d with the plain indicator P₀.
    """
    config = resolve(config)
    d = divisor_matrix(a, partition)
    if config.exact:
        field = config.field()
        p0 = RatMatrix.from_scalars(partition.indicator(a), field)
        resolvent = (RatMatrix.lambda_identity(a.n, field) - a.to_ratmatrix(field)).inverse()
        inner = (p0.transpose() @ resolvent @ p0).inverse()
        sizes = RatMatrix.from_scalars(np.diag(partition.sizes), field)
        lhs = RatMatrix.lambda_identity(len(partition.classes), field) - inner @ sizes
        return lhs.is_constant and lhs.equals(RatMatrix.from_scalars(lift(d, field), field))
    r = reduce_frame(a, normalized_indicator(partition, a), config)
    expected = RatMatrix.from_scalars(symmetrized_divisor(a, partition), r.field)
    sampled = replace(config, sample_count=10)
    return ratmatrices_agree(r, expected, sampled)


def distance_partition(a: LabeledMatrix, vertex: Hashable) -> VertexPartition:
    """Classes by BFS distance from ``vertex``."""
    start = a.index_of([vertex])[0]
    lengths = nx.single_source_shortest_path_length(to_networkx(a), start)
    if len(lengths) != a.n:
        raise DisconnectedGraph("graph is not connected", reached=len(lengths), size=a.n)
    classes: dict[int, list[Hashable]] = {}
    for i in range(a.n):
        classes.setdefault(lengths[i], []).append(a.labels[i])
    return VertexPartition(tuple(tuple(classes[k]) for k in sorted(classes)))


def lift_divisor_eigenvectors(a: LabeledMatrix, partition: VertexPartition) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs (θ, x) of the divisor lift to eigenpairs (θ, P₀x) of A."""
    d = to_numeric(divisor_matrix(a, partition)).astype(complex)
    p0 = partition.indicator(a)
    values, vectors = linalg.eig(d)
    out = []
    for k in np.argsort(values.real, kind="stable"):
        v = p0 @ vectors[:, k]
        out.append((complex(values[k]), v / np.linalg.norm(v)))
    return out


# Hypercube variants

_PAIRS = list(itertools.combinations(range(4), 2))
CLASS_SLICES = ((0,), tuple(range(1, 5)), tuple(range(5, 11)), tuple(range(11, 15)), (15,))


@dataclass(frozen=True)
class BlockPattern:
    """4×6 0/1 pattern: three ones per row, two per column."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))
        m = np.array(self.rows)
        if m.shape != (4, 6) or not np.isin(m, (0, 1)).all():
            raise InvalidPattern("pattern must be a 4x6 0/1 matrix", shape=m.shape)
        if not (m.sum(axis=1) == 3).all() or not (m.sum(axis=0) == 2).all():
            raise InvalidPattern(
                "pattern needs three ones per row and two per column",
                row_sums=m.sum(axis=1).tolist(),
                column_sums=m.sum(axis=0).tolist(),
            )

    @classmethod
    def parse(cls, text: str) -> BlockPattern:
        return cls(tuple(tuple(int(ch) for ch in row) for row in text.split("/")))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=int)

    def __str__(self) -> str:
        return "/".join("".join(str(x) for x in r) for r in self.rows)


DISPLAYED_PATTERN = BlockPattern.parse("111000/000111/110100/001011")


def hypercube_patterns() -> tuple[BlockPattern, BlockPattern]:
    """The two blocks of Q4 itself, in the column order of the weight-2 strings."""
    upper = [[1 if i in pair else 0 for pair in _PAIRS] for i in range(4)]
    lower = [[0 if i in pair else 1 for pair in _PAIRS] for i in range(4)]
    return BlockPattern(tuple(map(tuple, upper))), BlockPattern(tuple(map(tuple, lower)))


def q4_variant(pattern: BlockPattern, lower: BlockPattern | None = None) -> LabeledMatrix:
    """16-vertex 4-regular graph with Q4's distance divisor.

    Vertices 1 | 2-5 | 6-11 | 12-15 | 16 form the distance classes from vertex 1;
    ``pattern`` joins the second and third classes, ``lower`` (default the same
    pattern) joins the fourth class to the third.
    """
    lower = lower or pattern
    a = np.zeros((16, 16), dtype=int)
    c0, c1, c2, c3, c4 = CLASS_SLICES
    for i in c1:
        a[c0[0], i] = a[i, c0[0]] = 1
    for i in c3:
        a[c4[0], i] = a[i, c4[0]] = 1
    up, down = pattern.array, lower.array
    for r, i in enumerate(c1):
        for c, j in enumerate(c2):
            a[i, j] = a[j, i] = up[r, c]
    for r, i in enumerate(c3):
        for c, j in enumerate(c2):
            a[i, j] = a[j, i] = down[r, c]
    graph = LabeledMatrix.of(a)
    validate_q4_variant(graph)
    return graph


def validate_q4_variant(graph: LabeledMatrix) -> None:
    partition = distance_partition(graph, graph.labels[0])
    report = is_equitable(graph, partition)
    expected = hypercube_divisor(4)
    if (
        not report.equitable
        or report.divisor.shape != expected.shape
        or not np.array_equal(report.divisor.astype(int), expected)
    ):
        raise DivisorMismatch(
            "distance divisor differs from the hypercube's",
            sizes=partition.sizes,
            witness=report.witness,
        )


@dataclass(frozen=True, eq=False)
class Q4Variant:
    upper: BlockPattern
    lower: BlockPattern
    graph: LabeledMatrix


def all_patterns() -> Iterator[BlockPattern]:
    """Valid patterns in lexicographic order of their column pairs."""
    for columns in itertools.product(_PAIRS, repeat=6):
        rows = [[1 if i in pair else 0 for pair in columns] for i in range(4)]
        if all(sum(r) == 3 for r in rows):
            yield BlockPattern(tuple(map(tuple, rows)))


def _invariant(graph: LabeledMatrix) -> tuple:
    m = graph.numeric.astype(float)
    m3 = m @ m @ m
    m4 = m3 @ m
    spectrum = np.round(linalg.eigvalsh(m), 8) + 0.0
    return (
        tuple(sorted(np.round(np.diag(m3)).astype(int))),
        tuple(sorted(np.round(np.diag(m4)).astype(int))),
        tuple(spectrum),
    )


def enumerate_q4_variants(limit: int = 4, upper: BlockPattern | None = None) -> list[Q4Variant]:
    """Pairwise non-isomorphic variants, ``upper`` fixed and ``lower`` in lexicographic order."""
    upper = upper or DISPLAYED_PATTERN
    found: list[Q4Variant] = []
    buckets: dict[tuple, list[nx.Graph]] = {}
    for lower in all_patterns():
        if len(found) >= limit:
            break
        try:
            graph = q4_variant(upper, lower)
        except DivisorMismatch:
            continue
        key = _invariant(graph)
        candidate = to_networkx(graph)
        if any(nx.is_isomorphic(candidate, other) for other in buckets.get(key, [])):
            continue
        buckets.setdefault(key, []).append(candidate)
        found.append(Q4Variant(upper, lower, graph))
        logger.debug(f"Variant {len(found)}: lower pattern {lower}")
    logger.info(f"Enumerated {len(found)} non-isomorphic hypercube variants")
    return found

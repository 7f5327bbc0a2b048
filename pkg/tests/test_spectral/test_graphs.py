"""Tests for specred.spectral.graphs."""
import itertools

import networkx as nx
import numpy as np
import pytest

from specred.errors import DisconnectedGraph, DivisorMismatch, InvalidPattern, NotEquitable, SubsetViolation
from specred.spectral.graphs import (
    DISPLAYED_PATTERN,
    BlockPattern,
    VertexPartition,
    all_patterns,
    antipode,
    cartesian_product,
    complete,
    cycle,
    distance_partition,
    divisor_is_reduction_check,
    divisor_matrix,
    enumerate_q4_variants,
    hypercube,
    hypercube_divisor,
    hypercube_patterns,
    is_equitable,
    lift_divisor_eigenvectors,
    normalized_indicator,
    path,
    q4_variant,
    symmetrized_divisor,
    to_networkx,
    validate_q4_variant,
)
from specred.spectral.labeled import LabeledMatrix
from specred.spectral.reduction import reduce_frame

KITE_PARTITION = VertexPartition(((1,), (2, 3), (4,)))


class TestConstructors:
    def test_path(self):
        assert path(3).matrix.tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]

    def test_cycle_too_short(self):
        with pytest.raises(ValueError):
            cycle(2)

    def test_complete(self):
        assert complete(4).matrix.sum() == 12

    def test_cartesian_product_of_edges_is_square(self, c4):
        square = cartesian_product(path(2), path(2))
        assert nx.is_isomorphic(to_networkx(square), to_networkx(c4))
        assert square.labels[0] == (1, 1)

    def test_hypercube(self, q4):
        assert q4.n == 16
        assert q4.labels[0] == "0000" and q4.labels[-1] == "1111"
        assert np.all(q4.matrix.sum(axis=1) == 4)
        assert nx.is_isomorphic(to_networkx(q4), nx.hypercube_graph(4))

    def test_hypercube_edges_flip_one_bit(self, q4):
        for i, j in zip(*np.nonzero(q4.matrix)):
            x, y = q4.labels[i], q4.labels[j]
            assert sum(a != b for a, b in zip(x, y)) == 1

    def test_antipode(self):
        assert antipode("0101") == "1010"

    def test_hypercube_divisor(self):
        assert hypercube_divisor(2).tolist() == [[0, 2, 0], [1, 0, 1], [0, 2, 0]]


class TestPartitions:
    def test_overlapping_classes_raise(self):
        with pytest.raises(SubsetViolation):
            VertexPartition(((1, 2), (2, 3)))

    def test_must_cover(self, p3):
        with pytest.raises(SubsetViolation):
            VertexPartition(((1,), (2,))).validate(p3)

    def test_discrete(self, p3):
        assert VertexPartition.discrete(p3).sizes == [1, 1, 1]

    def test_kite_divisor(self, kite):
        report = is_equitable(kite, KITE_PARTITION)
        assert report.equitable
        assert report.divisor.tolist() == [[0, 2, 0], [1, 1, 1], [0, 2, 0]]

    def test_not_equitable_witness(self, p4):
        report = is_equitable(p4, VertexPartition(((1, 2), (3, 4))))
        assert not report.equitable
        assert report.witness["vertices"] == [1, 2]
        assert report.witness["column_class"] == 1

    def test_divisor_matrix_raises(self, p4):
        with pytest.raises(NotEquitable):
            divisor_matrix(p4, VertexPartition(((1, 2), (3, 4))))

    def test_float_weights(self):
        a = LabeledMatrix.of(np.array([[0, 0.5, 0.5], [0.5, 0, 0], [0.5, 0, 0]]))
        report = is_equitable(a, VertexPartition(((1,), (2, 3))))
        assert report.equitable
        assert np.allclose(report.divisor, [[0, 1.0], [0.5, 0]])

    def test_normalized_indicator_orthonormal(self, kite):
        frame = normalized_indicator(KITE_PARTITION, kite)
        frame.validate()
        assert np.allclose(frame.sigma[:, 1], [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0])

    def test_symmetrized_divisor(self, kite):
        r2 = np.sqrt(2)
        expected = [[0, r2, 0], [r2, 1, r2], [0, r2, 0]]
        assert np.allclose(symmetrized_divisor(kite, KITE_PARTITION), expected)

    def test_divisor_is_reduction_exact(self, kite, exact_config):
        assert divisor_is_reduction_check(kite, KITE_PARTITION, exact_config)

    @pytest.mark.slow
    def test_divisor_is_reduction_hypercube(self, q4, exact_config):
        assert divisor_is_reduction_check(q4, distance_partition(q4, "0000"), exact_config)

    def test_divisor_is_reduction_float(self, kite, float_config):
        assert divisor_is_reduction_check(kite, KITE_PARTITION, float_config)

    def test_divisor_is_reduction_hypercube_float(self, q4, float_config):
        assert divisor_is_reduction_check(q4, distance_partition(q4, "0000"), float_config)

    def test_hypercube_frame_reduction_is_constant(self, q4, float_config):
        partition = distance_partition(q4, "0000")
        r = reduce_frame(q4, normalized_indicator(partition, q4), float_config)
        assert r.is_constant
        assert np.allclose(r.evaluate_complex(0.3j), symmetrized_divisor(q4, partition), atol=1e-9)


class TestDistancePartition:
    def test_hypercube_sizes(self, q4):
        partition = distance_partition(q4, "0000")
        assert partition.sizes == [1, 4, 6, 4, 1]
        assert partition.classes[-1] == ("1111",)

    def test_hypercube_divisor_is_tridiagonal(self, q4):
        d = divisor_matrix(q4, distance_partition(q4, "0000"))
        assert d.tolist() == hypercube_divisor(4).tolist()

    def test_disconnected_raises(self):
        a = LabeledMatrix.of(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]))
        with pytest.raises(DisconnectedGraph):
            distance_partition(a, 1)

    def test_lifted_eigenvectors(self, q4):
        partition = distance_partition(q4, "0000")
        pairs = lift_divisor_eigenvectors(q4, partition)
        assert np.allclose([theta.real for theta, _ in pairs], [-4, -2, 0, 2, 4])
        for theta, v in pairs:
            assert np.allclose(q4.numeric @ v, theta * v)


class TestBlockPattern:
    def test_displayed_pattern(self):
        assert str(DISPLAYED_PATTERN) == "111000/000111/110100/001011"
        assert DISPLAYED_PATTERN.array.shape == (4, 6)

    def test_bad_shape(self):
        with pytest.raises(InvalidPattern):
            BlockPattern.parse("111/000")

    def test_bad_sums(self):
        with pytest.raises(InvalidPattern):
            BlockPattern.parse("111100/000011/110000/001011")

    def test_first_patterns_valid_and_distinct(self):
        patterns = list(itertools.islice(all_patterns(), 40))
        assert len({str(p) for p in patterns}) == len(patterns)
        assert all((p.array.sum(axis=0) == 2).all() for p in patterns)


class TestQ4Variants:
    def test_hypercube_patterns_rebuild_q4(self, q4):
        graph = q4_variant(*hypercube_patterns())
        assert nx.is_isomorphic(to_networkx(graph), to_networkx(q4))

    def test_variant_shares_divisor(self):
        graph = q4_variant(DISPLAYED_PATTERN)
        partition = distance_partition(graph, 1)
        assert partition.sizes == [1, 4, 6, 4, 1]
        assert divisor_matrix(graph, partition).tolist() == hypercube_divisor(4).tolist()
        assert np.all(graph.matrix.sum(axis=1) == 4)
        assert np.all(np.diag(graph.matrix) == 0)

    def test_validate_rejects_other_graphs(self):
        with pytest.raises(DivisorMismatch):
            validate_q4_variant(cycle(16))

    @pytest.mark.slow
    def test_enumerate_non_isomorphic(self):
        variants = enumerate_q4_variants(limit=3)
        assert len(variants) == 3
        graphs = [to_networkx(v.graph) for v in variants]
        for i in range(len(graphs)):
            for j in range(i + 1, len(graphs)):
                assert not nx.is_isomorphic(graphs[i], graphs[j])
        assert all(v.upper == DISPLAYED_PATTERN for v in variants)

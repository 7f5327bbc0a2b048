"""Tests for specred.spectral.walks."""
import numpy as np
import pytest

from specred.errors import BruteForceTooLarge
from specred.spectral.labeled import LabeledMatrix
from specred.spectral.reduction import reduce
from specred.spectral.walks import (
    invert_series,
    nonreturning_from_reduction,
    power_restriction,
    walk_identity_check,
    walk_series_brute,
    walk_series_from_reduction,
    walk_series_nonreturning,
    walk_series_returning,
)


def corner(series):
    return [c[0, 0] for c in series.coefficients]


class TestReturningSeries:
    def test_path_end(self, p3, exact_config):
        series = walk_series_returning(p3, [1], 4, exact_config)
        assert corner(series) == [1, 0, 1, 0, 2]
        assert series.length == 4
        assert series.kind == "returning"

    def test_matches_matrix_powers(self, kite, exact_config):
        series = walk_series_returning(kite, [1, 4], 5, exact_config)
        power = np.linalg.matrix_power(kite.matrix, 5)
        assert series[5].astype(int).tolist() == power[np.ix_([0, 3], [0, 3])].tolist()

    def test_negative_length_raises(self, p3):
        with pytest.raises(ValueError):
            walk_series_returning(p3, [1], -1)


class TestNonreturningSeries:
    def test_path_end(self, p3, exact_config):
        series = walk_series_nonreturning(p3, [1], 4, exact_config)
        assert corner(series) == [0, 0, 1, 0, 1]
        assert series.kind == "nonreturning"

    def test_first_coefficient_is_principal_block(self, kite, exact_config):
        series = walk_series_nonreturning(kite, [2, 3], 3, exact_config)
        assert series[1].tolist() == [[0, 1], [1, 0]]

    def test_matches_brute_force(self, kite, exact_config):
        series = walk_series_nonreturning(kite, [1, 4], 6, exact_config)
        brute = walk_series_brute(kite, [1, 4], 6, kind="nonreturning")
        assert series.matches(brute)

    def test_float_backend(self, c4, float_config):
        series = walk_series_nonreturning(c4, [1, 3], 5, float_config)
        brute = walk_series_brute(c4, [1, 3], 5, kind="nonreturning")
        assert series.matches(brute, tol=1e-8)

    def test_zero_length_raises(self, p3):
        with pytest.raises(ValueError):
            walk_series_nonreturning(p3, [1], 0)


class TestIdentity:
    def test_cycle(self, c4, exact_config):
        assert walk_identity_check(c4, [1, 3], 5, exact_config)

    def test_kite_float(self, kite, float_config):
        assert walk_identity_check(kite, [2], 6, float_config)

    def test_zero_length_is_trivial(self, p3, exact_config):
        assert walk_identity_check(p3, [1], 0, exact_config)

    def test_inverting_nonreturning_gives_returning(self, p4, exact_config):
        star = walk_series_nonreturning(p4, [1, 4], 6, exact_config)
        assert invert_series(star).matches(walk_series_returning(p4, [1, 4], 6, exact_config))


class TestFromReduction:
    def test_power_restriction(self, p4, exact_config):
        expected = np.linalg.matrix_power(p4.matrix, 3)[np.ix_([0, 3], [0, 3])]
        assert power_restriction(p4, [1, 4], 3, exact_config).tolist() == expected.tolist()

    def test_series_from_reduction(self, c4, exact_config):
        r = reduce(c4, [1], exact_config)
        series = walk_series_from_reduction(r, 4, (1,))
        assert corner(series) == [1, 0, 2, 0, 8]

    def test_nonreturning_labels_default(self, k2, exact_config):
        series = nonreturning_from_reduction(reduce(k2, [1], exact_config), 2)
        assert series.subset == (1,)
        assert corner(series) == [0, 0, 1]


class TestBruteForce:
    def test_returning_matches_powers(self, c4, exact_config):
        brute = walk_series_brute(c4, [1, 2], 4)
        assert brute.matches(walk_series_returning(c4, [1, 2], 4, exact_config))

    def test_refuses_large_enumeration(self, q4):
        with pytest.raises(BruteForceTooLarge):
            walk_series_brute(q4, ["0000"], 10, max_states=100)

    def test_rejects_fractional_weights(self):
        a = LabeledMatrix.of(np.array([[0, 0.5], [0.5, 0]]))
        with pytest.raises(ValueError):
            walk_series_brute(a, [1], 2)


def random_graph(rng, n, p=0.4):
    upper = np.triu((rng.uniform(size=(n, n)) < p).astype(int), 1)
    return LabeledMatrix.of(upper + upper.T)


class TestRandomGraphs:
    def test_identity_on_both_backends(self, rng, exact_config, float_config):
        for _ in range(30):
            a = random_graph(rng, 7)
            subset = [int(i) + 1 for i in np.sort(rng.choice(7, size=int(rng.integers(1, 4)), replace=False))]
            assert walk_identity_check(a, subset, 6, exact_config)
            assert walk_identity_check(a, subset, 6, float_config)

    def test_nonreturning_counts_match_traversal(self, rng, exact_config):
        for _ in range(30):
            a = random_graph(rng, 6)
            subset = [int(i) + 1 for i in np.sort(rng.choice(6, size=2, replace=False))]
            series = walk_series_nonreturning(a, subset, 5, exact_config)
            assert series.matches(walk_series_brute(a, subset, 5, kind="nonreturning"))

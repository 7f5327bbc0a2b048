"""Tests for specred.spectral.unfolding."""
import numpy as np
import pytest

from specred.algebra.fields import ExactField, GaussianRational
from specred.algebra.ratfun import RationalFunction
from specred.algebra.ratmat import RatMatrix
from specred.errors import (
    ConstantPartNotHollow,
    DimensionMismatch,
    NotHermitian,
    NotHermitianFeasible,
    NotProper,
    NotRealSymmetric,
    RoundTripFailure,
)
from specred.spectral.labeled import LabeledMatrix
from specred.spectral.reduction import reduce
from specred.spectral.unfolding import (
    Unfolding,
    assemble,
    band_envelope_ok,
    check_hermitian_feasibility,
    compress_band,
    conjugate_tail,
    hollow,
    sign_cleanup,
    unfold_basic,
    unfold_general,
    unfold_hermitian,
    verify_round_trip,
)
from specred.utils.linalg import random_hermitian

EXACT = ExactField()


def pole(coef, at, order=1):
    return RationalFunction.simple_pole(coef, at, order, EXACT)


def scalar(f):
    return RatMatrix.from_rows([[f]], EXACT)


@pytest.fixture
def three_poles():
    """1/(λ-1) + 1/(λ+1) + 1/(λ-2) on a single vertex."""
    return scalar(pole(1, 1) + pole(1, -1) + pole(1, 2))


class TestUnfoldBasic:
    def test_simple_pole(self, exact_config):
        u = unfold_basic(1, 2, 1, exact_config)
        assert u.size == 2
        assert u.matrix.matrix.tolist() == [[0, 1], [1, 2]]
        assert u.source[0, 0] == pole(1, 2)

    def test_double_pole_is_nilpotent_chain(self, exact_config):
        u = unfold_basic(1, 0, 2, exact_config)
        assert u.matrix.matrix.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
        assert reduce(u.matrix, list(u.subset), exact_config)[0, 0] == pole(1, 0, 2)

    def test_tail_uses_rank(self, exact_config):
        u = unfold_basic([[1, 1], [1, 1]], 1, 1, exact_config)
        assert u.tail_size == 1
        assert u.subset == (1, 2)

    def test_float_backend(self, float_config):
        u = unfold_basic([[1, 1], [1, 1]], -1, 1, float_config)
        assert u.size == 3
        assert not u.exact

    def test_order_checked(self, exact_config):
        with pytest.raises(ValueError):
            unfold_basic(1, 0, 0, exact_config)

    def test_non_square_raises(self, exact_config):
        with pytest.raises(DimensionMismatch):
            unfold_basic([[1, 2]], 0, 1, exact_config)


class TestAssemble:
    def test_sums_sources(self, exact_config):
        parts = [unfold_basic(1, 1, 1, exact_config), unfold_basic(1, -1, 1, exact_config)]
        u = assemble(parts, config=exact_config)
        assert u.size == 3
        assert u.source[0, 0] == pole(1, 1) + pole(1, -1)

    def test_constant_block(self, exact_config):
        u = assemble([unfold_basic(1, 1, 1, exact_config)], [[5]], exact_config)
        assert u.matrix.matrix[0, 0] == 5

    def test_empty_raises(self):
        with pytest.raises(DimensionMismatch):
            assemble([])

    def test_block_sizes_must_match(self, exact_config):
        with pytest.raises(DimensionMismatch):
            assemble([unfold_basic(1, 1, 1, exact_config), unfold_basic(np.eye(2, dtype=int), 1, 1, exact_config)])


class TestUnfoldGeneral:
    def test_diagonal_poles(self, exact_config):
        r = RatMatrix.from_rows([[pole(1, 1), 0], [0, pole(1, -1)]], EXACT)
        u = unfold_general(r, exact_config)
        assert u.size == 4
        assert reduce(u.matrix, list(u.subset), exact_config).equals(r)

    def test_constant_part_on_leading_block(self, exact_config):
        u = unfold_general(scalar(pole(1, 0, 2) + 3), exact_config)
        assert u.matrix.matrix[0, 0] == 3
        assert u.size == 3

    def test_constant_matrix_has_no_tail(self, exact_config):
        u = unfold_general(RatMatrix.from_scalars(np.array([[1, 2], [2, 1]]), EXACT), exact_config)
        assert u.tail_size == 0

    def test_improper_raises(self, exact_config):
        with pytest.raises(NotProper):
            unfold_general(RatMatrix.lambda_identity(1, EXACT), exact_config)


class TestHermitianFeasibility:
    def test_feasible(self, exact_config):
        r = RatMatrix.from_scalars(np.array([[1, 1], [1, 1]]), EXACT).scale(pole(1, 1))
        assert check_hermitian_feasibility(r, exact_config).feasible

    def test_complex_pole(self, exact_config):
        report = check_hermitian_feasibility(scalar(pole(1, GaussianRational(0, 1))), exact_config)
        assert not report.poles_real
        assert not report.feasible

    def test_negative_residue(self, exact_config):
        report = check_hermitian_feasibility(scalar(pole(-1, 1)), exact_config)
        assert report.residues_psd[0][1] == pytest.approx(-1.0)
        assert not report.feasible

    def test_double_pole(self, exact_config):
        report = check_hermitian_feasibility(scalar(pole(1, 0, 2)), exact_config)
        assert not report.poles_simple

    def test_improper(self, exact_config):
        report = check_hermitian_feasibility(RatMatrix.lambda_identity(1, EXACT), exact_config)
        assert not report.proper
        assert report.to_dict()["feasible"] is False

    def test_reductions_of_hermitian_matrices_are_feasible(self, rng, float_config):
        for trial in range(100):
            a = LabeledMatrix.of(random_hermitian(6, rng, real=bool(trial % 2)))
            subset = [int(i) + 1 for i in np.sort(rng.choice(6, size=2, replace=False))]
            assert check_hermitian_feasibility(reduce(a, subset, float_config), float_config).feasible


class TestUnfoldHermitian:
    def test_rank_one_residue(self, exact_config):
        r = RatMatrix.from_scalars(np.array([[1, 1], [1, 1]]), EXACT).scale(pole(1, 1))
        u = unfold_hermitian(r, exact_config)
        assert u.hermitian
        assert np.allclose(u.matrix.numeric, [[0, 0, 1], [0, 0, 1], [1, 1, 1]])

    def test_infeasible_raises(self, exact_config):
        with pytest.raises(NotHermitianFeasible):
            unfold_hermitian(scalar(pole(-1, 1)), exact_config)


class TestHollow:
    def test_appends_vertex_and_zeroes_diagonal(self, exact_config):
        r = RatMatrix.from_scalars(np.array([[1, 1], [1, 1]]), EXACT).scale(pole(1, 1))
        u = hollow(unfold_hermitian(r, exact_config), exact_config)
        assert u.size == 4
        assert u.hollow
        assert np.allclose(np.diag(u.matrix.numeric), 0)
        assert u.provenance[-1]["params"]["appended"] == 1

    def test_nonzero_constant_diagonal_raises(self, exact_config):
        u = unfold_hermitian(scalar(pole(1, 1) + 2), exact_config)
        with pytest.raises(ConstantPartNotHollow):
            hollow(u, exact_config)

    def test_needs_hermitian(self, exact_config):
        with pytest.raises(NotHermitian):
            hollow(unfold_basic(1, 0, 2, exact_config), exact_config)


class TestCompressBand:
    def test_star_becomes_path(self, three_poles, exact_config):
        u = compress_band(unfold_hermitian(three_poles, exact_config), exact_config)
        assert u.blocks == (1, 1, 1, 1)
        assert band_envelope_ok(u)

    def test_envelope_needs_blocks(self, exact_config):
        assert not band_envelope_ok(unfold_basic(1, 2, 1, exact_config))

    def test_hollow_input_stays_hollow(self, three_poles, exact_config):
        u = compress_band(hollow(unfold_hermitian(three_poles, exact_config), exact_config), exact_config)
        assert u.hollow
        assert np.allclose(np.diag(u.matrix.numeric), 0, atol=1e-10)
        assert u.provenance[-1]["params"]["appended"] >= 1
        assert band_envelope_ok(u, tol=1e-10)

    def test_random_hollow_matrices(self, rng, float_config):
        for _ in range(20):
            a = LabeledMatrix.of(random_hermitian(10, rng, hollow=True))
            r = reduce(a, [1, 2], float_config)
            u = compress_band(hollow(unfold_hermitian(r, float_config), float_config), float_config)
            assert u.hollow
            assert np.allclose(np.diag(u.matrix.numeric), 0, atol=1e-9)
            assert band_envelope_ok(u, tol=1e-9)


class TestSignCleanup:
    def test_path_becomes_nonnegative(self, three_poles, exact_config):
        banded = compress_band(unfold_hermitian(three_poles, exact_config), exact_config)
        u = sign_cleanup(banded, exact_config)
        m = u.matrix.numeric
        off = ~np.eye(m.shape[0], dtype=bool)
        assert np.all(m[off] >= -1e-12)
        assert u.provenance[-1]["params"]["negative_entries"] == 0

    def test_complex_raises(self, exact_config):
        k = RatMatrix.from_scalars(np.array([[1, 1j], [-1j, 1]]), EXACT).scale(pole(1, 1))
        with pytest.raises(NotRealSymmetric):
            sign_cleanup(unfold_hermitian(k, exact_config), exact_config)


class TestConjugateTail:
    def test_scales_coupling(self, exact_config):
        u = conjugate_tail(unfold_basic(1, 2, 1, exact_config), [[2]], exact_config)
        assert u.matrix.matrix[1, 0] == 2
        assert u.matrix.matrix[0, 1] * 2 == 1
        assert u.provenance[-1]["op"] == "conjugate_tail"
        assert not u.hermitian


class TestRoundTrip:
    def test_passes_through(self, exact_config):
        u = unfold_basic(1, 2, 1, exact_config)
        assert verify_round_trip(u, exact_config) is u

    def test_mismatch_raises(self, exact_config):
        u = Unfolding(LabeledMatrix.of(np.array([[0, 1], [1, 0]])), 1, scalar(pole(1, 2)))
        with pytest.raises(RoundTripFailure):
            verify_round_trip(u, exact_config)

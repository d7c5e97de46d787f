"""Tests for the dense positive-matrix kernels."""

import math

import numpy as np
import pytest

from conftest import DET_FACTOR, LAMBDA_1, random_positive_matrix
from lyapcycle import (
    IndexOutOfRangeError,
    NoConvergenceError,
    NonDominantRootError,
    NonPositiveEntryError,
    SingularMatrixError,
    char_poly,
    cycle_product,
    det_factor_charpoly,
    gauss_determinant,
    perron,
    scaled_cycle_product,
    spectral_data,
    validate_positive,
)
from lyapcycle.linalg import poly_derivative, poly_eval

M = np.array([[2.0, 1.0], [1.0, 1.0]])
M2 = np.array([[1.0, 1.0], [1.0, 2.0]])


class TestValidatePositive:
    def test_accepts_positive_invertible(self):
        validate_positive([[2, 1], [1, 1]])

    def test_rejects_zero_entry(self):
        with pytest.raises(NonPositiveEntryError) as info:
            validate_positive([[1, 0], [0, 1]])
        assert (info.value.row, info.value.col) == (0, 1)

    def test_rejects_singular(self):
        with pytest.raises(SingularMatrixError):
            validate_positive([[1, 1], [1, 1]])

    def test_rejects_nan(self):
        with pytest.raises(NonPositiveEntryError):
            validate_positive([[1, float("nan")], [1, 1]])


class TestCycleProduct:
    def test_two_factor_product_reverses_word(self):
        # word (0, 1): the later symbol multiplies from the left
        result = cycle_product((0, 1), [M, M2])
        assert np.array_equal(result, np.array([[3.0, 2.0], [4.0, 3.0]]))

    def test_single_factor(self):
        assert np.array_equal(cycle_product((0,), [M]), M)

    def test_repeated_symbol(self):
        assert np.array_equal(
            cycle_product((0, 0), [M]), np.array([[5.0, 3.0], [3.0, 2.0]])
        )

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            cycle_product((0, 2), [M, M2])

    def test_empty_word(self):
        with pytest.raises(ValueError):
            cycle_product((), [M])

    def test_scaled_product_matches_plain(self):
        word = (0, 1, 1, 0, 1)
        plain = cycle_product(word, [M, M2])
        scaled, log_scale = scaled_cycle_product(word, [M, M2], renorm_every=2)
        assert np.allclose(scaled * np.exp(log_scale), plain, rtol=1e-12)

    def test_scaled_product_survives_overflowing_length(self):
        # M**800 has entries ~ exp(770); the plain product would overflow.
        n = 800
        scaled, log_scale = scaled_cycle_product((0,) * n, [M])
        assert np.all(np.isfinite(scaled))
        lam, _ = perron(scaled)
        log_top = float(np.log(lam) + log_scale)
        assert math.isclose(log_top, n * math.log(LAMBDA_1), rel_tol=1e-12)


class TestPerron:
    def test_golden_matrix(self):
        lam, s = perron(M)
        assert math.isclose(lam, LAMBDA_1, rel_tol=1e-12)
        assert s[0] == 1.0
        assert math.isclose(s[1], (math.sqrt(5) - 1) / 2, rel_tol=1e-12)

    def test_symmetric_row_sums(self):
        lam, s = perron([[2.0, 1.0], [1.0, 2.0]])
        assert math.isclose(lam, 3.0, rel_tol=1e-13)
        assert np.allclose(s, [1.0, 1.0], rtol=1e-12)

    def test_silver_matrix(self):
        lam, _ = perron([[3.0, 2.0], [4.0, 3.0]])
        assert math.isclose(lam, 3 + 2 * math.sqrt(2), rel_tol=1e-12)

    def test_one_by_one(self):
        lam, s = perron([[7.0]])
        assert lam == 7.0
        assert s.tolist() == [1.0]

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_residual_bound(self, d):
        rng = np.random.default_rng(100 + d)
        tol = 1e-13
        for _ in range(20):
            a = random_positive_matrix(rng, d)
            lam, s = perron(a, tol=tol)
            residual = np.abs(a @ s - lam * s).max()
            assert residual <= 10 * tol * np.abs(a).sum(axis=1).max()

    def test_no_convergence_signals(self):
        with pytest.raises(NoConvergenceError):
            perron(M, tol=1e-13, max_iter=1)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            perron(M, tol=0.0)


class TestCharPoly:
    def test_golden_matrix(self):
        # chi(x) = x**2 - 3x + 1, ascending coefficients
        assert np.allclose(char_poly(M), [1.0, -3.0, 1.0], atol=1e-14)

    def test_symmetric_matrix(self):
        assert np.allclose(char_poly([[2.0, 1.0], [1.0, 2.0]]), [3.0, -4.0, 1.0])

    def test_scalar(self):
        assert np.allclose(char_poly([[5.0]]), [-5.0, 1.0])

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_matches_numpy_spectrum(self, d):
        rng = np.random.default_rng(200 + d)
        for _ in range(10):
            a = random_positive_matrix(rng, d)
            mine = char_poly(a)
            reference = np.poly(a)[::-1]  # numpy returns descending order
            assert np.allclose(mine, reference, rtol=1e-9, atol=1e-9)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_vanishes_at_perron_root(self, d):
        rng = np.random.default_rng(300 + d)
        for _ in range(10):
            a = random_positive_matrix(rng, d)
            lam, _ = perron(a)
            assert abs(poly_eval(char_poly(a), lam)) <= 1e-8 * lam**d


class TestDetFactor:
    def test_golden_matrix(self):
        lam, _ = perron(M)
        value = det_factor_charpoly(M, lam)
        assert math.isclose(float(value), DET_FACTOR, rel_tol=1e-12)

    def test_scalar_empty_product(self):
        assert det_factor_charpoly([[5.0]], 5.0) == 1.0

    def test_silver_matrix(self):
        lam, _ = perron([[3.0, 2.0], [4.0, 3.0]])
        expected = 1 - (3 - 2 * math.sqrt(2)) / (3 + 2 * math.sqrt(2))
        assert math.isclose(float(det_factor_charpoly([[3, 2], [4, 3]], lam)), expected,
                            rel_tol=1e-12)

    def test_non_dominant_root_rejected(self):
        # passing the subdominant eigenvalue makes chi'(lam) negative
        lam2 = (3 - math.sqrt(5)) / 2
        with pytest.raises(NonDominantRootError):
            det_factor_charpoly(M, lam2)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_positive_and_bounded_for_random_draws(self, d):
        # positivity is guaranteed by Perron dominance; subdominant
        # eigenvalues with negative real part push individual factors
        # above 1, so the provable upper bound is 2**(d-1), not 1
        rng = np.random.default_rng(400 + d)
        for _ in range(20):
            a = random_positive_matrix(rng, d)
            lam, _ = perron(a)
            value = float(det_factor_charpoly(a, lam))
            assert 0.0 < value < 2.0 ** (d - 1) + 1e-12

    def test_in_unit_interval_for_positive_spectra(self):
        # cycle products of the standard pair are totally positive: all
        # eigenvalues real positive, so every factor lies in (0, 1)
        rng = np.random.default_rng(41)
        mats = [M, M2]
        for _ in range(30):
            n = int(rng.integers(1, 10))
            word = tuple(int(i) for i in rng.integers(0, 2, n))
            prod = cycle_product(word, mats)
            lam, _ = perron(prod)
            assert 0.0 < float(det_factor_charpoly(prod, lam)) <= 1.0 + 1e-12


class TestRotationSimilarity:
    @pytest.mark.parametrize("word", [(0, 1), (0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0, 0)])
    def test_rotations_share_char_poly(self, word):
        mats = [M, M2]
        base = char_poly(cycle_product(word, mats))
        for shift in range(1, len(word)):
            rotated = word[shift:] + word[:shift]
            other = char_poly(cycle_product(rotated, mats))
            assert np.allclose(base, other, rtol=1e-9, atol=1e-12)


class TestGaussDeterminant:
    def test_matches_numpy(self):
        rng = np.random.default_rng(5)
        for d in range(1, 7):
            a = rng.normal(size=(d, d))
            assert math.isclose(
                float(gauss_determinant(a)), float(np.linalg.det(a)), rel_tol=1e-10
            )

    def test_empty_matrix_gives_one(self):
        assert gauss_determinant(np.zeros((0, 0))) == 1.0

    def test_exact_zero(self):
        assert gauss_determinant([[1.0, 1.0], [1.0, 1.0]]) == 0.0


class TestSpectralData:
    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_invariants(self, d):
        rng = np.random.default_rng(600 + d)
        a = random_positive_matrix(rng, d)
        data = spectral_data(a)
        assert data.perron_direction[0] == 1.0
        assert np.all(data.perron_direction > 0)
        assert np.allclose(
            a @ data.perron_direction,
            data.top_eigenvalue * data.perron_direction,
            rtol=1e-10,
        )
        assert abs(poly_eval(data.char_coeffs, data.top_eigenvalue)) <= (
            1e-8 * data.top_eigenvalue**d
        )
        assert 0 < data.det_factor < 2.0 ** (d - 1) + 1e-12


def test_poly_derivative():
    # d/dx (1 - 3x + x**2) = -3 + 2x
    assert np.allclose(poly_derivative([1.0, -3.0, 1.0]), [-3.0, 2.0])
    assert poly_eval(poly_derivative([1.0, -3.0, 1.0]), 2.0) == 1.0

"""数值核心测试"""
import math

import numpy as np
import pytest

from core.errors import DimensionError, NumericError
from core.numerics import (
    FALLBACK_BANDWIDTH, MIN_BANDWIDTH_STEPS, abs_cosine, abs_cosine_matrix, finite_diff_gradient, global_softmax,
    global_softmax_backward, kde_density, kde_grid, max_relative_error, silverman_bandwidth
)


class TestGlobalSoftmax:

    def test_all_equal_logits(self):
        np.testing.assert_allclose(global_softmax([[0, 0], [0, 0]]), [[0.25, 0.25], [0.25, 0.25]])

    def test_single_entry(self):
        assert global_softmax([[5.0]])[0, 0] == 1.0

    def test_large_logits_do_not_overflow(self):
        out = global_softmax([[1000, 1000]])
        np.testing.assert_allclose(out, [[0.5, 0.5]])
        assert np.all(np.isfinite(out))

    def test_normalized_over_whole_matrix(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            shape = tuple(rng.integers(1, 7, size=2))
            out = global_softmax(rng.normal(0, 5, size=shape))
            assert abs(out.sum() - 1.0) < 1e-12
            assert np.all(out >= 0)

    def test_not_row_normalized(self):
        out = global_softmax([[0.0, 0.0], [1.0, 1.0]])
        assert not np.allclose(out.sum(axis=1), 1.0)

    def test_empty_matrix_rejected(self):
        with pytest.raises(DimensionError):
            global_softmax(np.zeros((0, 3)))

    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        z = rng.normal(size=(3, 4))
        upstream = rng.normal(size=(3, 4))

        def f(flat):
            return float(np.sum(global_softmax(flat.reshape(3, 4)) * upstream))

        numeric = finite_diff_gradient(f, z.ravel()).reshape(3, 4)
        analytic = global_softmax_backward(global_softmax(z), upstream)
        assert max_relative_error(analytic, numeric) < 1e-6

    @pytest.mark.parametrize("shift", [-50.0, 3.5, 1000.0])
    def test_invariant_to_constant_shift(self, shift):
        z = np.random.default_rng(11).normal(size=(3, 5))
        assert np.max(np.abs(global_softmax(z + shift) - global_softmax(z))) < 1e-9


class TestAbsCosine:

    def test_orthogonal(self):
        assert abs_cosine([1, 0], [0, 1]) == 0.0

    def test_colinear_scale_invariant(self):
        assert abs_cosine([2, 0], [1, 0]) == 1.0

    def test_sign_removed(self):
        assert abs_cosine([1, 0], [-1, 0]) == 1.0

    def test_diagonal(self):
        assert abs(abs_cosine([1, 1], [1, 0]) - 1 / math.sqrt(2)) < 1e-12

    def test_zero_vector_gives_zero(self):
        assert abs_cosine([0, 0], [1, 2]) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            abs_cosine([1, 0, 0], [1, 0])

    def test_matrix_agrees_with_pairwise(self):
        rng = np.random.default_rng(42)
        left = rng.normal(size=(4, 5))
        right = rng.normal(size=(3, 5))
        matrix = abs_cosine_matrix(left, right)
        for i in range(4):
            for j in range(3):
                assert abs(matrix[i, j] - abs_cosine(left[i], right[j])) < 1e-12
        assert np.all((matrix >= 0) & (matrix <= 1))

    def test_invariant_to_nonzero_scaling(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            u, v = rng.normal(size=6), rng.normal(size=6)
            alpha, beta = rng.uniform(0.1, 10.0, size=2) * rng.choice([-1.0, 1.0], size=2)
            assert abs(abs_cosine(alpha * u, beta * v) - abs_cosine(u, v)) < 1e-12


class TestFiniteDiffGradient:

    def test_square(self):
        grad = finite_diff_gradient(lambda x: float(x[0] ** 2), [3.0])
        assert abs(grad[0] - 6.0) < 1e-6

    def test_constant(self):
        grad = finite_diff_gradient(lambda x: 4.2, np.ones(5))
        np.testing.assert_allclose(grad, 0.0, atol=1e-9)

    def test_product(self):
        grad = finite_diff_gradient(lambda x: float(x[0] * x[1]), [2.0, 3.0])
        np.testing.assert_allclose(grad, [3.0, 2.0], atol=1e-6)

    def test_input_not_modified(self):
        x = np.array([1.0, 2.0])
        finite_diff_gradient(lambda v: float(v.sum()), x)
        np.testing.assert_array_equal(x, [1.0, 2.0])

    def test_non_finite_reports_coordinate(self):
        def f(x):
            return float("nan") if x[1] > 1.0 else float(x.sum())

        with pytest.raises(NumericError) as info:
            finite_diff_gradient(f, [0.0, 1.0])
        assert info.value.coordinate == 1

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError, match="positive"):
            finite_diff_gradient(lambda x: 0.0, [1.0], h=0.0)

    def test_cubic_error_quarters_with_half_step(self):
        def cube(x):
            return float(x[0] ** 3)

        errors = [abs(finite_diff_gradient(cube, [2.0], h=h)[0] - 12.0) for h in (1e-2, 5e-3)]
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=1e-3)


class TestKde:

    def test_single_sample_peak(self):
        curve = kde_density([0.0], [0.0], bandwidth=1.0)
        assert abs(curve.density[0] - 1 / math.sqrt(2 * math.pi)) < 1e-12

    def test_symmetry(self):
        curve = kde_density([0.0], [-1.0, 1.0], bandwidth=1.0)
        assert curve.density[0] == pytest.approx(curve.density[1], abs=1e-15)

    def test_two_samples_at_midpoint(self):
        h = 0.5
        single = kde_density([1.0], [0.0], bandwidth=h).density[0]
        pair = kde_density([-1.0, 1.0], [-2.0, 0.0, 2.0], bandwidth=h).density[1]
        # 两个样本的平均核值等于单个样本在距离 1 处的核值
        expected = math.exp(-1.0 / (2 * h * h)) / (h * math.sqrt(2 * math.pi))
        assert abs(single - expected) < 1e-12
        assert abs(pair - expected) < 1e-12

    def test_integrates_to_one(self):
        rng = np.random.default_rng(42)
        samples = rng.uniform(0, 1, size=50)
        h = silverman_bandwidth(samples)
        grid, (width,) = kde_grid([samples], [h], num_points=512)
        assert width == h
        assert abs(kde_density(samples, grid, width).integral() - 1.0) < 0.01

    def test_empty_samples_rejected(self):
        with pytest.raises(ValueError, match="at least one sample"):
            kde_density([], [0.0, 1.0])

    def test_non_ascending_grid_rejected(self):
        with pytest.raises(ValueError, match="ascending"):
            kde_density([0.0], [1.0, 0.0])

    def test_silverman_fallback(self):
        assert silverman_bandwidth([0.3]) == FALLBACK_BANDWIDTH
        assert silverman_bandwidth([0.3, 0.3, 0.3]) == FALLBACK_BANDWIDTH

    def test_narrow_series_on_shared_grid(self):
        rng = np.random.default_rng(42)
        wide = rng.uniform(0, 1, size=200)
        narrow = 0.7 + 1e-7 * np.arange(200)
        bandwidths = [silverman_bandwidth(wide), silverman_bandwidth(narrow)]
        grid, widths = kde_grid([wide, narrow], bandwidths)
        step = grid[1] - grid[0]
        assert widths[0] == bandwidths[0]
        assert widths[1] == pytest.approx(MIN_BANDWIDTH_STEPS * step)
        for samples, h in zip((wide, narrow), widths):
            assert abs(kde_density(samples, grid, h).integral() - 1.0) < 0.01

    def test_grid_widens_for_separated_narrow_series(self):
        left = 1e-9 * np.arange(20)
        right = 10.0 + 1e-9 * np.arange(20)
        bandwidths = [silverman_bandwidth(left), silverman_bandwidth(right)]
        grid, widths = kde_grid([left, right], bandwidths, num_points=512, span=8.0)
        assert grid[0] <= left.min() - 8 * max(widths) + 1e-9
        assert grid[-1] >= right.max() + 8 * max(widths) - 1e-9
        for samples, h in zip((left, right), widths):
            assert abs(kde_density(samples, grid, h).integral() - 1.0) < 0.01

    def test_grid_length_mismatch(self):
        with pytest.raises(DimensionError):
            kde_grid([[0.0, 1.0]], [0.1, 0.2])

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from recdef import (
    DeformationOne,
    DeformationThree,
    TridiagonalMatrix,
    build_matrix,
    cheb_density,
    dos_eigen_histogram,
    dos_finite_ratio,
    eigenvalues,
)
from recdef.deformation import deformed_density_three_values
from recdef.resolvent import density_values
from recdef.spectra import default_epsilon, dos_finite_ratio_values, reference_deformation, quadrature_weights

from .conftest import random_sequence, tabulated_sequences

WINDOW = np.linspace(-0.8, 0.8, 81)


class TestMatrix:
    def test_reference_deformation(self, cheb):
        m = build_matrix(cheb, 10, reference_deformation())
        assert m.dim == 10
        assert m.diag.tolist() == pytest.approx([0.2] + [0.0] * 9)
        assert m.offdiag.tolist() == pytest.approx([0.4] + [0.5] * 8)

    def test_plain_truncation(self):
        seq = random_sequence(np.random.default_rng(0))
        m = build_matrix(seq, 8)
        a, b = seq.arrays(8)
        assert m.diag.tolist() == a.tolist() and m.offdiag.tolist() == b[:7].tolist()

    def test_two_by_two_block(self, cheb):
        d = DeformationThree(0.3, -0.2, 0.1)
        np.testing.assert_allclose(build_matrix(cheb, 2, d).to_dense(), [[0.3, 0.6], [0.6, -0.2]])

    def test_one_parameter(self, cheb):
        m = build_matrix(cheb, 4, DeformationOne(0.7))
        assert m.diag.tolist() == pytest.approx([0.7, 0, 0, 0])

    def test_too_small(self, cheb):
        with pytest.raises(ValueError):
            build_matrix(cheb, 1, DeformationThree(0.1, 0, 0))
        with pytest.raises(ValueError):
            build_matrix(cheb, 0)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix([1.0, 2.0], [1.0, 2.0])

    def test_dense_is_symmetric(self, cheb):
        dense = build_matrix(cheb, 6, reference_deformation()).to_dense()
        np.testing.assert_array_equal(dense, dense.T)


class TestEigenvalues:
    def test_three_by_three(self, cheb):
        r = math.sqrt(2) / 2
        np.testing.assert_allclose(eigenvalues(build_matrix(cheb, 3)), [-r, 0, r], atol=1e-15)

    def test_one_by_one(self):
        assert eigenvalues(TridiagonalMatrix([0.7], [])).tolist() == [0.7]

    def test_chebyshev_ten(self, cheb):
        want = np.sort(np.cos(np.arange(1, 11) * math.pi / 11))
        np.testing.assert_allclose(eigenvalues(build_matrix(cheb, 10)), want, atol=1e-14)

    @settings(max_examples=20, deadline=None)
    @given(seq=tabulated_sequences(), dim=st.integers(2, 30))
    def test_interlacing(self, seq, dim):
        m = build_matrix(seq, dim)
        big = eigenvalues(m)
        small = eigenvalues(m.leading(dim - 1))
        # strict in exact arithmetic; a converged isolated eigenvalue can tie to rounding
        tol = 1e-12 * max(1.0, np.abs(big).max())
        assert np.all(big[:-1] < small + tol) and np.all(small < big[1:] + tol)

    @pytest.mark.parametrize("dim", range(2, 31))
    def test_strict_interlacing_chebyshev(self, cheb, dim):
        m = build_matrix(cheb, dim, reference_deformation())
        big = eigenvalues(m)
        small = eigenvalues(m.leading(dim - 1))
        assert np.all(big[:-1] < small) and np.all(small < big[1:])

    @settings(max_examples=20, deadline=None)
    @given(seq=tabulated_sequences(), dim=st.integers(1, 40))
    def test_trace(self, seq, dim):
        m = build_matrix(seq, dim)
        assert abs(eigenvalues(m).sum() - m.diag.sum()) <= 1e-10

    def test_accuracy_vs_lapack(self):
        seq = random_sequence(np.random.default_rng(1))
        m = build_matrix(seq, 60)
        want = eigh_tridiagonal(m.diag, m.offdiag, eigvals_only=True)
        radius = np.abs(want).max()
        assert np.abs(eigenvalues(m) - want).max() <= 1e-10 * radius

    def test_weights_are_first_components(self):
        seq = random_sequence(np.random.default_rng(2))
        m = build_matrix(seq, 25)
        lam, v = eigh_tridiagonal(m.diag, m.offdiag)
        np.testing.assert_allclose(quadrature_weights(m), v[0] ** 2, atol=1e-12)
        assert quadrature_weights(m).sum() == pytest.approx(1.0)


class TestFiniteRatio:
    def test_default_epsilon(self, cheb):
        assert default_epsilon(cheb, 200) == pytest.approx(0.01)
        # eigenvalues cos(k pi / 201) are pi / 201 apart at the centre
        assert default_epsilon(cheb, 200, 0.0) == pytest.approx(math.pi / 200)
        assert default_epsilon(cheb, 200, [1.0, 2.0]).tolist() == pytest.approx([0.01, 0.01])

    def test_plain_chebyshev_dim200(self, cheb):
        v = dos_finite_ratio(cheb, 200, None, 0.0, continuation="none")
        assert abs(v - 2 / math.pi) <= 2e-2

    def test_plain_with_tiny_epsilon(self, cheb):
        # eps = 1e-3 is below the level spacing 1e-2: x = 0 sits between two
        # eigenvalues and the truncated resolvent has almost no weight there
        v = dos_finite_ratio(cheb, 200, None, 0.0, epsilon=1e-3, continuation="none")
        assert abs(v - 2 / math.pi) > 0.1

    def test_terminator_chebyshev(self, cheb):
        got = dos_finite_ratio_values(cheb, 200, None, WINDOW)
        assert np.abs(got - cheb_density(WINDOW)).max() <= 1e-12

    def test_reference_deformation(self, cheb):
        d = reference_deformation()
        ref = deformed_density_three_values(cheb, d, WINDOW)
        got = dos_finite_ratio_values(cheb, 10, d, WINDOW)
        assert np.abs(got - ref).max() <= 0.05 * ref.max()

    def test_reference_plain_is_far_off(self, cheb):
        # the dim = 10 truncation alone has ten poles; no shift recovers the smooth curve
        d = reference_deformation()
        ref = deformed_density_three_values(cheb, d, WINDOW)
        for eps in (0.05, 0.2, 0.4):
            got = dos_finite_ratio_values(cheb, 10, d, WINDOW, epsilon=eps, continuation="none")
            assert np.abs(got - ref).max() > 0.05 * ref.max()

    def test_plain_convergence(self, cheb):
        exact = density_values(cheb, WINDOW)
        errs = []
        for dim in (50, 100, 200):
            got = dos_finite_ratio_values(cheb, dim, None, WINDOW, continuation="none")
            errs.append(np.abs(got - exact).max())
        assert errs[0] > errs[1] > errs[2]

    def test_errors(self, cheb):
        with pytest.raises(ValueError):
            dos_finite_ratio(cheb, 1, None, 0.0)
        with pytest.raises(ValueError):
            dos_finite_ratio(cheb, 10, None, 0.0, continuation="pade")
        with pytest.raises(ValueError):
            dos_finite_ratio(cheb, 10, None, 0.0, epsilon=0.0, continuation="none")


class TestEigenHistogram:
    def test_chebyshev_dim50(self, cheb):
        g = dos_eigen_histogram(cheb, 50, None, WINDOW)
        assert np.abs(g.values - cheb_density(WINDOW)).max() <= 0.05
        assert g.method == "eigen-histogram" and g.meta["dim"] == 50

    def test_reference_deformation(self, cheb):
        d = reference_deformation()
        ref = deformed_density_three_values(cheb, d, WINDOW)
        g = dos_eigen_histogram(cheb, 10, d, WINDOW)
        assert np.abs(g.values - ref).max() <= 0.1

    def test_nonnegative(self, cheb):
        xs = np.linspace(-1.2, 1.2, 241)
        assert np.all(dos_eigen_histogram(cheb, 12, reference_deformation(), xs).values >= 0)

    def test_bound_state_excluded(self, cheb):
        d = DeformationOne(0.75)
        g = dos_eigen_histogram(cheb, 50, d, WINDOW)
        assert max(g.meta["eigenvalues"]) <= 1.0
        all_eigs = eigenvalues(build_matrix(cheb, 50, d))
        assert all_eigs[-1] == pytest.approx(13 / 12, abs=1e-10)

    def test_too_few_eigenvalues(self, cheb):
        with pytest.raises(ValueError, match="at least 4"):
            dos_eigen_histogram(cheb, 3, None, WINDOW)
        with pytest.raises(ValueError):
            dos_eigen_histogram(cheb, 20, None, WINDOW, window=(0.0, 0.1))

    def test_total_weight(self, cheb):
        xs = np.linspace(-1, 1, 4001)
        g = dos_eigen_histogram(cheb, 40, None, xs)
        assert np.trapezoid(g.values, xs) == pytest.approx(1.0, abs=1e-3)

"""Pure-gauge perturbations: phase laws, cancellation, gauged basis waves."""

import math

import numpy as np
import pytest

from cfsgauge.dirac_box import (SPINOR_GRAM, DiracBoxConfig,
                                SpacetimePoint, kernel_mode_sum,
                                wave_value_matrix)
from cfsgauge.errors import NotDiagonalKernel
from cfsgauge.krein import opnorm
from cfsgauge.perturbation import (GaugeFunction, apply_local_phase,
                                   basis_waves, diagonal_kernel, gauged_basis,
                                   kernel_time_coefficient, mixed_kernel,
                                   perturbed_correlation,
                                   perturbed_symmetric_gauge)
from cfsgauge.randoms import (random_box_point, random_gauge_function,
                              random_krein_unitary)
from cfsgauge.perturbation import SPINOR_KREIN

CFG = DiracBoxConfig(L=math.pi, eps=1.0 / 2.5, m=0.0)
POINT = SpacetimePoint(t=0.2, x_vec=(0.4, -0.8, 1.1))


@pytest.fixture(scope="module")
def waves():
    return wave_value_matrix(CFG, POINT)


class TestGaugeFunction:
    def test_periodicity(self):
        rng = np.random.default_rng(0)
        lam = random_gauge_function(rng, CFG.L)
        p1 = SpacetimePoint(t=0.3, x_vec=(0.2, -0.5, 0.7))
        p2 = SpacetimePoint(t=0.3, x_vec=(0.2 + 2 * CFG.L, -0.5 - 2 * CFG.L, 0.7))
        assert abs(lam(p1) - lam(p2)) <= 1e-12

    def test_real_valued(self):
        rng = np.random.default_rng(1)
        lam = random_gauge_function(rng, CFG.L)
        assert isinstance(lam(POINT), float)

    def test_shift_vanishes_at_point(self):
        rng = np.random.default_rng(2)
        lam = random_gauge_function(rng, CFG.L)
        shifted = lam.shifted_to_vanish_at(POINT)
        assert abs(shifted(POINT)) <= 1e-12
        other = SpacetimePoint(t=-0.4, x_vec=(1.0, 0.3, -0.2))
        assert abs((shifted(other) - lam(other)) + lam(POINT)) <= 1e-12


class TestLocalPhase:
    def test_zero_gauge_function(self, waves):
        lam = GaugeFunction(terms=(), L=CFG.L)
        np.testing.assert_allclose(apply_local_phase(waves, lam, POINT), waves)

    def test_constant_phase(self, waves):
        theta = 0.77
        lam = GaugeFunction(terms=((theta, (0, 0, 0), 0.0, 0.0),), L=CFG.L)
        np.testing.assert_allclose(apply_local_phase(waves, lam, POINT),
                                   np.exp(1j * theta) * waves, atol=1e-14)

    def test_first_order_consistency(self, waves):
        # exp(i s Lambda) W = W + i s Lambda W + O(s^2)
        rng = np.random.default_rng(3)
        lam = random_gauge_function(rng, CFG.L)
        value = lam(POINT)
        residuals = []
        for s in (1e-2, 5e-3):
            perturbed = apply_local_phase(waves, GaugeFunction(
                terms=tuple((s * a, n, w, p) for a, n, w, p in lam.terms),
                L=CFG.L), POINT)
            linear = waves + 1j * s * value * waves
            residuals.append(opnorm(perturbed - linear))
        assert 3.5 <= residuals[0] / residuals[1] <= 4.5


class TestCorrelationInvariance:
    def test_pure_gauge_exact(self, waves):
        rng = np.random.default_rng(4)
        for _ in range(10):
            lam = random_gauge_function(rng, CFG.L)
            perturbed = apply_local_phase(waves, lam, POINT)
            assert opnorm(perturbed_correlation(perturbed)
                          - perturbed_correlation(waves)) <= 1e-12

    def test_signature_preserved(self, waves):
        rng = np.random.default_rng(5)
        lam = random_gauge_function(rng, CFG.L)
        perturbed = apply_local_phase(waves, lam, POINT)
        vals = np.linalg.eigvalsh(perturbed_correlation(perturbed))
        tol = 1e-8 * max(abs(vals))
        assert int(np.sum(vals > tol)) == 2
        assert int(np.sum(vals < -tol)) == 2


class TestMixedKernel:
    def test_zero_gauge_function(self, waves):
        np.testing.assert_allclose(mixed_kernel(waves, waves),
                                   diagonal_kernel(waves), atol=1e-14)

    def test_constant_phase(self, waves):
        theta = -1.3
        perturbed = np.exp(1j * theta) * waves
        np.testing.assert_allclose(mixed_kernel(waves, perturbed),
                                   np.exp(-1j * theta) * diagonal_kernel(waves),
                                   atol=1e-12)

    def test_phase_law_on_grid(self, waves):
        # exact phase law pointwise on a 5 x 5 x 5 spatial grid
        rng = np.random.default_rng(6)
        lam = random_gauge_function(rng, CFG.L)
        axis = np.linspace(-CFG.L, CFG.L, 5, endpoint=False)
        for x1 in axis:
            for x2 in axis:
                for x3 in axis:
                    point = SpacetimePoint(t=0.1, x_vec=(x1, x2, x3))
                    w = wave_value_matrix(CFG, point)
                    wt = apply_local_phase(w, lam, point)
                    expected = np.exp(-1j * lam(point)) * diagonal_kernel(w)
                    assert opnorm(mixed_kernel(w, wt) - expected) <= 1e-10


class TestSymmetricGaugeValue:
    def test_diagonal_coefficient_matches_mode_count(self, waves):
        from cfsgauge.dirac_box import momentum_points
        alpha = kernel_time_coefficient(diagonal_kernel(waves))
        expected = -len(momentum_points(CFG)) / (32 * math.pi * CFG.L ** 3)
        assert abs(alpha - expected) <= 1e-12

    def test_massive_kernel_rejected(self):
        cfg = DiracBoxConfig(L=math.pi, eps=1.0 / 2.5, m=1.0)
        w = wave_value_matrix(cfg, POINT)
        with pytest.raises(NotDiagonalKernel):
            kernel_time_coefficient(diagonal_kernel(w))

    def test_zero_gauge_function_reproduces_unperturbed(self, waves):
        v0 = perturbed_symmetric_gauge(waves, waves)
        lam = GaugeFunction(terms=(), L=CFG.L)
        v1 = perturbed_symmetric_gauge(
            waves, apply_local_phase(waves, lam, POINT))
        assert opnorm(v1 - v0) <= 1e-12

    def test_phase_cancellation_50_gauge_functions(self, waves):
        rng = np.random.default_rng(7)
        v0 = perturbed_symmetric_gauge(waves, waves)
        worst = 0.0
        for _ in range(50):
            lam = random_gauge_function(rng, CFG.L)
            perturbed = apply_local_phase(waves, lam, POINT)
            value = perturbed_symmetric_gauge(waves, perturbed)
            worst = max(worst, opnorm(value - v0))
        assert worst <= 1e-9

    def test_global_phase_invariance(self, waves):
        theta = 2.1
        lam = GaugeFunction(terms=((theta, (0, 0, 0), 0.0, 0.0),), L=CFG.L)
        v0 = perturbed_symmetric_gauge(waves, waves)
        v1 = perturbed_symmetric_gauge(
            waves, apply_local_phase(waves, lam, POINT))
        assert opnorm(v1 - v0) <= 1e-12

    def test_supplied_unitary_enters_linearly(self, waves):
        rng = np.random.default_rng(8)
        u = random_krein_unitary(rng, SPINOR_KREIN, scale=0.2)
        v_id = perturbed_symmetric_gauge(waves, waves)
        v_u = perturbed_symmetric_gauge(waves, waves, unitary=u)
        assert opnorm(v_u - u @ v_id) <= 1e-12


class TestTransformationLedger:
    def test_kernel_phase_and_chain_invariance(self):
        # under W -> exp(i Lambda) W pointwise: the two-point kernel picks up
        # exp(i Lambda(x) - i Lambda(y)), the closed chain stays fixed, and
        # the gauge value at y is unchanged once Lambda(x) = 0
        rng = np.random.default_rng(9)
        x = POINT
        y = SpacetimePoint(t=0.25, x_vec=(0.55, -0.7, 1.2))
        wx = wave_value_matrix(CFG, x)
        wy = wave_value_matrix(CFG, y)
        p_xy = -(wx @ wy.conj().T @ SPINOR_GRAM)
        chain = p_xy @ (-(wy @ wx.conj().T @ SPINOR_GRAM))
        alpha = kernel_time_coefficient(diagonal_kernel(wx))

        for _ in range(10):
            lam = random_gauge_function(rng, CFG.L).shifted_to_vanish_at(x)
            wx_t = apply_local_phase(wx, lam, x)
            wy_t = apply_local_phase(wy, lam, y)
            p_xy_t = -(wx_t @ wy_t.conj().T @ SPINOR_GRAM)
            phase = np.exp(1j * (lam(x) - lam(y)))
            assert opnorm(p_xy_t - phase * p_xy) <= 1e-9
            chain_t = p_xy_t @ (-(wy_t @ wx_t.conj().T @ SPINOR_GRAM))
            assert opnorm(chain_t - chain) <= 1e-9

            # gauge value at y (normalized so the base-point phase is zero)
            def gauge_value(pxy, pyx, wy_val):
                normalized = (pxy @ pyx) / (alpha * alpha)
                from cfsgauge.krein import sqrt_near_identity
                inv_sqrt = sqrt_near_identity(
                    normalized, SPINOR_KREIN).inv_sqrt / abs(alpha)
                return SPINOR_GRAM @ inv_sqrt @ pxy @ wy_val

            v0 = gauge_value(p_xy, -(wy @ wx.conj().T @ SPINOR_GRAM), wy)
            v1 = gauge_value(p_xy_t, -(wy_t @ wx_t.conj().T @ SPINOR_GRAM), wy_t)
            assert opnorm(v1 - v0) <= 1e-9


class TestBasisWaves:
    def test_values_at_base_point(self):
        bw = basis_waves(CFG, POINT)
        values = bw.evaluate(POINT)
        transported = kernel_mode_sum(CFG, POINT, POINT) @ bw.chi
        np.testing.assert_allclose(transported, values, atol=1e-12)

    def test_kernel_transport_reproduces_waves(self):
        bw = basis_waves(CFG, POINT)
        rng = np.random.default_rng(10)
        for _ in range(5):
            y = random_box_point(rng, CFG.L)
            assert opnorm(bw.kernel_transport(y) - bw.evaluate(y)) <= 1e-9

    def test_check_points_verified_at_build_time(self):
        rng = np.random.default_rng(13)
        samples = [random_box_point(rng, CFG.L) for _ in range(3)]
        basis_waves(CFG, POINT, check_points=samples)   # must not raise

    def test_coefficients_orthonormal(self):
        bw = basis_waves(CFG, POINT)
        np.testing.assert_allclose(bw.coeffs.conj().T @ bw.coeffs, np.eye(4),
                                   atol=1e-12)

    def test_chi_inverts_diagonal_kernel(self):
        bw = basis_waves(CFG, POINT)
        values = bw.evaluate(POINT)
        p_diag = kernel_mode_sum(CFG, POINT, POINT)
        np.testing.assert_allclose(p_diag @ bw.chi, values, atol=1e-12)


class TestGaugedBasis:
    def test_two_routes_agree_unperturbed(self, waves):
        bw = basis_waves(CFG, POINT)
        via_gauge, via_chain = gauged_basis(waves, waves, bw.coeffs)
        assert opnorm(via_gauge - via_chain) <= 1e-10

    def test_two_routes_agree_pure_gauge(self, waves):
        rng = np.random.default_rng(11)
        bw = basis_waves(CFG, POINT)
        for _ in range(10):
            lam = random_gauge_function(rng, CFG.L)
            perturbed = apply_local_phase(waves, lam, POINT)
            via_gauge, via_chain = gauged_basis(waves, perturbed, bw.coeffs)
            assert opnorm(via_gauge - via_chain) <= 1e-10

    def test_invariant_under_gauge_functions(self, waves):
        rng = np.random.default_rng(12)
        bw = basis_waves(CFG, POINT)
        reference, _ = gauged_basis(waves, waves, bw.coeffs)
        for _ in range(10):
            lam = random_gauge_function(rng, CFG.L)
            perturbed = apply_local_phase(waves, lam, POINT)
            via_gauge, _ = gauged_basis(waves, perturbed, bw.coeffs)
            assert opnorm(via_gauge - reference) <= 1e-10

    def test_unperturbed_closed_form(self, waves):
        # without perturbation the chain is P(x,x)^2, so the gauged basis is
        # gamma^0 |alpha| chi_a up to the sign convention of the chain root
        bw = basis_waves(CFG, POINT)
        _, via_chain = gauged_basis(waves, waves, bw.coeffs)
        expected = SPINOR_GRAM @ (abs(bw.alpha) * np.eye(4)) @ bw.chi
        np.testing.assert_allclose(via_chain, expected, atol=1e-10)

"""Wave charts, the realization map, gauge orbits and gauge construction."""

import numpy as np
import pytest

from cfsgauge.correlation import spin_space
from cfsgauge.errors import NotInvertible, OutOfChartDomain
from cfsgauge.krein import opnorm
from cfsgauge.manifold import ChartCoordinates, chart_forward
from cfsgauge.randoms import (random_chart_coords, random_complex,
                              random_correlation, random_krein_unitary)
from cfsgauge.wave_charts import (WaveChartPoint, build_gauge,
                                  charts_coincide_check, connecting_unitary,
                                  gauge_orbit_witness, gaussian_wave_map,
                                  identity_point, realize,
                                  symmetric_wave_chart, symmetrize)


def perturbed_point(rng, base, scale=0.1):
    """A wave-chart point near (1, 0)."""
    two_n = 2 * base.n
    rest = base.ambient_dim - two_n
    return WaveChartPoint(
        on_image=np.eye(two_n) + scale * random_complex(rng, two_n, two_n),
        on_complement=scale * random_complex(rng, two_n, rest),
        base=base,
    )


def nearby_operator(rng, base, scale=0.05):
    return chart_forward(random_chart_coords(rng, base.split, scale=scale))


class TestRealize:
    def test_identity_point_realizes_base(self):
        rng = np.random.default_rng(0)
        x = random_correlation(rng, 8, 2)
        base = spin_space(x, 2)
        np.testing.assert_allclose(realize(identity_point(base)), x, atol=1e-12)

    def test_orbit_invariance(self):
        rng = np.random.default_rng(1)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(200):
            psi = perturbed_point(rng, base)
            u = random_krein_unitary(rng, base.krein, scale=0.3)
            rotated = WaveChartPoint(on_image=u @ psi.on_image,
                                     on_complement=u @ psi.on_complement,
                                     base=base)
            assert opnorm(realize(rotated) - realize(psi)) <= 1e-9

    def test_signature_of_realization(self):
        rng = np.random.default_rng(2)
        base = spin_space(random_correlation(rng, 9, 2), 2)
        for _ in range(20):
            y = realize(perturbed_point(rng, base, scale=0.05))
            vals = np.linalg.eigvalsh(y)
            tol = 1e-8 * opnorm(y)
            assert int(np.sum(vals > tol)) == 2
            assert int(np.sum(vals < -tol)) == 2


class TestGaugeOrbitWitness:
    def test_same_point_gives_identity(self):
        rng = np.random.default_rng(3)
        base = spin_space(random_correlation(rng, 7, 1), 1)
        psi = perturbed_point(rng, base)
        u = gauge_orbit_witness(psi, psi)
        np.testing.assert_allclose(u, np.eye(2), atol=1e-10)

    def test_recovers_rotation(self):
        rng = np.random.default_rng(4)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(25):
            psi = perturbed_point(rng, base)
            u0 = random_krein_unitary(rng, base.krein, scale=0.2)
            rotated = WaveChartPoint(on_image=u0 @ psi.on_image,
                                     on_complement=u0 @ psi.on_complement,
                                     base=base)
            u = gauge_orbit_witness(psi, rotated)
            assert u is not None
            assert opnorm(u - u0) <= 1e-9

    def test_different_realization_not_on_orbit(self):
        rng = np.random.default_rng(5)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        psi = perturbed_point(rng, base)
        other = perturbed_point(rng, base)
        assert gauge_orbit_witness(psi, other) is None

    def test_singular_on_image_rejected(self):
        rng = np.random.default_rng(6)
        base = spin_space(random_correlation(rng, 6, 1), 1)
        psi = perturbed_point(rng, base)
        singular = WaveChartPoint(on_image=np.zeros((2, 2)),
                                  on_complement=psi.on_complement,
                                  base=base)
        with pytest.raises(NotInvertible):
            gauge_orbit_witness(singular, psi)


class TestSymmetrize:
    def test_symmetric_input_unchanged(self):
        rng = np.random.default_rng(7)
        base = spin_space(random_correlation(rng, 7, 1), 1)
        psi = symmetrize(perturbed_point(rng, base))
        again = symmetrize(psi)
        assert opnorm(again.on_image - psi.on_image) <= 1e-9
        assert opnorm(again.on_complement - psi.on_complement) <= 1e-9

    def test_unitary_on_image_becomes_identity(self):
        rng = np.random.default_rng(8)
        base = spin_space(random_correlation(rng, 7, 1), 1)
        u0 = random_krein_unitary(rng, base.krein, scale=0.1)
        psi = WaveChartPoint(on_image=u0,
                             on_complement=0.1 * random_complex(rng, 2, 5),
                             base=base)
        sym = symmetrize(psi)
        assert opnorm(sym.on_image - np.eye(2)) <= 1e-9

    def test_realization_preserved_and_symmetric(self):
        rng = np.random.default_rng(9)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(50):
            psi = perturbed_point(rng, base, scale=0.04)
            sym = symmetrize(psi)
            assert opnorm(realize(sym) - realize(psi)) <= 1e-9
            assert base.krein.is_symmetric(sym.on_image, tol=1e-9)


class TestSymmetricWaveChart:
    def test_base_point_gives_identity_coordinates(self):
        rng = np.random.default_rng(10)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        phi = symmetric_wave_chart(base.operator, base)
        assert opnorm(phi.on_image - np.eye(4)) <= 1e-9
        assert opnorm(phi.on_complement) <= 1e-9

    def test_realization_and_symmetry(self):
        rng = np.random.default_rng(11)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(50):
            y = nearby_operator(rng, base)
            phi = symmetric_wave_chart(y, base)
            assert opnorm(realize(phi) - y) <= 1e-9
            assert opnorm(phi.on_image
                          - base.krein.adjoint(phi.on_image)) <= 1e-9

    def test_connecting_unitary_is_unitary_across_spaces(self):
        rng = np.random.default_rng(12)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        y = nearby_operator(rng, base)
        sp_y = spin_space(y, 2)
        u = connecting_unitary(base, sp_y)
        # adjoint across the two spin products: S_x -> S_y
        u_star = np.linalg.solve(sp_y.spin_gram, u.conj().T @ base.spin_gram)
        assert opnorm(u @ u_star - np.eye(4)) <= 1e-9
        assert opnorm(u_star @ u - np.eye(4)) <= 1e-9

    def test_chart_inverts_realization_on_symmetric_points(self):
        rng = np.random.default_rng(13)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(20):
            sym = symmetrize(perturbed_point(rng, base, scale=0.05))
            phi = symmetric_wave_chart(realize(sym), base)
            assert opnorm(phi.on_image - sym.on_image) <= 1e-8
            assert opnorm(phi.on_complement - sym.on_complement) <= 1e-8

    def test_far_point_rejected(self):
        base = spin_space(np.diag([1.0, -1.0, 0, 0, 0, 0]).astype(complex), 1)
        far = np.diag([0.0, 0.0, 0.0, 0.0, 1.0, -1.0]).astype(complex)
        with pytest.raises(OutOfChartDomain):
            symmetric_wave_chart(far, base)


class TestGaussianWaveMap:
    def test_origin(self):
        rng = np.random.default_rng(14)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        coords = ChartCoordinates(a=np.zeros((4, 4)), b=np.zeros((4, 4)),
                                  split=base.split)
        point = gaussian_wave_map(coords, base)
        assert opnorm(point.on_image - np.eye(4)) <= 1e-12
        assert opnorm(point.on_complement) <= 1e-12

    def test_scalar_direction(self):
        rng = np.random.default_rng(15)
        base = spin_space(random_correlation(rng, 6, 1), 1)
        eps = 0.21
        coords = ChartCoordinates(a=eps * base.restriction,
                                  b=np.zeros((2, 4)), split=base.split)
        point = gaussian_wave_map(coords, base)
        np.testing.assert_allclose(point.on_image, 1.1 * np.eye(2), atol=1e-10)

    def test_realizes_chart_forward(self):
        rng = np.random.default_rng(16)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        for _ in range(50):
            coords = random_chart_coords(rng, base.split, scale=0.05)
            point = gaussian_wave_map(coords, base)
            assert opnorm(chart_forward(coords) - realize(point)) <= 1e-9
            assert base.krein.is_symmetric(point.on_image, tol=1e-9)


class TestCoincidence:
    def test_base_point_deviation_zero(self):
        rng = np.random.default_rng(17)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        report = charts_coincide_check(base, [base.operator])
        assert report.max_deviation <= 1e-10

    @pytest.mark.parametrize("f", [8, 12])
    def test_random_samples(self, f):
        rng = np.random.default_rng(18 + f)
        x = random_correlation(rng, f, 2)
        base = spin_space(x, 2)
        samples = []
        while len(samples) < 25:
            y = nearby_operator(rng, base, scale=0.04)
            if opnorm(y - x) <= 0.1 * opnorm(x):
                samples.append(y)
        report = charts_coincide_check(base, samples)
        assert report.max_deviation <= 1e-8

    def test_domain_edge_reported(self):
        # larger coordinates: still either coincide or raise a domain error
        rng = np.random.default_rng(19)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        stressed = 0
        for _ in range(10):
            y = nearby_operator(rng, base, scale=0.12)
            try:
                report = charts_coincide_check(base, [y])
            except OutOfChartDomain:
                continue
            stressed += 1
            assert report.max_deviation <= 1e-6
        assert stressed > 0


class TestBuildGauge:
    def test_single_point_identity(self):
        rng = np.random.default_rng(20)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        gauge = build_gauge(base, [base.operator])
        np.testing.assert_allclose(gauge.values[0],
                                   base.basis.conj().T, atol=1e-9)

    def test_gauge_condition_residuals(self):
        rng = np.random.default_rng(21)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        points = [nearby_operator(rng, base) for _ in range(10)]
        gauge = build_gauge(base, points)
        assert max(gauge.condition_residuals) <= 1e-9

    def test_global_unitary_freedom(self):
        rng = np.random.default_rng(22)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        points = [nearby_operator(rng, base) for _ in range(8)]
        u_one = random_krein_unitary(rng, base.krein, scale=0.2)
        u_two = random_krein_unitary(rng, base.krein, scale=0.2)
        g1 = build_gauge(base, points, unitary=u_one)
        g2 = build_gauge(base, points, unitary=u_two)
        # the two gauges differ by one constant unitary at every point
        connectors = [v1 @ np.linalg.pinv(v2)
                      for v1, v2 in zip(g1.values, g2.values)]
        expected = u_one @ base.krein.adjoint(u_two)
        for c in connectors:
            assert opnorm(c - expected) <= 1e-9
        assert max(opnorm(c - connectors[0]) for c in connectors) <= 1e-9

    def test_left_multiplied_unitary_changes_values_not_realization(self):
        rng = np.random.default_rng(23)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        points = [nearby_operator(rng, base) for _ in range(5)]
        u_x = random_krein_unitary(rng, base.krein, scale=0.2)
        g = random_krein_unitary(rng, base.krein, scale=0.2)
        g1 = build_gauge(base, points, unitary=u_x)
        g2 = build_gauge(base, points, unitary=u_x @ g)
        factor = u_x @ g @ base.krein.adjoint(u_x)
        for v1, v2 in zip(g1.values, g2.values):
            assert opnorm(v2 - factor @ v1) <= 1e-9
        assert max(g2.condition_residuals) <= 1e-9

    def test_rejects_non_isometry(self):
        rng = np.random.default_rng(24)
        base = spin_space(random_correlation(rng, 8, 2), 2)
        with pytest.raises(ValueError):
            build_gauge(base, [base.operator], unitary=2.0 * np.eye(4))

import csv
import math

import numpy as np
import pytest
from scipy.special import jv

from wavecauchy.errors import EvaluationError
from wavecauchy.geometry import (
    Dimension,
    double_factorial,
    gegenbauer_rule,
    gegenbauer_weight_mass,
    integrate_on_sphere,
    reduce_ball_integral,
    reduce_sphere_integral,
    solution_constant,
    sphere_quadrature,
    sphere_quadrature_for_order,
    unit_ball_volume,
    unit_sphere_area,
)
from wavecauchy.montecarlo import ball_monte_carlo, sphere_monte_carlo


def sphere_cos_exact(radius, n):
    # Bessel closed form of the reduced integral: independent of the
    # quadrature path under test
    return (unit_sphere_area(n - 1) * math.sqrt(math.pi) * math.gamma((n - 1) / 2.0)
            * radius ** (n - 1) * (2.0 / radius) ** ((n - 2) / 2.0) * jv((n - 2) / 2.0, radius))


def ball_cos_exact(radius, n):
    return (unit_sphere_area(n - 1) * math.sqrt(math.pi) * math.gamma((n - 1) / 2.0)
            * 2.0 ** ((n - 2) / 2.0) * radius ** (n / 2.0) * jv(n / 2.0, radius))


class TestConstants:
    def test_sphere_area_examples(self):
        assert unit_sphere_area(1) == 2.0
        assert unit_sphere_area(2) == pytest.approx(2.0 * math.pi, rel=1e-15)
        assert unit_sphere_area(3) == pytest.approx(4.0 * math.pi, rel=1e-15)

    def test_ball_volume_examples(self):
        assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-15)
        assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_area_volume_identity(self, n):
        assert n * unit_ball_volume(n) == pytest.approx(unit_sphere_area(n), rel=1e-13)

    def test_dimension_guards(self):
        with pytest.raises(ValueError):
            unit_sphere_area(0)
        with pytest.raises(ValueError):
            unit_ball_volume(0)
        with pytest.raises(ValueError):
            unit_sphere_area(13)

    def test_double_factorial(self):
        assert [double_factorial(k) for k in (-1, 0, 1, 2, 5, 6)] == [1, 1, 1, 2, 15, 48]

    def test_solution_constants(self):
        assert solution_constant(3) == 1.0
        assert solution_constant(5) == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert solution_constant(7) == pytest.approx(1.0 / 15.0, rel=1e-15)
        assert solution_constant(2) == 0.5
        assert solution_constant(4) == 0.125
        assert solution_constant(6) == pytest.approx(1.0 / 48.0, rel=1e-15)

    def test_dimension_type(self):
        d = Dimension(5)
        assert d.parity == "odd" and d.derivative_order == 1
        assert Dimension(4).derivative_order == 1
        assert Dimension(2).derivative_order == 0
        with pytest.raises(ValueError):
            Dimension(0)
        with pytest.raises(ValueError):
            Dimension(1).derivative_order


class TestGegenbauerRule:
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
    @pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
    def test_total_mass(self, n, radius):
        rule = gegenbauer_rule(radius, n)
        assert rule.weights.sum() == pytest.approx(gegenbauer_weight_mass(radius, n), rel=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 6, 7])
    def test_symmetry(self, n):
        rule = gegenbauer_rule(1.3, n)
        np.testing.assert_allclose(rule.nodes, -rule.nodes[::-1], atol=1e-15)
        np.testing.assert_allclose(rule.weights, rule.weights[::-1], rtol=1e-14)
        assert np.all(rule.weights > 0)
        assert np.all(np.abs(rule.nodes) < rule.radius)

    def test_integrate_and_errors(self):
        rule = gegenbauer_rule(1.0, 3)
        assert rule.integrate(lambda s: np.ones_like(s)) == pytest.approx(2.0, rel=1e-14)
        with pytest.raises(EvaluationError), np.errstate(divide="ignore", invalid="ignore"):
            rule.integrate(lambda s: 1.0 / (s - s))
        with pytest.raises(ValueError):
            gegenbauer_rule(0.0, 3)
        with pytest.raises(ValueError):
            gegenbauer_rule(1.0, 2)


class TestReductionFormulas:
    def test_ball_examples(self):
        one = lambda s: np.ones_like(s)
        assert reduce_ball_integral(one, 1.0, 3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)
        assert reduce_ball_integral(lambda s: s, 1.7, 5) == pytest.approx(0.0, abs=1e-13)
        # s^2 over the unit 3-ball: 2*pi * int_0^1 (2 rho^4 / 3) d(rho) = 4*pi/15,
        # also (1/3) of the radial moment omega_3/5
        assert reduce_ball_integral(lambda s: s * s, 1.0, 3) == pytest.approx(
            4.0 * math.pi / 15.0, rel=1e-12)

    def test_sphere_examples(self):
        one = lambda s: np.ones_like(s)
        assert reduce_sphere_integral(one, 1.0, 3) == pytest.approx(4.0 * math.pi, rel=1e-12)
        assert reduce_sphere_integral(lambda s: s, 0.8, 7) == pytest.approx(0.0, abs=1e-13)
        assert reduce_sphere_integral(lambda s: s * s, 1.0, 3) == pytest.approx(
            4.0 * math.pi / 3.0, rel=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5, 7])
    @pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
    def test_cosine_closed_forms(self, n, radius):
        ball = reduce_ball_integral(np.cos, radius, n)
        sphere = reduce_sphere_integral(np.cos, radius, n)
        assert ball == pytest.approx(ball_cos_exact(radius, n), rel=1e-12)
        assert sphere == pytest.approx(sphere_cos_exact(radius, n), rel=1e-12)

    def test_monomial_moments(self):
        # int over B(0,R) of x_n^2 = omega_n R^(n+2) / (n (n+2))
        for n, radius in ((4, 1.0), (5, 2.0), (7, 0.5)):
            expected = unit_sphere_area(n) * radius ** (n + 2) / (n * (n + 2))
            assert reduce_ball_integral(lambda s: s * s, radius, n) == pytest.approx(
                expected, rel=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_radius_derivative_consistency(self, n):
        # d/dR of the ball integral is the sphere integral; check the central
        # difference converges at second order
        radius = 1.2
        f = np.cos
        sphere = reduce_sphere_integral(f, radius, n)
        errs = []
        for h in (1e-2, 5e-3):
            fd = (reduce_ball_integral(f, radius + h, n)
                  - reduce_ball_integral(f, radius - h, n)) / (2.0 * h)
            errs.append(abs(fd - sphere))
        assert errs[0] == pytest.approx(errs[1] * 4.0, rel=0.05)

    def test_nonfinite_rejected(self):
        with pytest.raises(EvaluationError):
            reduce_sphere_integral(lambda s: np.where(s > 0, np.inf, 1.0), 1.0, 3)

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            reduce_ball_integral(np.cos, 1.0, 2)

    @pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 9])
    def test_monte_carlo_cross_check(self, n):
        # the stated oracle: fixed-seed MC agreeing within 3 sigma
        f = lambda pts: np.cos(pts[:, n - 1])
        quad_ball = reduce_ball_integral(np.cos, 1.0, n)
        est = ball_monte_carlo(f, 1.0, n, samples=200_000, seed=11 * n)
        assert est.z_score(quad_ball) < 3.0
        quad_sphere = reduce_sphere_integral(np.cos, 1.0, n)
        ests = sphere_monte_carlo(f, 1.0, n, samples=200_000, seed=13 * n)
        assert ests.z_score(quad_sphere) < 3.0


class TestSphereQuadrature:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
    def test_rule_invariants(self, n):
        rule = sphere_quadrature(n)
        omega = unit_sphere_area(n)
        assert rule.weights.sum() == pytest.approx(omega, rel=1e-12)
        assert np.all(rule.weights > 0)
        norms = np.linalg.norm(rule.nodes, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-14)
        for k in range(n):
            assert abs(float(rule.weights @ rule.nodes[:, k])) <= 1e-12 * omega

    @pytest.mark.parametrize("n", [3, 4, 5, 7])
    def test_single_axis_monomial_exactness(self, n):
        # x_k^a has the same sphere integral as x_n^a (rotate the axis), and
        # that reduces to the 1-D weighted integral
        rule = sphere_quadrature_for_order(n, 8)
        for a in range(rule.order + 1):
            expected = reduce_sphere_integral(lambda s: s**a, 1.0, n)
            for k in (0, n - 1):
                got = float(rule.weights @ rule.nodes[:, k] ** a)
                assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_mixed_monomial_vs_monte_carlo(self, n):
        rule = sphere_quadrature_for_order(n, 8)
        alpha = [2, 4] + [0] * (n - 2)

        def monomial(pts):
            out = np.ones(pts.shape[0])
            for k, a in enumerate(alpha):
                if a:
                    out *= pts[:, k] ** a
            return out

        got = float(rule.weights @ monomial(rule.nodes))
        est = sphere_monte_carlo(monomial, 1.0, n, samples=400_000, seed=7 * n)
        assert est.z_score(got) < 3.0

    def test_integrate_on_sphere_examples(self):
        rule = sphere_quadrature(3)
        one = lambda pts: np.ones(pts.shape[:-1])
        assert integrate_on_sphere(one, np.zeros(3), 2.0, rule) == pytest.approx(
            unit_sphere_area(3) * 4.0, rel=1e-12)
        x3sq = lambda pts: pts[..., 2] ** 2
        assert integrate_on_sphere(x3sq, np.zeros(3), 1.0, rule) == pytest.approx(
            reduce_sphere_integral(lambda s: s * s, 1.0, 3), rel=1e-12)
        x1 = lambda pts: pts[..., 0]
        assert integrate_on_sphere(x1, np.zeros(3), 1.0, rule) == pytest.approx(0.0, abs=1e-12)

    def test_integrate_on_sphere_errors(self):
        rule = sphere_quadrature(3)
        with pytest.raises(ValueError):
            integrate_on_sphere(lambda p: np.ones(p.shape[:-1]), np.zeros(2), 1.0, rule)
        with pytest.raises(EvaluationError):
            integrate_on_sphere(lambda p: np.full(p.shape[:-1], np.nan), np.zeros(3), 1.0, rule)

    def test_memoized(self):
        assert sphere_quadrature(3) is sphere_quadrature(3)
        assert sphere_quadrature(3, 8, 16) is sphere_quadrature(3, 8, 16)

    def test_nodes_read_only(self):
        rule = sphere_quadrature(3)
        with pytest.raises(ValueError):
            rule.nodes[0, 0] = 2.0

    def test_csv_export(self, tmp_path):
        rule = sphere_quadrature(3, 4, 8)
        path = tmp_path / "rule.csv"
        rule.to_csv(path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["index", "x1", "x2", "x3", "weight"]
        assert len(rows) - 1 == len(rule.weights)
        total = sum(float(r[-1]) for r in rows[1:])
        assert total == pytest.approx(unit_sphere_area(3), rel=1e-12)

"""Model constants, exact density, and Riesz kernel against independent oracles."""

import math

import numpy as np
import pytest
from scipy import integrate

from stablescatter.errors import DomainError, QuadratureError, SingularityError
from stablescatter.model import (
    density,
    density_radial,
    empirical_heat_constant,
    make_model,
    riesz_kernel,
    sphere_area,
)


def cauchy_density(d, t, r):
    # closed-form isotropic alpha=1 density in d dimensions
    return math.gamma((d + 1) / 2.0) / math.pi ** ((d + 1) / 2.0) * t / (t * t + r * r) ** ((d + 1) / 2.0)


class TestMakeModel:
    def test_levy_constant_d3_alpha1(self):
        m = make_model(3, 1.0)
        assert m.c_levy == pytest.approx(1.0 / math.pi**2, rel=1e-12)

    def test_domain_error_recurrent(self):
        with pytest.raises(DomainError):
            make_model(1, 1.0)

    def test_domain_error_alpha_range(self):
        with pytest.raises(DomainError):
            make_model(3, 2.0)
        with pytest.raises(DomainError):
            make_model(3, 0.0)
        with pytest.raises(DomainError):
            make_model(3, -0.3)

    def test_levy_constant_multiprecision(self):
        # independent high-precision Gamma evaluation
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 40
        d, alpha = 2, 0.5
        ref = (
            mpmath.mpf(alpha)
            * mpmath.mpf(2) ** (alpha - 1)
            * mpmath.pi ** (-mpmath.mpf(d) / 2)
            * mpmath.gamma((d + alpha) / 2)
            / mpmath.gamma(1 - mpmath.mpf(alpha) / 2)
        )
        m = make_model(d, alpha)
        assert abs(m.c_levy - float(ref)) < 1e-10

    def test_sphere_area(self):
        assert sphere_area(1) == pytest.approx(2.0)
        assert sphere_area(2) == pytest.approx(2 * math.pi)
        assert sphere_area(3) == pytest.approx(4 * math.pi)


class TestDensity:
    def test_cauchy_closed_form_d3(self):
        m = make_model(3, 1.0)
        for t in [0.25, 1.0, 3.0]:
            for r in [0.1, 1.0, 4.0]:
                p = density_radial(m, t, r)
                assert p == pytest.approx(cauchy_density(3, t, r), abs=1e-8, rel=1e-6)

    def test_symmetry_exact(self):
        m = make_model(2, 0.5)
        x = np.array([0.3, -1.2])
        y = np.array([1.0, 0.4])
        assert density(m, 0.7, x, y) == density(m, 0.7, y, x)

    def test_diagonal_upper_bound(self):
        # p_t(x,x) finite, positive, below c t^{-d/alpha}
        for d, alpha in [(3, 1.0), (2, 0.5), (2, 1.0)]:
            m = make_model(d, alpha)
            c = empirical_heat_constant(m)
            for t in [0.3, 1.0, 5.0]:
                p = density(m, t, np.zeros(d), np.zeros(d))
                assert 0.0 < p <= c * t ** (-d / alpha)

    def test_two_sided_bound_on_grid(self):
        m = make_model(2, 0.5)
        c = empirical_heat_constant(m)
        for t in [0.5, 1.0, 2.0]:
            for r in [0.2, 1.0, 3.0]:
                p = density_radial(m, t, r)
                b = min(t ** (-m.d / m.alpha), t * r ** (-m.d - m.alpha))
                assert p <= c * b + 1e-12
                assert p >= b / c - 1e-12

    def test_time_domain_error(self):
        m = make_model(3, 1.0)
        with pytest.raises(DomainError):
            density_radial(m, 0.0, 1.0)
        with pytest.raises(DomainError):
            density_radial(m, -1.0, 1.0)

    def test_total_mass(self):
        m = make_model(2, 0.5)
        val, _ = integrate.quad(
            lambda r: density_radial(m, 1.0, r, tol=1e-10) * 2 * math.pi * r,
            0,
            np.inf,
            limit=400,
        )
        assert val == pytest.approx(1.0, abs=5e-7)

    def test_chapman_kolmogorov_d1(self):
        # int p_s(x,z) p_t(z,y) dz = p_{s+t}(x,y) on a 3-point grid
        m = make_model(1, 0.5)
        s, t = 0.4, 0.9
        for xy in [0.0, 0.7, 2.5]:
            conv, _ = integrate.quad(
                lambda z: density_radial(m, s, abs(z), tol=1e-10)
                * density_radial(m, t, abs(xy - z), tol=1e-10),
                -np.inf,
                np.inf,
                limit=400,
            )
            direct = density_radial(m, s + t, xy, tol=1e-10)
            assert conv == pytest.approx(direct, abs=1e-6)

    def test_scaling_self_similarity(self):
        # p_{ct}(r) = c^{-d/alpha} p_t(r c^{-1/alpha}) by construction; check
        # against an independent direct evaluation at both times
        m = make_model(3, 1.0)
        c = 3.7
        for r in [0.5, 2.0]:
            lhs = density_radial(m, c * 1.0, r)
            rhs = cauchy_density(3, c, r)
            assert lhs == pytest.approx(rhs, rel=1e-7)


class TestRieszKernel:
    def test_value_d3_alpha1(self):
        # elementary time integral of the closed-form Cauchy density:
        # int_0^inf t/(t^2+1)^2 dt / pi^2 = 1/(2 pi^2)
        m = make_model(3, 1.0)
        v = riesz_kernel(m, np.zeros(3), np.array([1.0, 0, 0]))
        assert v == pytest.approx(1.0 / (2 * math.pi**2), rel=1e-12)

    def test_time_integral_oracle(self):
        for d, alpha, r in [(3, 1.0, 1.0), (2, 0.5, 0.7)]:
            m = make_model(d, alpha)
            split = r**alpha
            v1, _ = integrate.quad(
                lambda t: density_radial(m, t, r, tol=1e-12), 0, split, limit=300
            )
            v2, _ = integrate.quad(
                lambda u: density_radial(m, 1.0 / u, r, tol=1e-12) / u**2,
                0,
                1.0 / split,
                limit=300,
            )
            x = np.zeros(d)
            y = np.zeros(d)
            y[0] = r
            assert v1 + v2 == pytest.approx(riesz_kernel(m, x, y), rel=1e-7)

    def test_scaling_homogeneity(self):
        m = make_model(3, 1.0)
        x = np.zeros(3)
        y1 = np.array([0.8, 0, 0])
        y2 = 2.0 * y1
        ratio = riesz_kernel(m, x, y2) / riesz_kernel(m, x, y1)
        assert ratio == pytest.approx(2.0 ** (m.alpha - m.d), rel=1e-12)

    def test_singularity(self):
        m = make_model(3, 1.0)
        with pytest.raises(SingularityError):
            riesz_kernel(m, np.ones(3), np.ones(3))


def test_quadrature_error_surfaces():
    # absurdly tight tolerance on a hard case must raise, not return garbage
    m = make_model(2, 0.5)
    with pytest.raises(QuadratureError):
        density_radial(m, 1e-4, 5.0, tol=1e-60)

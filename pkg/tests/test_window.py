"""Window values against an exact rational oracle and independent quadratures."""

import math
from fractions import Fraction

import numpy as np
import pytest

from littlewood.window import (P_MAX, Window, bspline_cumulative, min_p, min_p_condition,
                               phi_hat, phi_hat_decay_bound, phi_value)


def cumulative_spline_exact(x: Fraction, p: int) -> Fraction:
    """Integral of the centred order-p B-spline up to x, by truncated powers."""
    total = Fraction(0)
    for i in range(p + 1):
        y = x + Fraction(p, 2) - i
        if y > 0:
            total += (-1) ** i * math.comb(p, i) * y**p
    return total / math.factorial(p)


def phi_exact(p: int, t: Fraction) -> Fraction:
    h = Fraction(p * p, 2)
    sup = Fraction(p * p + p, p * p)
    return sup * (cumulative_spline_exact(t + h, p) - cumulative_spline_exact(t - h, p))


def phi_by_discrete_convolution(p: int, t: float, step: float = 1e-3) -> float:
    """Convolve sampled indicators p times on a grid; O(step) accurate."""
    x = np.arange(-0.5, 0.5, step) + step / 2
    box = np.ones_like(x)
    kernel = box.copy()
    for _ in range(p - 1):
        kernel = np.convolve(kernel, box) * step
    # kernel now samples M_p on a grid of spacing step centred at 0
    centres = (np.arange(kernel.size) - (kernel.size - 1) / 2) * step
    inside = np.abs(t - centres) <= p * p / 2
    return (p * p + p) / (p * p) * float(np.sum(kernel[inside]) * step)


def gl_integral(f, a, b, pieces, nodes=20):
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, pieces + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * np.sum(w * f(mid + half * x))
    return total


class TestValues:
    def test_plateau_and_outside(self):
        w = Window(4)
        assert phi_value(w, 0.0) == 1.25
        assert phi_value(w, 10.0) == 0.0 and phi_value(w, -10.0) == 0.0
        assert phi_value(w, 6.0) == 1.25

    @pytest.mark.parametrize("p", [2, 3, 4, 8, 13])
    def test_against_exact_rationals(self, p):
        w = Window(p)
        ts = [Fraction(k, 7) for k in range(-7 * (p * p + p) // 2 - 3,
                                           7 * (p * p + p) // 2 + 4)]
        got = phi_value(w, np.array([float(t) for t in ts]))
        want = np.array([float(phi_exact(p, t)) for t in ts])
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_transition_point_three_ways(self):
        w = Window(4)
        exact = float(phi_exact(4, Fraction(8)))
        assert 0.0 < exact < 1.25
        assert phi_value(w, 8.0) == pytest.approx(exact, abs=1e-12)
        assert phi_by_discrete_convolution(4, 8.0) == pytest.approx(exact, abs=5e-3)

    def test_cumulative_limits(self):
        assert bspline_cumulative(-10.0, 5) == 0.0
        assert bspline_cumulative(10.0, 5) == 1.0
        assert bspline_cumulative(0.0, 5) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("p", [2, 4, 8, 16])
    def test_integral_and_shape(self, p):
        w = Window(p)
        half = w.half_support
        total = gl_integral(lambda t: phi_value(w, t), -half, half, int(2 * half))
        assert total == pytest.approx(p * p + p, rel=1e-12)
        t = np.linspace(-half - 1, half + 1, 2001)
        v = phi_value(w, t)
        assert np.all(v >= 0) and np.all(v <= w.sup) and w.sup <= 2.0
        np.testing.assert_array_equal(v, phi_value(w, -t))

    def test_large_order_is_stable(self):
        w = Window(P_MAX)
        t = np.linspace(0, w.half_support, 4001)
        v = phi_value(w, t)
        assert np.all(np.diff(v) <= 1e-12)
        assert v[0] == w.sup and v[-1] == 0.0

    @pytest.mark.parametrize("p", [1, 65, 2.5])
    def test_order_validated(self, p):
        with pytest.raises(ValueError):
            Window(p)


class TestTransform:
    def test_at_zero(self):
        assert phi_hat(Window(4), 0.0) == 20.0
        assert phi_hat(Window(4), 1e-9) == pytest.approx(20.0, rel=1e-15)

    @pytest.mark.parametrize("k", [1, 3, 5, 7, 15])
    def test_zeros_of_first_factor(self, k):
        assert abs(phi_hat(Window(4), k / 16)) < 1e-13

    def test_decay_example(self):
        w = Window(4)
        assert abs(phi_hat(w, 2.3)) <= 20 / (math.pi * 2.3) ** 4

    @pytest.mark.parametrize("p", [4, 8])
    def test_closed_form_against_quadrature(self, p, rng):
        w = Window(p)
        half = w.half_support
        for lam in rng.uniform(-5, 5, size=50):
            # phi is even, so only the cosine part survives
            numeric = gl_integral(lambda t: phi_value(w, t) * np.cos(2 * np.pi * lam * t),
                                  -half, half, int(8 * half))
            assert phi_hat(w, lam) == pytest.approx(numeric, abs=1e-8)

    @pytest.mark.parametrize("p", [2, 4, 8, 12])
    def test_decay_bound_everywhere(self, p):
        w = Window(p)
        lam = np.concatenate([np.linspace(1, 40, 20000), -np.linspace(1, 40, 777)])
        assert np.all(np.abs(phi_hat(w, lam)) <= phi_hat_decay_bound(w, lam) * (1 + 1e-12))

    def test_even(self, rng):
        lam = rng.uniform(-10, 10, 100)
        np.testing.assert_array_equal(phi_hat(Window(8), lam), phi_hat(Window(8), -lam))


def smallest_order_by_scan(delta):
    p = 2
    while 4 * delta * (p * p + p) / (min(1, delta - 1) * math.pi**p) > 0.25:
        p += 1
    return p


class TestMinP:
    def test_delta_four(self):
        assert min_p(4) == 8

    @pytest.mark.parametrize("delta", [2, 3, 4, 5, 8, 16, 100, 1000])
    def test_scan(self, delta):
        assert min_p(delta) == smallest_order_by_scan(delta)
        assert min_p_condition(min_p(delta), delta) <= 0.25
        assert min_p_condition(min_p(delta) - 1, delta) > 0.25

    def test_delta_two_and_growth(self):
        p = min_p(2)
        assert 8 * (p * p + p) <= math.pi**p / 4
        assert min_p(100) >= min_p(4) - 2

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from conftest import harmonic_sum, unit_gap_sum
from littlewood.errors import GapViolated, HypothesisViolated
from littlewood.inequalities import (CheckResult, InghamWindow, curve_length,
                                     curve_length_bound, curve_trace, dirichlet_l1,
                                     hilbert_check, ingham_l2_check, ingham_l2_constant,
                                     ingham_linfty_check, ingham_weak_constant,
                                     progression_l1, theoremAA_check,
                                     unimodular_log_check)
from littlewood.model import ExponentialSum, normalize_affine
from littlewood.quadrature import besicovitch_l1


def midpoint_kernel_l1(m, points=10**6):
    t = -0.5 + (np.arange(points) + 0.5) / points
    return float(np.mean(np.abs(np.sin(m * np.pi * t) / np.sin(np.pi * t))))


class TestCheckResult:
    def test_margin_sign_follows_sense(self):
        assert CheckResult("x", 2.0, 1.0).margin == 1.0
        assert CheckResult("x", 2.0, 1.0, sense="<=").margin == -1.0
        assert not CheckResult("x", 2.0, 1.0, sense="<=").passed

    def test_tolerance(self):
        assert CheckResult("x", 1.0 - 5e-8, 1.0).passed
        assert not CheckResult("x", 1.0 - 5e-7, 1.0).passed
        assert CheckResult("x", 1.0 - 5e-7, 1.0, tol=1e-6).passed


class TestHilbert:
    def test_single(self):
        r = hilbert_check([2.0], [0.0])
        assert r.lhs == 0.0 and r.rhs == pytest.approx(4 * math.pi) and r.passed

    def test_real_pair_cancels(self):
        r = hilbert_check([1.0, 1.0], [0.0, 1.0])
        assert r.lhs == 0.0 and r.rhs == pytest.approx(2 * math.pi)

    def test_against_double_loop(self, rng):
        z = rng.normal(size=9) + 1j * rng.normal(size=9)
        lam = np.cumsum(1 + rng.exponential(size=9))
        direct = sum(z[k] * np.conj(z[l]) / (lam[k] - lam[l])
                     for k in range(9) for l in range(9) if k != l)
        assert hilbert_check(z, lam).lhs == pytest.approx(abs(direct), rel=1e-12)

    def test_random_suite(self, rng):
        for i in range(500):
            s = unit_gap_sum(10_000 + i, int(rng.integers(1, 65)))
            assert hilbert_check(s.coeffs, s.lambdas).passed

    def test_gap_violation_flagged_not_raised(self):
        r = hilbert_check([1, 1j], [0.0, 0.5])
        assert not r.hypothesis_ok and "separation" in r.details

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 30), st.floats(0, 2 * math.pi), st.integers(0, 10**6))
    def test_phase_rotation_invariant(self, N, theta, seed):
        s = unit_gap_sum(seed, N)
        a = hilbert_check(s.coeffs, s.lambdas).lhs
        b = hilbert_check(s.coeffs * np.exp(1j * theta), s.lambdas).lhs
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12)


class TestInghamWindow:
    def test_H_hat_is_transform_of_half_cosine(self, rng):
        for xi in rng.uniform(-4, 4, 20).tolist() + [0.5, -0.5, 1.5]:
            val, _ = quad(lambda t: math.cos(math.pi * t) * math.cos(2 * math.pi * xi * t),
                          -0.5, 0.5, epsabs=1e-14)
            assert InghamWindow.H_hat(xi) == pytest.approx(val, abs=1e-12)
        assert InghamWindow.H_hat(0.0) == pytest.approx(2 / math.pi)
        assert InghamWindow.H_hat(0.5) == pytest.approx(0.5)

    @pytest.mark.parametrize("T", [1.05, 1.5, 2.0, 3.3, 10.0])
    def test_sign_pattern(self, T):
        w = InghamWindow(T)
        xi = np.linspace(-2 * T, 2 * T, 10_000)
        g = w.G_hat(xi)
        inside = np.abs(xi) <= T / 2
        assert np.all(g[inside] >= -1e-12)
        assert np.all(g[~inside] <= 1e-12)
        strictly_out = (~inside) & (np.abs(np.abs(xi) % 1 - 0.5) > 1e-3)
        assert np.all(g[strictly_out & (np.abs(xi) > T / 2 + 1e-3)] < 0)
        assert np.all(g[inside] <= 4 * T * T * (1 + 1e-12))

    @pytest.mark.parametrize("T", [1.2, 2.0, 7.0])
    def test_value_at_zero_from_time_domain(self, T):
        # G = pi^2 T^2 (H * H) + (H' * H'), with H = cos(pi t) on [-1/2, 1/2]
        hh, _ = quad(lambda s: math.cos(math.pi * s) ** 2, -0.5, 0.5)
        dd, _ = quad(lambda s: -(math.pi * math.sin(math.pi * s)) ** 2, -0.5, 0.5)
        assert InghamWindow(T).G_at_zero() == pytest.approx(math.pi**2 * T * T * hh + dd,
                                                            rel=1e-12)

    def test_rejects_short_window(self):
        with pytest.raises(ValueError):
            InghamWindow(1.0)


class TestInghamL2:
    def test_constant(self):
        assert ingham_l2_constant(2.0) == pytest.approx(3 * math.pi**2 / 64)
        assert ingham_l2_constant(1.5) == pytest.approx(math.pi**2 / 8 * 1.25 / 3.375)
        assert ingham_l2_constant(1.5) == pytest.approx(0.4570, abs=1e-4)
        assert ingham_l2_constant(1 + 1e-9) < 1e-8
        assert ingham_l2_constant(50.0) == 3 * math.pi**2 / 64
        with pytest.raises(ValueError):
            ingham_l2_constant(1.0)

    def test_weak_chain_below_theorem(self):
        for T in (6.0, 10.0, 100.0):
            assert ingham_weak_constant(T) <= ingham_l2_constant(T)

    def test_single(self):
        r = ingham_l2_check(ExponentialSum([0.2], [3.0]), 1.7)
        assert r.lhs == pytest.approx(9.0) and r.passed

    def test_random_suite(self, rng):
        for i in range(400):
            T = (1.2, 2.0, 5.0, 10.0)[i % 4]
            s = unit_gap_sum(20_000 + i, int(rng.integers(1, 65)))
            assert ingham_l2_check(s, T).passed

    def test_quadrature_route_agrees(self):
        s = unit_gap_sum(5, 9)
        a = ingham_l2_check(s, 3.0)
        b = ingham_l2_check(s, 3.0, use_exact_gram=False)
        assert b.lhs == pytest.approx(a.lhs, rel=1e-9)

    def test_mean_square_ratio_shrinks_towards_unit_window(self):
        # C(T) -> 0 as T -> 1, so compare the normalised mean square itself
        def worst(T):
            out = []
            for i in range(200):
                rng = np.random.default_rng(i)
                s = unit_gap_sum(i, int(rng.integers(1, 65)), jitter=0.2)
                out.append(ingham_l2_check(s, T).lhs / np.sum(s.abs_coeffs**2))
            return min(out)
        assert worst(1.05) < worst(2.0)

    def test_gap_violation(self):
        with pytest.raises(GapViolated, match="index 1"):
            ingham_l2_check(ExponentialSum([0, 0.9], [1, 1]), 2.0)


class TestInghamLinf:
    def test_single(self):
        r = ingham_linfty_check(ExponentialSum([0.0], [1.0]), 2.0)
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(0.75 * 2 / math.pi)

    def test_dirichlet_21(self):
        assert ingham_linfty_check(harmonic_sum(np.arange(-10, 11)), 2.0).passed

    def test_random(self, rng):
        for i in range(200):
            s = unit_gap_sum(30_000 + i, int(rng.integers(1, 17)))
            assert ingham_linfty_check(s, float(rng.uniform(1.1, 6.0))).passed


class TestDirichlet:
    def test_zero(self):
        assert dirichlet_l1(0) == 1.0

    @pytest.mark.parametrize("N", [1, 10, 57])
    def test_against_midpoint(self, N):
        assert dirichlet_l1(N) == pytest.approx(midpoint_kernel_l1(2 * N + 1), rel=1e-7)

    def test_lebesgue_constant(self):
        assert dirichlet_l1(1) == pytest.approx(1 / 3 + 2 * math.sqrt(3) / math.pi, rel=1e-14)

    @pytest.mark.parametrize("N", [10, 100])
    def test_lower_bound(self, N):
        assert dirichlet_l1(N) >= 4 / math.pi**2 * math.log(N)

    def test_logarithmic_trend(self):
        # L_N - (4/pi^2) ln N settles to a constant
        d = [dirichlet_l1(N) - 4 / math.pi**2 * math.log(N) for N in (1000, 4000, 16000)]
        assert abs(d[1] - d[0]) < 1e-3 and abs(d[2] - d[1]) < 3e-4

    def test_one_sided_matches_besicovitch(self):
        s = harmonic_sum(np.arange(1, 101))
        assert besicovitch_l1(s).value == pytest.approx(progression_l1(100), rel=1e-9)

    def test_node_count_converged(self):
        from littlewood.inequalities import _sine_ratio_l1
        assert _sine_ratio_l1(2001, 64) == pytest.approx(_sine_ratio_l1(2001, 32), rel=1e-13)


class TestMeanLowerBounds:
    def test_single_variant_i(self):
        r = theoremAA_check(ExponentialSum([0.0], [3.0]), "i")
        assert r.lhs == 3.0 and r.rhs == pytest.approx(3.0 / 52) and r.passed

    def test_progression_variant_ii(self):
        r = theoremAA_check(harmonic_sum(np.arange(1, 65)), "ii")
        assert r.rhs == pytest.approx(4 / math.pi**3 * math.log(64)) == 0.5365214438665014
        assert r.passed and "period=1" in r.details

    def test_jittered_variant_iii(self, rng):
        k = np.arange(1, 33)
        lam = np.sort(k + 0.3 * np.modf(k * math.sqrt(2))[0])
        s, _, _ = normalize_affine(ExponentialSum(lam, np.exp(2j * np.pi * rng.uniform(size=32))))
        assert theoremAA_check(s, "iii", T=72.0).passed

    def test_harmonic_recovery(self, rng):
        for i in range(20):
            N = int(rng.integers(1, 40))
            lam = np.sort(rng.choice(200, size=N, replace=False))
            s = ExponentialSum(lam, rng.normal(size=N) + 1j * rng.normal(size=N))
            r = theoremAA_check(s, "i")
            assert r.passed and "period=1" in r.details

    def test_irrational_variant_i_flags_convergence(self):
        s = ExponentialSum([0.0, math.sqrt(2), 1 + math.sqrt(3)], [1, 1, 1])
        r = theoremAA_check(s, "i")
        assert r.passed and "converged=True" in r.details

    def test_hypotheses(self):
        with pytest.raises(HypothesisViolated, match="index 2"):
            theoremAA_check(ExponentialSum([0, 1], [1, 0.5]), "ii")
        with pytest.raises(HypothesisViolated):
            theoremAA_check(harmonic_sum([0, 1]), "iii", T=50.0)
        with pytest.raises(GapViolated):
            theoremAA_check(harmonic_sum([0, 0.5]), "iii")
        with pytest.raises(ValueError):
            theoremAA_check(harmonic_sum([0, 1]), "iv")

    @pytest.mark.parametrize("N", [8, 32, 128, 512])
    def test_unimodular_log_form(self, N):
        r = unimodular_log_check(harmonic_sum(np.arange(1, N + 1)))
        assert r.passed and r.rhs == pytest.approx(0.1296 * math.log1p(88 * N))


class TestCurve:
    def test_circle(self):
        s = ExponentialSum([1.5], [2.0])
        assert curve_length(s, 7.0).value == pytest.approx(2 * math.pi * 1.5 * 2.0 * 7.0, rel=1e-8)
        r = curve_length_bound(ExponentialSum([1.0], [1.0]), 72.0)
        assert r.lhs == pytest.approx(2 * math.pi * 72) and r.rhs == pytest.approx(72 / 244)

    def test_figure_curve(self):
        s = ExponentialSum([0.0, 1.0, 10 / math.pi], [1, 1, 1])
        r = curve_length_bound(s, 72.0)
        assert r.passed
        # arc length is at most the sum of the circle lengths
        assert r.lhs <= 72 * 2 * math.pi * (1 + 10 / math.pi)
        printed = curve_length_bound(s, 72.0, as_printed=True)
        assert printed.rhs == pytest.approx(72 / 20 * (0 / 1 + 1 / 2 + 10 / math.pi / 3))

    def test_random(self, rng):
        for i in range(5):
            assert curve_length_bound(unit_gap_sum(40_000 + i, 10), 72.0).passed

    def test_trace(self):
        t, P = curve_trace(harmonic_sum([0.0, 1.0]), 5.0, 11)
        assert t[0] == 0 and t[-1] == 5.0
        np.testing.assert_allclose(P, 1 + np.exp(2j * np.pi * t), atol=1e-14)

    def test_short_window_rejected(self):
        with pytest.raises(HypothesisViolated):
            curve_length_bound(harmonic_sum([0.0]), 5.0)

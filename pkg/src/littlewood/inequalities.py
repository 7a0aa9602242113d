"""Checkers for the classical inequalities around the L1 lower bound.

Every checker returns a :class:`CheckResult`.  A result records a
comparison ``lhs >= rhs`` (``sense=">="``) or ``lhs <= rhs``
(``sense="<="``); ``margin`` is the signed slack in the direction of the
claim, so ``pass`` is always ``margin >= -tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GapViolated, HypothesisViolated, InputError
from .model import ExponentialSum, first_gap_violation
from .quadrature import (
    QuadratureConfig,
    besicovitch_l1,
    eval_sum,
    l1_integral,
    l1_norm_interval,
    l2_norm_sq_interval_exact,
    l2_sq_integral,
)
from .constants import unimodular_log_bound

DEFAULT_TOL = 1e-7

# constants on the right-hand sides
HARMONIC_CONSTANT = 1.0 / 26.0
UNIMODULAR_CONSTANT = 4.0 / math.pi**3
FINITE_T_CONSTANT = 1.0 / 122.0
FINITE_T_MIN = 72.0
CURVE_CONSTANT_AS_PRINTED = 1.0 / 20.0
# |exp(i theta)| can round to 1 - ulp
_UNIT_SLACK = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    lhs: float
    rhs: float
    sense: str = ">="
    tol: float = DEFAULT_TOL
    hypothesis_ok: bool = True
    details: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs if self.sense == ">=" else self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return bool(self.margin >= -self.tol)

    def row(self) -> tuple:
        return (self.name, self.lhs, self.rhs, self.margin, self.passed)


def _require_unit_gaps(s: ExponentialSum, gamma: float = 1.0):
    k = first_gap_violation(s, gamma)
    if k is not None:
        raise GapViolated(f"gap < {gamma:g} at index {k}", index=k)


# ------------------------------------------------------------------ Hilbert

def hilbert_form(z, lambdas) -> complex:
    """sum_{k != l} z_k conj(z_l) / (lambda_k - lambda_l)."""
    z = np.asarray(z, dtype=complex)
    lam = np.asarray(lambdas, dtype=float)
    diff = np.subtract.outer(lam, lam)
    np.fill_diagonal(diff, np.inf)
    return complex(z @ (1.0 / diff) @ np.conj(z))


def hilbert_check(z, lambdas, tol: float = DEFAULT_TOL) -> CheckResult:
    """|sum_{k != l} z_k conj(z_l)/(lambda_k - lambda_l)| <= pi sum |z_k|^2.

    A separation below 1 does not raise: the form is still evaluated and the
    result carries ``hypothesis_ok=False``.
    """
    z = np.asarray(z, dtype=complex).ravel()
    lam = np.asarray(lambdas, dtype=float).ravel()
    if z.size != lam.size or z.size == 0:
        raise InputError("z and lambdas must be non-empty and of equal length")
    lhs = abs(hilbert_form(z, lam)) if z.size > 1 else 0.0
    rhs = math.pi * float(np.sum(np.abs(z) ** 2))
    sep = float(np.min(np.diff(np.sort(lam)))) if lam.size > 1 else math.inf
    ok = sep >= 1.0
    details = "" if ok else f"separation {sep:.6g} < 1"
    return CheckResult("hilbert", lhs, rhs, "<=", tol, ok, details)


# ------------------------------------------------------------------ Ingham

@dataclass(frozen=True)
class InghamWindow:
    """Fourier-side objects of the Ingham minorant for a window length T > 1."""

    T: float

    def __post_init__(self):
        if not self.T > 1:
            raise ValueError(f"T must exceed 1, got {self.T!r}")

    @staticmethod
    def H_hat(xi):
        """(2/pi) cos(pi xi)/(1 - 4 xi^2), written as a sinc pair to stay finite at +-1/2."""
        xi = np.asarray(xi, dtype=float)
        return 0.5 * (np.sinc(xi - 0.5) + np.sinc(xi + 0.5))

    def G_hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        return math.pi**2 * (self.T**2 - 4.0 * xi * xi) * self.H_hat(xi) ** 2

    def G_at_zero(self) -> float:
        return 0.5 * math.pi**2 * (self.T**2 - 1.0)


def ingham_l2_constant(T: float) -> float:
    """C(T) = (pi^2/8)(T^2-1)/T^3 on (1, 2], 3 pi^2/64 from 2 on."""
    if not T > 1:
        raise ValueError(f"the Ingham constant needs T > 1, got {T!r}")
    if T <= 2:
        return math.pi**2 / 8.0 * (T * T - 1.0) / T**3
    return 3.0 * math.pi**2 / 64.0


def ingham_weak_constant(T: float) -> float:
    """The cruder pi^2/32 that the direct argument gives for T >= 6."""
    if not T >= 6:
        raise ValueError("the weak chain is stated for T >= 6")
    return math.pi**2 / 32.0


def ingham_l2_check(s: ExponentialSum, T: float, use_exact_gram: bool = True,
                    cfg: QuadratureConfig | None = None,
                    tol: float = DEFAULT_TOL) -> CheckResult:
    """(1/T) int_{-T/2}^{T/2} |Phi|^2 >= C(T) sum |a_k|^2."""
    _require_unit_gaps(s)
    C = ingham_l2_constant(T)
    if use_exact_gram:
        lhs = l2_norm_sq_interval_exact(s, T) / T
    else:
        lhs = l2_sq_integral(s, -T / 2.0, T / 2.0, cfg).value / T
    rhs = C * float(np.sum(s.abs_coeffs**2))
    return CheckResult("ingham-l2", lhs, rhs, ">=", tol, True, f"T={T:g} C={C:.17g}")


def ingham_linfty_check(s: ExponentialSum, T: float,
                        cfg: QuadratureConfig | None = None,
                        tol: float = DEFAULT_TOL) -> CheckResult:
    """(1/T) int_{-T/2}^{T/2} |Phi| >= (2/pi)(T^2-1)/T^2 max |a_k|."""
    _require_unit_gaps(s)
    if not T > 1:
        raise ValueError(f"T must exceed 1, got {T!r}")
    est = l1_norm_interval(s, T, cfg)
    lhs = est.value / T
    rhs = 2.0 / math.pi * (T * T - 1.0) / (T * T) * float(np.max(s.abs_coeffs))
    return CheckResult("ingham-linf", lhs, rhs, ">=", tol, True,
                       f"T={T:g} converged={est.converged}")


# ------------------------------------------------------------ harmonic sums

def _sine_ratio_l1(m: int, nodes: int = 32) -> float:
    """int_{-1/2}^{1/2} |sin(m pi t)/sin(pi t)| dt, one Gauss-Legendre rule per lobe."""
    if m == 1:
        return 1.0
    x, w = np.polynomial.legendre.leggauss(nodes)
    # lobes between consecutive zeros k/m on [0, 1/2]
    edges = np.unique(np.append(np.arange(0, m // 2 + 1) / m, 0.5))
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    t = (a + half)[:, None] + half[:, None] * x[None, :]
    vals = np.abs(np.sin(m * np.pi * t) / np.sin(np.pi * t))
    return float(2.0 * np.sum(half[:, None] * w[None, :] * vals))


def dirichlet_l1(N: int) -> float:
    """int_{-1/2}^{1/2} |sum_{|k| <= N} e(k t)| dt."""
    if int(N) != N or N < 0:
        raise ValueError(f"N must be a non-negative integer, got {N!r}")
    return _sine_ratio_l1(2 * int(N) + 1)


def progression_l1(N: int) -> float:
    """int_0^1 |sum_{k=1}^N e(k t)| dt, the one-sided progression."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return _sine_ratio_l1(int(N))


# ------------------------------------------------------ main lower bounds

def harmonic_weight(s: ExponentialSum) -> float:
    """sum_k |a_k|/(k+1)."""
    k = np.arange(1, s.N + 1)
    return float(np.sum(s.abs_coeffs / (k + 1)))


def theoremAA_check(s: ExponentialSum, variant: str, T: float | None = None,
                    cfg: QuadratureConfig | None = None,
                    tol: float = DEFAULT_TOL) -> CheckResult:
    """Lower bounds on the mean of |Phi|.

    ``"i"``
        Besicovitch mean >= (1/26) sum |a_k|/(k+1), frequencies distinct.
    ``"ii"``
        Besicovitch mean >= (4/pi^3) ln N when every |a_k| >= 1.
    ``"iii"``
        (1/T) int_{-T/2}^{T/2} |Phi| >= (1/122) sum |a_k|/(k+1), for T >= 72
        and unit gaps.

    Besicovitch means are exact for rational frequencies and otherwise
    truncated at T = 2^12; the flag lands in ``details``.
    """
    if variant in ("i", "ii"):
        small = s.abs_coeffs < 1.0 - _UNIT_SLACK
        if variant == "ii" and np.any(small):
            k = int(np.flatnonzero(small)[0]) + 1
            raise HypothesisViolated(f"|a_k| < 1 at index {k}", hypothesis="|a_k| >= 1")
        est = besicovitch_l1(s, cfg, T0=64.0, max_doublings=6)
        lhs = est.value
        if variant == "i":
            rhs = HARMONIC_CONSTANT * harmonic_weight(s)
        else:
            rhs = UNIMODULAR_CONSTANT * math.log(s.N)
        details = f"converged={est.converged} period={est.exact_period}"
    elif variant == "iii":
        T = FINITE_T_MIN if T is None else float(T)
        if T < FINITE_T_MIN:
            raise HypothesisViolated(f"T={T:g} below {FINITE_T_MIN:g}", hypothesis="T >= 72")
        _require_unit_gaps(s)
        est = l1_norm_interval(s, T, cfg)
        lhs = est.value / T
        rhs = FINITE_T_CONSTANT * harmonic_weight(s)
        details = f"T={T:g} converged={est.converged}"
    else:
        raise ValueError(f"variant must be 'i', 'ii' or 'iii', got {variant!r}")
    return CheckResult(f"theoremAA-{variant}", lhs, rhs, ">=", tol, True, details)


def unimodular_log_check(s: ExponentialSum, cfg: QuadratureConfig | None = None,
                         tol: float = DEFAULT_TOL) -> CheckResult:
    """Besicovitch mean >= 0.1296 ln(1 + 88 N) for |a_k| >= 1."""
    if np.any(s.abs_coeffs < 1.0 - _UNIT_SLACK):
        raise HypothesisViolated("coefficients must satisfy |a_k| >= 1",
                                 hypothesis="|a_k| >= 1")
    est = besicovitch_l1(s, cfg, T0=64.0, max_doublings=6)
    return CheckResult("unimodular-log", est.value, unimodular_log_bound(s.N), ">=", tol,
                       True, f"converged={est.converged} period={est.exact_period}")


def curve_length(s: ExponentialSum, T: float, cfg: QuadratureConfig | None = None):
    """Arc length int_0^T |P'(t)| dt of t -> P(t) as an :class:`Estimate`."""
    return l1_integral(s.derivative(), 0.0, float(T), cfg)


def curve_trace(s: ExponentialSum, T: float, samples: int = 2000):
    """``(t, P(t))`` at ``samples`` equispaced points of [0, T]."""
    t = np.linspace(0.0, float(T), int(samples))
    return t, eval_sum(s, t)


def curve_length_bound(s: ExponentialSum, T: float, as_printed: bool = False,
                       cfg: QuadratureConfig | None = None,
                       tol: float = DEFAULT_TOL) -> CheckResult:
    """Arc length over [0, T] against (T/122) sum |lambda_k| |a_k|/(k+1).

    With ``as_printed=True`` the right side is (T/20) sum |lambda_k||a_k|/k
    instead; that form is not implied by the 1/122 bound and may fail.
    """
    if T < FINITE_T_MIN:
        raise HypothesisViolated(f"T={T:g} below {FINITE_T_MIN:g}", hypothesis="T >= 72")
    _require_unit_gaps(s)
    est = curve_length(s, T, cfg)
    k = np.arange(1, s.N + 1)
    weighted = np.abs(s.lambdas) * s.abs_coeffs
    if as_printed:
        rhs = T * CURVE_CONSTANT_AS_PRINTED * float(np.sum(weighted / k))
        name = "curve-length-as-printed"
    else:
        rhs = T * FINITE_T_CONSTANT * float(np.sum(weighted / (k + 1)))
        name = "curve-length"
    return CheckResult(name, est.value, rhs, ">=", tol, True,
                       f"T={T:g} converged={est.converged}")

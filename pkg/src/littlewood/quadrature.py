"""Integration of exponential sums.

Adaptive composite Gauss-Legendre for L1 means, exact sinc Gram forms for
L2, a Besicovitch-mean estimator, and DFT Fourier coefficients on I_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .errors import AliasingSuspected
from .model import ExponentialSum

_CHUNK_ENTRIES = 1 << 22
RATIONAL_DENOMINATOR_CAP = 1024
ALIASING_THRESHOLD = 1e-6
DEFAULT_GRID = 1 << 14
MAX_GRID = 1 << 20


@dataclass(frozen=True)
class QuadratureConfig:
    panel_width_cap: float = 0.25
    nodes_per_panel: int = 16
    rel_tol: float = 1e-8
    max_refinements: int = 12

    def __post_init__(self):
        if not self.panel_width_cap > 0:
            raise ValueError("panel_width_cap must be positive")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.nodes_per_panel < 1 or self.max_refinements < 0:
            raise ValueError("nodes_per_panel >= 1 and max_refinements >= 0 required")


@dataclass(frozen=True)
class Estimate:
    """A numerical value with its convergence record."""

    value: float
    converged: bool
    error: float
    trace: tuple = ()

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def _kahan_sum(terms):
    """Compensated sum over axis 0."""
    total = np.zeros(terms.shape[1:], dtype=terms.dtype)
    comp = np.zeros_like(total)
    for term in terms:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def eval_sum(s: ExponentialSum, t):
    """Phi(t) = sum_k a_k exp(2 i pi lambda_k t), by compensated direct summation."""
    t_arr = np.asarray(t, dtype=float)
    terms = s.coeffs.reshape((-1,) + (1,) * t_arr.ndim) * np.exp(
        2j * np.pi * np.multiply.outer(s.lambdas, t_arr))
    out = _kahan_sum(terms)
    return complex(out) if t_arr.ndim == 0 else out


def _bandwidth(s: ExponentialSum) -> float:
    return float(s.lambdas[-1] - s.lambdas[0])


def _panel_abs_sum(lam, a, lo, width, n_panels, nodes, power=1):
    """Gauss-Legendre sum of |sum_k a_k e(lam_k t)|**power over equal panels."""
    x, w = _gauss_legendre(nodes)
    node_phase = np.exp(2j * np.pi * np.outer(lam, x * width))  # (N, nodes)
    per_chunk = max(1, _CHUNK_ENTRIES // max(lam.size, nodes))
    partial = []
    for start in range(0, n_panels, per_chunk):
        idx = np.arange(start, min(n_panels, start + per_chunk))
        starts = lo + idx * width
        panel_phase = np.exp(2j * np.pi * np.outer(starts, lam)) * a  # (P, N)
        vals = np.abs(panel_phase @ node_phase) ** power  # (P, nodes)
        partial.append(np.sum(vals @ w))
    return float(np.sum(partial)) * width


def _adaptive_abs_integral(s, lo, hi, cfg, power):
    cfg = cfg or QuadratureConfig()
    length = hi - lo
    if not length > 0:
        raise ValueError("integration interval must have positive length")
    # |Phi| only depends on frequency differences; centring keeps phases small
    centre = 0.5 * (s.lambdas[0] + s.lambdas[-1])
    lam = s.lambdas - centre
    a = s.coeffs
    if s.N == 1:
        v = abs(a[0]) ** power * length
        return Estimate(v, True, 0.0, ((1, v),))
    width_cap = min(cfg.panel_width_cap, 1.0 / (8.0 * (_bandwidth(s) + 1.0)))
    n_panels = max(1, math.ceil(length / width_cap))
    nodes = cfg.nodes_per_panel
    trace = []
    err = math.inf
    prev = _panel_abs_sum(lam, a, lo, length / n_panels, n_panels, nodes, power)
    trace.append((n_panels, prev))
    for _ in range(cfg.max_refinements):
        n_panels *= 2
        cur = _panel_abs_sum(lam, a, lo, length / n_panels, n_panels, nodes, power)
        trace.append((n_panels, cur))
        err = abs(cur - prev)
        if err <= cfg.rel_tol * abs(cur) or cur == 0.0:
            return Estimate(cur, True, err, tuple(trace))
        prev = cur
    return Estimate(prev, False, err, tuple(trace))


def l1_integral(s: ExponentialSum, lo: float, hi: float,
                cfg: QuadratureConfig | None = None) -> Estimate:
    """Adaptive value of the integral of |Phi| over [lo, hi].

    Equal Gauss-Legendre panels no wider than 1/(8(bandwidth + 1)); the
    panel count doubles until two successive values agree to ``rel_tol``.
    """
    return _adaptive_abs_integral(s, lo, hi, cfg, 1)


def l2_sq_integral(s: ExponentialSum, lo: float, hi: float,
                   cfg: QuadratureConfig | None = None) -> Estimate:
    """Quadrature value of the integral of |Phi|^2 over [lo, hi]."""
    return _adaptive_abs_integral(s, lo, hi, cfg, 2)


def l1_norm_interval(s: ExponentialSum, T: float,
                     cfg: QuadratureConfig | None = None) -> Estimate:
    """Integral of |Phi| over [-T/2, T/2] (un-normalised; divide by T for the mean)."""
    if not T > 0:
        raise ValueError("T must be positive")
    return l1_integral(s, -T / 2.0, T / 2.0, cfg)


def sinc_kernel(mu, T: float):
    """int_{-T/2}^{T/2} exp(2 i pi mu t) dt = sin(pi mu T)/(pi mu), equal to T at 0."""
    return T * np.sinc(np.asarray(mu, dtype=float) * T)


def gram_l2_sq(lambdas, coeffs, T: float) -> float:
    """Exact int_{-T/2}^{T/2} |sum_k c_k e(lambda_k t)|^2 dt."""
    lam = np.asarray(lambdas, dtype=float)
    c = np.asarray(coeffs, dtype=complex)
    K = sinc_kernel(np.subtract.outer(lam, lam), T)
    return float(np.real(c @ K @ np.conj(c)))


def l2_norm_sq_interval_exact(s: ExponentialSum, T: float) -> float:
    if not T > 0:
        raise ValueError("T must be positive")
    return gram_l2_sq(s.lambdas, s.coeffs, T)


def common_period(lambdas, cap: int = RATIONAL_DENOMINATOR_CAP):
    """Common denominator q <= cap of the frequencies, if they are rational.

    A frequency counts as rational when its best approximation with
    denominator <= cap reproduces it to 1e-12 relative accuracy.
    """
    dens = []
    for x in np.asarray(lambdas, dtype=float):
        fr = Fraction(float(x)).limit_denominator(cap)
        if abs(float(fr) - x) > 1e-12 * max(1.0, abs(x)):
            return None
        dens.append(fr.denominator)
    q = reduce(math.lcm, dens, 1)
    return q if q <= cap else None


@dataclass(frozen=True)
class BesicovitchEstimate:
    value: float
    converged: bool
    exact_period: int | None
    trace: tuple = field(default=())


def besicovitch_l1(s: ExponentialSum, cfg: QuadratureConfig | None = None, *,
                   T0: float = 64.0, max_doublings: int = 8,
                   tol: float = 1e-3) -> BesicovitchEstimate:
    """Estimate lim (1/T) int_{-T/2}^{T/2} |Phi|.

    Rational frequencies with a small common denominator q give the exact
    mean over one period q.  Otherwise the means at T0, 2 T0, 4 T0, ... are
    computed until two successive values agree to ``tol`` (relative); the
    last value is returned with its trace and never extrapolated.
    """
    cfg = cfg or QuadratureConfig()
    if s.N == 1:
        v = float(abs(s.coeffs[0]))
        return BesicovitchEstimate(v, True, 1, ((1.0, v),))
    q = common_period(s.lambdas)
    if q is not None:
        est = l1_norm_interval(s, float(q), cfg)
        v = est.value / q
        return BesicovitchEstimate(v, est.converged, q, ((float(q), v),))
    trace = []
    T = T0
    prev = None
    ok = True
    for _ in range(max_doublings + 1):
        est = l1_norm_interval(s, T, cfg)
        ok = ok and est.converged
        mean = est.value / T
        trace.append((T, mean))
        if prev is not None and abs(mean - prev) < tol * abs(mean):
            return BesicovitchEstimate(mean, ok, None, tuple(trace))
        prev = mean
        T *= 2.0
    return BesicovitchEstimate(prev, False, None, tuple(trace))


# ------------------------------------------------------------ Fourier on I_p

@dataclass(frozen=True)
class FourierCoefficients:
    """c_s = (1/|I_p|) int_{I_p} F(t) exp(-2 i pi s t/|I_p|) dt for s in [-M/2, M/2)."""

    p: int
    M: int
    c: np.ndarray
    tail_fraction: float

    @property
    def s_values(self) -> np.ndarray:
        return np.arange(-self.M // 2, self.M // 2)

    def coef(self, s: int) -> complex:
        if not -self.M // 2 <= s < self.M // 2:
            raise IndexError(f"s={s} outside [-{self.M // 2}, {self.M // 2})")
        return complex(self.c[s + self.M // 2])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))


def interval_grid(L: float, M: int) -> np.ndarray:
    """M uniform points on [-L/2, L/2), left end included."""
    return -L / 2.0 + L * np.arange(M) / M


def grid_coefficients(values) -> np.ndarray:
    """Fourier coefficients of grid samples on [-L/2, L/2), in FFT order."""
    values = np.asarray(values)
    M = values.shape[-1]
    sign = np.where(np.fft.fftfreq(M, 1.0 / M).astype(int) % 2 == 0, 1.0, -1.0)
    return np.fft.fft(values, axis=-1) / M * sign


def grid_synthesis(coeffs_fft_order) -> np.ndarray:
    """Inverse of :func:`grid_coefficients`."""
    c = np.asarray(coeffs_fft_order)
    M = c.shape[-1]
    sign = np.where(np.fft.fftfreq(M, 1.0 / M).astype(int) % 2 == 0, 1.0, -1.0)
    return np.fft.ifft(c * sign, axis=-1) * M


def top_octave_fraction(coeffs_fft_order):
    """Share of energy with M/4 <= |s| <= M/2, along the last axis."""
    c = np.asarray(coeffs_fft_order)
    M = c.shape[-1]
    s = np.abs(np.fft.fftfreq(M, 1.0 / M))
    e = np.abs(c) ** 2
    total = np.sum(e, axis=-1)
    top = np.sum(e[..., s >= M // 4], axis=-1)
    frac = np.divide(top, total, out=np.zeros_like(total), where=total > 0)
    return float(frac) if frac.ndim == 0 else frac


def _check_grid_size(M):
    if M < 256 or M & (M - 1):
        raise ValueError(f"grid size must be a power of two >= 256, got {M}")


def fourier_coeffs_on_Ip(f, p: int, M: int | None = None,
                         strict: bool = True) -> FourierCoefficients:
    """Sample ``f`` on M uniform points of I_p and return its DFT coefficients.

    With ``M=None`` the grid starts at 2**14 and doubles until the top-octave
    energy share drops below 1e-6 (cap 2**20).  Raises
    :class:`AliasingSuspected` if the criterion is still violated, unless
    ``strict`` is false, in which case the share is only recorded in
    ``tail_fraction``.
    """
    L = float(p * p + p)
    sizes = [M] if M is not None else [DEFAULT_GRID << i for i in range(7)]
    for size in sizes:
        _check_grid_size(size)
        vals = np.asarray(f(interval_grid(L, size)), dtype=complex)
        c = grid_coefficients(vals)
        tail = top_octave_fraction(c)
        if tail <= ALIASING_THRESHOLD:
            break
    else:
        if not strict:
            return FourierCoefficients(p=p, M=size, c=np.fft.fftshift(c), tail_fraction=tail)
        raise AliasingSuspected(
            f"top-octave energy share {tail:.3g} exceeds {ALIASING_THRESHOLD:g} at M={size}",
            tail_fraction=tail)
    return FourierCoefficients(p=p, M=size, c=np.fft.fftshift(c), tail_fraction=tail)

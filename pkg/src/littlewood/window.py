"""The smoothing window phi and its Fourier transform.

    phi = ((p^2 + p)/p^2) * (1_[-p^2/2, p^2/2] * M_p)

where ``M_p`` is the p-fold autoconvolution of ``1_[-1/2, 1/2]`` (the centred
cardinal B-spline of order p).  phi is supported on I_p, of length p^2 + p,
and

    F[phi](lam) = (p^2 + p) sinc(p^2 lam) sinc(lam)^p,   sinc(x) = sin(pi x)/(pi x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

P_MAX = 64

_SINC_SWITCH = 1e-4


@dataclass(frozen=True)
class Window:
    p: int

    def __post_init__(self):
        if int(self.p) != self.p or not 2 <= self.p <= P_MAX:
            raise ValueError(f"window order p must be an integer in [2, {P_MAX}], got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def half_plateau(self) -> float:
        return self.p**2 / 2.0

    @property
    def interval_length(self) -> float:
        """|I_p| = p^2 + p."""
        return float(self.p**2 + self.p)

    @property
    def half_support(self) -> float:
        return self.interval_length / 2.0

    @property
    def sup(self) -> float:
        return (self.p**2 + self.p) / self.p**2


def cardinal_bspline_table(z, order: int) -> np.ndarray:
    """Values N_order(frac(z) + r) for r = 0..order-1.

    ``N_order`` is the cardinal B-spline with knots 0, 1, ..., order.  The
    table is built with the Cox-de Boor recursion, which only forms convex
    combinations and so stays accurate for large orders.
    """
    z = np.asarray(z, dtype=float)
    frac = (z - np.floor(z))[..., None]
    b = np.ones(z.shape + (1,))
    for o in range(2, order + 1):
        r = np.arange(o)
        left = np.concatenate([b, np.zeros(z.shape + (1,))], axis=-1)
        right = np.concatenate([np.zeros(z.shape + (1,)), b], axis=-1)
        b = ((frac + r) * left + (o - frac - r) * right) / (o - 1)
    return b


def bspline_cumulative(x, p: int) -> np.ndarray:
    """C_p(x) = integral of M_p over (-inf, x], with M_p centred of order p.

    Uses C_p(x) = sum_{i >= 0} N_{p+1}(x + p/2 - i), whose derivative
    telescopes to M_p.
    """
    x = np.asarray(x, dtype=float)
    z = x + p / 2.0
    out = np.where(z >= p + 1, 1.0, 0.0)
    inside = (z > 0) & (z < p + 1)
    if np.any(inside):
        zi = z[inside]
        table = cardinal_bspline_table(zi, p + 1)
        csum = np.cumsum(table, axis=-1)
        m = np.minimum(np.floor(zi).astype(int), p)
        out[inside] = np.take_along_axis(csum, m[:, None], axis=-1)[:, 0]
    return out


def phi_value(w: Window, t):
    """phi(t); scalar in, scalar out, array in, array out."""
    # evaluate at |t| so evenness holds bit for bit
    a = np.abs(np.asarray(t, dtype=float))
    h = w.half_plateau
    val = w.sup * (bspline_cumulative(a + h, w.p) - bspline_cumulative(a - h, w.p))
    val = np.where(a >= w.half_support, 0.0, np.clip(val, 0.0, w.sup))
    val = np.where(a <= (w.p**2 - w.p) / 2.0, w.sup, val)
    return float(val) if np.ndim(t) == 0 else val


def _sinc(x):
    """sin(pi x)/(pi x) with a Taylor branch near zero."""
    x = np.asarray(x, dtype=float)
    y = np.pi * x
    y2 = y * y
    small = np.abs(y) < _SINC_SWITCH
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sin(y) / y
    series = 1.0 - y2 / 6.0 + y2 * y2 / 120.0 - y2 * y2 * y2 / 5040.0
    return np.where(small, series, direct)


def phi_hat(w: Window, lam):
    """Closed-form F[phi](lam) = int phi(t) exp(-2 i pi lam t) dt (real, even)."""
    lam_arr = np.asarray(lam, dtype=float)
    p = w.p
    val = w.interval_length * _sinc(p * p * lam_arr) * _sinc(lam_arr) ** p
    return float(val) if np.ndim(lam) == 0 else val


def phi_hat_decay_bound(w: Window, lam):
    """|I_p| / (pi |lam|)^p, the envelope used for |lam| >= 1."""
    lam = np.abs(np.asarray(lam, dtype=float))
    return w.interval_length / (np.pi * lam) ** w.p


def min_p_condition(p: int, delta: float) -> float:
    """Left side of 4 delta (p^2+p) / (min(1, delta-1) pi^p) <= 1/4."""
    return 4.0 * delta * (p * p + p) / (min(1.0, delta - 1.0) * math.pi**p)


def min_p(delta: int) -> int:
    """Smallest window order for which the off-diagonal estimate closes."""
    if delta < 2:
        raise ValueError(f"delta must be >= 2, got {delta!r}")
    for p in range(2, P_MAX + 1):
        if min_p_condition(p, delta) <= 0.25:
            return p
    raise ValueError(f"no window order p <= {P_MAX} works for delta={delta}")

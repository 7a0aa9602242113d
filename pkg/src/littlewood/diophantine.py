"""Simultaneous rational approximation and the periodic surrogate Psi.

Given ``|lambda_k - n_k/M| < eps/M`` for all k, the periodic sum
``Psi(t) = sum a_k e(n_k t/M)`` stays within ``2 pi eps sum |a_k|`` of Phi on
[-M/2, M/2], so an L1 lower bound for Psi over one period transfers to Phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotFound
from .inequalities import DEFAULT_TOL, CheckResult
from .model import ExponentialSum
from .quadrature import QuadratureConfig, eval_sum, l1_integral

GRID_PER_UNIT = 64
REFINE_FACTOR = 4


@dataclass(frozen=True)
class RationalApproximation:
    M: int
    numerators: tuple
    eps: float
    quality: float  # max_k M |lambda_k - n_k/M|

    def frequencies(self) -> np.ndarray:
        return np.array([n / self.M for n in self.numerators], dtype=float)

    def is_valid_for(self, lambdas) -> bool:
        """Check the bound with the rationals n_k/M kept exact."""
        return all(
            abs(Fraction(float(x)) - Fraction(n, self.M)) < Fraction(self.eps) / self.M
            for x, n in zip(np.asarray(lambdas, dtype=float), self.numerators))


def _quality(lam, M):
    num = np.rint(M * lam)
    return num, float(np.max(np.abs(M * lam - num)))


def dirichlet_approx(lambdas, eps: float, M_cap: int = 10**6) -> RationalApproximation:
    """Smallest M <= M_cap with |M lambda_k - round(M lambda_k)| < eps for every k.

    Raises :class:`NotFound` carrying the best ``M`` seen when the cap is hit.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps!r}")
    if lam.size == 0 or lam.size > 8:
        raise ValueError("dirichlet_approx handles 1 to 8 frequencies")
    best = None
    for M in range(1, int(M_cap) + 1):
        num, q = _quality(lam, M)
        if best is None or q < best[1]:
            best = (M, q)
        if q < eps:
            approx = RationalApproximation(M, tuple(int(n) for n in num), float(eps), q)
            # float rounding can only matter when q sits on eps
            if approx.is_valid_for(lam):
                return approx
    M, q = best
    raise NotFound(f"no denominator up to {M_cap} reaches eps={eps}; best M={M} "
                   f"with quality {q:.6g}", best=best)


def surrogate(s: ExponentialSum, approx: RationalApproximation) -> ExponentialSum:
    """Psi: the same coefficients at the rational frequencies n_k/M."""
    return ExponentialSum(approx.frequencies(), s.coeffs)


def periodization_gap(s: ExponentialSum, approx: RationalApproximation) -> float:
    """Estimated sup of |Phi - Psi| over [-M/2, M/2].

    A uniform grid with 64 points per unit locates the peak; the two cells
    around it are resampled four times finer.
    """
    psi = surrogate(s, approx)
    M = approx.M
    n = GRID_PER_UNIT * M
    t = np.linspace(-M / 2.0, M / 2.0, n + 1)
    gap = np.abs(eval_sum(s, t) - eval_sum(psi, t))
    i = int(np.argmax(gap))
    h = t[1] - t[0]
    fine = np.linspace(t[i] - h, t[i] + h, 2 * REFINE_FACTOR + 1)
    fine = fine[(fine >= -M / 2.0) & (fine <= M / 2.0)]
    fine_gap = np.abs(eval_sum(s, fine) - eval_sum(psi, fine))
    return float(max(gap.max(), fine_gap.max()))


def periodization_bound(s: ExponentialSum, approx: RationalApproximation) -> float:
    return 2.0 * math.pi * approx.eps * float(np.sum(s.abs_coeffs))


def hl_compare(s: ExponentialSum, approx: RationalApproximation,
               cfg: QuadratureConfig | None = None,
               tol: float = DEFAULT_TOL) -> CheckResult:
    """(1/M) int |Phi| >= (1/M) int |Psi| - 2 pi eps sum |a_k| over [-M/2, M/2]."""
    M = approx.M
    lhs_est = l1_integral(s, -M / 2.0, M / 2.0, cfg)
    psi_est = l1_integral(surrogate(s, approx), -M / 2.0, M / 2.0, cfg)
    lhs = lhs_est.value / M
    rhs = psi_est.value / M - periodization_bound(s, approx)
    return CheckResult("hudson-leckband", lhs, rhs, ">=", tol, True,
                       f"M={M} eps={approx.eps:g} converged="
                       f"{lhs_est.converged and psi_est.converged}")

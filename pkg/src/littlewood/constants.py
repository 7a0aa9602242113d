"""Scalar constants of the inequality chain and their optimisation.

Here ``delta`` is a real parameter (> 1); the block construction itself
needs an integer delta and lives in :mod:`littlewood.model`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import HypothesisViolated


def E_eta(eta: float) -> float:
    """sup_{0<x<=1} x / (1 - exp(-eta x)) = 1 / (1 - exp(-eta))."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta!r}")
    return 1.0 / -math.expm1(-eta)


def eta_infinity(eps: float, delta: float) -> float:
    """Limit of the admissible eta as the window order grows."""
    return (delta - 1.0) * (math.sqrt(delta) - 1.0) * eps / (math.sqrt(2.0) * delta)


def eta_admissible(p: int, delta: int, eps: float) -> float:
    """Largest eta for which the U - V residual stays below eps * delta^{-j}.

    Uses the N-free form of the residual bound (R_0 folded into R_+):

        eps (sqrt(d) - 1)(d - 1)
        / [ 2 d sqrt(2(|I_p|+1)) (d - 1) / (e^{p-3/2} (pi/2)^p)
            + sqrt(2) d^2 (p^2+p+1)/p^2 ]

    clamped into (0, 1).
    """
    if p < 2 or delta < 2 or not 0 < eps < 1:
        raise ValueError("need p >= 2, delta >= 2 and 0 < eps < 1")
    L = p * p + p
    d = float(delta)
    tail = 2.0 * d * math.sqrt(2.0 * (L + 1)) * (d - 1.0) / (
        math.exp(p - 1.5) * (math.pi / 2.0) ** p)
    body = math.sqrt(2.0) * d * d * (p * p + p + 1) / (p * p)
    eta = eps * (math.sqrt(d) - 1.0) * (d - 1.0) / (tail + body)
    return min(max(eta, np.nextafter(0.0, 1.0)), np.nextafter(1.0, 0.0))


def eta_admissible_limit(delta: float, eps: float) -> float:
    """p -> infinity limit of :func:`eta_admissible`, i.e. eta_infinity / delta."""
    return eta_infinity(eps, delta) / delta


def objective_general(eps: float, delta: float) -> float:
    """(delta - 1) / ((1 - eps)(1 - exp(-eta_inf))): constant in front of the Besicovitch mean."""
    return (delta - 1.0) / ((1.0 - eps) * -math.expm1(-eta_infinity(eps, delta)))


def objective_unimodular(eps: float, delta: float) -> float:
    """ln(delta) / ((1 - eps)(1 - exp(-eta_inf))): inverse slope of the log N bound."""
    return math.log(delta) / ((1.0 - eps) * -math.expm1(-eta_infinity(eps, delta)))


OBJECTIVES = {"general": objective_general, "unimodular": objective_unimodular}


@dataclass(frozen=True)
class ObjectivePoint:
    eps: float
    delta: float
    eta_inf: float
    value: float


@dataclass(frozen=True)
class OptimizeResult:
    objective: str
    argmin: ObjectivePoint
    grid_argmin: ObjectivePoint
    iterations: int
    box: tuple


def _safe(f, eps, delta):
    if not (0.0 < eps < 1.0 and delta > 1.0):
        return math.inf
    try:
        v = f(eps, delta)
    except (OverflowError, ValueError, ZeroDivisionError):
        return math.inf
    return v if math.isfinite(v) and v > 0 else math.inf


def objective_grid(objective: str, grid_density: int = 200,
                   eps_range=(0.01, 0.99), delta_range=(1.01, 200.0)):
    """Objective values on a fixed grid, linear in eps and log-spaced in delta."""
    f = OBJECTIVES[objective]
    eps = np.linspace(*eps_range, grid_density)
    delta = np.geomspace(*delta_range, grid_density)
    vals = np.array([[_safe(f, e, d) for d in delta] for e in eps])
    return eps, delta, vals


def optimize(objective: str = "general", grid_density: int = 200,
             eps_range=(0.01, 0.99), delta_range=(1.01, 200.0)) -> OptimizeResult:
    """Grid scan followed by Nelder-Mead refinement from the best cell.

    Deterministic: the grid, the initial simplex and the tolerances are fixed.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; choose from {sorted(OBJECTIVES)}")
    if grid_density < 50:
        raise ValueError("grid_density must be >= 50")
    f = OBJECTIVES[objective]
    eps, delta, vals = objective_grid(objective, grid_density, eps_range, delta_range)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    e0, d0 = float(eps[i]), float(delta[j])
    lo = np.array([eps_range[0], delta_range[0]])
    hi = np.array([eps_range[1], delta_range[1]])

    def boxed(x):
        if np.any(x < lo) or np.any(x > hi):
            return math.inf
        return _safe(f, x[0], x[1])

    step = np.array([eps[1] - eps[0], d0 * (delta[1] / delta[0] - 1.0)])
    x0 = np.array([e0, d0])
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])
    res = minimize(boxed, x0, method="Nelder-Mead",
                   options=dict(initial_simplex=simplex, xatol=1e-8, fatol=1e-10,
                                maxiter=10_000, maxfev=20_000))
    e, d = float(res.x[0]), float(res.x[1])
    best = ObjectivePoint(e, d, eta_infinity(e, d), float(res.fun))
    grid_best = ObjectivePoint(e0, d0, eta_infinity(e0, d0), float(vals[i, j]))
    return OptimizeResult(objective, best, grid_best, int(res.nit),
                          (tuple(eps_range), tuple(delta_range)))


def finite_T_constant(p: int, delta: int, eps: float, eta: float) -> float:
    """Constant C with sum_k |a_k|/(k+1) <= C * (1/|I_p|) int_{I_p} |Phi|.

        C = (delta - 1) (p^2+p)/p^2 * 2L/(2L-1) * E_eta / (1 - 2L eps/(2L-1)),  L = p^2 + p.
    """
    L = p * p + p
    if eta > eta_admissible(p, delta, eps):
        raise HypothesisViolated(
            f"eta={eta} exceeds the admissible bound {eta_admissible(p, delta, eps):.6g}",
            hypothesis="eta <= eta_admissible(p, delta, eps)")
    c = 2.0 * L / (2.0 * L - 1.0)
    if not eps * c < 1.0:
        raise HypothesisViolated(
            f"eps={eps} must be below (2L-1)/(2L) = {1 / c:.6g}",
            hypothesis="eps < (2|I_p|-1)/(2|I_p|)")
    return (delta - 1) * (L / (p * p)) * c * E_eta(eta) / (1.0 - c * eps)


def block_constant(p: int, delta: int, eps: float, eta: float) -> float:
    """Same chain without the (delta - 1) factor: bounds S_block instead."""
    return finite_T_constant(p, delta, eps, eta) / (delta - 1)


def unimodular_log_bound(N: int, slope: float = 0.1296, rate: float = 88.0) -> float:
    """slope * ln(1 + rate N); the defaults are 1/7.714 and delta - 1 at the unimodular optimum."""
    return slope * math.log1p(rate * N)

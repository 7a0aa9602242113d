"""Dual witness construction and certification of the L1 lower bound.

Pipeline, for a unit-gap sum Phi = sum_k a_k e(lambda_k t):

1. phases u_k with |a_k| = a_k u_k and the block polynomial
   U = sum_j f_j,  f_j = |D_j|^{-1} sum_{k in D_j} u_k e(-lambda_k t);
2. analytic completions h_j of |f_j| on I_p (Re h_j = |f_j|);
3. the bounded witness V = F_n with F_0 = f_0, F_{j+1} = F_j e^{-eta h_{j+1}} + f_{j+1};
4. residuals of V - U against e(lambda_l t) phi(t), and the final
   inequality between S = sum_j |D_j|^{-1} sum_{D_j} |a_k| and the mean of |Phi|.

All witness functions live on one uniform grid of M points on I_p.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .constants import E_eta, eta_admissible, finite_T_constant
from .errors import HypothesisViolated
from .model import (BlockScheme, ExponentialSum, Phases, build_blocks,
                    first_gap_violation, pad_sum, weighted_sums)
from .quadrature import (DEFAULT_GRID, FourierCoefficients, QuadratureConfig,
                         grid_coefficients, grid_synthesis, interval_grid,
                         l1_norm_interval, top_octave_fraction)
from .window import Window, min_p, phi_hat, phi_value

__all__ = [
    "DualPolynomial", "build_U", "Lemma5Result", "lemma5_bound",
    "corollary6_residual", "corollary6_residual_quadrature", "analytic_completion",
    "WitnessBundle", "build_V", "prop14_residual", "eta_admissible",
    "ResidualLedger", "CertificateReport", "certify_lower_bound", "duality_residual",
]


@dataclass(frozen=True)
class DualPolynomial:
    """U(t) = sum_k w_k u_k exp(-2 i pi lambda_k t) over the padded index set."""

    scheme: BlockScheme
    lambdas: np.ndarray
    phases: Phases

    @property
    def weights(self) -> np.ndarray:
        return self.scheme.weights()

    @property
    def amplitudes(self) -> np.ndarray:
        return self.weights * self.phases.u

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        E = np.exp(-2j * np.pi * np.multiply.outer(self.lambdas, t_arr))
        out = np.tensordot(self.amplitudes, E, axes=1)
        return complex(out) if t_arr.ndim == 0 else out

    def block(self, j: int, t):
        idx = slice(self.scheme.beta[j] - 1, self.scheme.beta[j + 1] - 1)
        t_arr = np.asarray(t, dtype=float)
        E = np.exp(-2j * np.pi * np.multiply.outer(self.lambdas[idx], t_arr))
        return np.tensordot(self.amplitudes[idx], E, axes=1)


def build_U(s: ExponentialSum, scheme: BlockScheme) -> DualPolynomial:
    padded = pad_sum(s, scheme)
    return DualPolynomial(scheme, padded.lambdas, Phases.from_coeffs(padded.coeffs))


def _padded_lambdas(lambdas, scheme):
    lam = np.asarray(lambdas, dtype=float)
    extra = scheme.padded_N - lam.size
    if extra > 0:
        lam = np.concatenate([lam, lam[-1] + np.arange(1, extra + 1)])
    return lam


@dataclass(frozen=True)
class Lemma5Result:
    E: np.ndarray
    scaled: np.ndarray
    max_scaled: float
    hypothesis_ok: bool


def lemma5_bound(scheme: BlockScheme, window: Window, lambdas) -> Lemma5Result:
    """E_l = sum_j |D_j|^{-1} sum_{k in D_j, k != l} |F[phi](lambda_k - lambda_l)|.

    Evaluated exactly with the closed-form transform for every padded index;
    ``scaled`` is delta^{j_l} E_l, which the window order p >= min_p(delta)
    keeps at or below 1/2.
    """
    lam = _padded_lambdas(lambdas, scheme)
    w = scheme.weights()
    F = np.abs(phi_hat(window, np.subtract.outer(lam, lam)))
    np.fill_diagonal(F, 0.0)
    E = w @ F
    scaled = E * float(scheme.delta) ** scheme.levels()
    return Lemma5Result(E, scaled, float(scaled.max()), window.p >= min_p(scheme.delta))


def corollary6_residual(U: DualPolynomial, window: Window):
    """Per-index |(1/|I_p|) int U e(lambda_l t) phi - u_l delta^{-j_l}| and the scaled maximum.

    Uses the exact expansion sum_k w_k u_k F[phi](lambda_k - lambda_l)/|I_p|.
    Returns ``(residuals, max of residual * 2|I_p| delta^{j_l})``.
    """
    L = window.interval_length
    pairing = (U.amplitudes @ phi_hat(window, np.subtract.outer(U.lambdas, U.lambdas))) / L
    res = np.abs(pairing - U.amplitudes)
    scaled = res * 2.0 * L * float(U.scheme.delta) ** U.scheme.levels()
    return res, float(scaled.max())


def corollary6_residual_quadrature(U: DualPolynomial, window: Window, M: int = DEFAULT_GRID):
    """Same residuals as :func:`corollary6_residual`, by trapezoid quadrature on I_p."""
    L = window.interval_length
    t = interval_grid(L, M)
    weight = phi_value(window, t) / M
    Ev = np.exp(2j * np.pi * np.outer(U.lambdas, t))
    pairing = Ev @ (U(t) * weight)
    return np.abs(pairing - U.amplitudes)


def analytic_completion(abs_f, p: int, M: int | None = None):
    """Analytic completion of real grid samples on I_p.

    h = c_0 + 2 sum_{0<s<M/2} c_s e_s + c_{M/2} e_{M/2}; the Nyquist term
    keeps weight one so that Re(h) reproduces the samples exactly.

    Returns ``(coefficients, h_values)`` where ``coefficients`` describes
    ``abs_f``.
    """
    abs_f = np.asarray(abs_f, dtype=float)
    M = abs_f.shape[-1] if M is None else M
    if abs_f.shape[-1] != M:
        raise ValueError("sample count does not match M")
    c = grid_coefficients(abs_f)
    hc = np.zeros_like(c)
    hc[..., 0] = c[..., 0]
    hc[..., 1:M // 2] = 2.0 * c[..., 1:M // 2]
    hc[..., M // 2] = c[..., M // 2]
    coeffs = FourierCoefficients(p=p, M=M, c=np.fft.fftshift(c, axes=-1),
                                 tail_fraction=float(np.max(top_octave_fraction(c))))
    return coeffs, grid_synthesis(hc)


def _grid_norm(values, L):
    M = values.shape[-1]
    return np.sqrt(L / M * np.sum(np.abs(values) ** 2, axis=-1))


@dataclass
class WitnessBundle:
    """Everything built on the grid for one (sum, scheme, window, eta)."""

    scheme: BlockScheme
    window: Window
    phases: Phases
    eta: float
    grid: np.ndarray
    lambdas: np.ndarray
    U_vals: np.ndarray
    V_vals: np.ndarray
    f_vals: np.ndarray
    h_vals: np.ndarray
    h_coeffs: list
    E_eta: float
    F_sup: np.ndarray
    expansion_gap: float
    f_l2: np.ndarray
    h_l2: np.ndarray
    H_l2: dict
    g_minus_1_l2: dict
    g_negative_max: float
    tail_fractions: np.ndarray = field(default=None)

    @property
    def M(self) -> int:
        return self.grid.size

    @property
    def witness_sup(self) -> float:
        return float(np.max(np.abs(self.V_vals)))


def build_V(s: ExponentialSum, scheme: BlockScheme, window: Window, eta: float,
            M: int = DEFAULT_GRID) -> WitnessBundle:
    """Build U, f_j, h_j and the corrected witness V on an M-point grid of I_p.

    Both the recursion F_{j+1} = F_j e^{-eta h_{j+1}} + f_{j+1} and the
    expanded form F_k = sum_{j<=k} f_j e^{-eta H_{j,k}} are evaluated; their
    largest pointwise disagreement over all k is ``expansion_gap``.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta!r}")
    if M < 256 or M & (M - 1):
        raise ValueError(f"grid size must be a power of two >= 256, got {M}")
    U = build_U(s, scheme)
    L = window.interval_length
    t = interval_grid(L, M)
    amp = U.amplitudes
    n = scheme.n
    f_vals = np.empty((n + 1, M), dtype=complex)
    for j in range(n + 1):
        lo, hi = scheme.beta[j] - 1, scheme.beta[j + 1] - 1
        f_vals[j] = amp[lo:hi] @ np.exp(-2j * np.pi * np.outer(U.lambdas[lo:hi], t))
    abs_f = np.abs(f_vals)
    coeffs, h_vals = analytic_completion(abs_f, window.p, M)
    h_coeffs = [FourierCoefficients(window.p, M, coeffs.c[j],
                                    top_octave_fraction(np.fft.ifftshift(coeffs.c[j])))
                for j in range(n + 1)]

    # recursion
    F = f_vals[0].copy()
    F_sup = [float(np.max(np.abs(F)))]
    F_hist = [F.copy()]
    for j in range(1, n + 1):
        F = F * np.exp(-eta * h_vals[j]) + f_vals[j]
        F_sup.append(float(np.max(np.abs(F))))
        F_hist.append(F.copy())
    V_vals = F

    # expanded form and the H / g norms
    H_l2, g_l2 = {}, {}
    gap = 0.0
    g_neg = 0.0
    for k in range(n + 1):
        H = np.zeros(M, dtype=complex)
        Fk = f_vals[k].copy()
        for j in range(k - 1, -1, -1):
            H = H + h_vals[j + 1]
            g = np.exp(-eta * H)
            Fk += f_vals[j] * g
            H_l2[(j, k)] = float(_grid_norm(H, L))
            g_l2[(j, k)] = float(_grid_norm(g - 1.0, L))
            if k == n:
                cg = grid_coefficients(g - 1.0)
                neg = np.abs(cg[M // 2 + 1:])
                g_neg = max(g_neg, float(neg.max()) if neg.size else 0.0)
        gap = max(gap, float(np.max(np.abs(Fk - F_hist[k]))))

    return WitnessBundle(
        scheme=scheme, window=window, phases=U.phases, eta=float(eta), grid=t,
        lambdas=U.lambdas, U_vals=f_vals.sum(axis=0), V_vals=V_vals, f_vals=f_vals,
        h_vals=h_vals, h_coeffs=h_coeffs, E_eta=E_eta(eta), F_sup=np.array(F_sup),
        expansion_gap=gap, f_l2=_grid_norm(f_vals, L), h_l2=_grid_norm(h_vals, L),
        H_l2=H_l2, g_minus_1_l2=g_l2, g_negative_max=g_neg,
        tail_fractions=np.array([c.tail_fraction for c in h_coeffs]),
    )


def _phi_weights(bundle: WitnessBundle) -> np.ndarray:
    # (1/|I_p|) * trapezoid step |I_p|/M
    return phi_value(bundle.window, bundle.grid) / bundle.M


def prop14_residual(bundle: WitnessBundle):
    """|(1/|I_p|) int (U - V) e(lambda_l t) phi dt| for every padded index.

    Returns ``(residuals, max of residual * delta^{j_l})``; the latter is
    compared against eps.
    """
    diff = (bundle.U_vals - bundle.V_vals) * _phi_weights(bundle)
    Ev = np.exp(2j * np.pi * np.outer(bundle.lambdas, bundle.grid))
    res = np.abs(Ev @ diff)
    scheme = bundle.scheme
    scaled = res * float(scheme.delta) ** scheme.levels()
    return res, float(scaled.max())


def duality_residual(s: ExponentialSum, U: DualPolynomial, window: Window):
    """Exact (1/|I_p|) int U Phi phi and its relative distance to S_block."""
    L = window.interval_length
    lam = U.lambdas[: s.N]
    K = phi_hat(window, np.subtract.outer(U.lambdas, lam))
    pairing = complex(U.amplitudes @ K @ s.coeffs) / L
    S = float(np.sum(U.weights[: s.N] * np.abs(s.coeffs)))
    rel = abs(pairing - S) / S if S > 0 else 0.0
    return pairing, rel


# -------------------------------------------------------------- certificate

@dataclass(frozen=True)
class ResidualLedger:
    lemma5_max: float
    e1_max: float
    e2_max: float
    duality_rel: float


@dataclass(frozen=True)
class CertificateReport:
    measured_norm: float
    S_block: float
    S_harmonic: float
    certified_constant: float
    lower_bound: float
    ledger: ResidualLedger
    witness_sup: float
    E_eta: float
    params: dict
    checks: dict
    pairing_chain: dict
    quadrature_converged: bool
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "CertificateReport":
        d = dict(d)
        d["passed"] = d.pop("pass")
        d["ledger"] = ResidualLedger(**d["ledger"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "CertificateReport":
        return cls.from_dict(json.loads(text))


def _require(cond, message, hypothesis):
    if not cond:
        raise HypothesisViolated(message, hypothesis=hypothesis)


def certify_lower_bound(s: ExponentialSum, p: int = 8, delta: int = 4, eps: float = 0.5,
                        eta: float | None = None, cfg: QuadratureConfig | None = None,
                        M: int = DEFAULT_GRID, tol: float = 1e-9) -> CertificateReport:
    """Build the witness for ``s`` and certify the lower bound on its mean over I_p.

    Emits the inequality

        S_block <= [(p^2+p)/p^2] [2L/(2L-1)] E_eta (I/L) / (1 - 2L eps/(2L-1)),

    with I the integral of |Phi| over I_p (L = p^2 + p), and its consequence
    sum_k |a_k|/(k+1) <= finite_T_constant * I/L.  Residual checks use
    absolute slack ``tol`` for rounding.
    """
    bad = first_gap_violation(s, 1.0)
    _require(bad is None, f"gap < 1 at index {bad}", "unit gap")
    window = Window(p)
    _require(p >= min_p(delta), f"p={p} is below min_p({delta})={min_p(delta)}",
             "p >= min_p(delta)")
    limit = eta_admissible(p, delta, eps)
    if eta is None:
        eta = 0.999 * limit
    _require(0 < eta <= limit,
             f"eta={eta} exceeds the admissible bound eta_admissible({p}, {delta}, {eps})={limit:.6g}",
             "eta <= eta_admissible(p, delta, eps)")
    constant = finite_T_constant(p, delta, eps, eta)
    block_const = constant / (delta - 1)

    scheme = build_blocks(delta, s.N)
    S_block, S_harm = weighted_sums(s, scheme)
    U = build_U(s, scheme)
    l5 = lemma5_bound(scheme, window, s.lambdas)
    _, e1 = corollary6_residual(U, window)
    bundle = build_V(s, scheme, window, eta, M)
    _, e2 = prop14_residual(bundle)
    pairing_U, dual_rel = duality_residual(s, U, window)

    L = window.interval_length
    est = l1_norm_interval(s, L, cfg)
    mean = est.value / L

    # the chain evaluated on this instance
    phi_w = _phi_weights(bundle)
    Phi = np.exp(2j * np.pi * np.outer(bundle.grid, s.lambdas)) @ s.coeffs
    pair_UV = complex(np.sum((bundle.U_vals - bundle.V_vals) * Phi * phi_w))
    pair_V = complex(np.sum(bundle.V_vals * Phi * phi_w))

    checks = {
        "lemma5": l5.max_scaled <= 0.5 + tol,
        "corollary6": e1 <= 1.0 + tol,
        "prop14": e2 <= eps + tol,
        "duality": dual_rel <= 1.0 / (2.0 * L) + tol,
        "witness_sup": bundle.witness_sup <= bundle.E_eta + tol,
        "expansion": bundle.expansion_gap <= 1e-9,
        "pairing_UV": abs(pair_UV) <= eps * S_block + tol,
        "block_bound": S_block <= block_const * mean + tol,
    }
    checks = {k: bool(v) for k, v in checks.items()}
    passed = all(checks.values()) and bool(est.converged)
    lower = S_harm / constant
    return CertificateReport(
        measured_norm=mean, S_block=S_block, S_harmonic=S_harm,
        certified_constant=constant, lower_bound=lower,
        ledger=ResidualLedger(l5.max_scaled, e1, e2, dual_rel),
        witness_sup=bundle.witness_sup, E_eta=bundle.E_eta,
        params={"p": p, "delta": delta, "eps": eps, "eta": eta, "M": M, "T": L,
                "N": s.N, "padded_N": scheme.padded_N, "n": scheme.n},
        checks=checks,
        pairing_chain={"U_pairing_exact": [pairing_U.real, pairing_U.imag],
                       "UV_pairing_abs": abs(pair_UV), "V_pairing_abs": abs(pair_V)},
        quadrature_converged=est.converged,
        passed=passed,
    )

"""Exponential sums, gap checks, block schemes and the weighted sums S.

An :class:`ExponentialSum` stores frequencies ``lambdas`` (strictly
increasing) and complex amplitudes ``coeffs``; it represents

    Phi(t) = sum_k a_k exp(2 i pi lambda_k t).

Indices are 1-based in the mathematics and 0-based in the arrays: array
position ``i`` holds index ``k = i + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError

# delta**(n+1) must stay representable as a signed 64-bit index
_INDEX_CAP = 2**62


@dataclass(frozen=True)
class ExponentialSum:
    lambdas: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float).ravel()
        a = np.array(self.coeffs, dtype=complex).ravel()
        if lam.size == 0:
            raise InputError("an exponential sum needs at least one frequency")
        if lam.size != a.size:
            raise InputError(
                f"lambdas has {lam.size} entries but coeffs has {a.size}")
        bad = np.flatnonzero(~np.isfinite(lam))
        if bad.size:
            raise InputError(f"non-finite frequency at index {bad[0]}")
        bad = np.flatnonzero(~np.isfinite(a))
        if bad.size:
            raise InputError(f"non-finite coefficient at index {bad[0]}")
        steps = np.diff(lam)
        bad = np.flatnonzero(steps <= 0)
        if bad.size:
            i = int(bad[0])
            raise InputError(
                f"frequencies not strictly increasing at index {i + 1}: "
                f"{lam[i]!r} >= {lam[i + 1]!r}")
        lam.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "coeffs", a)

    @property
    def N(self) -> int:
        return int(self.lambdas.size)

    @property
    def abs_coeffs(self) -> np.ndarray:
        return np.abs(self.coeffs)

    def gaps(self) -> np.ndarray:
        return np.diff(self.lambdas)

    def min_gap(self) -> float:
        return float(self.gaps().min()) if self.N > 1 else math.inf

    def derivative(self) -> "ExponentialSum":
        """Coefficients of Phi'(t), i.e. 2 i pi lambda_k a_k."""
        return ExponentialSum(self.lambdas, 2j * math.pi * self.lambdas * self.coeffs)

    @classmethod
    def from_pairs(cls, lambdas, pairs) -> "ExponentialSum":
        pairs = np.asarray(pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise InputError("coeffs must be a list of [re, im] pairs")
        return cls(lambdas, pairs[:, 0] + 1j * pairs[:, 1])


@dataclass(frozen=True)
class Phases:
    """Unimodular ``u`` with ``|a_k| = a_k u_k``; zero coefficients get ``u_k = 1``."""

    u: np.ndarray

    @classmethod
    def from_coeffs(cls, coeffs) -> "Phases":
        a = np.asarray(coeffs, dtype=complex)
        mod = np.abs(a)
        u = np.ones_like(a)
        nz = mod > 0
        u[nz] = np.conj(a[nz]) / mod[nz]
        u.setflags(write=False)
        return cls(u)


@dataclass(frozen=True)
class BlockScheme:
    """Geometric index blocks D_j = [beta_j, beta_{j+1}) with |D_j| = delta**j."""

    delta: int
    n: int
    beta: tuple = field(repr=False)

    @property
    def padded_N(self) -> int:
        return self.beta[self.n + 1] - 1

    @property
    def blocks(self) -> list:
        return [range(self.beta[j], self.beta[j + 1]) for j in range(self.n + 1)]

    @property
    def sizes(self) -> tuple:
        return tuple(self.delta**j for j in range(self.n + 1))

    def levels(self) -> np.ndarray:
        """Level j_k of every index k = 1..padded_N (array position k-1)."""
        out = np.empty(self.padded_N, dtype=int)
        for j in range(self.n + 1):
            out[self.beta[j] - 1:self.beta[j + 1] - 1] = j
        return out

    def level_of(self, k: int) -> int:
        if not 1 <= k <= self.padded_N:
            raise IndexError(f"index {k} outside 1..{self.padded_N}")
        j = 0
        while self.beta[j + 1] <= k:
            j += 1
        return j

    def weights(self) -> np.ndarray:
        """1/|D_{j_k}| for every padded index."""
        return float(self.delta) ** (-self.levels())


def validate_gap(s: ExponentialSum, gamma: float = 1.0) -> bool:
    return bool(s.N == 1 or np.all(s.gaps() >= gamma))


def first_gap_violation(s: ExponentialSum, gamma: float = 1.0):
    """1-based index k with lambda_{k+1} - lambda_k < gamma, or None."""
    bad = np.flatnonzero(s.gaps() < gamma)
    return int(bad[0]) + 1 if bad.size else None


def normalize_affine(s: ExponentialSum, origin: float = 0.0):
    """Map lambda -> (lambda - lambda_1)/g + origin so the minimum gap becomes 1.

    Returns ``(normalized, scale, shift)`` with ``scale = g`` and
    ``shift = lambda_1``.  Besicovitch norms are unchanged by this map.
    """
    if s.N == 1:
        return s, 1.0, 0.0
    g = float(s.gaps().min())
    shift = float(s.lambdas[0])
    lam = (s.lambdas - shift) / g + origin
    d = np.diff(lam)
    if np.any(d < 1.0):
        # rounding left a gap at 1 - ulp; push points up until the float difference is >= 1
        for i in range(1, lam.size):
            if lam[i] - lam[i - 1] < 1.0:
                lam[i] = lam[i - 1] + 1.0
                while lam[i] - lam[i - 1] < 1.0:
                    lam[i] = np.nextafter(lam[i], np.inf)
    return ExponentialSum(lam, s.coeffs), g, shift


def beta_sequence(delta: int, count: int) -> tuple:
    """beta_0..beta_{count-1} with beta_0 = 1 and beta_{j+1} = beta_j + delta**j."""
    out = [1]
    for j in range(count - 1):
        out.append(out[-1] + delta**j)
    return tuple(out)


def build_blocks(delta: int, N: int, min_level: int = 2) -> BlockScheme:
    """Smallest scheme with ``beta[n+1] - 1 >= N`` and ``n >= min_level``."""
    if int(delta) != delta or delta < 2:
        raise ValueError(f"delta must be an integer >= 2, got {delta!r}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    delta = int(delta)
    n = min_level
    # beta[n+1] - 1 = 1 + delta + ... + delta**n
    while (delta**(n + 1) - 1) // (delta - 1) < N:
        n += 1
    if delta**(n + 1) > _INDEX_CAP:
        raise OverflowError(f"delta**{n + 1} exceeds the index capacity")
    return BlockScheme(delta=delta, n=n, beta=beta_sequence(delta, n + 2))


def pad_sum(s: ExponentialSum, scheme: BlockScheme) -> ExponentialSum:
    """Extend to ``scheme.padded_N`` terms with zero coefficients at lambda_N + m."""
    extra = scheme.padded_N - s.N
    if extra < 0:
        raise ValueError(f"scheme covers {scheme.padded_N} indices, sum has {s.N}")
    if extra == 0:
        return s
    lam = np.concatenate([s.lambdas, s.lambdas[-1] + np.arange(1, extra + 1)])
    a = np.concatenate([s.coeffs, np.zeros(extra, dtype=complex)])
    return ExponentialSum(lam, a)


def weighted_sums(s: ExponentialSum, scheme: BlockScheme):
    """Return ``(S_block, S_harmonic)``.

    ``S_block = sum_j |D_j|^{-1} sum_{k in D_j} |a_k|`` and
    ``S_harmonic = sum_k |a_k|/(k+1)``.
    """
    if scheme.padded_N < s.N:
        raise ValueError("scheme does not cover the sum")
    mod = s.abs_coeffs
    w = scheme.weights()[: s.N]
    k = np.arange(1, s.N + 1)
    return float(np.sum(w * mod)), float(np.sum(mod / (k + 1)))


def random_unit_gap_sum(rng: np.random.Generator, N: int, *, jitter: float = 1.0,
                        unimodular: bool = False, margin: float = 1e-9) -> ExponentialSum:
    """Random sum with consecutive gaps 1 + margin + Exp(jitter).

    ``margin`` keeps the gaps clear of 1 after floating-point accumulation.
    """
    gaps = 1.0 + margin + rng.exponential(jitter, size=N - 1)
    lam = rng.uniform(-0.5, 0.5) + np.concatenate([[0.0], np.cumsum(gaps)])
    if unimodular:
        a = np.exp(2j * np.pi * rng.uniform(size=N))
    else:
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
    return ExponentialSum(lam, a)


# ---------------------------------------------------------------- file format

def _reject_constant(name):
    raise InputError(f"non-finite literal {name} in problem file")


def parse_problem(text: str) -> ExponentialSum:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"problem file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "lambdas" not in data or "coeffs" not in data:
        raise InputError("problem file needs fields 'lambdas' and 'coeffs'")
    lam, co = data["lambdas"], data["coeffs"]
    if not isinstance(lam, list) or not isinstance(co, list):
        raise InputError("'lambdas' and 'coeffs' must be arrays")
    for i, x in enumerate(lam):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"lambdas[{i}] is not a number")
    for i, c in enumerate(co):
        if (not isinstance(c, list) or len(c) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in c)):
            raise InputError(f"coeffs[{i}] is not an [re, im] pair")
    return ExponentialSum.from_pairs(lam, co) if co else ExponentialSum(lam, [])


def load_problem(path) -> ExponentialSum:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def dump_problem(s: ExponentialSum) -> str:
    return json.dumps({
        "lambdas": [float(x) for x in s.lambdas],
        "coeffs": [[float(c.real), float(c.imag)] for c in s.coeffs],
    }, indent=1)

"""Seeded random suite over the inequality checkers.

Every instance draws from its own generator ``default_rng([seed, check, i])``,
so results do not depend on the number of worker threads; workers map over
instances in order and the row order is fixed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import inequalities as ineq
from .diophantine import dirichlet_approx, hl_compare
from .model import ExponentialSum, normalize_affine, random_unit_gap_sum

INGHAM_TS = (1.2, 2.0, 5.0, 10.0)
LINF_TS = (1.2, 2.0, 5.0)
DIRICHLET_NS = (1, 2, 4, 10, 100, 1000)
LOG_NS = (8, 16, 32, 64, 128, 256, 512)
HL_EPS = (0.2, 0.1, 0.05)

DEFAULT_COUNTS = {
    "hilbert": 200,
    "ingham-l2": 200,
    "ingham-linf": 40,
    "theoremAA-i": 20,
    "theoremAA-ii": 20,
    "theoremAA-iii": 20,
    "unimodular-log": len(LOG_NS),
    "dirichlet": len(DIRICHLET_NS),
    "hudson-leckband": len(HL_EPS),
    "curve-length": 10,
}
CHECK_NAMES = tuple(DEFAULT_COUNTS)


def thread_count() -> int:
    """Worker count from ``LWL_THREADS``; 0 or unset means one per CPU."""
    raw = os.environ.get("LWL_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("LWL_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _rational_unit_gap_sum(rng, N):
    """Unit-gap frequencies with denominator q <= 6, so the mean has an exact period."""
    q = int(rng.integers(1, 7))
    steps = q + rng.integers(0, 2 * q + 1, size=N - 1)
    lam = np.concatenate([[0], np.cumsum(steps)]) / q + int(rng.integers(-3, 4))
    a = rng.normal(size=N) + 1j * rng.normal(size=N)
    return ExponentialSum(lam, a)


def _hl_sum():
    s = ExponentialSum([0.0, math.sqrt(2.0), math.sqrt(3.0) + 1.0], [1.0, 1.0, 1.0])
    return normalize_affine(s)[0]


def _one(check, rng, i, T, tol):
    if check == "hilbert":
        N = int(rng.integers(1, 65))
        s = random_unit_gap_sum(rng, N)
        return ineq.hilbert_check(s.coeffs, s.lambdas, tol=tol)
    if check == "ingham-l2":
        t = T if T is not None else INGHAM_TS[i % len(INGHAM_TS)]
        s = random_unit_gap_sum(rng, int(rng.integers(1, 65)))
        return ineq.ingham_l2_check(s, t, tol=tol)
    if check == "ingham-linf":
        t = T if T is not None else LINF_TS[i % len(LINF_TS)]
        s = random_unit_gap_sum(rng, int(rng.integers(1, 33)))
        return ineq.ingham_linfty_check(s, t, tol=tol)
    if check == "theoremAA-i":
        s = _rational_unit_gap_sum(rng, int(rng.integers(1, 17)))
        return ineq.theoremAA_check(s, "i", tol=tol)
    if check == "theoremAA-ii":
        N = int(rng.integers(1, 65))
        lam = np.sort(rng.choice(4 * N, size=N, replace=False))
        s = ExponentialSum(lam, np.exp(2j * np.pi * rng.uniform(size=N)))
        return ineq.theoremAA_check(s, "ii", tol=tol)
    if check == "theoremAA-iii":
        s = random_unit_gap_sum(rng, int(rng.integers(1, 33)), unimodular=bool(i % 2))
        return ineq.theoremAA_check(s, "iii", T=T if T is not None else 72.0, tol=tol)
    if check == "unimodular-log":
        N = LOG_NS[i % len(LOG_NS)]
        s = ExponentialSum(np.arange(1, N + 1), np.ones(N))
        return ineq.unimodular_log_check(s, tol=tol)
    if check == "dirichlet":
        N = DIRICHLET_NS[i % len(DIRICHLET_NS)]
        return ineq.CheckResult("dirichlet", ineq.dirichlet_l1(N),
                                4.0 / math.pi**2 * math.log(N), ">=", tol, True, f"N={N}")
    if check == "hudson-leckband":
        s = _hl_sum()
        return hl_compare(s, dirichlet_approx(s.lambdas, HL_EPS[i % len(HL_EPS)]), tol=tol)
    if check == "curve-length":
        s = random_unit_gap_sum(rng, int(rng.integers(1, 17)))
        return ineq.curve_length_bound(s, T if T is not None else 72.0, tol=tol)
    raise ValueError(f"unknown check {check!r}")


def run_suite(seed: int = 0, only=None, n: int | None = None, T: float | None = None,
              tol: float = ineq.DEFAULT_TOL, threads: int | None = None):
    """Run the selected checks; returns a list of ``(row_name, CheckResult)``."""
    checks = list(only) if only else list(CHECK_NAMES)
    for c in checks:
        if c not in DEFAULT_COUNTS:
            raise ValueError(f"unknown check {c!r}; choose from {', '.join(CHECK_NAMES)}")
    jobs = []
    for c in checks:
        count = DEFAULT_COUNTS[c] if n is None else int(n)
        cid = CHECK_NAMES.index(c)
        jobs.extend((c, cid, i) for i in range(count))

    def work(job):
        c, cid, i = job
        rng = np.random.default_rng([seed, cid, i])
        return f"{c}#{i}", _one(c, rng, i, T, tol)

    threads = thread_count() if threads is None else threads
    if threads == 1:
        return [work(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, jobs))

"""Constructive L1 lower bounds for non-harmonic exponential sums."""

from .constants import E_eta, eta_admissible, finite_T_constant, optimize
from .errors import (AliasingSuspected, GapViolated, HypothesisViolated, InputError,
                     LittlewoodError, NonConvergence, NotFound)
from .model import BlockScheme, ExponentialSum, build_blocks, load_problem, normalize_affine
from .window import Window, min_p, phi_hat, phi_value
from .witness import CertificateReport, certify_lower_bound

__all__ = [
    "AliasingSuspected", "BlockScheme", "CertificateReport", "E_eta", "ExponentialSum",
    "GapViolated", "HypothesisViolated", "InputError", "LittlewoodError", "NonConvergence",
    "NotFound", "Window", "build_blocks", "certify_lower_bound", "eta_admissible",
    "finite_T_constant", "load_problem", "min_p", "normalize_affine", "optimize",
    "phi_hat", "phi_value",
]
__version__ = "0.1.0"

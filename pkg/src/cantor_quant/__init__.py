"""Optimal quantization of uniform Cantor distributions."""

from .critical import solve_all, solve_delta_crossing, solve_gamma_cvt_endpoints, solve_r0
from .cvt import check_cvt
from .distortion import DistortionResult, distortion
from .measure import cylinder, restricted_moments
from .oracle import compare, discretize, dp_optimal, lloyd
from .quantizers import Quantizer, beta_distortion_formula, build_beta, build_delta, build_gamma

__all__ = [
    "DistortionResult",
    "Quantizer",
    "beta_distortion_formula",
    "build_beta",
    "build_delta",
    "build_gamma",
    "check_cvt",
    "compare",
    "cylinder",
    "discretize",
    "distortion",
    "dp_optimal",
    "lloyd",
    "restricted_moments",
    "solve_all",
    "solve_delta_crossing",
    "solve_gamma_cvt_endpoints",
    "solve_r0",
]

"""p-adic L-invariants of weight one CM forms at irregular primes.

Capped-precision p-adic arithmetic, quadratic and biquadratic number field
data, Kubota-Leopoldt L-functions, regulator-style L-invariants, theta series
with their p-stabilizations, and truncated local algebras modelling the Hecke
ring at the irregular point.
"""

from .padic import PadicScalar
from .fields import BiquadConfig, QuadElement, QuadField
from .models import CheckResult, LInvariantReport

__all__ = ["BiquadConfig", "CheckResult", "LInvariantReport", "PadicScalar", "QuadElement", "QuadField"]

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .padic import PadicScalar


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    lhs: Optional[Any] = None
    rhs: Optional[Any] = None
    agreement: Optional[int] = None
    details: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EtaValues:
    """Values of the eta cocycles at Frobenius, recomputed from the log table."""

    eta_pbar_at_frob: PadicScalar
    eta_minus_eta_p: PadicScalar
    eta_p_plus_eta_pbar: PadicScalar


@dataclass(frozen=True)
class LInvariantReport:
    dK: int
    dF: int
    dKprime: int
    p: int
    prec: int
    slope: PadicScalar
    ell_p: PadicScalar
    ell_p_kprime: PadicScalar
    ell_minus: PadicScalar
    ell_psi: PadicScalar
    route_agreement: int
    eta: EtaValues
    linear_term: tuple[PadicScalar, PadicScalar]
    linear_term_conjectural: bool = True
    checks: tuple[CheckResult, ...] = ()


@dataclass(frozen=True)
class ZeroOrderReport:
    """Trivial zero of the cyclotomic L-function attached to ad^0 of a theta series."""

    value_at_zero: PadicScalar
    derivative: PadicScalar
    product_rule_derivative: PadicScalar
    leopoldt_value: PadicScalar
    agreement: int
    order: int


@dataclass(frozen=True)
class AlgebraDims:
    dim: int
    tangent_dim: int
    special_fiber_dim: Optional[int] = None
    socle_dim: Optional[int] = None
    artinian_certified: bool = False

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import (
    CheckFailed,
    DenominatorVanishesToPrecision,
    IncompleteTable,
    InvalidParameters,
    RoutesDisagree,
)
from .fields import (
    GUARD_DIGITS,
    SIGMAS,
    BiquadConfig,
    QuadElement,
    QuadField,
    kronecker,
    p_unit,
    split_prime,
)
from .lfunctions import (
    DirichletCharacter,
    PadicLSeries,
    classical_L_at_nonpos,
    interpolation_value,
    kl_derivative,
    leopoldt_at_one,
)
from .models import CheckResult, EtaValues, LInvariantReport, ZeroOrderReport
from .padic import PadicScalar, iwasawa_log


logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction, PadicScalar]


def _log(x: PadicScalar) -> PadicScalar:
    return iwasawa_log(x)


def _is_negligible(x: PadicScalar, prec: int) -> bool:
    return x.is_zero() or x.val >= prec


# -- slope ------------------------------------------------------------------


def slope(config: BiquadConfig) -> PadicScalar:
    """-log(u_psi)/log(tau u_psi) with u_psi = eps_F - g(eps_F) in the log-linear sense."""
    eps = config.epsF
    logs = {s: _log(config.embed(eps, s)) for s in SIGMAS}
    num = logs["1"] - logs["g"]
    den = logs["tau"] - logs["gtau"]
    if _is_negligible(den, config.prec):
        raise DenominatorVanishesToPrecision(f"log of tau(u_psi) vanishes to O({config.p}^{den.absprec})")
    value = -num / den
    logger.debug("slope at p=%d: %s", config.p, value)
    return value


# -- L_frak_p ---------------------------------------------------------------


def ell_frak_p(
    K: QuadField,
    p: int,
    place: str = "p",
    prec: int = 30,
    unit: QuadElement | None = None,
    embedding: PadicScalar | None = None,
) -> PadicScalar:
    """-log_p(iota_P(u_P)) / ord_P(u_P) for a P-unit u_P."""
    root = embedding if embedding is not None else split_prime(K, p).root(prec + GUARD_DIGITS)
    u = unit if unit is not None else p_unit(K, p, place, root, prec)
    image = (u if place == "p" else u.conj()).embed(root)
    if image.is_zero() or image.val <= 0:
        raise InvalidParameters(f"{u} has no positive valuation at the chosen place")
    value = -_log(image) / int(image.val)
    return value.with_absprec(prec)


# -- log table of the virtual y0 -----------------------------------------------


def log_table(config: BiquadConfig) -> dict[str, PadicScalar]:
    """log iota(sigma y*) for y* = (y0/m' + uP/m + wF/n - p)/2, whose only zero or pole is at v0, of order 1."""
    parts = ((config.y0, config.ordY0), (config.uP, config.ordUP), (config.wF, config.ordWF))
    table = {}
    for sigma in SIGMAS:
        total = None
        for z, order in parts:
            term = _log(config.embed(z, sigma)) / order
            total = term if total is None else total + term
        assert total is not None
        table[sigma] = total / 2
    return table


def _ell_minus_route_a(table: Mapping[str, PadicScalar]) -> PadicScalar:
    # ord_{v0}(y*) = 1
    return (table["g"] - table["gtau"]) * 2


@dataclass(frozen=True)
class UnitLogTable:
    """Externally supplied logs for a cyclic C = <g> of order n, rows indexed by g^i.

    y_logs[i] = log(g^-i y0), y_tau_logs[i] = log(tau g^-i y0). The slope is
    either given or derived from unit_logs/unit_tau_logs of a unit of F.
    """

    psi: tuple[Coefficient, ...]
    y_logs: tuple[PadicScalar, ...]
    y_tau_logs: tuple[PadicScalar, ...]
    ord_y0: int
    slope: PadicScalar | None = None
    unit_logs: tuple[PadicScalar, ...] = ()
    unit_tau_logs: tuple[PadicScalar, ...] = ()

    @property
    def n(self) -> int:
        return len(self.psi)

    def scaled(self, c: Fraction) -> UnitLogTable:
        return replace(
            self,
            y_logs=tuple(x * c for x in self.y_logs),
            y_tau_logs=tuple(x * c for x in self.y_tau_logs),
        )


def _pairing(weights: Sequence[Coefficient], values: Sequence[PadicScalar]) -> PadicScalar:
    total = None
    for w, v in zip(weights, values):
        term = v * w
        total = term if total is None else total + term
    assert total is not None
    return total


def general_regulator(table: UnitLogTable) -> PadicScalar:
    """-(sum psi(g) log(g^-1 y0) + S * sum psi(g) log(tau g^-1 y0)) / ord(y0)."""
    n = table.n
    if n == 0 or len(table.y_logs) != n or len(table.y_tau_logs) != n:
        raise IncompleteTable(f"expected {n} rows of y0 logs")
    if table.ord_y0 == 0:
        raise IncompleteTable("ord(y0) must be nonzero")
    s = table.slope
    if s is None:
        if len(table.unit_logs) != n or len(table.unit_tau_logs) != n:
            raise IncompleteTable("neither a slope nor complete unit rows were supplied")
        den = _pairing(table.psi, table.unit_tau_logs)
        if den.is_zero():
            raise DenominatorVanishesToPrecision("slope denominator vanishes")
        s = -_pairing(table.psi, table.unit_logs) / den
    value = -(_pairing(table.psi, table.y_logs) + s * _pairing(table.psi, table.y_tau_logs)) / table.ord_y0
    return value


def unit_table(config: BiquadConfig, table: Mapping[str, PadicScalar] | None = None) -> UnitLogTable:
    """The quadratic table C = {1, g}, psi = (1, -1), built from a configuration."""
    table = table if table is not None else log_table(config)
    eps = config.epsF
    return UnitLogTable(
        psi=(1, -1),
        y_logs=(table["1"], table["g"]),
        y_tau_logs=(table["tau"], table["gtau"]),
        ord_y0=1,
        unit_logs=(_log(config.embed(eps, "1")), _log(config.embed(eps, "g"))),
        unit_tau_logs=(_log(config.embed(eps, "tau")), _log(config.embed(eps, "gtau"))),
    )


def ell_minus(config: BiquadConfig) -> tuple[PadicScalar, int]:
    """Anti-cyclotomic L-invariant by the direct formula, checked against the general regulator."""
    table = log_table(config)
    route_a = _ell_minus_route_a(table)
    ell_p = ell_frak_p(config.K, config.p, "p", config.prec, config.uP, config.embedK)
    route_b = general_regulator(unit_table(config, table)) - ell_p * 2
    agreement = route_a.agreement(route_b)
    if agreement < config.prec - 4:
        raise RoutesDisagree(f"routes agree to {agreement} digits only")
    logger.info("ell_minus at p=%d: routes agree to %d digits", config.p, agreement)
    return route_a.with_absprec(config.prec), agreement


# -- Ferrero-Greenberg and Gross ------------------------------------------------


def _kprime(dKprime: int | QuadField) -> QuadField:
    return dKprime if isinstance(dKprime, QuadField) else QuadField.from_integer(dKprime)


def fg_check(dKprime: int | QuadField, p: int, prec: int = 20) -> CheckResult:
    """L'_p(eps omega, 0) against -L(eps) L(eps, 0), with L(eps) = -2 * ell_frak_p(K', p)."""
    Kp = _kprime(dKprime)
    chi = DirichletCharacter(Kp.disc).twist(1, p)
    series = PadicLSeries(chi, p, prec)
    if kronecker(Kp.disc, p) != 1:
        lhs = series.evaluate(0)
        rhs = interpolation_value(chi, 1, p, prec)
        agreement = lhs.agreement(rhs)
        return CheckResult(
            name="fg_interpolation",
            passed=agreement >= prec - 5 and not _is_negligible(rhs, prec),
            lhs=lhs,
            rhs=rhs,
            agreement=agreement,
            details={"disc": Kp.disc, "p": p, "trivial_zero": False},
        )
    lhs = kl_derivative(series, 0, prec)
    ell = ell_frak_p(Kp, p, "p", prec)
    L0 = classical_L_at_nonpos(DirichletCharacter(Kp.disc), 1)
    rhs = ell * (2 * L0)
    agreement = lhs.agreement(rhs)
    analytic = series.derivative(0)
    logger.info("fg_check disc=%d p=%d: agreement %d digits", Kp.disc, p, agreement)
    return CheckResult(
        name="fg_derivative",
        passed=agreement >= prec - 5,
        lhs=lhs,
        rhs=rhs,
        agreement=agreement,
        details={
            "disc": Kp.disc,
            "p": p,
            "trivial_zero": True,
            "ell_frak_p": ell,
            "L_at_zero": L0,
            "termwise_derivative_agreement": lhs.agreement(analytic),
        },
    )


@dataclass(frozen=True)
class GrossProduct:
    """s -> L_p(eps_K' omega, s) * L_p(eps_F, 1 - s)."""

    dKprime: int
    dF: int
    p: int
    prec: int = 20

    @cached_property
    def first(self) -> PadicLSeries:
        return PadicLSeries(DirichletCharacter(self.dKprime).twist(1, self.p), self.p, self.prec)

    @cached_property
    def second(self) -> PadicLSeries:
        return PadicLSeries(DirichletCharacter(self.dF, p=self.p), self.p, self.prec)

    def with_precision(self, prec: int) -> GrossProduct:
        return replace(self, prec=prec)

    def evaluate(self, s: Union[int, Fraction, PadicScalar]) -> PadicScalar:
        return self.first.evaluate(s) * self.second.evaluate(1 - s)


def _gross(config: BiquadConfig, prec: int | None = None) -> GrossProduct:
    return GrossProduct(config.Kprime.disc, config.F.disc, config.p, prec or config.prec)


def gross_cyclotomic(config: BiquadConfig, s: Union[int, Fraction, PadicScalar]) -> PadicScalar:
    return _gross(config).evaluate(s)


def gross_cyclotomic_derivative(config: BiquadConfig) -> PadicScalar:
    """Product rule at 0: L'_K'(0) L_F(1) - L_K'(0) L'_F(1)."""
    g = _gross(config)
    a, b = g.first, g.second
    return a.derivative(0) * b.evaluate(1) - a.evaluate(0) * b.derivative(1)


def simple_zero_check(config: BiquadConfig) -> ZeroOrderReport:
    prec = config.prec
    g = _gross(config)
    value = g.evaluate(0)
    derivative = kl_derivative(g, 0, prec)
    product_rule = gross_cyclotomic_derivative(config)
    leopoldt = leopoldt_at_one(DirichletCharacter(config.F.disc), config.p, prec)
    series_at_one = g.second.evaluate(1)
    if leopoldt.agreement(series_at_one) < prec - 2:
        raise CheckFailed("Leopoldt's formula and the series disagree at s = 1")
    vanishes = _is_negligible(value, prec - 1)
    nonzero_derivative = not _is_negligible(derivative, prec - 1)
    order = 1 if vanishes and nonzero_derivative else (0 if not vanishes else 2)
    report = ZeroOrderReport(
        value_at_zero=value,
        derivative=derivative,
        product_rule_derivative=product_rule,
        leopoldt_value=leopoldt,
        agreement=derivative.agreement(product_rule),
        order=order,
    )
    if order != 1:
        raise CheckFailed(f"expected a simple zero at s = 0, found order {order}")
    logger.info("simple zero at p=%d: derivative routes agree to %d digits", config.p, report.agreement)
    return report


# -- report ---------------------------------------------------------------------


def eta_values(config: BiquadConfig, table: Mapping[str, PadicScalar]) -> EtaValues:
    s = slope(config)
    eta_pbar = _log(config.embed(config.uP)) / config.ordUP
    eta_minus = table["g"] * 2 - s * (table["tau"] - table["gtau"])
    return EtaValues(
        eta_pbar_at_frob=eta_pbar,
        eta_minus_eta_p=eta_minus,
        eta_p_plus_eta_pbar=table["1"] + table["g"],
    )


def report(config: BiquadConfig) -> LInvariantReport:
    prec = config.prec
    table = log_table(config)
    s = slope(config)
    ell_p = ell_frak_p(config.K, config.p, "p", prec, config.uP, config.embedK)
    ell_p_kprime = ell_frak_p(config.Kprime, config.p, "p", prec, config.y0, config.embedKprime)
    ell_m, agreement = ell_minus(config)
    ell_psi = ell_m + ell_p * 2
    eta = eta_values(config, table)
    log_pbar = _log(config.embed(config.uP.conj())) / config.ordUP
    ell_psi_tau = general_regulator(unit_table(config, table))

    def check(name: str, lhs: PadicScalar, rhs: PadicScalar | int) -> CheckResult:
        digits = lhs.agreement(rhs)
        return CheckResult(name=name, passed=digits >= prec - 4, lhs=lhs, rhs=rhs, agreement=digits)

    checks = (
        check("slope_is_minus_one", s, -1),
        check("ell_psi_minus_two_ell_p", ell_psi - ell_p * 2, ell_m),
        check("eta_pbar_is_minus_ell_p", eta.eta_pbar_at_frob, -ell_p),
        check("eta_minus_eta_p", eta.eta_minus_eta_p, ell_psi_tau - ell_p),
        check("eta_p_plus_eta_pbar", eta.eta_p_plus_eta_pbar, -ell_p),
        CheckResult(
            name="ell_minus_nonzero",
            passed=not _is_negligible(ell_m, prec),
            lhs=ell_m,
        ),
    )
    for c in checks:
        if not c.passed:
            logger.warning("report check %s failed (%s digits)", c.name, c.agreement)
    logger.info(
        "report dK=%d dF=%d p=%d prec=%d: routes agree to %d digits",
        config.K.disc,
        config.F.disc,
        config.p,
        prec,
        agreement,
    )
    return LInvariantReport(
        dK=config.K.disc,
        dF=config.F.disc,
        dKprime=config.Kprime.disc,
        p=config.p,
        prec=prec,
        slope=s,
        ell_p=ell_p,
        ell_p_kprime=ell_p_kprime,
        ell_minus=ell_m,
        ell_psi=ell_psi,
        route_agreement=agreement,
        eta=eta,
        linear_term=(log_pbar, ell_m + log_pbar),
        checks=checks,
    )

from dataclasses import replace
from fractions import Fraction

import pytest

from padic_linv.errors import IncompleteTable
from padic_linv.fields import QuadField, build_biquad, split_prime
from padic_linv.linvariants import (
    UnitLogTable,
    ell_frak_p,
    ell_minus,
    fg_check,
    general_regulator,
    gross_cyclotomic,
    log_table,
    report,
    simple_zero_check,
    slope,
)
from padic_linv.padic import PadicScalar, iwasawa_log


@pytest.fixture(scope="module")
def config():
    return build_biquad(-4, 5, 29, prec=16)


def test_slope_is_minus_one(config):
    assert slope(config).agreement(-1) >= 14


def test_ell_frak_p_is_log_of_conjugate():
    K = QuadField(-4)
    root = split_prime(K, 5).root(20)
    ell = ell_frak_p(K, 5, "p", 10, embedding=root)
    # u = 2 + i and u * conj(u) = 5
    conj_image = K.element(2, Fraction(-1, 2)).embed(root)
    assert ell.agreement(iwasawa_log(conj_image)) >= 10
    assert ell.val >= 1


def test_routes_agree(config):
    value, agreement = ell_minus(config)
    assert agreement >= 12
    assert not value.is_zero()


def test_log_table_has_every_automorphism(config):
    table = log_table(config)
    assert set(table) == {"1", "g", "tau", "gtau"}


def test_report_checks_pass(config):
    rep = report(config)
    assert rep.dKprime == -20
    failed = [c.name for c in rep.checks if not c.passed]
    assert failed == []
    assert rep.linear_term_conjectural


def test_ferrero_greenberg_trivial_zero():
    result = fg_check(-4, 5, 12)
    assert result.passed
    assert result.details["trivial_zero"]
    assert result.lhs.residue(2) == 15


def test_ferrero_greenberg_without_trivial_zero():
    result = fg_check(-4, 7, 10)
    assert result.name == "fg_interpolation"
    assert result.passed
    assert result.rhs.agreement(1) >= 10


def test_general_regulator_with_given_slope():
    p, prec = 7, 10

    def x(n):
        return PadicScalar.from_rational(n, p, prec)

    table = UnitLogTable(psi=(1,), y_logs=(x(14),), y_tau_logs=(x(21),), ord_y0=2, slope=x(-1))
    assert general_regulator(table).agreement(Fraction(7, 2)) >= prec - 1


def test_general_regulator_incomplete():
    v = PadicScalar.from_rational(7, 7, 10)
    with pytest.raises(IncompleteTable):
        general_regulator(UnitLogTable(psi=(1, -1), y_logs=(v,), y_tau_logs=(v, v), ord_y0=1))
    with pytest.raises(IncompleteTable):
        general_regulator(UnitLogTable(psi=(1,), y_logs=(v,), y_tau_logs=(v,), ord_y0=1))


def test_ell_frak_p_ignores_torsion_and_powers():
    K = QuadField(-4)
    root = split_prime(K, 5).root(20)
    u = K.element(2, Fraction(1, 2))
    i = K.element(0, Fraction(1, 2))
    base = ell_frak_p(K, 5, "p", 10, unit=u, embedding=root)
    assert ell_frak_p(K, 5, "p", 10, unit=i * u, embedding=root).agreement(base) >= 10
    assert ell_frak_p(K, 5, "p", 10, unit=u * u, embedding=root).agreement(base) >= 9


def test_ell_minus_ignores_rescaling_of_y0(config):
    value, _ = ell_minus(config)
    for y in (config.y0 * config.y0, -config.y0):
        rescaled, _ = ell_minus(replace(config, y0=y))
        assert rescaled.agreement(value) >= 12


def test_general_regulator_is_linear_in_the_logs():
    p, prec = 7, 10

    def x(n):
        return PadicScalar.from_rational(n, p, prec)

    table = UnitLogTable(psi=(1, -1), y_logs=(x(14), x(7)), y_tau_logs=(x(21), x(49)), ord_y0=1, slope=x(-1))
    c = Fraction(3, 2)
    assert general_regulator(table.scaled(c)).agreement(general_regulator(table) * c) >= prec - 1


def test_simple_trivial_zero(config):
    value = gross_cyclotomic(config, 0)
    assert value.is_zero() or value.val >= config.prec - 1
    rep = simple_zero_check(config)
    assert rep.order == 1
    assert not rep.derivative.is_zero()
    assert rep.agreement >= config.prec // 2


def test_report_is_stable_under_doubled_precision():
    low = report(build_biquad(-4, 5, 29, prec=8))
    high = report(build_biquad(-4, 5, 29, prec=16))
    assert low.slope.agreement(high.slope) >= 6
    assert low.ell_p.agreement(high.ell_p) >= 6
    assert low.ell_minus.agreement(high.ell_minus) >= 6

from dataclasses import dataclass, replace
from fractions import Fraction

import pytest

from padic_linv.errors import InvalidParameters, OddCharacter, PoleAtOne
from padic_linv.lfunctions import (
    DirichletCharacter,
    PadicLSeries,
    bernoulli_number,
    classical_L_at_nonpos,
    gen_bernoulli,
    interpolation_value,
    kl_derivative,
    kubota_leopoldt,
    leopoldt_at_one,
)
from padic_linv.padic import PadicScalar, iwasawa_log, padic_exp


def test_bernoulli_convention():
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(3) == 0


def test_generalized_bernoulli():
    assert gen_bernoulli(DirichletCharacter(-4), 1) == Fraction(-1, 2)
    assert gen_bernoulli(DirichletCharacter(5), 2) == Fraction(4, 5)


def test_classical_values():
    assert classical_L_at_nonpos(DirichletCharacter(-4), 1) == Fraction(1, 2)
    assert classical_L_at_nonpos(DirichletCharacter(5), 2) == Fraction(-2, 5)
    assert classical_L_at_nonpos(DirichletCharacter(5), 1) == 0
    assert classical_L_at_nonpos(DirichletCharacter.trivial(), 1) == Fraction(-1, 2)
    assert classical_L_at_nonpos(DirichletCharacter.trivial(), 2) == Fraction(-1, 12)


def test_character_twists():
    chi = DirichletCharacter(-4).twist(1, 5)
    assert chi.k == 1
    assert chi.parity == 1
    assert chi.conductor == 20
    assert str(chi) == "eps_-4*omega^1"
    with pytest.raises(InvalidParameters):
        DirichletCharacter(-4, omega_power=1)


def test_odd_character_has_no_series():
    with pytest.raises(OddCharacter):
        PadicLSeries(DirichletCharacter(-4), 5)


def test_trivial_character_pole():
    series = kubota_leopoldt(DirichletCharacter.trivial(), 5, 8)
    assert series.has_pole
    with pytest.raises(PoleAtOne):
        series.evaluate(1)


def test_interpolation_without_twist():
    # (p - 1) | n, so omega^-n is trivial: -(1 - eps(3) 3) B_2 / 2
    value = interpolation_value(DirichletCharacter(5), 2, 3, 10)
    assert value.agreement(Fraction(-8, 5)) >= 10
    series = PadicLSeries(DirichletCharacter(5), 3, 12)
    assert series.evaluate(-1).agreement(value) >= 10


def test_interpolation_with_twist():
    series = PadicLSeries(DirichletCharacter(5), 7, 12)
    for n in (1, 2, 3):
        expected = interpolation_value(DirichletCharacter(5), n, 7, 12)
        assert series.evaluate(1 - n).agreement(expected) >= 10


def test_leopoldt_formula():
    chi = DirichletCharacter(5)
    lhs = leopoldt_at_one(chi, 11, 10)
    rhs = kubota_leopoldt(chi, 11, 10).evaluate(1)
    assert lhs.agreement(rhs) >= 8


def test_series_is_stable_under_longer_truncation():
    chi = DirichletCharacter(5)
    default = PadicLSeries(chi, 11, 10).evaluate(1)
    for M in (20, 25):
        assert PadicLSeries(chi, 11, 10, truncation=M).evaluate(1).agreement(default) >= 10


@dataclass(frozen=True)
class ConstantFunction:
    value: int
    p: int
    prec: int

    def with_precision(self, prec):
        return replace(self, prec=prec)

    def evaluate(self, s):
        return PadicScalar.from_rational(self.value, self.p, self.prec)


@dataclass(frozen=True)
class PowerOfOneUnit:
    """s -> a^(1 - s) for a = 1 mod p."""

    a: int
    p: int
    prec: int

    def with_precision(self, prec):
        return replace(self, prec=prec)

    def evaluate(self, s):
        log_a = iwasawa_log(PadicScalar.from_rational(self.a, self.p, self.prec))
        return padic_exp(log_a * (1 - s))


def test_derivative_of_constant_is_zero():
    d = kl_derivative(ConstantFunction(3, 5, 8), 0)
    assert d.is_zero()


def test_derivative_matches_closed_form():
    f = PowerOfOneUnit(6, 5, 8)
    log_a = iwasawa_log(PadicScalar.from_rational(6, 5, 20))
    assert kl_derivative(f, 0).agreement(-log_a * 6) >= 7

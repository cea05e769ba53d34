from fractions import Fraction

import pytest

from padic_linv.errors import (
    DivisionByImpreciseZero,
    OutsideConvergenceDomain,
    PrecisionExhausted,
    RootOfUnityConstructionFailed,
    RootSeedInvalid,
    UnsupportedPrime,
)
from padic_linv.padic import (
    PadicScalar,
    UnramifiedExtension,
    check_prime,
    ext_log,
    iwasawa_log,
    padic_exp,
    padic_sqrt,
    teichmuller,
)


def test_rational_rounding():
    half = PadicScalar.from_rational(Fraction(1, 2), 5, 4)
    assert half.val == 0
    assert half.residue() == 313
    assert (half * 2 - 1).is_zero()


def test_valuation_and_str():
    x = PadicScalar.from_rational(Fraction(7, 25), 5, 3)
    assert x.val == -2
    assert x.absprec == 1
    assert str(PadicScalar.from_rational(7, 5, 3)) == "2 + 1*5 + O(5^3)"


def test_dict_roundtrip():
    x = PadicScalar.from_rational(Fraction(-3, 10), 7, 6)
    assert PadicScalar.from_dict(x.to_dict()) == x
    assert PadicScalar.zero(7, 4).to_dict()["val"] == "inf"


def test_residue_beyond_precision():
    x = PadicScalar.from_residue(3, 5, 2)
    with pytest.raises(PrecisionExhausted):
        x.residue(3)


def test_division_by_zero_to_precision():
    with pytest.raises(DivisionByImpreciseZero):
        PadicScalar.from_rational(3, 5, 4) / PadicScalar.zero(5, 3)


def test_unsupported_primes():
    with pytest.raises(UnsupportedPrime):
        check_prime(2)
    with pytest.raises(UnsupportedPrime):
        check_prime(9)
    assert check_prime(29) == 29


def test_log_kills_p_and_roots_of_unity():
    assert iwasawa_log(PadicScalar.from_rational(5, 5, 10)).is_zero()
    assert iwasawa_log(teichmuller(2, 5, 10)).is_zero()


def test_log_of_one_unit():
    lg = iwasawa_log(PadicScalar.from_rational(6, 5, 10))
    assert lg.val == 1
    assert lg.residue(2) == 5


def test_log_is_additive():
    x = PadicScalar.from_rational(6, 5, 12)
    y = PadicScalar.from_rational(11, 5, 12)
    assert iwasawa_log(x * y).agreement(iwasawa_log(x) + iwasawa_log(y)) >= 10


def test_exp_inverts_log_on_one_units():
    x = PadicScalar.from_rational(6, 5, 10)
    assert padic_exp(iwasawa_log(x)).agreement(x) >= 8


def test_exp_outside_disc():
    with pytest.raises(OutsideConvergenceDomain):
        padic_exp(PadicScalar.from_rational(1, 5, 10))


def test_teichmuller_is_root_of_unity():
    w = teichmuller(2, 5, 10)
    assert (w**4 - 1).is_zero()
    assert w.residue(1) == 2


def test_sqrt_uses_smallest_seed():
    r = padic_sqrt(-1, 5, 10)
    assert r.residue(1) == 2
    assert (r * r + 1).is_zero()
    assert padic_sqrt(-1, 5, 10, seed=3).residue(1) == 3


def test_sqrt_of_non_square():
    with pytest.raises(RootSeedInvalid):
        padic_sqrt(2, 5, 10)


def test_unramified_root_of_unity():
    ext = UnramifiedExtension.cyclotomic(3, 5, 8)
    assert ext.degree == 2
    zeta = ext.root_of_unity(3)
    assert (zeta**3 - 1).is_zero()
    assert not (zeta - 1).is_zero()
    assert zeta.trace().agreement(-1) >= 6
    assert ext_log(zeta).is_zero()


def test_conductor_divisible_by_p():
    with pytest.raises(RootOfUnityConstructionFailed):
        UnramifiedExtension.cyclotomic(5, 5, 8)


def test_exp_is_a_homomorphism():
    five = PadicScalar.from_rational(5, 5, 12)
    ten = PadicScalar.from_rational(10, 5, 12)
    assert (padic_exp(five) * padic_exp(five)).agreement(padic_exp(ten)) >= 11


def test_ext_log_trace_is_log_of_norm():
    # 7 = 3 mod 4, so zeta_4 generates the quadratic unramified extension
    ext = UnramifiedExtension.cyclotomic(4, 7, 12)
    assert ext.degree == 2
    x = 1 - ext.root_of_unity(4)
    assert x.norm().agreement(2) >= 11
    expected = iwasawa_log(PadicScalar.from_rational(2, 7, 12))
    assert ext_log(x).trace().agreement(expected) >= 10

from fractions import Fraction

import pytest

from padic_linv.errors import InvalidParameters, PrimeNotSplit, PrimeNotSplitCompletely
from padic_linv.fields import (
    QuadField,
    build_biquad,
    class_number,
    fundamental_unit,
    is_fundamental_discriminant,
    kronecker,
    p_unit,
    place_order,
    split_prime,
)
from padic_linv.linvariants import slope
from padic_linv.padic import iwasawa_log


def test_fields_from_integers():
    assert QuadField.from_integer(-1) == QuadField(-4)
    assert QuadField.from_integer(2).disc == 8
    assert QuadField.from_integer(12).disc == 12
    assert QuadField.from_integer(-20).disc == -20
    assert QuadField(-3).roots_of_unity == 6
    with pytest.raises(InvalidParameters):
        QuadField(9)


def test_kronecker():
    assert kronecker(-4, 5) == 1
    assert kronecker(-4, 3) == -1
    assert kronecker(5, 2) == -1
    assert kronecker(-23, 2) == 1


def test_fundamental_units():
    F5 = QuadField(5)
    assert fundamental_unit(F5) == F5.from_xy(1, 1)
    eps2 = fundamental_unit(QuadField(8))
    assert eps2.norm() == -1 and eps2.trace() == 2
    eps3 = fundamental_unit(QuadField(12))
    assert eps3.norm() == 1 and eps3.trace() == 4


def test_class_numbers():
    assert class_number(QuadField(-4)) == 1
    assert class_number(QuadField(-20)) == 2
    assert class_number(QuadField(-23)) == 3


def test_class_numbers_match_the_analytic_formula():
    # h = -(w / 2|D|) sum_{a < |D|} chi(a) a for imaginary fundamental D
    for D in range(-3, -201, -1):
        if not is_fundamental_discriminant(D):
            continue
        K = QuadField(D)
        total = sum(kronecker(D, a) * a for a in range(1, -D))
        assert class_number(K) == Fraction(-K.roots_of_unity * total, -2 * D), D


def test_split_prime_seed():
    K = QuadField(-4)
    assert split_prime(K, 5).seed == 1
    with pytest.raises(PrimeNotSplit):
        split_prime(K, 3)
    with pytest.raises(PrimeNotSplit):
        split_prime(K, 2)


def test_p_unit_is_oriented():
    K = QuadField(-4)
    u = p_unit(K, 5, "p", prec=10)
    assert u == K.element(2, Fraction(1, 2))
    assert u.norm() == 5
    assert place_order(u, 5) == 1
    root = split_prime(K, 5).root(10)
    assert u.embed(root).val == 1
    assert u.conj().embed(root).val == 0
    assert p_unit(K, 5, "pbar", prec=10) == u.conj()


def test_biquad_configuration():
    config = build_biquad(-4, 5, 29, prec=20)
    assert config.Kprime.disc == -20
    assert config.c == 1
    assert (config.hK, config.hKprime) == (1, 2)
    assert config.embed(config.uP, "tau").agreement(config.uP.conj().embed(config.embedK)) >= 20
    # N(uP) is a power of p, so the logs of its two embeddings cancel
    total = iwasawa_log(config.embed(config.uP)) + iwasawa_log(config.embed(config.uP, "tau"))
    assert total.is_zero() or total.val >= 18
    assert config.to_dict()["dKprime"] == -20


def test_biquad_needs_complete_splitting():
    with pytest.raises(PrimeNotSplitCompletely):
        build_biquad(-4, 5, 3)
    with pytest.raises(InvalidParameters):
        build_biquad(-4, -3, 7)


def test_p_unit_of_non_principal_prime():
    K = QuadField(-20)
    u = p_unit(K, 3, "p", prec=10)
    assert place_order(u, 3) == 2
    assert u.norm() == 9
    assert u in (K.element(2, Fraction(1, 2)), K.element(2, Fraction(-1, 2)))


@pytest.mark.parametrize("dF", [2, 8])
def test_biquad_with_even_real_discriminant(dF):
    config = build_biquad(-4, dF, 17, prec=12)
    assert config.F.disc == 8
    assert config.Kprime.disc == -8
    assert config.c == 2
    assert slope(config).agreement(-1) >= 10

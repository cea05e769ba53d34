import pytest

from padic_linv.errors import CharacterDescends, IdentityFails, InvalidParameters, LengthExhausted, RegularCase
from padic_linv.fields import QuadField
from padic_linv.thetaforms import (
    class_characters,
    hecke_tl,
    jordan_matrix,
    p_stabilize,
    prime_values,
    theta_qexp,
    up_action,
    up_identity_check,
)


@pytest.fixture(scope="module")
def cubic():
    return class_characters(QuadField(-23))[1]


def test_class_characters_of_minus_23():
    chars = class_characters(QuadField(-23))
    assert len(chars) == 3
    assert chars[0].is_trivial()
    assert all(c.order == 3 for c in chars)
    assert chars[1].conjugate().exponents == chars[2].exponents


def test_theta_is_eta_product(cubic):
    # eta(z) eta(23 z) = q - q^2 - q^3 + q^6 + q^8 - ...
    theta = theta_qexp(cubic, 30)
    assert [theta[n].as_int() for n in range(1, 9)] == [1, -1, -1, 0, 0, 1, 0, 1]
    assert theta.level == 23
    assert not theta.eisenstein_like


def test_theta_is_multiplicative(cubic):
    theta = theta_qexp(cubic, 120)
    for m, n in ((2, 3), (3, 8), (4, 13), (5, 7)):
        assert theta[m * n] == theta[m] * theta[n]


def test_theta_is_a_t2_eigenform(cubic):
    theta = theta_qexp(cubic, 60)
    assert hecke_tl(theta, 2).agrees_with(theta.scale(theta[2]))
    with pytest.raises(InvalidParameters):
        hecke_tl(theta, 23)


def test_trivial_character_descends():
    with pytest.raises(CharacterDescends):
        theta_qexp(class_characters(QuadField(-23))[0], 10)


def test_genus_character_is_flagged():
    psi = class_characters(QuadField(-20))[1]
    assert psi.is_quadratic()
    assert theta_qexp(psi, 20).eisenstein_like


def test_up_identity_at_principal_prime(cubic):
    alpha, alpha_bar = prime_values(cubic, 59)
    assert alpha == alpha_bar
    result = up_identity_check(cubic, 59, 600)
    assert result.passed
    assert result.details["checked_upto"] == 10
    assert result.details["jordan"] == [[1, 0], [1, 1]]


def test_regular_prime_is_rejected(cubic):
    with pytest.raises(RegularCase):
        up_identity_check(cubic, 13, 100)


def test_up_needs_enough_coefficients(cubic):
    with pytest.raises(LengthExhausted):
        up_action(theta_qexp(cubic, 3), 5)


@pytest.fixture(scope="module")
def genus():
    return class_characters(QuadField(-20))[1]


def test_jordan_block_read_from_expansions(genus):
    alpha, alpha_bar = prime_values(genus, 3)
    assert alpha.as_int() == alpha_bar.as_int() == -1
    theta = theta_qexp(genus, 30)
    f = p_stabilize(theta, 3, alpha, alpha_bar)
    m = jordan_matrix(theta, f, 3)
    assert [[c.as_int() for c in row] for row in m] == [[-1, 0], [-1, -1]]


def test_jordan_block_needs_independent_basis(genus):
    theta = theta_qexp(genus, 30)
    with pytest.raises(IdentityFails):
        jordan_matrix(theta, theta, 3)
    with pytest.raises(LengthExhausted):
        jordan_matrix(theta.truncate(8), theta.truncate(8), 3)


def test_up_identity_for_genus_character(genus):
    result = up_identity_check(genus, 29, 600)
    assert result.details["checked_upto"] == 20
    assert result.details["eisenstein_like"]
    assert result.details["jordan"] == [[1, 0], [1, 1]]


def test_prime_power_coefficients(genus):
    # a_{p^(k+1)} = (k + 2) psi(P)^(k+1) when psi(P) = psi(Pbar)
    theta = theta_qexp(genus, 100)
    assert [theta[3**j].as_int() for j in range(1, 5)] == [-2, 3, -4, 5]


def test_hecke_operators_commute(cubic):
    theta = theta_qexp(cubic, 240)
    t23 = hecke_tl(hecke_tl(theta, 2), 3)
    t32 = hecke_tl(hecke_tl(theta, 3), 2)
    assert t23.length == t32.length == 40
    assert t23.agrees_with(t32)
    assert t23.agrees_with(theta.scale(theta[2] * theta[3]))

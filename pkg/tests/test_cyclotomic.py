import pytest

from padic_linv.cyclotomic import CyclotomicInt


def test_cube_roots_sum_to_zero():
    z = CyclotomicInt.zeta_power(3, 1)
    assert (1 + z + z * z).is_zero()
    assert z**3 == CyclotomicInt.integer(3, 1)


def test_zeta_power_wraps():
    assert CyclotomicInt.zeta_power(4, 6) == CyclotomicInt.integer(4, -1)
    assert CyclotomicInt.zeta_power(4, 1) ** 2 == CyclotomicInt.integer(4, -1)


def test_rendering():
    z = CyclotomicInt.zeta_power(3, 1)
    assert (1 + 2 * z).to_json() == [1, 2]
    assert str(1 + 2 * z) == "1 + 2*z"
    assert CyclotomicInt.integer(3, 5).to_json() == 5


def test_exact_division():
    z = CyclotomicInt.zeta_power(6, 1)
    assert (z * 4 + 2).exact_div(2) == z * 2 + 1


def test_products_reduce_modulo_the_cyclotomic_polynomial():
    z = CyclotomicInt.zeta_power(5, 1)
    assert z.degree == 4
    # z^4 = -1 - z - z^2 - z^3
    assert (z**2 * z**2).coeffs == (-1, -1, -1, -1)
    assert z**5 == 1 + 0 * z


def test_inverse_of_roots_of_unity():
    z = CyclotomicInt.zeta_power(3, 1)
    assert z.unit_inverse() == z * z
    assert (-z) ** -1 == -(z * z)
    assert CyclotomicInt.integer(2, -1).unit_inverse().as_int() == -1
    with pytest.raises(ValueError):
        (1 + 2 * z).unit_inverse()

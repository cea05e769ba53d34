import pytest
from sympy.ntheory import sqrt_mod

from padic_linv.errors import InvalidParameters
from padic_linv.forms import (
    BinaryQuadraticForm,
    form_class_of_prime,
    form_order,
    principal_form,
    reduced_forms,
    representation_counts,
)


def test_reduced_forms():
    assert reduced_forms(-23) == (
        BinaryQuadraticForm(1, 1, 6),
        BinaryQuadraticForm(2, -1, 3),
        BinaryQuadraticForm(2, 1, 3),
    )
    assert reduced_forms(-20) == (BinaryQuadraticForm(1, 0, 5), BinaryQuadraticForm(2, 2, 3))
    with pytest.raises(InvalidParameters):
        reduced_forms(5)


def test_composition():
    f = BinaryQuadraticForm(2, 1, 3)
    assert f * f.inverse() == principal_form(-23)
    assert f * f == BinaryQuadraticForm(2, -1, 3)
    assert form_order(f) == 3
    assert f**3 == principal_form(-23)


def test_prime_class():
    assert form_class_of_prime(-23, 2, 1) == BinaryQuadraticForm(2, 1, 3)
    root = min(sqrt_mod(-23 % 59, 59, all_roots=True))
    assert form_class_of_prime(-23, 59, root) == principal_form(-23)
    with pytest.raises(InvalidParameters):
        form_class_of_prime(-23, 13, 2)


def test_representation_counts_sum_of_two_squares():
    counts = representation_counts(principal_form(-4), 10)
    assert counts[:6] == [1, 4, 4, 0, 4, 8]
    assert counts[3] == 0

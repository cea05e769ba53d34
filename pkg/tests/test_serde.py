from fractions import Fraction

import pytest

from padic_linv.errors import InvalidParameters
from padic_linv.fields import QuadField, build_biquad
from padic_linv.linvariants import general_regulator
from padic_linv.serde import (
    biquad_config_from_dict,
    padic_from_dict,
    quad_element_from_dict,
    unit_table_from_dict,
)


def test_padic_from_rational_document():
    x = padic_from_dict({"rational": "1/2", "p": 5, "prec": 4})
    assert x.residue() == 313
    assert padic_from_dict({"rational": 3}, p=7, prec=5).residue(1) == 3
    with pytest.raises(InvalidParameters):
        padic_from_dict({"rational": "1/2"})
    with pytest.raises(InvalidParameters):
        padic_from_dict({"rational": "x", "p": 5, "prec": 4})


def test_quad_element():
    z = quad_element_from_dict({"disc": -4, "a": "2", "b": "1/2"})
    assert z == QuadField(-4).element(2, Fraction(1, 2))
    assert quad_element_from_dict(z.to_dict()) == z


def test_biquad_config_is_rebuilt_and_checked():
    config = build_biquad(-4, 5, 29, prec=12)
    d = config.to_dict()
    assert biquad_config_from_dict(d).uP == config.uP
    d["uP"] = {"disc": -4, "a": "2", "b": "1/2"}
    with pytest.raises(InvalidParameters):
        biquad_config_from_dict(d)


def test_unit_table_document():
    table = unit_table_from_dict(
        {
            "p": 7,
            "prec": 10,
            "psi": [1],
            "y_logs": [{"rational": 14}],
            "y_tau_logs": [{"rational": 21}],
            "ord_y0": 2,
            "slope": {"rational": -1},
        }
    )
    assert table.n == 1
    assert general_regulator(table).agreement(Fraction(7, 2)) >= 9

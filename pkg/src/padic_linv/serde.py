from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional

from .errors import InvalidParameters
from .fields import BiquadConfig, QuadElement, QuadField, build_biquad
from .linvariants import UnitLogTable
from .padic import PadicScalar


def _fraction(value: Any) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameters(f"{value!r} is not a rational number") from exc


def padic_from_dict(d: dict[str, Any], p: Optional[int] = None, prec: Optional[int] = None) -> PadicScalar:
    """A PadicScalar document, or {"rational": "a/b"} rounded at p and prec."""
    if "rational" in d:
        p = int(d.get("p", p or 0))
        prec = int(d.get("prec", prec or 0))
        if not p or not prec:
            raise InvalidParameters("a rational value needs p and prec")
        return PadicScalar.from_rational(_fraction(d["rational"]), p, prec)
    try:
        return PadicScalar.from_dict(d)
    except KeyError as exc:
        raise InvalidParameters(f"p-adic value is missing {exc}") from exc


def quad_element_from_dict(d: dict[str, Any]) -> QuadElement:
    field = QuadField(int(d["disc"]))
    return field.element(_fraction(d.get("a", 0)), _fraction(d.get("b", 0)))


def biquad_config_from_dict(d: dict[str, Any]) -> BiquadConfig:
    """Rebuilds the configuration from (dK, dF, p, prec) and checks any stored elements against it."""
    config = build_biquad(int(d["dK"]), int(d["dF"]), int(d["p"]), int(d.get("prec", 30)))
    for name in ("uP", "y0", "wF", "epsF"):
        if name in d and quad_element_from_dict(d[name]) != getattr(config, name):
            raise InvalidParameters(f"stored {name} differs from the recomputed one")
    return config


def unit_table_from_dict(d: dict[str, Any]) -> UnitLogTable:
    p = d.get("p")
    prec = d.get("prec")

    def values(key: str) -> tuple[PadicScalar, ...]:
        return tuple(padic_from_dict(x, p, prec) for x in d.get(key) or [])

    psi = []
    for x in d.get("psi") or []:
        psi.append(padic_from_dict(x, p, prec) if isinstance(x, dict) else _fraction(x))
    slope = d.get("slope")
    return UnitLogTable(
        psi=tuple(psi),
        y_logs=values("y_logs"),
        y_tau_logs=values("y_tau_logs"),
        ord_y0=int(d.get("ord_y0", 0)),
        slope=padic_from_dict(slope, p, prec) if isinstance(slope, dict) else None,
        unit_logs=values("unit_logs"),
        unit_tau_logs=values("unit_tau_logs"),
    )

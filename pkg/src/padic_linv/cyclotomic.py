from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from sympy import ZZ, Poly, cyclotomic_poly, symbols, totient


_x = symbols("x")


@lru_cache(maxsize=64)
def _phi(order: int) -> Poly:
    return Poly(cyclotomic_poly(order, _x), _x, domain=ZZ)


def _to_poly(coeffs: tuple[int, ...]) -> Poly:
    return Poly(list(reversed(coeffs)), _x, domain=ZZ)


def _reduce(poly: Poly, order: int) -> tuple[int, ...]:
    """Coordinates of poly mod Phi_order on 1, x, ..., x^(phi(order)-1)."""
    rem = poly.rem(_phi(order))
    coeffs = [int(c) for c in reversed(rem.all_coeffs())]
    d = _phi(order).degree()
    return tuple(coeffs + [0] * (d - len(coeffs)))


@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[zeta_order], coordinates on 1, zeta, ..., zeta^(phi(order)-1)."""

    order: int
    coeffs: tuple[int, ...]

    @classmethod
    def integer(cls, order: int, n: int) -> CyclotomicInt:
        return cls(order, (n,) + (0,) * (int(totient(order)) - 1))

    @classmethod
    @lru_cache(maxsize=256)
    def zeta_power(cls, order: int, k: int) -> CyclotomicInt:
        return cls(order, _reduce(Poly(_x ** (k % order), _x, domain=ZZ), order))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def _coerce(self, other: object) -> CyclotomicInt:
        if isinstance(other, CyclotomicInt):
            if other.order != self.order:
                raise ValueError(f"mixed cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, int):
            return CyclotomicInt.integer(self.order, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> CyclotomicInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CyclotomicInt(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other: object) -> CyclotomicInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CyclotomicInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> CyclotomicInt:
        if isinstance(other, int):
            return CyclotomicInt(self.order, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.degree == 1:
            return o * self.coeffs[0]
        if o.degree == 1:
            return self * o.coeffs[0]
        return CyclotomicInt(self.order, _reduce(_to_poly(self.coeffs) * _to_poly(o.coeffs), self.order))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CyclotomicInt:
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = CyclotomicInt.integer(self.order, 1)
        for _ in range(n):
            result = result * self
        return result

    def unit_inverse(self) -> CyclotomicInt:
        """Inverse of a root of unity +-zeta^k."""
        one = CyclotomicInt.integer(self.order, 1)
        power = self
        for _ in range(2 * self.order):
            if power * self == one:
                return power
            power = power * self
        raise ValueError(f"{self} is not a root of unity in Z[zeta_{self.order}]")

    def exact_div(self, n: int) -> CyclotomicInt:
        if any(c % n for c in self.coeffs):
            raise ValueError(f"{self} is not divisible by {n}")
        return CyclotomicInt(self.order, tuple(c // n for c in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_int(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_json(self) -> Union[int, list[int]]:
        n = self.as_int()
        return n if n is not None else list(self.coeffs)

    def __str__(self) -> str:
        n = self.as_int()
        if n is not None:
            return str(n)
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*z^{i}" if i > 1 else f"{c}*z")
        return " + ".join(parts)

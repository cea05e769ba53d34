from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

from sympy import factorint, jacobi_symbol
from sympy.ntheory import continued_fraction_periodic, sqrt_mod

from .errors import (
    InvalidParameters,
    PrimeNotSplit,
    PrimeNotSplitCompletely,
    PUnitSearchFailed,
    SearchBoundExceeded,
)
from .forms import reduced_forms
from .padic import PadicScalar, check_prime, padic_sqrt, vp


logger = logging.getLogger(__name__)

GUARD_DIGITS = 10
SIGMAS = ("1", "g", "tau", "gtau")


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorint(abs(d)).values())
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorint(abs(m)).values())
    return False


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n)."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    sign = 1
    if n < 0:
        n = -n
        if d < 0:
            sign = -1
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if d % 2 == 0:
            return 0
        k2 = 1 if d % 8 in (1, 7) else -1
        sign *= k2**twos
    if n == 1:
        return sign
    return sign * int(jacobi_symbol(d % n, n))


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(disc)) for a fundamental discriminant disc."""

    disc: int

    def __post_init__(self) -> None:
        if not is_fundamental_discriminant(self.disc):
            raise InvalidParameters(f"{self.disc} is not a fundamental discriminant")

    @classmethod
    def from_integer(cls, d: int) -> QuadField:
        if d in (0, 1):
            raise InvalidParameters("Q is not a quadratic field")
        sign = -1 if d < 0 else 1
        core = sign
        for q, e in factorint(abs(d)).items():
            if e % 2:
                core *= q
        return cls(core if core % 4 == 1 else 4 * core)

    def __str__(self) -> str:
        return f"Q(sqrt({self.disc}))"

    @property
    def is_imaginary(self) -> bool:
        return self.disc < 0

    @property
    def roots_of_unity(self) -> int:
        return {-3: 6, -4: 4}.get(self.disc, 2)

    def element(self, a: Fraction | int, b: Fraction | int = 0) -> QuadElement:
        return QuadElement(self, Fraction(a), Fraction(b))

    def from_xy(self, x: int, y: int) -> QuadElement:
        """(x + y sqrt(disc)) / 2."""
        return QuadElement(self, Fraction(x, 2), Fraction(y, 2))

    def character(self, n: int) -> int:
        return kronecker(self.disc, n)


@dataclass(frozen=True)
class QuadElement:
    """a + b sqrt(disc) in a quadratic field."""

    field: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other: object) -> QuadElement:
        if isinstance(other, QuadElement):
            if other.field != self.field:
                raise ValueError(f"elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> QuadElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QuadElement:
        return QuadElement(self.field, -self.a, -self.b)

    def __sub__(self, other: object) -> QuadElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other: object) -> QuadElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.field.disc
        return QuadElement(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QuadElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in a quadratic field")
        q = self * o.conj()
        return QuadElement(self.field, q.a / n, q.b / n)

    def __pow__(self, n: int) -> QuadElement:
        if n < 0:
            return (self.field.element(1) / self) ** (-n)
        result = self.field.element(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> QuadElement:
        return QuadElement(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.disc * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_integral(self) -> bool:
        x, y = 2 * self.a, 2 * self.b
        if x.denominator != 1 or y.denominator != 1:
            return False
        return (x.numerator - self.field.disc * y.numerator) % 2 == 0

    def embed(self, root: PadicScalar) -> PadicScalar:
        """Image under the embedding sending sqrt(disc) to root."""
        return root * self.b + self.a

    def to_dict(self) -> dict[str, Any]:
        return {"disc": self.field.disc, "a": str(self.a), "b": str(self.b)}

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.field.disc})"


def _cf_terms(num: int, den: int, d: int) -> Iterator[int]:
    cf = continued_fraction_periodic(num, den, d)
    period = [int(t) for t in cf[-1]] if cf and isinstance(cf[-1], list) else []
    for t in cf:
        if not isinstance(t, list):
            yield int(t)
    while period:
        yield from period


def fundamental_unit(F: QuadField, max_steps: int = 100_000) -> QuadElement:
    """Fundamental unit > 1 of a real quadratic field, from the continued fraction of its integral generator."""
    if F.is_imaginary:
        raise InvalidParameters(f"{F} has no unit of infinite order")
    D = F.disc
    if D % 4 == 1:
        terms = _cf_terms(1, 2, D)

        def unit(h: int, k: int) -> QuadElement | None:
            if abs(h * h - h * k + k * k * (1 - D) // 4) != 1:
                return None
            return F.from_xy(2 * h - k, k)
    else:
        m = D // 4
        terms = _cf_terms(0, 1, m)

        def unit(h: int, k: int) -> QuadElement | None:
            if abs(h * h - m * k * k) != 1:
                return None
            return F.element(h, Fraction(k, 2))

    h0, h1 = 0, 1
    k0, k1 = 1, 0
    for step, t in enumerate(terms):
        if step > max_steps:
            break
        h0, h1 = h1, t * h1 + h0
        k0, k1 = k1, t * k1 + k0
        if k1 == 0:
            continue
        eps = unit(h1, k1)
        if eps is not None and not (eps.a == 1 and eps.b == 0):
            logger.debug("fundamental unit of %s: %s", F, eps)
            return eps
    raise SearchBoundExceeded(f"no unit found in {max_steps} convergents", max_steps)


def class_number(K: QuadField) -> int:
    if not K.is_imaginary:
        raise InvalidParameters("class numbers are computed for imaginary fields only")
    return len(reduced_forms(K.disc))


@dataclass(frozen=True)
class SplitData:
    """p = P * Pbar in K; the place P is the one where sqrt(disc) = seed mod p."""

    field: QuadField
    p: int
    seed: int

    @property
    def roots(self) -> tuple[int, int]:
        return self.seed, self.p - self.seed

    def root(self, prec: int) -> PadicScalar:
        return padic_sqrt(self.field.disc, self.p, prec, self.seed)


def split_prime(K: QuadField, p: int) -> SplitData:
    if p != 2:
        check_prime(p)
    if kronecker(K.disc, p) != 1:
        raise PrimeNotSplit(f"{p} does not split in {K}")
    check_prime(p)
    seed = min(int(r) for r in sqrt_mod(K.disc % p, p, all_roots=True))
    return SplitData(K, p, seed)


def _orient(z: QuadElement, root: PadicScalar, m: int, place: str) -> QuadElement:
    v = z.embed(root).val
    on_p = v == m
    return z if on_p == (place == "p") else z.conj()


def _real_y_bound(F: QuadField, target: int) -> int:
    eps = fundamental_unit(F)
    eps_real = float(eps.a) + float(eps.b) * math.sqrt(F.disc)
    return int(math.sqrt(abs(target) * eps_real / F.disc)) + 2


def p_unit(
    K: QuadField,
    p: int,
    place: str = "p",
    embedding: PadicScalar | None = None,
    prec: int = 30,
    max_order: int = 12,
) -> QuadElement:
    """Generator z of P^m (or Pbar^m) for the least m making it principal.

    The place P is the one induced by `embedding`, so the result has
    v_p(embedding(z)) = m for place "p" and v_p(embedding(conj z)) = m for "pbar".
    """
    if place not in ("p", "pbar"):
        raise InvalidParameters(f"unknown place {place!r}")
    split = split_prime(K, p)
    root = embedding if embedding is not None else split.root(prec + GUARD_DIGITS)
    D = K.disc
    orders = range(1, class_number(K) + 1) if K.is_imaginary else range(1, max_order + 1)
    bound = 0
    for m in orders:
        targets = (4 * p**m,) if K.is_imaginary else (4 * p**m, -4 * p**m)
        for target in targets:
            if K.is_imaginary:
                ybound = math.isqrt(target // -D) + 1
            else:
                ybound = _real_y_bound(K, target)
            bound = max(bound, ybound)
            for y in range(0, ybound + 1):
                x2 = target + D * y * y
                if x2 < 0:
                    continue
                x = math.isqrt(x2)
                if x * x != x2 or (x - D * y) % 2:
                    continue
                if x % p == 0 and y % p == 0:
                    continue
                z = _orient(K.from_xy(x, y), root, m, place)
                logger.debug("p-unit for %s at %d (%s): %s, order %d", K, p, place, z, m)
                return z
    raise SearchBoundExceeded(f"no generator of a power of the prime above {p} in {K}", bound)


def place_order(z: QuadElement, p: int) -> int:
    return int(vp(z.norm(), p))


@dataclass(frozen=True)
class BiquadConfig:
    """H = K F with K imaginary, F real, K' the third quadratic subfield.

    sqrt(dK) sqrt(dF) = c sqrt(dK') and embedKprime = embedK * embedF / c.
    g generates Gal(H/K) and negates sqrt(dF); tau generates Gal(H/F) and
    negates sqrt(dK).
    """

    K: QuadField
    F: QuadField
    Kprime: QuadField
    p: int
    prec: int
    c: int
    embedK: PadicScalar
    embedF: PadicScalar
    embedKprime: PadicScalar
    epsF: QuadElement
    uP: QuadElement
    y0: QuadElement
    wF: QuadElement
    hK: int
    hKprime: int

    @property
    def ordUP(self) -> int:
        return place_order(self.uP, self.p)

    @property
    def ordY0(self) -> int:
        return place_order(self.y0, self.p)

    @property
    def ordWF(self) -> int:
        return place_order(self.wF, self.p)

    def embed(self, x: QuadElement, sigma: str = "1") -> PadicScalar:
        """iota(sigma(x)) for sigma in Gal(H/Q) = {1, g, tau, gtau}."""
        if sigma not in SIGMAS:
            raise InvalidParameters(f"unknown automorphism {sigma!r}")
        disc = x.field.disc
        if disc == self.K.disc:
            flip, root = sigma in ("tau", "gtau"), self.embedK
        elif disc == self.F.disc:
            flip, root = sigma in ("g", "gtau"), self.embedF
        elif disc == self.Kprime.disc:
            flip, root = sigma in ("g", "tau"), self.embedKprime
        else:
            raise InvalidParameters(f"{x.field} is not a subfield of this configuration")
        return (x.conj() if flip else x).embed(root)

    def validate(self) -> None:
        for z, name in ((self.uP, "uP"), (self.y0, "y0"), (self.wF, "wF")):
            if not z.is_integral():
                raise InvalidParameters(f"{name} = {z} is not integral")
            m = place_order(z, self.p)
            if self.embed(z).val != m:
                raise InvalidParameters(f"{name} is not oriented at the place of the embedding")
        if abs(self.epsF.norm()) != 1:
            raise InvalidParameters(f"epsF = {self.epsF} is not a unit")
        if self.c * self.c * self.Kprime.disc != self.K.disc * self.F.disc:
            raise InvalidParameters("dK * dF != c^2 * dK'")
        if (self.embedK * self.embedF).agreement(self.embedKprime * self.c) < self.prec:
            raise InvalidParameters("embeddings are not compatible")

    def to_dict(self) -> dict[str, Any]:
        return {
            "dK": self.K.disc,
            "dF": self.F.disc,
            "dKprime": self.Kprime.disc,
            "p": self.p,
            "prec": self.prec,
            "c": self.c,
            "embedK": self.embedK.to_dict(),
            "embedF": self.embedF.to_dict(),
            "embedKprime": self.embedKprime.to_dict(),
            "epsF": self.epsF.to_dict(),
            "uP": self.uP.to_dict(),
            "y0": self.y0.to_dict(),
            "wF": self.wF.to_dict(),
            "hK": self.hK,
            "hKprime": self.hKprime,
        }


def build_biquad(dK: int, dF: int, p: int, prec: int = 30) -> BiquadConfig:
    K = QuadField.from_integer(dK)
    F = QuadField.from_integer(dF)
    if not K.is_imaginary or F.is_imaginary:
        raise InvalidParameters("need dK < 0 < dF")
    check_prime(p)
    Kprime = QuadField.from_integer(dK * dF)
    c = math.isqrt((K.disc * F.disc) // Kprime.disc)
    for field in (K, F, Kprime):
        if kronecker(field.disc, p) != 1:
            raise PrimeNotSplitCompletely(f"{p} does not split in {field}")
    work = prec + GUARD_DIGITS
    rootK = split_prime(K, p).root(work)
    rootF = split_prime(F, p).root(work)
    rootKp = rootK * rootF / c
    try:
        uP = p_unit(K, p, "p", rootK, prec)
        y0 = p_unit(Kprime, p, "p", rootKp, prec)
        wF = p_unit(F, p, "p", rootF, prec)
    except SearchBoundExceeded as exc:
        raise PUnitSearchFailed(str(exc), exc.bound) from exc
    config = BiquadConfig(
        K=K,
        F=F,
        Kprime=Kprime,
        p=p,
        prec=prec,
        c=c,
        embedK=rootK,
        embedF=rootF,
        embedKprime=rootKp,
        epsF=fundamental_unit(F),
        uP=uP,
        y0=y0,
        wF=wF,
        hK=class_number(K),
        hKprime=class_number(Kprime),
    )
    config.validate()
    logger.info("biquadratic configuration dK=%d dF=%d dK'=%d p=%d", dK, dF, Kprime.disc, p)
    return config

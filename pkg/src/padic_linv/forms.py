from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from sympy.core.intfunc import igcdex

from .errors import InvalidParameters


logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    """Positive definite primitive form a x^2 + b x y + c y^2."""

    a: int
    b: int
    c: int

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def normalized(self) -> BinaryQuadraticForm:
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        return BinaryQuadraticForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduced(self) -> BinaryQuadraticForm:
        f = self.normalized()
        while not f.is_reduced():
            f = BinaryQuadraticForm(f.c, -f.b, f.a).normalized()
        return f

    def inverse(self) -> BinaryQuadraticForm:
        return BinaryQuadraticForm(self.a, -self.b, self.c).reduced()

    def __mul__(self, other: BinaryQuadraticForm) -> BinaryQuadraticForm:
        if self.disc != other.disc:
            raise InvalidParameters(f"cannot compose {self} and {other}")
        f1, f2 = (self, other) if self.a <= other.a else (other, self)
        disc = self.disc
        s = (f1.b + f2.b) // 2
        n = f2.b - s
        if f2.a % f1.a == 0:
            y1, d = 0, f1.a
        else:
            y1, _, d = (int(v) for v in igcdex(f2.a, f1.a))
        if s % d == 0:
            x2, y2, d1 = 0, -1, d
        else:
            u, v, d1 = (int(t) for t in igcdex(s, d))
            x2, y2 = u, -v
        v1 = f1.a // d1
        v2 = f2.a // d1
        r = (y1 * y2 * n - x2 * f2.c) % v1
        b3 = f2.b + 2 * v2 * r
        a3 = v1 * v2
        return BinaryQuadraticForm(a3, b3, (b3 * b3 - disc) // (4 * a3)).reduced()

    def __pow__(self, n: int) -> BinaryQuadraticForm:
        result = principal_form(self.disc)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def principal_form(disc: int) -> BinaryQuadraticForm:
    b = disc % 2
    return BinaryQuadraticForm(1, b, (b * b - disc) // 4)


@lru_cache(maxsize=256)
def reduced_forms(disc: int) -> tuple[BinaryQuadraticForm, ...]:
    """All reduced primitive forms of a negative discriminant, principal form first."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidParameters(f"{disc} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(BinaryQuadraticForm(a, b, c))
        a += 1
    out.sort()
    logger.debug("disc %d: %d reduced forms", disc, len(out))
    return tuple(out)


def form_class_of_prime(disc: int, p: int, root: int) -> BinaryQuadraticForm:
    """Reduced form of the prime ideal (p, (-b + sqrt(disc))/2) with b = root mod p."""
    b = root % p
    if (b - disc) % 2:
        b -= p
    num = b * b - disc
    if num % (4 * p):
        raise InvalidParameters(f"{root} is not a square root of {disc} mod {p}")
    return BinaryQuadraticForm(p, b, num // (4 * p)).reduced()


def form_order(f: BinaryQuadraticForm) -> int:
    e = principal_form(f.disc)
    g = f
    n = 1
    while g != e:
        g = g * f
        n += 1
    return n


def representation_counts(f: BinaryQuadraticForm, bound: int) -> list[int]:
    """r_f(n) for 0 <= n <= bound."""
    counts = [0] * (bound + 1)
    a, b, c = f.a, f.b, f.c
    D = -f.disc
    ymax = math.isqrt(4 * a * bound // D) + 1
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + c y^2 <= bound
        rest = 4 * a * (bound - c * y * y) + b * b * y * y
        if rest < 0:
            continue
        s = math.isqrt(rest)
        lo = (-b * y - s) // (2 * a) - 1
        hi = (-b * y + s) // (2 * a) + 1
        for x in range(lo, hi + 1):
            n = f(x, y)
            if 0 <= n <= bound:
                counts[n] += 1
    return counts

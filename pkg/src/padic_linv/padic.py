from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence, Union

from sympy import Poly, cyclotomic_poly, integer_log, isprime, multiplicity, n_order, primefactors, symbols
from sympy.ntheory import sqrt_mod

from .errors import (
    DivisionByImpreciseZero,
    NotAUnit,
    NotAUnitInExtension,
    NotSimpleRoot,
    OutsideConvergenceDomain,
    PrecisionExhausted,
    RootOfUnityConstructionFailed,
    RootSeedInvalid,
    UnsupportedPrime,
)


logger = logging.getLogger(__name__)

INF = math.inf

Rational = Union[int, Fraction]


@lru_cache(maxsize=512)
def check_prime(p: int) -> int:
    if p == 2:
        raise UnsupportedPrime("p = 2 is not supported")
    if p < 2 or not isprime(p):
        raise UnsupportedPrime(f"{p} is not an odd prime")
    return p


def vp(n: Rational, p: int) -> int | float:
    """p-adic valuation of a nonzero rational; +inf for 0."""
    if n == 0:
        return INF
    if isinstance(n, Fraction):
        return int(multiplicity(p, abs(n.numerator))) - int(multiplicity(p, n.denominator))
    return int(multiplicity(p, abs(int(n))))


def _ilog(n: int, p: int) -> int:
    return int(integer_log(n, p)[0]) if n >= 1 else 0


@dataclass(frozen=True)
class PadicScalar:
    """Element of Q_p with capped relative precision.

    A nonzero value is p^val * unit with unit known modulo p^prec. The
    zero-to-precision state has val = inf and prec holding the absolute
    precision.
    """

    p: int
    val: int | float
    unit: int
    prec: int

    # -- construction -----------------------------------------------------

    @classmethod
    def _normalized(cls, p: int, val: int, unit: int, relprec: int) -> PadicScalar:
        if relprec <= 0:
            return cls(p, INF, 0, val + relprec)
        unit %= p**relprec
        if unit == 0:
            return cls(p, INF, 0, val + relprec)
        k = int(multiplicity(p, unit))
        if k:
            unit //= p**k
            val += k
            relprec -= k
        return cls(p, val, unit, relprec)

    @classmethod
    def zero(cls, p: int, absprec: int) -> PadicScalar:
        return cls(check_prime(p), INF, 0, absprec)

    @classmethod
    def from_rational(cls, x: Rational, p: int, prec: int) -> PadicScalar:
        """Exact rational rounded to `prec` significant digits."""
        check_prime(p)
        x = Fraction(x)
        if x == 0:
            return cls(p, INF, 0, prec)
        num, den = x.numerator, x.denominator
        a = int(multiplicity(p, abs(num)))
        b = int(multiplicity(p, den))
        mod = p**prec
        unit = (num // p**a) * pow(den // p**b, -1, mod)
        return cls._normalized(p, a - b, unit, prec)

    @classmethod
    def from_residue(cls, n: int, p: int, absprec: int) -> PadicScalar:
        """Integer known modulo p^absprec."""
        check_prime(p)
        return cls._normalized(p, 0, n, absprec)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PadicScalar:
        p = check_prime(int(d["p"]))
        prec = int(d["prec"])
        if d.get("val") in ("inf", None) or d.get("val") == INF:
            return cls(p, INF, 0, prec)
        unit = 0
        for digit in reversed(d.get("digits") or []):
            unit = unit * p + int(digit)
        return cls._normalized(p, int(d["val"]), unit, prec)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.val == INF

    @property
    def absprec(self) -> int:
        if self.is_zero():
            return self.prec
        return int(self.val) + self.prec

    @property
    def relprec(self) -> int:
        return 0 if self.is_zero() else self.prec

    def digits(self) -> list[int]:
        out: list[int] = []
        u = self.unit
        for _ in range(self.relprec):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def residue(self, n: int | None = None) -> int:
        """Value modulo p^n as an integer in [0, p^n)."""
        n = self.absprec if n is None else n
        if n > self.absprec:
            raise PrecisionExhausted(f"{n} digits requested, {self.absprec} known")
        if self.is_zero():
            return 0
        if self.val < 0:
            raise NotAUnit("value is not p-integral")
        if self.val >= n:
            return 0
        return (self.unit * self.p ** int(self.val)) % self.p**n

    def lift(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** int(self.val)

    def with_absprec(self, n: int) -> PadicScalar:
        if self.is_zero():
            return PadicScalar(self.p, INF, 0, min(self.prec, n))
        return PadicScalar._normalized(self.p, int(self.val), self.unit, min(self.prec, n - int(self.val)))

    def agreement(self, other: PadicScalar | Rational) -> int:
        """Number of absolute p-adic digits on which self and other agree."""
        diff = self - other
        return diff.absprec if diff.is_zero() else int(diff.val)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "val": "inf" if self.is_zero() else int(self.val),
            "digits": self.digits(),
            "prec": self.prec,
        }

    def __str__(self) -> str:
        p = self.p
        terms = []
        if not self.is_zero():
            for i, d in enumerate(self.digits()):
                if not d:
                    continue
                e = int(self.val) + i
                if e == 0:
                    terms.append(str(d))
                elif e == 1:
                    terms.append(f"{d}*{p}")
                else:
                    terms.append(f"{d}*{p}^{e}")
        terms.append(f"O({p}^{self.absprec})")
        return " + ".join(terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: object) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            if x == 0:
                return PadicScalar(self.p, INF, 0, self.absprec + max(self.relprec, 1))
            v = vp(x, self.p)
            prec = max(self.relprec, self.absprec - int(v), 1)
            return PadicScalar.from_rational(x, self.p, prec)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        absprec = min(self.absprec, o.absprec)
        if self.is_zero():
            return o.with_absprec(absprec)
        if o.is_zero():
            return self.with_absprec(absprec)
        m = min(int(self.val), int(o.val))
        if absprec <= m:
            return PadicScalar(self.p, INF, 0, absprec)
        p = self.p
        total = self.unit * p ** (int(self.val) - m) + o.unit * p ** (int(o.val) - m)
        return PadicScalar._normalized(p, m, total, absprec - m)

    __radd__ = __add__

    def __neg__(self) -> PadicScalar:
        if self.is_zero():
            return self
        return PadicScalar._normalized(self.p, int(self.val), -self.unit, self.prec)

    def __sub__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            a = self.absprec if self.is_zero() else int(self.val)
            b = o.absprec if o.is_zero() else int(o.val)
            return PadicScalar(self.p, INF, 0, a + b)
        r = min(self.prec, o.prec)
        return PadicScalar._normalized(self.p, int(self.val) + int(o.val), self.unit * o.unit, r)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise DivisionByImpreciseZero(f"divisor is zero to precision O({o.p}^{o.absprec})")
        if self.is_zero():
            return PadicScalar(self.p, INF, 0, self.absprec - int(o.val))
        r = min(self.prec, o.prec)
        mod = self.p**r
        unit = self.unit * pow(o.unit, -1, mod)
        return PadicScalar._normalized(self.p, int(self.val) - int(o.val), unit, r)

    def __rtruediv__(self, other: object) -> PadicScalar:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> PadicScalar:
        if n == 0:
            return PadicScalar._normalized(self.p, 0, 1, max(self.relprec, 1))
        if self.is_zero():
            if n < 0:
                raise DivisionByImpreciseZero("negative power of zero-to-precision")
            return PadicScalar(self.p, INF, 0, self.absprec * n)
        if n < 0:
            return (1 / self) ** (-n)
        mod = self.p**self.prec
        return PadicScalar._normalized(self.p, int(self.val) * n, pow(self.unit, n, mod), self.prec)


# -- transcendental functions ---------------------------------------------


def teichmuller(a: int, p: int, N: int) -> PadicScalar:
    check_prime(p)
    if a % p == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    return PadicScalar.from_residue(teichmuller_residue(a, p, N), p, N)


@lru_cache(maxsize=8192)
def teichmuller_residue(a: int, p: int, N: int) -> int:
    mod = p**N
    x = a % mod
    for _ in range(N):
        x = pow(x, p, mod)
    return x


def _series_length(k: int, W: int, p: int) -> int:
    """Largest j whose log-series term (valuation >= j(k+1) - v_p(j)) may survive mod p^W."""
    j = 1
    while j * (k + 1) - _ilog(j, p) < W:
        j += 1
    return j - 1


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], mod: int) -> list[int]:
    d = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i]
        if c:
            for j in range(d):
                prod[i - d + j] -= c * modulus[j]
        prod[i] = 0
    out = [c % mod for c in prod[:d]]
    return out + [0] * (d - len(out))


def _poly_powmod(a: Sequence[int], e: int, modulus: Sequence[int], mod: int) -> list[int]:
    d = len(modulus) - 1
    result = [1 % mod] + [0] * (d - 1)
    base = [c % mod for c in a]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, mod)
        base = _poly_mulmod(base, base, modulus, mod)
        e >>= 1
    return result


def _log_residues(coords: Sequence[int], modulus: Sequence[int], p: int, r: int) -> list[int]:
    """Iwasawa log of a unit of Z_p[x]/(modulus) known mod p^r, as coordinates mod p^r."""
    d = len(modulus) - 1
    k = max(1, math.isqrt(r))
    W = r + k
    J = _series_length(k, W, p)
    G = _ilog(J, p) if J else 0
    big = p ** (W + G)
    e = (p**d - 1) * p**k
    y = _poly_powmod(coords, e, modulus, big)
    z = list(y)
    z[0] -= 1
    z = [c % big for c in z]
    if any(c % p ** (k + 1) for c in z):
        raise NotAUnitInExtension("element does not reduce to a unit")
    modW = p**W
    total = [0] * d
    zj = [1] + [0] * (d - 1)
    for j in range(1, J + 1):
        zj = _poly_mulmod(zj, z, modulus, big)
        v = int(multiplicity(p, j))
        inv = pow(j // p**v, -1, modW)
        sign = 1 if j % 2 else -1
        for i in range(d):
            total[i] = (total[i] + sign * (zj[i] // p**v) * inv) % modW
    logger.debug("log series: p=%d r=%d k=%d terms=%d", p, r, k, J)
    modr = p**r
    inv_e = pow(p**d - 1, -1, modr)
    return [((c // p**k) * inv_e) % modr for c in total]


def iwasawa_log(x: PadicScalar) -> PadicScalar:
    """Iwasawa logarithm, normalized by log(p) = 0."""
    if x.is_zero():
        raise DivisionByImpreciseZero("logarithm of a zero-to-precision value")
    (value,) = _log_residues([x.unit], (0, 1), x.p, x.prec)
    return PadicScalar.from_residue(value, x.p, x.prec)


def exp_residue(X: int, p: int, A: int, v: int = 1) -> int:
    """exp(X) mod p^A for an integer X of valuation >= v >= 1."""
    N = 0
    while (N + 1) * v - N // (p - 1) < A:
        N += 1
    G = max(0, (N - 1) // (p - 1)) if N else 0
    big = p ** (A + G)
    modA = p**A
    total = 1
    power = 1
    fact_unit = 1
    fact_v = 0
    for n in range(1, N + 1):
        power = power * X % big
        c = int(multiplicity(p, n))
        fact_v += c
        fact_unit = fact_unit * (n // p**c) % modA
        total += (power // p**fact_v) * pow(fact_unit, -1, modA)
    return total % modA


def padic_exp(x: PadicScalar) -> PadicScalar:
    p = x.p
    if x.is_zero():
        if x.absprec < 1:
            raise OutsideConvergenceDomain("argument not known to have positive valuation")
        return PadicScalar.from_residue(1, p, x.absprec)
    if x.val < 1:
        raise OutsideConvergenceDomain(f"exp needs valuation >= 1, got {x.val}")
    A = x.absprec
    return PadicScalar.from_residue(exp_residue(x.residue(A), p, A, int(x.val)), p, A)


def _eval_mod(coeffs: Sequence[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def hensel_root(coeffs: Sequence[int], a0: int, p: int, N: int) -> PadicScalar:
    """Root of sum(coeffs[i] x^i) congruent to a0 mod p, by Newton iteration."""
    check_prime(p)
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    if _eval_mod(coeffs, a0, p) != 0:
        raise RootSeedInvalid(f"f({a0}) is not 0 mod {p}")
    if _eval_mod(deriv, a0, p) == 0:
        raise NotSimpleRoot(f"f'({a0}) vanishes mod {p}")
    x = a0 % p
    k = 1
    while k < N:
        k = min(2 * k, N)
        mod = p**k
        x = (x - _eval_mod(coeffs, x, mod) * pow(_eval_mod(deriv, x, mod), -1, mod)) % mod
    return PadicScalar.from_residue(x, p, N)


def padic_sqrt(a: int, p: int, N: int, seed: int | None = None) -> PadicScalar:
    check_prime(p)
    if seed is None:
        roots = sqrt_mod(a, p, all_roots=True)
        if not roots or a % p == 0:
            raise RootSeedInvalid(f"{a} is not a nonzero square mod {p}")
        seed = min(int(r) for r in roots)
    return hensel_root([-a, 0, 1], seed, p, N)


# -- unramified extensions ------------------------------------------------


@dataclass(frozen=True)
class UnramifiedExtension:
    """Z_p[x]/(modulus) with modulus monic and irreducible mod p."""

    p: int
    modulus: tuple[int, ...]
    prec: int

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @classmethod
    def cyclotomic(cls, f: int, p: int, prec: int) -> UnramifiedExtension:
        check_prime(p)
        if f % p == 0:
            raise RootOfUnityConstructionFailed(f"{p} divides the conductor {f}")
        d = 1 if f <= 2 else int(n_order(p, f))
        x = symbols("x")
        _, factors = Poly(cyclotomic_poly(f, x), x, modulus=p).factor_list()
        g = factors[0][0]
        coeffs = tuple(int(c) % p for c in reversed(g.all_coeffs()))
        if len(coeffs) != d + 1:
            raise RootOfUnityConstructionFailed(f"factor of degree {len(coeffs) - 1}, expected {d}")
        logger.debug("Q_%d(zeta_%d): degree %d modulus %s", p, f, d, coeffs)
        return cls(p, coeffs, prec)

    def element(self, coeffs: Sequence[PadicScalar | Rational]) -> ExtElement:
        out = []
        for c in coeffs:
            out.append(c if isinstance(c, PadicScalar) else PadicScalar.from_rational(c, self.p, self.prec))
        while len(out) < self.degree:
            out.append(PadicScalar.zero(self.p, self.prec))
        return ExtElement(self, tuple(out))

    def from_residues(self, coords: Sequence[int], absprec: int | None = None) -> ExtElement:
        absprec = self.prec if absprec is None else absprec
        return ExtElement(self, tuple(PadicScalar.from_residue(c, self.p, absprec) for c in coords))

    def one(self) -> ExtElement:
        return self.element([1])

    def gen(self) -> ExtElement:
        if self.degree == 1:
            return self.element([-self.modulus[0]])
        return self.element([0, 1])

    def teichmuller_lift(self, x: ExtElement) -> ExtElement:
        coords = [c.residue(1) for c in x.coeffs]
        if not any(coords):
            raise NotAUnitInExtension("zero residue has no Teichmuller lift")
        mod = self.p**self.prec
        q = self.p**self.degree
        y = coords
        for _ in range(self.prec):
            y = _poly_powmod(y, q, self.modulus, mod)
        return self.from_residues(y)

    def root_of_unity(self, f: int) -> ExtElement:
        """Teichmuller lift of the image of x, checked to be a primitive f-th root of unity."""
        zeta = self.teichmuller_lift(self.gen())
        coords = [c.residue() for c in zeta.coeffs]
        mod = self.p**self.prec
        one = [1] + [0] * (self.degree - 1)
        if _poly_powmod(coords, f, self.modulus, mod) != one:
            raise RootOfUnityConstructionFailed(f"zeta^{f} != 1")
        for q in primefactors(f):
            r = _poly_powmod(coords, f // q, self.modulus, self.p)
            if r == [c % self.p for c in one]:
                raise RootOfUnityConstructionFailed(f"zeta has order dividing {f // q}")
        return zeta


@dataclass(frozen=True)
class ExtElement:
    ext: UnramifiedExtension
    coeffs: tuple[PadicScalar, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.ext.degree:
            raise ValueError(f"{len(self.coeffs)} coordinates for a degree {self.ext.degree} extension")

    def _lift(self, other: object) -> ExtElement:
        if isinstance(other, ExtElement):
            return other
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.ext.element([other])
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> ExtElement:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElement(self.ext, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> ExtElement:
        return ExtElement(self.ext, tuple(-a for a in self.coeffs))

    def __sub__(self, other: object) -> ExtElement:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> ExtElement:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> ExtElement:
        if isinstance(other, (int, Fraction, PadicScalar)):
            return ExtElement(self.ext, tuple(a * other for a in self.coeffs))
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.ext.degree
        g = self.ext.modulus
        prod: list[PadicScalar | None] = [None] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                t = a * b
                prod[i + j] = t if prod[i + j] is None else prod[i + j] + t
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            for j in range(d):
                if g[j]:
                    prod[i - d + j] = prod[i - d + j] - c * g[j]
        return ExtElement(self.ext, tuple(prod[:d]))  # type: ignore[arg-type]

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ExtElement:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self.ext.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def constant(self) -> PadicScalar:
        return self.coeffs[0]

    def absprec(self) -> int:
        return min(c.absprec for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def _power_sums(self) -> list[int]:
        g = self.ext.modulus
        d = self.ext.degree
        # Newton identities for the roots of the monic modulus
        e = [1] + [(-1) ** k * g[d - k] for k in range(1, d + 1)]
        s = [d]
        for k in range(1, d):
            acc = (-1) ** (k - 1) * k * e[k]
            for i in range(1, k):
                acc += (-1) ** (i - 1) * e[i] * s[k - i]
            s.append(acc)
        return s

    def trace(self) -> PadicScalar:
        s = self._power_sums()
        total = self.coeffs[0] * s[0]
        for c, si in zip(self.coeffs[1:], s[1:]):
            total = total + c * si
        return total

    def norm(self) -> PadicScalar:
        d = self.ext.degree
        basis = [self.ext.element([0] * i + [1]) for i in range(d)]
        cols = [(self * b).coeffs for b in basis]
        matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
        return _det(matrix)


def _det(matrix: list[list[PadicScalar]]) -> PadicScalar:
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    det: PadicScalar | None = None
    for col in range(n):
        candidates = [r for r in range(col, n) if not m[r][col].is_zero()]
        if not candidates:
            return PadicScalar.zero(m[0][0].p, min(x.absprec for row in m for x in row))
        piv = min(candidates, key=lambda r: m[r][col].val)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pivot = m[col][col]
        det = pivot if det is None else det * pivot
        for r in range(col + 1, n):
            factor = m[r][col] / pivot
            m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    assert det is not None
    return det * sign


def ext_log(x: ExtElement) -> ExtElement:
    """Iwasawa log on the units of an unramified extension; roots of unity go to 0."""
    ext = x.ext
    p = ext.p
    if any(not c.is_zero() and c.val < 0 for c in x.coeffs):
        raise NotAUnitInExtension("element is not integral")
    r = x.absprec()
    if r < 1:
        raise NotAUnitInExtension("no digits known")
    coords = [c.residue(r) for c in x.coeffs]
    if not any(c % p for c in coords):
        raise NotAUnitInExtension("element reduces to 0 in the residue field")
    return ext.from_residues(_log_residues(coords, ext.modulus, p, r), r)

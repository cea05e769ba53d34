from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Protocol, Union

from sympy import bernoulli, binomial

from .errors import (
    InvalidParameters,
    OddCharacter,
    OutsideConvergenceDomain,
    PoleAtOne,
    PrecisionExhausted,
    RootOfUnityConstructionFailed,
)
from .fields import is_fundamental_discriminant, kronecker
from .padic import (
    PadicScalar,
    UnramifiedExtension,
    _log_residues,
    check_prime,
    ext_log,
    teichmuller_residue,
)


logger = logging.getLogger(__name__)

PadicLike = Union[int, Fraction, PadicScalar]


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 1:
        return Fraction(-1, 2)
    b = bernoulli(n)
    return Fraction(int(b.p), int(b.q))


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum((int(binomial(n, k)) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)), Fraction(0))


@dataclass(frozen=True)
class DirichletCharacter:
    """eps_disc * omega^omega_power, with disc = 1 for the trivial character.

    omega is the Teichmuller character at p and is only meaningful when p is set.
    """

    disc: int = 1
    omega_power: int = 0
    p: int | None = None

    def __post_init__(self) -> None:
        if self.disc != 1 and not is_fundamental_discriminant(self.disc):
            raise InvalidParameters(f"{self.disc} is not a fundamental discriminant")
        if self.p is not None:
            check_prime(self.p)
        elif self.omega_power:
            raise InvalidParameters("a Teichmuller twist needs a prime")

    @classmethod
    def quadratic(cls, disc: int) -> DirichletCharacter:
        return cls(disc)

    @classmethod
    def trivial(cls) -> DirichletCharacter:
        return cls()

    def twist(self, k: int, p: int | None = None) -> DirichletCharacter:
        return replace(self, omega_power=self.omega_power + k, p=p or self.p)

    @property
    def k(self) -> int:
        return self.omega_power % (self.p - 1) if self.p else 0

    @property
    def is_rational(self) -> bool:
        return self.k == 0

    @property
    def base_conductor(self) -> int:
        return abs(self.disc) if self.disc != 1 else 1

    @property
    def conductor(self) -> int:
        f = self.base_conductor
        if self.k and self.p and f % self.p:
            f *= self.p
        return f

    @property
    def parity(self) -> int:
        return kronecker(self.disc, -1) * (-1) ** self.k

    def is_trivial(self) -> bool:
        return self.disc == 1 and self.k == 0

    def value(self, a: int) -> int:
        """Value of the rational part eps_disc at a."""
        if self.disc == 1:
            return 1
        if math.gcd(a, self.disc) != 1:
            return 0
        return kronecker(self.disc, a)

    def value_residue(self, a: int, N: int) -> int:
        """Value at a as an integer mod p^N, Teichmuller factor included."""
        chi = self.value(a)
        if not self.k:
            return chi % (self.p**N) if self.p else chi
        p = self.p
        assert p is not None
        if a % p == 0 or chi == 0:
            return 0
        return chi * pow(teichmuller_residue(a % p, p, N), self.k, p**N) % p**N

    def value_table(self) -> dict[int, int]:
        f = self.base_conductor
        return {a: self.value(a) for a in range(f)}

    def __str__(self) -> str:
        base = "1" if self.disc == 1 else f"eps_{self.disc}"
        return base if not self.k else f"{base}*omega^{self.k}"


def gen_bernoulli(chi: DirichletCharacter, n: int) -> Fraction:
    """B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f) for a rational character."""
    if not chi.is_rational:
        raise InvalidParameters("use gen_bernoulli_padic for Teichmuller twists")
    f = chi.base_conductor
    total = sum((chi.value(a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1)), Fraction(0))
    return Fraction(f) ** (n - 1) * total


def gen_bernoulli_padic(chi: DirichletCharacter, n: int, prec: int) -> PadicScalar:
    """B_{n,chi} for chi with a Teichmuller factor, as a p-adic number."""
    p = chi.p
    if p is None:
        raise InvalidParameters("character has no prime")
    if chi.is_rational:
        return PadicScalar.from_rational(gen_bernoulli(chi, n), p, prec + n + 4)
    W = prec + 4
    f = chi.conductor
    total = Fraction(0)
    for a in range(1, f + 1):
        v = chi.value_residue(a, W)
        if v:
            total += v * bernoulli_poly(n, Fraction(a, f))
    total *= Fraction(f) ** (n - 1)
    if total == 0:
        return PadicScalar.zero(p, W - 2)
    return PadicScalar.from_rational(total, p, W + n + 4).with_absprec(W - 2)


def classical_L_at_nonpos(chi: DirichletCharacter, n: int) -> Fraction:
    """L(1 - n, chi) = -B_{n,chi}/n, zero when the parity of chi differs from (-1)^n."""
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    if not chi.is_trivial() and chi.parity != (-1) ** n:
        return Fraction(0)
    return -gen_bernoulli(chi, n) / n


def interpolation_value(chi: DirichletCharacter, n: int, p: int, prec: int) -> PadicScalar:
    """-(1 - chi omega^-n (p) p^(n-1)) B_{n, chi omega^-n} / n."""
    base = chi if chi.p == p else replace(chi, p=p)
    shifted = base.twist(-n)
    if shifted.is_rational:
        rational = DirichletCharacter(base.disc)
        euler = 1 - rational.value(p) * Fraction(p) ** (n - 1)
        value = -euler * gen_bernoulli(rational, n) / n
        if value == 0:
            return PadicScalar.zero(p, prec)
        return PadicScalar.from_rational(value, p, prec)
    return -gen_bernoulli_padic(shifted, n, prec) / n


class AnalyticFunction(Protocol):
    p: int
    prec: int

    def with_precision(self, prec: int) -> AnalyticFunction: ...

    def evaluate(self, s: PadicLike) -> PadicScalar: ...


def _as_padic(s: PadicLike, p: int, prec: int) -> PadicScalar:
    if isinstance(s, PadicScalar):
        return s
    return PadicScalar.from_rational(Fraction(s), p, prec)


def _falling_factorials(M: int) -> list[list[int]]:
    out = [[1]]
    for j in range(1, M + 1):
        prev = out[-1]
        nxt = [0] * (j + 1)
        # multiply by (t - (j - 1))
        for i, c in enumerate(prev):
            nxt[i + 1] += c
            nxt[i] -= (j - 1) * c
        out.append(nxt)
    return out


def _bernoulli_cutoff(p: int, W: int) -> int:
    # v(B_j F^j / j!) >= j - 1 - floor((j - 1)/(p - 1))
    j = 1
    while j - 1 - (j - 1) // (p - 1) < W:
        j += 1
    return j


def _exp_cutoff(p: int, W: int) -> int:
    i = 1
    while i - (i - 1) // (p - 1) < W:
        i += 1
    return i


@dataclass(frozen=True)
class PadicLSeries:
    """Kubota-Leopoldt L_p(s, chi) for an even character, as a power series in t = 1 - s.

    L_p(s, chi) = -(1/F) t^-1 sum_a chi(a) <a>^t sum_j binom(t, j) B_j (F/a)^j
    with F = lcm(conductor, p) and a over 1..F prime to p.
    """

    chi: DirichletCharacter
    p: int
    prec: int = 20
    truncation: int | None = None

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.chi.p not in (None, self.p):
            raise InvalidParameters(f"character twisted at {self.chi.p}, series at {self.p}")
        if self.prec < 1:
            raise InvalidParameters("precision must be positive")
        if self.character.parity != 1:
            raise OddCharacter(f"{self.chi} is odd")

    @property
    def character(self) -> DirichletCharacter:
        return self.chi if self.chi.p == self.p else replace(self.chi, p=self.p)

    @property
    def modulus(self) -> int:
        f = self.character.base_conductor
        return f * self.p // math.gcd(f, self.p)

    @property
    def working_precision(self) -> int:
        return self.prec + 3

    def with_precision(self, prec: int) -> PadicLSeries:
        return replace(self, prec=prec)

    @cached_property
    def _t_coefficients(self) -> list[int]:
        p = self.p
        W = self.working_precision
        modW = p**W
        F = self.modulus
        chi = self.character
        M = self.truncation if self.truncation is not None else _bernoulli_cutoff(p, W)
        K = _exp_cutoff(p, W)
        fall = _falling_factorials(M)
        beta = []
        fact = 1
        for j in range(M + 1):
            if j:
                fact *= j
            b = bernoulli_number(j) * Fraction(F) ** j / fact
            beta.append(b.numerator * pow(b.denominator, -1, modW) % modW)
        Q = [[beta[j] * c % modW for c in fall[j]] for j in range(M + 1)]
        fact_v = [0]
        fact_unit = [1]
        for i in range(1, K + 1):
            v = 0
            n = i
            while n % p == 0:
                n //= p
                v += 1
            fact_v.append(fact_v[-1] + v)
            fact_unit.append(fact_unit[-1] * n % modW)
        G = fact_v[-1]
        big = p ** (W + G)
        g = [0] * (K + M + 1)
        for a in range(1, F + 1):
            if a % p == 0:
                continue
            theta = chi.value_residue(a, W)
            if theta == 0:
                continue
            inv = pow(a, -1, modW)
            P = [0] * (M + 1)
            power = 1
            for j in range(M + 1):
                row = Q[j]
                for i in range(j + 1):
                    P[i] += power * row[i]
                power = power * inv % modW
            P = [c % modW for c in P]
            (ell,) = _log_residues([a], (0, 1), p, W + G)
            E = [theta]
            lp = 1
            for i in range(1, K + 1):
                lp = lp * ell % big
                term = (lp // p ** fact_v[i]) * pow(fact_unit[i], -1, modW) % modW
                E.append(theta * term % modW)
            for i1, e in enumerate(E):
                if e:
                    for i2, c in enumerate(P):
                        g[i1 + i2] += e * c
        g = [c % modW for c in g]
        logger.debug("L_p series for %s at p=%d: F=%d M=%d K=%d W=%d", chi, p, F, M, K, W)
        return g

    @property
    def has_pole(self) -> bool:
        return self._t_coefficients[0] != 0

    def coefficients(self) -> list[PadicScalar]:
        """Coefficients of L_p in powers of t = 1 - s (pole term excluded)."""
        W = self.working_precision
        F = self.modulus
        return [-PadicScalar.from_residue(c, self.p, W) / F for c in self._t_coefficients[1:]]

    def _pole_residue(self) -> PadicScalar:
        return -PadicScalar.from_residue(self._t_coefficients[0], self.p, self.working_precision) / self.modulus

    def _t(self, s: PadicLike) -> PadicScalar:
        s = _as_padic(s, self.p, self.working_precision + 2)
        if not s.is_zero() and s.val < 0:
            raise OutsideConvergenceDomain(f"s = {s} is not in Z_p")
        return 1 - s

    def evaluate(self, s: PadicLike) -> PadicScalar:
        t = self._t(s)
        coeffs = self.coefficients()
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * t + c
        if self.has_pole:
            if t.is_zero():
                raise PoleAtOne("L_p of the trivial character has a pole at s = 1")
            acc = acc + self._pole_residue() / t
        return acc

    def derivative(self, s: PadicLike) -> PadicScalar:
        """d/ds L_p(s), differentiating the t-series term by term."""
        t = self._t(s)
        coeffs = self.coefficients()
        deriv = [c * k for k, c in enumerate(coeffs)][1:]
        if not deriv:
            return PadicScalar.zero(self.p, self.working_precision)
        acc = deriv[-1]
        for c in reversed(deriv[:-1]):
            acc = acc * t + c
        if self.has_pole:
            if t.is_zero():
                raise PoleAtOne("L_p of the trivial character has a pole at s = 1")
            acc = acc - self._pole_residue() / (t * t)
        return -acc


def kubota_leopoldt(chi: DirichletCharacter, p: int, prec: int = 20) -> PadicLSeries:
    return PadicLSeries(chi, p, prec)


def _central_difference(f: AnalyticFunction, s0: PadicScalar, k: int) -> PadicScalar:
    h = f.p**k
    return (f.evaluate(s0 + h) - f.evaluate(s0 - h)) / (2 * h)


def kl_derivative(f: AnalyticFunction, s0: PadicLike, prec: int | None = None) -> PadicScalar:
    """Derivative at s0 by symmetric differences with steps p^k and p^(k+1).

    The two estimates must agree to `prec` digits; the result carries the
    agreed digits as its precision.
    """
    prec = f.prec if prec is None else prec
    p = f.p
    k1 = (prec + 4) // 2 + 1
    k2 = k1 + 1
    work = f.with_precision(prec + k2 + 4)
    s = _as_padic(s0, p, 2 * (prec + k2 + 4))
    d1 = _central_difference(work, s, k1)
    d2 = _central_difference(work, s, k2)
    agree = d1.agreement(d2)
    if agree < prec:
        raise PrecisionExhausted(f"difference quotients agree to {agree} digits, {prec} requested")
    logger.debug("kl_derivative at %s: steps p^%d, p^%d agree to %d digits", s0, k1, k2, agree)
    return d2.with_absprec(min(agree, prec))


def leopoldt_at_one(chi: DirichletCharacter, p: int, prec: int = 20) -> PadicScalar:
    """L_p(1, chi) = -(1 - chi(p)/p) (tau(chi)/f) sum_a chi(a) log_p(1 - zeta^a) for even quadratic chi."""
    check_prime(p)
    if chi.is_trivial():
        raise PoleAtOne("L_p(s, 1) has a pole at s = 1")
    if not chi.is_rational:
        raise InvalidParameters("leopoldt_at_one takes a rational character")
    if chi.parity != 1:
        raise OddCharacter(f"{chi} is odd")
    f = chi.base_conductor
    W = prec + 4
    ext = UnramifiedExtension.cyclotomic(f, p, W)
    zeta = ext.root_of_unity(f)
    powers = [ext.one()]
    for _ in range(f):
        powers.append(powers[-1] * zeta)
    gauss = powers[0] * 0
    total = powers[0] * 0
    for a in range(1, f + 1):
        c = chi.value(a)
        if c:
            gauss = gauss + powers[a] * c
            total = total + ext_log(1 - powers[a]) * c
    euler = 1 - Fraction(chi.value(p), p)
    value = gauss * total * (-euler / f)
    for coord in value.coeffs[1:]:
        if not coord.is_zero() and coord.val < prec:
            raise RootOfUnityConstructionFailed("value does not lie in Q_p")
    logger.debug("L_p(1, %s) at p=%d over an extension of degree %d", chi, p, ext.degree)
    return value.constant().with_absprec(prec)

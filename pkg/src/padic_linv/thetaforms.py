from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Iterable

from .cyclotomic import CyclotomicInt
from .errors import (
    CharacterDescends,
    IdentityFails,
    InvalidParameters,
    LengthExhausted,
    RegularCase,
)
from .fields import QuadField, split_prime
from .forms import (
    BinaryQuadraticForm,
    form_class_of_prime,
    form_order,
    principal_form,
    reduced_forms,
    representation_counts,
)
from .lfunctions import DirichletCharacter
from .models import CheckResult


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassCharacter:
    """Character of the class group, psi(C) = zeta_order^exponent(C)."""

    field: QuadField
    forms: tuple[BinaryQuadraticForm, ...]
    exponents: tuple[int, ...]
    order: int

    @property
    def class_number(self) -> int:
        return len(self.forms)

    def exponent(self, f: BinaryQuadraticForm) -> int:
        return self.exponents[self.forms.index(f.reduced())]

    def __call__(self, f: BinaryQuadraticForm) -> CyclotomicInt:
        return CyclotomicInt.zeta_power(self.order, self.exponent(f))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def is_quadratic(self) -> bool:
        return all((2 * k) % self.order == 0 for k in self.exponents)

    def conjugate(self) -> ClassCharacter:
        return replace(self, exponents=tuple((-k) % self.order for k in self.exponents))

    def table(self) -> dict[str, Any]:
        return {str(f): self(f).to_json() for f in self.forms}


def _closure(start: set[BinaryQuadraticForm], gens: Iterable[BinaryQuadraticForm]) -> set[BinaryQuadraticForm]:
    gens = list(gens)
    seen = set(start)
    frontier = list(start)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def class_characters(K: QuadField) -> list[ClassCharacter]:
    """All characters of the class group, the trivial one first."""
    if not K.is_imaginary:
        raise InvalidParameters(f"{K} is not imaginary")
    forms = reduced_forms(K.disc)
    identity = principal_form(K.disc)
    exponent = math.lcm(*(form_order(f) for f in forms))
    gens: list[BinaryQuadraticForm] = []
    subgroup = {identity}
    for f in forms:
        if f not in subgroup:
            gens.append(f)
            subgroup = _closure(subgroup, gens)
    chars = []
    for assignment in itertools.product(range(exponent), repeat=len(gens)):
        values = {identity: 0}
        frontier = [identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, k in zip(gens, assignment):
                    y = x * g
                    v = (values[x] + k) % exponent
                    if y in values:
                        if values[y] != v:
                            ok = False
                            break
                    else:
                        values[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok:
            chars.append(ClassCharacter(K, forms, tuple(values[f] for f in forms), exponent))
    logger.debug("%s: class number %d, %d characters", K, len(forms), len(chars))
    return chars


@dataclass(frozen=True)
class QExpansion:
    """a_0, ..., a_L of a weight one form; coefficients in Z[zeta_order]."""

    coeffs: tuple[CyclotomicInt, ...]
    level: int
    nebentypus: DirichletCharacter
    order: int
    weight: int = 1
    eisenstein_like: bool = False

    @property
    def length(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> CyclotomicInt:
        return self.coeffs[n]

    def _with(self, coeffs: Iterable[CyclotomicInt], **changes: Any) -> QExpansion:
        return replace(self, coeffs=tuple(coeffs), **changes)

    def truncate(self, L: int) -> QExpansion:
        return self._with(self.coeffs[: L + 1])

    def scale(self, c: CyclotomicInt | int) -> QExpansion:
        return self._with(a * c for a in self.coeffs)

    def __sub__(self, other: QExpansion) -> QExpansion:
        L = min(self.length, other.length)
        return self._with(a - b for a, b in zip(self.coeffs[: L + 1], other.coeffs[: L + 1]))

    def agrees_with(self, other: QExpansion, upto: int | None = None) -> bool:
        L = min(self.length, other.length) if upto is None else upto
        return all(self[n] == other[n] for n in range(1, L + 1))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def to_json(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "weight": self.weight,
            "nebentypus": str(self.nebentypus),
            "cyclotomic_order": self.order,
            "eisenstein_like": self.eisenstein_like,
            "coeffs": [a.to_json() for a in self.coeffs[1:]],
        }


def theta_qexp(psi: ClassCharacter, L: int) -> QExpansion:
    """theta_psi = sum over integral ideals a of psi(a) q^N(a), to q^L."""
    if psi.is_trivial():
        raise CharacterDescends("the trivial character gives an Eisenstein series")
    if L < 1:
        raise InvalidParameters("length must be positive")
    K = psi.field
    w = K.roots_of_unity
    zero = CyclotomicInt.integer(psi.order, 0)
    coeffs = [zero] * (L + 1)
    for f in psi.forms:
        counts = representation_counts(f, L)
        value = psi(f)
        for n in range(1, L + 1):
            r = counts[n]
            if r:
                if r % w:
                    raise ValueError(f"{r} representations of {n} by {f} is not a multiple of {w}")
                coeffs[n] = coeffs[n] + value * (r // w)
    if psi.is_quadratic():
        logger.warning("%s: genus character, theta series is Eisenstein-like", K)
    return QExpansion(
        coeffs=tuple(coeffs),
        level=abs(K.disc),
        nebentypus=DirichletCharacter(K.disc),
        order=psi.order,
        eisenstein_like=psi.is_quadratic(),
    )


def p_stabilize(theta: QExpansion, p: int, psi_p: CyclotomicInt, psi_pbar: CyclotomicInt) -> QExpansion:
    """f(z) = theta(z) - psi(Pbar) theta(pz); only the irregular case psi(P) = psi(Pbar)."""
    if psi_p != psi_pbar:
        raise RegularCase("psi(P) != psi(Pbar): two distinct p-stabilizations")
    out = []
    for n, a in enumerate(theta.coeffs):
        out.append(a - psi_pbar * theta[n // p] if n and n % p == 0 else a)
    return theta._with(out, level=theta.level * p)


def up_action(g: QExpansion, p: int) -> QExpansion:
    L = g.length // p
    if L == 0:
        raise LengthExhausted(f"U_{p} of an expansion of length {g.length}")
    return g._with(g[n * p] for n in range(L + 1))


def hecke_tl(g: QExpansion, ell: int) -> QExpansion:
    """(T_ell g)_n = g_{n ell} + eps(ell) g_{n/ell} in weight one."""
    if g.level % ell == 0:
        raise InvalidParameters(f"{ell} divides the level {g.level}")
    L = g.length // ell
    if L == 0:
        raise LengthExhausted(f"T_{ell} of an expansion of length {g.length}")
    eps = g.nebentypus.value(ell)
    out = []
    for n in range(L + 1):
        c = g[n * ell]
        if n and n % ell == 0:
            c = c + g[n // ell] * eps
        out.append(c)
    return g._with(out)


def jordan_matrix(theta: QExpansion, f: QExpansion, p: int) -> list[list[CyclotomicInt]]:
    """Matrix of U_p on the basis (theta, f), solved from the coefficients at n = 1 and n = p.

    Column j holds the coordinates of U_p applied to the j-th basis vector; the
    solution is then checked against every coefficient of the U_p images.
    """
    L = min(theta.length, f.length)
    if L < p * p:
        raise LengthExhausted(f"reading U_{p} on (theta, f) needs length {p * p}, got {L}")
    images = (up_action(theta, p), up_action(f, p))
    det = theta[1] * f[p] - f[1] * theta[p]
    try:
        inv = det.unit_inverse()
    except ValueError as exc:
        raise IdentityFails(f"theta and f are not independent at n = 1, {p}") from exc
    m: list[list[CyclotomicInt]] = [[det * 0, det * 0], [det * 0, det * 0]]
    for j, g in enumerate(images):
        m[0][j] = (g[1] * f[p] - f[1] * g[p]) * inv
        m[1][j] = (theta[1] * g[p] - g[1] * theta[p]) * inv
    for j, g in enumerate(images):
        for n in range(1, g.length + 1):
            if g[n] != m[0][j] * theta[n] + m[1][j] * f[n]:
                raise IdentityFails(f"U_{p} leaves span(theta, f) at n = {n}")
    return m


def _matmul(a: list[list[CyclotomicInt]], b: list[list[CyclotomicInt]]) -> list[list[CyclotomicInt]]:
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def prime_values(psi: ClassCharacter, p: int) -> tuple[CyclotomicInt, CyclotomicInt]:
    """(psi(P), psi(Pbar)) for the place P where sqrt(disc) reduces to the split seed."""
    split = split_prime(psi.field, p)
    form = form_class_of_prime(psi.field.disc, p, split.seed)
    return psi(form), psi(form.inverse())


def up_identity_check(psi: ClassCharacter, p: int, L: int) -> CheckResult:
    alpha, alpha_bar = prime_values(psi, p)
    if alpha != alpha_bar:
        raise RegularCase(f"psi(P) != psi(Pbar) at p = {p}")
    long_theta = theta_qexp(psi, max(L, p * p))
    long_f = p_stabilize(long_theta, p, alpha, alpha_bar)
    theta, f = long_theta.truncate(L), long_f.truncate(L)
    upto = L // p
    u_theta = up_action(theta, p)
    u_f = up_action(f, p)
    failures = []
    for n in range(1, upto + 1):
        if u_theta[n] - alpha * theta[n] != alpha * f[n]:
            failures.append(("theta", n))
        if u_f[n] - alpha * f[n] != alpha * 0:
            failures.append(("f", n))
    if failures:
        raise IdentityFails(f"U_p identity fails at {failures[:5]}")
    if theta.agrees_with(f):
        raise IdentityFails("theta and its p-stabilization coincide")
    m = jordan_matrix(long_theta, long_f, p)
    shifted = [[m[i][j] - (alpha if i == j else 0) for j in range(2)] for i in range(2)]
    nilpotent = all(c.is_zero() for row in _matmul(shifted, shifted) for c in row)
    nonzero = any(not c.is_zero() for row in shifted for c in row)
    if not (nilpotent and nonzero):
        raise IdentityFails("U_p - psi(P) is not a nonzero nilpotent on the span")
    logger.info("U_p identity at p=%d for %s holds for n <= %d", p, psi.field, upto)
    return CheckResult(
        name="up_identity",
        passed=True,
        agreement=upto,
        details={
            "disc": psi.field.disc,
            "p": p,
            "length": L,
            "checked_upto": upto,
            "jordan_checked_upto": long_theta.length // p,
            "psi_p": alpha.to_json(),
            "eisenstein_like": theta.eisenstein_like,
            "jordan": [[c.to_json() for c in row] for row in m],
        },
    )

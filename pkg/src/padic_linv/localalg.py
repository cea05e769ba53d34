from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from sympy import Poly, QQ, symbols
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.matrices import DomainMatrix

from .errors import (
    ElementNotRegular,
    InvalidParameters,
    NotAMorphism,
    NotSurjective,
    RelationNotLocal,
    TruncationInconclusive,
)
from .models import AlgebraDims


logger = logging.getLogger(__name__)

Vector = tuple[Fraction, ...]
Sparse = dict[int, Fraction]
Monomial = tuple[int, ...]
Relation = Union[str, Mapping[Monomial, Any], Any]

_TRANSFORMS = standard_transformations + (convert_xor,)


# -- exact linear algebra ----------------------------------------------------------


def _to_dm(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _from_dm(dm: DomainMatrix) -> list[list[Fraction]]:
    m = dm.to_Matrix()
    return [[Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols)] for i in range(m.rows)]


def _nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _to_dm(rows, ncols).nullspace()
    if ns.shape[0] == 0:
        return []
    return _from_dm(ns)


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n held as reduced row echelon rows."""

    n: int
    rows: tuple[Vector, ...] = ()
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], n: int) -> Subspace:
        vecs = [[Fraction(x) for x in v] for v in vectors if any(v)]
        if not vecs:
            return cls(n)
        rref, pivots = _to_dm(vecs, n).rref()
        rows = _from_dm(rref)[: len(pivots)]
        return cls(n, tuple(tuple(r) for r in rows), tuple(int(p) for p in pivots))

    @classmethod
    def whole(cls, n: int) -> Subspace:
        return cls(n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        out = list(v)
        for p, row in zip(self.pivots, self.rows):
            c = v[p]
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] -= c * x
        return out

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def coords(self, v: Sequence[Fraction]) -> Vector:
        return tuple(v[p] for p in self.pivots)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.rows + other.rows, self.n)

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows


def _rank(vectors: Iterable[Sequence[Fraction]], n: int) -> int:
    return Subspace.span(vectors, n).dim


# -- algebras -------------------------------------------------------------------------


def _add_into(acc: list[Fraction], sparse: Mapping[int, Fraction], c: Fraction) -> None:
    for k, x in sparse.items():
        acc[k] += c * x


@dataclass(frozen=True, eq=False)
class LocalAlgebra:
    """Finite-dimensional truncation of a complete local Q-algebra.

    table[i][j] holds b_i * b_j sparsely; degrees are the weighted degrees of
    the (homogeneous) basis vectors; counit is the residue map to Q.
    """

    labels: tuple[str, ...]
    degrees: tuple[Fraction, ...]
    table: tuple[tuple[Sparse, ...], ...]
    unit: Vector
    counit: Vector
    truncation: int
    max_weight: Fraction = Fraction(1)
    generators: tuple[tuple[str, Vector], ...] = ()
    monomials: tuple[Monomial, ...] | None = None
    relations: tuple[Mapping[Monomial, Fraction], ...] = ()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def zero(self) -> Vector:
        return tuple(Fraction(0) for _ in range(self.dim))

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def gen(self, name: str) -> Vector:
        for n, v in self.generators:
            if n == name:
                return v
        raise KeyError(name)

    def mul(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        acc = [Fraction(0)] * self.dim
        vs = [(j, y) for j, y in enumerate(v) if y]
        for i, x in enumerate(u):
            if x:
                row = self.table[i]
                for j, y in vs:
                    _add_into(acc, row[j], x * y)
        return tuple(acc)

    def power(self, u: Sequence[Fraction], k: int) -> Vector:
        out = self.unit
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def scale(self, u: Sequence[Fraction], c: Fraction | int) -> Vector:
        return tuple(x * c for x in u)

    def add(self, *vs: Sequence[Fraction]) -> Vector:
        return tuple(sum(xs, Fraction(0)) for xs in zip(*vs))

    def augment(self, u: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.counit, u)), Fraction(0))

    def order(self, u: Sequence[Fraction]) -> Fraction | None:
        degs = [self.degrees[i] for i, x in enumerate(u) if x]
        return min(degs) if degs else None

    @property
    def artinian_certified(self) -> bool:
        """True when m^(D+1) = 0 holds by the relations alone, not by truncation."""
        return max(self.degrees) + self.max_weight <= self.truncation

    def truncation_layer(self) -> Subspace:
        cut = self.truncation - self.max_weight
        return Subspace.span((self.basis_vector(i) for i, d in enumerate(self.degrees) if d > cut), self.dim)

    def render(self, u: Sequence[Fraction]) -> str:
        terms = []
        for i, x in enumerate(u):
            if x:
                lab = self.labels[i]
                terms.append(lab if x == 1 else f"-{lab}" if x == -1 else f"{x}*{lab}")
        return " + ".join(terms) if terms else "0"

    # ideals

    def maximal_ideal(self) -> Subspace:
        return Subspace.span(
            (tuple(e - self.counit[i] * u for e, u in zip(self.basis_vector(i), self.unit)) for i in range(self.dim)),
            self.dim,
        )

    def ideal(self, gens: Iterable[Sequence[Fraction]]) -> Subspace:
        vecs = []
        for g in gens:
            for j in range(self.dim):
                vecs.append(self.mul(g, self.basis_vector(j)))
        return Subspace.span(vecs, self.dim)


def _monomial_label(names: Sequence[str], mono: Monomial) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def _monomials(weights: Sequence[Fraction], D: int) -> list[Monomial]:
    out: list[Monomial] = []

    def rec(prefix: list[int], remaining: Fraction) -> None:
        i = len(prefix)
        if i == len(weights):
            out.append(tuple(prefix))
            return
        e = 0
        while e * weights[i] <= remaining:
            rec(prefix + [e], remaining - e * weights[i])
            e += 1

    rec([], Fraction(D))
    return out


def _parse_relation(rel: Relation, names: Sequence[str]) -> dict[Monomial, Fraction]:
    if isinstance(rel, Mapping):
        return {tuple(int(e) for e in m): Fraction(c) for m, c in rel.items() if c}
    syms = symbols(list(names))
    if isinstance(rel, str):
        expr = parse_expr(rel, local_dict=dict(zip(names, syms)), transformations=_TRANSFORMS)
    else:
        expr = rel
    poly = Poly(expr, *syms, domain="QQ")
    return {tuple(int(e) for e in m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c}


def from_presentation(
    gens: Sequence[str],
    rels: Sequence[Relation],
    D: int,
    weights: Sequence[Fraction | int] | None = None,
) -> LocalAlgebra:
    """Q[gens]/(rels) modulo monomials of weighted degree > D.

    The basis is the set of standard monomials; among monomials of equal
    degree the later generators are eliminated first.
    """
    names = list(gens)
    w = [Fraction(x) for x in (weights if weights is not None else [1] * len(names))]
    if len(w) != len(names) or any(x <= 0 for x in w):
        raise InvalidParameters("one positive weight per generator")
    if D < 0:
        raise InvalidParameters("truncation degree must be >= 0")

    def wdeg(m: Monomial) -> Fraction:
        return sum((e * x for e, x in zip(m, w)), Fraction(0))

    monos = sorted(_monomials(w, D), key=lambda m: (wdeg(m), m[::-1]))
    zero_mono = tuple(0 for _ in names)
    polys = [_parse_relation(r, names) for r in rels]
    polys = [p for p in polys if p]
    for poly in polys:
        if poly.get(zero_mono):
            raise RelationNotLocal(f"relation {poly} has a constant term")
    cols = list(reversed(monos))
    col_of = {m: i for i, m in enumerate(cols)}
    rows = []
    for poly in polys:
        for mu in monos:
            row = [Fraction(0)] * len(cols)
            hit = False
            for nu, c in poly.items():
                m = tuple(a + b for a, b in zip(mu, nu))
                if wdeg(m) <= D:
                    row[col_of[m]] += c
                    hit = True
            if hit and any(row):
                rows.append(row)
    space = Subspace.span(rows, len(cols))
    pivot_monos = {cols[p]: row for p, row in zip(space.pivots, space.rows)}
    basis = [m for m in monos if m not in pivot_monos]
    index = {m: i for i, m in enumerate(basis)}

    def normal_form(m: Monomial) -> Sparse:
        if wdeg(m) > D:
            return {}
        if m in index:
            return {index[m]: Fraction(1)}
        row = pivot_monos[m]
        out: Sparse = {}
        for c, x in enumerate(row):
            if x and cols[c] != m:
                out[index[cols[c]]] = -x
        return out

    table = tuple(
        tuple(normal_form(tuple(a + b for a, b in zip(mi, mj))) for mj in basis) for mi in basis
    )
    n = len(basis)

    def dense(s: Sparse) -> Vector:
        return tuple(s.get(i, Fraction(0)) for i in range(n))

    unit = dense({index[zero_mono]: Fraction(1)})
    generators = []
    for k, name in enumerate(names):
        mono = tuple(int(i == k) for i in range(len(names)))
        generators.append((name, dense(normal_form(mono)) if wdeg(mono) <= D else dense({})))
    logger.debug("presentation %s / %d relations at D=%d: dimension %d", names, len(polys), D, n)
    return LocalAlgebra(
        labels=tuple(_monomial_label(names, m) for m in basis),
        degrees=tuple(wdeg(m) for m in basis),
        table=table,
        unit=unit,
        counit=unit,
        truncation=D,
        max_weight=max(w) if w else Fraction(1),
        generators=tuple(generators),
        monomials=tuple(basis),
        relations=tuple(polys),
    )


@lru_cache(maxsize=1)
def coefficient_field() -> LocalAlgebra:
    one = (Fraction(1),)
    return LocalAlgebra(
        labels=("1",),
        degrees=(Fraction(0),),
        table=(({0: Fraction(1)},),),
        unit=one,
        counit=one,
        truncation=0,
    )


# -- morphisms -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: LocalAlgebra
    target: LocalAlgebra
    images: tuple[Vector, ...]

    def apply(self, v: Sequence[Fraction]) -> Vector:
        acc = [Fraction(0)] * self.target.dim
        for x, img in zip(v, self.images):
            if x:
                for k, y in enumerate(img):
                    if y:
                        acc[k] += x * y
        return tuple(acc)

    def then(self, other: AlgebraMorphism) -> AlgebraMorphism:
        """other o self."""
        return AlgebraMorphism(self.source, other.target, tuple(other.apply(v) for v in self.images))

    def rank(self) -> int:
        return _rank(self.images, self.target.dim)

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and self.is_surjective()

    def kernel(self) -> Subspace:
        n = self.source.dim
        rows = [[self.images[i][k] for i in range(n)] for k in range(self.target.dim)]
        return Subspace.span(_nullspace(rows, n), n)

    def check(self) -> None:
        """Raise NotAMorphism unless unital, local and multiplicative on all basis pairs."""
        A, B = self.source, self.target
        if self.apply(A.unit) != B.unit:
            raise NotAMorphism("unit is not preserved")
        for i in range(A.dim):
            if B.augment(self.images[i]) != A.augment(A.basis_vector(i)):
                raise NotAMorphism(f"basis element {A.labels[i]} is not mapped compatibly with the residue maps")
        for i in range(A.dim):
            for j in range(i, A.dim):
                lhs = self.apply(A.mul(A.basis_vector(i), A.basis_vector(j)))
                rhs = B.mul(self.images[i], self.images[j])
                if lhs != rhs:
                    raise NotAMorphism(f"not multiplicative on {A.labels[i]} * {A.labels[j]}")

    @classmethod
    def identity(cls, A: LocalAlgebra) -> AlgebraMorphism:
        return cls(A, A, tuple(A.basis_vector(i) for i in range(A.dim)))

    @classmethod
    def augmentation(cls, A: LocalAlgebra) -> AlgebraMorphism:
        return cls(A, coefficient_field(), tuple((c,) for c in A.counit))

    @classmethod
    def from_generator_images(
        cls, source: LocalAlgebra, target: LocalAlgebra, images: Mapping[str, Sequence[Fraction]]
    ) -> AlgebraMorphism:
        if source.monomials is None:
            raise InvalidParameters("source is not given by a presentation")
        names = [n for n, _ in source.generators]
        missing = set(names) - set(images)
        if missing:
            raise InvalidParameters(f"no image for {sorted(missing)}")
        gen_images = [tuple(Fraction(x) for x in images[n]) for n in names]
        for img in gen_images:
            if target.augment(img) != 0:
                raise NotAMorphism("a generator is not sent into the maximal ideal")
        cache: dict[Monomial, Vector] = {}

        def evaluate(mono: Monomial) -> Vector:
            if mono not in cache:
                out = target.unit
                for img, e in zip(gen_images, mono):
                    out = target.mul(out, target.power(img, e))
                cache[mono] = out
            return cache[mono]

        for rel in source.relations:
            value = target.zero()
            for mono, c in rel.items():
                value = target.add(value, target.scale(evaluate(mono), c))
            if any(value):
                raise NotAMorphism(f"relation {rel} does not map to 0")
        return cls(source, target, tuple(evaluate(m) for m in source.monomials))


# -- fiber products and subalgebras --------------------------------------------------


def _label(A: LocalAlgebra, v: Sequence[Fraction]) -> str:
    nz = [i for i, x in enumerate(v) if x]
    if not nz:
        return "0"
    first = A.render([v[i] if i == nz[0] else Fraction(0) for i in range(len(v))])
    return first if len(nz) == 1 else f"{first}+..."


def _restrict(
    space: Subspace,
    mul: Callable[[Sequence[Fraction], Sequence[Fraction]], Sequence[Fraction]],
    counit: Callable[[Sequence[Fraction]], Fraction],
    degree: Callable[[int], Fraction],
    labels: Sequence[str],
    unit: Sequence[Fraction],
    truncation: int,
    max_weight: Fraction,
) -> LocalAlgebra:
    """Algebra structure on a multiplicatively closed subspace, in its echelon basis."""
    rows = space.rows
    table = []
    for ri in rows:
        line = []
        for rj in rows:
            prod = mul(ri, rj)
            if not space.contains(prod):
                raise NotAMorphism("subspace is not closed under multiplication")
            line.append({k: x for k, x in enumerate(space.coords(prod)) if x})
        table.append(tuple(line))
    degs = []
    for r in rows:
        support = [degree(i) for i, x in enumerate(r) if x]
        degs.append(min(support))
    return LocalAlgebra(
        labels=tuple(labels),
        degrees=tuple(degs),
        table=tuple(table),
        unit=space.coords(unit),
        counit=tuple(counit(r) for r in rows),
        truncation=truncation,
        max_weight=max_weight,
    )


@dataclass(frozen=True, eq=False)
class FiberProduct:
    algebra: LocalAlgebra
    first: AlgebraMorphism
    second: AlgebraMorphism
    ambient: Subspace

    def element(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
        v = tuple(a) + tuple(b)
        if not self.ambient.contains(v):
            raise InvalidParameters("components do not agree in the base")
        return self.ambient.coords(v)


def fiber_product(f: AlgebraMorphism, g: AlgebraMorphism) -> FiberProduct:
    """{(a, b) : f(a) = g(b)} for surjections f: A -> C and g: B -> C."""
    C = f.target
    if g.target is not C and (g.target.labels != C.labels or g.target.table != C.table):
        raise InvalidParameters("morphisms have different targets")
    if not f.is_surjective() or not g.is_surjective():
        raise NotSurjective("fiber products are taken along surjections")
    A, B = f.source, g.source
    nA, nB = A.dim, B.dim
    n = nA + nB
    rows = [
        [f.images[i][k] for i in range(nA)] + [-g.images[j][k] for j in range(nB)] for k in range(C.dim)
    ]
    space = Subspace.span(_nullspace(rows, n), n)

    def mul(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        return A.mul(u[:nA], v[:nA]) + B.mul(u[nA:], v[nA:])

    def degree(i: int) -> Fraction:
        return A.degrees[i] if i < nA else B.degrees[i - nA]

    labels = [f"({_label(A, r[:nA])}, {_label(B, r[nA:])})" for r in space.rows]
    algebra = _restrict(
        space,
        mul,
        lambda r: A.augment(r[:nA]),
        degree,
        labels,
        A.unit + B.unit,
        max(A.truncation, B.truncation),
        max(A.max_weight, B.max_weight),
    )
    first = AlgebraMorphism(algebra, A, tuple(tuple(r[:nA]) for r in space.rows))
    second = AlgebraMorphism(algebra, B, tuple(tuple(r[nA:]) for r in space.rows))
    logger.debug("fiber product of dimensions %d x %d over %d: %d", nA, nB, C.dim, algebra.dim)
    return FiberProduct(algebra, first, second, space)


@dataclass(frozen=True, eq=False)
class Subalgebra:
    algebra: LocalAlgebra
    inclusion: AlgebraMorphism


def subalgebra(A: LocalAlgebra, elements: Sequence[Sequence[Fraction]]) -> Subalgebra:
    """Q-subalgebra of A generated by the given elements of the maximal ideal."""
    elements = [tuple(Fraction(x) for x in e) for e in elements]
    space = Subspace.span([A.unit, *elements], A.dim)
    while True:
        products = [A.mul(r, e) for r in space.rows for e in elements]
        grown = Subspace.span(list(space.rows) + products, A.dim)
        if grown.dim == space.dim:
            break
        space = grown
    algebra = _restrict(
        space,
        A.mul,
        A.augment,
        lambda i: A.degrees[i],
        [_label(A, r) for r in space.rows],
        A.unit,
        A.truncation,
        A.max_weight,
    )
    inclusion = AlgebraMorphism(algebra, A, space.rows)
    return Subalgebra(algebra, inclusion)


# -- ideal arithmetic ------------------------------------------------------------------


def ideal_product(A: LocalAlgebra, I: Subspace, J: Subspace) -> Subspace:
    return Subspace.span((A.mul(x, y) for x in I.rows for y in J.rows), A.dim)


def minimal_generators(A: LocalAlgebra, I: Subspace) -> list[Vector]:
    """Greedy generating set of the ideal I, taken in order of increasing degree."""
    candidates = sorted(I.rows, key=lambda r: A.order(r) or Fraction(0))
    gens: list[Vector] = []
    current = Subspace(A.dim)
    for v in candidates:
        if current.dim == I.dim:
            break
        if not current.contains(v):
            gens.append(v)
            current = current + A.ideal([v])
    return gens


def annihilator(A: LocalAlgebra, I: Subspace) -> Subspace:
    gens = minimal_generators(A, I)
    if not gens:
        return Subspace.whole(A.dim)
    rows = []
    for g in gens:
        images = [A.mul(A.basis_vector(i), g) for i in range(A.dim)]
        rows.extend([images[i][k] for i in range(A.dim)] for k in range(A.dim))
    return Subspace.span(_nullspace(rows, A.dim), A.dim)


@dataclass(frozen=True)
class IdealOps:
    product: Subspace
    sum: Subspace
    annihilator_first: Subspace
    annihilator_second: Subspace
    certified: bool


def ideal_ops(A: LocalAlgebra, first: Iterable[Sequence[Fraction]], second: Iterable[Sequence[Fraction]]) -> IdealOps:
    """Product, sum and annihilators of two ideals given by generators.

    Results on a non-Artinian truncation are only meaningful modulo the
    truncation layer; `certified` says whether that caveat applies.
    """
    I, J = A.ideal(first), A.ideal(second)
    return IdealOps(
        product=ideal_product(A, I, J),
        sum=I + J,
        annihilator_first=annihilator(A, I),
        annihilator_second=annihilator(A, J),
        certified=A.artinian_certified,
    )


def contains(I: Subspace, v: Sequence[Fraction]) -> bool:
    return I.contains(v)


def equal_modulo_truncation(A: LocalAlgebra, I: Subspace, J: Subspace) -> bool:
    layer = A.truncation_layer()
    return (I + layer) == (J + layer)


@dataclass(frozen=True)
class CongruenceIdeal:
    """The ideal (X^k) of Lambda."""

    k: int
    truncation: int


def congruence_ideal(pi: AlgebraMorphism) -> CongruenceIdeal:
    """pi(Ann(ker pi)) for a surjection onto a truncated one-variable power series ring."""
    A, L = pi.source, pi.target
    if not pi.is_surjective():
        raise NotSurjective("congruence ideals are taken along surjections")
    ann = annihilator(A, pi.kernel())
    orders = [L.order(pi.apply(v)) for v in ann.rows]
    orders = [o for o in orders if o is not None]
    if not orders:
        raise TruncationInconclusive("image of the annihilator vanishes at this truncation")
    k = min(orders)
    if k.denominator != 1:
        raise InvalidParameters("target is not graded in integral degrees")
    if 2 * k > L.truncation:
        raise TruncationInconclusive(f"k = {k} is too close to the truncation degree {L.truncation}")
    logger.debug("congruence ideal (X^%s) at D=%d", k, L.truncation)
    return CongruenceIdeal(int(k), L.truncation)


# -- dimensions -----------------------------------------------------------------------


def tangent_dim(A: LocalAlgebra) -> int:
    m = A.maximal_ideal()
    return m.dim - ideal_product(A, m, m).dim


def special_fiber_dim(A: LocalAlgebra, I: Subspace) -> int:
    """dim A / (I + m^2)."""
    m = A.maximal_ideal()
    return A.dim - (I + ideal_product(A, m, m)).dim


def quotient_socle_dim(A: LocalAlgebra, I: Subspace) -> int:
    """dim of {x : x m in I} / I."""
    gens = minimal_generators(A, A.maximal_ideal())
    rows = []
    for g in gens:
        images = [I.reduce(A.mul(A.basis_vector(i), g)) for i in range(A.dim)]
        rows.extend([images[i][k] for i in range(A.dim)] for k in range(A.dim))
    socle = Subspace.span(_nullspace(rows, A.dim), A.dim)
    return socle.dim - I.dim


def socle_dim(A: LocalAlgebra) -> int:
    if not A.artinian_certified:
        raise TruncationInconclusive("socle of a non-Artinian truncation")
    return quotient_socle_dim(A, Subspace(A.dim))


def quotient_dims(A: LocalAlgebra, I: Subspace) -> dict[str, int]:
    return {"dim": A.dim - I.dim, "socle_dim": quotient_socle_dim(A, I)}


def dims(A: LocalAlgebra, I: Subspace | None = None) -> AlgebraDims:
    return AlgebraDims(
        dim=A.dim,
        tangent_dim=tangent_dim(A),
        special_fiber_dim=special_fiber_dim(A, I) if I is not None else None,
        socle_dim=socle_dim(A) if A.artinian_certified else None,
        artinian_certified=A.artinian_certified,
    )


def _check_regular(A: LocalAlgebra, a: Sequence[Fraction]) -> None:
    n = A.dim
    images = [A.mul(A.basis_vector(i), a) for i in range(n)]
    kernel = _nullspace([[images[i][k] for i in range(n)] for k in range(n)], n)
    top = max((A.degrees[i] for i, x in enumerate(a) if x), default=None)
    if top is None or A.augment(a) != 0:
        raise ElementNotRegular("a regular element must be a nonzero element of the maximal ideal")
    cut = A.truncation - top
    for v in kernel:
        if any(x and A.degrees[i] <= cut for i, x in enumerate(v)):
            raise ElementNotRegular(f"{A.render(a)} kills an element below the truncation layer")


@dataclass(frozen=True)
class GorensteinResult:
    is_gorenstein: bool
    socle_dim: int


def gorenstein_check(A: LocalAlgebra, a: Sequence[Fraction] | None = None) -> GorensteinResult:
    """Socle dimension of A/aA (of A itself when a is None and A is Artinian)."""
    if a is None:
        s = socle_dim(A)
    else:
        _check_regular(A, a)
        s = quotient_socle_dim(A, A.ideal([a]))
    return GorensteinResult(s == 1, s)


def iso_witness_check(phi: AlgebraMorphism) -> bool:
    phi.check()
    return phi.is_bijective()


# -- models ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HeckeModel:
    case: str
    r: int
    e: int
    truncation: int
    algebra: LocalAlgebra
    projections: Mapping[str, AlgebraMorphism]
    lambda_element: Vector
    regular_element: Vector


def _validate_model(case: str, r: int, e: int, D: int) -> None:
    if case not in ("i", "ii"):
        raise InvalidParameters(f"unknown case {case!r}")
    if r < 2 or (case == "ii" and r < 3):
        raise InvalidParameters("need r >= 2, and r >= 3 in case ii")
    if e < 1:
        raise InvalidParameters("need e >= 1")
    if D < 2 * r + 2:
        raise InvalidParameters(f"truncation {D} is too small for r = {r}")


def build_model(case: str, r: int = 3, e: int = 1, D: int = 12) -> HeckeModel:
    """Case i: Lam x_Q R x_Q R x_Q Lam with R = Q[[Y]], X = Y^e.
    Case ii: Lam x_Q (Lam[Z]/(Z^2 - X^r) x_{Q[X]/(X^(r-1))} Lam)."""
    _validate_model(case, r, e, D)
    lam = from_presentation(["X"], [], D)
    aug = AlgebraMorphism.augmentation
    X = lam.gen("X")
    if case == "i":
        R = from_presentation(["Y"], [], D, weights=[Fraction(1, e)])
        Y = R.gen("Y")
        middle = fiber_product(aug(R), aug(R))
        inner = fiber_product(aug(middle.algebra), aug(lam))
        outer = fiber_product(aug(lam), aug(inner.algebra))
        Ye = R.power(Y, e)
        lam_el = outer.element(X, inner.element(middle.element(Ye, Ye), X))
        reg = outer.element(X, inner.element(middle.element(Y, Y), X))
    else:
        Rt = from_presentation(["X", "Z"], [f"Z**2 - X**{r}"], D, weights=[1, Fraction(r, 2)])
        C = from_presentation(["X"], [f"X**{r - 1}"], D)
        to_c = AlgebraMorphism.from_generator_images(Rt, C, {"X": C.gen("X"), "Z": C.zero()})
        lam_to_c = AlgebraMorphism.from_generator_images(lam, C, {"X": C.gen("X")})
        inner = fiber_product(to_c, lam_to_c)
        outer = fiber_product(aug(lam), aug(inner.algebra))
        lam_el = outer.element(X, inner.element(Rt.gen("X"), X))
        reg = lam_el
    projections = {
        "psi": outer.first,
        "perp": outer.second.then(inner.first),
        "psi_tau": outer.second.then(inner.second),
    }
    T = outer.algebra
    logger.info("model case %s r=%d e=%d D=%d: dimension %d", case, r, e, D, T.dim)
    return HeckeModel(case, r, e, D, T, projections, lam_el, reg)


@dataclass(frozen=True)
class ModelReport:
    case: str
    r: int
    e: int
    truncation: int
    dim: int
    tangent_dim: int
    dlr_dim: int
    socle_dim: int
    gorenstein: bool
    congruence_psi: int
    congruence_psi_tau: int
    stable: bool


def _measure(model: HeckeModel) -> dict[str, Any]:
    T = model.algebra
    gor = gorenstein_check(T, model.regular_element)
    return {
        "tangent_dim": tangent_dim(T),
        "dlr_dim": special_fiber_dim(T, T.ideal([model.lambda_element])),
        "socle_dim": gor.socle_dim,
        "gorenstein": gor.is_gorenstein,
        "congruence_psi": congruence_ideal(model.projections["psi"]).k,
        "congruence_psi_tau": congruence_ideal(model.projections["psi_tau"]).k,
    }


def model_report(case: str, r: int = 3, e: int = 1, D: int = 12, certify: bool = True) -> ModelReport:
    """Dimensions, socle and congruence ideals of a model, optionally re-derived at D + 3."""
    model = build_model(case, r, e, D)
    values = _measure(model)
    stable = True
    if certify:
        again = _measure(build_model(case, r, e, D + 3))
        stable = again == values
        if not stable:
            logger.warning("model case %s r=%d changes between D=%d and D=%d", case, r, D, D + 3)
    return ModelReport(
        case=case,
        r=r,
        e=e,
        truncation=D,
        dim=model.algebra.dim,
        stable=stable,
        **values,
    )


def iso_witness(r: int, D: int) -> tuple[AlgebraMorphism, str]:
    """The explicit isomorphism out of Lam[Z]/(Z^2 - X^r) used for each parity of r."""
    if r < 2:
        raise InvalidParameters("need r >= 2")
    src = from_presentation(["X", "Z"], [f"Z**2 - X**{r}"], D, weights=[1, Fraction(r, 2)])
    if r % 2:
        ring = from_presentation(["T"], [], D, weights=[Fraction(1, 2)])
        Tv = ring.gen("T")
        sub = subalgebra(ring, [ring.power(Tv, 2), ring.power(Tv, r)])
        images = {"X": ring.power(Tv, 2), "Z": ring.power(Tv, r)}
        phi = AlgebraMorphism.from_generator_images(src, ring, images)
        # corestrict to the subalgebra through its echelon coordinates
        space = Subspace.span(sub.inclusion.images, ring.dim)
        phi = AlgebraMorphism(src, sub.algebra, tuple(space.coords(v) for v in phi.images))
        return phi, "odd: Q[[T^2, T^r]]"
    lam = from_presentation(["X"], [], D)
    X = lam.gen("X")
    half = r // 2
    if r == 2:
        f = AlgebraMorphism.augmentation(lam)
        label = "r = 2: Lam x_Q Lam"
    else:
        base = from_presentation(["X"], [f"X**{half}"], D)
        f = AlgebraMorphism.from_generator_images(lam, base, {"X": base.gen("X")})
        label = f"even: Lam x_(Lam/X^{half}) Lam"
    prod = fiber_product(f, f)
    Xh = lam.power(X, half)
    images = {
        "X": prod.element(X, X),
        "Z": prod.element(Xh, tuple(-x for x in Xh)),
    }
    return AlgebraMorphism.from_generator_images(src, prod.algebra, images), label

"""Discrete rank-one valuations on the implemented fields.

Three shapes exist: the p-adic place of Q, the place of F(t) attached to a
monic irreducible polynomial, and the place at infinity of F(t).
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

from .errors import FieldError, NotComputable
from .fields import (
    FiniteExtension,
    FiniteField,
    Rationals,
    RationalFunctionField,
    is_irreducible,
    is_prime,
    monic_polys,
)
from .poly import Poly

DEFAULT_HEIGHT = 10


class Valuation:
    field = None

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def __repr__(self):
        return f"<valuation {self} on {self.field}>"

    def value(self, x):
        raise NotImplementedError

    def is_unit(self, x):
        return self.value(x) == 0

    def decompose(self, x, pi=None):
        """Return (a, w) with x = pi**a * w and w a unit; pi defaults to the uniformizer."""
        if x.is_zero():
            raise FieldError("zero has infinite valuation")
        pi = self.uniformizer() if pi is None else pi
        if self.value(pi) != 1:
            raise FieldError(f"{pi} is not a uniformizer for {self}")
        a = self.value(x)
        return a, x / pi**a

    def reduce(self, u):
        """Residue class of a v-unit (or v-integer) in the residue field."""
        raise NotImplementedError

    @property
    def residue_field(self):
        raise NotImplementedError

    def lift(self, c):
        """A v-integer reducing to c (a v-unit when c is nonzero)."""
        raise NotImplementedError


class FinitePlace(Valuation):
    """The p-adic valuation on Q."""

    def __init__(self, p):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.field = Rationals()

    def _key(self):
        return (self.p,)

    def __str__(self):
        return f"({self.p})"

    def value(self, x):
        q = self.field.coerce(x).rep
        if q == 0:
            raise FieldError("zero has infinite valuation")
        return _vp(q.numerator, self.p) - _vp(q.denominator, self.p)

    def uniformizer(self):
        return self.field.coerce(self.p)

    @property
    def residue_field(self):
        return FiniteField(self.p)

    def reduce(self, u):
        q = u.rep
        if self.value(u) < 0:
            raise FieldError(f"{u} is not a {self.p}-adic integer")
        k = FiniteField(self.p)
        if self.value(u) > 0:
            return k.zero()
        return k.coerce(q.numerator) / k.coerce(q.denominator)

    def lift(self, c):
        return self.field.coerce(int(c.rep))


def _vp(n, p):
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _fresh_name(field, preferred=("x", "y", "z", "w")):
    used = set(field.generator_names())
    if isinstance(field, RationalFunctionField):
        used.add(field.var)
    for name in preferred:
        if name not in used:
            return name
    for i in itertools.count(1):
        if f"x{i}" not in used:
            return f"x{i}"


class PointOfLine(Valuation):
    """The valuation of F(t) measuring divisibility by a monic irreducible pi(t)."""

    def __init__(self, field, pi, check=True):
        if not isinstance(field, RationalFunctionField):
            raise FieldError("PointOfLine needs a rational function field")
        if not isinstance(pi, Poly):
            pi = Poly(field.base, [field.base.coerce(c).rep for c in pi])
        if pi.degree < 1 or not pi.is_monic():
            raise FieldError("expected a monic polynomial of positive degree")
        if check and is_irreducible(pi) is False:
            raise FieldError(f"{pi.format(field.var)} is reducible")
        self.field = field
        self.pi = pi

    def _key(self):
        return (self.field, self.pi.coeffs)

    def __str__(self):
        return f"({self.pi.format(self.field.var)})"

    @property
    def degree(self):
        return self.pi.degree

    def value(self, x):
        x = self.field.coerce(x)
        if x.is_zero():
            raise FieldError("zero has infinite valuation")
        return _mult(self.field.num(x.rep), self.pi) - _mult(self.field.den(x.rep), self.pi)

    def uniformizer(self):
        return self.field.make(self.pi)

    @property
    def residue_field(self):
        B = self.field.base
        if self.pi.degree == 1:
            return B
        k = self.__dict__.get("_kappa")
        if k is None:
            k = FiniteExtension(B, self.pi, name=_fresh_name(self.field), check=False)
            self.__dict__["_kappa"] = k
        return k

    def root(self):
        """The class of t in the residue field."""
        k = self.residue_field
        if self.pi.degree == 1:
            return k.element(k.neg(self.pi.coeffs[0]))
        return k.element(k.gen_rep())

    def eval_poly(self, p):
        k = self.residue_field
        if self.pi.degree == 1:
            return k.element(p.evaluate(self.root().rep))
        return k.element(k.rep_from_poly(p))

    def reduce(self, u):
        u = self.field.coerce(u)
        a = self.value(u)
        if a < 0:
            raise FieldError(f"{u} has a pole at {self}")
        if a > 0:
            return self.residue_field.zero()
        return self.eval_poly(self.field.num(u.rep)) / self.eval_poly(self.field.den(u.rep))

    def lift(self, c):
        k = self.residue_field
        c = k.coerce(c)
        B = self.field.base
        coeffs = [c.rep] if self.pi.degree == 1 else list(c.rep)
        return self.field.make(Poly(B, coeffs))


def _mult(p, pi):
    k = 0
    while True:
        q, r = p.divmod(pi)
        if not r.is_zero():
            return k
        p = q
        k += 1


class InfinitePlace(Valuation):
    """The place at infinity of F(t), uniformizer 1/t."""

    def __init__(self, field):
        if not isinstance(field, RationalFunctionField):
            raise FieldError("InfinitePlace needs a rational function field")
        self.field = field

    def _key(self):
        return (self.field,)

    def __str__(self):
        return "inf"

    degree = 1

    def value(self, x):
        x = self.field.coerce(x)
        if x.is_zero():
            raise FieldError("zero has infinite valuation")
        return self.field.den(x.rep).degree - self.field.num(x.rep).degree

    def uniformizer(self):
        return self.field.one() / self.field.gen()

    @property
    def residue_field(self):
        return self.field.base

    def reduce(self, u):
        u = self.field.coerce(u)
        a = self.value(u)
        if a < 0:
            raise FieldError(f"{u} has a pole at infinity")
        B = self.field.base
        if a > 0:
            return B.zero()
        n, d = self.field.num(u.rep), self.field.den(u.rep)
        return B.element(B.div(n.lc(), d.lc()))

    def lift(self, c):
        return self.field.coerce(self.field.base.coerce(c))


@functools.lru_cache(maxsize=None)
def irreducibles_of_degree(F, d):
    """Monic irreducibles of degree d over a finite field, by sieving out products."""
    if d == 1:
        return tuple(monic_polys(F, 1))
    reducible = set()
    for k in range(1, d // 2 + 1):
        for f in irreducibles_of_degree(F, k):
            for g in monic_polys(F, d - k):
                reducible.add((f * g).coeffs)
    return tuple(f for f in monic_polys(F, d) if f.coeffs not in reducible)


def residue_field(v):
    return v.residue_field


def closed_points(line, F, bound, height=DEFAULT_HEIGHT, var="t"):
    """Closed points of degree <= bound on A^1 or P^1 over F.

    Over a finite field the enumeration is exhaustive.  Over Q it is
    truncated to monic integer polynomials with coefficients of absolute
    value at most ``height``.
    """
    if line not in ("A1", "P1"):
        raise FieldError(f"unknown line {line!r}")
    if bound < 1:
        raise FieldError("degree bound must be >= 1")
    K = RationalFunctionField(F, var)
    points = []
    if F.is_finite:
        for d in range(1, bound + 1):
            for f in irreducibles_of_degree(F, d):
                points.append(PointOfLine(K, f, check=False))
    elif isinstance(F, Rationals):
        for d in range(1, bound + 1):
            for tail in itertools.product(range(-height, height + 1), repeat=d):
                f = Poly(F, [Fraction(c) for c in tail] + [Fraction(1)])
                if is_irreducible(f):
                    points.append(PointOfLine(K, f))
    else:
        raise NotComputable(f"closed points over {F} are not enumerable here")
    if line == "P1":
        points.append(InfinitePlace(K))
    return points

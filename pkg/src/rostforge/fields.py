"""Field descriptors and exact element arithmetic.

Every field is an immutable descriptor that also knows how to do arithmetic on
canonical representations ("reps").  Elements pair a field with a rep; reps are
canonical, so element equality is rep equality.

Implemented carriers::

    Rationals              rep: Fraction
    FiniteField(p, e)      rep: int (e == 1) or tuple of ints (e > 1)
    FiniteExtension(F, f)  rep: tuple of F-reps of length deg f
    RationalFunctionField  rep: (numerator coeffs, monic denominator coeffs)
    NumberField            descriptor; arithmetic only with a defining polynomial
    DeclaredField          descriptor only (used for R, C and friends)
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property

from .errors import FieldError, NotComputable
from .poly import Poly, poly_gcd, poly_xgcd


class Field:
    """Abstract field descriptor."""

    characteristic = 0
    base = None
    is_finite = False
    has_arithmetic = True

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__, self._key()))
            self.__dict__["_hash"] = h
        return h

    def __repr__(self):
        return f"<{self}>"

    # structure ----------------------------------------------------------
    @property
    def trdeg(self):
        return self.base.trdeg if self.base is not None else 0

    def tower(self):
        """Fields from the prime field up to self."""
        chain = []
        f = self
        while f is not None:
            chain.append(f)
            f = f.base
        return chain[::-1]

    def contains_subfield(self, other):
        return other in self.tower()

    def generator_names(self):
        """Mapping of DSL names to generator elements, including the base's."""
        return {} if self.base is None else self.base.generator_names()

    # element API --------------------------------------------------------
    def element(self, rep):
        return Elt(self, rep)

    def zero(self):
        return Elt(self, self.zero_rep())

    def one(self):
        return Elt(self, self.one_rep())

    def __call__(self, value):
        return self.coerce(value)

    def coerce(self, value):
        if isinstance(value, Elt):
            if value.field == self:
                return value
            return Elt(self, self.lift_rep(value))
        if isinstance(value, int):
            return Elt(self, self.from_int(value))
        if isinstance(value, Fraction):
            return Elt(self, self.from_fraction(value))
        raise FieldError(f"cannot coerce {value!r} into {self}")

    def lift_rep(self, elt):
        """Embed an element of a field lower in the tower."""
        if self.base is None:
            raise FieldError(f"{elt.field} is not a subfield of {self}")
        return self.embed_base(self.base.coerce(elt).rep)

    def from_fraction(self, q):
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one_rep()
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def is_zero(self, a):
        return a == self.zero_rep()

    def encode(self, a):
        """Canonical string encoding; the total order for symbol sorting."""
        return self.format_rep(a)

    def format_rep(self, a):
        return str(a)

    def dsl(self):
        return str(self)


class Elt:
    """An element of an implemented field."""

    __slots__ = ("field", "rep", "_h")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep
        self._h = None

    def _other(self, other):
        if isinstance(other, Elt) and other.field == self.field:
            return other.rep
        return self.field.coerce(other).rep

    def __add__(self, o):
        return Elt(self.field, self.field.add(self.rep, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Elt(self.field, self.field.sub(self.rep, self._other(o)))

    def __rsub__(self, o):
        return Elt(self.field, self.field.sub(self._other(o), self.rep))

    def __mul__(self, o):
        return Elt(self.field, self.field.mul(self.rep, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        b = self._other(o)
        if self.field.is_zero(b):
            raise ZeroDivisionError("division by zero in " + str(self.field))
        return Elt(self.field, self.field.div(self.rep, b))

    def __rtruediv__(self, o):
        return Elt(self.field, self._other(o)) / self

    def __neg__(self):
        return Elt(self.field, self.field.neg(self.rep))

    def __pow__(self, k):
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        return Elt(self.field, self.field.pow(self.rep, k))

    def inverse(self):
        return self.field.one() / self

    def is_zero(self):
        return self.field.is_zero(self.rep)

    def is_one(self):
        return self.rep == self.field.one_rep()

    def __eq__(self, other):
        if isinstance(other, Elt):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            try:
                return self.rep == self.field.coerce(other).rep
            except (FieldError, ZeroDivisionError):
                return False
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.field, self.rep))
        return self._h

    def encode(self):
        return self.field.encode(self.rep)

    def __str__(self):
        return self.field.format_rep(self.rep)

    def __repr__(self):
        return f"{self}"


# ---------------------------------------------------------------------------
# prime and finite fields


class Rationals(Field):
    characteristic = 0

    def _key(self):
        return ()

    def __str__(self):
        return "Q"

    def zero_rep(self):
        return Fraction(0)

    def one_rep(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def is_zero(self, a):
        return a == 0


def is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


class FiniteField(Field):
    """The field with p**e elements.

    For e > 1 the field is presented as F_p[x]/(f) with f the first monic
    irreducible polynomial of degree e in lexicographic coefficient order.
    """

    is_finite = True

    def __init__(self, p, e=1, name="x"):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if e < 1:
            raise FieldError("exponent must be >= 1")
        self.p = p
        self.e = e
        self.characteristic = p
        self.name = name
        self._impl = None
        if e > 1:
            prime = FiniteField(p)
            self._impl = FiniteExtension(prime, first_irreducible(prime, e), name=name, check=False)
            self.base = prime

    def _key(self):
        return (self.p, self.e)

    def __str__(self):
        return f"F{self.p}" if self.e == 1 else f"F{self.p}^{self.e}"

    @property
    def order(self):
        return self.p ** self.e

    @property
    def prime_field(self):
        return self if self.e == 1 else self._impl.base

    @property
    def modulus(self):
        return None if self.e == 1 else self._impl.modulus

    def generator_names(self):
        if self.e == 1:
            return {}
        return {self.name: Elt(self, self._impl.gen_rep())}

    def zero_rep(self):
        return 0 if self.e == 1 else self._impl.zero_rep()

    def one_rep(self):
        return 1 if self.e == 1 else self._impl.one_rep()

    def from_int(self, n):
        return n % self.p if self.e == 1 else self._impl.from_int(n)

    def add(self, a, b):
        return (a + b) % self.p if self.e == 1 else self._impl.add(a, b)

    def neg(self, a):
        return (-a) % self.p if self.e == 1 else self._impl.neg(a)

    def mul(self, a, b):
        return (a * b) % self.p if self.e == 1 else self._impl.mul(a, b)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._impl.inv(a)

    def embed_base(self, c):
        return self._impl.embed_base(c)

    def lift_rep(self, elt):
        if self.e > 1 and elt.field == self._impl:
            return elt.rep
        return super().lift_rep(elt)

    def format_rep(self, a):
        return str(a) if self.e == 1 else self._impl.format_rep(a)

    def encode(self, a):
        if self.e == 1:
            return f"{a:08d}"
        return "|".join(f"{c:08d}" for c in a)

    def elements(self):
        if self.e == 1:
            return [Elt(self, i) for i in range(self.p)]
        return [Elt(self, r) for r in itertools.product(range(self.p), repeat=self.e)]

    def as_extension(self):
        """The underlying F_p[x]/(f) presentation (self for prime fields)."""
        return self if self.e == 1 else self._impl

    @cached_property
    def primitive_element(self):
        return primitive_element(self)


class FiniteExtension(Field):
    """base[x]/(f) for a monic irreducible f over base."""

    def __init__(self, base, modulus, name="x", check=True):
        if not isinstance(modulus, Poly):
            modulus = Poly(base, [base.coerce(c).rep for c in modulus])
        if modulus.degree < 1:
            raise FieldError("defining polynomial must have degree >= 1")
        if not modulus.is_monic():
            modulus = modulus.monic()
        self.base = base
        self.modulus = modulus
        self.name = name
        self.degree = modulus.degree
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        if check:
            ok = is_irreducible(modulus)
            if ok is False:
                raise FieldError(f"{modulus.format(name)} is reducible over {base}")

    def _key(self):
        return (self.base, self.modulus.coeffs, self.name)

    def __str__(self):
        return f"{self.base.dsl()}[{self.modulus.format(self.name)}]"

    @property
    def order(self):
        return self.base.order ** self.degree

    def generator_names(self):
        names = dict(self.base.generator_names())
        names[self.name] = Elt(self, self.gen_rep())
        return names

    def _reduce(self, coeffs):
        p = Poly(self.base, coeffs) % self.modulus
        out = list(p.coeffs) + [self.base.zero_rep()] * (self.degree - len(p.coeffs))
        return tuple(out)

    def rep_from_poly(self, p):
        return self._reduce((p % self.modulus).coeffs)

    def poly_of(self, a):
        return Poly(self.base, a)

    def gen_rep(self):
        if self.degree == 1:
            return (self.base.neg(self.modulus.coeffs[0]),)
        return self._reduce([self.base.zero_rep(), self.base.one_rep()])

    def embed_base(self, c):
        return (c,) + (self.base.zero_rep(),) * (self.degree - 1)

    def zero_rep(self):
        return (self.base.zero_rep(),) * self.degree

    def one_rep(self):
        return self.embed_base(self.base.one_rep())

    def from_int(self, n):
        return self.embed_base(self.base.from_int(n))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return self.rep_from_poly(Poly(self.base, a) * Poly(self.base, b))

    def inv(self, a):
        p = Poly(self.base, a)
        if p.is_zero():
            raise ZeroDivisionError(f"division by zero in {self}")
        g, s, _ = poly_xgcd(p, self.modulus)
        if g.degree != 0:
            raise FieldError("non-invertible residue class (modulus not irreducible)")
        return self.rep_from_poly(s)

    def format_rep(self, a):
        return Poly(self.base, a).format(self.name)

    def encode(self, a):
        return "|".join(self.base.encode(c) for c in a)

    def elements(self):
        if not self.is_finite:
            raise NotComputable(f"{self} is infinite")
        base_elts = [e.rep for e in self.base.elements()]
        return [Elt(self, r) for r in itertools.product(base_elts, repeat=self.degree)]

    def is_in_base(self, a):
        return all(self.base.is_zero(c) for c in a[1:])

    @cached_property
    def primitive_element(self):
        return primitive_element(self)


class RationalFunctionField(Field):
    """base(var): reduced fractions with monic denominators."""

    def __init__(self, base, var="t"):
        if isinstance(var, (tuple, list)):
            if len(var) != 1:
                raise FieldError("use rational_function_field() for several variables")
            var = var[0]
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self.has_arithmetic = base.has_arithmetic

    def _key(self):
        return (self.base, self.var)

    def __str__(self):
        # collapse nested single-variable towers back into F(t,u)
        vars_, f = [self.var], self.base
        while isinstance(f, RationalFunctionField):
            vars_.append(f.var)
            f = f.base
        return f"{f.dsl()}({','.join(reversed(vars_))})"

    @property
    def variables(self):
        out, f = [], self
        while isinstance(f, RationalFunctionField):
            out.append(f.var)
            f = f.base
        return tuple(reversed(out))

    @property
    def trdeg(self):
        b = self.base.trdeg
        return None if b is None else b + 1

    def generator_names(self):
        names = dict(self.base.generator_names())
        names[self.var] = self.gen()
        return names

    def gen(self):
        B = self.base
        return Elt(self, ((B.zero_rep(), B.one_rep()), (B.one_rep(),)))

    def _norm(self, num, den):
        B = self.base
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ((), (B.one_rep(),))
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc()
        if lc != B.one_rep():
            inv = B.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        return (num.coeffs, den.coeffs)

    def make(self, num, den=None):
        if den is None:
            den = Poly.constant(self.base, self.base.one_rep())
        return Elt(self, self._norm(num, den))

    def num(self, a):
        return Poly(self.base, a[0])

    def den(self, a):
        return Poly(self.base, a[1])

    def embed_base(self, c):
        B = self.base
        if B.is_zero(c):
            return ((), (B.one_rep(),))
        return ((c,), (B.one_rep(),))

    def zero_rep(self):
        return ((), (self.base.one_rep(),))

    def one_rep(self):
        return self.embed_base(self.base.one_rep())

    def from_int(self, n):
        return self.embed_base(self.base.from_int(n))

    def add(self, a, b):
        na, da, nb, db = self.num(a), self.den(a), self.num(b), self.den(b)
        if da == db:
            return self._norm(na + nb, da)
        return self._norm(na * db + nb * da, da * db)

    def neg(self, a):
        return (tuple(self.base.neg(c) for c in a[0]), a[1])

    def mul(self, a, b):
        return self._norm(self.num(a) * self.num(b), self.den(a) * self.den(b))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError(f"division by zero in {self}")
        return self._norm(self.den(a), self.num(a))

    def is_zero(self, a):
        return not a[0]

    def is_constant(self, a):
        return len(a[0]) <= 1 and len(a[1]) == 1

    def constant_value(self, a):
        B = self.base
        return B.zero_rep() if not a[0] else a[0][0]

    def format_rep(self, a):
        n = Poly(self.base, a[0]).format(self.var)
        if len(a[1]) == 1:
            return n
        d = Poly(self.base, a[1]).format(self.var)
        if " " in n or n.startswith("-"):
            n = f"({n})"
        return f"{n}/({d})"

    def encode(self, a):
        B = self.base
        return "N" + ";".join(B.encode(c) for c in a[0]) + "D" + ";".join(B.encode(c) for c in a[1])


def rational_function_field(base, *variables):
    """base(v1, ..., vn) as a nested tower of single-variable fields."""
    if not variables:
        raise FieldError("at least one variable required")
    f = base
    for v in variables:
        f = RationalFunctionField(f, v)
    return f


class NumberField(Field):
    """A number field carried by its declared signature (d, r1, r2).

    A defining polynomial over Q is optional; when present, arithmetic is
    available through Q[x]/(f) and the signature is checked against the
    number of real roots.
    """

    characteristic = 0

    def __init__(self, degree, r1, r2, label=None, modulus=None, name="x"):
        if degree < 1 or r1 < 0 or r2 < 0:
            raise FieldError("degree >= 1 and r1, r2 >= 0 required")
        if r1 + 2 * r2 != degree:
            raise FieldError(f"signature mismatch: r1 + 2*r2 = {r1 + 2 * r2} != {degree}")
        self.degree = degree
        self.r1 = r1
        self.r2 = r2
        self.label = label
        self._impl = None
        if modulus is not None:
            ext = FiniteExtension(Rationals(), modulus, name=name)
            if ext.degree != degree:
                raise FieldError("defining polynomial degree does not match")
            if real_root_count(ext.modulus) != r1:
                raise FieldError("defining polynomial has the wrong number of real roots")
            self._impl = ext
            self.name = name
        self.base = Rationals()
        self.has_arithmetic = self._impl is not None

    def embed_base(self, c):
        return self._need().embed_base(c)

    def gen_rep(self):
        return self._need().gen_rep()

    def is_in_base(self, a):
        return self._need().is_in_base(a)

    def generator_names(self):
        if self._impl is None:
            return {}
        return {self.name: Elt(self, self._impl.gen_rep())}

    def _key(self):
        return (self.degree, self.r1, self.r2, self.label,
                None if self._impl is None else self._impl.modulus.coeffs)

    def __str__(self):
        if self._impl is not None:
            return str(self._impl)
        return f"NF({self.degree},{self.r1},{self.r2})"

    def _need(self):
        if self._impl is None:
            raise NotComputable(f"{self} has no defining polynomial; arithmetic unavailable")
        return self._impl

    def zero_rep(self):
        return self._need().zero_rep()

    def one_rep(self):
        return self._need().one_rep()

    def from_int(self, n):
        return self._need().from_int(n)

    def add(self, a, b):
        return self._impl.add(a, b)

    def neg(self, a):
        return self._impl.neg(a)

    def mul(self, a, b):
        return self._impl.mul(a, b)

    def inv(self, a):
        return self._impl.inv(a)

    def format_rep(self, a):
        return self._need().format_rep(a)


class DeclaredField(Field):
    """A field known only through declared invariants (e.g. R, C)."""

    has_arithmetic = False

    def __init__(self, name, characteristic=0, trdeg=None, uncountable=True):
        self.name = name
        self.characteristic = characteristic
        self._trdeg = trdeg
        self.uncountable = uncountable

    def _key(self):
        return (self.name, self.characteristic, self._trdeg, self.uncountable)

    def __str__(self):
        return self.name

    @property
    def trdeg(self):
        return self._trdeg

    def zero_rep(self):
        raise NotComputable(f"{self} is a declared field without arithmetic")

    one_rep = zero_rep


REALS = DeclaredField("R")
COMPLEX = DeclaredField("C")


# ---------------------------------------------------------------------------
# classification helpers


def is_number_field(F):
    if isinstance(F, (NumberField, Rationals)):
        return True
    return isinstance(F, FiniteExtension) and all(
        isinstance(f, (Rationals, FiniteExtension)) for f in F.tower()
    )


def signature(F):
    """(degree, r1, r2) of a number field."""
    if isinstance(F, NumberField):
        return F.degree, F.r1, F.r2
    if isinstance(F, Rationals):
        return 1, 1, 0
    if isinstance(F, FiniteExtension) and isinstance(F.base, Rationals):
        d = F.degree
        r1 = real_root_count(F.modulus)
        return d, r1, (d - r1) // 2
    raise NotComputable(f"signature of {F} is not available")


def is_uncountable(F):
    while F is not None:
        if isinstance(F, DeclaredField):
            return F.uncountable
        F = F.base
    return False


def kronecker_dimension(F):
    """trdeg over Q plus one in characteristic 0; trdeg over F_p otherwise.

    Fields of infinite transcendence degree give ``math.inf``.
    """
    t = F.trdeg
    if t is None:
        return math.inf
    return t + 1 if F.characteristic == 0 else t


def real_root_count(f):
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(f.coeffs))
    return int(sympy.Poly(expr, x).count_roots())


# ---------------------------------------------------------------------------
# polynomials over finite fields and Q


def monic_polys(F, degree):
    elts = [e.rep for e in F.elements()]
    for tail in itertools.product(elts, repeat=degree):
        yield Poly(F, list(tail) + [F.one_rep()])


def is_irreducible(f):
    """True/False when decidable on the implemented carriers, else None."""
    F = f.field
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    if F.is_finite:
        return _finite_irreducible(f)
    if isinstance(F, Rationals):
        import sympy

        x = sympy.Symbol("x")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(f.coeffs))
        return bool(sympy.Poly(expr, x, domain="QQ").is_irreducible)
    return None


def _finite_irreducible(f):
    # Rabin's test: x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n.
    F = f.field
    q = F.order
    n = f.degree
    x = Poly.x(F)

    def frob_power(k):
        r = x
        for _ in range(k):
            r = _powmod(r, q, f)
        return r

    for r in _prime_divisors(n):
        if poly_gcd(f, frob_power(n // r) - x).degree > 0:
            return False
    return ((frob_power(n) - x) % f).is_zero()


def _powmod(p, e, m):
    result = Poly.constant(p.field, p.field.one_rep())
    base = p % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def first_irreducible(F, degree):
    for f in monic_polys(F, degree):
        if is_irreducible(f):
            return f
    raise FieldError(f"no irreducible of degree {degree} over {F}")  # pragma: no cover


def multiplicative_order(elt):
    F = elt.field
    n = F.order - 1
    if elt.is_zero():
        raise FieldError("zero has no multiplicative order")
    order = n
    for r in _prime_divisors(n):
        while order % r == 0 and (elt ** (order // r)).is_one():
            order //= r
    return order


def primitive_element(F):
    n = F.order - 1
    for e in F.elements():
        if not e.is_zero() and multiplicative_order(e) == n:
            return e
    raise FieldError("no primitive element")  # pragma: no cover


def discrete_log(elt):
    """k with g**k == elt for the field's fixed primitive element g."""
    F = elt.field
    table = _dlog_table(F)
    return table[elt.rep]


_DLOG_CACHE = {}


def _dlog_table(F):
    table = _DLOG_CACHE.get(F)
    if table is None:
        g = F.primitive_element
        table, x = {}, F.one()
        for k in range(F.order - 1):
            table[x.rep] = k
            x = x * g
        _DLOG_CACHE[F] = table
    return table

"""Polynomial factorization and unit decomposition into multiplicative atoms.

An *atom* is a generator of a presentation of the unit group: a torsion
generator (roots of unity) or a free generator (primes, irreducible
polynomials).  ``unit_atoms(u)`` writes a unit as a product of atoms; the
Milnor K layer uses it to bring symbols into an expanded form that only
depends on the class.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

from .errors import NotComputable
from .fields import (
    Elt,
    FiniteExtension,
    FiniteField,
    NumberField,
    Rationals,
    RationalFunctionField,
    discrete_log,
    is_irreducible,
    monic_polys,
)
from .poly import Poly


@dataclass(frozen=True)
class Atom:
    key: str
    element: Elt
    order: int = 0  # 0 for a free generator, otherwise the torsion order

    def __lt__(self, other):
        return self.key < other.key


# ---------------------------------------------------------------------------
# polynomial factorization


@functools.lru_cache(maxsize=4096)
def factor_poly(f):
    """Return (leading coefficient rep, [(monic irreducible, multiplicity)])."""
    F = f.field
    if f.is_zero():
        raise ValueError("cannot factor zero")
    if f.degree == 0:
        return f.lc(), []
    if isinstance(F, FiniteField) and F.e == 1:
        factors = _factor_prime_field(f)
    elif F.is_finite:
        factors = _factor_by_trial(f)
    elif isinstance(F, Rationals):
        factors = _factor_rational(f)
    elif _is_simple_number_field(F):
        factors = _factor_number_field(f)
    else:
        raise NotComputable(f"factorization over {F} is not implemented")
    check = Poly.constant(F, f.lc())
    for g, m in factors:
        check = check * g**m
    if check != f:
        raise NotComputable(f"factorization of {f} over {F} failed its self check")
    return f.lc(), sorted(factors, key=lambda gm: (gm[0].degree, gm[0].key()))


def _factor_prime_field(f):
    import sympy

    p = f.field.p
    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed(f.coeffs)), x, modulus=p)
    _, facs = sp.factor_list()
    out = []
    for g, m in facs:
        coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
        out.append((Poly(f.field, coeffs).monic(), m))
    return out


def _factor_by_trial(f):
    F = f.field
    out = []
    rest = f.monic()
    for d in count(1):
        if rest.degree < 2 * d:
            break
        for g in monic_polys(F, d):
            if rest.degree < d:
                break
            m = 0
            while True:
                q, r = rest.divmod(g)
                if not r.is_zero():
                    break
                rest, m = q, m + 1
            if m and is_irreducible(g):
                out.append((g, m))
            elif m:  # pragma: no cover - reducible g divides only after its factors do
                raise AssertionError("trial division found a reducible factor")
    if rest.degree > 0:
        out.append((rest, 1))
    return out


def _sym_rational(f):
    import sympy

    x = sympy.Symbol("x")
    return x, sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(f.coeffs))


def _factor_rational(f):
    import sympy

    x, expr = _sym_rational(f)
    _, facs = sympy.factor_list(expr, x)
    out = []
    for g, m in facs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(g, x).all_coeffs())]
        out.append((Poly(f.field, coeffs).monic(), m))
    return out


def _is_simple_number_field(F):
    if isinstance(F, NumberField):
        return F._impl is not None
    return isinstance(F, FiniteExtension) and isinstance(F.base, Rationals)


def _number_field_data(F):
    import sympy

    ext = F._impl if isinstance(F, NumberField) else F
    x, mexpr = _sym_rational(ext.modulus)
    root = sympy.CRootOf(mexpr, 0) if ext.degree > 2 else sympy.roots(mexpr, x, multiple=True)[0]
    K = sympy.QQ.algebraic_field(root)
    return ext, root, K


def _factor_number_field(f):
    import sympy

    F = f.field
    ext, root, K = _number_field_data(F)
    y = sympy.Symbol("y")
    coeffs = []
    for c in reversed(f.coeffs):
        coeffs.append(K.from_sympy(sum(sympy.Rational(q.numerator, q.denominator) * root**j
                                       for j, q in enumerate(c))))
    sp = sympy.Poly([K.to_sympy(c) for c in coeffs], y, domain=K)
    _, facs = sp.factor_list()
    out = []
    for g, m in facs:
        gcoeffs = []
        for c in reversed(g.rep.to_list()):
            gcoeffs.append(_anp_to_rep(ext, K, c))
        out.append((Poly(F, gcoeffs).monic(), m))
    return out


def _anp_to_rep(ext, K, c):
    # K's primitive element is the chosen root, so the ANP coefficients
    # are in the power basis of the generator (highest power first).
    vals = [Fraction(int(q.numerator), int(q.denominator)) for q in reversed(c.to_list())]
    vals += [Fraction(0)] * (ext.degree - len(vals))
    return tuple(vals[: ext.degree])


# ---------------------------------------------------------------------------
# unit decomposition


def unit_atoms(u):
    """Decompose a nonzero element as {Atom: exponent}.

    Exponents of torsion atoms are reduced modulo the order.
    """
    if u.is_zero():
        raise ValueError("zero is not a unit")
    F = u.field
    if F.is_finite:
        out = _finite_atoms(F, u)
    elif isinstance(F, Rationals):
        out = _rational_atoms(u.rep)
    elif _is_gaussian(F):
        out = _gaussian_atoms(F, u.rep)
    elif isinstance(F, RationalFunctionField):
        out = _function_atoms(F, u)
    else:
        raise NotComputable(f"unit decomposition over {F} is not implemented")
    return {a: (e % a.order if a.order else e) for a, e in out.items() if (e % a.order if a.order else e)}


def torsion_pairs_vanish(F):
    """Whether symbols with two torsion entries vanish in this field's K-theory.

    True when the torsion atoms come from a finite field, whose K_2 is zero,
    or from Q(i), where {i, i} = {i, -1} = 2{i, i}.  Over Q the pair
    {-1, -1} is nonzero.
    """
    while isinstance(F, RationalFunctionField):
        F = F.base
    if F.is_finite:
        return True
    if _is_gaussian(F):
        return True
    return False


def _finite_atoms(F, u):
    g = F.primitive_element
    return {Atom(f"g[{F}]", g, F.order - 1): discrete_log(u)}


def _rational_atoms(q):
    import sympy

    Q = Rationals()
    out = {}
    if q < 0:
        out[Atom("-1", Q.coerce(-1), 2)] = 1
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        for p, e in sympy.factorint(abs(n)).items():
            a = Atom(f"p{int(p):012d}", Q.coerce(int(p)))
            out[a] = out.get(a, 0) + sign * int(e)
    return out


def _is_gaussian(F):
    if isinstance(F, NumberField):
        F = F._impl
    return (isinstance(F, FiniteExtension) and isinstance(F.base, Rationals)
            and F.modulus.coeffs == (Fraction(1), Fraction(0), Fraction(1)))


# Gaussian integers as (a, b) pairs meaning a + b i

def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdivexact(x, y):
    n = y[0] ** 2 + y[1] ** 2
    num = _gmul(x, (y[0], -y[1]))
    if num[0] % n or num[1] % n:
        return None
    return (num[0] // n, num[1] // n)


def _gmod(x, y):
    n = y[0] ** 2 + y[1] ** 2
    num = _gmul(x, (y[0], -y[1]))
    q = (_round_div(num[0], n), _round_div(num[1], n))
    qy = _gmul(q, y)
    return (x[0] - qy[0], x[1] - qy[1])


def _round_div(a, n):
    return (2 * a + n) // (2 * n)


def _ggcd(x, y):
    while y != (0, 0):
        x, y = y, _gmod(x, y)
    return x


_UNITS = [(1, 0), (0, 1), (-1, 0), (0, -1)]  # i**k


def _gnormalize(z):
    """Associate of z in the first quadrant (a > 0, b >= 0), with the unit power used."""
    for k, unit in enumerate(_UNITS):
        w = _gmul(z, unit)
        if w[0] > 0 and w[1] >= 0:
            return w, k
    raise ValueError("zero")  # pragma: no cover


def _gaussian_primes_over(p):
    if p == 2:
        return [(1, 1)]
    if p % 4 == 3:
        return [(p, 0)]
    x = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
    r = pow(x, (p - 1) // 4, p)
    pi = _gnormalize(_ggcd((p, 0), (r, 1)))[0]
    conj = _gnormalize((pi[0], -pi[1]))[0]
    return [pi, conj]


def _gaussian_integer_atoms(z):
    import sympy

    F = FiniteExtension(Rationals(), [1, 0, 1])
    out = {}
    n = z[0] ** 2 + z[1] ** 2
    for p in sorted(sympy.factorint(n)):
        for pi in _gaussian_primes_over(int(p)):
            e = 0
            while True:
                q = _gdivexact(z, pi)
                if q is None:
                    break
                z, e = q, e + 1
            if e:
                elt = Elt(F, (Fraction(pi[0]), Fraction(pi[1])))
                out[Atom(f"g{pi[0]:012d},{pi[1]:012d}", elt)] = e
    k = _UNITS.index(z)
    return out, k


def _gaussian_atoms(F, rep):
    import math

    a, b = rep
    d = math.lcm(a.denominator, b.denominator)
    num = (int(a * d), int(b * d))
    out, k = _gaussian_integer_atoms(num)
    den, k2 = _gaussian_integer_atoms((d, 0))
    for atom, e in den.items():
        out[atom] = out.get(atom, 0) - e
    k = (k - k2) % 4
    result = {Atom(atom.key, Elt(F, atom.element.rep)): e for atom, e in out.items()}
    if k:
        result[Atom("i", Elt(F, F.gen_rep()), 4)] = k
    return result


def _function_atoms(F, u):
    B = F.base
    num, den = F.num(u.rep), F.den(u.rep)
    lc_n, fn = factor_poly(num)
    lc_d, fd = factor_poly(den)
    const = B.element(B.div(lc_n, lc_d))
    out = {}
    if not const.is_one():
        for atom, e in unit_atoms(const).items():
            lifted = Atom(atom.key, F.coerce(atom.element), atom.order)
            out[lifted] = out.get(lifted, 0) + e
    for factors, sign in ((fn, 1), (fd, -1)):
        for g, m in factors:
            a = Atom(f"f{F.var}[{'|'.join(g.key())}]", F.make(g))
            out[a] = out.get(a, 0) + sign * m
    return out

"""Dense univariate polynomials over an arbitrary implemented field.

Coefficients are stored as raw field representations, lowest degree first,
with trailing zeros stripped.  The zero polynomial has no coefficients.
"""

from __future__ import annotations


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # construction -------------------------------------------------------
    @classmethod
    def from_elements(cls, field, elts):
        return cls(field, [field.coerce(e).rep for e in elts])

    @classmethod
    def monomial(cls, field, deg, c=None):
        c = field.one_rep() if c is None else c
        return cls(field, [field.zero_rep()] * deg + [c])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x(cls, field):
        return cls.monomial(field, 1)

    # basic queries -------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero_rep()

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one_rep()

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.format()})"

    def format(self, var="x"):
        F = self.field
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            cs = F.format_rep(c)
            if i == 0:
                parts.append(cs)
                continue
            mono = var if i == 1 else f"{var}^{i}"
            if c == F.one_rep():
                parts.append(mono)
            elif cs.startswith("-") and F.neg(c) == F.one_rep():
                parts.append("-" + mono)
            elif any(ch in cs for ch in "+-/ ") and not (cs.startswith("-") and cs[1:].isdigit()):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly(F)
            out = [F.zero_rep()] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if F.is_zero(a):
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
            return Poly(F, out)
        return self.scale(other)

    def scale(self, c):
        F = self.field
        return Poly(F, [F.mul(c, a) for a in self.coeffs])

    def __pow__(self, k):
        result = Poly.constant(self.field, self.field.one_rep())
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lc = F.inv(other.lc())
        q = [F.zero_rep()] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if F.is_zero(c):
                continue
            c = F.mul(c, inv_lc)
            q[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = F.sub(rem[i - dq + j], F.mul(c, b))
        return Poly(F, q), Poly(F, rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lc()))

    def derivative(self):
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        """Horner evaluation at a representation or an element of an overfield."""
        return self.evaluate(value)

    def evaluate(self, value, target=None, embed=None):
        """Evaluate at ``value``; ``target``/``embed`` map coefficients into another field."""
        if target is None:
            F = self.field
            acc = F.zero_rep()
            for c in reversed(self.coeffs):
                acc = F.add(F.mul(acc, value), c)
            return acc
        acc = target.zero_rep()
        for c in reversed(self.coeffs):
            acc = target.add(target.mul(acc, value), embed(c))
        return acc

    def compose(self, other):
        """self(other(x))."""
        F = self.field
        acc = Poly(F)
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.constant(F, c)
        return acc

    def map_coeffs(self, fn, field):
        return Poly(field, [fn(c) for c in self.coeffs])

    def key(self):
        return tuple(self.field.encode(c) for c in self.coeffs)


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    one = Poly.constant(F, F.one_rep())
    s0, s1 = one, Poly(F)
    t0, t1 = Poly(F), one
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc())
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)

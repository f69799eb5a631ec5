"""Field morphisms: application, finiteness, norms and preimages.

Kinds:

* ``Identity(F)``
* ``Inclusion(E, L)`` -- the structural embedding of a field lower in L's tower
* ``ExtensionHom(E, L, base_map, image)`` -- E = K[x]/(f) sent to L by
  x -> image, coefficients through ``base_map: K -> L``
* ``Substitution(F(t), F(s), h)`` -- t -> h(s) for a nonconstant polynomial h
* ``Composite(first, second)`` -- ``second o first``

Norms along a finite morphism are computed either step by step through a
tower (determinants of multiplication matrices) or, between fields that are
finite over their prime field, by linear algebra over the prime field.
"""

from __future__ import annotations

from .errors import FieldError, NotComputable
from .fields import (
    Elt,
    FiniteExtension,
    FiniteField,
    NumberField,
    Rationals,
    RationalFunctionField,
)
from .linalg import det, solve
from .poly import Poly


class FieldMorphism:
    source = None
    target = None

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def __repr__(self):
        return f"<{self}>"

    def __call__(self, x):
        return self.apply(self.source.coerce(x))

    @property
    def is_finite(self):
        return False

    @property
    def degree(self):
        raise NotComputable(f"{self} is not finite")

    def norm(self, u):
        raise NotComputable(f"norm along {self} is not implemented")

    def preimage(self, z):
        """The element mapping to z, or None when z is not in the image."""
        raise NotComputable(f"preimages along {self} are not implemented")

    def is_automorphism(self):
        return self.source == self.target and self.is_finite and self.degree == 1

    def inverse(self):
        raise NotComputable(f"{self} is not invertible here")


class Identity(FieldMorphism):
    def __init__(self, field):
        self.source = self.target = field

    def _key(self):
        return (self.source,)

    def __str__(self):
        return f"id[{self.source}]"

    def apply(self, x):
        return x

    is_finite = True
    degree = 1

    def norm(self, u):
        return u

    def preimage(self, z):
        return z

    def inverse(self):
        return self


def _steps(source, target):
    tower = target.tower()
    if source not in tower:
        raise FieldError(f"{source} is not a subfield of {target}")
    return tower[tower.index(source) + 1:]


def _step_ext(F):
    """The FiniteExtension presenting an algebraic tower step, or None."""
    if isinstance(F, FiniteExtension):
        return F
    if isinstance(F, FiniteField) and F.e > 1:
        return F.as_extension()
    if isinstance(F, NumberField) and F._impl is not None:
        return F._impl
    return None


def _mult_matrix(ext, a):
    """Matrix of multiplication by rep a on ext over its base (rows = images of x^j)."""
    rows = []
    basis_elem = ext.one_rep()
    gen = ext.gen_rep()
    for _ in range(ext.degree):
        rows.append(list(ext.mul(a, basis_elem)))
        basis_elem = ext.mul(basis_elem, gen)
    return rows


def step_norm(ext, a):
    """N_{ext/base}(a) on reps."""
    return det(ext.base, _mult_matrix(ext, a))


class Inclusion(FieldMorphism):
    def __init__(self, source, target):
        if source == target:
            raise FieldError("use Identity for a trivial inclusion")
        _steps(source, target)
        self.source = source
        self.target = target

    def _key(self):
        return (self.source, self.target)

    def __str__(self):
        return f"{self.source}->{self.target}"

    def apply(self, x):
        return self.target.coerce(x)

    @property
    def is_finite(self):
        return all(_step_ext(f) is not None for f in _steps(self.source, self.target))

    @property
    def degree(self):
        d = 1
        for f in _steps(self.source, self.target):
            ext = _step_ext(f)
            if ext is None:
                raise NotComputable(f"{self} is not finite")
            d *= ext.degree
        return d

    def norm(self, u):
        u = self.target.coerce(u)
        rep = u.rep
        for f in reversed(_steps(self.source, self.target)):
            ext = _step_ext(f)
            if ext is None:
                raise NotComputable(f"{self} is not finite")
            rep = step_norm(ext, rep)
        return Elt(self.source, rep)

    def preimage(self, z):
        rep = self.target.coerce(z).rep
        for f in reversed(_steps(self.source, self.target)):
            ext = _step_ext(f)
            if ext is not None:
                if not ext.is_in_base(rep):
                    return None
                rep = rep[0]
            elif isinstance(f, RationalFunctionField):
                if not f.is_constant(rep):
                    return None
                rep = f.constant_value(rep)
            else:
                raise NotComputable(f"preimage through {f}")
        return Elt(self.source, rep)


def inclusion(source, target):
    return Identity(source) if source == target else Inclusion(source, target)


# ---------------------------------------------------------------------------
# prime-field coordinates for fields algebraic over their prime field


def prime_field_of(F):
    return F.tower()[0]


def is_algebraic(F):
    return all(i == 0 or _step_ext(f) is not None for i, f in enumerate(F.tower()))


def prime_dim(F):
    d = 1
    for f in F.tower()[1:]:
        d *= _step_ext(f).degree
    return d


def prime_coords(F, rep):
    """Flatten rep into coordinates over the prime field."""
    ext = _step_ext(F)
    if ext is None:
        return [rep]
    out = []
    for c in rep:
        out.extend(prime_coords(ext.base, c))
    return out


def prime_basis(F):
    tower = F.tower()
    basis = [tower[0].one_rep()]
    for f in tower[1:]:
        ext = _step_ext(f)
        gen = ext.gen_rep()
        new = []
        power = ext.one_rep()
        powers = []
        for _ in range(ext.degree):
            powers.append(power)
            power = ext.mul(power, gen)
        # order matches prime_coords: outer index = power of the top generator
        for pw in powers:
            for b in basis:
                new.append(ext.mul(pw, ext.embed_base(b) if ext.base is not None else b))
        basis = new
    return basis


def _linear_preimage(phi, z):
    P = prime_field_of(phi.source)
    cols = [prime_coords(phi.target, phi.apply(Elt(phi.source, b)).rep) for b in prime_basis(phi.source)]
    x = solve(P, cols, prime_coords(phi.target, z.rep))
    if x is None:
        return None
    acc = phi.source.zero_rep()
    for c, b in zip(x, prime_basis(phi.source)):
        acc = phi.source.add(acc, phi.source.mul(phi.source.coerce(Elt(P, c)).rep, b))
    return Elt(phi.source, acc)


def _linear_norm(phi, u):
    """N_{L/E}(u) for phi: E -> L with both finite over the prime field."""
    E, L = phi.source, phi.target
    P = prime_field_of(E)
    ebasis = [Elt(E, b) for b in prime_basis(E)]
    lbasis = [Elt(L, b) for b in prime_basis(L)]
    images = [phi.apply(b) for b in ebasis]
    m = len(lbasis) // len(ebasis)
    chosen, vecs = [], []
    for cand in lbasis:
        trial = vecs + [prime_coords(L, (img * cand).rep) for img in images]
        from .linalg import rank

        if rank(P, trial) == len(trial):
            chosen.append(cand)
            vecs = trial
        if len(chosen) == m:
            break
    if len(chosen) != m:
        raise NotComputable("could not build a relative basis")  # pragma: no cover
    matrix = []
    for b in chosen:
        x = solve(P, vecs, prime_coords(L, (u * b).rep))
        row = []
        for k in range(m):
            acc = E.zero()
            for a, e in enumerate(ebasis):
                c = x[k * len(ebasis) + a]
                acc = acc + E.coerce(Elt(P, c)) * e
            row.append(acc.rep)
        matrix.append(row)
    return Elt(E, det(E, matrix))


class ExtensionHom(FieldMorphism):
    """K[x]/(f) -> L determined by x -> image and a base map K -> L."""

    def __init__(self, source, target, base_map, image):
        ext = _step_ext(source)
        if ext is None:
            raise FieldError(f"{source} is not a simple algebraic extension")
        if base_map.source != ext.base or base_map.target != target:
            raise FieldError("base map does not match the extension")
        image = target.coerce(image)
        value = ext.modulus.evaluate(image.rep, target, lambda c: base_map.apply(Elt(ext.base, c)).rep)
        if not target.is_zero(value):
            raise FieldError(f"{image} is not a root of the defining polynomial")
        self.source = source
        self.target = target
        self.base_map = base_map
        self.image = image
        self._ext = ext

    def _key(self):
        return (self.source, self.target, self.base_map, self.image.rep)

    def __str__(self):
        return f"{self.source}->{self.target}[{self._ext.name}->{self.image}]"

    def apply(self, x):
        ext = self._ext
        T = self.target
        return Elt(T, Poly(ext.base, x.rep).evaluate(
            self.image.rep, T, lambda c: self.base_map.apply(Elt(ext.base, c)).rep))

    @property
    def is_finite(self):
        return is_algebraic(self.target)

    @property
    def degree(self):
        if not self.is_finite:
            raise NotComputable(f"{self} is not finite")
        return prime_dim(self.target) // prime_dim(self.source)

    def norm(self, u):
        if not self.is_finite:
            raise NotComputable(f"{self} is not finite")
        return _linear_norm(self, self.target.coerce(u))

    def preimage(self, z):
        if not is_algebraic(self.target):
            raise NotComputable(f"preimage along {self}")
        return _linear_preimage(self, self.target.coerce(z))

    def inverse(self):
        if not self.is_automorphism():
            raise NotComputable(f"{self} is not an automorphism")
        if not isinstance(self.base_map, Inclusion):
            raise NotComputable("inverse with a nontrivial base map")
        gen = Elt(self.source, self._ext.gen_rep())
        return ExtensionHom(self.source, self.source, self.base_map, self.preimage(gen))


class Substitution(FieldMorphism):
    """F(t) -> F(s), t -> h(s), h a nonconstant polynomial over F."""

    def __init__(self, source, target, h):
        if not (isinstance(source, RationalFunctionField) and isinstance(target, RationalFunctionField)):
            raise FieldError("substitution needs rational function fields")
        if source.base != target.base:
            raise FieldError("substitution must fix the constant field")
        if not isinstance(h, Poly):
            h = Poly(target.base, [target.base.coerce(c).rep for c in h])
        if h.degree < 1:
            raise FieldError("substitution polynomial must be nonconstant")
        self.source = source
        self.target = target
        self.h = h

    def _key(self):
        return (self.source, self.target, self.h.coeffs)

    def __str__(self):
        return f"{self.source}->{self.target}[{self.source.var}->{self.h.format(self.target.var)}]"

    def apply(self, x):
        S, T = self.source, self.target
        hs = T.make(self.h)
        num = S.num(x.rep).evaluate(hs.rep, T, T.embed_base)
        den = S.den(x.rep).evaluate(hs.rep, T, T.embed_base)
        return Elt(T, T.div(num, den))

    is_finite = True

    @property
    def degree(self):
        return self.h.degree

    def _relative_ext(self):
        S = self.source
        rel = self.__dict__.get("_rel")
        if rel is None:
            coeffs = [S.embed_base(c) for c in self.h.coeffs]
            coeffs[0] = S.sub(coeffs[0], S.gen().rep)
            rel = FiniteExtension(S, Poly(S, coeffs), name=self.target.var, check=False)
            self.__dict__["_rel"] = rel
        return rel

    def _poly_norm(self, p):
        rel = self._relative_ext()
        S = self.source
        lifted = Poly(S, [S.embed_base(c) for c in p.coeffs])
        return step_norm(rel, rel.rep_from_poly(lifted))

    def norm(self, u):
        T, S = self.target, self.source
        u = T.coerce(u)
        if u.is_zero():
            return S.zero()
        n = self._poly_norm(T.num(u.rep))
        d = self._poly_norm(T.den(u.rep))
        return Elt(S, S.div(n, d))

    def _digits(self, p):
        """Coefficients g with p = g(h) when p lies in F[h], otherwise None."""
        digits = []
        while not p.is_zero():
            p, r = p.divmod(self.h)
            if r.degree > 0:
                return None
            digits.append(r.coeff(0))
        return digits

    def preimage(self, z):
        T, S = self.target, self.source
        z = T.coerce(z)
        n, d = self._digits(T.num(z.rep)), self._digits(T.den(z.rep))
        if n is None or d is None:
            return None
        return S.make(Poly(S.base, n), Poly(S.base, d))

    def inverse(self):
        if self.h.degree != 1 or self.source != self.target:
            raise NotComputable(f"{self} is not an automorphism")
        F = self.h.field
        a, b = self.h.coeffs[1], self.h.coeffs[0]
        inv_a = F.inv(a)
        return Substitution(self.source, self.target, Poly(F, [F.neg(F.mul(b, inv_a)), inv_a]))


class Composite(FieldMorphism):
    """``second o first``."""

    def __init__(self, first, second):
        if first.target != second.source:
            raise FieldError(f"cannot compose {first} then {second}")
        self.first = first
        self.second = second
        self.source = first.source
        self.target = second.target

    def _key(self):
        return (self.first, self.second)

    def __str__(self):
        return f"({self.second})o({self.first})"

    def apply(self, x):
        return self.second.apply(self.first.apply(x))

    @property
    def is_finite(self):
        return self.first.is_finite and self.second.is_finite

    @property
    def degree(self):
        return self.first.degree * self.second.degree

    def norm(self, u):
        return self.first.norm(self.second.norm(u))

    def preimage(self, z):
        y = self.second.preimage(z)
        return None if y is None else self.first.preimage(y)

    def inverse(self):
        return compose(self.second.inverse(), self.first.inverse())


def compose(first, second):
    """second o first, simplified."""
    if first.target != second.source:
        raise FieldError(f"cannot compose {first} then {second}")
    if isinstance(first, Identity):
        return second
    if isinstance(second, Identity):
        return first
    if isinstance(first, Inclusion) and isinstance(second, Inclusion):
        return inclusion(first.source, second.target)
    if isinstance(first, Substitution) and isinstance(second, Substitution):
        h = first.h.compose(second.h)
        return Substitution(first.source, second.target, h)
    return Composite(first, second)


def is_constant_into(phi, v):
    """True when phi lands in the constants of v's rational function field.

    Such a phi is trivially valued by v; every morphism out of a finite
    field is too.
    """
    if phi.source.is_finite:
        return True
    L = v.field
    if not isinstance(L, RationalFunctionField):
        return False
    consts = L.base
    return _lands_in(phi, consts)


def _lands_in(phi, sub):
    if isinstance(phi, Inclusion):
        return sub.contains_subfield(phi.source)
    if isinstance(phi, Composite):
        return _lands_in(phi.second, sub)
    return False


def reduction_morphism(phi, v):
    """phi followed by reduction modulo v, for phi landing in v's constants."""
    kappa = v.residue_field
    consts = v.field.base
    if isinstance(phi, Inclusion):
        return inclusion(phi.source, kappa)
    if isinstance(phi, Composite):
        return compose(phi.first, reduction_morphism(phi.second, v))
    if phi.source.is_finite and isinstance(phi.source, (FiniteField, FiniteExtension)):
        raise NotComputable(f"reduction of {phi} modulo {v}")
    raise NotComputable(f"{phi} does not land in the constants {consts}")

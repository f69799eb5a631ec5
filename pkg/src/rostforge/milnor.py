"""Milnor K-theory symbols over the implemented fields.

A ``MilnorClass`` is a formal integer combination of symbols of one degree,
held in canonical form:

* each symbol's entries are sorted by their canonical encoding, the sign of
  the sorting permutation going into the coefficient;
* symbols with an entry 1, or with a pair of entries {u, 1-u} or {u, -u},
  are dropped;
* a repeated entry {.., a, a, ..} becomes {.., a, -1, ..};
* symbols with an entry -1 are 2-torsion, so their coefficients live mod 2.

Degree 0 classes are integers (the empty symbol with a coefficient).  No
entry is ever factored unless the caller hands in a factorization.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import product as iproduct

from .errors import FieldError, NotComputable
from .factoring import factor_poly, torsion_pairs_vanish, unit_atoms
from .fields import Elt, FiniteField, RationalFunctionField
from .morphisms import Identity, inclusion
from .valuations import InfinitePlace, PointOfLine

CLASSIC = "classic"
ROST = "rost"
TAME_SIGNS = (CLASSIC, ROST)


def _sort_with_sign(entries):
    """Insertion sort by encoding; returns (sign, sorted tuple)."""
    items = list(entries)
    keys = [e.encode() for e in items]
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and keys[j - 1] > keys[j]:
            keys[j - 1], keys[j] = keys[j], keys[j - 1]
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


def canonical_symbol(entries):
    """(sign, entries) for a nonzero canonical symbol, or None when it vanishes."""
    if not entries:
        return 1, ()
    F = entries[0].field
    one = F.one()
    minus_one = -one
    sign = 1
    entries = list(entries)
    while True:
        if any(e == one for e in entries):
            return None
        s, ordered = _sort_with_sign(entries)
        sign *= s
        entries = list(ordered)
        dup = next((k for k in range(len(entries) - 1)
                    if entries[k] == entries[k + 1] and entries[k] != minus_one), None)
        if dup is None:
            break
        # {a, a} = {a, -1}
        entries[dup + 1] = minus_one
    n = len(entries)
    for i in range(n):
        for j in range(i + 1, n):
            s = entries[i] + entries[j]
            if s == one or s.is_zero():
                return None
    return sign, tuple(entries)


def _torsion_modulus(entries):
    if not entries:
        return 0
    minus_one = -entries[0].field.one()
    return 2 if any(e == minus_one for e in entries) else 0


@dataclass(frozen=True)
class MilnorClass:
    field: object
    degree: int
    terms: tuple  # sorted ((entries, coefficient), ...)

    # construction --------------------------------------------------------
    @classmethod
    def from_terms(cls, field, degree, raw):
        """Canonicalize an iterable of (entries, coefficient)."""
        acc = defaultdict(int)
        mods = {}
        for entries, c in raw:
            entries = tuple(entries)
            if len(entries) != max(degree, 0):
                raise FieldError(f"symbol of length {len(entries)} in degree {degree}")
            if degree < 0 or c == 0:
                continue
            for e in entries:
                if e.field != field:
                    raise FieldError(f"entry {e} is not in {field}")
                if e.is_zero():
                    raise FieldError("Milnor symbols have nonzero entries")
            canon = canonical_symbol(entries)
            if canon is None:
                continue
            sign, key = canon
            acc[key] += sign * c
            mods[key] = _torsion_modulus(key)
        terms = []
        for key, c in acc.items():
            m = mods[key]
            if m:
                c %= m
            if c:
                terms.append((key, c))
        terms.sort(key=lambda kc: tuple(e.encode() for e in kc[0]))
        return cls(field, degree, tuple(terms))

    @classmethod
    def zero(cls, field, degree):
        return cls(field, degree, ())

    @classmethod
    def integer(cls, field, n):
        return cls.from_terms(field, 0, [((), n)])

    @classmethod
    def symbol(cls, field, *entries, coefficient=1):
        entries = tuple(field.coerce(e) for e in entries)
        return cls.from_terms(field, len(entries), [(entries, coefficient)])

    @classmethod
    def unit(cls, u):
        return cls.symbol(u.field, u)

    # queries --------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __int__(self):
        if self.degree != 0:
            raise FieldError("only degree 0 classes are integers")
        return self.terms[0][1] if self.terms else 0

    def as_unit(self):
        """The element of F^x represented by a degree 1 class."""
        if self.degree != 1:
            raise FieldError("only degree 1 classes are units")
        u = self.field.one()
        for (e,), c in self.terms:
            u = u * e**c
        return u

    def __str__(self):
        if self.degree == 0:
            return str(int(self))
        if not self.terms:
            return "0"
        parts = []
        for entries, c in self.terms:
            body = "{" + ", ".join(str(e) for e in entries) + "}"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{body}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def to_json(self):
        return {
            "field": str(self.field),
            "degree": self.degree,
            "terms": [{"coefficient": c, "entries": [str(e) for e in entries]}
                      for entries, c in self.terms],
        }

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if self.field != other.field or self.degree != other.degree:
            raise FieldError("classes live in different groups")

    def __add__(self, other):
        self._check(other)
        return MilnorClass.from_terms(self.field, self.degree, self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return MilnorClass.from_terms(self.field, self.degree, [(e, k * c) for e, c in self.terms])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return product(self, other)

    __rmul__ = __mul__


def canonicalize(raw, factorization=None):
    """The class of a single symbol given as a list of entries.

    ``factorization`` optionally maps an entry to a list of (factor, exponent)
    pairs whose product is the entry; such entries are split multiplicatively.
    """
    raw = list(raw)
    if not raw:
        raise FieldError("use MilnorClass.integer for degree 0")
    F = raw[0].field
    choices = []
    for e in raw:
        e = F.coerce(e)
        if e.is_zero():
            raise FieldError("Milnor symbols have nonzero entries")
        split = (factorization or {}).get(e)
        if split is None:
            choices.append([(e, 1)])
            continue
        check = F.one()
        for f, k in split:
            check = check * F.coerce(f) ** k
        if check != e:
            raise FieldError(f"supplied factorization does not multiply to {e}")
        choices.append([(F.coerce(f), k) for f, k in split])
    terms = []
    for pick in iproduct(*choices):
        c = 1
        for _, k in pick:
            c *= k
        terms.append((tuple(f for f, _ in pick), c))
    return MilnorClass.from_terms(F, len(raw), terms)


def product(a, b):
    if a.field != b.field:
        raise FieldError("product of classes over different fields")
    terms = [(ea + eb, ca * cb) for ea, ca in a.terms for eb, cb in b.terms]
    return MilnorClass.from_terms(a.field, a.degree + b.degree, terms)


def restrict(x, phi):
    """phi_*: apply a field morphism to every entry."""
    if phi.source != x.field:
        raise FieldError(f"{phi} does not start at {x.field}")
    terms = [(tuple(phi.apply(e) for e in entries), c) for entries, c in x.terms]
    return MilnorClass.from_terms(phi.target, x.degree, terms)


def norm(x, phi):
    """phi^!: the transfer along a finite morphism, in degrees 0 and 1."""
    if phi.target != x.field:
        raise FieldError(f"{phi} does not end at {x.field}")
    if isinstance(phi, Identity):
        return x
    if not phi.is_finite:
        raise NotComputable(f"{phi} is not finite")
    E = phi.source
    if x.degree == 0:
        return MilnorClass.integer(E, phi.degree * int(x))
    if x.degree == 1:
        return MilnorClass.from_terms(E, 1, [((phi.norm(e),), c) for (e,), c in x.terms])
    if x.is_zero():
        return MilnorClass.zero(E, x.degree)
    if x.field.is_finite:
        # K_n of a finite field vanishes for n >= 2
        return MilnorClass.zero(E, x.degree)
    raise NotComputable(f"norms in Milnor degree {x.degree} are not implemented")


def _expand_entry(v, e):
    a, w = v.decompose(e)
    return a, w


def residue(x, v, sign=CLASSIC):
    """The tame symbol d_v : K_n(F) -> K_{n-1}(kappa_v)."""
    if sign not in TAME_SIGNS:
        raise FieldError(f"unknown tame-sign convention {sign!r}")
    if v.field != x.field:
        raise FieldError(f"{v} is not a valuation of {x.field}")
    kappa = v.residue_field
    n = x.degree
    if n <= 0:
        return MilnorClass.zero(kappa, n - 1)
    minus_one = -x.field.one()
    pi = v.uniformizer()
    out = []
    for entries, c in x.terms:
        parts = [v.decompose(e, pi) for e in entries]
        # multilinear expansion: each slot is either pi (weight a) or its unit part
        slots = []
        for a, w in parts:
            options = []
            if a:
                options.append(("pi", a, None))
            if not w.is_one():
                options.append(("unit", 1, w))
            slots.append(options)
        for pick in iproduct(*slots):
            coef = c
            tokens = []
            for kind, weight, w in pick:
                coef *= weight
                tokens.append((kind, w))
            sgn, tokens = _collapse_uniformizers(tokens, minus_one)
            if tokens is None:
                continue
            j = next(k for k, t in enumerate(tokens) if t[0] == "pi")
            sgn *= (-1) ** j
            rest = [v.reduce(w) for kind, w in tokens if kind == "unit"]
            out.append((tuple(rest), sgn * coef))
    if sign == ROST and (n - 1) % 2:
        out = [(e, -c) for e, c in out]
    return MilnorClass.from_terms(kappa, n - 1, out)


def _collapse_uniformizers(tokens, minus_one):
    """Use {pi, pi} = {pi, -1} until one pi remains; None when none does."""
    tokens = list(tokens)
    sgn = 1
    while True:
        where = [k for k, t in enumerate(tokens) if t[0] == "pi"]
        if not where:
            return sgn, None
        if len(where) == 1:
            return sgn, tokens
        p, q = where[0], where[1]
        # move slot q next to slot p
        moved = tokens.pop(q)
        tokens.insert(p + 1, moved)
        sgn *= (-1) ** (q - p - 1)
        tokens[p + 1] = ("unit", minus_one)


def specialize(x, v, pi, sign=CLASSIC):
    """s_v^pi(x) = d_v({-pi} . x)."""
    pi = x.field.coerce(pi)
    if v.value(pi) != 1:
        raise FieldError(f"{pi} is not a uniformizer at {v}")
    return residue(product(MilnorClass.unit(-pi), x), v, sign)


# ---------------------------------------------------------------------------
# Weil reciprocity on P^1 over a finite field


def places_of_support(x):
    """Points of P^1 where some entry of x has a zero or a pole, plus infinity."""
    F = x.field
    if not isinstance(F, RationalFunctionField):
        raise FieldError("places of support need a rational function field")
    seen = {}
    for entries, _ in x.terms:
        for e in entries:
            for poly in (F.num(e.rep), F.den(e.rep)):
                if poly.degree < 1:
                    continue
                _, factors = factor_poly(poly)
                for g, _ in factors:
                    seen[g.key()] = g
    points = [PointOfLine(F, g) for _, g in sorted(seen.items())]
    points.append(InfinitePlace(F))
    return points


def weil_reciprocity_defect(x, sign=CLASSIC):
    """Sum over all places of P^1 of N_{kappa_x/F_q}(d_x x); always zero."""
    F = x.field
    if not (isinstance(F, RationalFunctionField) and F.base.is_finite):
        raise FieldError("Weil reciprocity is checked over F_q(t)")
    if x.degree not in (1, 2):
        raise NotComputable("the reciprocity check handles degrees 1 and 2")
    k = F.base
    total = MilnorClass.zero(k, x.degree - 1)
    for v in places_of_support(x):
        r = residue(x, v, sign)
        total = total + norm(r, inclusion(k, v.residue_field))
    if total.degree == 1:
        return MilnorClass.unit(total.as_unit())
    return total


# ---------------------------------------------------------------------------
# expanded form: a sound equality test


def expand(x, elements=None):
    """Rewrite x over a presentation of the unit group by atoms.

    Returns a dict {tuple of atom keys: coefficient}.  Only valid relations
    are used, so equal dicts mean equal classes; different dicts prove
    nothing beyond the relations modelled here.  ``elements``, when given,
    is filled with the atom elements behind each key.
    """
    F = x.field
    if x.degree == 0:
        return {(): int(x)} if int(x) else {}
    vanish = torsion_pairs_vanish(F)
    minus_one_atoms = list(unit_atoms(-F.one()).items()) if F.characteristic != 2 else []
    acc = defaultdict(int)
    mods = {}
    for entries, c in x.terms:
        decs = [list(unit_atoms(e).items()) for e in entries]
        for pick in iproduct(*decs):
            coef = c
            atoms = []
            for atom, k in pick:
                coef *= k
                atoms.append(atom)
            _reduce_atoms(atoms, coef, vanish, minus_one_atoms, acc, mods, elements)
    out = {}
    for key, c in acc.items():
        m = mods[key]
        if m:
            c %= m
        if c:
            out[key] = c
    return out


def _reduce_atoms(atoms, coef, vanish, minus_one_atoms, acc, mods, elements=None):
    torsion = [a for a in atoms if a.order]
    if vanish and len(torsion) >= 2:
        return
    keys = [a.key for a in atoms]
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            if keys[i] == keys[j] and not atoms[i].order:
                # {a, .., a} -> move the second a next to the first, then {a, a} = {a, -1}
                rest = atoms[:j] + atoms[j + 1:]
                sgn = (-1) ** (j - i - 1)
                for m1, k in minus_one_atoms:
                    new = rest[: i + 1] + [m1] + rest[i + 1:]
                    _reduce_atoms(new, coef * sgn * k, vanish, minus_one_atoms, acc, mods, elements)
                return
    sgn, ordered = _sort_atoms(atoms)
    key = tuple(a.key for a in ordered)
    orders = [a.order for a in ordered if a.order]
    m = 0
    for o in orders:
        m = math.gcd(m, o)
    acc[key] += sgn * coef
    mods[key] = m
    if elements is not None:
        elements[key] = tuple(a.element for a in ordered)


def _sort_atoms(atoms):
    items = list(atoms)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1].key > items[j].key:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, items


def expanded_class(x):
    """x rewritten as a combination of symbols in unit-group generators."""
    if x.degree == 0:
        return x
    elements = {}
    dec = expand(x, elements)
    return MilnorClass.from_terms(x.field, x.degree, [(elements[k], c) for k, c in dec.items()])


def _real_symbol_parity(x):
    """Parity of the real symbol: sum of coefficients over terms whose entries are all negative."""
    return sum(c for entries, c in x.terms if all(e.rep < 0 for e in entries)) % 2


def _odd_primes_of_support(x):
    primes = set()
    for entries, _ in x.terms:
        for e in entries:
            for atom in unit_atoms(e):
                if not atom.order and int(atom.element.rep) != 2:
                    primes.add(int(atom.element.rep))
    return sorted(primes)


def _decide_rationals(x):
    from .valuations import FinitePlace

    if x.degree >= 3:
        return _real_symbol_parity(x) == 0
    # degree 2: tame symbols at odd primes plus the real symbol detect K_2(Q)
    for p in _odd_primes_of_support(x):
        if not residue(x, FinitePlace(p)).as_unit().is_one():
            return False
    return _real_symbol_parity(x) == 0


def _finite_residues_vanish(x):
    for v in places_of_support(x):
        if isinstance(v, PointOfLine) and not residue(x, v).as_unit().is_one():
            return False
    return True


def decide_zero(x):
    """True or False when x = 0 is decided exactly, None when it is not decidable here.

    Uses the rank of K_0, the unit group in degree 1, and in higher degree the
    vanishing of K^M_{>=2} of finite fields, Milnor's exact sequence for a
    rational function field, and Tate's computation of K_2(Q).
    """
    if x.degree <= 0:
        return x.degree < 0 or int(x) == 0
    if x.degree == 1:
        return x.as_unit().is_one()
    F = x.field
    if F.is_finite:
        return True
    if not x.terms:
        return True
    try:
        if not expand(x):
            return True
    except NotComputable:
        pass
    from .fields import Rationals

    if isinstance(F, Rationals):
        return _decide_rationals(x)
    if isinstance(F, RationalFunctionField) and F.base.is_finite:
        if x.degree >= 3:
            return True
        return _finite_residues_vanish(x)
    if isinstance(F, RationalFunctionField) and isinstance(F.base, Rationals) and x.degree == 2:
        if not _finite_residues_vanish(x):
            return False
        # x is now constant; it equals its specialization at infinity
        v = InfinitePlace(F)
        constant = specialize(x, v, F.gen().inverse())
        return _decide_rationals(constant)
    return None


def equivalent(a, b):
    """True when a and b are shown equal, False when shown different, None when undecidable here."""
    if a.field != b.field or a.degree != b.degree:
        return False
    if a == b:
        return True
    try:
        return decide_zero(a - b)
    except NotComputable:
        return None


# ---------------------------------------------------------------------------
# K_2 of a finite field by brute-force relation closure


@dataclass
class ClosureReport:
    field: object
    symbols: int
    depth: int
    all_zero: bool
    zero_symbols: int
    relations: int

    def to_json(self):
        return {"field": str(self.field), "symbols": self.symbols, "depth": self.depth,
                "all_zero": self.all_zero, "zero_symbols": self.zero_symbols,
                "relations": self.relations}


def k2_relation_closure(F, max_depth=6):
    """Breadth-first closure of Steinberg and bilinearity relations on K_2(F_q).

    Works in the free abelian group on all (q-1)^2 formal symbols {a, b}.  The
    seed is the set of Steinberg relations, and the first frontier also holds
    the symbols with an entry 1; each round adds every bilinearity relation
    that touches the current frontier.  The report says whether
    every symbol became zero within ``max_depth`` rounds.
    """
    from .snf import Lattice

    if not F.is_finite:
        raise FieldError("the closure oracle needs a finite field")
    units = [e for e in F.elements() if not e.is_zero()]
    index = {e.rep: k for k, e in enumerate(units)}
    m = len(units)
    dim = m * m

    def sym(a, b):
        return index[a.rep] * m + index[b.rep]

    lattice = Lattice(dim)
    relations = 0
    reached = set()
    one = F.one()
    frontier = set()
    for a in units:
        if a != one:
            s = sym(a, one - a)
            v = [0] * dim
            v[s] = 1
            lattice.add(v)
            relations += 1
            frontier.add(s)
    # symbols with an entry 1 are the identity, killed by the first bilinearity round
    frontier.update(sym(one, b) for b in units)
    frontier.update(sym(a, one) for a in units)
    reached |= frontier
    depth = 0

    def unit_vector(s):
        v = [0] * dim
        v[s] = 1
        return v

    while depth < max_depth:
        if all(lattice.contains(unit_vector(s)) for s in range(dim)):
            break
        depth += 1
        new = set()
        for a in units:
            for b in units:
                for c in units:
                    # {ab, c} - {a, c} - {b, c} and {c, ab} - {c, a} - {c, b}
                    for trio in ((sym(a * b, c), sym(a, c), sym(b, c)),
                                 (sym(c, a * b), sym(c, a), sym(c, b))):
                        if not (set(trio) & frontier):
                            continue
                        v = [0] * dim
                        v[trio[0]] += 1
                        v[trio[1]] -= 1
                        v[trio[2]] -= 1
                        lattice.add(v)
                        relations += 1
                        new.update(t for t in trio if t not in reached)
        reached |= new
        frontier = new
        if not frontier:
            break
    zero = sum(1 for s in range(dim) if lattice.contains(unit_vector(s)))
    return ClosureReport(F, dim, depth, zero == dim, zero, relations)


def kgroup_structure(F, n, bound=2):
    """A structural description of K^M_n(F) on the supported fields."""
    from .fields import Rationals

    if n < 0:
        return {"field": str(F), "degree": n, "structure": "0", "source": "negative degree"}
    if n == 0:
        return {"field": str(F), "degree": 0, "structure": "Z", "source": "rank of K_0 of a field"}
    if F.is_finite:
        if n == 1:
            return {"field": str(F), "degree": 1, "structure": f"Z/{F.order - 1}",
                    "source": "multiplicative group of a finite field"}
        report = {"field": str(F), "degree": n, "structure": "0",
                  "source": "symbols over finite fields vanish in degree >= 2"}
        if n == 2 and F.order <= 16:
            report["closure"] = k2_relation_closure(F).to_json()
        return report
    if isinstance(F, RationalFunctionField) and (F.base.is_finite or isinstance(F.base, Rationals)):
        from .valuations import closed_points

        pts = closed_points("A1", F.base, bound, var=F.var)
        return {
            "field": str(F), "degree": n,
            "structure": f"K{n}({F.base}) + sum over closed points x of K{n - 1}(kappa_x)",
            "source": "Milnor exact sequence for a rational function field (split)",
            "constant_part": kgroup_structure(F.base, n)["structure"],
            "points": [str(p) for p in pts], "truncated_at_degree": bound,
        }
    if isinstance(F, Rationals) and n == 1:
        return {"field": "Q", "degree": 1, "structure": "Z/2 + free abelian on the primes",
                "source": "unique factorization"}
    if isinstance(F, Rationals) and n == 2:
        return {"field": "Q", "degree": 2,
                "structure": "tame symbols map to Z/2 + sum over odd primes p of F_p^x",
                "source": "tame symbol decomposition (target structure only)"}
    raise NotComputable(f"no structure report for K^M_{n}({F})")


# ---------------------------------------------------------------------------
# cycle modules


class CycleModuleInterface:
    """The four structural maps of a cycle premodule.

    Implementations supply ``restrict``, ``norm``, ``multiply`` and
    ``residue`` together with ``equal``; value groups are described by
    ``describe(E, n)``.
    """

    name = "abstract"

    def describe(self, E, n):
        raise NotImplementedError

    def restrict(self, phi, x):
        raise NotImplementedError

    def norm(self, phi, x):
        raise NotImplementedError

    def multiply(self, sym, x):
        raise NotImplementedError

    def residue(self, v, x):
        raise NotImplementedError

    def equal(self, a, b):
        return a == b


class MilnorK(CycleModuleInterface):
    """Milnor K-theory, the universal cycle module."""

    name = "milnor"

    def __init__(self, tame_sign=CLASSIC):
        if tame_sign not in TAME_SIGNS:
            raise FieldError(f"unknown tame-sign convention {tame_sign!r}")
        self.tame_sign = tame_sign

    def describe(self, E, n):
        return f"K^M_{n}({E})"

    def restrict(self, phi, x):
        return restrict(x, phi)

    def norm(self, phi, x):
        return norm(x, phi)

    def multiply(self, sym, x):
        return product(sym, x)

    def residue(self, v, x):
        return residue(x, v, self.tame_sign)

    def equal(self, a, b):
        return equivalent(a, b)


@dataclass
class ContractReport:
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def check_contract(M, cases):
    """Check the restriction/symbol/residue compatibilities on supplied cases.

    ``cases`` is an iterable of dicts with keys among:
      ``("R1a", phi, psi, x)``: restrictions compose;
      ``("R2a", phi, sym, x)``: phi_*(sym . x) = phi_*(sym) . phi_*(x);
      ``("R3e", v, u, x)``: d_v({u} . x) = -{u bar} . d_v(x) for a v-unit u.
    """
    from .morphisms import compose

    failures = []
    checked = 0
    for case in cases:
        tag = case[0]
        if tag == "R1a":
            _, phi, psi, x = case
            lhs = M.restrict(psi, M.restrict(phi, x))
            rhs = M.restrict(compose(phi, psi), x)
        elif tag == "R2a":
            _, phi, sym, x = case
            lhs = M.restrict(phi, M.multiply(sym, x))
            rhs = M.multiply(M.restrict(phi, sym), M.restrict(phi, x))
        elif tag == "R3e":
            _, v, u, x = case
            lhs = M.residue(v, M.multiply(MilnorClass.unit(u), x))
            rhs = -M.multiply(MilnorClass.unit(v.reduce(u)), M.residue(v, x))
        else:
            raise ValueError(f"unknown contract tag {tag!r}")
        checked += 1
        if M.equal(lhs, rhs) is not True:
            failures.append((tag, str(lhs), str(rhs)))
    return ContractReport(checked, failures)


class MilnorKModN(MilnorK):
    """Milnor K-theory modulo an integer N (coefficients reduced mod N)."""

    def __init__(self, modulus, tame_sign=CLASSIC):
        super().__init__(tame_sign)
        if modulus < 1:
            raise FieldError("modulus must be positive")
        self.modulus = modulus
        self.name = f"milnor/{modulus}"

    def describe(self, E, n):
        return f"K^M_{n}({E})/{self.modulus}"

    def _reduce(self, x):
        return MilnorClass.from_terms(x.field, x.degree, [(e, c % self.modulus) for e, c in x.terms])

    def restrict(self, phi, x):
        return self._reduce(super().restrict(phi, x))

    def norm(self, phi, x):
        return self._reduce(super().norm(phi, x))

    def multiply(self, sym, x):
        return self._reduce(super().multiply(sym, x))

    def residue(self, v, x):
        return self._reduce(super().residue(v, x))

    def equal(self, a, b):
        d = a - b
        if d.degree == 0:
            return int(d) % self.modulus == 0
        if d.degree == 1:
            # u is trivial mod N exactly when it is an N-th power; decide over finite fields
            u = d.as_unit()
            if u.field.is_finite:
                return any((w ** self.modulus) == u for w in u.field.elements() if not w.is_zero())
        try:
            ex = expand(d)
        except NotComputable:
            return None
        return all(c % self.modulus == 0 for c in ex.values())

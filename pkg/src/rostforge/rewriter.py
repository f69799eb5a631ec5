"""Morphism words in the category of function fields with twists, and their rewriting.

A word is a formal integer combination of generator sequences.  Sequences
are stored in composition order: ``(g1, g2, g3)`` means ``g1 o g2 o g3``,
so ``g3`` is applied first.  ``normalize`` rewrites a word until every
summand has the shape

    nrm o sym o rst o res ... res o sym

(norm, then symbol, then restriction, then residues, then a symbol; each
part optional), and parses the summands into ``RostNormalForm`` records.

Internally residues use the classic tame-symbol sign.  Residues written in
the other convention are converted on entry (a sign per residue, read off
the twist) and converted back on exit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field

from .errors import FieldError, NonTerminating, NotComputable
from .factoring import factor_poly
from .fields import Elt, FiniteExtension
from .linalg import solve
from .milnor import CLASSIC, ROST, TAME_SIGNS, MilnorClass, MilnorK, norm as milnor_norm, residue as milnor_residue
from .morphisms import (
    ExtensionHom,
    Identity,
    Inclusion,
    Substitution,
    _step_ext,
    compose as compose_maps,
    inclusion,
    is_constant_into,
    reduction_morphism,
)
from .poly import Poly
from .valuations import InfinitePlace, PointOfLine, _fresh_name

DEFAULT_STEP_BUDGET = 10_000


def step_budget():
    raw = os.environ.get("ROSTFORGE_STEP_BUDGET")
    if raw is None:
        return DEFAULT_STEP_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise FieldError(f"ROSTFORGE_STEP_BUDGET must be an integer, got {raw!r}") from None
    if value < 0:
        raise FieldError("ROSTFORGE_STEP_BUDGET must be nonnegative")
    return value


# ---------------------------------------------------------------------------
# objects and generators


@dataclass(frozen=True)
class ObjectRef:
    field: object
    twist: int

    def __str__(self):
        return f"({self.field}, {self.twist})"

    def to_json(self):
        return {"field": str(self.field), "twist": self.twist}


class Generator:
    kind = ""
    shift = 0

    def __str__(self):
        from .dsl import format_generator

        return format_generator(self)


@dataclass(frozen=True, eq=True)
class Restriction(Generator):
    """phi_*: (E, n) -> (L, n) for phi: E -> L."""

    phi: object
    kind = "rst"

    @property
    def source_field(self):
        return self.phi.source

    @property
    def target_field(self):
        return self.phi.target

    __str__ = Generator.__str__


@dataclass(frozen=True, eq=True)
class Norm(Generator):
    """phi^!: (L, n) -> (E, n) for phi: E -> L finite."""

    phi: object
    kind = "nrm"

    def __post_init__(self):
        if not self.phi.is_finite:
            raise FieldError(f"norm along the non-finite morphism {self.phi}")

    @property
    def source_field(self):
        return self.phi.target

    @property
    def target_field(self):
        return self.phi.source

    __str__ = Generator.__str__


@dataclass(frozen=True, eq=True)
class SymbolMult(Generator):
    """gamma_x: (E, n) -> (E, n + deg x)."""

    x: MilnorClass
    kind = "sym"

    @property
    def source_field(self):
        return self.x.field

    @property
    def target_field(self):
        return self.x.field

    @property
    def shift(self):
        return self.x.degree

    __str__ = Generator.__str__


@dataclass(frozen=True, eq=True)
class Residue(Generator):
    """d_v: (E, n) -> (kappa(v), n - 1)."""

    v: object
    sign: str = CLASSIC
    kind = "res"
    shift = -1

    def __post_init__(self):
        if self.sign not in TAME_SIGNS:
            raise FieldError(f"unknown tame-sign convention {self.sign!r}")

    @property
    def source_field(self):
        return self.v.field

    @property
    def target_field(self):
        return self.v.residue_field

    __str__ = Generator.__str__


def _input_twists(seq, n):
    """Input twist of each generator when the sequence starts at twist n."""
    out = [0] * len(seq)
    cur = n
    for k in range(len(seq) - 1, -1, -1):
        out[k] = cur
        cur += seq[k].shift
    return out


def _typecheck(seq, source):
    field, twist = source.field, source.twist
    for g in reversed(seq):
        if g.source_field != field:
            raise FieldError(f"{g} expects {g.source_field}, got {field}")
        field, twist = g.target_field, twist + g.shift
    return ObjectRef(field, twist)


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class MorphismWord:
    source: ObjectRef
    target: ObjectRef
    terms: tuple  # ((sequence, coefficient), ...), merged, nonzero

    @staticmethod
    def build(source, target, raw):
        acc = {}
        for seq, c in raw:
            seq = tuple(seq)
            end = _typecheck(seq, source)
            if end != target:
                raise FieldError(f"sequence ends at {end}, expected {target}")
            acc[seq] = acc.get(seq, 0) + c
        return MorphismWord(source, target, tuple((s, c) for s, c in acc.items() if c))

    @staticmethod
    def generator(g, source):
        if not isinstance(source, ObjectRef):
            raise FieldError("source must be an ObjectRef")
        return MorphismWord.build(source, _typecheck((g,), source), [((g,), 1)])

    @staticmethod
    def identity(obj):
        return MorphismWord(obj, obj, (((), 1),))

    @staticmethod
    def zero(source, target):
        return MorphismWord(source, target, ())

    @staticmethod
    def chain(gens, source):
        """g1 o g2 o ... o gk for gens = [g1, ..., gk], starting at source."""
        gens = tuple(gens)
        return MorphismWord.build(source, _typecheck(gens, source), [(gens, 1)])

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise FieldError("adding words with different endpoints")
        return MorphismWord.build(self.source, self.target, self.terms + other.terms)

    def scale(self, k):
        return MorphismWord.build(self.source, self.target, [(s, k * c) for s, c in self.terms])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def length(self):
        return max((len(s) for s, _ in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for seq, c in self.terms:
            body = " ∘ ".join(str(g) for g in seq) if seq else "id"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{body}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "terms": [{"coefficient": c, "generators": [str(g) for g in seq]} for seq, c in self.terms]}


def compose(w1, w2):
    """w1 o w2 (w2 applied first), bilinear in both arguments."""
    if w2.target != w1.source:
        raise FieldError(f"cannot compose: {w2.target} is not {w1.source}")
    raw = [(s1 + s2, c1 * c2) for s1, c1 in w1.terms for s2, c2 in w2.terms]
    return MorphismWord.build(w2.source, w1.target, raw)


# ---------------------------------------------------------------------------
# tame-sign conversion


def _convert_residues(word, sign):
    """Rewrite every residue into convention ``sign``; rost and classic differ by (-1)^(n-1)."""
    raw = []
    for seq, c in word.terms:
        twists = _input_twists(seq, word.source.twist)
        new = []
        for g, n in zip(seq, twists):
            if isinstance(g, Residue) and g.sign != sign:
                if (n - 1) % 2:
                    c = -c
                g = Residue(g.v, sign)
            new.append(g)
        raw.append((tuple(new), c))
    return MorphismWord.build(word.source, word.target, raw)


# ---------------------------------------------------------------------------
# helpers for the valuation rules


def _min_poly_over_base(kappa, beta, F):
    """Minimal polynomial over F of beta in kappa, kappa = F or a simple extension of F."""
    if kappa == F:
        return Poly(F, [F.neg(beta.rep), F.one_rep()])

    def coords(a):
        return list(a.rep)

    powers = [kappa.one()]
    while True:
        nxt = powers[-1] * beta
        sol = solve(F, [coords(p) for p in powers], coords(nxt))
        if sol is not None:
            return Poly(F, [F.neg(c) for c in sol] + [F.one_rep()])
        powers.append(nxt)


def _evaluate_in(kappa, F, h, alpha):
    embed = (lambda c: c) if kappa == F else kappa.embed_base
    return kappa.element(h.evaluate(alpha.rep, kappa, embed))


def _residue_map(kappa_w, kappa_v, F, beta):
    """kappa(w) -> kappa(v) over F sending the class of the variable to beta."""
    if kappa_w == F:
        return inclusion(F, kappa_v)
    return ExtensionHom(kappa_w, kappa_v, inclusion(F, kappa_v), beta)


def restrict_valuation(phi, v):
    """For v on phi.target: None if v is trivial on phi.source, else (w, e, residue map)."""
    if phi.source.is_finite or is_constant_into(phi, v):
        return None
    if isinstance(phi, Substitution):
        S, h = phi.source, phi.h
        F = S.base
        if isinstance(v, InfinitePlace):
            return InfinitePlace(S), h.degree, Identity(F)
        if isinstance(v, PointOfLine):
            kv = v.residue_field
            beta = _evaluate_in(kv, F, h, v.root())
            g = _min_poly_over_base(kv, beta, F)
            w = PointOfLine(S, g, check=False)
            e = v.value(phi.apply(S.make(g)))
            return w, e, _residue_map(w.residue_field, kv, F, beta)
    raise NotComputable(f"restriction of {v} along {phi} is not implemented")


def valuation_extensions(phi, v):
    """For v on phi.source: [(w, residue map kappa(v) -> kappa(w))] over the w above v."""
    if isinstance(phi, Substitution):
        T, h = phi.target, phi.h
        F = T.base
        if isinstance(v, InfinitePlace):
            return [(InfinitePlace(T), Identity(F))]
        if isinstance(v, PointOfLine):
            out = []
            for pi_w, _ in factor_poly(v.pi.compose(h))[1]:
                w = PointOfLine(T, pi_w, check=False)
                kw = w.residue_field
                beta = _evaluate_in(kw, F, h, w.root())
                out.append((w, _residue_map(v.residue_field, kw, F, beta)))
            return out
    raise NotComputable(f"extensions of {v} along {phi} are not implemented")


def _invertible(phi):
    try:
        return phi.is_finite and phi.degree == 1 and phi.source == phi.target and phi.inverse() is not None
    except NotComputable:
        return False


def tensor_decomposition(phi, psi):
    """Points z of Spec(E (x)_K L) for phi: K -> E finite, psi: K -> L.

    Returns [(length, phibar_z: L -> L_z, psibar_z: E -> L_z)].
    """
    if _invertible(phi):
        return [(1, Identity(psi.target), compose_maps(phi.inverse(), psi))]
    if _invertible(psi):
        inv = psi.inverse()
        return [(1, compose_maps(inv, phi), Identity(phi.target))]
    K, E, L = phi.source, phi.target, psi.target
    ext = _step_ext(E)
    if not (isinstance(phi, Inclusion) and ext is not None and ext.base == K):
        raise NotComputable(f"Spec({E} (x) {L}) over {K} is not implemented")
    f = Poly(L, [psi.apply(Elt(K, c)).rep for c in ext.modulus.coeffs])
    out = []
    for g, m in factor_poly(f)[1]:
        if m != 1:
            raise NotComputable("inseparable tensor decomposition")
        if g.degree == 1:
            root = Elt(L, L.neg(g.coeffs[0]))
            out.append((1, Identity(L), ExtensionHom(E, L, psi, root)))
        else:
            Lz = FiniteExtension(L, g, name=_fresh_name(L), check=False)
            into = Inclusion(L, Lz)
            out.append((1, into, ExtensionHom(E, Lz, compose_maps(psi, into), Elt(Lz, Lz.gen_rep()))))
    return out


def _entries_are_units(x, v):
    return all(v.value(e) == 0 for entries, _ in x.terms for e in entries)


def _reduce_class(x, v):
    kappa = v.residue_field
    return MilnorClass.from_terms(kappa, x.degree,
                                  [(tuple(v.reduce(e) for e in entries), c) for entries, c in x.terms])


def _lift_class(x, w):
    E = w.field
    return MilnorClass.from_terms(E, x.degree,
                                  [(tuple(w.lift(e) for e in entries), c) for entries, c in x.terms])


def _is_minus_uniformizer_symbol(x, v):
    """True for the single symbol {a} with v(a) = 1, coefficient 1."""
    if x.degree != 1 or len(x.terms) != 1:
        return False
    (entries, c), = x.terms
    return c == 1 and v.value(entries[0]) == 1


def _split_at_uniformizer(x, v, pi):
    """Write d_v o gamma_x as a sum of (coef, [S(unit class), D(v)]) and (coef, [S(unit), D(v), S({-pi})])."""
    F = x.field
    minus_one = -F.one()
    kappa = v.residue_field
    plain, through = [], []
    for entries, c in x.terms:
        parts = [v.decompose(e, pi) for e in entries]
        slots = []
        for a, u in parts:
            options = []
            if a:
                options.append(("pi", a, None))
            if not u.is_one():
                options.append(("unit", 1, u))
            slots.append(options)
        from itertools import product as iproduct

        from .milnor import _collapse_uniformizers

        r = len(entries)
        for pick in iproduct(*slots):
            coef = c
            tokens = []
            for kind, weight, u in pick:
                coef *= weight
                tokens.append((kind, u))
            sgn, collapsed = _collapse_uniformizers(tokens, minus_one)
            if collapsed is None:
                # all units: d o gamma_{u} = (-1)^r gamma_{ubar} o d
                units = tuple(v.reduce(u) for _, u in tokens)
                plain.append((units, coef * sgn * (-1) ** r))
                continue
            j = next(k for k, t in enumerate(collapsed) if t[0] == "pi")
            sgn *= (-1) ** j
            rest = [u for kind, u in collapsed if kind == "unit"]
            # {pi, rest} = {-pi, rest} - {-1, rest}
            units = tuple(v.reduce(u) for u in [minus_one] + rest)
            plain.append((units, -coef * sgn * (-1) ** r))
            through.append((tuple(v.reduce(u) for u in rest), coef * sgn))
    out = []
    if plain:
        by_degree = MilnorClass.from_terms(kappa, x.degree, plain)
        if not by_degree.is_zero():
            out.append((1, [SymbolMult(by_degree), Residue(v)]))
    if through:
        rest_class = MilnorClass.from_terms(kappa, x.degree - 1, through)
        if not rest_class.is_zero():
            out.append((1, [SymbolMult(rest_class), Residue(v), SymbolMult(MilnorClass.unit(-pi))]))
    return out


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class Step:
    rule: str
    term: int
    position: int
    before: str
    after: str

    def to_json(self):
        return {"rule": self.rule, "term": self.term, "position": self.position,
                "before": self.before, "after": self.after}


@dataclass
class _Context:
    seq: tuple
    position: int
    width: int

    @property
    def left(self):
        return self.seq[self.position - 1] if self.position > 0 else None

    @property
    def right(self):
        k = self.position + self.width
        return self.seq[k] if k < len(self.seq) else None


def _acts_as_identity(phi):
    if isinstance(phi, Identity):
        return True
    if phi.source != phi.target:
        return False
    try:
        return all(phi.apply(g) == g for g in phi.source.generator_names().values())
    except NotComputable:
        return False


def _rule_unit(win, ctx):
    g, = win
    if isinstance(g, (Restriction, Norm)) and _acts_as_identity(g.phi):
        return [(1, [])]
    if isinstance(g, SymbolMult):
        if g.x.is_zero():
            return []
        if g.x.degree == 0:
            return [(int(g.x), [])]
    return None


def _rule_R0(win, ctx):
    a, b = win
    if isinstance(a, SymbolMult) and isinstance(b, SymbolMult):
        return [(1, [SymbolMult(a.x * b.x)])]
    return None


def _rule_R1a(win, ctx):
    a, b = win
    if isinstance(a, Restriction) and isinstance(b, Restriction):
        return [(1, [Restriction(compose_maps(b.phi, a.phi))])]
    return None


def _rule_R1b(win, ctx):
    a, b = win
    if isinstance(a, Norm) and isinstance(b, Norm):
        return [(1, [Norm(compose_maps(a.phi, b.phi))])]
    return None


def _rule_R1c(win, ctx):
    a, b = win
    if isinstance(a, Restriction) and isinstance(b, Norm):
        return [(m, [Norm(phibar), Restriction(psibar)])
                for m, phibar, psibar in tensor_decomposition(b.phi, a.phi)]
    return None


def _rule_R2a(win, ctx):
    a, b = win
    if isinstance(a, Restriction) and isinstance(b, SymbolMult):
        return [(1, [SymbolMult(_restrict(b.x, a.phi)), a])]
    return None


def _restrict(x, phi):
    from .milnor import restrict

    return restrict(x, phi)


def _rule_R2b(win, ctx):
    # gamma_x o phi^!  ->  phi^! o gamma_{phi_* x}  (projection formula)
    a, b = win
    if isinstance(a, SymbolMult) and isinstance(b, Norm):
        return [(1, [b, SymbolMult(_restrict(a.x, b.phi))])]
    return None


def _rule_R2c(win, ctx):
    a, b, c = win
    if isinstance(a, Norm) and isinstance(b, SymbolMult) and isinstance(c, Restriction) and a.phi == c.phi:
        try:
            y = milnor_norm(b.x, a.phi)
        except NotComputable:
            return None
        return [(1, [SymbolMult(y)])]
    return None


def _rule_R3ac(win, ctx):
    a, b = win
    if isinstance(a, Residue) and isinstance(b, Restriction):
        data = restrict_valuation(b.phi, a.v)
        if data is None:
            return []  # R3c
        w, e, phibar = data
        return [(e, [Restriction(phibar), Residue(w)])]
    return None


def _rule_R3b(win, ctx):
    a, b = win
    if isinstance(a, Residue) and isinstance(b, Norm):
        return [(1, [Norm(phibar), Residue(w)]) for w, phibar in valuation_extensions(b.phi, a.v)]
    return None


def _rule_R3d(win, ctx):
    a, b, c = win
    if not (isinstance(a, Residue) and isinstance(b, SymbolMult) and isinstance(c, Restriction)):
        return None
    v = a.v
    if not _is_minus_uniformizer_symbol(b.x, v):
        return None
    data = restrict_valuation(c.phi, v)
    if data is None:
        # d_v o gamma_{-pi} o phi_* = phibar_*
        return [(1, [Restriction(reduction_morphism(c.phi, v))])]
    # v nontrivial on the source: pull the symbol back, then R3a
    (entries, _), = b.x.terms
    pre = c.phi.preimage(entries[0])
    if pre is None:
        return None
    w, e, phibar = data
    return [(e, [Restriction(phibar), Residue(w), SymbolMult(MilnorClass.unit(pre))])]


def _rule_lift(win, ctx):
    # d_v' o gamma_c o d_w  ->  (-1)^r d_v' o d_w o gamma_{lift c}
    a, b = win
    if isinstance(a, SymbolMult) and isinstance(b, Residue) and isinstance(ctx.left, Residue):
        return [((-1) ** a.x.degree, [b, SymbolMult(_lift_class(a.x, b.v))])]
    return None


def _rule_residue_symbol(win, ctx):
    a, b = win
    if not (isinstance(a, Residue) and isinstance(b, SymbolMult)):
        return None
    v, x = a.v, b.x
    right = ctx.right
    if right is None:
        # R3e at the source end: only for unit symbols, and not under another residue
        if isinstance(ctx.left, Residue) or not _entries_are_units(x, v):
            return None
        return [((-1) ** x.degree, [SymbolMult(_reduce_class(x, v)), Residue(v)])]
    if isinstance(right, Restriction):
        if _is_minus_uniformizer_symbol(x, v):
            return None  # left for R3d
        data = restrict_valuation(right.phi, v)
        if data is None:
            pi = v.uniformizer()
        else:
            w, e, _ = data
            if e != 1:
                return None
            pi = right.phi.apply(w.uniformizer())
        return _split_at_uniformizer(x, v, pi)
    return None


PAIR_RULES = (
    ("R0", _rule_R0),
    ("R1a", _rule_R1a),
    ("R1b", _rule_R1b),
    ("R1c", _rule_R1c),
    ("R2a", _rule_R2a),
    ("R2b", _rule_R2b),
    ("R3a/R3c", _rule_R3ac),
    ("R3b", _rule_R3b),
    ("R3e-lift", _rule_lift),
    ("R3e", _rule_residue_symbol),
)
TRIPLE_RULES = (
    ("R2c", _rule_R2c),
    ("R3d", _rule_R3d),
)


def _find_redex(seq):
    """Innermost-first search: positions from the source end of the word."""
    for i in range(len(seq) - 1, -1, -1):
        out = _rule_unit((seq[i],), _Context(seq, i, 1))
        if out is not None:
            return "unit", i, 1, out
        if i + 2 < len(seq):
            ctx = _Context(seq, i, 3)
            for name, rule in TRIPLE_RULES:
                out = rule(seq[i:i + 3], ctx)
                if out is not None:
                    return name, i, 3, out
        if i + 1 < len(seq):
            ctx = _Context(seq, i, 2)
            for name, rule in PAIR_RULES:
                out = rule(seq[i:i + 2], ctx)
                if out is not None:
                    return name, i, 2, out
    return None


def _seq_str(seq):
    return " ∘ ".join(str(g) for g in seq) if seq else "id"


def rewrite_step(w):
    """Apply one oriented rule to the first reducible summand; None at a fixpoint.

    Returns (new word, Step).  NotComputable from a rule propagates with the
    word attached as ``partial``.
    """
    for t, (seq, c) in enumerate(w.terms):
        try:
            found = _find_redex(seq)
        except NotComputable as exc:
            exc.partial = w
            raise
        if found is None:
            continue
        name, i, width, replacement = found
        raw = [(s, k) for j, (s, k) in enumerate(w.terms) if j != t]
        after = []
        for mult, repl in replacement:
            new_seq = seq[:i] + tuple(repl) + seq[i + width:]
            raw.append((new_seq, c * mult))
            after.append(f"{mult}*[{_seq_str(tuple(repl))}]")
        new = MorphismWord.build(w.source, w.target, raw)
        step = Step(name, t, i, _seq_str(seq[i:i + width]), " + ".join(after) or "0")
        return new, step
    return None


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class RostNormalForm:
    coefficient: int
    norm: object           # phi for the outer norm, or None
    sigma: object          # MilnorClass or None
    restriction: object    # psi, or None
    valuations: tuple
    tau: object            # MilnorClass or None
    intermediate: object   # the field L carrying sigma

    @property
    def r(self):
        return len(self.valuations)

    def generators(self):
        out = []
        if self.norm is not None:
            out.append(Norm(self.norm))
        if self.sigma is not None:
            out.append(SymbolMult(self.sigma))
        if self.restriction is not None:
            out.append(Restriction(self.restriction))
        out.extend(self.valuations)
        if self.tau is not None:
            out.append(SymbolMult(self.tau))
        return tuple(out)

    def to_json(self):
        return {
            "coefficient": self.coefficient,
            "r": self.r,
            "norm": None if self.norm is None else str(Norm(self.norm)),
            "sigma": None if self.sigma is None else str(self.sigma),
            "restriction": None if self.restriction is None else str(Restriction(self.restriction)),
            "valuations": [str(v) for v in self.valuations],
            "tau": None if self.tau is None else str(self.tau),
            "intermediate_field": str(self.intermediate),
        }


def parse_normal_form(seq, coefficient, source_field):
    """Read a sequence of shape nrm? sym? rst? res* sym? into a RostNormalForm, else None."""
    k = 0
    n = len(seq)
    nrm = sigma = rst = tau = None
    if k < n and isinstance(seq[k], Norm):
        nrm = seq[k].phi
        k += 1
    if k < n and isinstance(seq[k], SymbolMult):
        sigma = seq[k].x
        k += 1
    if k < n and isinstance(seq[k], Restriction):
        rst = seq[k].phi
        k += 1
    vals = []
    while k < n and isinstance(seq[k], Residue):
        vals.append(seq[k])
        k += 1
    if k < n and isinstance(seq[k], SymbolMult):
        tau = seq[k].x
        k += 1
    if k != n:
        return None
    if nrm is not None:
        inter = nrm.target
    elif sigma is not None:
        inter = sigma.field
    elif rst is not None:
        inter = rst.target
    elif vals:
        inter = vals[0].target_field
    else:
        inter = source_field
    return RostNormalForm(coefficient, nrm, sigma, rst, tuple(vals), tau, inter)


@dataclass
class Normalization:
    word: MorphismWord
    summands: list
    trace: list = dc_field(default_factory=list)

    @property
    def steps(self):
        return len(self.trace)

    def to_json(self):
        return {"word": str(self.word), "summands": [s.to_json() for s in self.summands],
                "steps": self.steps, "trace": [s.to_json() for s in self.trace]}


def normalize(w, budget=None, tame_sign=None):
    """Rewrite w to a combination of normal forms.

    ``tame_sign`` is the convention for residues in the result; by default the
    convention of the residues in w (classic when there are none).
    """
    budget = step_budget() if budget is None else budget
    if tame_sign is None:
        signs = {g.sign for seq, _ in w.terms for g in seq if isinstance(g, Residue)}
        tame_sign = ROST if signs == {ROST} else CLASSIC
    current = _convert_residues(w, CLASSIC)
    trace = []
    steps = 0
    while True:
        out = rewrite_step(current)
        if out is None:
            break
        if steps >= budget:
            raise NonTerminating(f"step budget {budget} exhausted", partial=current)
        current, step = out
        trace.append(step)
        steps += 1
    summands = []
    for seq, c in current.terms:
        nf = parse_normal_form(seq, c, current.source.field)
        if nf is None:
            exc = NotComputable(f"no implemented rule reduces {_seq_str(seq)} to normal form")
            exc.partial = current
            raise exc
        summands.append(nf)
    final = _convert_residues(current, tame_sign)
    if tame_sign != CLASSIC:
        summands = [parse_normal_form(seq, c, final.source.field) for seq, c in final.terms]
    return Normalization(final, summands, trace)


# ---------------------------------------------------------------------------
# evaluation


def _apply(g, x, M):
    if isinstance(g, Restriction):
        return M.restrict(g.phi, x)
    if isinstance(g, Norm):
        return M.norm(g.phi, x)
    if isinstance(g, SymbolMult):
        return M.multiply(g.x, x)
    if isinstance(g, Residue):
        own = getattr(M, "tame_sign", CLASSIC)
        out = M.residue(g.v, x)
        if g.sign != own and (x.degree - 1) % 2:
            out = -out
        return out
    raise FieldError(f"unknown generator {g!r}")


def evaluate(w, x, M=None):
    """Apply the word to x in the cycle module M (Milnor K-theory by default)."""
    M = M or MilnorK()
    if x.field != w.source.field or x.degree != w.source.twist:
        raise FieldError(f"input lives in K_{x.degree}({x.field}), word starts at {w.source}")
    total = MilnorClass.zero(w.target.field, w.target.twist)
    for seq, c in w.terms:
        y = x
        for g in reversed(seq):
            y = _apply(g, y, M)
        total = total + y.scale(c)
    return total


def evaluate_normal_forms(summands, source, x, M=None):
    """Evaluate a list of RostNormalForm summands on x."""
    M = M or MilnorK()
    total = None
    for nf in summands:
        word = MorphismWord.chain(nf.generators(), source).scale(nf.coefficient)
        y = evaluate(word, x, M)
        total = y if total is None else total + y
    return total

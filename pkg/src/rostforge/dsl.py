"""Parsers and printers for fields, elements, symbols, places and morphism words.

Field grammar (whitespace-insensitive)::

    field := atom postfix*
    atom  := "Q" | "F" p ["^" e] | "F" q | "NF(" d "," r1 "," r2 ")" | "R" | "C"
    postfix := "(" var {"," var} ")"      rational function field
             | "[" poly "]"               simple extension; the new variable names the generator

Elements are arithmetic expressions in integers and the field's generator
names.  Symbols are ``±k*{a, b, ...} ± ...`` (or a bare integer in degree
0).  Places are ``(p)`` over Q, ``(f(t))`` or ``inf`` over F(t).  Words are
sums of ``[k*] g ∘ g ∘ ...`` with generators ``res[place]``,
``nrm[L/E]``, ``sym[class]`` and ``rst[E->L]``; a morphism that is not the
structural inclusion is written ``rst[E->L: t->h]`` (likewise for ``nrm``).
Every parse failure raises ``ParseError`` with the offending position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FieldError, NotComputable, ParseError
from .fields import (
    COMPLEX,
    REALS,
    FiniteExtension,
    FiniteField,
    NumberField,
    Rationals,
    RationalFunctionField,
    is_prime,
    rational_function_field,
)
from .milnor import CLASSIC, MilnorClass
from .morphisms import ExtensionHom, Identity, Inclusion, Substitution, _step_ext, inclusion
from .poly import Poly
from .valuations import FinitePlace, InfinitePlace, PointOfLine

# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, OP, END
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(->|∘|∞|[-+*/^()\[\]{},:]))")


def tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(Token("NUM", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(Token("IDENT", m.group(2), start))
        else:
            tokens.append(Token("OP", m.group(3), start))
        pos = m.end()
    tokens.append(Token("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text, tokens=None, start=0, stop=None):
        self.text = text
        self.tokens = tokens if tokens is not None else tokenize(text)
        self.i = start
        self.stop = len(self.tokens) - 1 if stop is None else stop

    # token access -------------------------------------------------------
    def peek(self, k=0):
        j = self.i + k
        if j >= self.stop:
            return Token("END", "", self.tokens[self.stop].pos if self.stop < len(self.tokens) else len(self.text))
        return self.tokens[j]

    def next(self):
        t = self.peek()
        if t.kind != "END":
            self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.text, tok.pos)

    def expect(self, text):
        t = self.peek()
        if t.text != text or t.kind == "END":
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def accept(self, text):
        if self.peek().text == text and self.peek().kind != "END":
            return self.next()
        return None

    def at_end(self):
        return self.peek().kind == "END"

    def finish(self):
        if not self.at_end():
            raise self.error(f"unexpected {self.peek().text!r}")

    def number(self):
        t = self.peek()
        if t.kind != "NUM":
            raise self.error(f"expected a number, found {t.text or 'end of input'!r}")
        self.next()
        return int(t.text)

    # field grammar --------------------------------------------------------
    def field(self):
        f = self._field_atom()
        while True:
            t = self.peek()
            if t.text == "(" and t.kind == "OP":
                f = self._function_field(f)
            elif t.text == "[" and t.kind == "OP":
                f = self._extension(f)
            else:
                return f

    def _field_atom(self):
        t = self.peek()
        if t.kind != "IDENT":
            raise self.error("expected a field (Q, F<p>, NF(d,r1,r2), R or C)")
        name = t.text
        if name == "Q":
            self.next()
            return Rationals()
        if name == "R":
            self.next()
            return REALS
        if name == "C":
            self.next()
            return COMPLEX
        if name == "NF":
            self.next()
            self.expect("(")
            d = self.number()
            self.expect(",")
            r1 = self.number()
            self.expect(",")
            r2 = self.number()
            self.expect(")")
            try:
                return NumberField(d, r1, r2)
            except FieldError as exc:
                raise ParseError(str(exc), self.text, t.pos) from None
        m = re.fullmatch(r"F(\d+)", name)
        if m:
            self.next()
            q = int(m.group(1))
            e = 1
            if self.accept("^"):
                e = self.number()
            return _finite_field(q, e, self.text, t.pos)
        raise self.error(f"unknown field {name!r}")

    def _function_field(self, base):
        self.expect("(")
        names = []
        taken = set(base.generator_names())
        while True:
            t = self.peek()
            if t.kind != "IDENT":
                raise self.error("expected a variable name")
            if t.text in taken or t.text in names:
                raise self.error(f"variable {t.text!r} is already in use")
            names.append(t.text)
            self.next()
            if self.accept(")"):
                break
            self.expect(",")
        return rational_function_field(base, *names)

    def _extension(self, base):
        open_tok = self.expect("[")
        start = self.i
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "END":
                raise self.error("unclosed '['")
            if t.text in "([{" and t.kind == "OP":
                depth += 1
            elif t.text in ")]}" and t.kind == "OP":
                if depth == 0 and t.text == "]":
                    break
                depth -= 1
            self.next()
        stop = self.i
        self.expect("]")
        known = set(base.generator_names())
        fresh = sorted({tok.text for tok in self.tokens[start:stop] if tok.kind == "IDENT"} - known)
        if len(fresh) > 1:
            raise ParseError(f"polynomial involves several new variables {fresh}", self.text, open_tok.pos)
        var = fresh[0] if fresh else "x"
        poly = _parse_poly_span(self.text, self.tokens, start, stop, base, var)
        if poly.degree < 1:
            raise ParseError("defining polynomial must have positive degree", self.text, open_tok.pos)
        try:
            return FiniteExtension(base, poly, name=var)
        except (FieldError, NotComputable) as exc:
            raise ParseError(str(exc), self.text, open_tok.pos) from None

    # element grammar ------------------------------------------------------
    def expr(self, F, names):
        value = self._term(F, names)
        while True:
            t = self.peek()
            if t.kind == "OP" and t.text in "+-":
                self.next()
                rhs = self._term(F, names)
                value = value + rhs if t.text == "+" else value - rhs
            else:
                return value

    def _term(self, F, names):
        value = self._unary(F, names)
        while True:
            t = self.peek()
            if t.kind == "OP" and t.text in "*/":
                self.next()
                rhs = self._unary(F, names)
                if t.text == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero", self.text, t.pos)
                    value = value / rhs
            else:
                return value

    def _unary(self, F, names):
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.next()
            return -self._unary(F, names)
        if self.peek().kind == "OP" and self.peek().text == "+":
            self.next()
            return self._unary(F, names)
        return self._power(F, names)

    def _power(self, F, names):
        base = self._atom(F, names)
        if self.peek().kind == "OP" and self.peek().text == "^":
            tok = self.next()
            neg = bool(self.accept("-"))
            k = self.number()
            if neg:
                if base.is_zero():
                    raise ParseError("zero to a negative power", self.text, tok.pos)
                return base.inverse() ** k
            return base ** k
        return base

    def _atom(self, F, names):
        t = self.peek()
        if t.kind == "NUM":
            self.next()
            return F.coerce(int(t.text))
        if t.kind == "IDENT":
            if t.text not in names:
                raise self.error(f"unknown name {t.text!r} in {F}")
            self.next()
            return F.coerce(names[t.text])
        if t.kind == "OP" and t.text == "(":
            self.next()
            value = self.expr(F, names)
            self.expect(")")
            return value
        raise self.error(f"expected an element of {F}, found {t.text or 'end of input'!r}")


def _finite_field(q, e, text, pos):
    if e < 1:
        raise ParseError("exponent must be >= 1", text, pos)
    if is_prime(q):
        return FiniteField(q, e)
    if e != 1:
        raise ParseError(f"{q} is not prime", text, pos)
    for p in range(2, q):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r == 1:
                return FiniteField(p, k)
            break
    raise ParseError(f"{q} is not a prime power", text, pos)


def _parse_poly_span(text, tokens, start, stop, base, var):
    ring = RationalFunctionField(base, var)
    sub = _Parser(text, tokens, start, stop)
    value = sub.expr(ring, ring.generator_names())
    sub.finish()
    if ring.den(value.rep).degree != 0:
        raise ParseError("expected a polynomial", text, tokens[start].pos)
    return ring.num(value.rep).scale(base.inv(ring.den(value.rep).lc()))


# ---------------------------------------------------------------------------
# public parsers


def parse_field(text):
    p = _Parser(text)
    f = p.field()
    p.finish()
    return f


def parse_element(text, F):
    if not getattr(F, "has_arithmetic", True):
        raise ParseError(f"{F} has no element arithmetic", text, 0)
    p = _Parser(text)
    value = p.expr(F, F.generator_names())
    p.finish()
    return value


def _symbol_class(p, F):
    """±k*{a, ...} ± ... ; a bare signed integer is a degree 0 class."""
    terms = []
    degree = None
    first = True
    while True:
        t = p.peek()
        sign = 1
        if t.kind == "OP" and t.text in "+-":
            p.next()
            sign = -1 if t.text == "-" else 1
        elif not first:
            break
        if p.at_end():
            raise p.error("expected a symbol")
        coef = 1
        explicit = False
        if p.peek().kind == "NUM":
            coef = p.number()
            explicit = True
            if p.accept("*"):
                pass
            elif p.peek().text == "{":
                raise p.error("write k*{...} for a multiple of a symbol")
            else:
                if degree not in (None, 0):
                    raise p.error("mixed degrees in one class")
                degree = 0
                terms.append(((), sign * coef))
                first = False
                continue
        brace = p.peek()
        if brace.text != "{":
            raise p.error("expected '{'" if explicit else "expected a symbol '{...}' or an integer")
        p.next()
        entries = []
        if p.peek().text != "}":
            while True:
                etok = p.peek()
                e = p.expr(F, F.generator_names())
                if e.is_zero():
                    raise ParseError("symbol entries must be nonzero", p.text, etok.pos)
                entries.append(e)
                if p.accept("}"):
                    break
                p.expect(",")
        else:
            p.next()
        if degree is None:
            degree = len(entries)
        elif degree != len(entries):
            raise ParseError("mixed degrees in one class", p.text, brace.pos)
        terms.append((tuple(entries), sign * coef))
        first = False
    return MilnorClass.from_terms(F, degree, terms)


def parse_symbol(text, F):
    p = _Parser(text)
    x = _symbol_class(p, F)
    p.finish()
    return x


def _place(p, F):
    t = p.peek()
    if t.text in ("inf", "∞"):
        p.next()
        if not isinstance(F, RationalFunctionField):
            raise ParseError(f"{F} has no place at infinity", p.text, t.pos)
        return InfinitePlace(F)
    p.expect("(")
    if isinstance(F, Rationals):
        n = p.number()
        p.expect(")")
        if not is_prime(n):
            raise ParseError(f"{n} is not prime", p.text, t.pos)
        return FinitePlace(n)
    if isinstance(F, RationalFunctionField):
        etok = p.peek()
        value = p.expr(F, F.generator_names())
        p.expect(")")
        if F.den(value.rep).degree != 0 or F.num(value.rep).degree < 1:
            raise ParseError("a place is given by a nonconstant polynomial", p.text, etok.pos)
        poly = F.num(value.rep).monic()
        try:
            return PointOfLine(F, poly)
        except (FieldError, NotComputable) as exc:
            raise ParseError(str(exc), p.text, etok.pos) from None
    raise ParseError(f"places of {F} are not implemented", p.text, t.pos)


def parse_place(text, F):
    p = _Parser(text)
    v = _place(p, F)
    p.finish()
    return v


# ---------------------------------------------------------------------------
# morphisms and words


def _split_top(tokens, start, stop, ops):
    depth = 0
    for k in range(start, stop):
        t = tokens[k]
        if t.kind == "OP" and t.text in "([{":
            depth += 1
        elif t.kind == "OP" and t.text in ")]}":
            depth -= 1
        elif depth == 0 and t.kind == "OP" and t.text in ops:
            return k
    return None


def _field_span(text, tokens, start, stop):
    p = _Parser(text, tokens, start, stop)
    f = p.field()
    p.finish()
    return f


def _morphism(text, tokens, start, stop, E, L, pos):
    """The morphism E -> L, optionally given by ``name -> image`` in tokens[start:stop]."""
    if start >= stop:
        try:
            return inclusion(E, L)
        except FieldError as exc:
            raise ParseError(str(exc), text, pos) from None
    arrow = _split_top(tokens, start, stop, ("->",))
    if arrow is None or arrow != start + 1 or tokens[start].kind != "IDENT":
        raise ParseError("expected 'name -> image'", text, tokens[start].pos)
    name = tokens[start].text
    p = _Parser(text, tokens, arrow + 1, stop)
    image = p.expr(L, L.generator_names())
    p.finish()
    try:
        if isinstance(E, RationalFunctionField) and name == E.var:
            if not isinstance(L, RationalFunctionField) or L.den(image.rep).degree:
                raise ParseError("substitutions send the variable to a polynomial", text, tokens[start].pos)
            return Substitution(E, L, L.num(image.rep))
        ext = _step_ext(E)
        if ext is not None and name == getattr(ext, "name", None):
            return ExtensionHom(E, L, inclusion(ext.base, L), image)
    except (FieldError, NotComputable) as exc:
        raise ParseError(str(exc), text, tokens[start].pos) from None
    raise ParseError(f"{name!r} is not a generator of {E}", text, tokens[start].pos)


def _generator(text, tokens, start, stop, current, sign):
    from .rewriter import Norm, Residue, Restriction, SymbolMult

    head = tokens[start]
    if head.kind != "IDENT" or head.text not in ("res", "nrm", "sym", "rst"):
        raise ParseError("expected res[...], nrm[...], sym[...] or rst[...]", text, head.pos)
    if stop - start < 3 or tokens[start + 1].text != "[" or tokens[stop - 1].text != "]":
        raise ParseError(f"expected {head.text}[...]", text, head.pos)
    a, b = start + 2, stop - 1
    kind = head.text
    if kind in ("sym", "res"):
        if current is None:
            raise ParseError(f"cannot infer the field {kind}[...] acts on; pass a source field", text, head.pos)
        p = _Parser(text, tokens, a, b)
        if kind == "sym":
            x = _symbol_class(p, current)
            p.finish()
            return SymbolMult(x)
        v = _place(p, current)
        p.finish()
        return Residue(v, sign)
    colon = _split_top(tokens, a, b, (":",))
    body_stop = b if colon is None else colon
    sep = _split_top(tokens, a, body_stop, ("->",) if kind == "rst" else ("/",))
    if sep is None:
        raise ParseError("expected E->L" if kind == "rst" else "expected L/E", text, tokens[a].pos)
    first = _field_span(text, tokens, a, sep)
    second = _field_span(text, tokens, sep + 1, body_stop)
    E, L = (first, second) if kind == "rst" else (second, first)
    phi = _morphism(text, tokens, (colon + 1) if colon is not None else b, b, E, L, tokens[a].pos)
    if kind == "rst":
        g = Restriction(phi)
    else:
        try:
            g = Norm(phi)
        except FieldError as exc:
            raise ParseError(str(exc), text, head.pos) from None
    if current is not None and g.source_field != current:
        raise ParseError(f"{kind}[...] starts at {g.source_field}, but the word is at {current}", text, head.pos)
    return g


def parse_word(text, field=None, twist=0, sign=CLASSIC):
    """Parse a morphism word; the source object is (field, twist), inferred when possible."""
    from .rewriter import MorphismWord, ObjectRef

    tokens = tokenize(text)
    end = len(tokens) - 1
    if end == 0:
        raise ParseError("empty word", text, 0)
    # split into summands at top-level + and -
    pieces = []
    depth = 0
    start = 0
    sgn = 1
    k = 0
    if tokens[0].kind == "OP" and tokens[0].text in "+-":
        sgn = -1 if tokens[0].text == "-" else 1
        start = k = 1
    while k <= end:
        t = tokens[k]
        if t.kind == "OP" and t.text in "([{":
            depth += 1
        elif t.kind == "OP" and t.text in ")]}":
            depth -= 1
        if k == end or (depth == 0 and t.kind == "OP" and t.text in "+-" and k > start):
            if k == start:
                raise ParseError("empty summand", text, t.pos)
            pieces.append((sgn, start, k))
            if k < end:
                sgn = -1 if t.text == "-" else 1
                start = k + 1
        k += 1
    words = []
    source = None
    for sgn, a, b in pieces:
        coef = sgn
        if tokens[a].kind == "NUM":
            coef *= int(tokens[a].text)
            if a + 1 >= b or tokens[a + 1].text != "*":
                raise ParseError("expected '*' after a coefficient", text, tokens[a].pos)
            a += 2
        # generator spans separated by ∘ (or a bare 'o')
        spans = []
        depth = 0
        s = a
        for j in range(a, b + 1):
            t = tokens[j] if j < b else None
            if t is not None and t.kind == "OP" and t.text in "([{":
                depth += 1
            elif t is not None and t.kind == "OP" and t.text in ")]}":
                depth -= 1
            is_sep = t is not None and depth == 0 and (t.text == "∘" or (t.kind == "IDENT" and t.text == "o"))
            if j == b or is_sep:
                if s == j:
                    raise ParseError("missing generator", text, tokens[min(j, end)].pos)
                spans.append((s, j))
                s = j + 1
        current = field
        gens = []
        for s, e in reversed(spans):
            if current is None and tokens[s].text in ("rst", "nrm"):
                g = _generator(text, tokens, s, e, None, sign)
            else:
                g = _generator(text, tokens, s, e, current, sign)
            if not gens and field is None:
                field = g.source_field
            if source is None:
                source = ObjectRef(field, twist)
            current = g.target_field
            gens.append(g)
        gens.reverse()
        try:
            words.append(MorphismWord.chain(gens, source).scale(coef))
        except FieldError as exc:
            raise ParseError(str(exc), text, tokens[a].pos) from None
    total = words[0]
    for w in words[1:]:
        try:
            total = total + w
        except FieldError as exc:
            raise ParseError(str(exc), text, 0) from None
    return total


# ---------------------------------------------------------------------------
# printing


def format_morphism(phi, kind):
    """Body of rst[...] / nrm[...] for phi."""
    E, L = phi.source, phi.target
    head = f"{E}->{L}" if kind == "rst" else f"{L}/{E}"
    if isinstance(phi, (Identity, Inclusion)):
        return head
    if isinstance(phi, Substitution):
        return f"{head}: {E.var}->{phi.h.format(L.var)}"
    if isinstance(phi, ExtensionHom) and isinstance(phi.base_map, (Identity, Inclusion)):
        return f"{head}: {phi._ext.name}->{phi.image}"
    return f"{head}: {phi}"


def format_generator(g):
    kind = g.kind
    if kind in ("rst", "nrm"):
        return f"{kind}[{format_morphism(g.phi, kind)}]"
    if kind == "sym":
        return f"sym[{g.x}]"
    if kind == "res":
        return f"res[{g.v}]"
    return repr(g)

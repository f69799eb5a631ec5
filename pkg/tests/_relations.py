"""Concrete instances of the defining relations, as pairs of words to evaluate."""

from __future__ import annotations

import random

from rostforge.dsl import parse_element, parse_field, parse_place
from rostforge.milnor import MilnorClass
from rostforge.morphisms import ExtensionHom, Substitution, inclusion
from rostforge.poly import Poly
from rostforge.rewriter import MorphismWord, Norm, ObjectRef, Residue, Restriction, SymbolMult

Q = parse_field("Q")
GAUSS = parse_field("Q[i^2+1]")
F5 = parse_field("F5")
F5T = parse_field("F5(t)")
QT = parse_field("Q(t)")


def word(gens, field, twist):
    return MorphismWord.chain(list(gens), ObjectRef(field, twist))


def unit(F, text):
    return MilnorClass.unit(parse_element(text, F))


def _inputs(rng, F, degree, units, count=3):
    out = []
    for _ in range(count):
        if degree == 0:
            out.append(MilnorClass.integer(F, rng.randint(-5, 5)))
            continue
        raw = [(tuple(parse_element(rng.choice(units), F) for _ in range(degree)), rng.choice([1, -1, 2]))
               for _ in range(2)]
        out.append(MilnorClass.from_terms(F, degree, raw))
    return out


F5T_UNITS = ["t", "t+1", "t+2", "t^2+2", "3", "t+4", "t^2+t+1"]
Q_UNITS = ["2", "3", "-1", "5", "7/2"]
GAUSS_UNITS = ["i", "1+i", "2+i", "3"]


def instances(seed=0):
    """Yield (relation, lhs, rhs, inputs)."""
    rng = random.Random(seed)
    # R0: sym[x] o sym[y] = sym[x.y]
    for k in range(10):
        F, units = (F5T, F5T_UNITS) if k % 2 else (Q, Q_UNITS)
        x, y = unit(F, rng.choice(units)), unit(F, rng.choice(units))
        n = k % 2
        yield ("R0", word([SymbolMult(x), SymbolMult(y)], F, n), word([SymbolMult(x * y)], F, n),
               _inputs(rng, F, n, units))
    # R2c: nrm o sym[y] o rst = sym[norm y], on degree-0 carriers
    for k in range(10):
        if k % 2:
            phi = inclusion(Q, GAUSS)
            y = unit(GAUSS, rng.choice(GAUSS_UNITS))
            F, units = Q, Q_UNITS
        else:
            phi = Substitution(F5T, F5T, Poly(F5, [rng.randint(0, 4), 0, 1]))
            y = unit(F5T, rng.choice(F5T_UNITS))
            F, units = F5T, F5T_UNITS
        from rostforge.milnor import norm

        lhs = word([Norm(phi), SymbolMult(y), Restriction(phi)], F, 0)
        rhs = word([SymbolMult(norm(y, phi))], F, 0)
        yield ("R2c", lhs, rhs, _inputs(rng, F, 0, units))
    # R3a, e = 1: res[v] o rst[t -> t + a] = rst[bar] o res[w], w = (t - a)
    for k in range(10):
        a = rng.randint(1, 4)
        phi = Substitution(F5T, F5T, Poly(F5, [a, 1]))
        v = parse_place("(t)", F5T)
        w = parse_place(f"(t-{a})", F5T)
        lhs = word([Residue(v), Restriction(phi)], F5T, 1 + k % 2)
        rhs = word([Residue(w)], F5T, 1 + k % 2)
        yield ("R3a e=1", lhs, rhs, _inputs(rng, F5T, 1 + k % 2, F5T_UNITS))
    # R3a, e = 2: the reparametrization t -> t^2 ramifies at (t)
    for k in range(10):
        phi = Substitution(F5T, F5T, Poly(F5, [0, 0, 1]))
        v = parse_place("(t)", F5T)
        lhs = word([Residue(v), Restriction(phi)], F5T, 1 + k % 2)
        rhs = word([Residue(v)], F5T, 1 + k % 2).scale(2)
        yield ("R3a e=2", lhs, rhs, _inputs(rng, F5T, 1 + k % 2, F5T_UNITS))
    # R3c: res[v] o rst = 0 when v is trivial on the source
    places = ["(t)", "(t+1)", "(t^2+2)", "inf", "(t+3)"]
    for k in range(10):
        src, tgt, units = (F5, F5T, ["2", "3", "4"]) if k % 2 else (Q, QT, Q_UNITS)
        p = rng.choice(places) if tgt == F5T else rng.choice(["(t)", "(t^2+1)", "inf", "(t-3)"])
        v = parse_place(p, tgt)
        n = 1 + k % 2
        lhs = word([Residue(v), Restriction(inclusion(src, tgt))], src, n)
        rhs = MorphismWord.zero(ObjectRef(src, n), ObjectRef(v.residue_field, n - 1))
        yield ("R3c", lhs, rhs, _inputs(rng, src, n, units))
    # R3d: res[v] o sym[{-pi}] o rst = rst[bar], v trivial on the source
    for k in range(10):
        src, tgt, units = (F5, F5T, ["2", "3", "4"]) if k % 2 else (Q, QT, Q_UNITS)
        p = rng.choice(places) if tgt == F5T else rng.choice(["(t)", "(t^2+1)", "inf", "(t-3)"])
        v = parse_place(p, tgt)
        pi = v.uniformizer()
        n = k % 2
        lhs = word([Residue(v), SymbolMult(MilnorClass.unit(-pi)), Restriction(inclusion(src, tgt))], src, n)
        rhs = word([Restriction(inclusion(src, v.residue_field))], src, n)
        yield ("R3d", lhs, rhs, _inputs(rng, src, n, units))
    # R3e: res[v] o sym[{u}] = -sym[{u bar}] o res[v] for a v-unit u
    for k in range(10):
        F, units = (F5T, F5T_UNITS) if k % 2 else (QT, ["t", "t-1", "t+1", "2", "t^2+1", "3"])
        p = rng.choice(["(t)", "(t-3)", "inf"] if F == QT else ["(t)", "(t+2)", "(t^2+2)", "inf"])
        v = parse_place(p, F)
        while True:
            u = parse_element(rng.choice(units), F)
            if v.value(u) == 0:
                break
        n = 1
        lhs = word([Residue(v), SymbolMult(MilnorClass.unit(u))], F, n)
        rhs = word([SymbolMult(MilnorClass.unit(v.reduce(u))), Residue(v)], F, n).scale(-1)
        yield ("R3e", lhs, rhs, _inputs(rng, F, n, units))

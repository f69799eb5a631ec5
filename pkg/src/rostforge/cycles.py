"""Truncated cycle complexes on curves and points.

Level 0 of the complex on a line is the coefficient module at the generic
point; level 1 is the sum over closed points.  The differential is the
residue at each point.  Group structure is computed from integer matrices,
so every result records the truncation bound it was computed at.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import FieldError, NotComputable
from .factoring import unit_atoms
from .fields import FiniteField, Rationals, RationalFunctionField
from .milnor import MilnorClass, MilnorK
from .snf import cokernel, kernel_basis, subquotient
from .valuations import FinitePlace, InfinitePlace, PointOfLine, closed_points


@dataclass(frozen=True)
class Point:
    base: object

    def __str__(self):
        return f"Spec {self.base}"


@dataclass(frozen=True)
class AffineLine:
    base: object
    var: str = "t"

    def __str__(self):
        return f"A1/{self.base}"

    @property
    def function_field(self):
        return RationalFunctionField(self.base, self.var)

    def points(self, bound):
        return closed_points("A1", self.base, bound, var=self.var)

    def is_point(self, v):
        return isinstance(v, PointOfLine)


@dataclass(frozen=True)
class ProjectiveLine(AffineLine):
    def __str__(self):
        return f"P1/{self.base}"

    def points(self, bound):
        return closed_points("P1", self.base, bound, var=self.var)

    def is_point(self, v):
        return isinstance(v, (PointOfLine, InfinitePlace))


@dataclass(frozen=True)
class SpecOK:
    """Spec Z, with closed points truncated to primes up to ``prime_bound``."""

    prime_bound: int = 50
    signature: tuple = (1, 1, 0)

    def __str__(self):
        return "Spec Z"

    @property
    def function_field(self):
        return Rationals()

    def points(self, bound=None):
        import sympy

        return [FinitePlace(int(p)) for p in sympy.primerange(2, (bound or self.prime_bound) + 1)]

    def is_point(self, v):
        return isinstance(v, FinitePlace)


@dataclass(frozen=True)
class CycleComplexLevel:
    scheme: object
    codim: int
    twist: int
    values: dict = dc_field(default_factory=dict)  # point -> coefficient element

    def __post_init__(self):
        for v, x in self.values.items():
            if self.codim == 0 and v is not None:
                raise FieldError("codimension 0 has only the generic point (key None)")
            if x.degree != self.twist - self.codim:
                raise FieldError(f"value at {v} has degree {x.degree}, expected {self.twist - self.codim}")

    def support(self):
        return [v for v, x in self.values.items() if not x.is_zero()]

    def __add__(self, other):
        if (self.scheme, self.codim, self.twist) != (other.scheme, other.codim, other.twist):
            raise FieldError("levels differ")
        out = dict(self.values)
        for v, x in other.values.items():
            out[v] = out[v] + x if v in out else x
        return CycleComplexLevel(self.scheme, self.codim, self.twist,
                                 {v: x for v, x in out.items() if not x.is_zero()})

    def to_json(self):
        return {"scheme": str(self.scheme), "codim": self.codim, "twist": self.twist,
                "values": {("generic" if v is None else str(v)): str(x) for v, x in self.values.items()}}


def generic(scheme, x):
    """The level-0 chain with value x at the generic point."""
    return CycleComplexLevel(scheme, 0, x.degree, {None: x})


def _ramified_points(scheme, x):
    F = x.field
    pts = set()
    for entries, _ in x.terms:
        for e in entries:
            if isinstance(scheme, SpecOK):
                for atom in unit_atoms(e):
                    if not atom.order:
                        pts.add(FinitePlace(int(atom.element.rep)))
                continue
            for poly in (F.num(e.rep), F.den(e.rep)):
                if poly.degree >= 1:
                    from .factoring import factor_poly

                    for g, _ in factor_poly(poly)[1]:
                        pts.add(PointOfLine(F, g))
            if isinstance(scheme, ProjectiveLine):
                pts.add(InfinitePlace(F))
    return sorted(pts, key=str)


def differential(c, M=None, candidates=None):
    """The residue differential from level p to level p + 1.

    ``candidates`` optionally lists the points to examine; by default they
    are read off the zeros and poles of the entries.
    """
    M = M or MilnorK()
    if c.codim >= 1 or isinstance(c.scheme, Point):
        return CycleComplexLevel(c.scheme, c.codim + 1, c.twist, {})
    x = c.values.get(None)
    if x is None:
        return CycleComplexLevel(c.scheme, 1, c.twist, {})
    out = {}
    for v in (_ramified_points(c.scheme, x) if candidates is None else candidates):
        r = M.residue(v, x)
        if not r.is_zero():
            out[v] = r
    return CycleComplexLevel(c.scheme, 1, c.twist, out)


def degree_map(level):
    """Sum of deg(x) * n_x on a level-1 chain of twist 1 on a line."""
    if level.codim != 1 or level.twist != 1:
        raise FieldError("degree map acts on codimension 1 chains of twist 1")
    return sum(v.degree * int(x) for v, x in level.values.items())


@dataclass(frozen=True)
class ChowReport:
    model: str
    twist: int
    codim: int
    bound: int
    invariant_factors: tuple
    free_rank: int
    stabilized: bool
    truncated: bool = True

    def to_json(self):
        return {"model": self.model, "twist": self.twist, "codim": self.codim, "bound": self.bound,
                "invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank,
                "stabilized": self.stabilized, "truncated": self.truncated}


def _line_matrices(X, bound, M):
    """Divisor matrix on the truncated generators, plus the torsion relations."""
    F = X.base
    K = X.function_field
    g = F.primitive_element
    gens = [MilnorClass.unit(K.coerce(g))]
    monic = [v for v in X.points(bound) if isinstance(v, PointOfLine)]
    gens += [MilnorClass.unit(v.uniformizer()) for v in monic]
    points = X.points(bound)
    index = {v: k for k, v in enumerate(points)}
    matrix = [[0] * len(gens) for _ in points]
    extra = [v for v in points if not isinstance(v, PointOfLine)]
    for j, x in enumerate(gens):
        # a generator can only be ramified at its own point and at infinity
        near = ([monic[j - 1]] if j else []) + extra
        d = differential(generic(X, x), M, candidates=near)
        for v, r in d.values.items():
            matrix[index[v]][j] = int(r)
    relations = [[F.order - 1] + [0] * (len(gens) - 1)]
    return matrix, relations, points


_CHOW_CACHE = {}


def _chow_once(X, twist, codim, bound, M):
    key = (X, twist, codim, bound, M.name, getattr(M, "tame_sign", None))
    if key not in _CHOW_CACHE:
        _CHOW_CACHE[key] = _chow_compute(X, twist, codim, bound, M)
    return _CHOW_CACHE[key]


def _chow_compute(X, twist, codim, bound, M):
    if twist == 0:
        # K_0 at the generic point, nothing in codimension 1
        return ((), 1) if codim == 0 else ((), 0)
    matrix, relations, points = _line_matrices(X, bound, M)
    if codim == 0:
        ker = kernel_basis(matrix)
        return subquotient(ker, relations)
    return cokernel(matrix, len(points))


def chow_group(X, twist=1, bound=4, codim=0, M=None):
    """A^codim(X; K^M_twist) on the truncated complex, with a stabilization check."""
    if not isinstance(X, AffineLine) or not isinstance(X.base, FiniteField):
        raise NotComputable("Chow groups are computed on A1 and P1 over a finite field")
    if twist not in (0, 1):
        raise NotComputable("the coefficient carrier is implemented in twists 0 and 1")
    if codim not in (0, 1):
        raise FieldError("codimension must be 0 or 1 on a curve")
    if bound < 1:
        raise FieldError("bound must be >= 1")
    M = M or MilnorK()
    here = _chow_once(X, twist, codim, bound, M)
    nxt = _chow_once(X, twist, codim, bound + 1, M)
    return ChowReport(str(X), twist, codim, bound, tuple(here[0]), here[1], here == nxt)

"""Rank classification of rational motivic cohomology of fields.

``rank_HB(K, n, i)`` walks an ordered list of rules; the first rule whose
hypothesis matches decides the answer and every rule consulted on the way
is recorded in the derivation trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .fields import (
    DeclaredField,
    NumberField,
    RationalFunctionField,
    is_number_field,
    is_uncountable,
    kronecker_dimension,
    signature,
)


# ---------------------------------------------------------------------------
# rank values


@dataclass(frozen=True)
class RankValue:
    def to_json(self):
        raise NotImplementedError

    @property
    def is_zero(self):
        return False

    @property
    def is_unknown(self):
        return False


@dataclass(frozen=True)
class Zero(RankValue):
    def to_json(self):
        return {"zero": True}

    @property
    def is_zero(self):
        return True

    def __str__(self):
        return "0"


@dataclass(frozen=True)
class FiniteRank(RankValue):
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")

    def to_json(self):
        return {"finite": self.rank}

    @property
    def is_zero(self):
        return self.rank == 0

    def __str__(self):
        return f"Q^{self.rank}" if self.rank != 1 else "Q"


@dataclass(frozen=True)
class CountablyInfinite(RankValue):
    def to_json(self):
        return {"countably_infinite": True}

    def __str__(self):
        return "countably infinite"


@dataclass(frozen=True)
class CardinalOfField(RankValue):
    def to_json(self):
        return {"cardinal_of_field": True}

    def __str__(self):
        return "card(K)"


@dataclass(frozen=True)
class Unknown(RankValue):
    lower: RankValue | None = None

    def __post_init__(self):
        if isinstance(self.lower, Unknown):
            raise ValueError("an unknown rank carries at most one concrete lower bound")

    def to_json(self):
        return {"unknown": None if self.lower is None else self.lower.to_json()}

    @property
    def is_unknown(self):
        return True

    def __str__(self):
        return "?" if self.lower is None else f"? (>= {self.lower})"


def rank_from_json(obj):
    (tag, value), = obj.items()
    if tag == "zero":
        return Zero()
    if tag == "finite":
        return FiniteRank(value)
    if tag == "countably_infinite":
        return CountablyInfinite()
    if tag == "cardinal_of_field":
        return CardinalOfField()
    if tag == "unknown":
        return Unknown(None if value is None else rank_from_json(value))
    raise ValueError(f"unknown rank tag {tag!r}")


# ---------------------------------------------------------------------------
# derivation traces


@dataclass(frozen=True)
class TraceStep:
    rule: str
    cites: str
    hypothesis: str

    def __str__(self):
        return f"{self.rule}: {self.hypothesis} [{self.cites}]"


@dataclass(frozen=True)
class Derivation:
    value: RankValue
    trace: tuple = dc_field(default_factory=tuple)

    def to_json(self):
        return {"rank": self.value.to_json(), "trace": [str(s) for s in self.trace]}

    def __iter__(self):
        # allows ``value, trace = rank_HB(...)``
        yield self.value
        yield self.trace


CITES = {
    "weight-zero": "motivic cohomology in weight 0 is Q in degree 0",
    "vanishing-region": "vanishing for i < 0, n > 2i, or n - i > dim = 0",
    "weight-one": "weight 1 motivic cohomology is the unit group in degree 1 (plus Pic, zero for a field)",
    "units-countable": "K^x (x) Q has countable infinite rank for a finitely generated infinite field",
    "units-uncountable": "K^x (x) Q has rank card(K) for an uncountable field",
    "quillen-finite-field": "Quillen: H^{n,i}(F_q) = 0 unless (n,i) = (0,0)",
    "borel-number-field": "Borel's theorem for number fields",
    "borel-ring-of-integers": "Borel's theorem for rings of integers",
    "dirichlet-units": "Dirichlet unit theorem (classical), rank r1 + r2 - 1",
    "class-group-finite": "finiteness of the class group (classical), Pic(O_K) (x) Q = 0",
    "localization-ring-of-integers": "localization: H^{n,i}(O_K) = H^{n,i}(K) for i >= 2",
    "rational-curve-number-field": "motivic cohomology of K(t) over a number field (sum over closed points of A^1)",
    "rational-curve-finite-field": "splitting of K(t) over closed points of A^1, combined with Quillen's vanishing",
    "cardinality-infinite-trdeg": "infinite transcendence degree: rank equal to card(K) for i >= n >= 2",
    "infinite-rank-trdeg": "transcendence degree >= d: infinite rank for n in [2, d+1], i >= n",
    "beilinson-parshin": "Beilinson-Parshin conjecture (assumed): H^{n,i}(K) = 0 if n != i in characteristic p",
    "vanishing-conjecture": "vanishing conjecture (assumed): zero unless (n,i) = (0,0) or n in [1, delta(K)]",
    "fallback": "no rule applies",
}


def _step(rule, hypothesis):
    return TraceStep(rule, CITES[rule], hypothesis)


# ---------------------------------------------------------------------------
# field classification helpers


def _is_finite(K):
    return K.is_finite


def _rational_curve_base(K):
    """The constant field of K = k(t) in one variable, else None."""
    if isinstance(K, RationalFunctionField) and not isinstance(K.base, RationalFunctionField):
        return K.base
    return None


def _trdeg(K):
    return K.trdeg


# ---------------------------------------------------------------------------
# rules: each returns a Derivation or None


def rule_weight_zero(K, n, i, ctx):
    if (n, i) == (0, 0):
        return Derivation(FiniteRank(1), (_step("weight-zero", "(n,i) = (0,0)"),))
    return None


def rule_vanishing_region(K, n, i, ctx):
    if i < 0:
        return Derivation(Zero(), (_step("vanishing-region", "i < 0"),))
    if n > 2 * i:
        return Derivation(Zero(), (_step("vanishing-region", "n > 2i"),))
    if n > i:
        return Derivation(Zero(), (_step("vanishing-region", "n > i on a field"),))
    if i == 0 and n != 0:
        return Derivation(Zero(), (_step("weight-zero", "i = 0, n != 0"),))
    if i == 1 and n != 1:
        return Derivation(Zero(), (_step("weight-one", "i = 1, n != 1"),))
    return None


def rule_units(K, n, i, ctx):
    if (n, i) != (1, 1):
        return None
    if _is_finite(K):
        return Derivation(Zero(), (_step("quillen-finite-field", "finite field, (n,i) = (1,1)"),))
    if is_uncountable(K):
        return Derivation(CardinalOfField(), (_step("units-uncountable", "declared uncountable field, (1,1)"),))
    if isinstance(K, DeclaredField):
        if K.trdeg is None:
            return Derivation(CountablyInfinite(),
                              (_step("units-countable", "countable field of infinite transcendence degree"),))
        return None
    rule = "borel-number-field" if is_number_field(K) else "units-countable"
    steps = [_step("weight-one", "(n,i) = (1,1): K^x (x) Q")]
    if rule == "borel-number-field":
        steps.append(_step(rule, "n = i = 1: K^* (x) Q"))
    steps.append(_step("units-countable", "infinitely many primes or irreducibles"))
    return Derivation(CountablyInfinite(), tuple(steps))


def rule_finite_field(K, n, i, ctx):
    if _is_finite(K):
        return Derivation(Zero(), (_step("quillen-finite-field", f"finite field, (n,i) = ({n},{i})"),))
    return None


def borel_cell(r1, r2, n, i):
    """The number-field table off the cells handled by earlier rules."""
    if n == 1 and i > 1:
        if i % 2 == 0:
            return FiniteRank(r2), "n=1, i>1, i even: Q^{r2}"
        return FiniteRank(r1 + r2), "n=1, i>1, i odd: Q^{r1+r2}"
    return Zero(), "otherwise: 0"


def rule_number_field(K, n, i, ctx):
    if not is_number_field(K):
        return None
    _, r1, r2 = signature(K)
    value, why = borel_cell(r1, r2, n, i)
    return Derivation(value, (_step("borel-number-field", f"{why} with (r1,r2) = ({r1},{r2})"),))


def rule_rational_curve_number_field(K, n, i, ctx):
    base = _rational_curve_base(K)
    if base is None or not is_number_field(base):
        return None
    _, r1, r2 = signature(base)
    if n == 1 and i > 1:
        value, why = borel_cell(r1, r2, 1, i)
        return Derivation(value, (
            _step("rational-curve-number-field", "n=1, i>1: H^{1,i}(k) of the constants"),
            _step("borel-number-field", f"{why} with (r1,r2) = ({r1},{r2})"),
        ))
    if n == 2 and i >= 2:
        return Derivation(CountablyInfinite(), (
            _step("rational-curve-number-field", "n=2, i>=2: sum over closed points x of H^{1,i-1}(kappa_x)"),
            _step("borel-number-field", "infinitely many points with a complex place give nonzero summands"),
        ))
    return Derivation(Zero(), (_step("rational-curve-number-field", "otherwise: 0"),))


def rule_rational_curve_finite_field(K, n, i, ctx):
    base = _rational_curve_base(K)
    if base is None or not base.is_finite:
        return None
    return Derivation(Zero(), (
        _step("rational-curve-finite-field",
              "H^{n,i}(k(t)) = H^{n,i}(k) + sum over x of H^{n-1,i-1}(kappa_x), all finite fields"),
        _step("quillen-finite-field", "both summands vanish off (0,0) and (1,1)"),
    ))


def rule_infinite_trdeg(K, n, i, ctx):
    if K.characteristic != 0 or K.trdeg is not None:
        return None
    if i >= n >= 2:
        if is_uncountable(K):
            return Derivation(CardinalOfField(), (
                _step("cardinality-infinite-trdeg", f"i >= n >= 2 with (n,i) = ({n},{i})"),))
        return Derivation(CountablyInfinite(), (
            _step("cardinality-infinite-trdeg", f"i >= n >= 2 with (n,i) = ({n},{i}); K countable"),))
    return None


def rule_finite_trdeg(K, n, i, ctx):
    d = K.trdeg
    if K.characteristic != 0 or d is None or d < 1:
        return None
    if 2 <= n <= d + 1 and i >= n:
        return Derivation(Unknown(CountablyInfinite()), (
            _step("infinite-rank-trdeg", f"trdeg = {d} >= d, n in [2, {d + 1}], i >= n"),))
    return None


def rule_conjectures(K, n, i, ctx):
    if not ctx.get("assume_conjectures"):
        return None
    if K.characteristic > 0 and n != i:
        return Derivation(Zero(), (_step("beilinson-parshin", f"characteristic {K.characteristic}, n != i"),))
    delta = kronecker_dimension(K)
    if (n, i) != (0, 0) and not (1 <= n <= delta):
        return Derivation(Zero(), (_step("vanishing-conjecture", f"n = {n} outside [1, {delta}]"),))
    return None


DEFAULT_RULES = (
    rule_weight_zero,
    rule_vanishing_region,
    rule_units,
    rule_finite_field,
    rule_number_field,
    rule_rational_curve_number_field,
    rule_rational_curve_finite_field,
    rule_infinite_trdeg,
    rule_finite_trdeg,
    rule_conjectures,
)

# rules whose hypotheses are pairwise disjoint (distinct field classes)
DISJOINT_RULES = (
    rule_finite_field,
    rule_number_field,
    rule_rational_curve_number_field,
    rule_rational_curve_finite_field,
)


def rank_HB(K, n, i, assume_conjectures=False, rules=None):
    """Rank of H^{n,i}_B(K), with a derivation trace."""
    ctx = {"assume_conjectures": assume_conjectures}
    for rule in rules or DEFAULT_RULES:
        out = rule(K, n, i, ctx)
        if out is not None:
            return out
    return Derivation(Unknown(), (_step("fallback", f"(n,i) = ({n},{i}) over {K}"),))


def rank_HB_OK(K, n, i):
    """Rank of H^{n,i}_B(O_K) for a number field K."""
    if not is_number_field(K):
        raise ValueError(f"{K} is not a number field")
    _, r1, r2 = signature(K)
    if (n, i) == (0, 0):
        return Derivation(FiniteRank(1), (_step("borel-ring-of-integers", "(n,i) = (0,0): Q"),))
    if (n, i) == (1, 1):
        return Derivation(FiniteRank(r1 + r2 - 1), (
            _step("borel-ring-of-integers", "n = i = 1: O_K^* (x) Q"),
            _step("dirichlet-units", f"r1 + r2 - 1 = {r1 + r2 - 1}"),
        ))
    if (n, i) == (2, 1):
        return Derivation(FiniteRank(0), (
            _step("borel-ring-of-integers", "(n,i) = (2,1): Pic(O_K) (x) Q"),
            _step("class-group-finite", "class group is finite"),
        ))
    if (n, i) == (3, 2):
        return Derivation(FiniteRank(0), (
            _step("localization-ring-of-integers", "H^{3,2}(O_K) = H^{3,2}(K) = 0"),))
    value, why = borel_cell(r1, r2, n, i)
    return Derivation(value, (_step("borel-ring-of-integers", f"{why} with (r1,r2) = ({r1},{r2})"),))


# ---------------------------------------------------------------------------
# generators of the rational K-theory of a number ring


@dataclass(frozen=True)
class GradedGeneratorSet:
    generators: tuple  # ((degree, weight, multiplicity), ...) sorted by degree

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def as_set(self):
        return set(self.generators)

    def multiplicity(self, degree):
        return sum(m for d, _, m in self.generators if d == degree)

    def to_json(self):
        return [{"degree": d, "weight": w, "multiplicity": m} for d, w, m in self.generators]


def borel_generators(r1, r2, max_degree):
    """r2 generators in degree 2i-1 (weight i) for i >= 2, r1 more for odd i >= 3."""
    if r1 < 0 or r2 < 0:
        raise ValueError("r1, r2 must be nonnegative")
    gens = []
    weight = 2
    while 2 * weight - 1 <= max_degree:
        mult = r2 + (r1 if weight % 2 == 1 else 0)
        if mult:
            gens.append((2 * weight - 1, weight, mult))
        weight += 1
    return GradedGeneratorSet(tuple(gens))


def k_rank(r1, r2, n):
    """Rank of K_n(O_K) (x) Q for n >= 2: the generator count in degree n."""
    if n < 2:
        raise ValueError("k_rank is defined for n >= 2")
    return borel_generators(r1, r2, n).multiplicity(n)


def exterior_algebra_dimensions(r1, r2, max_degree):
    """Dimensions in degrees 0..max_degree of the free exterior algebra on the generators."""
    dims = [1] + [0] * max_degree
    for degree, _, mult in borel_generators(r1, r2, max_degree):
        for _ in range(mult):
            for d in range(max_degree, degree - 1, -1):
                dims[d] += dims[d - degree]
    return dims


# ---------------------------------------------------------------------------
# Chern to Pontryagin pullback


CONVENTIONS = ("classical", "printed")


@dataclass(frozen=True)
class PullbackTerm:
    chern_index: int
    coefficient: int
    pontryagin_index: int | None
    convention: str
    remainder: bool
    flag: str | None = None

    def __str__(self):
        if self.coefficient == 0:
            return "0"
        lead = f"{self.coefficient}*p_{self.pontryagin_index}"
        return lead + (" + (decomposable remainder)" if self.remainder else "")

    def to_json(self):
        return {"i": self.chern_index, "coefficient": self.coefficient,
                "pontryagin_index": self.pontryagin_index, "convention": self.convention,
                "remainder": self.remainder, "flag": self.flag, "text": str(self)}


def chern_pontryagin_pullback(i, convention="classical"):
    """Leading term of the pullback of c_i along BSO -> BSU.

    Zero for odd i; for i = 2j the leading term is (-1)^j (2j-1)! p_j.  The
    ``printed`` convention uses a polynomial ring whose generators start at
    p_2, so p_1 is flagged as absent there.
    """
    if i < 2:
        raise ValueError("i >= 2 required")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if i % 2:
        return PullbackTerm(i, 0, None, convention, False)
    j = i // 2
    coeff = (-1) ** j * math.factorial(2 * j - 1)
    flag = None
    if convention == "printed" and j < 2:
        flag = "p_1 is not among the generators p_2, p_3, ... of the printed ring"
    elif convention == "classical" and j == 1:
        flag = "index differs from the printed ring, which starts at p_2"
    return PullbackTerm(i, coeff, j, convention, True, flag)


# ---------------------------------------------------------------------------
# the vanishing conjecture


@dataclass(frozen=True)
class ConjectureWindow:
    field: object
    delta: float

    def allows(self, n, i):
        """True when H^{n,i} may be nonzero according to the conjecture."""
        return (n, i) == (0, 0) or 1 <= n <= self.delta

    def band(self):
        if self.delta < 1:
            return ()
        if math.isinf(self.delta):
            return ("1..inf",)
        return tuple(range(1, int(self.delta) + 1))

    def consistency(self, n_range, i_range):
        """Cells where rank_HB is known nonzero yet outside the window."""
        violations, checked = [], 0
        for n in n_range:
            for i in i_range:
                value = rank_HB(self.field, n, i).value
                if value.is_unknown:
                    continue
                checked += 1
                if not value.is_zero and not self.allows(n, i):
                    violations.append((n, i, str(value)))
        return {"checked": checked, "violations": violations, "consistent": not violations}


def conjecture_window(K):
    return ConjectureWindow(K, kronecker_dimension(K))

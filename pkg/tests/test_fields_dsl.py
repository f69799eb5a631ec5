import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rostforge.dsl import parse_element, parse_field, parse_place, parse_symbol, parse_word, tokenize
from rostforge.errors import FieldError, ParseError
from rostforge.fields import (
    COMPLEX,
    REALS,
    FiniteExtension,
    FiniteField,
    NumberField,
    Rationals,
    is_irreducible,
    kronecker_dimension,
    signature,
)
from rostforge.poly import Poly

FIELD_TEXTS = ["Q", "F5", "F7^2", "F4", "Q(t)", "F5(t)", "F3(t,s)", "Q[x^2+1]", "Q[x^3-2]",
               "NF(2,2,0)", "NF(3,1,1)", "R", "C", "Q[x^2-2][y^2-3]", "F5[y^2+2]"]


@pytest.mark.parametrize("text", FIELD_TEXTS)
def test_field_round_trip(text):
    F = parse_field(text)
    assert parse_field(str(F)) == F


def test_prime_power_shorthand():
    assert parse_field("F4") == FiniteField(2, 2)
    assert parse_field("F9").order == 9


@pytest.mark.parametrize("text,pos", [("Q(", 2), ("F6", 0), ("Q[x^2-1]", 1), ("NF(2,1,1)", 0),
                                      ("Q(t)(t)", 5), ("G5", 0), ("Q[x^2+1", 7)])
def test_field_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_field(text)
    assert err.value.pos == pos
    lines = err.value.diagnostic().splitlines()
    assert lines[2].index("^") - 2 == pos


def test_signatures_and_dimension():
    assert signature(parse_field("Q[x^3-2]")) == (3, 1, 1)
    assert signature(parse_field("Q[x^2+1]")) == (2, 0, 1)
    assert signature(NumberField(4, 2, 1)) == (4, 2, 1)
    assert kronecker_dimension(Rationals()) == 1
    assert kronecker_dimension(FiniteField(5)) == 0
    assert kronecker_dimension(parse_field("Q(t,u)")) == 3
    assert kronecker_dimension(parse_field("F5(t)")) == 1
    assert kronecker_dimension(REALS) == float("inf")
    assert COMPLEX.characteristic == 0


def test_number_field_signature_must_match_degree():
    with pytest.raises(FieldError):
        NumberField(3, 2, 1)


def test_element_arithmetic():
    F = parse_field("Q(t)")
    assert parse_element("(t^2-1)/(t+1)", F) == parse_element("t-1", F)
    G = parse_field("Q[i^2+1]")
    assert parse_element("i^2", G) == G.coerce(-1)
    assert parse_element("1/(1+i)", G) == parse_element("(1-i)/2", G)
    K = parse_field("F5^2")
    x = parse_element("x", K)
    assert x ** 24 == K.one()


def test_division_by_zero_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_element("1/(t-t)", parse_field("Q(t)"))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=6))
def test_irreducibility_matches_sympy(coeffs):
    coeffs = coeffs[:-1] + [1]
    f = Poly(FiniteField(5), coeffs)
    if f.degree < 1:
        return
    x = sympy.Symbol("x")
    oracle = sympy.Poly(list(reversed(coeffs)), x, modulus=5).is_irreducible
    assert is_irreducible(f) == oracle


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4), st.integers(-3, 3))
def test_element_print_parse_round_trip(coeffs, shift):
    F = parse_field("Q(t)")
    t = F.gen()
    num = sum((c * t ** k for k, c in enumerate(coeffs)), F.zero())
    x = num / (t - shift) if shift else num
    assert parse_element(str(x), F) == x


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(1, 4))
def test_finite_extension_element_round_trip(a, b):
    K = parse_field("F5[y^2+2]")
    y = parse_element("y", K)
    x = K.coerce(a) + K.coerce(b) * y
    assert parse_element(str(x), K) == x


def test_symbols_and_places():
    F = parse_field("F5(t)")
    x = parse_symbol("{t, 1-t}", F)
    assert x.is_zero()
    y = parse_symbol("2*{t} - {t+1}", F)
    assert y.degree == 1
    assert str(parse_place("(t^2+2)", F)) == "(t^2 + 2)"
    assert str(parse_place("inf", F)) == "inf"
    assert str(parse_place("(7)", Rationals())) == "(7)"
    with pytest.raises(ParseError):
        parse_place("(t^2+1)", F)  # (t+2)(t+3) over F5
    with pytest.raises(ParseError):
        parse_symbol("{t} + {t,t}", F)


def test_tokenizer_rejects_stray_characters():
    with pytest.raises(ParseError) as err:
        tokenize("Q $")
    assert err.value.pos == 2


WORDS = [
    ("res[(t)] ∘ sym[{t}] ∘ rst[F5->F5(t)]", None, 0),
    ("nrm[Q[i^2+1]/Q] ∘ rst[Q[i^2+1]->Q[i^2+1]: i->-i]", None, 0),
    ("rst[F5(t)->F5(t): t->t^2+1]", None, 1),
    ("2*sym[{t}] - sym[{t-1}]", "Q(t)", 1),
    ("res[inf] o sym[{t, t+1}]", "F5(t)", 0),
]


@pytest.mark.parametrize("text,field,twist", WORDS)
def test_word_round_trip(text, field, twist):
    F = parse_field(field) if field else None
    w = parse_word(text, field=F, twist=twist)
    again = parse_word(str(w), field=w.source.field, twist=twist)
    assert again == w


@pytest.mark.parametrize("text,pos", [
    ("res[(t)]", 0),                        # cannot infer the field
    ("rst[Q->Q[i^2+1]] ∘ rst[F5->F5(t)]", 0),  # left generator does not compose
    ("rst[Q->F5]", 4),                      # no morphism
    ("foo[Q]", 0),
])
def test_word_errors(text, pos):
    with pytest.raises(ParseError) as err:
        parse_word(text)
    assert err.value.pos == pos

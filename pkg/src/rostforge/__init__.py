"""Milnor K-theory, cycle-module morphism words and motivic rank classification."""

from .errors import FieldError, NonTerminating, NotComputable, ParseError, RostforgeError
from .fields import (
    COMPLEX,
    REALS,
    DeclaredField,
    FiniteExtension,
    FiniteField,
    NumberField,
    Rationals,
    RationalFunctionField,
    kronecker_dimension,
    rational_function_field,
    signature,
)
from .dsl import parse_element, parse_field, parse_place, parse_symbol, parse_word
from .milnor import CLASSIC, ROST, MilnorClass, MilnorK, equivalent, norm, residue, restrict
from .rewriter import MorphismWord, ObjectRef, RostNormalForm, evaluate, normalize, rewrite_step
from .rank import (
    borel_generators,
    chern_pontryagin_pullback,
    conjecture_window,
    k_rank,
    rank_HB,
    rank_HB_OK,
)
from .cycles import AffineLine, ProjectiveLine, chow_group

__version__ = "0.1.0"

"""Rational sets of regular languages: operators, rewriting and membership."""

from .automata import Dfa, equiv, is_subset, minlen, to_dfa
from .errors import (
    AlphabetError,
    BudgetExceeded,
    EmptyWordError,
    NotStarFreeError,
    RegexSyntaxError,
    RsrlError,
    SpecFileError,
    UndeclaredSymbolError,
    ValidationError,
)
from .membership import MembershipConfig, MembershipOutcome, membership, membership_star_free, oracle_membership
from .ops import LanguageSet, Rsrl, goals
from .regex import Alphabet, Regex, parse_regex, to_text
from .substitution import Substitution, apply_lang, apply_word

__all__ = [
    "Alphabet",
    "AlphabetError",
    "BudgetExceeded",
    "Dfa",
    "EmptyWordError",
    "LanguageSet",
    "MembershipConfig",
    "MembershipOutcome",
    "NotStarFreeError",
    "Regex",
    "RegexSyntaxError",
    "Rsrl",
    "RsrlError",
    "SpecFileError",
    "Substitution",
    "UndeclaredSymbolError",
    "ValidationError",
    "apply_lang",
    "apply_word",
    "equiv",
    "goals",
    "is_subset",
    "membership",
    "membership_star_free",
    "minlen",
    "oracle_membership",
    "parse_regex",
    "to_dfa",
    "to_text",
]

"""Rational sets of regular languages and their operator algebra.

An :class:`Rsrl` is a pair ``(k, phi)``: a regex over the meta alphabet and a
substitution.  It denotes the set ``{phi(w) | w in L(k)}``.  Operators that
are closed in general (product, union, Kleene star) work on any generator and
compose ``k`` syntactically.  The remaining ones materialize the member set,
so they require a star-free generator and raise :class:`NotStarFreeError`
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .automata import (
    DEFAULT_STATE_BUDGET,
    Dfa,
    as_dfa,
    complement,
    dfa_to_regex,
    difference_lang,
    enumerate_words,
    intersect,
    minimize,
    to_dfa,
    union_lang,
)
from .errors import AlphabetError, NotStarFreeError, ValidationError
from .regex import (
    EPS,
    Alphabet,
    Regex,
    Sym,
    check_alphabet,
    concat,
    is_star_free,
    nullable,
    parse_regex,
    star,
    to_text,
    union as union_re,
    words_regex,
)
from .substitution import Substitution, apply_word, fresh_symbol, merge, unify


@dataclass(frozen=True)
class Rsrl:
    k: Regex
    phi: Substitution

    def __post_init__(self):
        check_alphabet(self.k, self.phi.delta)
        if nullable(self.k):
            raise ValidationError("the generator must not contain the empty word")

    @classmethod
    def of(cls, sigma, mapping, k: Regex | str) -> "Rsrl":
        phi = Substitution.from_mapping(sigma, mapping)
        if isinstance(k, str):
            k = parse_regex(k, phi.delta)
        return cls(k, phi)

    @property
    def sigma(self) -> Alphabet:
        return self.phi.sigma

    @property
    def delta(self) -> Alphabet:
        return self.phi.delta

    def is_star_free(self) -> bool:
        return is_star_free(self.k)

    def __str__(self):
        images = ", ".join(f"{d} := {to_text(r)}" for d, r in self.phi.items())
        return f"({to_text(self.k)}; {images})"


@dataclass(frozen=True)
class LanguageSet:
    """A finite set of regular languages as sorted, pairwise distinct canonical DFAs."""

    sigma: Alphabet
    members: tuple[Dfa, ...]

    @classmethod
    def build(cls, sigma, languages: Iterable[Regex | Dfa]) -> "LanguageSet":
        sigma = Alphabet.of(sigma)
        canon = {minimize(as_dfa(lang, sigma)) for lang in languages}
        return cls(sigma, tuple(sorted(canon)))

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[Dfa]:
        return iter(self.members)

    def __contains__(self, lang) -> bool:
        return minimize(as_dfa(lang, self.sigma)) in self.members

    def regexes(self) -> list[Regex]:
        return [dfa_to_regex(m) for m in self.members]

    def map(self, fn: Callable[[Dfa], Regex | Dfa]) -> "LanguageSet":
        return LanguageSet.build(self.sigma, (fn(m) for m in self.members))


def _require_star_free(operation, *rs, reason=None):
    for r in rs:
        if not is_star_free(r.k):
            raise NotStarFreeError(operation, reason)


def _words(k: Regex) -> list[tuple[str, ...]]:
    return sorted(enumerate_words(k))


def goals(r: Rsrl, budget: int = DEFAULT_STATE_BUDGET) -> LanguageSet:
    """Materialize the member languages of a star-free RSRL."""
    _require_star_free("goals", r)
    return LanguageSet.build(r.sigma, (to_dfa(apply_word(r.phi, w), r.sigma, budget) for w in _words(r.k)))


def from_language_set(ls: LanguageSet, prefix: str = "L") -> Rsrl:
    """One fresh meta symbol per member language."""
    taken = set(ls.sigma)
    mapping = {}
    for i, m in enumerate(ls.members):
        name = fresh_symbol(f"{prefix}{i}", taken)
        taken.add(name)
        mapping[name] = dfa_to_regex(m)
    phi = Substitution.from_mapping(ls.sigma, mapping)
    return Rsrl(union_re(*(Sym(d) for d in mapping)), phi)


def _align(r1: Rsrl, r2: Rsrl):
    if r1.phi == r2.phi:
        return r1.phi, r1.k, r2.k
    return unify(r1, r2)


# ---------------------------------------------------------------------------
# Operators closed in general


def product(r1: Rsrl, r2: Rsrl) -> Rsrl:
    phi, k1, k2 = _align(r1, r2)
    return Rsrl(concat(k1, k2), phi)


def union(r1: Rsrl, r2: Rsrl) -> Rsrl:
    phi, k1, k2 = _align(r1, r2)
    return Rsrl(union_re(k1, k2), phi)


def kleene_star(r: Rsrl) -> Rsrl:
    """``R*``, with a fresh symbol mapped to ``{ε}`` standing for ``R^0``."""
    d_eps = fresh_symbol("D_eps", set(r.delta) | set(r.sigma))
    phi = merge(r.phi, Substitution.from_mapping(r.sigma, {d_eps: EPS}))
    k = union_re(concat(r.k, star(r.k)), Sym(d_eps))
    return Rsrl(k, phi)


# ---------------------------------------------------------------------------
# Set operators on finite RSRLs, reusing the substitution


def _unpartnered(phi, k1, k2, keep_partnered=False):
    """Generator words of ``k1`` whose image has (or lacks) an equal member in ``k2``."""
    other = set(goals(Rsrl(k2, phi)).members)
    return [w for w in _words(k1) if (to_dfa(apply_word(phi, w), phi.sigma) in other) == keep_partnered]


_FINITE_ONLY = "undecided for infinite sets"


def intersection(r1: Rsrl, r2: Rsrl) -> Rsrl:
    """Keeps the generator words of ``r1`` whose image is also a member of ``r2``."""
    _require_star_free("intersection", r1, r2, reason=_FINITE_ONLY)
    phi, k1, k2 = _align(r1, r2)
    return Rsrl(words_regex(_unpartnered(phi, k1, k2, True)), phi)


def difference(r1: Rsrl, r2: Rsrl) -> Rsrl:
    """Keeps the generator words of ``r1`` whose image is *not* a member of ``r2``."""
    _require_star_free("difference", r1, r2, reason=_FINITE_ONLY)
    phi, k1, k2 = _align(r1, r2)
    return Rsrl(words_regex(_unpartnered(phi, k1, k2)), phi)


def symmetric_difference(r1: Rsrl, r2: Rsrl) -> Rsrl:
    _require_star_free("symmetric difference", r1, r2, reason=_FINITE_ONLY)
    phi, k1, k2 = _align(r1, r2)
    return Rsrl(words_regex(_unpartnered(phi, k1, k2) + _unpartnered(phi, k2, k1)), phi)


# ---------------------------------------------------------------------------
# Point-wise and Cartesian operators: always a fresh substitution


def pointwise_star(r: Rsrl) -> Rsrl:
    _require_star_free("point-wise star", r, reason="not rational in general for infinite sets")
    return from_language_set(goals(r).map(lambda m: to_dfa(star(dfa_to_regex(m)), r.sigma)))


def pointwise_complement(r: Rsrl) -> Rsrl:
    _require_star_free("point-wise complement", r, reason="not rational in general for infinite sets")
    return from_language_set(goals(r).map(complement))


def _pointwise(r: Rsrl, q: Regex, op, name) -> Rsrl:
    _require_star_free(name, r, reason="not rational in general for infinite sets")
    qd = to_dfa(q, r.sigma)
    return from_language_set(goals(r).map(lambda m: op(m, qd)))


def pointwise_union(r: Rsrl, q: Regex) -> Rsrl:
    return _pointwise(r, q, union_lang, "point-wise union")


def pointwise_intersection(r: Rsrl, q: Regex) -> Rsrl:
    return _pointwise(r, q, intersect, "point-wise intersection")


def pointwise_difference(r: Rsrl, q: Regex) -> Rsrl:
    return _pointwise(r, q, difference_lang, "point-wise difference")


def _cartesian(r1: Rsrl, r2: Rsrl, op, name) -> Rsrl:
    _require_star_free(name, r1, r2, reason="not rational in general for infinite sets")
    if set(r1.sigma) != set(r2.sigma):
        raise AlphabetError(f"base alphabet mismatch: {r1.sigma} vs {r2.sigma}")
    g1, g2 = goals(r1), goals(r2)
    return from_language_set(LanguageSet.build(r1.sigma, (op(a, b) for a in g1 for b in g2)))


def cartesian_union(r1: Rsrl, r2: Rsrl) -> Rsrl:
    return _cartesian(r1, r2, union_lang, "Cartesian union")


def cartesian_intersection(r1: Rsrl, r2: Rsrl) -> Rsrl:
    return _cartesian(r1, r2, intersect, "Cartesian intersection")


def cartesian_difference(r1: Rsrl, r2: Rsrl) -> Rsrl:
    return _cartesian(r1, r2, difference_lang, "Cartesian difference")


#: name -> (callable, arity kind) used by the CLI ``op`` command
OPERATORS = {
    "product": (product, "binary"),
    "union": (union, "binary"),
    "star": (kleene_star, "unary"),
    "intersection": (intersection, "binary"),
    "difference": (difference, "binary"),
    "symdiff": (symmetric_difference, "binary"),
    "pw-star": (pointwise_star, "unary"),
    "pw-complement": (pointwise_complement, "unary"),
    "pw-union": (pointwise_union, "query"),
    "pw-intersection": (pointwise_intersection, "query"),
    "pw-difference": (pointwise_difference, "query"),
    "cart-union": (cartesian_union, "binary"),
    "cart-intersection": (cartesian_intersection, "binary"),
    "cart-difference": (cartesian_difference, "binary"),
}

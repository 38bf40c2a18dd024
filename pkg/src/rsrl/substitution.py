"""Regular-language substitutions from meta symbols to languages over a base alphabet."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .automata import DEFAULT_STATE_BUDGET, Dfa, to_dfa
from .errors import AlphabetError, EmptyWordError, UndeclaredSymbolError
from .regex import Alphabet, Regex, check_alphabet, concat, nullable, parse_regex, substitute


@dataclass(frozen=True)
class Substitution:
    """Total map from ``delta`` symbols to regexes over ``sigma``.

    ``images[i]`` is the image of ``delta.symbols[i]``.  Build instances with
    :meth:`from_mapping`, which also accepts regex source text.
    """

    sigma: Alphabet
    delta: Alphabet
    images: tuple[Regex, ...]

    def __post_init__(self):
        if len(self.images) != len(self.delta):
            raise ValueError("substitution must map every meta symbol")
        clash = set(self.delta) & set(self.sigma)
        if clash:
            raise AlphabetError(f"meta symbols {sorted(clash)} collide with base symbols")
        for img in self.images:
            check_alphabet(img, self.sigma)

    @classmethod
    def from_mapping(cls, sigma, mapping: Mapping[str, Regex | str]) -> "Substitution":
        sigma = Alphabet.of(sigma, "base")
        delta = Alphabet(tuple(mapping), "meta")
        images = tuple(parse_regex(v, sigma) if isinstance(v, str) else v for v in mapping.values())
        return cls(sigma, delta, images)

    def __getitem__(self, symbol: str) -> Regex:
        try:
            return self.images[self.delta.symbols.index(symbol)]
        except ValueError:
            raise UndeclaredSymbolError(symbol, tuple(self.delta)) from None

    def items(self):
        return zip(self.delta.symbols, self.images)

    def as_dict(self) -> dict[str, Regex]:
        return dict(self.items())

    def image_dfa(self, symbol: str, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
        return to_dfa(self[symbol], self.sigma, budget)

    def restrict(self, symbols: Iterable[str]) -> "Substitution":
        keep = set(symbols)
        return Substitution.from_mapping(self.sigma, {d: r for d, r in self.items() if d in keep})


def apply_word(phi: Substitution, word: Iterable[str]) -> Regex:
    """Image of a non-empty meta word: the concatenation of the symbol images."""
    word = tuple(word)
    if not word:
        raise EmptyWordError("a substitution is only defined on non-empty words")
    return concat(*(phi[d] for d in word))


def apply_lang(phi: Substitution, k: Regex) -> Regex:
    """Image of ``L(k)``, by substituting each meta symbol with its image."""
    check_alphabet(k, phi.delta)
    return substitute(k, phi.as_dict())


def epsilon_symbols(phi: Substitution) -> frozenset[str]:
    """The meta symbols whose image contains the empty word."""
    return frozenset(d for d, img in phi.items() if nullable(img))


def merge(*phis: Substitution) -> Substitution:
    """Union of substitutions with disjoint meta alphabets over one base alphabet."""
    sigma = phis[0].sigma
    mapping: dict[str, Regex] = {}
    for phi in phis:
        if set(phi.sigma) != set(sigma):
            raise AlphabetError(f"base alphabet mismatch: {phi.sigma} vs {sigma}")
        for d, r in phi.items():
            if d in mapping and mapping[d] != r:
                raise AlphabetError(f"meta symbol {d!r} mapped twice")
            mapping[d] = r
    return Substitution.from_mapping(sigma, mapping)


def fresh_symbol(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def tagged(i: int, symbol: str) -> str:
    return f"_{i}_{symbol}"


def unify(r1, r2):
    """Rename both meta alphabets apart and merge the substitutions.

    Returns ``(phi, k1, k2)`` where ``k1``/``k2`` are the generators rewritten
    over the tagged symbols ``_1_<name>`` and ``_2_<name>``.
    """
    s1, s2 = r1.phi.sigma, r2.phi.sigma
    if set(s1) != set(s2):
        raise AlphabetError(f"base alphabet mismatch: {s1} vs {s2}")
    mapping: dict[str, Regex] = {}
    renames = []
    for i, r in ((1, r1), (2, r2)):
        rename = {d: tagged(i, d) for d in r.phi.delta}
        renames.append(rename)
        for d, img in r.phi.items():
            mapping[rename[d]] = img
    phi = Substitution.from_mapping(s1, mapping)
    return phi, substitute(r1.k, renames[0]), substitute(r2.k, renames[1])

"""Regular expression syntax trees over symbol alphabets.

Symbols are identifiers rather than characters, so a word is a tuple of
strings and ``Dstar`` is a single symbol.  The concrete syntax is::

    expr   := term ('+' term)*
    term   := factor+            (juxtaposition is concatenation)
    factor := atom '*'*
    atom   := SYMBOL | 'eps' | 'empty' | '(' expr ')'

:func:`parse_regex` builds the tree literally (binary nodes nest to the
right, parentheses are kept as grouping), and :func:`to_text` prints it back
so that the result re-parses to an equal tree.  The lower-case helpers
:func:`union`, :func:`concat` and :func:`star` are simplifying constructors
used by the algorithms; they never change the denoted language.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator

from .errors import AlphabetError, RegexSyntaxError, UndeclaredSymbolError

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
RESERVED = frozenset({"eps", "empty"})


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of symbol identifiers, tagged as base or meta."""

    symbols: tuple[str, ...]
    role: str = "base"

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if self.role not in ("base", "meta"):
            raise AlphabetError(f"unknown alphabet role {self.role!r}")
        seen = set()
        for s in self.symbols:
            if not isinstance(s, str) or not IDENT.fullmatch(s):
                raise AlphabetError(f"invalid symbol identifier {s!r}")
            if s in RESERVED:
                raise AlphabetError(f"{s!r} is a reserved word")
            if s in seen:
                raise AlphabetError(f"duplicate symbol {s!r}")
            seen.add(s)

    @classmethod
    def of(cls, symbols, role="base"):
        if isinstance(symbols, Alphabet):
            return symbols
        if isinstance(symbols, str):
            symbols = symbols.split()
        return cls(tuple(symbols), role)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self):
        return " ".join(self.symbols)


class Regex:
    """Base class of the syntax tree nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)

    # Operator sugar for building trees in code and tests.
    def __add__(self, other):
        return Union(self, other)

    def __mul__(self, other):
        return Concat(self, other)


@dataclass(frozen=True, repr=False)
class Empty(Regex):
    def __repr__(self):
        return "Empty()"


@dataclass(frozen=True, repr=False)
class Epsilon(Regex):
    def __repr__(self):
        return "Epsilon()"


@dataclass(frozen=True)
class Sym(Regex):
    symbol: str


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


EMPTY = Empty()
EPS = Epsilon()


# ---------------------------------------------------------------------------
# Parsing


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("ident", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            ch = m.group(2)
            if ch not in "+*()":
                raise RegexSyntaxError(f"unexpected character {ch!r}", m.start(2))
            tokens.append((ch, ch, m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, alphabet):
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "+":
            self.take()
            terms.append(self.term())
        return reduce(lambda acc, t: Union(t, acc), reversed(terms[:-1]), terms[-1])

    def term(self):
        factors = []
        while self.peek()[0] in ("ident", "("):
            factors.append(self.factor())
        if not factors:
            kind, value, pos = self.peek()
            what = "end of input" if kind == "end" else repr(value)
            raise RegexSyntaxError(f"expected a symbol, 'eps', 'empty' or '(' but found {what}", pos)
        return reduce(lambda acc, f: Concat(f, acc), reversed(factors[:-1]), factors[-1])

    def factor(self):
        node = self.atom()
        while self.peek()[0] == "*":
            self.take()
            node = Star(node)
        return node

    def atom(self):
        kind, value, pos = self.take()
        if kind == "(":
            node = self.expr()
            kind, value, pos = self.take()
            if kind != ")":
                raise RegexSyntaxError("expected ')'", pos)
            return node
        if value == "eps":
            return EPS
        if value == "empty":
            return EMPTY
        if self.alphabet is not None and value not in self.alphabet:
            raise UndeclaredSymbolError(value, tuple(self.alphabet))
        return Sym(value)


def parse_regex(text: str, alphabet: Iterable[str] | None = None) -> Regex:
    """Parse *text*; when *alphabet* is given every symbol must belong to it."""
    p = _Parser(text, alphabet)
    node = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        raise RegexSyntaxError(f"unexpected {value!r}", pos)
    return node


# ---------------------------------------------------------------------------
# Printing


def to_text(r: Regex) -> str:
    if isinstance(r, Sym):
        return r.symbol
    if isinstance(r, Epsilon):
        return "eps"
    if isinstance(r, Empty):
        return "empty"
    if isinstance(r, Star):
        inner = to_text(r.inner)
        if not isinstance(r.inner, (Sym, Epsilon, Empty, Star)):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(r, Concat):
        left, right = to_text(r.left), to_text(r.right)
        if isinstance(r.left, (Union, Concat)):
            left = f"({left})"
        if isinstance(r.right, Union):
            right = f"({right})"
        return f"{left} {right}"
    if isinstance(r, Union):
        left = to_text(r.left)
        if isinstance(r.left, Union):
            left = f"({left})"
        return f"{left} + {to_text(r.right)}"
    raise TypeError(f"not a regex node: {r!r}")


# ---------------------------------------------------------------------------
# Structural queries


def symbols(r: Regex) -> frozenset[str]:
    out = set()
    stack = [r]
    while stack:
        n = stack.pop()
        if isinstance(n, Sym):
            out.add(n.symbol)
        elif isinstance(n, (Union, Concat)):
            stack += (n.left, n.right)
        elif isinstance(n, Star):
            stack.append(n.inner)
    return frozenset(out)


def size(r: Regex) -> int:
    """Node count of the tree."""
    if isinstance(r, (Union, Concat)):
        return 1 + size(r.left) + size(r.right)
    if isinstance(r, Star):
        return 1 + size(r.inner)
    return 1


def is_star_free(r: Regex) -> bool:
    if isinstance(r, Star):
        return False
    if isinstance(r, (Union, Concat)):
        return is_star_free(r.left) and is_star_free(r.right)
    return True


def is_union_free(r: Regex) -> bool:
    if isinstance(r, Union):
        return False
    if isinstance(r, Concat):
        return is_union_free(r.left) and is_union_free(r.right)
    if isinstance(r, Star):
        return is_union_free(r.inner)
    return True


def nullable(r: Regex) -> bool:
    """Whether the empty word belongs to L(r)."""
    if isinstance(r, (Epsilon, Star)):
        return True
    if isinstance(r, Union):
        return nullable(r.left) or nullable(r.right)
    if isinstance(r, Concat):
        return nullable(r.left) and nullable(r.right)
    return False


def substitute(r: Regex, mapping) -> Regex:
    """Replace every ``Sym(s)`` by ``mapping[s]`` (a Regex or a new name)."""
    if isinstance(r, Sym):
        repl = mapping[r.symbol]
        return Sym(repl) if isinstance(repl, str) else repl
    if isinstance(r, Union):
        return Union(substitute(r.left, mapping), substitute(r.right, mapping))
    if isinstance(r, Concat):
        return Concat(substitute(r.left, mapping), substitute(r.right, mapping))
    if isinstance(r, Star):
        return Star(substitute(r.inner, mapping))
    return r


def check_alphabet(r: Regex, alphabet) -> None:
    allowed = set(alphabet)
    for s in sorted(symbols(r)):
        if s not in allowed:
            raise UndeclaredSymbolError(s, tuple(alphabet))


# ---------------------------------------------------------------------------
# Simplifying constructors


def factors(r: Regex) -> list[Regex]:
    """Flatten nested concatenations into their sequence of factors."""
    if isinstance(r, Concat):
        return factors(r.left) + factors(r.right)
    return [r]


def alternatives(r: Regex) -> list[Regex]:
    if isinstance(r, Union):
        return alternatives(r.left) + alternatives(r.right)
    return [r]


def concat(*parts: Regex) -> Regex:
    flat = []
    for p in parts:
        for f in factors(p):
            if isinstance(f, Empty):
                return EMPTY
            if not isinstance(f, Epsilon):
                flat.append(f)
    if not flat:
        return EPS
    return reduce(lambda acc, f: Concat(f, acc), reversed(flat[:-1]), flat[-1])


def union(*parts: Regex) -> Regex:
    flat = []
    for p in parts:
        for a in alternatives(p):
            if not isinstance(a, Empty) and a not in flat:
                flat.append(a)
    if EPS in flat and any(nullable(a) for a in flat if a != EPS):
        flat.remove(EPS)
    if EPS in flat:
        # eps + x x*  ==  x*
        for a in flat:
            if isinstance(a, Concat) and isinstance(a.right, Star) and a.right.inner == a.left:
                flat.remove(EPS)
                flat[flat.index(a)] = a.right
                break
    if not flat:
        return EMPTY
    return reduce(lambda acc, a: Union(a, acc), reversed(flat[:-1]), flat[-1])


def star(r: Regex) -> Regex:
    if isinstance(r, (Empty, Epsilon)):
        return EPS
    if isinstance(r, Star):
        return r
    if isinstance(r, Union):
        alts = [a for a in alternatives(r) if a != EPS]
        if len(alts) != len(alternatives(r)):
            return star(union(*alts))
    return Star(r)


def word_regex(word: Iterable[str]) -> Regex:
    return concat(*(Sym(s) for s in word))


def words_regex(words: Iterable[Iterable[str]]) -> Regex:
    return union(*(word_regex(w) for w in words))

"""Union-free decomposition and the chain-form calculus.

A union-free expression flattens at top level into a chain
``N1 S1* N2 ... Nm Sm* Nm+1`` of meta words ``Nh`` and starred
sub-expressions ``Sh*``.  Positions address nested stars: ``(2, 1)`` is the
first star inside the second top-level star; the empty position is the chain
itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator

from .errors import BudgetExceeded
from .regex import (
    EMPTY,
    EPS,
    Concat,
    Empty,
    Epsilon,
    Regex,
    Star,
    Sym,
    Union,
    concat,
    factors,
    size,
    star,
    symbols,
    to_text,
    union,
    word_regex,
)
from .rewriting import minlen_of_image
from .substitution import Substitution, epsilon_symbols

DEFAULT_UNIONFREE_BUDGET = 4096

Position = tuple[int, ...]


# ---------------------------------------------------------------------------
# Decomposition


def _dedup(terms: Iterable[Regex]) -> list[Regex]:
    return list(dict.fromkeys(terms))


def union_free_decomp(r: Regex, budget: int = DEFAULT_UNIONFREE_BUDGET) -> Iterator[Regex]:
    """Union-free expressions whose languages together make up ``L(r)``.

    Unions are distributed over concatenation and ``(A+B)*`` becomes
    ``(A* B*)*``.  Duplicates are removed structurally only.
    """
    memo: dict[Regex, list[Regex]] = {}

    def check(terms):
        if len(terms) > budget:
            raise BudgetExceeded("union-free term", budget)
        return terms

    def go(n: Regex) -> list[Regex]:
        if n in memo:
            return memo[n]
        if isinstance(n, Empty):
            out = []
        elif isinstance(n, (Epsilon, Sym)):
            out = [n]
        elif isinstance(n, Union):
            out = check(_dedup(go(n.left) + go(n.right)))
        elif isinstance(n, Concat):
            left, right = go(n.left), go(n.right)
            check(range(len(left) * len(right)))
            out = _dedup(concat(x, y) for x in left for y in right)
        elif isinstance(n, Star):
            terms = [t for t in go(n.inner) if t != EPS]
            if not terms:
                out = [EPS]
            elif len(terms) == 1:
                out = [star(terms[0])]
            else:
                out = [star(concat(*(star(t) for t in terms)))]
        else:
            raise TypeError(f"not a regex node: {n!r}")
        memo[n] = out
        return out

    yield from go(r)


# ---------------------------------------------------------------------------
# Chain forms


@dataclass(frozen=True)
class ChainForm:
    """``words[0] stars[0]* words[1] ... stars[m-1]* words[m]``."""

    words: tuple[tuple[str, ...], ...]
    stars: tuple[Regex, ...]

    def __post_init__(self):
        if len(self.words) != len(self.stars) + 1:
            raise ValueError("a chain with m stars needs m+1 words")

    @property
    def m(self) -> int:
        return len(self.stars)

    def to_regex(self) -> Regex:
        parts = [word_regex(self.words[0])]
        for s, w in zip(self.stars, self.words[1:]):
            parts += [star(s), word_regex(w)]
        return concat(*parts)

    def __str__(self):
        return to_text(self.to_regex())


def to_chain_form(u: Regex) -> ChainForm:
    words: list[tuple[str, ...]] = []
    stars: list[Regex] = []
    current: list[str] = []
    for f in factors(u):
        if isinstance(f, Sym):
            current.append(f.symbol)
        elif isinstance(f, Star):
            words.append(tuple(current))
            current = []
            stars.append(f.inner)
        elif isinstance(f, Epsilon):
            continue
        else:
            raise ValueError(f"not a union-free chain factor: {to_text(f)}")
    words.append(tuple(current))
    return ChainForm(tuple(words), tuple(stars))


# ---------------------------------------------------------------------------
# Unrolling nested stars


def _nest(parts: list[Regex]) -> Regex:
    """Right-nested concatenation that keeps every part as one grouped factor."""
    return reduce(lambda acc, f: Concat(f, acc), reversed(parts[:-1]), parts[-1])


def _star_slots(fs: list[Regex]) -> list[int]:
    return [i for i, f in enumerate(fs) if isinstance(f, Star)]


def ufs(s: Regex, p: Position) -> Regex:
    """Instantiate the star addressed by *p* once, keeping it starred on both sides."""
    if not p:
        return s
    fs = factors(s)
    slots = _star_slots(fs)
    head = p[0]
    if not 1 <= head <= len(slots):
        raise IndexError(f"position {p} out of range: {len(slots)} stars at this level of {to_text(s)}")
    i = slots[head - 1]
    return _nest(fs[:i] + [fs[i], ufs(fs[i].inner, p[1:]), fs[i]] + fs[i + 1 :])


def _eps_set(phi_or_eps) -> frozenset[str]:
    if isinstance(phi_or_eps, Substitution):
        return epsilon_symbols(phi_or_eps)
    return frozenset(phi_or_eps)


def critical(s: Regex, phi) -> list[Position]:
    """Positions whose chain level directly holds a symbol with ε-free image (sorted)."""
    eps = _eps_set(phi)
    out = []
    fs = factors(s)
    if any(isinstance(f, Sym) and f.symbol not in eps for f in fs):
        out.append(())
    for j, i in enumerate(_star_slots(fs), 1):
        out += [(j,) + q for q in critical(fs[i].inner, eps)]
    return sorted(out)


def e_part(s: Regex, phi) -> Regex:
    """Expression for ``L(s) ∩ Δε*``, where Δε are the symbols with ε in their image."""
    eps = _eps_set(phi)

    def go(n):
        if isinstance(n, Sym):
            return n if n.symbol in eps else EMPTY
        if isinstance(n, Concat):
            return concat(go(n.left), go(n.right))
        if isinstance(n, Star):
            return star(go(n.inner))
        if isinstance(n, Union):
            return union(go(n.left), go(n.right))
        return n

    return go(s)


def violates(s: Regex, eps) -> bool:
    """Whether the starred expression *s* uses a symbol outside *eps*."""
    return not symbols(s) <= eps


def unfold_rewrite(s: Regex, phi) -> tuple[Regex, list[tuple[Position, Regex]]]:
    """``s* = E* + sum over critical p of E* ufs(s, p) s*``."""
    e = e_part(s, phi)
    branches = [(p, concat(star(e), ufs(s, p), star(s))) for p in critical(s, phi)]
    return e, branches


def unfold(l: ChainForm | Regex, phi: Substitution, b: int | float, depth_budget: int | None = None) -> Iterator[ChainForm]:
    """Chains whose stars only use symbols with ε in their image.

    Together the yields cover the words of ``l`` whose image has minimal length
    *b*, and each is contained in ``l``.  The leftmost offending star is
    rewritten first; branches whose image minlen exceeds *b* are cut.
    """
    root = l.to_regex() if isinstance(l, ChainForm) else l
    if isinstance(root, Empty):
        return
    eps = epsilon_symbols(phi)
    guard = depth_budget if depth_budget is not None else 10 * max(int(min(b, 10**6)), 1) * size(root) ** 2
    seen = set()
    stack = [(root, 0)]
    while stack:
        r, depth = stack.pop()
        if depth > guard:
            raise BudgetExceeded("unfold depth", guard)
        fs = factors(r)
        bad = next((i for i in _star_slots(fs) if violates(fs[i].inner, eps)), None)
        if bad is None:
            if r not in seen:
                seen.add(r)
                yield to_chain_form(r)
            continue
        s = fs[bad].inner
        e_star = star(e_part(s, eps))
        before, after = fs[:bad], fs[bad + 1 :]
        children = [concat(*before, e_star, *after)]
        for p in critical(s, eps):
            lp = concat(*before, e_star, ufs(s, p), fs[bad], *after)
            if minlen_of_image(lp, phi) <= b:
                children.append(lp)
        stack += [(c, depth + 1) for c in reversed(children)]

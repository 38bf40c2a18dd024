"""Finite automata over symbol alphabets and the classical decision procedures.

Every DFA returned by a public function here is *canonical*: complete over
its (sorted) alphabet, minimized, and numbered in breadth-first discovery
order from the initial state 0.  Two canonical DFAs over the same alphabet
are equal as Python values iff they accept the same language, which is what
the rest of the package uses for language identity and deduplication.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Iterable

from .errors import AlphabetError, BudgetExceeded, NotStarFreeError, UndeclaredSymbolError
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
    alternatives,
    concat,
    factors,
    is_star_free,
    star,
    symbols,
    to_text,
    union,
)

DEFAULT_STATE_BUDGET = 100_000
INF = math.inf

Word = tuple[str, ...]


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; a ``None`` label is an epsilon move."""

    alphabet: tuple[str, ...]
    n_states: int
    transitions: frozenset[tuple[int, str | None, int]]
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        for p, label, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transition {(p, label, q)} leaves the state set")
            if label is not None and label not in self.alphabet:
                raise UndeclaredSymbolError(label, self.alphabet)

    @property
    def states(self) -> range:
        return range(self.n_states)


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; ``delta[q][i]`` reads ``alphabet[i]``."""

    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    finals: frozenset[int]
    initial: int = 0

    def __post_init__(self):
        k = len(self.alphabet)
        for row in self.delta:
            if len(row) != k:
                raise ValueError("transition function must be total over the alphabet")

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.alphabet)}

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, q: int, symbol: str) -> int:
        try:
            return self.delta[q][self.index[symbol]]
        except KeyError:
            raise UndeclaredSymbolError(symbol, self.alphabet) from None

    def run(self, word: Iterable[str]) -> int:
        q = self.initial
        for s in word:
            q = self.step(q, s)
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.finals

    @cached_property
    def key(self) -> tuple:
        """Total-order key; meaningful as language identity on canonical DFAs."""
        return (self.alphabet, len(self.delta), self.delta, tuple(sorted(self.finals)))

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return to_text_regex(self)


# ---------------------------------------------------------------------------
# Construction


def thompson(r: Regex, alphabet: Iterable[str]) -> Nfa:
    alphabet = tuple(alphabet)
    allowed = set(alphabet)
    trans: list[tuple[int, str | None, int]] = []
    count = 0

    def fresh():
        nonlocal count
        count += 1
        return count - 1

    def build(n):
        if isinstance(n, Concat):
            parts = [build(f) for f in factors(n)]
            for (_, e), (s, _) in zip(parts, parts[1:]):
                trans.append((e, None, s))
            return parts[0][0], parts[-1][1]
        s, e = fresh(), fresh()
        if isinstance(n, Sym):
            if n.symbol not in allowed:
                raise UndeclaredSymbolError(n.symbol, alphabet)
            trans.append((s, n.symbol, e))
        elif isinstance(n, Epsilon):
            trans.append((s, None, e))
        elif isinstance(n, Union):
            for alt in alternatives(n):
                a, b = build(alt)
                trans.append((s, None, a))
                trans.append((b, None, e))
        elif isinstance(n, Star):
            a, b = build(n.inner)
            trans.extend([(s, None, a), (b, None, a), (b, None, e), (s, None, e)])
        elif not isinstance(n, Empty):
            raise TypeError(f"not a regex node: {n!r}")
        return s, e

    start, end = build(r)
    return Nfa(alphabet, count, frozenset(trans), start, frozenset({end}))


def explore(
    alphabet: tuple[str, ...],
    start: Hashable,
    successor: Callable[[Hashable, str], Hashable],
    is_final: Callable[[Hashable], bool],
    budget: int = DEFAULT_STATE_BUDGET,
) -> Dfa:
    """Breadth-first construction of the DFA reachable from *start*.

    States are arbitrary hashable labels; the result is numbered in
    discovery order (not minimized).
    """
    number = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        label = order[i]
        row = []
        for s in alphabet:
            nxt = successor(label, s)
            if nxt not in number:
                if len(order) >= budget:
                    raise BudgetExceeded("automaton state", budget)
                number[nxt] = len(order)
                order.append(nxt)
            row.append(number[nxt])
        rows.append(tuple(row))
        i += 1
    finals = frozenset(number[lbl] for lbl in order if is_final(lbl))
    return Dfa(alphabet, tuple(rows), finals, 0)


def determinize(nfa: Nfa, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    """Subset construction with epsilon closure; complete but not minimized."""
    eps = [[] for _ in nfa.states]
    moves: list[dict[str, list[int]]] = [{} for _ in nfa.states]
    for p, label, q in nfa.transitions:
        if label is None:
            eps[p].append(q)
        else:
            moves[p].setdefault(label, []).append(q)

    closure_cache: dict[int, frozenset[int]] = {}

    def closure(q):
        c = closure_cache.get(q)
        if c is None:
            seen = {q}
            stack = [q]
            while stack:
                for t in eps[stack.pop()]:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
            c = closure_cache[q] = frozenset(seen)
        return c

    def successor(subset, s):
        out = set()
        for q in subset:
            for t in moves[q].get(s, ()):
                out |= closure(t)
        return frozenset(out)

    return explore(
        tuple(sorted(nfa.alphabet)),
        closure(nfa.initial),
        successor,
        lambda subset: not subset.isdisjoint(nfa.finals),
        budget,
    )


def minimize(d: Dfa) -> Dfa:
    """Canonical form: drop unreachable states, merge equivalent ones, BFS renumber."""
    reach = explore(d.alphabet, d.initial, lambda q, s: d.delta[q][d.index[s]], d.finals.__contains__)
    n = reach.n_states
    cls = [1 if q in reach.finals else 0 for q in range(n)]
    count = len(set(cls))
    while True:
        sigs = {}
        new = []
        for q in range(n):
            sig = (cls[q],) + tuple(cls[t] for t in reach.delta[q])
            new.append(sigs.setdefault(sig, len(sigs)))
        cls = new
        if len(sigs) == count:
            break
        count = len(sigs)
    rep = {}
    for q in range(n):
        rep.setdefault(cls[q], q)
    return explore(
        reach.alphabet,
        cls[0],
        lambda c, s: cls[reach.delta[rep[c]][reach.index[s]]],
        lambda c: rep[c] in reach.finals,
    )


@lru_cache(maxsize=4096)
def _regex_to_dfa(r: Regex, alphabet: tuple[str, ...], budget: int) -> Dfa:
    return minimize(determinize(thompson(r, alphabet), budget))


def to_dfa(r: Regex, alphabet: Iterable[str] | None = None, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    """Canonical DFA of ``L(r)`` over *alphabet* (default: the symbols of *r*)."""
    alpha = tuple(sorted(set(alphabet) if alphabet is not None else symbols(r)))
    return _regex_to_dfa(r, alpha, budget)


def as_dfa(x: Regex | Dfa, alphabet: Iterable[str] | None = None, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    if isinstance(x, Dfa):
        if alphabet is not None and set(alphabet) != set(x.alphabet):
            return _realphabet(x, tuple(sorted(set(alphabet))))
        return x
    return to_dfa(x, alphabet, budget)


def _realphabet(d: Dfa, alphabet: tuple[str, ...]) -> Dfa:
    missing = set(d.alphabet) - set(alphabet)
    if missing:
        raise AlphabetError(f"symbols {sorted(missing)} are not in the target alphabet")
    sink = object()

    def successor(q, s):
        if q is sink or s not in d.index:
            return sink
        return d.delta[q][d.index[s]]

    return minimize(explore(alphabet, d.initial, successor, lambda q: q is not sink and q in d.finals))


def _pair(a, b, alphabet=None, budget=DEFAULT_STATE_BUDGET) -> tuple[Dfa, Dfa]:
    if alphabet is None:
        if isinstance(a, Dfa) and isinstance(b, Dfa):
            if set(a.alphabet) != set(b.alphabet):
                raise AlphabetError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
            return a, b
        if isinstance(a, Dfa):
            alphabet = a.alphabet
        elif isinstance(b, Dfa):
            alphabet = b.alphabet
        else:
            alphabet = symbols(a) | symbols(b)
    return as_dfa(a, alphabet, budget), as_dfa(b, alphabet, budget)


def product(a: Dfa, b: Dfa, accept: Callable[[bool, bool], bool], budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    if a.alphabet != b.alphabet:
        raise AlphabetError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    d = explore(
        a.alphabet,
        (a.initial, b.initial),
        lambda pq, s: (a.delta[pq[0]][a.index[s]], b.delta[pq[1]][b.index[s]]),
        lambda pq: accept(pq[0] in a.finals, pq[1] in b.finals),
        budget,
    )
    return minimize(d)


def complement(a: Regex | Dfa, alphabet: Iterable[str] | None = None) -> Dfa:
    d = as_dfa(a, alphabet)
    return minimize(Dfa(d.alphabet, d.delta, frozenset(range(d.n_states)) - d.finals, d.initial))


def intersect(a, b, alphabet=None, budget=DEFAULT_STATE_BUDGET) -> Dfa:
    x, y = _pair(a, b, alphabet, budget)
    return product(x, y, lambda p, q: p and q, budget)


def union_lang(a, b, alphabet=None, budget=DEFAULT_STATE_BUDGET) -> Dfa:
    x, y = _pair(a, b, alphabet, budget)
    return product(x, y, lambda p, q: p or q, budget)


def difference_lang(a, b, alphabet=None, budget=DEFAULT_STATE_BUDGET) -> Dfa:
    x, y = _pair(a, b, alphabet, budget)
    return product(x, y, lambda p, q: p and not q, budget)


# ---------------------------------------------------------------------------
# Decisions and measures


def _reachable(d: Dfa) -> set[int]:
    seen = {d.initial}
    stack = [d.initial]
    while stack:
        for t in d.delta[stack.pop()]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def is_empty(d: Regex | Dfa) -> bool:
    d = as_dfa(d)
    return _reachable(d).isdisjoint(d.finals)


def equiv(a, b, alphabet=None) -> bool:
    x, y = _pair(a, b, alphabet)
    if x.alphabet != y.alphabet:
        raise AlphabetError(f"alphabet mismatch: {x.alphabet} vs {y.alphabet}")
    return minimize(x) == minimize(y)


def is_subset(a, b, alphabet=None) -> bool:
    """``L(a) ⊆ L(b)``."""
    return is_empty(difference_lang(a, b, alphabet))


def _distances_to_final(d: Dfa) -> list[float]:
    back: list[list[int]] = [[] for _ in range(d.n_states)]
    for q, row in enumerate(d.delta):
        for t in row:
            back[t].append(q)
    dist = [INF] * d.n_states
    queue = deque()
    for f in d.finals:
        dist[f] = 0
        queue.append(f)
    while queue:
        q = queue.popleft()
        for p in back[q]:
            if dist[p] == INF:
                dist[p] = dist[q] + 1
                queue.append(p)
    return dist


def minlen(lang: Regex | Dfa) -> int | float:
    """Length of a shortest word, ``math.inf`` for the empty language."""
    d = as_dfa(lang)
    return _distances_to_final(d)[d.initial]


def shortest_words(lang: Regex | Dfa) -> set[Word]:
    """Shortest *non-empty* words of the language (empty set if ``L ⊆ {ε}``)."""
    d = as_dfa(lang)
    frontier = {d.initial}
    seen_frontiers = set()
    length = None
    for k in range(1, d.n_states + 2):
        frontier = {t for q in frontier for t in d.delta[q]}
        if not frontier.isdisjoint(d.finals):
            length = k
            break
        if frozenset(frontier) in seen_frontiers:
            break
        seen_frontiers.add(frozenset(frontier))
    if length is None:
        return set()
    # exact[k] = states from which some word of length exactly k is accepted
    exact = [set(d.finals)]
    for _ in range(length):
        prev = exact[-1]
        exact.append({q for q in range(d.n_states) if any(t in prev for t in d.delta[q])})
    out = set()

    def walk(q, remaining, prefix):
        if remaining == 0:
            out.add(tuple(prefix))
            return
        for i, t in enumerate(d.delta[q]):
            if t in exact[remaining - 1]:
                prefix.append(d.alphabet[i])
                walk(t, remaining - 1, prefix)
                prefix.pop()

    walk(d.initial, length, [])
    return out


def enumerate_words(r: Regex) -> set[Word]:
    """All words of a star-free expression."""
    if not is_star_free(r):
        raise NotStarFreeError("enumerate_words")

    def go(n) -> set[Word]:
        if isinstance(n, Sym):
            return {(n.symbol,)}
        if isinstance(n, Epsilon):
            return {()}
        if isinstance(n, Empty):
            return set()
        if isinstance(n, Union):
            return go(n.left) | go(n.right)
        if isinstance(n, Concat):
            left = go(n.left)
            right = go(n.right) if left else set()
            return {u + v for u in left for v in right}
        raise TypeError(f"unexpected node {n!r}")

    return go(r)


def enumerate_words_bounded(lang: Regex | Dfa, n: int, alphabet=None) -> set[Word]:
    """All words of the language with length at most *n*."""
    d = as_dfa(lang, alphabet)
    dist = _distances_to_final(d)
    out = set()

    def walk(q, prefix):
        if q in d.finals:
            out.add(tuple(prefix))
        if len(prefix) == n:
            return
        for i, t in enumerate(d.delta[q]):
            if dist[t] <= n - len(prefix) - 1:
                prefix.append(d.alphabet[i])
                walk(t, prefix)
                prefix.pop()

    if dist[d.initial] <= n:
        walk(d.initial, [])
    return out


def sample_words(alphabet: Iterable[str], n: int) -> Iterable[Word]:
    """Every word over *alphabet* of length at most *n*, shortest first."""
    alphabet = tuple(alphabet)
    level = [()]
    for _ in range(n + 1):
        yield from level
        level = [w + (s,) for w in level for s in alphabet]


# ---------------------------------------------------------------------------
# Back to expressions


def trim(d: Dfa) -> set[int]:
    """States that are reachable and can still reach a final state."""
    dist = _distances_to_final(d)
    return {q for q in _reachable(d) if dist[q] != INF}


def dfa_to_regex(lang: Dfa) -> Regex:
    """State elimination, removing the state with the fewest in*out edges first."""
    useful = trim(lang)
    if lang.initial not in useful:
        return EMPTY
    start, end = "start", "end"
    edges: dict[tuple, Regex] = {}

    def add(p, q, r):
        edges[(p, q)] = union(edges[(p, q)], r) if (p, q) in edges else r

    add(start, lang.initial, EPS)
    for q in sorted(useful):
        for i, t in enumerate(lang.delta[q]):
            if t in useful:
                add(q, t, Sym(lang.alphabet[i]))
        if q in lang.finals:
            add(q, end, EPS)

    remaining = set(useful)
    while remaining:
        def cost(k):
            ins = sum(1 for (p, q) in edges if q == k and p != k)
            outs = sum(1 for (p, q) in edges if p == k and q != k)
            return (ins * outs, k)

        k = min(remaining, key=cost)
        remaining.remove(k)
        loop = edges.pop((k, k), None)
        mid = star(loop) if loop is not None else EPS
        ins = [(p, r) for (p, q), r in edges.items() if q == k]
        outs = [(q, r) for (p, q), r in edges.items() if p == k]
        for p, _ in ins:
            del edges[(p, k)]
        for q, _ in outs:
            del edges[(k, q)]
        for p, rin in ins:
            for q, rout in outs:
                add(p, q, concat(rin, mid, rout))
    return edges.get((start, end), EMPTY)


def to_text_regex(d: Dfa) -> str:
    return to_text(dfa_to_regex(d))


__all__ = [
    "DEFAULT_STATE_BUDGET",
    "INF",
    "Dfa",
    "Nfa",
    "as_dfa",
    "complement",
    "determinize",
    "dfa_to_regex",
    "difference_lang",
    "enumerate_words",
    "enumerate_words_bounded",
    "equiv",
    "explore",
    "intersect",
    "is_empty",
    "is_subset",
    "minimize",
    "minlen",
    "product",
    "sample_words",
    "shortest_words",
    "thompson",
    "to_dfa",
    "trim",
    "union_lang",
]

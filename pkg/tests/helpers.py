"""Independent oracles and random instance generators for the test suite.

Word-level oracles avoid the automata code: words are matched directly on the
syntax tree and star-free generators are expanded by structural recursion.
Member sets are compared as canonical DFAs, which test_automata checks
against the direct matcher.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from rsrl.automata import complement, dfa_to_regex, difference_lang, intersect, minimize, to_dfa, union_lang
from rsrl.distance import DistanceAutomaton
from rsrl.ops import Rsrl
from rsrl.regex import EPS, Concat, Empty, Epsilon, Regex, Star, Sym, Union, concat, nullable, star, union
from rsrl.substitution import Substitution


# ---------------------------------------------------------------------------
# Matching on the syntax tree


def _ends(r: Regex, w: tuple, i: int) -> frozenset[int]:
    return _ends_cached(r, w, i)


@lru_cache(maxsize=None)
def _ends_cached(r, w, i):
    if isinstance(r, Empty):
        return frozenset()
    if isinstance(r, Epsilon):
        return frozenset({i})
    if isinstance(r, Sym):
        return frozenset({i + 1}) if i < len(w) and w[i] == r.symbol else frozenset()
    if isinstance(r, Union):
        return _ends_cached(r.left, w, i) | _ends_cached(r.right, w, i)
    if isinstance(r, Concat):
        out = set()
        for j in _ends_cached(r.left, w, i):
            out |= _ends_cached(r.right, w, j)
        return frozenset(out)
    if isinstance(r, Star):
        reached = {i}
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in _ends_cached(r.inner, w, j):
                if k not in reached:
                    reached.add(k)
                    frontier.append(k)
        return frozenset(reached)
    raise TypeError(r)


def matches(r: Regex, word) -> bool:
    w = tuple(word)
    return len(w) in _ends(r, w, 0)


def all_words(alphabet, n):
    alphabet = sorted(alphabet)
    for k in range(n + 1):
        yield from itertools.product(alphabet, repeat=k)


def words_upto(r: Regex, alphabet, n) -> frozenset:
    return frozenset(w for w in all_words(alphabet, n) if matches(r, w))


def finite_words(r: Regex) -> frozenset:
    """Words of a star-free expression, by structural recursion."""
    if isinstance(r, Empty):
        return frozenset()
    if isinstance(r, Epsilon):
        return frozenset({()})
    if isinstance(r, Sym):
        return frozenset({(r.symbol,)})
    if isinstance(r, Union):
        return finite_words(r.left) | finite_words(r.right)
    if isinstance(r, Concat):
        return frozenset(u + v for u in finite_words(r.left) for v in finite_words(r.right))
    raise ValueError("starred expression has infinitely many words")


def image(phi: Substitution, word) -> Regex:
    return concat(*(phi[d] for d in word))


def shortest_len(r: Regex, alphabet, cap=12):
    """Length of a shortest word up to *cap*, ``inf`` beyond (brute force)."""
    for w in all_words(alphabet, cap):
        if matches(r, w):
            return len(w)
    return float("inf")


# ---------------------------------------------------------------------------
# Random instances


def rand_regex(rng: random.Random, alphabet, depth: int, stars=True, eps=True) -> Regex:
    alphabet = list(alphabet)
    if depth <= 0 or rng.random() < 0.25:
        if eps and rng.random() < 0.1:
            return EPS
        return Sym(rng.choice(alphabet))
    kinds = ["union", "concat", "concat"] + (["star"] if stars else [])
    kind = rng.choice(kinds)
    if kind == "star":
        return Star(rand_regex(rng, alphabet, depth - 1, stars, eps))
    left = rand_regex(rng, alphabet, depth - 1, stars, eps)
    right = rand_regex(rng, alphabet, depth - 1, stars, eps)
    return Union(left, right) if kind == "union" else Concat(left, right)


def rand_phi(rng: random.Random, sigma=("a", "b"), n_delta=None, names=None, depth=2) -> Substitution:
    n_delta = n_delta or rng.randint(1, 3)
    names = names or [f"D{i}" for i in range(1, n_delta + 1)]
    return Substitution.from_mapping(sigma, {d: rand_regex(rng, sigma, depth) for d in names})


def rand_word(rng, alphabet, lo=1, hi=3):
    return tuple(rng.choice(list(alphabet)) for _ in range(rng.randint(lo, hi)))


def rand_star_free_k(rng, delta, max_words=6, max_len=3) -> Regex:
    words = [rand_word(rng, delta, 1, max_len) for _ in range(rng.randint(1, max_words))]
    return union(*(concat(*(Sym(s) for s in w)) for w in words))


def rand_star_free_rsrl(rng, sigma=("a", "b"), phi=None) -> Rsrl:
    phi = phi or rand_phi(rng, sigma)
    return Rsrl(rand_star_free_k(rng, list(phi.delta)), phi)


def rand_general_k(rng, delta, depth=3) -> Regex:
    """Random generator regex with stars; forced to exclude ε."""
    k = rand_regex(rng, delta, depth, stars=True, eps=False)
    if nullable(k):
        k = concat(Sym(rng.choice(list(delta))), k)
    return k


def rand_union_free(rng, delta, depth=3) -> Regex:
    """Random union-free expression built from symbols, concatenation and star."""
    if depth <= 0 or rng.random() < 0.3:
        return Sym(rng.choice(list(delta)))
    if rng.random() < 0.4:
        return star(rand_union_free(rng, delta, depth - 1))
    return concat(rand_union_free(rng, delta, depth - 1), rand_union_free(rng, delta, depth - 1))


# ---------------------------------------------------------------------------
# Distances by dynamic programming over words (for limitedness checks)


def distance_table(a, n):
    """Map every word of length <= n accepted by *a* to its least distance."""
    inf = float("inf")
    eps = [(p, q, d) for p, lab, q, d in a.transitions if lab is None]

    def close(vec):
        vec = list(vec)
        changed = True
        while changed:
            changed = False
            for p, q, d in eps:
                if vec[p] + d < vec[q]:
                    vec[q] = vec[p] + d
                    changed = True
        return vec

    start = [inf] * a.n_states
    start[a.initial] = 0
    level = {(): close(start)}
    out = {}
    for k in range(n + 1):
        nxt = {}
        for w, vec in level.items():
            best = min((vec[f] for f in a.finals), default=inf)
            if best < inf:
                out[w] = best
            if k == n or all(v == inf for v in vec):
                continue
            for s in a.alphabet:
                new = [inf] * a.n_states
                for p, lab, q, d in a.transitions:
                    if lab == s and vec[p] + d < new[q]:
                        new[q] = vec[p] + d
                nxt[w + (s,)] = close(new)
        level = nxt
    return out


# ---------------------------------------------------------------------------
# Brute-force member sets for star-free RSRLs


def brute_goals(r: Rsrl) -> frozenset:
    return frozenset(to_dfa(image(r.phi, w), r.sigma) for w in finite_words(r.k))


def brute_op(name, g1, g2, q, sigma) -> frozenset:
    """Expected member set of an operator result, from member sets ``g1``/``g2``."""
    def cat(x, y):
        return to_dfa(concat(dfa_to_regex(x), dfa_to_regex(y)), sigma)

    qd = to_dfa(q, sigma) if q is not None else None
    table = {
        "product": lambda: {cat(x, y) for x in g1 for y in g2},
        "union": lambda: g1 | g2,
        "intersection": lambda: g1 & g2,
        "difference": lambda: g1 - g2,
        "symdiff": lambda: g1 ^ g2,
        "pw-star": lambda: {to_dfa(star(dfa_to_regex(x)), sigma) for x in g1},
        "pw-complement": lambda: {complement(x) for x in g1},
        "pw-union": lambda: {union_lang(x, qd) for x in g1},
        "pw-intersection": lambda: {intersect(x, qd) for x in g1},
        "pw-difference": lambda: {difference_lang(x, qd) for x in g1},
        "cart-union": lambda: {union_lang(x, y) for x in g1 for y in g2},
        "cart-intersection": lambda: {intersect(x, y) for x in g1 for y in g2},
        "cart-difference": lambda: {difference_lang(x, y) for x in g1 for y in g2},
    }
    return frozenset(minimize(d) for d in table[name]())


# ---------------------------------------------------------------------------
# Curated distance automata: (chain over Δ, images over {a, b}, limited?)

LIMITEDNESS_FIXTURES = [
    ("D*", {"D": "a + eps"}, False),
    ("D D*", {"D": "a*"}, True),
    ("D D*", {"D": "a + eps"}, False),
    ("(D E)*", {"D": "a*", "E": "b + eps"}, False),
    ("(D E)*", {"D": "a*", "E": "b*"}, False),
    ("D E*", {"D": "a", "E": "b + eps"}, False),
    ("(D E*)*", {"D": "a", "E": "b + eps"}, False),
    ("D*", {"D": "a b + eps"}, False),
    ("(D* E)*", {"D": "a + eps", "E": "b*"}, False),
    ("D E*", {"D": "a", "E": "b*"}, True),
    ("D", {"D": "a b"}, True),
    ("D*", {"D": "(a + b)*"}, True),
    ("D* E*", {"D": "a*", "E": "b*"}, True),
    ("D*", {"D": "eps"}, True),
    ("D E*", {"D": "a", "E": "empty"}, True),
    ("(D D*)*", {"D": "(a + b)*"}, True),
    ("D (E D)*", {"D": "a*", "E": "b a*"}, False),
    ("D* E D*", {"D": "(a + b)*", "E": "b"}, True),
]


def random_distance_automaton(rng, max_states=4):
    n = rng.randint(1, max_states)
    trans = set()
    for _ in range(rng.randint(1, 2 * max_states)):
        trans.add((rng.randrange(n), rng.choice(["a", "b", None]), rng.randrange(n), rng.choice([0, 1])))
    finals = frozenset(q for q in range(n) if rng.random() < 0.5)
    return DistanceAutomaton(("a", "b"), n, tuple(sorted(trans, key=str)), 0, finals)

"""Maximal rewritings of a query language and strata by image length."""

from __future__ import annotations

from collections import deque

from .automata import DEFAULT_STATE_BUDGET, INF, Dfa, as_dfa, complement, explore, minimize, minlen
from .regex import Concat, Empty, Epsilon, Regex, Star, Sym, Union
from .substitution import Substitution


def _image_relation(d: Dfa, img: Dfa) -> list[frozenset[int]]:
    """For each state q of *d*: the states reachable from q on some word of L(img)."""
    idx = [img.index.get(s) for s in d.alphabet]
    out = []
    for q in range(d.n_states):
        seen = {(q, img.initial)}
        queue = deque(seen)
        hits = set()
        while queue:
            p, i = queue.popleft()
            if i in img.finals:
                hits.add(p)
            for a, j in enumerate(idx):
                if j is None:
                    continue
                nxt = (d.delta[p][a], img.delta[i][j])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        out.append(frozenset(hits))
    return out


def maximal_rewriting(rq: Regex | Dfa, phi: Substitution, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    """DFA over the meta alphabet for ``{w in Δ+ | φ(w) ⊆ L(rq)}``.

    A run of the subset automaton tracks every state of the complement of
    ``rq`` that some word of ``φ(w)`` can reach; ``w`` is accepted when none
    of them is final, i.e. no word of the image escapes ``rq``.
    """
    d = complement(as_dfa(rq, phi.sigma, budget))
    relation = {delta: _image_relation(d, phi.image_dfa(delta, budget)) for delta in phi.delta}

    def successor(label, delta):
        subset, _ = label
        rel = relation[delta]
        return frozenset(t for q in subset for t in rel[q]), True

    def is_final(label):
        subset, nonempty = label
        return nonempty and not (subset & d.finals)

    alphabet = tuple(sorted(phi.delta))
    return minimize(explore(alphabet, (frozenset({d.initial}), False), successor, is_final, budget))


def symbol_costs(phi: Substitution) -> dict[str, float]:
    return {delta: minlen(phi.image_dfa(delta)) for delta in phi.delta}


def stratum(lang: Regex | Dfa, b: int, phi: Substitution, budget: int = DEFAULT_STATE_BUDGET) -> Dfa:
    """Words of ``lang`` whose image has minimal word length exactly *b*."""
    base = as_dfa(lang, phi.delta, budget)
    costs = symbol_costs(phi)
    dead = ("dead",)

    def successor(label, delta):
        if label is dead or costs[delta] == INF:
            return dead
        q, c = label
        return base.step(q, delta), min(c + costs[delta], b + 1)

    def is_final(label):
        return label is not dead and label[0] in base.finals and label[1] == b

    return minimize(explore(base.alphabet, (base.initial, 0), successor, is_final, budget))


def minlen_of_image(lang: Regex, phi: Substitution) -> int | float:
    """``minlen(φ(L(lang)))`` computed on the syntax tree."""
    costs = symbol_costs(phi)

    def go(r):
        if isinstance(r, Sym):
            return costs[r.symbol]
        if isinstance(r, (Epsilon, Star)):
            return 0
        if isinstance(r, Empty):
            return INF
        if isinstance(r, Concat):
            return go(r.left) + go(r.right)
        if isinstance(r, Union):
            return min(go(r.left), go(r.right))
        raise TypeError(f"not a regex node: {r!r}")

    return go(lang)

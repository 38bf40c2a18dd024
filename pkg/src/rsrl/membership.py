"""Membership of a regular language in an RSRL.

The general procedure intersects the maximal rewriting of the query with the
generator, splits the result into union-free chains, unfolds each chain until
its stars only use symbols whose image contains ε, and then checks each
chain: the image must equal the query and its distance automaton must be
limited.  Star-free generators also get direct decision procedures by
enumeration, and a bounded search serves as a testing oracle.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator

from .automata import (
    DEFAULT_STATE_BUDGET,
    INF,
    dfa_to_regex,
    enumerate_words,
    enumerate_words_bounded,
    equiv,
    intersect,
    is_empty,
    is_subset,
    minlen,
    shortest_words,
    to_dfa,
)
from .distance import DEFAULT_CLOSURE_BUDGET, build_distance_automaton, limitedness
from .errors import AlphabetError, NotStarFreeError
from .ops import Rsrl, goals
from .regex import Regex, is_star_free
from .rewriting import maximal_rewriting
from .substitution import Substitution, apply_lang, apply_word
from .unionfree import DEFAULT_UNIONFREE_BUDGET, ChainForm, to_chain_form, union_free_decomp
from .unionfree import unfold as _unfold

Word = tuple[str, ...]


@dataclass(frozen=True)
class MembershipConfig:
    state_budget: int = DEFAULT_STATE_BUDGET
    unionfree_budget: int = DEFAULT_UNIONFREE_BUDGET
    closure_budget: int = DEFAULT_CLOSURE_BUDGET
    oracle_max_len: int = 8
    # bound on k when building summary words for the witness
    witness_rounds: int = 6
    debug: bool = False

    def __post_init__(self):
        for name in ("state_budget", "unionfree_budget", "closure_budget", "oracle_max_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "MembershipConfig":
        env = os.environ.get("RSRL_STATE_BUDGET")
        if env and "state_budget" not in overrides:
            overrides["state_budget"] = int(env)
        return cls(**overrides)


@dataclass
class MembershipOutcome:
    answer: bool
    witness: Word | None = None
    stats: dict = field(default_factory=dict)


def _stats():
    return {"unionfree_terms": 0, "unfold_yields": 0, "basiccheck_calls": 0}


def enumerate(rq: Regex, r: Rsrl, cfg: MembershipConfig = MembershipConfig(), stats: dict | None = None) -> Iterator[ChainForm]:
    """Union-free chains covering the words of ``M ∩ K`` of the query's minimal length."""
    stats = stats if stats is not None else _stats()
    b = minlen(to_dfa(rq, r.sigma, cfg.state_budget))
    m = intersect(maximal_rewriting(rq, r.phi, cfg.state_budget), to_dfa(r.k, r.delta, cfg.state_budget))
    if is_empty(m):
        return
    for term in union_free_decomp(dfa_to_regex(m), cfg.unionfree_budget):
        stats["unionfree_terms"] += 1
        for chain in unfold(to_chain_form(term), r.phi, b):
            stats["unfold_yields"] += 1
            yield chain


def unfold(l: ChainForm, phi: Substitution, b) -> Iterator[ChainForm]:
    return _unfold(l, phi, b)


def basiccheck(rq: Regex, m: ChainForm, phi: Substitution, cfg: MembershipConfig = MembershipConfig()) -> bool:
    """``φ(m)`` equals the query and a finite subset of ``m`` already produces it."""
    image = apply_lang(phi, m.to_regex())
    if cfg.debug:
        assert is_subset(image, rq, phi.sigma), "chain image escapes the query"
    if not equiv(image, rq, phi.sigma):
        return False
    return limitedness(build_distance_automaton(m, phi), cfg.closure_budget).limited


def _summary_word(m: ChainForm, k: int, delta) -> Word:
    word: list[str] = list(m.words[0])
    for s, n in zip(m.stars, m.words[1:]):
        block = [x for w in sorted(enumerate_words_bounded(s, k, delta), key=lambda w: (len(w), w)) for x in w]
        word += block * k
        word += n
    return tuple(word)


def extract_witness(rq: Regex, m: ChainForm, phi: Substitution, rounds: int = 6) -> Word | None:
    """A single word of ``m`` whose image equals the query, if one is found.

    Tries the summary words that repeat, k times, all star words of length at
    most k; their images grow with k and stay inside ``φ(m)``.
    """
    if m.m == 0:
        w = m.words[0]
        return w if w and equiv(apply_word(phi, w), rq, phi.sigma) else None
    seen = set()
    for k in range(1, rounds + 1):
        w = _summary_word(m, k, phi.delta)
        if not w or w in seen:
            continue
        seen.add(w)
        if equiv(apply_word(phi, w), rq, phi.sigma):
            return w
    return None


def membership(rq: Regex, r: Rsrl, cfg: MembershipConfig = MembershipConfig()) -> MembershipOutcome:
    """Decide whether some generator word maps onto exactly ``L(rq)``."""
    stats = _stats()
    target = to_dfa(rq, r.sigma, cfg.state_budget)
    if is_empty(target):
        # φ(w) is empty iff w uses a symbol with empty image; the minlen-based
        # pipeline has no finite stratum for this case
        m = intersect(maximal_rewriting(target, r.phi, cfg.state_budget), to_dfa(r.k, r.delta, cfg.state_budget))
        if is_empty(m):
            return MembershipOutcome(False, None, stats)
        return MembershipOutcome(True, min(shortest_words(m)), stats)
    for chain in enumerate(rq, r, cfg, stats):
        stats["basiccheck_calls"] += 1
        if basiccheck(rq, chain, r.phi, cfg):
            witness = extract_witness(rq, chain, r.phi, cfg.witness_rounds)
            stats["chain"] = str(chain)
            return MembershipOutcome(True, witness, stats)
    return MembershipOutcome(False, None, stats)


# ---------------------------------------------------------------------------
# Star-free generators


def _require(r: Rsrl, operation: str):
    if not is_star_free(r.k):
        raise NotStarFreeError(operation, "the generator must be finite to enumerate it")


def _by_length(words) -> list[Word]:
    return sorted(words, key=lambda w: (len(w), w))


def membership_star_free(rq: Regex, r: Rsrl) -> MembershipOutcome:
    _require(r, "star-free membership")
    target = to_dfa(rq, r.sigma)
    checked = 0
    for w in _by_length(enumerate_words(r.k)):
        checked += 1
        if equiv(apply_word(r.phi, w), target, r.sigma):
            return MembershipOutcome(True, w, {"words_checked": checked})
    return MembershipOutcome(False, None, {"words_checked": checked})


def inclusion_star_free(r1: Rsrl, r2: Rsrl) -> bool:
    """Every member language of ``r1`` is a member of ``r2``."""
    _require(r1, "star-free inclusion")
    _require(r2, "star-free inclusion")
    if set(r1.sigma) != set(r2.sigma):
        raise AlphabetError(f"base alphabet mismatch: {r1.sigma} vs {r2.sigma}")
    return set(goals(r1).members) <= set(goals(r2).members)


def equivalence_star_free(r1: Rsrl, r2: Rsrl) -> bool:
    return inclusion_star_free(r1, r2) and inclusion_star_free(r2, r1)


def oracle_membership(rq: Regex, r: Rsrl, max_len: int = 8) -> MembershipOutcome | None:
    """Bounded search over generator words up to *max_len*.

    Returns a positive outcome with a witness, a negative one only when the
    generator is finite and was searched completely, and ``None`` otherwise.
    """
    target = to_dfa(rq, r.sigma)
    kd = to_dfa(r.k, r.delta)
    words = _by_length(enumerate_words_bounded(kd, max_len))
    for w in words:
        if w and equiv(apply_word(r.phi, w), target, r.sigma):
            return MembershipOutcome(True, w, {"words_checked": len(words)})
    longest = _longest_word(kd)
    if longest is not None and max_len >= longest:
        return MembershipOutcome(False, None, {"words_checked": len(words)})
    return None


def _longest_word(d) -> int | None:
    """Length of the longest accepted word, or ``None`` if the language is infinite."""
    memo: dict[int, float] = {}
    active: set[int] = set()

    def go(q):
        if q in memo:
            return memo[q]
        if q in active:
            raise _Infinite
        active.add(q)
        best = 0 if q in d.finals else -INF
        for t in d.delta[q]:
            sub = go(t)
            if sub > -INF:
                best = max(best, sub + 1)
        active.discard(q)
        memo[q] = best
        return best

    co = _coreachable(d)
    try:
        memo.update({q: -INF for q in range(d.n_states) if q not in co})
        n = go(d.initial)
    except _Infinite:
        return None
    return max(int(n), 0) if n > -INF else 0


class _Infinite(Exception):
    pass


def _coreachable(d) -> set[int]:
    back: dict[int, set[int]] = {}
    for q in range(d.n_states):
        for t in d.delta[q]:
            back.setdefault(t, set()).add(q)
    seen, stack = set(d.finals), list(d.finals)
    while stack:
        for p in back.get(stack.pop(), ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen

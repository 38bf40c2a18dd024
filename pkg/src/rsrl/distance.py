"""Distance automata and the limitedness decision.

Limitedness is decided on the transition matrices over the ordered set
``0 < 1 < ω < ∞`` (encoded 0..3), multiplied in (min, max) fashion.  The
monoid generated by the letter matrices is closed under products and under
stabilization of idempotents; the automaton is unlimited iff some element of
the closure sends the initial state to the finals with value ω.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .automata import INF, trim
from .errors import BudgetExceeded
from .regex import Concat, Empty, Epsilon, Regex, Star, Sym, Union
from .substitution import Substitution

DEFAULT_CLOSURE_BUDGET = 200_000

ZERO, ONE, OMEGA, NONE = 0, 1, 2, 3
# x -> x# on single entries: a positive loop iterated unboundedly becomes ω
_SHARP = np.array([ZERO, OMEGA, OMEGA, NONE], dtype=np.uint8)


@dataclass(frozen=True)
class DistanceAutomaton:
    """NFA over the base alphabet whose transitions carry a distance in {0, 1}.

    ``transitions`` holds ``(source, label, target, distance)`` with
    ``label=None`` for ε-moves.
    """

    alphabet: tuple[str, ...]
    n_states: int
    transitions: tuple[tuple[int, str | None, int, int], ...]
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        for p, label, q, d in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transition ({p}, {label}, {q}) leaves the state range")
            if d not in (0, 1):
                raise ValueError(f"distance {d} is not 0 or 1")
            if label is not None and label not in self.alphabet:
                raise ValueError(f"label {label!r} not in the alphabet")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")

    def relabel(self, perm: list[int]) -> "DistanceAutomaton":
        """Same automaton with state ``q`` renamed to ``perm[q]``."""
        return DistanceAutomaton(
            self.alphabet,
            self.n_states,
            tuple(sorted(((perm[p], a, perm[q], d) for p, a, q, d in self.transitions), key=repr)),
            perm[self.initial],
            frozenset(perm[f] for f in self.finals),
        )


# ---------------------------------------------------------------------------
# Construction from a chain over the meta alphabet


class _Builder:
    def __init__(self, phi: Substitution):
        self.phi = phi
        self.n = 0
        self.trans: list[tuple[int, str | None, int, int]] = []

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def build(self, r: Regex) -> tuple[int, set[int]]:
        if isinstance(r, Sym):
            img = self.phi.image_dfa(r.symbol)
            useful = trim(img)
            if img.initial not in useful:
                return self.state(), set()
            ids = {q: self.state() for q in sorted(useful)}
            for q in ids:
                for i, t in enumerate(img.delta[q]):
                    if t in ids:
                        self.trans.append((ids[q], img.alphabet[i], ids[t], 0))
            return ids[img.initial], {ids[f] for f in img.finals if f in ids}
        if isinstance(r, Epsilon):
            s = self.state()
            return s, {s}
        if isinstance(r, Empty):
            return self.state(), set()
        if isinstance(r, Concat):
            s1, f1 = self.build(r.left)
            s2, f2 = self.build(r.right)
            self.trans += [(f, None, s2, 0) for f in f1]
            return s1, f2
        if isinstance(r, Union):
            s = self.state()
            s1, f1 = self.build(r.left)
            s2, f2 = self.build(r.right)
            self.trans += [(s, None, s1, 0), (s, None, s2, 0)]
            return s, f1 | f2
        if isinstance(r, Star):
            s = self.state()
            s1, f1 = self.build(r.inner)
            self.trans.append((s, None, s1, 0))
            # re-entering the loop costs one
            self.trans += [(f, None, s1, 1) for f in f1]
            return s, f1 | {s}
        raise TypeError(f"not a regex node: {r!r}")


def build_distance_automaton(m, phi: Substitution) -> DistanceAutomaton:
    """Automaton for ``φ(m)`` whose distance counts re-entries of starred blocks.

    *m* is a :class:`~rsrl.unionfree.ChainForm` or a regex over the meta alphabet.
    """
    r = m.to_regex() if hasattr(m, "to_regex") else m
    b = _Builder(phi)
    start, finals = b.build(r)
    return DistanceAutomaton(tuple(sorted(phi.sigma)), b.n, tuple(b.trans), start, frozenset(finals))


# ---------------------------------------------------------------------------
# Distances of words


def min_distance(a: DistanceAutomaton, word: Iterable[str]) -> int | float:
    """Least total distance of an accepting run on *word*, ``inf`` if rejected."""
    word = tuple(word)
    eps_out: dict[int, list] = {}
    sym_out: dict[tuple[int, str], list] = {}
    for p, label, q, d in a.transitions:
        if label is None:
            eps_out.setdefault(p, []).append((q, d))
        else:
            sym_out.setdefault((p, label), []).append((q, d))
    best = {(a.initial, 0): 0}
    dq = deque([(0, a.initial, 0)])
    done = set()
    while dq:
        cost, p, i = dq.popleft()
        if (p, i) in done:
            continue
        done.add((p, i))
        moves = [(q, i, d) for q, d in eps_out.get(p, ())]
        if i < len(word):
            moves += [(q, i + 1, d) for q, d in sym_out.get((p, word[i]), ())]
        for q, j, d in moves:
            c = cost + d
            if c < best.get((q, j), INF):
                best[(q, j)] = c
                if d == 0:
                    dq.appendleft((c, q, j))
                else:
                    dq.append((c, q, j))
    return min((best.get((f, len(word)), INF) for f in a.finals), default=INF)


@dataclass
class EpsilonFree:
    """ε-free weighted automaton with integer weights and per-state final costs."""

    alphabet: tuple[str, ...]
    n_states: int
    edges: dict[tuple[int, str], dict[int, int]]
    initial: int
    final_cost: list[float] = field(default_factory=list)

    def distance(self, word: Iterable[str]) -> int | float:
        cur = {self.initial: 0}
        for s in word:
            nxt: dict[int, int] = {}
            for p, c in cur.items():
                for q, w in self.edges.get((p, s), {}).items():
                    if c + w < nxt.get(q, INF):
                        nxt[q] = c + w
            cur = nxt
        return min((c + self.final_cost[p] for p, c in cur.items()), default=INF)


def _eps_distances(p: int, eps_out) -> dict[int, int]:
    best = {p: 0}
    dq = deque([(0, p)])
    done = set()
    while dq:
        c, q = dq.popleft()
        if q in done:
            continue
        done.add(q)
        for t, d in eps_out.get(q, ()):
            if c + d < best.get(t, INF):
                best[t] = c + d
                (dq.appendleft if d == 0 else dq.append)((c + d, t))
    return best


def eliminate_epsilon(a: DistanceAutomaton) -> EpsilonFree:
    """Remove ε-moves, folding their summed distance into letter edges and final costs.

    Preserves the distance of every word exactly.
    """
    eps_out: dict[int, list] = {}
    sym_out: dict[int, list] = {}
    for p, label, q, d in a.transitions:
        if label is None:
            eps_out.setdefault(p, []).append((q, d))
        else:
            sym_out.setdefault(p, []).append((label, q, d))
    edges: dict[tuple[int, str], dict[int, int]] = {}
    final_cost: list[float] = []
    for p in range(a.n_states):
        reach = _eps_distances(p, eps_out)
        final_cost.append(min((c for q, c in reach.items() if q in a.finals), default=INF))
        for q, c in reach.items():
            for label, t, d in sym_out.get(q, ()):
                row = edges.setdefault((p, label), {})
                if c + d < row.get(t, INF):
                    row[t] = c + d
    return EpsilonFree(a.alphabet, a.n_states, edges, a.initial, final_cost)


# ---------------------------------------------------------------------------
# Limitedness


@dataclass(frozen=True)
class LimitednessReport:
    limited: bool
    states: int
    closure_size: int


def mat_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.maximum(x[:, :, None], y[None, :, :]).min(axis=1)


def _batch_product(x: np.ndarray, ys: np.ndarray, left: bool) -> np.ndarray:
    """``x @ y`` (or ``y @ x`` when not *left*) for every ``y`` in the stack."""
    if left:
        return np.maximum(x[None, :, :, None], ys[:, None, :, :]).min(axis=2)
    return np.maximum(ys[:, :, :, None], x[None, None, :, :]).min(axis=2)


def stabilize(e: np.ndarray) -> np.ndarray:
    """``E#[i,j] = min_k max(E[i,k], E[k,k]#, E[k,j])`` for an idempotent ``E``."""
    loop = _SHARP[np.diagonal(e)]
    return np.maximum(np.maximum(e[:, :, None], loop[None, :, None]), e[None, :, :]).min(axis=1)


def _useful_states(ef: EpsilonFree) -> list[int]:
    succ: dict[int, set[int]] = {}
    for (p, _), row in ef.edges.items():
        succ.setdefault(p, set()).update(row)
    pred: dict[int, set[int]] = {}
    for p, ts in succ.items():
        for t in ts:
            pred.setdefault(t, set()).add(p)

    def closure(starts, graph):
        seen = set(starts)
        stack = list(starts)
        while stack:
            q = stack.pop()
            for t in graph.get(q, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    acc = closure([ef.initial], succ)
    coacc = closure([q for q in range(ef.n_states) if ef.final_cost[q] != INF], pred)
    return sorted(acc & coacc)


def limitedness(a: DistanceAutomaton, budget: int = DEFAULT_CLOSURE_BUDGET) -> LimitednessReport:
    ef = eliminate_epsilon(a)
    useful = _useful_states(ef)
    if ef.initial not in useful:
        return LimitednessReport(True, a.n_states, 0)
    pos = {q: i for i, q in enumerate(useful)}
    n = len(useful)
    fvec = np.full(n, NONE, dtype=np.uint8)
    for q in useful:
        if ef.final_cost[q] != INF:
            fvec[pos[q]] = min(ef.final_cost[q], ONE)
    gens = []
    positive = bool((fvec == ONE).any())
    for s in ef.alphabet:
        mat = np.full((n, n), NONE, dtype=np.uint8)
        for q in useful:
            for t, w in ef.edges.get((q, s), {}).items():
                if t in pos:
                    mat[pos[q], pos[t]] = min(mat[pos[q], pos[t]], min(w, ONE))
        positive |= bool((mat == ONE).any())
        gens.append(mat)
    if not positive:
        return LimitednessReport(True, a.n_states, 0)

    i0 = pos[ef.initial]

    def unbounded(m: np.ndarray) -> bool:
        return int(np.maximum(m[i0], fvec).min()) == OMEGA

    known: dict[bytes, int] = {}
    stack: list[np.ndarray] = []
    pending: list[np.ndarray] = []

    def add(m: np.ndarray) -> bool:
        key = m.tobytes()
        if key in known:
            return False
        if len(known) >= budget:
            raise BudgetExceeded("stabilization closure", budget)
        known[key] = len(stack)
        stack.append(m)
        pending.append(m)
        return unbounded(m)

    for g in gens:
        if add(g):
            return LimitednessReport(False, a.n_states, len(known))
    while pending:
        x = pending.pop()
        candidates = []
        if np.array_equal(mat_product(x, x), x):
            candidates.append(stabilize(x))
        ys = np.stack(stack)
        for chunk in range(0, len(ys), 256):
            part = ys[chunk : chunk + 256]
            candidates.extend(_batch_product(x, part, True))
            candidates.extend(_batch_product(x, part, False))
        for c in candidates:
            if add(np.ascontiguousarray(c)):
                return LimitednessReport(False, a.n_states, len(known))
    return LimitednessReport(True, a.n_states, len(known))


def is_limited(a: DistanceAutomaton, budget: int = DEFAULT_CLOSURE_BUDGET) -> bool:
    """Whether the distances of accepted words are uniformly bounded."""
    return limitedness(a, budget).limited

import math
import random

from rsrl.automata import INF, is_empty, is_subset, minlen, to_dfa
from rsrl.regex import parse_regex as P
from rsrl.rewriting import maximal_rewriting, minlen_of_image, stratum
from rsrl.substitution import Substitution, apply_lang, apply_word

from helpers import all_words, image, matches, rand_phi, rand_regex, rand_union_free

SIGMA = ("a", "b")


def test_alternating_blocks():
    phi = Substitution.from_mapping("a b", {"D1": "a", "D2": "b"})
    m = maximal_rewriting(P("(a b)*"), phi)
    expected = P("D1 D2 (D1 D2)*")
    for w in all_words(phi.delta, 6):
        assert m.accepts(w) == (bool(w) and matches(expected, w))


def test_everything_rewrites_into_sigma_star():
    phi = Substitution.from_mapping("a b", {"D1": "a*", "D2": "b a"})
    m = maximal_rewriting(P("(a + b)*"), phi)
    assert not m.accepts(())
    assert all(m.accepts(w) for w in all_words(phi.delta, 4) if w)


def test_empty_query():
    phi = Substitution.from_mapping("a", {"D": "a"})
    assert is_empty(maximal_rewriting(P("empty"), phi))
    # a symbol with empty image rewrites into anything, even the empty language
    phi = Substitution.from_mapping("a", {"D": "a", "Z": "empty"})
    m = maximal_rewriting(P("empty"), phi)
    assert m.accepts(("Z",)) and m.accepts(("D", "Z")) and not m.accepts(("D",))


def test_soundness_and_completeness_random():
    rng = random.Random(11)
    for _ in range(25):
        phi = rand_phi(rng)
        rq = rand_regex(rng, SIGMA, 3)
        m = maximal_rewriting(rq, phi)
        for w in all_words(phi.delta, 4):
            if w:
                assert m.accepts(w) == is_subset(apply_word(phi, w), rq, SIGMA)


def test_monotone_in_the_query():
    rng = random.Random(12)
    for _ in range(25):
        phi = rand_phi(rng)
        r1 = rand_regex(rng, SIGMA, 3)
        r2 = P(f"({r1}) + ({rand_regex(rng, SIGMA, 2)})")
        assert is_subset(r1, r2, SIGMA)
        assert is_subset(maximal_rewriting(r1, phi), maximal_rewriting(r2, phi))


def test_stratum_examples():
    phi = Substitution.from_mapping("a", {"D1": "a", "D2": "a + eps"})
    l = P("D1 D2*")
    s1, s2 = stratum(l, 1, phi), stratum(l, 2, phi)
    for w in all_words(phi.delta, 5):
        assert s1.accepts(w) == matches(l, w)
    assert is_empty(s2)
    phi = Substitution.from_mapping("a b", {"D": "a b"})
    assert stratum(P("D D"), 4, phi).accepts(("D", "D"))
    assert is_empty(stratum(P("D D"), 0, phi))


def test_strata_partition():
    rng = random.Random(13)
    for _ in range(15):
        phi = rand_phi(rng)
        l = rand_union_free(rng, list(phi.delta), 3)
        strata = [stratum(l, b, phi) for b in range(7)]
        for w in all_words(phi.delta, 3):
            if not matches(l, w):
                assert not any(s.accepts(w) for s in strata)
                continue
            b = minlen(apply_word(phi, w)) if w else 0
            hits = [i for i, s in enumerate(strata) if s.accepts(w)]
            assert hits == ([b] if b < 7 else [])


def test_minlen_of_image():
    phi = Substitution.from_mapping("a", {"D1": "a", "D2": "a + eps", "D": "a a*"})
    assert minlen_of_image(P("D1 D2*"), phi) == 1
    assert minlen_of_image(P("empty"), phi) == INF
    assert minlen_of_image(P("D D"), phi) == 2
    rng = random.Random(14)
    for _ in range(30):
        phi = rand_phi(rng)
        l = rand_regex(rng, list(phi.delta), 3)
        expected = minlen(to_dfa(apply_lang(phi, l), SIGMA))
        assert minlen_of_image(l, phi) == expected or (math.isinf(expected) and math.isinf(minlen_of_image(l, phi)))

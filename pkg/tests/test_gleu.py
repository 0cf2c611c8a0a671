import pytest
from hypothesis import assume, given, settings, strategies as st

from gec_lab.errors import ValidationError
from gec_lab.gleu import gleu_corpus, gleu_stats
from gec_lab.rng import stream

from oracles import gleu_corpus_reference, gleu_sentence_reference

toks = st.lists(st.sampled_from("abcde"), min_size=1, max_size=10)


def seeded_draws(seed):
    def draws(t):
        g = stream(seed, "gleu", t)
        while True:
            yield g.random()
    return draws


def test_hand_counted_bigrams():
    s = gleu_stats("a b c".split(), "a b d".split(), "a b e".split(), 2)
    assert s.numerators == (2, 1) and s.denominators == (3, 2)


@given(toks, toks)
def test_hyp_equal_ref_gives_full_numerators(src, hyp):
    s = gleu_stats(src, hyp, hyp)
    assert s.numerators == s.denominators


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=8))
def test_unchanged_source_against_disjoint_reference(src):
    s = gleu_stats(src, src, ["x", "y", "z"])
    assert s.numerators == (0, 0, 0, 0)


@given(toks, toks, toks)
def test_stats_match_oracle(src, hyp, ref):
    assert gleu_stats(src, hyp, ref).as_row() == gleu_sentence_reference(src, hyp, ref)


def test_identity_is_exactly_one():
    hyps = [["the", "cat", "sat", "on", "the", "mat"], ["a", "b", "c", "d", "e"]]
    assert gleu_corpus([["x"]] * 2, hyps, [[h] for h in hyps]) == 1.0


@given(st.lists(st.tuples(toks, toks, toks), min_size=1, max_size=5), st.integers(1, 20))
def test_single_reference_ignores_iterations_and_seed(rows, iters):
    src, hyp, ref = zip(*rows)
    refs = [[r] for r in ref]
    base = gleu_corpus(src, hyp, refs, iterations=1, seed=0)
    assert gleu_corpus(src, hyp, refs, iterations=iters, seed=iters) == base
    assert 0.0 <= base <= 1.0


def test_multi_reference_matches_oracle():
    src = [["she", "go", "to", "school", "yesterday"], ["he", "have", "two", "cat"]]
    hyp = [["she", "goes", "to", "school", "yesterday"], ["he", "has", "two", "cat"]]
    refs = [
        [["she", "went", "to", "school", "yesterday"], ["yesterday", "she", "went", "to", "school"]],
        [["he", "has", "two", "cats"], ["he", "owns", "two", "cats"]],
    ]
    ours = gleu_corpus(src, hyp, refs, iterations=500, seed=42)
    ref = gleu_corpus_reference(src, hyp, refs, 4, 500, seeded_draws(42))
    assert abs(ours - ref) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(toks, toks, st.lists(toks, min_size=1, max_size=3)), min_size=1, max_size=4),
       st.integers(0, 2 ** 32))
def test_random_multi_reference_matches_oracle(rows, seed):
    src, hyp, refs = zip(*rows)
    ours = gleu_corpus(src, hyp, refs, iterations=20, seed=seed)
    assert ours == pytest.approx(gleu_corpus_reference(src, hyp, refs, 4, 20, seeded_draws(seed)), abs=1e-12)


def test_same_seed_bit_identical():
    src = [["a", "b", "c"]] * 3
    hyp = [["a", "b", "d", "c"]] * 3
    refs = [[["a", "b", "d", "c"], ["a", "d", "c"]]] * 3
    assert gleu_corpus(src, hyp, refs, iterations=50, seed=9) == gleu_corpus(src, hyp, refs, iterations=50, seed=9)


@given(toks, toks, toks)
def test_appending_kept_source_token_never_helps(src, hyp, ref):
    # only holds while the brevity penalty is inactive; see the next test
    assume(len(hyp) >= len(ref))
    src = src + ["z"]
    assert gleu_corpus([src], [hyp + ["z"]], [[ref]]) <= gleu_corpus([src], [hyp], [[ref]])


def test_short_hypothesis_can_gain_from_brevity_penalty():
    src = ["z"]
    hyp = "c z a z b a a a c".split()
    ref = "a a c b c d c d d c b a a a".split()
    assert gleu_corpus([src], [hyp + ["z"]], [[ref]]) > gleu_corpus([src], [hyp], [[ref]])


def test_errors():
    with pytest.raises(ValidationError):
        gleu_corpus([], [], [])
    with pytest.raises(ValidationError):
        gleu_corpus([["a"]], [["a"]], [[]])
    with pytest.raises(ValidationError):
        gleu_corpus([["a"]], [["a"], ["b"]], [[["a"]]])
    with pytest.raises(ValidationError):
        gleu_stats(["a"], ["a"], ["a"], 0)

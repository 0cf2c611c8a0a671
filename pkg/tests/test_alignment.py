import random

import pytest
from hypothesis import given, settings, strategies as st

from gec_lab.alignment import Edit, align, alignment_cost, apply_edits, extract_edits
from gec_lab.errors import ValidationError

from oracles import apply_naive, ops_cost, unit_osa_distance, weighted_alignment_cost

words = st.lists(st.sampled_from(["a", "b", "c", "A", "the", "The", "."]), max_size=9)


def test_identity_has_no_edits():
    assert extract_edits("a b c".split(), "a b c".split()) == []


def test_single_substitution():
    assert extract_edits("a b c".split(), "a x c".split()) == [Edit(1, 2, ("x",))]


def test_transposition_becomes_one_edit():
    # brute force: sub+sub costs 2, the swap costs 1, so one merged span
    src, hyp = "a b c d".split(), "a c b d".split()
    assert weighted_alignment_cost(src, hyp) == 1.0
    assert extract_edits(src, hyp) == [Edit(1, 3, ("c", "b"))]


def test_case_only_substitution_is_cheaper():
    assert alignment_cost(["The"], ["the"]) == 0.5
    assert [op.kind for op in align(["The", "cat"], ["the", "cat"])] == ["S", "M"]


def test_tie_prefers_substitution():
    assert [op.kind for op in align(["a"], ["b"])] == ["S"]


def test_apply_examples():
    s = ["a", "b"]
    assert apply_edits(s, []) == s
    assert apply_edits(s, [Edit(1, 2, ())]) == ["a"]
    assert apply_edits(s, [Edit(0, 0, ("x",)), Edit(1, 2, ("y", "z"))]) == ["x", "a", "y", "z"]


@pytest.mark.parametrize("edits", [
    [Edit(0, 2, ("x",)), Edit(1, 2, ("y",))],
    [Edit(1, 2, ("x",)), Edit(0, 1, ("y",))],
    [Edit(0, 3, ("x",))],
    [Edit(1, 1, ("x",)), Edit(1, 1, ("y",))],
])
def test_apply_rejects_bad_edit_lists(edits):
    with pytest.raises(ValidationError):
        apply_edits(["a", "b"], edits)


def test_edit_invariants():
    with pytest.raises(ValidationError):
        Edit(2, 2, ())
    with pytest.raises(ValidationError):
        Edit(3, 1, ("x",))
    assert Edit(1, 1, ("x",)).is_insertion
    assert Edit(1, 2, ()).is_deletion


@given(words, words)
def test_round_trip(src, hyp):
    edits = extract_edits(src, hyp)
    assert apply_edits(src, edits) == hyp
    assert apply_naive(src, [e.key for e in edits]) == hyp


@given(words)
def test_self_alignment_is_empty(s):
    assert extract_edits(s, s) == []


@given(words, words)
def test_edits_sorted_and_disjoint(src, hyp):
    edits = extract_edits(src, hyp)
    for a, b in zip(edits, edits[1:]):
        assert a.end < b.start or (a.end == b.start and not (a.is_insertion and b.is_insertion))
    # merged runs are separated by at least one matched token
    for a, b in zip(edits, edits[1:]):
        assert b.start > a.end


@given(words, words)
def test_edit_count_bounded_by_distance(src, hyp):
    assert len(extract_edits(src, hyp)) <= unit_osa_distance(tuple(src), tuple(hyp))


@settings(max_examples=300)
@given(words, words)
def test_cost_matches_search(src, hyp):
    ops = align(src, hyp)
    assert ops_cost(ops, src, hyp) == weighted_alignment_cost(src, hyp)
    assert alignment_cost(src, hyp) == weighted_alignment_cost(src, hyp)


def test_random_long_pairs_round_trip():
    rng = random.Random(3)
    vocab = "the a of to in cat sat mat on . ,".split()
    for _ in range(500):
        src = [rng.choice(vocab) for _ in range(rng.randint(0, 30))]
        hyp = [rng.choice(vocab) if rng.random() < 0.2 else t for t in src if rng.random() > 0.1]
        assert apply_edits(src, extract_edits(src, hyp)) == hyp

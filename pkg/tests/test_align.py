import itertools
import random

import pytest
from hypothesis import given, strategies as st

from normforge import _align_py
from normforge.align import BACKEND, char_align, char_distance
from oracles import make_distance_oracle

words = st.text(alphabet="abc", min_size=1, max_size=6)


class TestCharAlign:
    def test_identity(self):
        script = char_align("abc", "abc")
        assert script.cost == 0
        assert [op.kind for op in script.ops] == ["match"] * 3

    def test_gud_good(self):
        assert char_align("gud", "good").cost == 2

    def test_transpose(self):
        script = char_align("ab", "ba")
        assert script.cost == 1
        assert [op.kind for op in script.ops] == ["transpose"]
        # exhaustive check that no cheaper script exists
        assert make_distance_oracle()("ab", "ba") == 1

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            char_align("", "abc")

    def test_backtrace_prefers_match(self):
        script = char_align("aa", "a")
        kinds = [op.kind for op in script.ops]
        assert kinds.count("match") == 1
        assert kinds.count("insert") == 1


@given(words, words)
def test_replay_reconstructs_raw(raw, norm):
    assert char_align(raw, norm).replay(norm) == raw


@given(words, words)
def test_cost_matches_distance(raw, norm):
    assert char_align(raw, norm).cost == char_distance(raw, norm)


@given(words, words)
def test_distance_matches_oracle(raw, norm):
    assert char_distance(raw, norm) == make_distance_oracle()(raw, norm)


@given(words, words)
def test_python_backend_agrees(raw, norm):
    assert _align_py.distance(raw, norm) == char_distance(raw, norm)
    assert _align_py.align(raw, norm) == [
        (op.kind, op.raw_char, op.norm_char, op.position) for op in char_align(raw, norm).ops
    ]


def test_oracle_sweep_short_words():
    # exhaustive over a 2-letter alphabet up to length 4 in the unit tests;
    # the full 3-letter length-6 sweep runs in the acceptance suite
    oracle = make_distance_oracle()
    vocab = [
        "".join(w)
        for n in range(1, 5)
        for w in itertools.product("ab", repeat=n)
    ]
    for a in vocab:
        for b in vocab:
            assert char_distance(a, b) == oracle(a, b)


def test_unicode_alignment():
    script = char_align("s", "š")
    assert script.cost == 1
    assert script.ops[0].kind == "substitute"


def test_backend_is_reported():
    assert BACKEND in ("compiled", "python")

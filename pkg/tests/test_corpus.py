import pytest
from hypothesis import given, strategies as st

from normforge.corpus import (
    CorpusFormatError,
    Dataset,
    Sentence,
    Token,
    concat_datasets,
    parse_dataset,
    serialize_dataset,
    split_dataset,
    summarize,
)


def make_dataset(pairs_per_sentence, language="en"):
    return Dataset(
        language,
        tuple(
            Sentence(tuple(Token(raw, norm) for raw, norm in pairs))
            for pairs in pairs_per_sentence
        ),
    )


class TestParse:
    def test_two_token_sentence(self):
        d = parse_dataset(b"hw\thow\nr\tare\n\n", "en")
        assert len(d.sentences) == 1
        assert d.sentences[0].tokens == (Token("hw", "how"), Token("r", "are"))

    def test_identity_token(self):
        d = parse_dataset(b"a\ta\n", "en")
        assert d.word_count == 1
        assert summarize(d).pct_normalized == 0

    def test_ten_tokens_one_changed(self):
        lines = ["w%d\tw%d" % (i, i) for i in range(9)] + ["gr8\tgreat"]
        d = parse_dataset("\n".join(lines).encode() + b"\n", "en")
        assert summarize(d).pct_normalized == pytest.approx(0.10)

    def test_missing_trailing_blank_line_ok(self):
        d = parse_dataset(b"a\tb", "en")
        assert d.sentences[0].tokens == (Token("a", "b"),)

    def test_no_tab_reports_line(self):
        with pytest.raises(CorpusFormatError, match="line 2"):
            parse_dataset(b"a\ta\nbad line\n", "en")

    def test_two_tabs_rejected(self):
        with pytest.raises(CorpusFormatError, match="TAB"):
            parse_dataset(b"a\tb\tc\n", "en")

    def test_empty_raw_rejected(self):
        with pytest.raises(CorpusFormatError, match="empty raw"):
            parse_dataset(b"\tx\n", "en")

    def test_invalid_utf8(self):
        with pytest.raises(CorpusFormatError, match="UTF-8"):
            parse_dataset(b"\xff\xfe\ta\n", "en")

    def test_leading_empty_norm_warns(self):
        with pytest.warns(UserWarning, match="empty norm"):
            parse_dataset(b"gone\t\n", "en")


class TestSerialize:
    def test_empty_dataset(self):
        assert serialize_dataset(Dataset("en", ())) == b""

    def test_exact_bytes(self):
        d = make_dataset([[("hw", "how"), ("r", "are")]])
        assert serialize_dataset(d) == b"hw\thow\nr\tare\n\n"

    def test_round_trip(self):
        data = b"hw\thow\nr\tare\n\nu\tyou\n\n"
        d = parse_dataset(data, "en")
        assert serialize_dataset(d) == data


token_text = st.text(
    alphabet=st.characters(blacklist_characters="\t\n ", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=6,
)
norm_text = st.one_of(
    st.just(""),
    token_text,
    st.builds(lambda a, b: f"{a} {b}", token_text, token_text),
)


@st.composite
def datasets(draw, min_sentences=1):
    sentences = draw(
        st.lists(
            st.lists(st.tuples(token_text, norm_text), min_size=1, max_size=5),
            min_size=min_sentences,
            max_size=6,
        )
    )
    # first token of a sentence must carry a norm
    fixed = []
    for pairs in sentences:
        raw0, norm0 = pairs[0]
        fixed.append([(raw0, norm0 or raw0)] + pairs[1:])
    return make_dataset(fixed)


@given(datasets())
def test_round_trip_fuzz(d):
    assert parse_dataset(serialize_dataset(d), "en") == d


@given(datasets(min_sentences=2), st.integers(0, 2**32), st.floats(0.05, 0.95))
def test_split_partitions(d, seed, fraction):
    train, dev = split_dataset(d, fraction, seed)
    n = len(d.sentences)
    assert len(dev.sentences) == max(1, round(fraction * n))
    assert len(train.sentences) + len(dev.sentences) == n
    # disjoint partition of the original sentence objects
    assert sorted(map(id, train.sentences + dev.sentences)) == sorted(
        map(id, d.sentences)
    )


class TestSplit:
    def test_fractions(self):
        d = make_dataset([[("w", "w")]] * 100)
        train, dev = split_dataset(d, 0.10, 42)
        assert (len(train.sentences), len(dev.sentences)) == (90, 10)
        train, dev = split_dataset(d, 0.03, 42)
        assert (len(train.sentences), len(dev.sentences)) == (97, 3)

    def test_deterministic(self):
        d = make_dataset([[(f"w{i}", f"w{i}")] for i in range(50)])
        assert split_dataset(d, 0.2, 7) == split_dataset(d, 0.2, 7)

    def test_too_small(self):
        with pytest.raises(ValueError):
            split_dataset(make_dataset([[("a", "a")]]), 0.5, 0)

    def test_bad_fraction(self):
        d = make_dataset([[("a", "a")], [("b", "b")]])
        with pytest.raises(ValueError):
            split_dataset(d, 1.5, 0)


class TestConcat:
    def test_identity(self):
        a = make_dataset([[("a", "a")]])
        assert concat_datasets([a]) == a

    def test_additivity(self):
        a = make_dataset([[("a", "a")], [("b", "b")]])
        b = make_dataset([[("c", "c")]])
        assert concat_datasets([a, b]).word_count == a.word_count + b.word_count

    def test_neutral_element(self):
        a = make_dataset([[("a", "a")]])
        empty = Dataset("en", ())
        assert concat_datasets([empty, a]) == a

    def test_language_mismatch(self):
        a = make_dataset([[("a", "a")]], language="en")
        b = make_dataset([[("b", "b")]], language="de")
        with pytest.raises(ValueError, match="language"):
            concat_datasets([a, b])


class TestSummarize:
    def test_all_identity(self):
        s = summarize(make_dataset([[("a", "a"), ("b", "b")]]))
        assert s.pct_normalized == 0
        assert not s.has_split_merge

    def test_split_flag(self):
        s = summarize(make_dataset([[("dekeuken", "de keuken")]]))
        assert s.has_split_merge

    def test_merge_flag(self):
        s = summarize(make_dataset([[("some", "something"), ("thing", "")]]))
        assert s.has_split_merge

    def test_caps_flag(self):
        s = summarize(make_dataset([[("hello", "Hello")]]))
        assert s.has_caps_changes

    def test_twenty_tokens_three_changed(self):
        pairs = [("w", "w")] * 17 + [("a", "b"), ("c", "d"), ("e", "f")]
        assert summarize(make_dataset([pairs])).pct_normalized == pytest.approx(0.15)

    def test_empty_dataset(self):
        with pytest.raises(ValueError):
            summarize(Dataset("en", ()))

    def test_word_count(self):
        d = make_dataset([[("a", "a")], [("b", "b"), ("c", "c")]])
        assert summarize(d).word_count == 3

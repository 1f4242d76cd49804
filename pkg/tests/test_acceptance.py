"""Acceptance gate: one test per release criterion, each printing a
single [PASS]/[FAIL] line (run with -s to see them on success)."""

import itertools
import math
import random
import time
from contextlib import contextmanager

from normforge.align import char_distance
from normforge.corpus import (
    Dataset,
    Sentence,
    Token,
    parse_dataset,
    serialize_dataset,
)
from normforge.corrupt import CorruptionConfig, synthesize_dataset
from normforge.metrics import (
    EvaluationError,
    Predictions,
    ensemble,
    err,
    lai,
    mfr_predict,
    mfr_train,
    predictions_from_dataset,
)
from normforge.noise_profile import (
    MiscRule,
    NoiseProfile,
    RULE_NAMES,
    estimate_profile,
    load_profile,
    save_profile,
)
from normforge.seq2seq import (
    Seq2SeqExample,
    build_span_mask_example,
    build_word_examples,
    decode_ids,
    encode_ids,
    encode_text,
    read_examples_jsonl,
    splice_spans,
    write_examples_jsonl,
)
from oracles import err_oracle, make_distance_oracle, mfr_oracle


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


# ---------------------------------------------------------------- fuzz helpers

PLAIN_WORDS = [
    "hello", "world", "tomorrow", "running", "banana", "keyboard",
    "window", "stream", "purple", "mountain", "silver", "cloud",
]
APOSTROPHE_WORDS = ["don't", "can't", "won't", "isn't", "that's", "she's"]
ACCENTED_WORDS = ["café", "séance", "niño", "jalapeño", "über", "fiancé"]


def clean_corpus(n_words, rng):
    sentences = []
    vocabulary = PLAIN_WORDS + APOSTROPHE_WORDS + ACCENTED_WORDS
    total = 0
    while total < n_words:
        n = rng.randint(6, 14)
        sentences.append([rng.choice(vocabulary) for _ in range(n)])
        total += n
    return sentences, total


def fuzz_dataset(rng, max_sentences=5, max_tokens=6, alphabet="abcdé'x"):
    def word():
        return "".join(
            rng.choice(alphabet) for _ in range(rng.randint(1, 5))
        )

    sentences = []
    for _ in range(rng.randint(1, max_sentences)):
        tokens = []
        for t in range(rng.randint(1, max_tokens)):
            raw = word()
            kind = rng.random()
            if kind < 0.15 and t > 0:
                norm = ""  # merge continuation
            elif kind < 0.3:
                norm = word() + " " + word()  # split
            elif kind < 0.6:
                norm = word()
            else:
                norm = raw
            tokens.append(Token(raw, norm))
        sentences.append(Sentence(tuple(tokens)))
    return Dataset("en", tuple(sentences))


# ------------------------------------------------------------------- criteria


def test_closed_loop_statistics_recovery():
    with criterion("closed-loop statistics recovery (200k words, <60s)"):
        true_probs = {
            "strip_apostrophe": 0.468,
            "accent_removal": 0.163,
            "merge_words": 0.0599,
            "split_word": 0.000565,
        }
        sentences, _ = clean_corpus(200_000, random.Random(12345))
        profile = NoiseProfile(language="en", rule_probs=dict(true_probs))
        start = time.perf_counter()
        noisy = synthesize_dataset(sentences, profile, CorruptionConfig(seed=1))
        recovered = estimate_profile(noisy)
        elapsed = time.perf_counter() - start
        for rule, true in true_probs.items():
            tolerance = 0.0005 if rule == "split_word" else 0.015
            got = recovered.rule_probs[rule]
            assert abs(got - true) <= tolerance, (rule, got, true)
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_err_oracle_equivalence():
    with criterion("ERR matches brute-force oracle (1000 fuzzed pairs)"):
        rng = random.Random(7)
        checked = 0
        while checked < 1000:
            n = rng.randint(1, 12)
            pairs = [
                (rng.choice("abc"), rng.choice("abx")) for _ in range(n)
            ]
            if all(r == m for r, m in pairs):
                continue  # ERR undefined; exercised below
            gold = Dataset("en", (Sentence(tuple(Token(r, m) for r, m in pairs)),))
            pred = Predictions(tuple(rng.choice("abx") for _ in range(n)))
            expected = err_oracle(pairs, list(pred.norms))
            assert abs(err(gold, pred) - expected) <= 1e-12
            assert err(gold, lai(gold)) == 0.0
            assert err(gold, predictions_from_dataset(gold)) == 1.0
            checked += 1
        identity = Dataset("en", (Sentence((Token("a", "a"),)),))
        try:
            err(identity, Predictions(("a",)))
        except EvaluationError:
            pass
        else:
            raise AssertionError("ERR on an unnormalized corpus must raise")


def test_damerau_levenshtein_oracle():
    with criterion("alignment cost matches exhaustive oracle (3-letter, len<=6, <120s)"):
        oracle = make_distance_oracle()
        vocab = [
            "".join(w)
            for n in range(1, 7)
            for w in itertools.product("abc", repeat=n)
        ]
        start = time.perf_counter()
        for a in vocab:
            for b in vocab:
                assert char_distance(a, b) == oracle(a, b), (a, b)
        elapsed = time.perf_counter() - start
        assert elapsed < 120.0, f"took {elapsed:.1f}s"


def test_mfr_oracle():
    with criterion("MFR matches count-and-argmax oracle (1000 fuzzed corpora)"):
        rng = random.Random(11)
        for _ in range(1000):
            train_pairs = [
                (rng.choice("abcd"), rng.choice("wxyz"))
                for _ in range(rng.randint(1, 30))
            ]
            eval_words = [rng.choice("abcdq") for _ in range(rng.randint(1, 10))]
            train = Dataset(
                "en", (Sentence(tuple(Token(r, m) for r, m in train_pairs)),)
            )
            evaluation = Dataset(
                "en", (Sentence(tuple(Token(w, w) for w in eval_words)),)
            )
            pred = mfr_predict(mfr_train(train), evaluation)
            assert list(pred.norms) == mfr_oracle(train_pairs, eval_words)


def fuzz_candidates(rng, n_tokens):
    out = []
    for _ in range(n_tokens):
        k = rng.randint(1, 6)
        names = rng.sample(["aa", "ab", "ba", "bb", "ca", "cb", "cc", "dd"], k)
        logprobs = sorted((rng.uniform(-6, -0.01) for _ in range(k)), reverse=True)
        out.append(list(zip(names, logprobs)))
    return out


def test_ensemble_properties():
    with criterion("ensemble invariances (500 fuzzed) and worked example"):
        rng = random.Random(13)
        for _ in range(500):
            n_tokens = rng.randint(1, 6)
            models = [
                fuzz_candidates(rng, n_tokens) for _ in range(rng.randint(1, 4))
            ]
            combined = ensemble(models)
            # single-model identity: argmax is the top-scoring candidate
            for model in models:
                single = ensemble([model])
                for i, token_candidates in enumerate(model):
                    best = max(token_candidates, key=lambda cl: (cl[1], cl[0]))
                    assert single.norms[i] == best[0]
            # model-order permutation invariance
            shuffled = models[:]
            rng.shuffle(shuffled)
            assert ensemble(shuffled) == combined
            # global probability scaling leaves the argmax unchanged
            shift = math.log(rng.uniform(0.01, 0.99))
            scaled = [
                [[(c, lp + shift) for c, lp in tc] for tc in model]
                for model in models
            ]
            assert ensemble(scaled) == combined
        a = [[("you", math.log(0.6)), ("u", math.log(0.4))]]
        b = [[("u", math.log(0.7)), ("you", math.log(0.3))]]
        assert ensemble([a, b]).norms == ("u",)


def test_format_round_trips():
    with criterion("format round-trips (1000 fuzzed datasets, profile, JSONL)"):
        rng = random.Random(17)
        for _ in range(1000):
            dataset = fuzz_dataset(rng)
            data = serialize_dataset(dataset)
            assert parse_dataset(data, "en") == dataset
            assert serialize_dataset(parse_dataset(data, "en")) == data
        profile = NoiseProfile(
            language="sl",
            replacement_lexicon={"people": {"people": 0.603, "ppl": 0.397}},
            rule_probs={name: rng.random() for name in RULE_NAMES},
            misc_rules=[MiscRule("qu", "k", 0.02), MiscRule("ch", "x", 0.01)],
        )
        assert load_profile(save_profile(profile)) == profile
        examples = [
            Seq2SeqExample(f"input {i} é", f"target {i}") for i in range(50)
        ]
        lines = list(write_examples_jsonl(examples))
        assert list(read_examples_jsonl(lines)) == examples


def test_example_builder_laws():
    with criterion("example-builder laws (10000 span-mask fuzz, 'A'->68)"):
        rng = random.Random(19)
        alphabet = "abc défg.! x"
        for _ in range(200):
            sentence = Sentence(
                tuple(
                    Token(w, w)
                    for w in (
                        "".join(rng.choice("abcdé") for _ in range(rng.randint(1, 6)))
                        for _ in range(rng.randint(1, 8))
                    )
                )
            )
            examples = build_word_examples(sentence)
            assert len(examples) == len(sentence.tokens)
            raw_text = " ".join(t.raw for t in sentence.tokens)
            for example in examples:
                stripped = example.input_text.replace("<extra_id_0>", "").replace(
                    "<extra_id_1>", ""
                )
                assert stripped == raw_text
        for _ in range(10_000):
            text = "".join(
                rng.choice(alphabet) for _ in range(rng.randint(2, 80))
            )
            example = build_span_mask_example(text, rng)
            assert splice_spans(example) == text
        assert encode_text("A") == [68]
        example = Seq2SeqExample("héllo", "world")
        assert decode_ids(*encode_ids(example)) == example


def test_determinism_under_parallelism():
    with criterion("synthesis deterministic in seed, invariant to thread count"):
        sentences, _ = clean_corpus(20_000, random.Random(23))
        profile = NoiseProfile(
            language="en",
            rule_probs={
                "strip_apostrophe": 0.3,
                "accent_removal": 0.2,
                "typo_per_char": 0.05,
                "merge_words": 0.1,
                "split_word": 0.02,
            },
        )
        outputs = {}
        for seed in (1, 2):
            for threads in (1, 8):
                config = CorruptionConfig(seed=seed, threads=threads)
                outputs[(seed, threads)] = serialize_dataset(
                    synthesize_dataset(sentences, profile, config)
                )
        assert outputs[(1, 1)] == outputs[(1, 8)]
        assert outputs[(2, 1)] == outputs[(2, 8)]
        assert outputs[(1, 1)] != outputs[(2, 1)]


def test_throughput():
    with criterion("synthesis throughput >= 50000 words/s single-threaded"):
        profile = NoiseProfile(
            language="en",
            replacement_lexicon={
                "hello": {"helo": 0.5, "hello": 0.5},
                "tomorrow": {"tmrw": 0.3, "tomorrow": 0.7},
            },
            rule_probs={name: 0.02 for name in RULE_NAMES},
            misc_rules=[MiscRule("qu", "k", 0.01)],
        )
        profile.rule_probs["typo_per_char"] = 0.01
        sentences, n_words = clean_corpus(200_000, random.Random(29))
        start = time.perf_counter()
        synthesize_dataset(sentences, profile, CorruptionConfig(seed=1, threads=1))
        elapsed = time.perf_counter() - start
        rate = n_words / elapsed
        print(f"  measured throughput: {rate:,.0f} words/s")
        assert rate >= 50_000, f"only {rate:,.0f} words/s"

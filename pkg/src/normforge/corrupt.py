"""Seeded corruption engine: apply a NoiseProfile to clean tokenized text.

The output is an aligned dataset whose raw side is the corrupted text and
whose norm side is the original clean text.  Rules fire in a fixed order
and each sentence draws from its own RNG derived from (seed, sentence
index), so output never depends on scheduling.
"""

from __future__ import annotations

import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from normforge.corpus import Dataset, Sentence, Token
from normforge.noise_profile import (
    APOSTROPHES,
    NoiseProfile,
    collapse_reduplication,
    is_vowel,
)

RULE_ORDER_TAG = "v1"

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, index: int) -> int:
    """splitmix64-style mix of the run seed and a sentence index."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class CorruptionConfig:
    seed: int = 0
    rule_order: str = RULE_ORDER_TAG
    max_rules_per_word: int = 2
    threads: int = 1


@dataclass(frozen=True)
class WordCorruption:
    raw_tokens: tuple[str, ...]
    norm: str
    applied_rules: tuple[str, ...]


def _sample_replacement(dist: dict[str, float], rng: random.Random) -> str:
    x = rng.random()
    acc = 0.0
    last = None
    for form, p in dist.items():
        acc += p
        last = form
        if x < acc:
            return form
    return last  # guard against rounding at the distribution tail


def _typo_char(word: str, i: int, profile: NoiseProfile, rng: random.Random) -> tuple[str, int]:
    """One typo event at position i; returns (replacement text, extra skip)."""
    ch = word[i]
    has_next = i + 1 < len(word)
    choice = rng.randrange(4 if has_next else 3)
    if choice == 0:  # skip the character
        return "", 0
    if choice == 1:  # insert an adjacent character
        return ch + _adjacent_char(ch, profile, rng), 0
    if choice == 2:  # substitute by an adjacent character
        return _adjacent_char(ch, profile, rng), 0
    return word[i + 1] + ch, 1  # transpose with the next character


def _adjacent_char(ch: str, profile: NoiseProfile, rng: random.Random) -> str:
    neighbors = profile.keyboard.neighbors(ch)
    if not neighbors:
        return rng.choice(_LETTERS)
    out = neighbors[rng.randrange(len(neighbors))]
    return out.upper() if ch.isupper() else out


def corrupt_word(
    word: str, profile: NoiseProfile, rng: random.Random, max_rules: int = 2
) -> WordCorruption:
    """Corrupt one word.  The norm side is always the input word.

    A lexicon replacement suppresses all character-level rules; otherwise
    the character rules fire in a fixed order, at most ``max_rules`` of
    them per word.
    """
    if any(c.isspace() for c in word):
        raise ValueError(f"word contains whitespace: {word!r}")
    applied: list[str] = []
    probs = profile.rule_probs

    dist = profile.replacement_lexicon.get(word)
    if dist is not None:
        replacement = _sample_replacement(dist, rng)
        if replacement != word:
            return WordCorruption((replacement,), word, ("lexicon",))

    current = word
    fired = 0
    for rule in profile.misc_rules:
        if fired >= max_rules:
            break
        if rule.probability <= 0.0:
            continue
        if rule.regex:
            pattern = re.compile(rule.pattern)
            if not pattern.search(current):
                continue
            if rng.random() < rule.probability:
                current = pattern.sub(rule.replacement, current)
                applied.append(f"misc:{rule.pattern}")
                fired += 1
        else:
            if rule.pattern not in current:
                continue
            if rng.random() < rule.probability:
                current = current.replace(rule.pattern, rule.replacement)
                applied.append(f"misc:{rule.pattern}")
                fired += 1

    p = probs["accent_removal"]
    if fired < max_rules and p > 0.0 and any(c in profile.accent_map for c in current):
        changed = False
        out = []
        for c in current:
            if c in profile.accent_map and rng.random() < p:
                out.append(profile.accent_map[c])
                changed = True
            else:
                out.append(c)
        if changed:
            current = "".join(out)
            applied.append("accent_removal")
            fired += 1

    p = probs["decapitalize_first"]
    if fired < max_rules and p > 0.0 and current and current[0].isupper():
        if rng.random() < p:
            current = current[0].lower() + current[1:]
            applied.append("decapitalize_first")
            fired += 1

    p = probs["strip_apostrophe"]
    if fired < max_rules and p > 0.0 and any(c in APOSTROPHES for c in current):
        if rng.random() < p:
            current = "".join(c for c in current if c not in APOSTROPHES)
            applied.append("strip_apostrophe")
            fired += 1

    p = probs["indonesian_plural"]
    if fired < max_rules and p > 0.0:
        collapsed = collapse_reduplication(current)
        if collapsed is not None and rng.random() < p:
            current = collapsed
            applied.append("indonesian_plural")
            fired += 1

    p = probs["drop_vowels"]
    if fired < max_rules and p > 0.0 and any(
        is_vowel(c, profile.accent_map) for c in current[1:]
    ):
        if rng.random() < p:
            current = current[0] + "".join(
                c for c in current[1:] if not is_vowel(c, profile.accent_map)
            )
            applied.append("drop_vowels")
            fired += 1

    p = probs["truncate_prefix"]
    if fired < max_rules and p > 0.0 and len(current) >= 3:
        if rng.random() < p:
            current = current[: rng.randint(2, len(current) - 1)]
            applied.append("truncate_prefix")
            fired += 1

    p = probs["typo_per_char"]
    if fired < max_rules and p > 0.0 and current:
        out = []
        i = 0
        changed = False
        while i < len(current):
            if rng.random() < p:
                piece, skip = _typo_char(current, i, profile, rng)
                out.append(piece)
                i += 1 + skip
                changed = True
            else:
                out.append(current[i])
                i += 1
        if changed:
            candidate = "".join(out)
            if candidate:
                current = candidate
                applied.append("typo_per_char")
                fired += 1

    p = probs["repeat_char"]
    if fired < max_rules and p > 0.0 and current:
        if rng.random() < p:
            i = rng.randrange(len(current))
            current = current[: i + 1] + current[i] * rng.randint(1, 3) + current[i + 1 :]
            applied.append("repeat_char")
            fired += 1

    return WordCorruption((current,), word, tuple(applied))


def corrupt_sentence(
    words: list[str], profile: NoiseProfile, rng: random.Random, max_rules: int = 2
) -> Sentence:
    """Corrupt one tokenized sentence into an aligned Sentence.

    Adjacent pairs may merge (raw concatenation, two-word norm); single
    words may split (first part carries the norm, the rest empty norms);
    everything else goes through corrupt_word.
    """
    if not words:
        raise ValueError("sentence must contain at least one word")
    p_merge = profile.rule_probs["merge_words"]
    p_split = profile.rule_probs["split_word"]
    tokens: list[Token] = []
    i = 0
    n = len(words)
    while i < n:
        if i < n - 1 and p_merge > 0.0 and rng.random() < p_merge:
            tokens.append(Token(words[i] + words[i + 1], f"{words[i]} {words[i + 1]}"))
            i += 2
            continue
        word = words[i]
        i += 1
        if len(word) >= 2 and p_split > 0.0 and rng.random() < p_split:
            boundary = rng.randint(1, len(word) - 1)
            tokens.append(Token(word[:boundary], word))
            tokens.append(Token(word[boundary:], ""))
            continue
        corruption = corrupt_word(word, profile, rng, max_rules)
        tokens.append(Token(corruption.raw_tokens[0], corruption.norm))
        for part in corruption.raw_tokens[1:]:
            tokens.append(Token(part, ""))
    return Sentence(tuple(tokens))


def _corrupt_indexed(
    args: tuple[int, list[str]], profile: NoiseProfile, config: CorruptionConfig
) -> Sentence:
    index, words = args
    rng = random.Random(derive_seed(config.seed, index))
    return corrupt_sentence(words, profile, rng, config.max_rules_per_word)


def synthesize(
    clean: Iterable[list[str]],
    profile: NoiseProfile,
    config: CorruptionConfig | None = None,
) -> Iterator[Sentence]:
    """Corrupt a stream of tokenized sentences, order preserved.

    Each sentence uses an RNG seeded from (config.seed, sentence index), so
    the output is byte-identical for any thread count.
    """
    config = config or CorruptionConfig()
    indexed = enumerate(clean)
    if config.threads <= 1:
        for item in indexed:
            yield _corrupt_indexed(item, profile, config)
        return
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        yield from pool.map(
            lambda item: _corrupt_indexed(item, profile, config), indexed, chunksize=64
        )


def synthesize_dataset(
    clean: Iterable[list[str]],
    profile: NoiseProfile,
    config: CorruptionConfig | None = None,
) -> Dataset:
    return Dataset(profile.language, tuple(synthesize(clean, profile, config)))

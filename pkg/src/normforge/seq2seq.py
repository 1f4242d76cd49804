"""Model-facing training examples.

Per-word examples mark the word to normalize with a sentinel pair; span
mask examples replace byte spans with sentinels for denoising
pre-training.  Both serialize to JSONL and encode to byte-level id
sequences.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from normforge.corpus import Sentence


class SentinelCollisionError(ValueError):
    """Corpus text contains a configured sentinel literal."""


def _default_sentinels() -> tuple[str, ...]:
    return tuple(f"<extra_id_{i}>" for i in range(100))


@dataclass(frozen=True)
class EncodingConfig:
    sentinel_literals: tuple[str, ...] = field(default_factory=_default_sentinels)
    byte_id_offset: int = 3
    sentinel_id_base: int = 259
    eos_id: int = 1
    pad_id: int = 0
    unk_id: int = 2

    def sentinel(self, i: int) -> str:
        return self.sentinel_literals[i]

    def sentinel_id(self, i: int) -> int:
        return self.sentinel_id_base + i

    @property
    def vocab_size(self) -> int:
        return self.sentinel_id_base + len(self.sentinel_literals)

    def check_text(self, text: str) -> None:
        for literal in self.sentinel_literals:
            if literal in text:
                raise SentinelCollisionError(
                    f"text contains sentinel literal {literal!r}"
                )


@dataclass(frozen=True)
class Seq2SeqExample:
    input_text: str
    target_text: str


DEFAULT_CONFIG = EncodingConfig()


def build_word_examples(
    sentence: Sentence, config: EncodingConfig = DEFAULT_CONFIG
) -> list[Seq2SeqExample]:
    """One example per raw token: the space-joined raw sentence with the
    token in question wrapped in sentinel-0/sentinel-1, targeting its norm.
    """
    raws = [t.raw for t in sentence.tokens]
    for raw in raws:
        config.check_text(raw)
    s0, s1 = config.sentinel(0), config.sentinel(1)
    examples = []
    for i, token in enumerate(sentence.tokens):
        before = " ".join(raws[:i])
        after = " ".join(raws[i + 1 :])
        input_text = (
            (before + " " if before else "")
            + s0
            + token.raw
            + s1
            + (" " + after if after else "")
        )
        examples.append(Seq2SeqExample(input_text, token.norm))
    return examples


def build_span_mask_example(
    text: str,
    rng: random.Random,
    mean_span: int = 20,
    mask_ratio: float = 0.15,
    config: EncodingConfig = DEFAULT_CONFIG,
) -> Seq2SeqExample:
    """Mask non-overlapping, non-adjacent spans of roughly mean_span bytes.

    Spans are drawn until the masked byte total reaches the mask_ratio
    target (within half a mean span either way); at least one span is
    always placed.  The input replaces each span with the next sentinel;
    the target lists sentinel+span pairs terminated by one extra sentinel.
    Span boundaries snap to character boundaries, so on multi-byte text a
    span may run a few bytes over its drawn length.
    """
    config.check_text(text)
    n = len(text)
    if n < 2:
        raise ValueError("text too short to host a masked span")
    byte_len = [len(ch.encode("utf-8")) for ch in text]
    total_bytes = sum(byte_len)
    target = max(1, round(mask_ratio * total_bytes))
    tol = mean_span // 2

    spans: list[tuple[int, int]] = []  # [start_char, end_char)
    masked = 0
    while not spans or masked < target - tol:
        want = rng.randint(max(1, mean_span - 5), mean_span + 5)
        want = max(1, min(want, target + tol - masked, total_bytes))
        placement = _place_span(text, byte_len, spans, want, rng)
        if placement is None:
            break
        start, end, got = placement
        spans.append((start, end))
        masked += got

    spans.sort()
    input_parts: list[str] = []
    target_parts: list[str] = []
    cursor = 0
    for k, (start, end) in enumerate(spans):
        input_parts.append(text[cursor:start])
        input_parts.append(config.sentinel(k))
        target_parts.append(config.sentinel(k))
        target_parts.append(text[start:end])
        cursor = end
    input_parts.append(text[cursor:])
    target_parts.append(config.sentinel(len(spans)))
    return Seq2SeqExample("".join(input_parts), "".join(target_parts))


def _place_span(
    text: str,
    byte_len: list[int],
    spans: list[tuple[int, int]],
    want_bytes: int,
    rng: random.Random,
) -> tuple[int, int, int] | None:
    """Pick a random start for a span of ~want_bytes that neither overlaps
    nor touches an existing span.  Returns (start, end, actual_bytes)."""
    n = len(text)
    blocked = [False] * (n + 1)
    for a, b in spans:
        for i in range(max(0, a - 1), min(n, b + 1)):
            blocked[i] = True
    candidates = []
    for start in range(n):
        if blocked[start]:
            continue
        got = 0
        end = start
        while end < n and not blocked[end] and got < want_bytes:
            got += byte_len[end]
            end += 1
        if got >= want_bytes:
            candidates.append((start, end, got))
    if not candidates:
        return None
    return candidates[rng.randrange(len(candidates))]


def splice_spans(example: Seq2SeqExample, config: EncodingConfig = DEFAULT_CONFIG) -> str:
    """Reconstruct the original text of a span-mask example."""
    target = example.target_text
    pieces: dict[str, str] = {}
    order: list[tuple[int, str]] = []
    for i, literal in enumerate(config.sentinel_literals):
        pos = target.find(literal)
        if pos >= 0:
            order.append((pos, literal))
    order.sort()
    for (pos, literal), nxt in zip(order, order[1:] + [(len(target), "")]):
        pieces[literal] = target[pos + len(literal) : nxt[0]]
    text = example.input_text
    for literal, span in pieces.items():
        text = text.replace(literal, span)
    return text


def _sentinel_pattern(config: EncodingConfig) -> re.Pattern[str]:
    return re.compile(
        "(" + "|".join(re.escape(s) for s in config.sentinel_literals) + ")"
    )


def encode_text(text: str, config: EncodingConfig = DEFAULT_CONFIG) -> list[int]:
    """UTF-8 bytes shifted by the byte offset; sentinel literals to their ids."""
    ids: list[int] = []
    for piece in _sentinel_pattern(config).split(text):
        if piece in config.sentinel_literals:
            ids.append(config.sentinel_id(config.sentinel_literals.index(piece)))
        else:
            ids.extend(b + config.byte_id_offset for b in piece.encode("utf-8"))
    return ids


def decode_text(ids: Iterable[int], config: EncodingConfig = DEFAULT_CONFIG) -> str:
    parts: list[str] = []
    buf = bytearray()
    for i in ids:
        if i in (config.eos_id, config.pad_id):
            continue
        if i >= config.sentinel_id_base:
            if buf:
                parts.append(buf.decode("utf-8"))
                buf = bytearray()
            parts.append(config.sentinel(i - config.sentinel_id_base))
        else:
            buf.append(i - config.byte_id_offset)
    if buf:
        parts.append(buf.decode("utf-8"))
    return "".join(parts)


def encode_ids(
    example: Seq2SeqExample, config: EncodingConfig = DEFAULT_CONFIG
) -> tuple[list[int], list[int]]:
    """Encode an example; the target is terminated with the EOS id."""
    input_ids = encode_text(example.input_text, config)
    target_ids = encode_text(example.target_text, config) + [config.eos_id]
    return input_ids, target_ids


def decode_ids(
    input_ids: Iterable[int],
    target_ids: Iterable[int],
    config: EncodingConfig = DEFAULT_CONFIG,
) -> Seq2SeqExample:
    return Seq2SeqExample(decode_text(input_ids, config), decode_text(target_ids, config))


class _CyclingSource:
    """Iterator that replays its consumed items once exhausted."""

    def __init__(self, items: Iterable[Seq2SeqExample]):
        self._it = iter(items)
        self._cache: list[Seq2SeqExample] = []
        self._pos = 0
        self.exhausted = False

    def next(self) -> Seq2SeqExample | None:
        if not self.exhausted:
            try:
                item = next(self._it)
            except StopIteration:
                self.exhausted = True
            else:
                self._cache.append(item)
                return item
        if not self._cache:
            return None
        item = self._cache[self._pos % len(self._cache)]
        self._pos += 1
        return item


def mix_streams(
    authentic: Iterable[Seq2SeqExample],
    synthetic: Iterable[Seq2SeqExample] | None,
    seed: int,
) -> Iterator[Seq2SeqExample]:
    """Interleave two example streams with a seeded fair coin per item.

    The shorter stream cycles until the longer one is exhausted.  With
    synthetic=None the authentic stream passes through unchanged.
    """
    if synthetic is None:
        yield from authentic
        return
    sources = (_CyclingSource(authentic), _CyclingSource(synthetic))
    rng = random.Random(seed)
    yielded = False
    while not (sources[0].exhausted and sources[1].exhausted):
        pick = 0 if rng.random() < 0.5 else 1
        item = sources[pick].next()
        if item is None:
            item = sources[1 - pick].next()
        if item is None:
            break
        yielded = True
        yield item
    if not yielded:
        raise ValueError("both example streams are empty")


def write_examples_jsonl(
    examples: Iterable[Seq2SeqExample],
    with_ids: bool = False,
    config: EncodingConfig = DEFAULT_CONFIG,
) -> Iterator[str]:
    """Render examples as JSONL lines."""
    for example in examples:
        record: dict = {"input": example.input_text, "target": example.target_text}
        if with_ids:
            input_ids, target_ids = encode_ids(example, config)
            record["input_ids"] = input_ids
            record["target_ids"] = target_ids
        yield json.dumps(record, ensure_ascii=False)


def read_examples_jsonl(lines: Iterable[str]) -> Iterator[Seq2SeqExample]:
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            yield Seq2SeqExample(record["input"], record["target"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"examples line {lineno}: {exc}") from exc

"""Word-aligned normalization corpora: data model and TSV round-tripping.

The corpus format is one "raw<TAB>norm" pair per line, UTF-8, with a blank
line terminating each sentence.  A token whose norm contains spaces carries
a 1->n normalization; a token with an empty norm is a merge continuation
whose content lives on the nearest preceding token.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field


class CorpusFormatError(ValueError):
    """Raised for malformed corpus files; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Token:
    raw: str
    norm: str

    def is_identity(self) -> bool:
        return self.raw == self.norm

    def is_merge_continuation(self) -> bool:
        return self.norm == ""


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Dataset:
    language: str
    sentences: tuple[Sentence, ...]

    @property
    def word_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def tokens(self):
        for sentence in self.sentences:
            yield from sentence.tokens


@dataclass(frozen=True)
class CorpusSummary:
    word_count: int
    pct_normalized: float
    has_split_merge: bool
    has_caps_changes: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "word_count": self.word_count,
                "pct_normalized": self.pct_normalized,
                "has_split_merge": self.has_split_merge,
                "has_caps_changes": self.has_caps_changes,
            }
        )


def _check_field(value: str, name: str, line: int) -> None:
    if "\t" in value or "\n" in value:
        raise CorpusFormatError(f"{name} field contains TAB/newline", line)


def parse_dataset(data: bytes, language: str) -> Dataset:
    """Parse corpus TSV bytes into a Dataset.

    Blank lines terminate sentences; a trailing blank line is optional.
    Errors (bad UTF-8, wrong column count, empty raw field) are reported
    with their 1-based line number.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"input is not valid UTF-8: {exc}") from exc

    sentences: list[Sentence] = []
    current: list[Token] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line == "":
            if current:
                sentences.append(Sentence(tuple(current)))
                current = []
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusFormatError(
                f"expected exactly one TAB, found {len(parts) - 1}", lineno
            )
        raw, norm = parts
        if raw == "":
            raise CorpusFormatError("empty raw field", lineno)
        if norm != norm.strip(" ") or "  " in norm:
            raise CorpusFormatError("norm has leading/trailing/double spaces", lineno)
        if not current and norm == "":
            warnings.warn(
                f"line {lineno}: sentence starts with an empty norm "
                "(standalone deletion is not representable; treating as-is)",
                stacklevel=2,
            )
        current.append(Token(raw, norm))
    if current:
        sentences.append(Sentence(tuple(current)))
    return Dataset(language, tuple(sentences))


def serialize_dataset(dataset: Dataset) -> bytes:
    """Serialize to corpus TSV; exactly one blank line after every sentence."""
    pieces: list[str] = []
    for sentence in dataset.sentences:
        for token in sentence.tokens:
            pieces.append(f"{token.raw}\t{token.norm}\n")
        pieces.append("\n")
    return "".join(pieces).encode("utf-8")


def split_dataset(
    dataset: Dataset, dev_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Split at sentence granularity into (train, dev), order preserved.

    The dev part gets round(dev_fraction * n) sentences, at least 1.
    Deterministic for a fixed seed.
    """
    if not 0.0 < dev_fraction < 1.0:
        raise ValueError(f"dev_fraction must be in (0, 1), got {dev_fraction}")
    n = len(dataset.sentences)
    if n < 2:
        raise ValueError(f"cannot split a dataset with {n} sentence(s)")
    n_dev = max(1, round(dev_fraction * n))
    rng = random.Random(seed)
    dev_indices = set(rng.sample(range(n), n_dev))
    train = tuple(s for i, s in enumerate(dataset.sentences) if i not in dev_indices)
    dev = tuple(s for i, s in enumerate(dataset.sentences) if i in dev_indices)
    return (
        Dataset(dataset.language, train),
        Dataset(dataset.language, dev),
    )


def concat_datasets(datasets: list[Dataset]) -> Dataset:
    """Concatenate datasets of the same language in argument order."""
    if not datasets:
        raise ValueError("need at least one dataset")
    languages = {d.language for d in datasets}
    if len(languages) > 1:
        raise ValueError(f"language mismatch: {sorted(languages)}")
    sentences: tuple[Sentence, ...] = ()
    for d in datasets:
        sentences += d.sentences
    return Dataset(datasets[0].language, sentences)


def summarize(dataset: Dataset) -> CorpusSummary:
    if not dataset.sentences:
        raise ValueError("cannot summarize an empty dataset")
    word_count = 0
    normalized = 0
    has_split_merge = False
    has_caps = False
    for token in dataset.tokens():
        word_count += 1
        if token.raw != token.norm:
            normalized += 1
            if token.raw.lower() == token.norm.lower() and token.norm:
                has_caps = True
        if " " in token.norm or token.norm == "":
            has_split_merge = True
    return CorpusSummary(
        word_count=word_count,
        pct_normalized=normalized / word_count,
        has_split_merge=has_split_merge,
        has_caps_changes=has_caps,
    )

"""Cleaning and tokenizing raw encyclopedia-dump text.

Produces the clean side of synthetic data generation: drop short lines and
heading-like lines, split lines into sentences with a documented rule, and
tokenize with a Twitter-aware regex that keeps URLs, @mentions, #hashtags
and emoticons intact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

MIN_LINE_LENGTH = 32


@dataclass
class CleanStats:
    """Diagnostics from clean_lines."""

    kept: int = 0
    dropped_short: int = 0
    dropped_colon: int = 0
    dropped_invalid_utf8: int = 0


def clean_lines(
    stream: Iterable[bytes], stats: CleanStats | None = None
) -> Iterator[str]:
    """Yield lines that are at least 32 characters long (Unicode scalar
    values, after stripping trailing whitespace) and do not end with a colon.

    Lines that are not valid UTF-8 are skipped and counted in ``stats``.
    """
    if stats is None:
        stats = CleanStats()
    for raw_line in stream:
        try:
            line = raw_line.decode("utf-8")
        except UnicodeDecodeError:
            stats.dropped_invalid_utf8 += 1
            continue
        line = line.rstrip()
        if line.endswith(":"):
            stats.dropped_colon += 1
            continue
        if len(line) < MIN_LINE_LENGTH:
            stats.dropped_short += 1
            continue
        stats.kept += 1
        yield line


# Sentence boundary: a .?! run followed by whitespace and an uppercase
# letter or digit, optionally behind an opening quote/paren.  Treating
# digits as sentence starters causes the known false split "Version 2. 0".
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.?!])\s+(?=[\"'“‘(]?[A-ZÀ-ÖØ-Þ0-9])")


def segment_sentences(line: str) -> list[str]:
    """Split a clean line into sentences with the documented rule."""
    segments = [s for s in _SENTENCE_BOUNDARY.split(line) if s.strip()]
    return segments if segments else []


def _regex_or(*items: str) -> str:
    return "(?:" + "|".join(items) + ")"


_URL = r"(?:https?://|www\.)[^\s<>]+"
_EMAIL = r"[\w.+-]+@[\w-]+\.[\w.-]+"
_MENTION = r"@\w+"
_HASHTAG = r"#\w+"

# Fixed emoticon inventory; western style plus a few common variants.
EMOTICONS = (
    ">:(", ">:)", ":-)", ":-(", ":-D", ":-P", ":-p", ":-/", ":-\\", ":-|",
    ":-]", ":-[", ":-*", ":-O", ":-o", ":')", ":'(", ":)", ":(", ":D", ":P",
    ":p", ":/", ":|", ":]", ":[", ":*", ":O", ":o", ";-)", ";)", ";-P", ";P",
    "=)", "=(", "=D", "=P", "=/", "=|", "<3", "</3", "^_^", "-_-", "o_O",
    "O_o", "o.O", "O.o", "x_x", "X_X", "T_T", ":3", "xD", "XD",
)
_EMOTICON = _regex_or(*(re.escape(e) for e in sorted(EMOTICONS, key=len, reverse=True)))

_NUMBER = r"[+-]?\d+(?:[.,:]\d+)*%?"
# Words may contain internal apostrophes and hyphens ("don't", "laki-laki").
_WORD = r"\w+(?:['’-]\w+)*"
_ANY_CHAR = r"\S"

_TOKEN = re.compile(
    _regex_or(_URL, _EMAIL, _MENTION, _HASHTAG, _EMOTICON, _NUMBER, _WORD, _ANY_CHAR),
    re.UNICODE,
)


def tokenize(sentence: str) -> list[str]:
    """Tokenize one sentence.

    URLs, emails, @mentions, #hashtags and emoticons stay single tokens;
    other punctuation is split off.  Whitespace-only input gives [].
    """
    return _TOKEN.findall(sentence)


def tokenize_stream(stream: Iterable[bytes]) -> Iterator[list[str]]:
    """Full pipeline: clean, segment, tokenize; one token list per sentence."""
    for line in clean_lines(stream):
        for sentence in segment_sentences(line):
            tokens = tokenize(sentence)
            if tokens:
                yield tokens

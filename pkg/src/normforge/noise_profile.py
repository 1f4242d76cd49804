"""Learning corruption statistics from annotated normalization corpora.

A NoiseProfile holds, per language, the replacement lexicon distributions
and the per-rule probabilities (plus keyboard adjacency and accent tables)
that the corruption engine inverts to synthesize noisy data.
"""

from __future__ import annotations

import json
import unicodedata
import warnings
from dataclasses import dataclass, field

from normforge.align import EditScript, char_align
from normforge.corpus import Dataset, Sentence, Token

RULE_NAMES = (
    "accent_removal",
    "decapitalize_first",
    "strip_apostrophe",
    "typo_per_char",
    "split_word",
    "merge_words",
    "indonesian_plural",
    "drop_vowels",
    "truncate_prefix",
    "repeat_char",
)

EDIT_CATEGORIES = (
    "accent_removal",
    "decapitalize_first",
    "strip_apostrophe",
    "repeat_char",
    "drop_vowels",
    "typo",
    "other",
)

APOSTROPHES = frozenset("'’ʼ")
BASE_VOWELS = frozenset("aeiou")

PROFILE_SCHEMA_VERSION = 1


class ProfileError(ValueError):
    """Schema or invariant violation in a noise profile."""


def _build_accent_map() -> dict[str, str]:
    table: dict[str, str] = {}
    for code in range(0xC0, 0x250):
        ch = chr(code)
        decomp = unicodedata.normalize("NFD", ch)
        if len(decomp) < 2:
            continue
        base = decomp[0]
        if base.isalpha() and all(unicodedata.combining(c) for c in decomp[1:]):
            table[ch] = base
    return table


DEFAULT_ACCENT_MAP: dict[str, str] = _build_accent_map()


def is_vowel(ch: str, accent_map: dict[str, str] | None = None) -> bool:
    base = (accent_map or DEFAULT_ACCENT_MAP).get(ch, ch).lower()
    return base in BASE_VOWELS


@dataclass(frozen=True)
class KeyboardLayout:
    adjacency: dict[str, frozenset[str]]

    def __post_init__(self):
        for ch, neighbors in self.adjacency.items():
            for n in neighbors:
                if ch not in self.adjacency.get(n, frozenset()):
                    raise ProfileError(f"keyboard.{ch}: adjacency not symmetric with {n!r}")

    def neighbors(self, ch: str) -> tuple[str, ...]:
        return tuple(sorted(self.adjacency.get(ch.lower(), frozenset())))

    def are_neighbors(self, a: str, b: str) -> bool:
        return b.lower() in self.adjacency.get(a.lower(), frozenset())


def _build_qwerty() -> KeyboardLayout:
    rows = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]
    offsets = [0.0, 0.25, 0.75]
    adjacency: dict[str, set[str]] = {}
    for r, row in enumerate(rows):
        for i, ch in enumerate(row):
            adjacency.setdefault(ch, set())
            if i + 1 < len(row):
                adjacency[ch].add(row[i + 1])
                adjacency.setdefault(row[i + 1], set()).add(ch)
            for r2 in (r - 1, r + 1):
                if not 0 <= r2 < len(rows):
                    continue
                for j, other in enumerate(rows[r2]):
                    if abs((j + offsets[r2]) - (i + offsets[r])) < 1.0:
                        adjacency[ch].add(other)
                        adjacency.setdefault(other, set()).add(ch)
    return KeyboardLayout({k: frozenset(v) for k, v in adjacency.items()})


DEFAULT_KEYBOARD: KeyboardLayout = _build_qwerty()


@dataclass(frozen=True)
class MiscRule:
    """A literal or regex rewrite applied with the given probability."""

    pattern: str
    replacement: str
    probability: float
    regex: bool = False


@dataclass
class NoiseProfile:
    language: str
    replacement_lexicon: dict[str, dict[str, float]] = field(default_factory=dict)
    rule_probs: dict[str, float] = field(default_factory=dict)
    misc_rules: list[MiscRule] = field(default_factory=list)
    keyboard: KeyboardLayout = field(default_factory=lambda: DEFAULT_KEYBOARD)
    accent_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_ACCENT_MAP))

    def __post_init__(self):
        for rule in RULE_NAMES:
            self.rule_probs.setdefault(rule, 0.0)

    def validate(self) -> None:
        for rule, p in self.rule_probs.items():
            if rule not in RULE_NAMES:
                raise ProfileError(f"rule_probs.{rule}: unknown rule")
            if not 0.0 <= p <= 1.0:
                raise ProfileError(f"rule_probs.{rule}: probability {p} out of range")
        for i, rule in enumerate(self.misc_rules):
            if not 0.0 <= rule.probability <= 1.0:
                raise ProfileError(
                    f"misc_rules[{i}].probability: {rule.probability} out of range"
                )
        for word, dist in self.replacement_lexicon.items():
            total = 0.0
            for form, p in dist.items():
                if not 0.0 <= p <= 1.0:
                    raise ProfileError(
                        f"replacement_lexicon.{word}.{form}: probability {p} out of range"
                    )
                total += p
            if abs(total - 1.0) > 1e-9:
                raise ProfileError(
                    f"replacement_lexicon.{word}: probabilities sum to {total}, not 1"
                )


@dataclass
class RuleCounts:
    """Per-rule (applications, opportunities) tallies."""

    applications: dict[str, int] = field(default_factory=lambda: {r: 0 for r in RULE_NAMES})
    opportunities: dict[str, int] = field(default_factory=lambda: {r: 0 for r in RULE_NAMES})

    def probability(self, rule: str) -> float:
        opp = self.opportunities[rule]
        return self.applications[rule] / opp if opp else 0.0

    def merge(self, other: "RuleCounts") -> None:
        for rule in RULE_NAMES:
            self.applications[rule] += other.applications[rule]
            self.opportunities[rule] += other.opportunities[rule]


def classify_edits(
    script: EditScript,
    raw: str,
    norm: str,
    accent_map: dict[str, str] | None = None,
    keyboard: KeyboardLayout | None = None,
) -> dict[str, int]:
    """Assign each non-match op of a word alignment to one edit category.

    Categories are checked in a fixed priority order: accent removal, first
    letter decapitalization, apostrophe stripping, character repetition,
    vowel dropping, typo, other.
    """
    accent_map = accent_map if accent_map is not None else DEFAULT_ACCENT_MAP
    keyboard = keyboard if keyboard is not None else DEFAULT_KEYBOARD
    if script.replay(norm) != raw:
        raise ValueError(f"edit script does not map {norm!r} to {raw!r}")
    counts = {cat: 0 for cat in EDIT_CATEGORIES}
    for op in script.ops:
        kind = op.kind
        if kind == "match":
            continue
        if (
            kind == "substitute"
            and accent_map.get(op.norm_char or "") == op.raw_char
        ):
            counts["accent_removal"] += 1
        elif (
            kind == "substitute"
            and op.position == 0
            and (op.norm_char or "").lower() == op.raw_char
            and op.norm_char != op.raw_char
        ):
            counts["decapitalize_first"] += 1
        elif kind == "delete" and op.norm_char in APOSTROPHES:
            counts["strip_apostrophe"] += 1
        elif kind == "insert" and (
            (op.position > 0 and op.raw_char == norm[op.position - 1])
            or (op.position < len(norm) and op.raw_char == norm[op.position])
        ):
            counts["repeat_char"] += 1
        elif kind == "delete" and is_vowel(op.norm_char or "", accent_map):
            counts["drop_vowels"] += 1
        elif kind == "transpose" or kind in ("delete", "insert"):
            counts["typo"] += 1
        elif kind == "substitute" and keyboard.are_neighbors(
            op.raw_char or "", op.norm_char or ""
        ):
            counts["typo"] += 1
        else:
            counts["other"] += 1
    return counts


_PLURAL_SUFFIXES = ("nya", "ku", "mu", "")


def match_reduplication(norm: str) -> tuple[str, str] | None:
    """Detect an exact reduplication "X-X<suffix>"; returns (X, suffix)."""
    h = norm.find("-")
    if h < 1:
        return None
    stem = norm[:h]
    rest = norm[h + 1 :]
    if rest.startswith(stem):
        return stem, rest[len(stem) :]
    return None


def collapse_reduplication(norm: str) -> str | None:
    """Rewrite "X-X<suffix>" to "X2<suffix>" if the pattern matches."""
    m = match_reduplication(norm)
    if m is None:
        return None
    stem, suffix = m
    return f"{stem}2{suffix}"


@dataclass
class EstimationConfig:
    min_count: int = 2
    language: str | None = None
    keyboard: KeyboardLayout = field(default_factory=lambda: DEFAULT_KEYBOARD)
    accent_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_ACCENT_MAP))
    misc_rules: list[MiscRule] = field(default_factory=list)


@dataclass(frozen=True)
class _Unit:
    """One word unit of a sentence after undoing split/merge annotation."""

    norm_words: tuple[str, ...]
    raw_parts: tuple[str, ...]

    @property
    def merged(self) -> bool:
        return len(self.norm_words) > 1

    @property
    def split(self) -> bool:
        return len(self.raw_parts) > 1


def _sentence_units(sentence: Sentence) -> list[_Unit]:
    units: list[_Unit] = []
    tokens = sentence.tokens
    i = 0
    while i < len(tokens):
        token = tokens[i]
        raw_parts = [token.raw]
        i += 1
        while i < len(tokens) and tokens[i].norm == "":
            raw_parts.append(tokens[i].raw)
            i += 1
        units.append(_Unit(tuple(token.norm.split(" ")), tuple(raw_parts)))
    return units


def count_sentence(
    sentence: Sentence, config: EstimationConfig, counts: RuleCounts,
    lexicon_counts: dict[str, dict[str, int]],
) -> None:
    """Accumulate rule and lexicon counts for one sentence."""
    units = _sentence_units(sentence)
    if not units:
        return
    accent_map = config.accent_map
    # Merge: replaying the pairwise scan, the final unit consumed the last
    # word without a trial iff it is a single word.
    merge_opportunities = len(units)
    if len(units[-1].norm_words) == 1:
        merge_opportunities -= 1
    counts.opportunities["merge_words"] += max(0, merge_opportunities)
    for unit in units:
        counts.applications["merge_words"] += len(unit.norm_words) - 1
        if unit.merged:
            continue
        word = unit.norm_words[0]
        if word == "":
            continue
        if len(word) >= 2:
            counts.opportunities["split_word"] += 1
        counts.applications["split_word"] += len(unit.raw_parts) - 1
        if unit.split:
            continue

        raw = unit.raw_parts[0]
        lexicon_counts.setdefault(word, {}).setdefault(raw, 0)
        lexicon_counts[word][raw] += 1

        counts.opportunities["accent_removal"] += sum(
            1 for ch in word if ch in accent_map
        )
        if word[0].isupper():
            counts.opportunities["decapitalize_first"] += 1
        if any(ch in APOSTROPHES for ch in word):
            counts.opportunities["strip_apostrophe"] += 1
        if match_reduplication(word) is not None:
            counts.opportunities["indonesian_plural"] += 1
        if any(is_vowel(ch, accent_map) for ch in word[1:]):
            counts.opportunities["drop_vowels"] += 1
        if len(word) >= 3:
            counts.opportunities["truncate_prefix"] += 1
        counts.opportunities["typo_per_char"] += len(word)
        counts.opportunities["repeat_char"] += 1

        if raw == word:
            continue
        if collapse_reduplication(word) == raw:
            counts.applications["indonesian_plural"] += 1
            continue
        if 2 <= len(raw) < len(word) and word.startswith(raw):
            counts.applications["truncate_prefix"] += 1
            continue
        script = char_align(raw, word)
        categories = classify_edits(script, raw, word, accent_map, config.keyboard)
        counts.applications["accent_removal"] += categories["accent_removal"]
        counts.applications["decapitalize_first"] += categories["decapitalize_first"]
        if categories["strip_apostrophe"]:
            counts.applications["strip_apostrophe"] += 1
        if categories["repeat_char"]:
            counts.applications["repeat_char"] += 1
        if categories["drop_vowels"]:
            counts.applications["drop_vowels"] += 1
        counts.applications["typo_per_char"] += categories["typo"]


def estimate_profile(dataset: Dataset, config: EstimationConfig | None = None) -> NoiseProfile:
    """Estimate a NoiseProfile from an annotated dataset.

    Replacement distributions are relative realization frequencies of each
    normalized word (words seen fewer than min_count times are dropped);
    rule probabilities are applications over rule-specific opportunity
    counts.
    """
    config = config or EstimationConfig()
    if not dataset.sentences:
        raise ValueError("cannot estimate a profile from an empty dataset")
    if config.language is not None and config.language != dataset.language:
        raise ValueError(
            f"language mismatch: dataset {dataset.language!r} vs config {config.language!r}"
        )
    counts = RuleCounts()
    lexicon_counts: dict[str, dict[str, int]] = {}
    for sentence in dataset.sentences:
        count_sentence(sentence, config, counts, lexicon_counts)

    lexicon: dict[str, dict[str, float]] = {}
    for word, realizations in lexicon_counts.items():
        total = sum(realizations.values())
        if total < config.min_count:
            continue
        lexicon[word] = {form: n / total for form, n in sorted(realizations.items())}

    profile = NoiseProfile(
        language=dataset.language,
        replacement_lexicon=lexicon,
        rule_probs={rule: counts.probability(rule) for rule in RULE_NAMES},
        misc_rules=list(config.misc_rules),
        keyboard=config.keyboard,
        accent_map=dict(config.accent_map),
    )
    profile.validate()
    return profile


def save_profile(profile: NoiseProfile) -> bytes:
    """Serialize a profile to stable, diff-friendly JSON."""
    profile.validate()
    doc = {
        "version": PROFILE_SCHEMA_VERSION,
        "language": profile.language,
        "rule_probs": {r: profile.rule_probs[r] for r in RULE_NAMES},
        "replacement_lexicon": {
            w: dict(sorted(dist.items()))
            for w, dist in sorted(profile.replacement_lexicon.items())
        },
        "misc_rules": [
            {
                "pattern": r.pattern,
                "replacement": r.replacement,
                "probability": r.probability,
                "regex": r.regex,
            }
            for r in profile.misc_rules
        ],
        "keyboard": {
            ch: "".join(sorted(ns)) for ch, ns in sorted(profile.keyboard.adjacency.items())
        },
        "accent_map": dict(sorted(profile.accent_map.items())),
    }
    return (json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=False) + "\n").encode(
        "utf-8"
    )


def load_profile(data: bytes) -> NoiseProfile:
    """Parse and validate a profile; errors name the offending field."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProfileError(f"profile is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProfileError("profile root must be a JSON object")
    version = doc.get("version")
    if version != PROFILE_SCHEMA_VERSION:
        raise ProfileError(f"version: expected {PROFILE_SCHEMA_VERSION}, got {version!r}")
    if "language" not in doc or not isinstance(doc["language"], str):
        raise ProfileError("language: missing or not a string")

    if "keyboard" in doc:
        adjacency = {}
        for ch, ns in doc["keyboard"].items():
            if not isinstance(ns, str):
                raise ProfileError(f"keyboard.{ch}: neighbors must be a string")
            adjacency[ch] = frozenset(ns)
        keyboard = KeyboardLayout(adjacency)
    else:
        warnings.warn("profile has no keyboard section; using built-in QWERTY")
        keyboard = DEFAULT_KEYBOARD

    misc_rules = []
    for i, entry in enumerate(doc.get("misc_rules", [])):
        try:
            misc_rules.append(
                MiscRule(
                    pattern=entry["pattern"],
                    replacement=entry["replacement"],
                    probability=entry["probability"],
                    regex=entry.get("regex", False),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ProfileError(f"misc_rules[{i}]: {exc}") from exc

    profile = NoiseProfile(
        language=doc["language"],
        replacement_lexicon=doc.get("replacement_lexicon", {}),
        rule_probs=dict(doc.get("rule_probs", {})),
        misc_rules=misc_rules,
        keyboard=keyboard,
        accent_map=doc.get("accent_map", dict(DEFAULT_ACCENT_MAP)),
    )
    profile.validate()
    return profile

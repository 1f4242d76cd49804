"""Evaluation: word accuracy, error reduction rate, LAI/MFR baselines and
multi-model ensemble aggregation of beam candidates."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from normforge.corpus import Dataset, Sentence, Token


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class Predictions:
    """One predicted norm per token of a reference dataset, in order."""

    norms: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.norms)


def predictions_from_dataset(dataset: Dataset) -> Predictions:
    return Predictions(tuple(t.norm for t in dataset.tokens()))


def predictions_to_dataset(reference: Dataset, pred: Predictions) -> Dataset:
    """Attach predictions to the reference raw tokens as a corpus dataset."""
    _check_aligned(reference, pred)
    norms = iter(pred.norms)
    sentences = tuple(
        Sentence(tuple(Token(t.raw, next(norms)) for t in s.tokens))
        for s in reference.sentences
    )
    return Dataset(reference.language, sentences)


def _check_aligned(gold: Dataset, pred: Predictions) -> None:
    n_gold = gold.word_count
    if n_gold != len(pred):
        index = min(n_gold, len(pred))
        raise EvaluationError(
            f"token count mismatch at index {index}: gold has {n_gold}, "
            f"predictions have {len(pred)}"
        )


def word_accuracy(gold: Dataset, pred: Predictions, caseless: bool = False) -> float:
    """Fraction of tokens whose prediction equals the gold norm exactly
    (case-folded under caseless)."""
    _check_aligned(gold, pred)
    if not len(pred):
        raise EvaluationError("empty dataset")
    correct = 0
    for token, predicted in zip(gold.tokens(), pred.norms):
        a, b = token.norm, predicted
        if caseless:
            a, b = a.casefold(), b.casefold()
        correct += a == b
    return correct / len(pred)


def lai(gold: Dataset) -> Predictions:
    """Leave-as-is baseline: predict every raw token unchanged."""
    return Predictions(tuple(t.raw for t in gold.tokens()))


def err(gold: Dataset, pred: Predictions, caseless: bool = False) -> float:
    """Error reduction rate: word accuracy rescaled so the leave-as-is
    baseline scores 0 and perfect output scores 1."""
    acc_lai = word_accuracy(gold, lai(gold), caseless)
    if acc_lai == 1.0:
        raise EvaluationError(
            "ERR is undefined: the gold dataset contains no normalizations"
        )
    acc = word_accuracy(gold, pred, caseless)
    return (acc - acc_lai) / (1.0 - acc_lai)


def macro_average(values: Iterable[float]) -> float:
    values = list(values)
    if not values:
        raise EvaluationError("macro average of zero datasets")
    return sum(values) / len(values)


@dataclass
class MFRModel:
    """Most-frequent-replacement lexicon with training counts retained."""

    counts: dict[str, dict[str, int]] = field(default_factory=dict)

    def lexicon(self) -> dict[str, str]:
        # argmax by count; ties go to the lexicographically smallest norm
        return {
            raw: min((-n, norm) for norm, n in forms.items())[1]
            for raw, forms in self.counts.items()
        }

    def predict_word(self, raw: str) -> str:
        forms = self.counts.get(raw)
        if not forms:
            return raw
        return min((-n, norm) for norm, n in forms.items())[1]


def mfr_train(train: Dataset) -> MFRModel:
    if not train.sentences:
        raise EvaluationError("cannot train MFR on an empty dataset")
    model = MFRModel()
    for token in train.tokens():
        forms = model.counts.setdefault(token.raw, {})
        forms[token.norm] = forms.get(token.norm, 0) + 1
    return model


def mfr_predict(model: MFRModel, dataset: Dataset) -> Predictions:
    return Predictions(tuple(model.predict_word(t.raw) for t in dataset.tokens()))


# One model's scored candidates: per token, a descending-logprob list of
# (candidate, logprob) pairs.
CandidateSet = list[list[tuple[str, float]]]


def validate_candidate_set(candidates: CandidateSet) -> None:
    for i, token_candidates in enumerate(candidates):
        seen = set()
        prev = math.inf
        for candidate, logprob in token_candidates:
            if not math.isfinite(logprob):
                raise EvaluationError(f"token {i}: non-finite logprob for {candidate!r}")
            if logprob > prev:
                raise EvaluationError(f"token {i}: candidates not sorted by logprob")
            if candidate in seen:
                raise EvaluationError(f"token {i}: duplicate candidate {candidate!r}")
            seen.add(candidate)
            prev = logprob


def ensemble(candidate_sets: list[CandidateSet], k: int = 16) -> Predictions:
    """Pick, per token, the candidate with the highest mean probability
    across models (missing candidates count as probability 0; ties go to
    the lexicographically smallest candidate)."""
    if not candidate_sets:
        raise EvaluationError("ensemble of zero models")
    lengths = {len(cs) for cs in candidate_sets}
    if len(lengths) > 1:
        raise EvaluationError(f"token count mismatch across models: {sorted(lengths)}")
    n_models = len(candidate_sets)
    norms: list[str] = []
    for i in range(lengths.pop()):
        scores: dict[str, float] = {}
        for cs in candidate_sets:
            for candidate, logprob in cs[i][:k]:
                scores[candidate] = scores.get(candidate, 0.0) + math.exp(logprob)
        if not scores:
            raise EvaluationError(f"token {i}: no candidates in any model")
        best = None
        best_score = -math.inf
        for candidate, total in scores.items():
            mean = total / n_models
            if mean > best_score or (mean == best_score and candidate < best):
                best, best_score = candidate, mean
        norms.append(best)
    return Predictions(tuple(norms))


def write_candidates_jsonl(candidates: CandidateSet) -> Iterator[str]:
    for i, token_candidates in enumerate(candidates):
        yield json.dumps(
            {"i": i, "c": [[c, lp] for c, lp in token_candidates]}, ensure_ascii=False
        )


def read_candidates_jsonl(lines: Iterable[str]) -> CandidateSet:
    records: dict[int, list[tuple[str, float]]] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            records[int(record["i"])] = [(str(c), float(lp)) for c, lp in record["c"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise EvaluationError(f"candidates line {lineno}: {exc}") from exc
    if set(records) != set(range(len(records))):
        raise EvaluationError("candidate token indices are not contiguous from 0")
    candidates = [records[i] for i in range(len(records))]
    validate_candidate_set(candidates)
    return candidates

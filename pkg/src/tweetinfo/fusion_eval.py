"""Probability fusion (ensemble by averaging) and precision/recall/F1.

Prediction files are UTF-8 TSV with LF endings, one ``id<TAB>probability``
per line, probabilities printed with six decimal places.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dataset import Label
from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class PredictionSet:
    """Per-tweet INFORMATIVE probabilities from one model."""

    model_name: str
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        seen = set()
        for tweet_id, prob in self.entries:
            if tweet_id in seen:
                raise ValidationError(f"duplicate prediction id {tweet_id!r}")
            seen.add(tweet_id)
            if not (0.0 <= prob <= 1.0):
                raise ValidationError(
                    f"probability {prob} for id {tweet_id!r} outside [0,1]"
                )

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [tweet_id for tweet_id, _ in self.entries]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    counts: ConfusionCounts

    def to_json_line(self) -> str:
        c = self.counts
        return json.dumps(
            {
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
                "tp": c.tp,
                "fp": c.fp,
                "fn": c.fn,
                "tn": c.tn,
            }
        )

    def __str__(self) -> str:
        c = self.counts
        return (
            f"precision {self.precision:.6f}\n"
            f"recall    {self.recall:.6f}\n"
            f"f1        {self.f1:.6f}\n"
            f"tp={c.tp} fp={c.fp} fn={c.fn} tn={c.tn}"
        )


class PredictionMismatch(ValidationError):
    """Prediction sets do not cover the same tweet ids."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


def fuse(sets) -> PredictionSet:
    """Arithmetic mean of probabilities per tweet id.

    All sets must cover identical id collections; the output keeps the
    first set's order and is named "ensemble".
    """
    sets = list(sets)
    if not sets:
        raise ValidationError("fuse needs at least one prediction set")
    base_ids = sets[0].ids()
    base_set = set(base_ids)
    for other in sets[1:]:
        other_ids = set(other.ids())
        if other_ids != base_set:
            missing = sorted(base_set ^ other_ids)
            raise PredictionMismatch(
                f"prediction sets disagree on ids ({other.model_name!r} vs "
                f"{sets[0].model_name!r}); first differences: {missing[:5]}",
                missing=missing,
            )
    lookup = [dict(s.entries) for s in sets]
    # fsum is exactly rounded, which makes the mean independent of set order
    fused = tuple(
        (tweet_id, math.fsum(table[tweet_id] for table in lookup) / len(lookup))
        for tweet_id in base_ids
    )
    return PredictionSet("ensemble", fused)


def threshold(preds: PredictionSet, cutoff: float = 0.5) -> list[tuple[str, Label]]:
    """probability >= cutoff maps to INFORMATIVE, below to UNINFORMATIVE."""
    if not (0.0 <= cutoff <= 1.0):
        raise ValidationError(f"cutoff must be in [0,1], got {cutoff}")
    return [
        (tweet_id, Label.INFORMATIVE if prob >= cutoff else Label.UNINFORMATIVE)
        for tweet_id, prob in preds.entries
    ]


def compute_metrics(gold, predicted) -> MetricsReport:
    """Tally the confusion matrix with INFORMATIVE as the positive class.

    Both arguments are (id, Label) collections over identical id sets.
    A 0/0 ratio is defined as 0.
    """
    gold = list(gold)
    predicted = list(predicted)
    gold_map = dict(gold)
    pred_map = dict(predicted)
    if len(gold_map) != len(gold) or len(pred_map) != len(predicted):
        raise ValidationError("duplicate ids in gold or predictions")
    if set(gold_map) != set(pred_map):
        missing = sorted(set(gold_map) ^ set(pred_map))
        raise PredictionMismatch(
            f"gold and prediction ids differ; first differences: {missing[:5]}",
            missing=missing,
        )
    tp = fp = fn = tn = 0
    for tweet_id, gold_label in gold_map.items():
        pred_label = pred_map[tweet_id]
        if pred_label == Label.INFORMATIVE:
            if gold_label == Label.INFORMATIVE:
                tp += 1
            else:
                fp += 1
        else:
            if gold_label == Label.INFORMATIVE:
                fn += 1
            else:
                tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return MetricsReport(precision, recall, f1, ConfusionCounts(tp, fp, fn, tn))


def write_predictions(path, preds: PredictionSet) -> None:
    """One ``id<TAB>probability`` line per tweet, input order preserved."""
    if len(preds) == 0:
        raise ValidationError("refusing to write an empty prediction set")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tweet_id, prob in preds.entries:
            fh.write(f"{tweet_id}\t{prob:.6f}\n")


def load_predictions(path, model_name: str | None = None) -> PredictionSet:
    entries = []
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2:
                raise ParseError(
                    f"expected 2 tab-separated fields, got {len(fields)}",
                    path=str(path),
                    line=lineno,
                )
            try:
                prob = float(fields[1])
            except ValueError:
                raise ParseError(
                    f"bad probability {fields[1]!r}", path=str(path), line=lineno
                ) from None
            entries.append((fields[0], prob))
    name = model_name if model_name is not None else str(path)
    return PredictionSet(name, tuple(entries))

"""Classification metrics and the off-by-one error decomposition.

Class order everywhere is [negative, neutral, positive]; precision, recall,
and F1 fall back to 0 whenever their denominator is 0.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Sentiment
from .errors import ValidationError

CLASS_ORDER = (Sentiment.NEGATIVE, Sentiment.NEUTRAL, Sentiment.POSITIVE)


@dataclass(frozen=True)
class ConfusionMatrix:
    """3x3 counts; rows are true classes, columns predicted."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        if self.counts.shape != (3, 3):
            raise ValidationError(f"confusion matrix must be 3x3, got {self.counts.shape}")
        if (self.counts < 0).any():
            raise ValidationError("confusion matrix entries must be >= 0")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _as_class_indices(labels: Sequence[int], what: str) -> np.ndarray:
    arr = np.asarray([int(v) for v in labels])
    if arr.size and (arr.min() < -1 or arr.max() > 1):
        raise ValidationError(f"{what} labels must lie in {{-1, 0, 1}}")
    return arr + 1


def confusion(true_labels: Sequence[int], predicted: Sequence[int]) -> ConfusionMatrix:
    if len(true_labels) != len(predicted):
        raise ValidationError(
            f"length mismatch: {len(true_labels)} true vs {len(predicted)} predicted"
        )
    t = _as_class_indices(true_labels, "true")
    p = _as_class_indices(predicted, "predicted")
    counts = np.zeros((3, 3), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class F1Report:
    per_class: dict[Sentiment, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float


def f1_report(cm: ConfusionMatrix) -> F1Report:
    """Per-class precision/recall/F1 plus macro and support-weighted means."""
    if cm.total == 0:
        raise ValidationError("f1_report requires a non-empty confusion matrix")
    counts = cm.counts.astype(np.float64)
    support = counts.sum(axis=1)
    predicted = counts.sum(axis=0)
    diag = np.diag(counts)

    per_class: dict[Sentiment, ClassMetrics] = {}
    precisions, recalls, f1s = [], [], []
    for i, cls in enumerate(CLASS_ORDER):
        precision = diag[i] / predicted[i] if predicted[i] > 0 else 0.0
        recall = diag[i] / support[i] if support[i] > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[cls] = ClassMetrics(precision, recall, f1, int(support[i]))
        precisions.append(precision)
        recalls.append(recall)
        f1s.append(f1)

    weights = support / support.sum()
    return F1Report(
        per_class=per_class,
        macro_precision=float(np.mean(precisions)),
        macro_recall=float(np.mean(recalls)),
        macro_f1=float(np.mean(f1s)),
        weighted_precision=float(np.dot(weights, precisions)),
        weighted_recall=float(np.dot(weights, recalls)),
        weighted_f1=float(np.dot(weights, f1s)),
    )


@dataclass(frozen=True)
class ErrorDecomposition:
    """Exact partition of predictions by ordinal distance from the truth.

    Distance 1 splits into the four off-by-one buckets; the two pred-neutral
    ones are the cautious, acceptable errors. Distance 2 means the model
    flipped polarity outright.
    """

    correct: int
    pred_neutral_true_negative: int
    pred_neutral_true_positive: int
    pred_negative_true_neutral: int
    pred_positive_true_neutral: int
    pred_positive_true_negative: int
    pred_negative_true_positive: int

    @property
    def off_by_one_total(self) -> int:
        return (
            self.pred_neutral_true_negative
            + self.pred_neutral_true_positive
            + self.pred_negative_true_neutral
            + self.pred_positive_true_neutral
        )

    @property
    def clear_total(self) -> int:
        return self.pred_positive_true_negative + self.pred_negative_true_positive

    @property
    def acceptable(self) -> int:
        return self.pred_neutral_true_negative + self.pred_neutral_true_positive

    @property
    def unacceptable(self) -> int:
        return self.pred_negative_true_neutral + self.pred_positive_true_neutral

    @property
    def total(self) -> int:
        return self.correct + self.off_by_one_total + self.clear_total


def off_by_one(true_labels: Sequence[int], predicted: Sequence[int]) -> ErrorDecomposition:
    if len(true_labels) != len(predicted):
        raise ValidationError(
            f"length mismatch: {len(true_labels)} true vs {len(predicted)} predicted"
        )
    cm = confusion(true_labels, predicted).counts  # validates the label domain
    return ErrorDecomposition(
        correct=int(np.trace(cm)),
        pred_neutral_true_negative=int(cm[0, 1]),
        pred_neutral_true_positive=int(cm[2, 1]),
        pred_negative_true_neutral=int(cm[1, 0]),
        pred_positive_true_neutral=int(cm[1, 2]),
        pred_positive_true_negative=int(cm[0, 2]),
        pred_negative_true_positive=int(cm[2, 0]),
    )


# ---------------------------------------------------------------------------
# Report output

def write_metrics_csv(report: F1Report, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class", "precision", "recall", "f1", "support"])
        for cls in CLASS_ORDER:
            m = report.per_class[cls]
            writer.writerow(
                [cls.name.lower(), f"{m.precision:.6f}", f"{m.recall:.6f}", f"{m.f1:.6f}", m.support]
            )
        writer.writerow(
            ["macro", f"{report.macro_precision:.6f}", f"{report.macro_recall:.6f}",
             f"{report.macro_f1:.6f}", ""]
        )
        writer.writerow(
            ["weighted", f"{report.weighted_precision:.6f}", f"{report.weighted_recall:.6f}",
             f"{report.weighted_f1:.6f}", ""]
        )


def write_decomposition_csv(decomp: ErrorDecomposition, path: str | Path) -> None:
    rows = [
        ("correct", decomp.correct, ""),
        ("pred_neutral_true_negative", decomp.pred_neutral_true_negative, "acceptable"),
        ("pred_neutral_true_positive", decomp.pred_neutral_true_positive, "acceptable"),
        ("pred_negative_true_neutral", decomp.pred_negative_true_neutral, "unacceptable"),
        ("pred_positive_true_neutral", decomp.pred_positive_true_neutral, "unacceptable"),
        ("pred_positive_true_negative", decomp.pred_positive_true_negative, "clear"),
        ("pred_negative_true_positive", decomp.pred_negative_true_positive, "clear"),
        ("total", decomp.total, ""),
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bucket", "count", "kind"])
        writer.writerows(rows)


def format_report(report: F1Report) -> str:
    lines = [f"{'class':<10}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}"]
    for cls in CLASS_ORDER:
        m = report.per_class[cls]
        lines.append(
            f"{cls.name.lower():<10}{m.precision:>10.3f}{m.recall:>10.3f}"
            f"{m.f1:>10.3f}{m.support:>10d}"
        )
    lines.append(
        f"{'macro':<10}{report.macro_precision:>10.3f}{report.macro_recall:>10.3f}"
        f"{report.macro_f1:>10.3f}{'':>10}"
    )
    lines.append(
        f"{'weighted':<10}{report.weighted_precision:>10.3f}{report.weighted_recall:>10.3f}"
        f"{report.weighted_f1:>10.3f}{'':>10}"
    )
    return "\n".join(lines) + "\n"

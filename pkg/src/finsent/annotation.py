"""Inter-annotator agreement statistics and gold-set assembly."""

from __future__ import annotations

import csv
import enum
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import GoldLabel, Sentiment
from .errors import ValidationError


@dataclass(frozen=True)
class AnnotationSet:
    """Multi-annotator labels plus the ids every annotator labeled."""

    records: tuple[GoldLabel, ...]
    annotators: frozenset[str]
    shared_ids: frozenset[str]

    @classmethod
    def from_records(
        cls, records: Iterable[GoldLabel], annotators: Iterable[str] | None = None
    ) -> AnnotationSet:
        records = tuple(records)
        seen: set[tuple[str, str]] = set()
        by_article: dict[str, set[str]] = defaultdict(set)
        for rec in records:
            key = (rec.article_id, rec.annotator)
            if key in seen:
                raise ValidationError(f"duplicate (article_id, annotator) pair {key!r}")
            seen.add(key)
            by_article[rec.article_id].add(rec.annotator)
        names = frozenset(annotators) if annotators is not None else frozenset(
            r.annotator for r in records
        )
        if annotators is not None:
            unknown = {r.annotator for r in records} - names
            if unknown:
                raise ValidationError(f"records reference unlisted annotators {sorted(unknown)}")
        shared = frozenset(a for a, who in by_article.items() if who == names) if names else frozenset()
        return cls(records=records, annotators=names, shared_ids=shared)

    def labels_by(self, annotator: str) -> dict[str, Sentiment]:
        if annotator not in self.annotators:
            raise ValidationError(f"unknown annotator {annotator!r}")
        return {r.article_id: r.label for r in self.records if r.annotator == annotator}


def cohens_kappa(labels_a: Sequence[int], labels_b: Sequence[int]) -> float:
    """Chance-corrected two-rater agreement, (p_o - p_e) / (1 - p_e).

    When both raters are constant (p_e = 1) the statistic is undefined; we
    return 1.0 if they agree everywhere and 0.0 otherwise.
    """
    if len(labels_a) != len(labels_b):
        raise ValidationError(
            f"label vectors differ in length: {len(labels_a)} vs {len(labels_b)}"
        )
    n = len(labels_a)
    if n == 0:
        raise ValidationError("label vectors must be non-empty")
    a = [int(x) for x in labels_a]
    b = [int(x) for x in labels_b]
    for v in a + b:
        if v not in (-1, 0, 1):
            raise ValidationError(f"label {v} outside the 3-class set {{-1, 0, 1}}")

    agree = sum(1 for x, y in zip(a, b) if x == y)
    counts_a = Counter(a)
    counts_b = Counter(b)
    if len(counts_a) == 1 and len(counts_b) == 1:
        return 1.0 if agree == n else 0.0  # degenerate constant-label case
    pe_num = sum(counts_a[c] * counts_b[c] for c in (-1, 0, 1))
    p_o = agree / n
    p_e = pe_num / (n * n)
    return (p_o - p_e) / (1 - p_e)


def kappa_matrix(aset: AnnotationSet) -> dict[str, dict[str, float]]:
    """Pairwise kappas over the shared article ids; diagonal omitted."""
    names = sorted(aset.annotators)
    if len(names) < 2:
        raise ValidationError("kappa_matrix requires at least 2 annotators")
    if not aset.shared_ids:
        raise ValidationError("kappa_matrix requires shared article ids")
    shared = sorted(aset.shared_ids)
    per_annotator = {name: aset.labels_by(name) for name in names}
    matrix: dict[str, dict[str, float]] = {name: {} for name in names}
    for i, one in enumerate(names):
        for other in names[i + 1 :]:
            kappa = cohens_kappa(
                [per_annotator[one][aid] for aid in shared],
                [per_annotator[other][aid] for aid in shared],
            )
            matrix[one][other] = kappa
            matrix[other][one] = kappa
    return matrix


class AgreementBand(enum.Enum):
    """Conventional strength bands for kappa values."""

    POOR = "poor"
    SLIGHT = "slight"
    FAIR = "fair"
    MODERATE = "moderate"
    SUBSTANTIAL = "substantial"
    ALMOST_PERFECT = "almost-perfect"


def agreement_band(kappa: float) -> AgreementBand:
    if not -1.0 <= kappa <= 1.0:
        raise ValidationError(f"kappa {kappa} outside [-1, 1]")
    if kappa < 0:
        return AgreementBand.POOR
    if kappa <= 0.20:
        return AgreementBand.SLIGHT
    if kappa <= 0.40:
        return AgreementBand.FAIR
    if kappa <= 0.60:
        return AgreementBand.MODERATE
    if kappa <= 0.80:
        return AgreementBand.SUBSTANTIAL
    return AgreementBand.ALMOST_PERFECT


def label_distribution(aset: AnnotationSet, annotator: str) -> dict[Sentiment, int]:
    """Counts per class for one annotator; zeros for a known but idle one."""
    if annotator not in aset.annotators:
        raise ValidationError(f"unknown annotator {annotator!r}")
    counts = {Sentiment.NEGATIVE: 0, Sentiment.NEUTRAL: 0, Sentiment.POSITIVE: 0}
    for rec in aset.records:
        if rec.annotator == annotator:
            counts[rec.label] += 1
    return counts


def assemble_gold(
    aset: AnnotationSet, excluded_annotators: set[str] = frozenset()
) -> list[tuple[str, Sentiment]]:
    """One label per article after exclusions: majority vote, ties neutral.

    Articles keep their first-appearance order from the record list.
    """
    remaining = aset.annotators - set(excluded_annotators)
    if not remaining:
        raise ValidationError("annotator exclusion leaves no annotators")

    order: list[str] = []
    votes: dict[str, list[Sentiment]] = defaultdict(list)
    for rec in aset.records:
        if rec.annotator not in remaining:
            continue
        if rec.article_id not in votes:
            order.append(rec.article_id)
        votes[rec.article_id].append(rec.label)

    gold = []
    for article_id in order:
        counts = Counter(votes[article_id])
        best = counts.most_common()
        if len(best) > 1 and best[0][1] == best[1][1]:
            label = Sentiment.NEUTRAL  # tie: uncertain items default to neutral
        else:
            label = best[0][0]
        gold.append((article_id, label))
    return gold


# ---------------------------------------------------------------------------
# Report output

def write_kappa_csv(matrix: dict[str, dict[str, float]], path: str | Path) -> None:
    names = sorted(matrix)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["annotator"] + names)
        for one in names:
            row = [one]
            for other in names:
                row.append("" if other == one else f"{matrix[one][other]:.6f}")
            writer.writerow(row)


def format_agreement_summary(aset: AnnotationSet, matrix: dict[str, dict[str, float]]) -> str:
    """Human-readable agreement report: distributions, pairwise kappas, bands."""
    lines = []
    lines.append(f"annotators: {', '.join(sorted(aset.annotators))}")
    lines.append(f"records: {len(aset.records)}; shared articles: {len(aset.shared_ids)}")
    lines.append("")
    lines.append("label distributions (negative/neutral/positive):")
    for name in sorted(aset.annotators):
        dist = label_distribution(aset, name)
        lines.append(
            f"  {name}: {dist[Sentiment.NEGATIVE]}/{dist[Sentiment.NEUTRAL]}"
            f"/{dist[Sentiment.POSITIVE]}"
        )
    lines.append("")
    lines.append("pairwise kappa over shared articles:")
    names = sorted(matrix)
    kappas = []
    for i, one in enumerate(names):
        for other in names[i + 1 :]:
            kappa = matrix[one][other]
            kappas.append(kappa)
            lines.append(f"  ({one}, {other}): {kappa:.3f} [{agreement_band(kappa).value}]")
    if kappas:
        lines.append(f"average pairwise kappa: {sum(kappas) / len(kappas):.3f}")
    return "\n".join(lines) + "\n"

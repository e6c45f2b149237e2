"""Valence-lexicon token scoring and the max-magnitude baseline predictor.

Only word-level valences are used; there is no rule engine (negation,
boosters, emphasis) on top.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Sentiment
from .errors import ParseError, ValidationError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lexicon:
    scores: dict[str, float]
    name: str = ""

    def __len__(self) -> int:
        return len(self.scores)

    def __contains__(self, token: str) -> bool:
        return token in self.scores


def load_lexicon(path: str | Path, name: str | None = None) -> Lexicon:
    """Load a ``token<TAB>score`` TSV. Later duplicate tokens win with a warning."""
    path = Path(path)
    scores: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ParseError("expected token<TAB>score", str(path), lineno)
            token, raw = parts[0], parts[1]
            try:
                value = float(raw)
            except ValueError as exc:
                raise ParseError(f"non-numeric score {raw!r}", str(path), lineno) from exc
            if not math.isfinite(value):
                raise ParseError(f"non-finite score {raw!r}", str(path), lineno)
            if token in scores:
                log.warning("%s:%d: duplicate lexicon token %r, keeping last", path, lineno, token)
            scores[token] = value
    return Lexicon(scores=scores, name=name if name is not None else path.stem)


def score_tokens(lexicon: Lexicon, tokens: Sequence[str]) -> list[float]:
    """Per-token valence; unknown tokens score 0.0."""
    return [lexicon.scores.get(t, 0.0) for t in tokens]


def vadermax_predict(
    lexicon: Lexicon, tokens: Sequence[str], neutral_band: float = 0.0
) -> Sentiment:
    """Classify by the sign of the maximum-magnitude valence among the tokens.

    Tokens absent from the lexicon are ignored; with no hits the score is 0.
    A tie between equal-magnitude positive and negative valences, or a
    magnitude within ``neutral_band``, yields neutral.
    """
    if neutral_band < 0:
        raise ValidationError(f"neutral_band must be >= 0, got {neutral_band}")
    hits = [lexicon.scores[t] for t in tokens if t in lexicon.scores]
    if not hits:
        return Sentiment.NEUTRAL
    magnitude = max(abs(s) for s in hits)
    if magnitude <= neutral_band:
        return Sentiment.NEUTRAL
    has_pos = any(s == magnitude for s in hits)
    has_neg = any(s == -magnitude for s in hits)
    if has_pos and has_neg:
        return Sentiment.NEUTRAL
    return Sentiment.POSITIVE if has_pos else Sentiment.NEGATIVE

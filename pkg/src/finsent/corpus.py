"""Article/label ingestion, text preprocessing, and corpus statistics.

The preprocessing pipeline is a fixed sequence of optional stages applied to
lowercase whitespace tokens of ``title + " " + truncated description``:

1. dash removal: drop tokens made only of ``-``; strip embedded runs of two
   or more dashes,
2. percent replacement: ``+5%`` -> ``plus 5 percent``, ``-5%`` ->
   ``minus 5 percent``, ``5%`` -> ``5 percent``,
3. stopword removal against the bundled English list,
4. punctuation stripping over a fixed 31-character set (comma excluded).

Stage subsets are named by the cumulative presets M1..M5 (``PRESETS``).
When both stopword and punctuation stages are enabled, the stopword filter
runs once more after stripping so the pipeline is a fixed point (stripping
can turn e.g. ``the.`` into a stopword).
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import json
import re
import string
from collections import Counter
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence
from zoneinfo import ZoneInfo

from .errors import ParseError, ValidationError
from .series import DailySeries

DEFAULT_TIMEZONE = "America/New_York"  # market-day alignment
DEFAULT_DESCRIPTION_WORD_CAP = 25

# Punctuation characters stripped by the final pipeline stage. Note: no comma.
PIPELINE_PUNCTUATION = frozenset("!\"#$%&'()*+\\-./:;<=>?@[]^_`{|}~")

_PERCENT_RE = re.compile(r"^([+-])?(\d+(?:\.\d+)?)%$")
_MULTI_DASH_RE = re.compile(r"-{2,}")
_PUNCT_STRIP_TABLE = str.maketrans("", "", "".join(sorted(PIPELINE_PUNCTUATION)))


class Sentiment(enum.IntEnum):
    """Three-class article sentiment, numerically -1/0/+1."""

    NEGATIVE = -1
    NEUTRAL = 0
    POSITIVE = 1

    @property
    def class_index(self) -> int:
        """Zero-based class index (negative=0, neutral=1, positive=2)."""
        return int(self) + 1

    @classmethod
    def from_class_index(cls, index: int) -> Sentiment:
        return cls(index - 1)


@dataclass(frozen=True)
class Article:
    """One news item as delivered by the article feed."""

    id: str
    title: str
    description: str
    publisher: str
    published_at: dt.datetime
    tickers: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValidationError(f"article {self.id!r} has an empty title")
        if self.published_at.tzinfo is None:
            raise ValidationError(f"article {self.id!r} timestamp is not timezone-aware")

    def date(self, tz: str = DEFAULT_TIMEZONE) -> dt.date:
        """Calendar date of publication in the given timezone."""
        return self.published_at.astimezone(ZoneInfo(tz)).date()


@dataclass(frozen=True)
class GoldLabel:
    article_id: str
    label: Sentiment
    annotator: str


@dataclass(frozen=True)
class TokenizedDoc:
    article_id: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class PipelineConfig:
    """Preprocessing stage flags plus the description truncation cap.

    ``covid_embeddings`` does not alter tokens; it tells the embedding step
    to add the synthetic COVID vectors. It is carried here because the
    named presets bundle it with the text stages.
    """

    dash_removal: bool = False
    covid_embeddings: bool = False
    stopword_removal: bool = False
    percent_replacement: bool = False
    punctuation_removal: bool = False
    description_word_cap: int = DEFAULT_DESCRIPTION_WORD_CAP

    def flag_set(self) -> frozenset[str]:
        return frozenset(
            name
            for name in (
                "dash_removal",
                "covid_embeddings",
                "stopword_removal",
                "percent_replacement",
                "punctuation_removal",
            )
            if getattr(self, name)
        )


# Cumulative presets: each adds one stage to the previous.
PRESETS: dict[str, PipelineConfig] = {
    "M1": PipelineConfig(),
    "M2": PipelineConfig(dash_removal=True, covid_embeddings=True),
    "M3": PipelineConfig(dash_removal=True, covid_embeddings=True, stopword_removal=True),
    "M4": PipelineConfig(
        dash_removal=True,
        covid_embeddings=True,
        stopword_removal=True,
        percent_replacement=True,
    ),
    "M5": PipelineConfig(
        dash_removal=True,
        covid_embeddings=True,
        stopword_removal=True,
        percent_replacement=True,
        punctuation_removal=True,
    ),
}


def preset(name: str, description_word_cap: int = DEFAULT_DESCRIPTION_WORD_CAP) -> PipelineConfig:
    try:
        cfg = PRESETS[name.upper()]
    except KeyError:
        raise ValidationError(f"unknown preprocessing preset {name!r} (expected M1..M5)") from None
    return replace(cfg, description_word_cap=description_word_cap)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load a one-token-per-line stopword file; ``None`` loads the bundled list."""
    if path is None:
        text = resources.files("finsent").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


_BUNDLED_STOPWORDS: frozenset[str] | None = None


def _bundled_stopwords() -> frozenset[str]:
    global _BUNDLED_STOPWORDS
    if _BUNDLED_STOPWORDS is None:
        _BUNDLED_STOPWORDS = load_stopwords(None)
    return _BUNDLED_STOPWORDS


# ---------------------------------------------------------------------------
# Ingestion

_REQUIRED_ARTICLE_KEYS = ("id", "title", "publishedAt")


def load_articles(path: str | Path) -> list[Article]:
    """Read a UTF-8 JSON-lines article file.

    Required keys per record: ``id``, ``title``, ``publishedAt`` (ISO-8601).
    ``description``, ``publisherName`` and ``symbols`` are optional; unknown
    keys are ignored. Duplicate ids are rejected.
    """
    path = Path(path)
    articles: list[Article] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON: {exc.msg}", str(path), lineno) from exc
            if not isinstance(record, dict):
                raise ParseError("record is not a JSON object", str(path), lineno)
            for key in _REQUIRED_ARTICLE_KEYS:
                if key not in record:
                    raise ParseError(f"missing required key {key!r}", str(path), lineno)
            try:
                published_at = _parse_timestamp(str(record["publishedAt"]))
            except ValueError as exc:
                raise ParseError(f"bad publishedAt: {exc}", str(path), lineno) from exc
            article_id = str(record["id"])
            if article_id in seen_ids:
                raise ValidationError(f"{path}:{lineno}: duplicate article id {article_id!r}")
            seen_ids.add(article_id)
            try:
                article = Article(
                    id=article_id,
                    title=str(record["title"]),
                    description=str(record.get("description") or ""),
                    publisher=str(record.get("publisherName") or ""),
                    published_at=published_at,
                    tickers=tuple(str(s).upper() for s in record.get("symbols") or ()),
                )
            except ValidationError as exc:
                raise ParseError(str(exc), str(path), lineno) from exc
            articles.append(article)
    return articles


def _parse_timestamp(raw: str) -> dt.datetime:
    # Accept ISO-8601 with trailing Z; naive timestamps are taken as UTC.
    ts = dt.datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=dt.timezone.utc)
    return ts


def load_labels(path: str | Path) -> list[GoldLabel]:
    """Read a label CSV with header ``article_id,annotator,label``."""
    path = Path(path)
    labels: list[GoldLabel] = []
    seen: set[tuple[str, str]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"article_id", "annotator", "label"}:
            raise ParseError(
                "expected header with columns article_id,annotator,label", str(path), 1
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                value = int(row["label"])
                label = Sentiment(value)
            except (TypeError, KeyError, ValueError) as exc:
                raise ParseError(f"bad label {row.get('label')!r}", str(path), lineno) from exc
            key = (row["article_id"], row["annotator"])
            if key in seen:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate (article_id, annotator) pair {key!r}"
                )
            seen.add(key)
            labels.append(GoldLabel(row["article_id"], label, row["annotator"]))
    return labels


# ---------------------------------------------------------------------------
# Preprocessing

def tokenize(text: str) -> list[str]:
    """Lowercase Unicode-whitespace tokenization."""
    return text.lower().split()


def truncate_description(description: str, cap: int = DEFAULT_DESCRIPTION_WORD_CAP) -> str:
    """Keep at most ``cap`` whitespace-delimited words, in order."""
    if cap < 0:
        raise ValidationError(f"cap must be >= 0, got {cap}")
    words = description.split()
    if len(words) <= cap:
        return description
    return " ".join(words[:cap])


def _remove_dashes(tokens: Iterable[str]) -> list[str]:
    out = []
    for token in tokens:
        if set(token) == {"-"}:
            continue
        token = _MULTI_DASH_RE.sub("", token)
        if token:
            out.append(token)
    return out


def _replace_percents(tokens: Iterable[str]) -> list[str]:
    out = []
    for token in tokens:
        m = _PERCENT_RE.match(token)
        if m is None:
            out.append(token)
            continue
        sign, number = m.groups()
        if sign == "+":
            out.append("plus")
        elif sign == "-":
            out.append("minus")
        out.append(number)
        out.append("percent")
    return out


def _strip_punctuation(tokens: Iterable[str]) -> list[str]:
    out = []
    for token in tokens:
        token = token.translate(_PUNCT_STRIP_TABLE)
        if token:
            out.append(token)
    return out


def preprocess_tokens(
    tokens: Sequence[str],
    cfg: PipelineConfig,
    stopwords: frozenset[str] | None = None,
) -> list[str]:
    """Apply the configured pipeline stages to already-tokenized text."""
    if stopwords is None:
        stopwords = _bundled_stopwords()
    out = list(tokens)
    if cfg.dash_removal:
        out = _remove_dashes(out)
    if cfg.percent_replacement:
        out = _replace_percents(out)
    if cfg.stopword_removal:
        out = [t for t in out if t not in stopwords]
    if cfg.punctuation_removal:
        out = _strip_punctuation(out)
        if cfg.stopword_removal:
            # Fixed point: stripping can expose stopwords ("the." -> "the").
            out = [t for t in out if t not in stopwords]
    return out


def preprocess(
    title: str,
    description: str,
    cfg: PipelineConfig,
    article_id: str = "",
    stopwords: frozenset[str] | None = None,
) -> TokenizedDoc:
    """Tokenize ``title + " " + truncated description`` and run the pipeline."""
    truncated = truncate_description(description, cfg.description_word_cap)
    tokens = tokenize(title + " " + truncated)
    return TokenizedDoc(article_id, tuple(preprocess_tokens(tokens, cfg, stopwords)))


def preprocess_articles(
    articles: Iterable[Article],
    cfg: PipelineConfig,
    stopwords: frozenset[str] | None = None,
) -> list[TokenizedDoc]:
    return [preprocess(a.title, a.description, cfg, a.id, stopwords) for a in articles]


# ---------------------------------------------------------------------------
# Statistics

@dataclass(frozen=True)
class LengthSummary:
    mean: float
    min: int
    max: int


@dataclass(frozen=True)
class CorpusStats:
    article_count: int
    title_word_count: int
    title_word_count_no_stopwords: int
    vocab_size: int
    title_len: LengthSummary
    desc_len: LengthSummary
    top_words: tuple[tuple[str, int], ...]


def corpus_stats(
    articles: Sequence[Article],
    top_k: int = 20,
    stopwords: frozenset[str] | None = None,
) -> CorpusStats:
    """Word counts, vocabulary size, and length summaries over titles.

    All counts use lowercase whitespace tokens. The top-word ranking skips
    punctuation-only tokens; ties break alphabetically for determinism.
    """
    if not articles:
        raise ValidationError("corpus_stats requires a non-empty corpus")
    if stopwords is None:
        stopwords = _bundled_stopwords()

    title_counter: Counter[str] = Counter()
    title_lens: list[int] = []
    desc_lens: list[int] = []
    for article in articles:
        tokens = tokenize(article.title)
        title_counter.update(tokens)
        title_lens.append(len(tokens))
        desc_lens.append(len(article.description.split()))

    total = sum(title_counter.values())
    no_stop = total - sum(c for t, c in title_counter.items() if t in stopwords)
    countable = {
        t: c for t, c in title_counter.items() if not all(ch in string.punctuation for ch in t)
    }
    top = sorted(countable.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]

    return CorpusStats(
        article_count=len(articles),
        title_word_count=total,
        title_word_count_no_stopwords=no_stop,
        vocab_size=len(title_counter),
        title_len=LengthSummary(total / len(title_lens), min(title_lens), max(title_lens)),
        desc_len=LengthSummary(
            sum(desc_lens) / len(desc_lens), min(desc_lens), max(desc_lens)
        ),
        top_words=tuple(top),
    )


def query_frequency(
    articles: Sequence[Article],
    query_terms: set[str],
    tz: str = DEFAULT_TIMEZONE,
    substring: bool = False,
) -> tuple[DailySeries, DailySeries]:
    """Daily percentage of articles mentioning any query term, plus volume.

    Matching is against the lowercase whitespace token set of title plus full
    description; ``substring=True`` matches terms inside tokens instead of
    exactly. Days with zero posts do not appear.
    """
    if not query_terms:
        raise ValidationError("query_terms must be non-empty")
    terms = {t.lower() for t in query_terms}

    per_day_total: Counter[dt.date] = Counter()
    per_day_match: Counter[dt.date] = Counter()
    for article in articles:
        day = article.date(tz)
        per_day_total[day] += 1
        token_set = set(tokenize(article.title + " " + article.description))
        if substring:
            hit = any(term in token for term in terms for token in token_set)
        else:
            hit = bool(token_set & terms)
        if hit:
            per_day_match[day] += 1

    days = sorted(per_day_total)
    percents = DailySeries.from_pairs(
        (d, 100.0 * per_day_match[d] / per_day_total[d]) for d in days
    )
    volumes = DailySeries.from_pairs((d, float(per_day_total[d])) for d in days)
    return percents, volumes


def threshold_continuous(score: float, lo: float = -0.33, hi: float = 0.33) -> Sentiment:
    """Map a continuous score in [-1, 1] to a category; closed at both cutoffs."""
    if not lo < hi:
        raise ValidationError(f"lo must be < hi, got lo={lo} hi={hi}")
    if not -1.0 <= score <= 1.0:
        raise ValidationError(f"score {score} outside [-1, 1]")
    if score <= lo:
        return Sentiment.NEGATIVE
    if score >= hi:
        return Sentiment.POSITIVE
    return Sentiment.NEUTRAL


# ---------------------------------------------------------------------------
# Report output

def write_stats_csv(stats: CorpusStats, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerow(["article_count", stats.article_count])
        writer.writerow(["title_word_count", stats.title_word_count])
        writer.writerow(["title_word_count_no_stopwords", stats.title_word_count_no_stopwords])
        writer.writerow(["vocab_size", stats.vocab_size])
        writer.writerow(["title_len_mean", f"{stats.title_len.mean:.6f}"])
        writer.writerow(["title_len_min", stats.title_len.min])
        writer.writerow(["title_len_max", stats.title_len.max])
        writer.writerow(["desc_len_mean", f"{stats.desc_len.mean:.6f}"])
        writer.writerow(["desc_len_min", stats.desc_len.min])
        writer.writerow(["desc_len_max", stats.desc_len.max])


def write_top_words_csv(stats: CorpusStats, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "occurrences"])
        writer.writerows(stats.top_words)


def write_frequency_csv(
    percents: DailySeries, volumes: DailySeries, path: str | Path
) -> None:
    """Write the ``date,percent,volume`` frequency report."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "percent", "volume"])
        for (day, pct), (_, vol) in zip(percents, volumes):
            writer.writerow([day.isoformat(), f"{pct:.6f}", int(vol)])

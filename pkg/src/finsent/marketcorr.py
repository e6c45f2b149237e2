"""Market-data ingestion, sentiment aggregation, and correlation reports.

Weekends are removed before smoothing, so the rolling window counts trading
days. Market holidays disappear implicitly when sentiment is inner-joined
with market data.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Article, Sentiment, DEFAULT_TIMEZONE
from .errors import ParseError, ValidationError
from .series import DailySeries

MARKET_CSV_HEADER = ["Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"]


@dataclass(frozen=True)
class MarketBar:
    date: dt.date
    open: float
    high: float
    low: float
    close: float
    adj_close: float
    volume: int

    def __post_init__(self) -> None:
        if self.volume < 0:
            raise ValidationError(f"{self.date}: volume must be >= 0")
        if not (self.low <= self.open <= self.high and self.low <= self.close <= self.high):
            raise ValidationError(
                f"{self.date}: OHLC out of order (low={self.low} open={self.open} "
                f"close={self.close} high={self.high})"
            )


def load_market_csv(path: str | Path) -> list[MarketBar]:
    """Parse a daily-bar CSV in the standard download layout.

    The header must match ``Date,Open,High,Low,Close,Adj Close,Volume``
    exactly; dates must be strictly increasing.
    """
    path = Path(path)
    bars: list[MarketBar] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty market file", str(path), 1) from None
        if header != MARKET_CSV_HEADER:
            raise ParseError(
                f"header {header!r} != expected {MARKET_CSV_HEADER!r}", str(path), 1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 7:
                raise ParseError(f"expected 7 fields, got {len(row)}", str(path), lineno)
            try:
                bar = MarketBar(
                    date=dt.date.fromisoformat(row[0]),
                    open=float(row[1]),
                    high=float(row[2]),
                    low=float(row[3]),
                    close=float(row[4]),
                    adj_close=float(row[5]),
                    volume=int(row[6]),
                )
            except (ValueError, ValidationError) as exc:
                raise ParseError(str(exc), str(path), lineno) from exc
            if not all(math.isfinite(v) for v in (bar.open, bar.high, bar.low, bar.close, bar.adj_close)):
                raise ParseError("non-finite price", str(path), lineno)
            if bars and bar.date <= bars[-1].date:
                raise ParseError(
                    f"dates not strictly increasing: {bars[-1].date} then {bar.date}",
                    str(path),
                    lineno,
                )
            bars.append(bar)
    return bars


def series_from_bars(bars: Sequence[MarketBar], field: str = "close") -> DailySeries:
    """Extract one named field (close, adj_close, volume, ...) as a series."""
    if field not in ("open", "high", "low", "close", "adj_close", "volume"):
        raise ValidationError(f"unknown market field {field!r}")
    return DailySeries.from_pairs((b.date, float(getattr(b, field))) for b in bars)


def daily_sentiment(
    articles: Sequence[Article],
    predictions: Sequence[Sentiment],
    tz: str = DEFAULT_TIMEZONE,
) -> DailySeries:
    """Mean numeric label per publication date; values lie in [-1, 1]."""
    if len(articles) != len(predictions):
        raise ValidationError(
            f"one prediction per article required: {len(articles)} vs {len(predictions)}"
        )
    sums: dict[dt.date, float] = {}
    counts: dict[dt.date, int] = {}
    for article, label in zip(articles, predictions):
        day = article.date(tz)
        sums[day] = sums.get(day, 0.0) + int(label)
        counts[day] = counts.get(day, 0) + 1
    return DailySeries.from_mapping({d: sums[d] / counts[d] for d in sums})


def rolling_mean(series: DailySeries, window: int = 10, drop_warmup: bool = False) -> DailySeries:
    """Trailing mean over the last ``window`` entries.

    The first ``window - 1`` positions use an expanding window so the series
    keeps its length; pass ``drop_warmup=True`` to drop them instead.
    """
    if window < 1:
        raise ValidationError(f"window must be >= 1, got {window}")
    values = np.asarray(series.values, dtype=np.float64)
    csum = np.concatenate([[0.0], np.cumsum(values)])
    out = []
    for i in range(len(values)):
        lo = max(0, i - window + 1)
        out.append((csum[i + 1] - csum[lo]) / (i + 1 - lo))
    pairs = list(zip(series.dates, out))
    if drop_warmup:
        pairs = pairs[window - 1 :]
    return DailySeries.from_pairs(pairs)


def drop_non_trading(series: DailySeries) -> DailySeries:
    """Remove Saturday and Sunday entries."""
    return DailySeries.from_pairs((d, v) for d, v in series if d.weekday() < 5)


def align(a: DailySeries, b: DailySeries) -> tuple[list[dt.date], np.ndarray, np.ndarray]:
    """Inner join on date, order preserved; errors if nothing overlaps."""
    b_values = dict(zip(b.dates, b.values))
    paired = [(d, v, b_values[d]) for d, v in a if d in b_values]
    if not paired:
        raise ValidationError(f"series do not overlap: [{_span(a)}] vs [{_span(b)}]")
    dates = [d for d, _, _ in paired]
    return dates, np.asarray([x for _, x, _ in paired]), np.asarray([y for _, _, y in paired])


def _span(series: DailySeries) -> str:
    if not series.dates:
        return "empty"
    return f"{series.dates[0]}..{series.dates[-1]}"


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; defined only for non-constant inputs."""
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValidationError(f"expected equal-length vectors, got {xv.shape} and {yv.shape}")
    if xv.size < 2:
        raise ValidationError("pearson_r requires at least 2 points")
    dx = xv - xv.mean()
    dy = yv - yv.mean()
    ssx = float(np.dot(dx, dx))
    ssy = float(np.dot(dy, dy))
    if ssx == 0.0 or ssy == 0.0:
        raise ValidationError("correlation undefined for a constant input")
    r = float(np.dot(dx, dy) / math.sqrt(ssx * ssy))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationRow:
    pair: str
    r: float
    n_days: int


def correlation_report(
    sentiment: DailySeries,
    market: dict[str, DailySeries],
    window: int = 10,
    market_pairs: Sequence[tuple[str, str]] = (),
    drop_warmup: bool = False,
) -> list[CorrelationRow]:
    """Correlate raw and smoothed daily sentiment against each market series.

    Sentiment is first stripped of weekends, then smoothed over ``window``
    trading days. Additional market-vs-market pairs can be requested by name.
    """
    if not market:
        raise ValidationError("at least one market series is required")
    raw = drop_non_trading(sentiment)
    smoothed = rolling_mean(raw, window, drop_warmup=drop_warmup)

    rows: list[CorrelationRow] = []
    for name in market:
        trading = drop_non_trading(market[name])
        for sent_name, sent_series in (
            ("averaged_daily_sentiment", raw),
            ("smoothed_daily_sentiment", smoothed),
        ):
            dates, xv, yv = align(sent_series, trading)
            rows.append(
                CorrelationRow(f"{name} vs {sent_name}", pearson_r(xv, yv), len(dates))
            )
    rows.extend(market_pair_rows(market, market_pairs))
    return rows


def market_pair_rows(
    market: dict[str, DailySeries], pairs: Sequence[tuple[str, str]]
) -> list[CorrelationRow]:
    """Correlations between named market series (e.g. volume vs volatility)."""
    rows = []
    for left, right in pairs:
        if left not in market or right not in market:
            raise ValidationError(f"market pair ({left!r}, {right!r}) names an unknown series")
        dates, xv, yv = align(drop_non_trading(market[left]), drop_non_trading(market[right]))
        rows.append(CorrelationRow(f"{left} vs {right}", pearson_r(xv, yv), len(dates)))
    return rows


@dataclass(frozen=True)
class TickerFilterResult:
    articles: tuple[Article, ...]
    count: int
    fraction: float


def filter_by_tickers(articles: Sequence[Article], tickers: set[str]) -> TickerFilterResult:
    """Sub-corpus of articles tagged with any of the given ticker symbols."""
    if not tickers:
        raise ValidationError("tickers must be non-empty")
    wanted = {t.upper() for t in tickers}
    matched = tuple(a for a in articles if wanted & set(a.tickers))
    fraction = len(matched) / len(articles) if articles else 0.0
    return TickerFilterResult(articles=matched, count=len(matched), fraction=fraction)


def write_correlation_csv(rows: Iterable[CorrelationRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair", "r", "n_days"])
        for row in rows:
            writer.writerow([row.pair, f"{row.r:.6f}", row.n_days])

"""Date-indexed value series used by the corpus and market modules."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ValidationError


@dataclass(frozen=True)
class DailySeries:
    """Ordered (date, value) pairs with strictly increasing dates.

    Values must be finite. Construct directly from already-sorted pairs, or
    via :meth:`from_mapping` which sorts for you.
    """

    dates: tuple[dt.date, ...]
    values: tuple[float, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.dates) != len(self.values):
            raise ValidationError("dates and values must have equal length")
        for i in range(1, len(self.dates)):
            if self.dates[i] <= self.dates[i - 1]:
                raise ValidationError(
                    f"dates must be strictly increasing: {self.dates[i - 1]} "
                    f"followed by {self.dates[i]}"
                )
        for d, v in zip(self.dates, self.values):
            if not math.isfinite(v):
                raise ValidationError(f"non-finite value {v!r} at {d}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[dt.date, float]]) -> DailySeries:
        pairs = list(pairs)
        return cls(tuple(d for d, _ in pairs), tuple(float(v) for _, v in pairs))

    @classmethod
    def from_mapping(cls, mapping: dict[dt.date, float]) -> DailySeries:
        return cls.from_pairs(sorted(mapping.items()))

    def __len__(self) -> int:
        return len(self.dates)

    def __iter__(self) -> Iterator[tuple[dt.date, float]]:
        return iter(zip(self.dates, self.values))

    def value_at(self, date: dt.date) -> float:
        try:
            return self.values[self.dates.index(date)]
        except ValueError:
            raise KeyError(date) from None


def write_series_csv(series: DailySeries, path: str | Path, value_name: str = "value") -> None:
    """Write one series as a ``date,<value_name>`` CSV for external plotting."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", value_name])
        for date, value in series:
            writer.writerow([date.isoformat(), f"{value:.10g}"])

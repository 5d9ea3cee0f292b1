"""POI category grouping and per-POI sentiment aggregation.

Sentiment is mapped Negative -> -1, Neutral -> 0, Positive -> +1 with
Unrelated excluded; a POI's score is the plain average over its labeled
snippets.  This is the minimal mapping consistent with a [-1, 1] axis
and is recorded in output metadata.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .agreement import AttitudeLabel
from .labeling import LabeledSnippet

SENTIMENT_VALUE = {
    AttitudeLabel.NEGATIVE: -1,
    AttitudeLabel.NEUTRAL: 0,
    AttitudeLabel.POSITIVE: 1,
}

HISTOGRAM_BINS = 20


class PoiType(enum.Enum):
    RESTAURANT = "Restaurant"
    RETAIL_TRADE = "RetailTrade"
    RECREATION = "Recreation"
    HOTEL = "Hotel"
    PERSONAL_SERVICE = "PersonalService"
    HEALTH_CARE = "HealthCare"
    TRANSPORTATION = "Transportation"
    PUBLIC_SERVICE = "PublicService"
    APARTMENT = "Apartment"
    EDUCATION = "Education"
    OTHER = "Other"


@dataclass(frozen=True)
class CategoryMapping:
    """Ordered (substring, PoiType) rules; first hit in table order wins."""

    rules: tuple[tuple[str, PoiType], ...]

    @classmethod
    def from_file(cls, path: str) -> "CategoryMapping":
        rules = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                substring, type_name = row[0].strip(), row[1].strip()
                rules.append((substring.lower(), PoiType(type_name)))
        return cls(tuple(rules))

    def map_poi_type(self, categories: list[str]) -> PoiType:
        lowered = [c.lower() for c in categories]
        for substring, poi_type in self.rules:
            for cat in lowered:
                if substring in cat:
                    return poi_type
        return PoiType.OTHER


@dataclass(frozen=True)
class PoiSentiment:
    poi_id: str
    poi_type: PoiType
    n_access_reviews: int
    mean_sentiment: float


def aggregate_poi(snippets: Iterable[LabeledSnippet],
                  poi_types: dict[str, PoiType] | None = None
                  ) -> list[PoiSentiment]:
    """Average snippet sentiment per POI.

    Unrelated snippets are dropped; POIs left with no sentiment-bearing
    snippets are dropped entirely.  Output order is by poi_id, so sharded
    or permuted inputs aggregate identically.
    """
    sums: dict[str, int] = {}
    counts: dict[str, int] = {}
    for item in snippets:
        value = SENTIMENT_VALUE.get(item.label)
        if value is None:
            continue
        pid = item.snippet.poi_id
        sums[pid] = sums.get(pid, 0) + value
        counts[pid] = counts.get(pid, 0) + 1
    result = []
    for pid in sorted(counts):
        result.append(PoiSentiment(
            poi_id=pid,
            poi_type=(poi_types or {}).get(pid, PoiType.OTHER),
            n_access_reviews=counts[pid],
            mean_sentiment=sums[pid] / counts[pid],
        ))
    return result


@dataclass(frozen=True)
class DistributionSummary:
    poi_type: PoiType
    n_pois: int
    q1: float
    q2: float
    q3: float
    histogram: tuple[int, ...]  # counts over HISTOGRAM_BINS bins on [-1, 1]


def distribution(sentiments: Iterable[PoiSentiment], poi_type: PoiType,
                 min_reviews: int = 5) -> DistributionSummary:
    """Quartiles (linear interpolation) and a fixed-bin histogram for the
    POIs of one type with at least ``min_reviews`` accessibility reviews."""
    means = np.array([
        s.mean_sentiment for s in sentiments
        if s.poi_type is poi_type and s.n_access_reviews >= min_reviews
    ])
    if means.size == 0:
        return DistributionSummary(poi_type, 0, float("nan"), float("nan"),
                                   float("nan"), (0,) * HISTOGRAM_BINS)
    q1, q2, q3 = np.percentile(means, [25, 50, 75])
    hist, _ = np.histogram(means, bins=HISTOGRAM_BINS, range=(-1.0, 1.0))
    return DistributionSummary(
        poi_type=poi_type,
        n_pois=int(means.size),
        q1=float(q1), q2=float(q2), q3=float(q3),
        histogram=tuple(int(c) for c in hist),
    )


def write_distributions(path: str,
                        summaries: list[DistributionSummary]) -> None:
    """Plot-ready per-type summary file: quartiles plus histogram bins."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        edges = np.linspace(-1.0, 1.0, HISTOGRAM_BINS + 1)
        bin_cols = [f"bin_{edges[i]:+.2f}_{edges[i+1]:+.2f}"
                    for i in range(HISTOGRAM_BINS)]
        writer.writerow(["poi_type", "n_pois", "q1", "q2", "q3", *bin_cols])
        for s in summaries:
            writer.writerow([s.poi_type.value, s.n_pois, repr(s.q1),
                             repr(s.q2), repr(s.q3), *s.histogram])

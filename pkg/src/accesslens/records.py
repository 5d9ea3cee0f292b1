"""Streaming ingestion of review and POI metadata plus the POI-to-region join.

Input files are line-delimited JSON, one record per line, in the layout the
source corpus ships: reviews carry ``review_id``, ``gmap_id``, ``rating``,
``text``, ``time``; POI metadata carries ``gmap_id``, ``name``, ``latitude``,
``longitude``, ``category``, ``avg_rating``.  Records that fail validation
are skipped and tallied, never repaired.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator


class RecordError(ValueError):
    """A record or record table violates its schema."""


@dataclass(frozen=True)
class Review:
    review_id: str
    poi_id: str
    text: str
    rating: int | None = None
    timestamp: int | None = None


@dataclass
class Poi:
    poi_id: str
    name: str = ""
    latitude: float | None = None
    longitude: float | None = None
    categories: list[str] = field(default_factory=list)
    avg_score: float | None = None
    county_fips: str | None = None
    cbg_geoid: str | None = None
    state: str | None = None

    @property
    def has_region(self) -> bool:
        return self.county_fips is not None


@dataclass(frozen=True)
class RegionAssignment:
    poi_id: str
    county_fips: str
    cbg_geoid: str
    state: str

    def __post_init__(self) -> None:
        if self.cbg_geoid[:5] != self.county_fips:
            raise RecordError(
                f"cbg_geoid {self.cbg_geoid!r} does not nest in county "
                f"{self.county_fips!r} (poi {self.poi_id!r})"
            )


@dataclass
class IngestStats:
    accepted: int = 0
    skipped: int = 0
    errors: dict[str, int] = field(default_factory=dict)

    def tally(self, reason: str) -> None:
        self.skipped += 1
        self.errors[reason] = self.errors.get(reason, 0) + 1


def _parse_review(line: str) -> Review:
    obj = json.loads(line)
    review_id = str(obj.get("review_id") or "").strip()
    poi_id = str(obj.get("gmap_id") or obj.get("poi_id") or "").strip()
    text = obj.get("text")
    if not review_id:
        raise RecordError("missing review_id")
    if not poi_id:
        raise RecordError("missing gmap_id")
    if not isinstance(text, str) or not text.strip():
        raise RecordError("missing text")
    rating = obj.get("rating")
    if rating is not None:
        rating = int(rating)
        if not 1 <= rating <= 5:
            raise RecordError("rating out of range")
    timestamp = obj.get("time")
    if timestamp is not None:
        timestamp = int(timestamp)
    return Review(review_id=review_id, poi_id=poi_id, text=text,
                  rating=rating, timestamp=timestamp)


def _parse_poi(line: str) -> Poi:
    obj = json.loads(line)
    poi_id = str(obj.get("gmap_id") or obj.get("poi_id") or "").strip()
    if not poi_id:
        raise RecordError("missing gmap_id")
    lat = obj.get("latitude")
    lng = obj.get("longitude")
    if lat is not None:
        lat = float(lat)
        if not -90.0 <= lat <= 90.0:
            raise RecordError("latitude out of bounds")
    if lng is not None:
        lng = float(lng)
        if not -180.0 <= lng <= 180.0:
            raise RecordError("longitude out of bounds")
    cats = obj.get("category") or []
    if isinstance(cats, str):
        cats = [cats]
    avg = obj.get("avg_rating")
    return Poi(
        poi_id=poi_id,
        name=str(obj.get("name") or ""),
        latitude=lat,
        longitude=lng,
        categories=[str(c) for c in cats],
        avg_score=float(avg) if avg is not None else None,
    )


def _ingest(path: str, parse: Callable, on_record: Callable) -> IngestStats:
    stats = IngestStats()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                record = parse(line)
            except (json.JSONDecodeError, RecordError, TypeError, ValueError) as exc:
                stats.tally(type(exc).__name__)
                continue
            on_record(record)
            stats.accepted += 1
    return stats


def ingest_reviews(path: str, on_record: Callable[[Review], None]) -> IngestStats:
    """Stream reviews from ``path``, delivering valid records in file order.

    Malformed lines are skipped and tallied; memory use is independent of
    file size.
    """
    return _ingest(path, _parse_review, on_record)


def ingest_pois(path: str, on_record: Callable[[Poi], None]) -> IngestStats:
    """Stream POI metadata records from ``path``."""
    return _ingest(path, _parse_poi, on_record)


def iter_reviews(path: str) -> Iterator[Review]:
    """Generator variant of :func:`ingest_reviews` (skips malformed lines)."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                yield _parse_review(line)
            except (json.JSONDecodeError, RecordError, TypeError, ValueError):
                continue


def load_region_assignments(path: str) -> dict[str, RegionAssignment]:
    """Read the ``poi_id,county_fips,cbg_geoid,state`` table.

    A duplicate poi_id is fatal: the join below must be unambiguous.
    """
    table: dict[str, RegionAssignment] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            a = RegionAssignment(
                poi_id=row["poi_id"].strip(),
                county_fips=row["county_fips"].strip(),
                cbg_geoid=row["cbg_geoid"].strip(),
                state=row["state"].strip(),
            )
            if a.poi_id in table:
                raise RecordError(f"duplicate poi_id in assignments: {a.poi_id!r}")
            table[a.poi_id] = a
    return table


def join_regions(pois: Iterable[Poi],
                 assignments: dict[str, RegionAssignment]) -> Iterator[Poi]:
    """Left-join region assignments onto POIs.

    POIs without an assignment pass through with empty region fields; they
    are kept for POI-level analysis but excluded from regional statistics.
    """
    for poi in pois:
        a = assignments.get(poi.poi_id)
        if a is not None:
            poi.county_fips = a.county_fips
            poi.cbg_geoid = a.cbg_geoid
            poi.state = a.state
        yield poi

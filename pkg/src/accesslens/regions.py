"""Region-level sentiment/covariate tables and simple regional statistics.

Covariates are consumed from a prepared table; assembling census data is
external tooling.  Review density is computed as accessibility reviews
per acre from the table's ``area_acres`` field.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .labeling import LabeledSnippet
from .poitypes import SENTIMENT_VALUE
from .records import Poi

COVARIATE_NAMES = (
    "Population Density", "Employment Density", "Poverty",
    "Rural Population", "Urban Population", "Median Income",
    "Highly-Educated", "Male", "Age 18-44", "Age 45-64", "Age over 65",
    "White", "Asian", "African American", "Hispanic", "Others",
    "Disability", "Avg. POI Score",
)
REVIEW_DENSITY = "Review density"

_META_COLUMNS = ("region_id", "level", "state", "centroid_lat",
                 "centroid_lng", "area_acres")


class RegionTableError(ValueError):
    pass


@dataclass
class RegionRecord:
    region_id: str
    level: str  # "County" or "CBG"
    state: str
    centroid_lat: float
    centroid_lng: float
    n_reviews: int = 0
    sentiment: float | None = None
    included: bool = False
    covariates: dict[str, float] = field(default_factory=dict)


def load_covariate_table(path: str) -> list[dict]:
    """Covariate file rows keyed by the documented header names."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in _META_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise RegionTableError(f"covariate file missing columns {missing}")
        for row in reader:
            rows.append(row)
    return rows


def build_regions(snippets: Iterable[LabeledSnippet], pois: dict[str, Poi],
                  level: str, covariate_rows: list[dict],
                  min_reviews: int = 10) -> list[RegionRecord]:
    """Aggregate labeled snippets to regions and join covariates.

    Sentiment uses the same {-1, 0, +1; Unrelated excluded} mapping as the
    POI analysis.  Every covariate-table row of the requested level yields
    a record; regions with fewer than ``min_reviews`` accessibility
    reviews are flagged excluded but retained (the engagement contrast
    needs them).
    """
    if level not in ("County", "CBG"):
        raise RegionTableError(f"unknown level {level!r}")
    sums: dict[str, int] = {}
    counts: dict[str, int] = {}
    for item in snippets:
        value = SENTIMENT_VALUE.get(item.label)
        if value is None:
            continue
        poi = pois.get(item.snippet.poi_id)
        if poi is None or not poi.has_region:
            continue
        region_id = poi.county_fips if level == "County" else poi.cbg_geoid
        if region_id is None:
            continue
        sums[region_id] = sums.get(region_id, 0) + value
        counts[region_id] = counts.get(region_id, 0) + 1
    records = []
    for row in covariate_rows:
        if row["level"] != level:
            continue
        region_id = row["region_id"]
        n = counts.get(region_id, 0)
        area = float(row["area_acres"])
        covariates = {name: float(row[name]) for name in COVARIATE_NAMES
                      if name in row}
        covariates[REVIEW_DENSITY] = n / area if area > 0 else 0.0
        records.append(RegionRecord(
            region_id=region_id,
            level=level,
            state=row["state"],
            centroid_lat=float(row["centroid_lat"]),
            centroid_lng=float(row["centroid_lng"]),
            n_reviews=n,
            sentiment=sums[region_id] / n if n > 0 else None,
            included=n >= min_reviews,
            covariates=covariates,
        ))
    records.sort(key=lambda r: r.region_id)
    return records


def write_regions(path: str, regions: Sequence[RegionRecord]) -> None:
    """Serialize region records (with covariates) to one CSV."""
    if not regions:
        names: list[str] = []
    else:
        names = sorted(regions[0].covariates)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*_META_COLUMNS[:5], "n_reviews", "sentiment",
                         "included", *names])
        for r in sorted(regions, key=lambda r: r.region_id):
            writer.writerow([
                r.region_id, r.level, r.state, repr(r.centroid_lat),
                repr(r.centroid_lng), r.n_reviews,
                "" if r.sentiment is None else repr(r.sentiment),
                int(r.included),
                *[repr(r.covariates[n]) for n in names],
            ])


def read_regions(path: str) -> list[RegionRecord]:
    regions = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        meta = {*_META_COLUMNS[:5], "n_reviews", "sentiment", "included"}
        for row in reader:
            covariates = {k: float(v) for k, v in row.items()
                          if k not in meta}
            regions.append(RegionRecord(
                region_id=row["region_id"],
                level=row["level"],
                state=row["state"],
                centroid_lat=float(row["centroid_lat"]),
                centroid_lng=float(row["centroid_lng"]),
                n_reviews=int(row["n_reviews"]),
                sentiment=float(row["sentiment"]) if row["sentiment"] else None,
                included=bool(int(row["included"])),
                covariates=covariates,
            ))
    return regions


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation; requires length >= 3 and variance in
    both arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValueError("pearson needs equal-length arrays of size >= 3")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("pearson undefined for zero-variance input")
    xc = x - x.mean()
    yc = y - y.mean()
    return float((xc @ yc) / np.sqrt((xc @ xc) * (yc @ yc)))


@dataclass(frozen=True)
class ContrastRow:
    covariate: str
    mean_engaged: float
    mean_unengaged: float
    standardized_difference: float


def engagement_contrast(regions: Sequence[RegionRecord],
                        min_reviews: int = 10) -> list[ContrastRow]:
    """Covariate means for regions with vs. without > min_reviews reviews,
    plus a pooled-SD standardized difference of means."""
    engaged = [r for r in regions if r.n_reviews > min_reviews]
    unengaged = [r for r in regions if r.n_reviews <= min_reviews]
    if not engaged or not unengaged:
        raise ValueError("both engagement groups must be non-empty")
    names = [n for n in (*COVARIATE_NAMES, REVIEW_DENSITY)
             if n in regions[0].covariates]
    rows = []
    for name in names:
        a = np.array([r.covariates[name] for r in engaged])
        b = np.array([r.covariates[name] for r in unengaged])
        pooled_var = (
            (a.size - 1) * a.var(ddof=1) + (b.size - 1) * b.var(ddof=1)
        ) / max(a.size + b.size - 2, 1)
        diff = a.mean() - b.mean()
        pooled_sd = float(np.sqrt(pooled_var))
        rows.append(ContrastRow(
            covariate=name,
            mean_engaged=float(a.mean()),
            mean_unengaged=float(b.mean()),
            standardized_difference=float(diff / pooled_sd)
            if pooled_sd > 0 else 0.0,
        ))
    return rows


def write_engagement_contrast(path: str, rows: list[ContrastRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["covariate", "mean_engaged", "mean_unengaged",
                         "standardized_difference"])
        for row in rows:
            writer.writerow([row.covariate, repr(row.mean_engaged),
                             repr(row.mean_unengaged),
                             repr(row.standardized_difference)])


def choropleth_export(regions: Sequence[RegionRecord], path: str) -> None:
    """Per-region sentiment file for mapping; excluded regions keep their
    row but carry an empty sentiment cell (left uncolored on the map)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["region_id", "level", "sentiment", "n_reviews",
                         "included"])
        for r in sorted(regions, key=lambda r: r.region_id):
            sentiment = repr(r.sentiment) if r.included and \
                r.sentiment is not None else ""
            writer.writerow([r.region_id, r.level, sentiment, r.n_reviews,
                             int(r.included)])

#!/usr/bin/env python3
"""Regenerate the packaged test fixtures (seeded, fully deterministic).

Outputs land in src/accesslens/data/fixtures/.  Two fixture sets:

* reviews_100.jsonl — a 100-review corpus with exactly 7 seeded
  accessibility mentions (documented in reviews_100_expected.json);
  the 93 fillers avoid every search-list pattern.
* the _e2e set — a small but complete corpus (reviews, POI metadata,
  region assignments, covariate table, labeled training examples,
  a two-coder agreement table, a reduced hyperparameter grid and a
  pipeline config) sized so `run-all` exercises every stage.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import yaml

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "accesslens" / \
    "data" / "fixtures"

# ---------------------------------------------------------------- filter set

# Review text, expected targeted text, seeded slot in the 100-line file.
SEEDED_HITS = [
    ("UNBELIEVABLE! So many cool Great Danes! And what a valuable service "
     "for people with disabilities! Thank you for helping others!",
     "And what a valuable service for people with disabilities!"),
    ("Such a great clean park. Not much for kids to do but it has a very "
     "nice walking trail around the park. Good level parking lot with "
     "handicap space. Would probably be a great place to walk your dog or "
     "just hang out with loved ones. Benches available for sitting but no "
     "covered areas if its raining.",
     "Good level parking lot with handicap space."),
    ("So I am reading the reviews and the elevator is still out. Maybe I "
     "should call the American’s with Disabilities. The elevator must "
     "be working for people with disabilities. And to say the less, the "
     "key card took forever to get activated",
     "Maybe I should call the American’s with Disabilities. The "
     "elevator must be working for people with disabilities."),
    ("Handicap spots are not accessible during lunch, they say call but "
     "the line is busy or rings and rings. Other than that great food.",
     "Handicap spots are not accessible during lunch, they say call but "
     "the line is busy or rings and rings."),
    ("Closet was very small and difficult to close once you hung clothes "
     "on hangers in it. Seems like we might have had a handicap room and "
     "that could be the reason for the unusual setup of the closet and "
     "the bathroom.",
     "Seems like we might have had a handicap room and that could be the "
     "reason for the unusual setup of the closet and the bathroom."),
    ("Very nice place to taste good oriental food. At prices very "
     "accessible to all people ...",
     "At prices very accessible to all people ..."),
    ("Handicapped parking right by the door. Staff were friendly and the "
     "ramp was wide.",
     "Handicapped parking right by the door."),
]

# None of these words begins with a search-list root at a word boundary.
FILLER_WORDS = (
    "great nice food clean staff friendly parking coffee pizza tasty slow "
    "loud music price cheap wait long line table menu order burger fresh "
    "salad cold warm cozy place visit again recommend terrible rude dirty "
    "broken restroom quiet park trail walk kids fun view sunny crowded "
    "empty spacious tiny huge stale crispy juicy bland salty sweet bitter"
).split()


def _filler_sentence(rng: np.random.Generator) -> str:
    words = [str(rng.choice(FILLER_WORDS))
             for _ in range(int(rng.integers(5, 12)))]
    return " ".join(words).capitalize() + "."


def _filler_review(rng: np.random.Generator) -> str:
    return " ".join(_filler_sentence(rng)
                    for _ in range(int(rng.integers(1, 4))))


def make_filter_fixture() -> None:
    rng = np.random.default_rng(20240101)
    slots = sorted(rng.choice(100, size=len(SEEDED_HITS), replace=False))
    seeded = dict(zip(slots, SEEDED_HITS))
    expected = {}
    with open(FIXTURES / "reviews_100.jsonl", "w", encoding="utf-8") as fh:
        for i in range(100):
            review_id = f"fx{i:03d}"
            if i in seeded:
                text, targeted = seeded[i]
                expected[review_id] = targeted
            else:
                text = _filler_review(rng)
            fh.write(json.dumps({
                "review_id": review_id,
                "gmap_id": f"poi{i % 10}",
                "rating": int(rng.integers(1, 6)),
                "text": text,
                "time": 1600000000 + i,
            }, ensure_ascii=False) + "\n")
    with open(FIXTURES / "reviews_100_expected.json", "w",
              encoding="utf-8") as fh:
        json.dump(expected, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


# ------------------------------------------------------------------ e2e set

STATES = {"06": "CA", "12": "FL", "36": "NY", "48": "TX"}
N_COUNTIES_PER_STATE = 30
POIS_PER_COUNTY = 3
POI_CATEGORIES = [
    ["Restaurant"], ["Grocery store"], ["Hotel"],
    ["Park"], ["Hair salon"], ["Hospital"],
]

COVARIATE_NAMES = (
    "Population Density", "Employment Density", "Poverty",
    "Rural Population", "Urban Population", "Median Income",
    "Highly-Educated", "Male", "Age 18-44", "Age 45-64", "Age over 65",
    "White", "Asian", "African American", "Hispanic", "Others",
    "Disability", "Avg. POI Score",
)

# Sentence templates per attitude class.  The keyword sentence carries
# class-distinctive vocabulary so a trained classifier can separate them.
CLASS_SENTENCES = {
    "positive": [
        "The wheelchair ramp was excellent and smooth.",
        "Wonderful handicap parking right at the entrance.",
        "Great accessible restroom, wide and spotless.",
        "The braille menu was a wonderful thoughtful touch.",
    ],
    "negative": [
        "The handicap entrance was broken and blocked.",
        "No wheelchair ramp anywhere, totally unusable.",
        "The accessible stall was out of order and filthy.",
        "They refused my service dog, awful treatment.",
    ],
    "neutral": [
        "There is a handicap sign near the side entrance.",
        "A wheelchair ramp exists around the back.",
        "The accessible parking is behind the building.",
        "They mentioned a braille menu at the counter.",
    ],
    "unrelated": [
        "Very accessible to the freeway and cheap.",
        "Prices are accessible to all budgets here.",
        "The location is accessible from the highway.",
        "Easily accessible from downtown by bus.",
    ],
}
CLASSES = ("negative", "neutral", "positive", "unrelated")


def _county_fips(state_fips: str, idx: int) -> str:
    return f"{state_fips}{(idx * 2 + 1):03d}"


def make_e2e_fixture() -> None:
    rng = np.random.default_rng(20240202)

    counties = []
    for state_fips, state in sorted(STATES.items()):
        for i in range(N_COUNTIES_PER_STATE):
            counties.append({
                "fips": _county_fips(state_fips, i),
                "state": state,
                "lat": float(rng.uniform(28.0, 46.0)),
                "lng": float(rng.uniform(-120.0, -74.0)),
                # latent accessibility climate in [0, 1]
                "score": float(rng.uniform(0.15, 0.85)),
            })

    pois = []
    assignments = []
    for county in counties:
        for j in range(POIS_PER_COUNTY):
            poi_id = f"poi-{county['fips']}-{j}"
            cbg = f"{county['fips']}{(j + 1):07d}"
            pois.append({
                "gmap_id": poi_id,
                "name": f"Place {poi_id}",
                "latitude": county["lat"] + float(rng.uniform(-0.1, 0.1)),
                "longitude": county["lng"] + float(rng.uniform(-0.1, 0.1)),
                "category": POI_CATEGORIES[
                    (len(pois)) % len(POI_CATEGORIES)],
                "avg_rating": round(float(rng.uniform(2.5, 5.0)), 1),
            })
            assignments.append({
                "poi_id": poi_id,
                "county_fips": county["fips"],
                "cbg_geoid": cbg,
                "state": county["state"],
            })

    with open(FIXTURES / "pois_e2e.jsonl", "w", encoding="utf-8") as fh:
        for poi in pois:
            fh.write(json.dumps(poi, ensure_ascii=False) + "\n")
    with open(FIXTURES / "region_assignments_e2e.csv", "w",
              encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["poi_id", "county_fips", "cbg_geoid", "state"])
        writer.writeheader()
        writer.writerows(assignments)

    reviews = []
    n_review = 0
    for county in counties:
        n_access = int(rng.integers(10, 36))
        n_filler = int(rng.integers(1, 4))
        score = county["score"]
        # class mix tilts with the latent score so regional sentiment varies
        probs = np.array([0.55 * (1 - score), 0.15,
                          0.55 * score, 0.30])
        probs = probs / probs.sum()
        for _ in range(n_access):
            label = CLASSES[int(rng.choice(4, p=probs))]
            options = CLASS_SENTENCES[label]
            sentence = options[int(rng.integers(len(options)))]
            text = f"{_filler_sentence(rng)} {sentence}"
            poi_idx = int(rng.integers(POIS_PER_COUNTY))
            reviews.append({
                "review_id": f"e2e{n_review:05d}",
                "gmap_id": f"poi-{county['fips']}-{poi_idx}",
                "rating": int(rng.integers(1, 6)),
                "text": text,
                "time": 1600000000 + n_review,
            })
            n_review += 1
        for _ in range(n_filler):
            poi_idx = int(rng.integers(POIS_PER_COUNTY))
            reviews.append({
                "review_id": f"e2e{n_review:05d}",
                "gmap_id": f"poi-{county['fips']}-{poi_idx}",
                "rating": int(rng.integers(1, 6)),
                "text": _filler_review(rng),
                "time": 1600000000 + n_review,
            })
            n_review += 1
    with open(FIXTURES / "reviews_e2e.jsonl", "w", encoding="utf-8") as fh:
        for review in reviews:
            fh.write(json.dumps(review, ensure_ascii=False) + "\n")

    meta_cols = ["region_id", "level", "state", "centroid_lat",
                 "centroid_lng", "area_acres"]
    with open(FIXTURES / "covariates_e2e.csv", "w", encoding="utf-8",
              newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(meta_cols + list(COVARIATE_NAMES))
        for county in counties:
            values = [round(float(v), 6)
                      for v in rng.uniform(0.0, 1.0, len(COVARIATE_NAMES))]
            writer.writerow([
                county["fips"], "County", county["state"],
                round(county["lat"], 6), round(county["lng"], 6),
                round(float(rng.uniform(50000.0, 500000.0)), 1),
                *values,
            ])

    with open(FIXTURES / "labeled_examples_e2e.jsonl", "w",
              encoding="utf-8") as fh:
        for i in range(400):
            label = CLASSES[i % 4]
            options = CLASS_SENTENCES[label]
            sentence = options[int(rng.integers(len(options)))]
            text = f"{sentence} {_filler_sentence(rng)}"
            fh.write(json.dumps({
                "review_id": f"lab{i:04d}",
                "targeted_text": text,
                "label": label,
            }, ensure_ascii=False) + "\n")

    with open(FIXTURES / "agreement_e2e.jsonl", "w", encoding="utf-8") as fh:
        for i in range(60):
            label_a = CLASSES[int(rng.integers(4))]
            label_b = label_a if rng.uniform() < 0.85 else \
                CLASSES[int(rng.integers(4))]
            fh.write(json.dumps({
                "item_id": f"agr{i:03d}",
                "label_a": label_a,
                "label_b": label_b,
            }) + "\n")

    with open(FIXTURES / "grid_e2e.json", "w", encoding="utf-8") as fh:
        json.dump({"C": [0.5, 2.0], "max_iter": [100], "solver": ["lbfgs"]},
                  fh, indent=2)
        fh.write("\n")

    config = {
        "reviews": "reviews_e2e.jsonl",
        "pois": "pois_e2e.jsonl",
        "region_assignments": "region_assignments_e2e.csv",
        "covariates": "covariates_e2e.csv",
        "labeled_examples": "labeled_examples_e2e.jsonl",
        "agreement_table": "agreement_e2e.jsonl",
        "grid": "grid_e2e.json",
        "classifier_kind": "logistic_regression",
        "cv_folds": 3,
        "level": "County",
        "region_min_reviews": 10,
        "seed": 0,
    }
    with open(FIXTURES / "config_e2e.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(config, fh, sort_keys=True)


if __name__ == "__main__":
    FIXTURES.mkdir(parents=True, exist_ok=True)
    make_filter_fixture()
    make_e2e_fixture()
    print(f"fixtures written to {FIXTURES}")

import random

import numpy as np
import pytest

from accesslens.agreement import AttitudeLabel
from accesslens.config import packaged_data
from accesslens.keywords import AccessibilitySnippet
from accesslens.labeling import LabeledSnippet
from accesslens.poitypes import (HISTOGRAM_BINS, SENTIMENT_VALUE,
                                 CategoryMapping, PoiType, aggregate_poi,
                                 distribution)

MAPPING = CategoryMapping.from_file(packaged_data("poi_type_mapping.csv"))


def _snippet(i, poi_id, label):
    return LabeledSnippet(
        snippet=AccessibilitySnippet(
            review_id=f"r{i}", poi_id=poi_id, matched_keywords=("x",),
            targeted_text="t", full_text="t"),
        label=label)


def test_sentiment_value_mapping():
    assert SENTIMENT_VALUE[AttitudeLabel.NEGATIVE] == -1
    assert SENTIMENT_VALUE[AttitudeLabel.NEUTRAL] == 0
    assert SENTIMENT_VALUE[AttitudeLabel.POSITIVE] == 1
    assert AttitudeLabel.UNRELATED not in SENTIMENT_VALUE


def test_category_mapping_first_hit_wins_and_fallback():
    assert MAPPING.map_poi_type(["Sushi restaurant"]) is PoiType.RESTAURANT
    assert MAPPING.map_poi_type(["Hair salon"]) is PoiType.PERSONAL_SERVICE
    # "barber" rule precedes "bar": a barber shop is personal service
    assert MAPPING.map_poi_type(["Barber shop"]) is PoiType.PERSONAL_SERVICE
    assert MAPPING.map_poi_type(["Sports bar"]) is PoiType.RESTAURANT
    assert MAPPING.map_poi_type(["Grocery store"]) is PoiType.RETAIL_TRADE
    assert MAPPING.map_poi_type(["Quantum research lab"]) is PoiType.OTHER
    assert MAPPING.map_poi_type([]) is PoiType.OTHER


def _corpus_1000(seed=7):
    rng = random.Random(seed)
    labels = list(AttitudeLabel)
    return [_snippet(i, f"poi{rng.randint(0, 59)}", rng.choice(labels))
            for i in range(1000)]


def test_aggregate_matches_group_by_oracle():
    corpus = _corpus_1000()
    # independent oracle: plain dict-of-lists group-by
    groups = {}
    for item in corpus:
        if item.label is AttitudeLabel.UNRELATED:
            continue
        value = {"negative": -1, "neutral": 0, "positive": 1}[item.label.value]
        groups.setdefault(item.snippet.poi_id, []).append(value)
    result = aggregate_poi(corpus)
    assert [s.poi_id for s in result] == sorted(groups)
    for s in result:
        values = groups[s.poi_id]
        assert s.n_access_reviews == len(values)
        assert s.mean_sentiment == pytest.approx(sum(values) / len(values),
                                                 abs=1e-15)


def test_aggregate_order_invariant_under_permutation():
    corpus = _corpus_1000()
    shuffled = corpus[:]
    random.Random(1).shuffle(shuffled)
    assert aggregate_poi(corpus) == aggregate_poi(shuffled)


def test_aggregate_drops_unrelated_only_pois():
    corpus = [_snippet(0, "a", AttitudeLabel.UNRELATED),
              _snippet(1, "b", AttitudeLabel.POSITIVE)]
    result = aggregate_poi(corpus)
    assert [s.poi_id for s in result] == ["b"]


def test_min_review_filtering_is_monotone():
    corpus = _corpus_1000()
    types = {f"poi{i}": PoiType.RESTAURANT for i in range(60)}
    sentiments = aggregate_poi(corpus, types)
    previous = None
    for threshold in range(0, 40):
        summary = distribution(sentiments, PoiType.RESTAURANT,
                               min_reviews=threshold)
        if previous is not None:
            assert summary.n_pois <= previous
        previous = summary.n_pois
    assert distribution(sentiments, PoiType.RESTAURANT, 0).n_pois == \
        len(sentiments)


def test_distribution_quartiles_and_histogram():
    sentiments = aggregate_poi(_corpus_1000(),
                               {f"poi{i}": PoiType.HOTEL for i in range(60)})
    summary = distribution(sentiments, PoiType.HOTEL, min_reviews=5)
    means = np.array([s.mean_sentiment for s in sentiments
                      if s.n_access_reviews >= 5])
    assert summary.q1 == float(np.percentile(means, 25))
    assert summary.q2 == float(np.percentile(means, 50))
    assert summary.q3 == float(np.percentile(means, 75))
    assert summary.q1 <= summary.q2 <= summary.q3
    assert len(summary.histogram) == HISTOGRAM_BINS == 20
    assert sum(summary.histogram) == summary.n_pois == means.size


def test_distribution_empty_type():
    summary = distribution([], PoiType.EDUCATION)
    assert summary.n_pois == 0
    assert np.isnan(summary.q2)
    assert sum(summary.histogram) == 0

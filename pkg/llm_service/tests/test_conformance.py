"""Protocol conformance: the same guarantees the pipeline's harness stub
is tested against, exercised over a live service in stub mode."""

import pytest
import requests

from llm_service.service import VALID_LABELS

TEXTS = [
    "The ramp was excellent and wonderful.",
    "The entrance was broken and blocked.",
    "There is a sign near the door.",
    "Very close to the freeway.",
    "Another wonderful spotless restroom.",
]
EXPECTED = ["positive", "negative", "neutral", "unrelated", "positive"]


def _classify(endpoint, texts):
    return requests.post(f"{endpoint}/classify", json={"texts": texts},
                         timeout=10)


def test_health_reports_ready(stub_endpoint):
    response = requests.get(f"{stub_endpoint}/health", timeout=10)
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["stub"] is True


def test_labels_order_and_length_preserved(stub_endpoint):
    response = _classify(stub_endpoint, TEXTS)
    assert response.status_code == 200
    assert response.json() == {"labels": EXPECTED}


def test_empty_input_is_empty_output(stub_endpoint):
    response = _classify(stub_endpoint, [])
    assert response.status_code == 200
    assert response.json() == {"labels": []}


def test_full_batch_of_64(stub_endpoint):
    texts = [f"sign number {i} near the door" for i in range(64)]
    response = _classify(stub_endpoint, texts)
    assert response.status_code == 200
    assert response.json()["labels"] == ["neutral"] * 64


def test_oversize_batch_rejected_with_413(stub_endpoint):
    response = _classify(stub_endpoint, ["x"] * 65)
    assert response.status_code == 413


def test_label_vocabulary_is_closed(stub_endpoint):
    texts = ["", "UNBELIEVABLE", "broken GREAT freeway", "1234 !!",
             "ramp " * 50]
    labels = _classify(stub_endpoint, texts).json()["labels"]
    assert len(labels) == len(texts)
    assert set(labels) <= VALID_LABELS


def test_determinism_across_requests(stub_endpoint):
    first = _classify(stub_endpoint, TEXTS).json()
    second = _classify(stub_endpoint, TEXTS).json()
    assert first == second


def test_malformed_request_is_client_error(stub_endpoint):
    response = requests.post(f"{stub_endpoint}/classify",
                             json={"wrong_key": []}, timeout=10)
    assert 400 <= response.status_code < 500


def test_pipeline_client_interoperates(stub_endpoint):
    """The analysis pipeline's own remote client accepts this service."""
    remote = pytest.importorskip("accesslens.remote")
    config = remote.RemoteClassifierConfig(endpoint=stub_endpoint,
                                           batch_size=2)
    assert remote.classify_remote(TEXTS, config) == EXPECTED

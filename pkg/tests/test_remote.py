import pytest

from accesslens.remote import (ProtocolError, RemoteBatchError,
                               RemoteClassifier, RemoteClassifierConfig,
                               classify_remote)

TEXTS = [
    "The ramp was excellent and wonderful.",
    "The entrance was broken and blocked.",
    "There is a sign near the door.",
    "Very close to the freeway.",
    "Another wonderful spotless restroom.",
]
EXPECTED = ["positive", "negative", "neutral", "unrelated", "positive"]


def test_labels_order_and_length_preserved(stub_server):
    endpoint, _ = stub_server
    config = RemoteClassifierConfig(endpoint=endpoint)
    assert classify_remote(TEXTS, config) == EXPECTED


def test_batching_matches_single_shot(stub_server):
    endpoint, _ = stub_server
    one = classify_remote(TEXTS * 10,
                          RemoteClassifierConfig(endpoint=endpoint,
                                                 batch_size=2))
    big = classify_remote(TEXTS * 10,
                          RemoteClassifierConfig(endpoint=endpoint,
                                                 batch_size=500))
    assert one == big == EXPECTED * 10


def test_empty_input_is_empty_output(stub_server):
    endpoint, _ = stub_server
    assert classify_remote([], RemoteClassifierConfig(endpoint=endpoint)) == []


def test_malformed_label_raises_protocol_error(stub_server):
    endpoint, handler = stub_server
    handler.mode = "bad_label"
    with pytest.raises(ProtocolError, match="unknown label"):
        classify_remote(TEXTS, RemoteClassifierConfig(endpoint=endpoint))


def test_short_response_raises_protocol_error(stub_server):
    endpoint, handler = stub_server
    handler.mode = "short"
    with pytest.raises(ProtocolError, match="label count"):
        classify_remote(TEXTS, RemoteClassifierConfig(endpoint=endpoint))


def test_transport_failures_retry_then_succeed(stub_server):
    endpoint, handler = stub_server
    handler.mode = "flaky"
    handler.fail_budget = 2
    config = RemoteClassifierConfig(endpoint=endpoint, retries=2)
    assert classify_remote(TEXTS, config) == EXPECTED


def test_exhausted_retries_name_failed_indices(stub_server):
    endpoint, handler = stub_server
    handler.mode = "always_500"
    config = RemoteClassifierConfig(endpoint=endpoint, batch_size=3,
                                    retries=1)
    with pytest.raises(RemoteBatchError) as err:
        classify_remote(TEXTS, config)
    assert err.value.failed_indices == [0, 1, 2]


def test_remote_classifier_adapter(stub_server):
    endpoint, _ = stub_server
    clf = RemoteClassifier(RemoteClassifierConfig(endpoint=endpoint))
    assert clf.predict(TEXTS) == EXPECTED


def test_config_rejects_bad_batch_size():
    with pytest.raises(ValueError):
        RemoteClassifierConfig(endpoint="http://x", batch_size=0)

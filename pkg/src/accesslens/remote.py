"""Client for the remote classification wire protocol.

POST {endpoint}/classify with {"texts": [...]}; the response must be
{"labels": [...]} of equal length, each label one of the four lowercase
attitude strings.  Anything else is a protocol error, never silently
coerced.
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from .agreement import AttitudeLabel

VALID_LABELS = frozenset(label.value for label in AttitudeLabel)


class ProtocolError(RuntimeError):
    pass


class RemoteBatchError(RuntimeError):
    def __init__(self, message: str, failed_indices: list[int]) -> None:
        super().__init__(f"{message} (failed indices {failed_indices})")
        self.failed_indices = failed_indices


@dataclass(frozen=True)
class RemoteClassifierConfig:
    endpoint: str
    batch_size: int = 64
    timeout: float = 30.0
    retries: int = 2

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")


def _classify_batch(texts: list[str], config: RemoteClassifierConfig,
                    session: requests.Session) -> list[str]:
    url = config.endpoint.rstrip("/") + "/classify"
    response = session.post(url, json={"texts": texts},
                            timeout=config.timeout)
    if response.status_code != 200:
        raise ProtocolError(f"classify returned HTTP {response.status_code}")
    try:
        payload = response.json()
    except ValueError as exc:
        raise ProtocolError(f"malformed response body: {exc}") from exc
    labels = payload.get("labels") if isinstance(payload, dict) else None
    if not isinstance(labels, list):
        raise ProtocolError("response missing 'labels' list")
    if len(labels) != len(texts):
        raise ProtocolError(
            f"label count {len(labels)} != text count {len(texts)}")
    for label in labels:
        if label not in VALID_LABELS:
            raise ProtocolError(f"unknown label string {label!r}")
    return labels


def classify_remote(texts: list[str], config: RemoteClassifierConfig,
                    session: requests.Session | None = None) -> list[str]:
    """One lowercase label per text, order-preserving.

    Batches are sized by the config; a batch that exhausts its retries
    raises :class:`RemoteBatchError` naming the failed input indices.
    Protocol violations (bad status, wrong length, stray label strings)
    are raised immediately and never retried.
    """
    if session is None:
        session = requests.Session()
    labels: list[str] = []
    for start in range(0, len(texts), config.batch_size):
        batch = texts[start:start + config.batch_size]
        attempt = 0
        while True:
            try:
                labels.extend(_classify_batch(batch, config, session))
                break
            except ProtocolError:
                raise
            except requests.RequestException as exc:
                attempt += 1
                if attempt > config.retries:
                    raise RemoteBatchError(
                        f"remote classify failed after {attempt} attempts: {exc}",
                        list(range(start, start + len(batch))),
                    ) from exc
    return labels


class RemoteClassifier:
    """Adapter exposing the same predict() surface as TextClassifier."""

    def __init__(self, config: RemoteClassifierConfig) -> None:
        self.config = config
        self._session = requests.Session()

    def predict(self, texts: list[str]) -> list[str]:
        return classify_remote(texts, self.config, session=self._session)

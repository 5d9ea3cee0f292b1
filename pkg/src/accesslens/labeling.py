"""Apply a classifier (native or remote) across a snippet stream."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Protocol

from .agreement import AttitudeLabel
from .keywords import AccessibilitySnippet


class Classifier(Protocol):
    def predict(self, texts: list[str]) -> list[str]: ...


@dataclass(frozen=True)
class LabeledSnippet:
    snippet: AccessibilitySnippet
    label: AttitudeLabel


def label_corpus(snippets: Iterable[AccessibilitySnippet],
                 classifier: Classifier, batch_size: int = 256,
                 counts: dict | None = None) -> Iterator[LabeledSnippet]:
    """Label every snippet exactly once, preserving order.

    ``counts`` (if given) is filled with per-label totals as the stream
    is consumed.
    """
    batch: list[AccessibilitySnippet] = []

    def flush() -> Iterator[LabeledSnippet]:
        labels = classifier.predict([s.targeted_text for s in batch])
        if len(labels) != len(batch):
            raise RuntimeError("classifier changed batch length")
        for snippet, raw in zip(batch, labels):
            label = AttitudeLabel.parse(str(raw))
            if counts is not None:
                counts[label.value] = counts.get(label.value, 0) + 1
            yield LabeledSnippet(snippet=snippet, label=label)
        batch.clear()

    for snippet in snippets:
        batch.append(snippet)
        if len(batch) >= batch_size:
            yield from flush()
    if batch:
        yield from flush()


def write_labeled_snippets(path: str,
                           labeled: Iterable[LabeledSnippet]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in labeled:
            fh.write(json.dumps({
                "review_id": item.snippet.review_id,
                "poi_id": item.snippet.poi_id,
                "matched_keywords": list(item.snippet.matched_keywords),
                "targeted_text": item.snippet.targeted_text,
                "full_text": item.snippet.full_text,
                "label": item.label.value,
            }, ensure_ascii=False))
            fh.write("\n")


def read_labeled_snippets(path: str) -> Iterator[LabeledSnippet]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            yield LabeledSnippet(
                snippet=AccessibilitySnippet(
                    review_id=str(obj["review_id"]),
                    poi_id=str(obj["poi_id"]),
                    matched_keywords=tuple(obj.get("matched_keywords", [])),
                    targeted_text=str(obj["targeted_text"]),
                    full_text=str(obj.get("full_text", obj["targeted_text"])),
                ),
                label=AttitudeLabel.parse(obj["label"]),
            )


def write_snippets(path: str,
                   snippets: Iterable[AccessibilitySnippet]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in snippets:
            fh.write(json.dumps({
                "review_id": s.review_id,
                "poi_id": s.poi_id,
                "matched_keywords": list(s.matched_keywords),
                "targeted_text": s.targeted_text,
                "full_text": s.full_text,
            }, ensure_ascii=False))
            fh.write("\n")


def read_snippets(path: str) -> Iterator[AccessibilitySnippet]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            yield AccessibilitySnippet(
                review_id=str(obj["review_id"]),
                poi_id=str(obj["poi_id"]),
                matched_keywords=tuple(obj.get("matched_keywords", [])),
                targeted_text=str(obj["targeted_text"]),
                full_text=str(obj.get("full_text", obj["targeted_text"])),
            )

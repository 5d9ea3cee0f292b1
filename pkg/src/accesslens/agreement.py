"""Labeled examples, inter-annotator agreement, and train/test splitting."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence


class AttitudeLabel(enum.Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"
    UNRELATED = "unrelated"

    @classmethod
    def parse(cls, value: str) -> "AttitudeLabel":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown attitude label: {value!r}") from None


LABEL_ORDER = (AttitudeLabel.NEGATIVE, AttitudeLabel.NEUTRAL,
               AttitudeLabel.POSITIVE, AttitudeLabel.UNRELATED)


@dataclass(frozen=True)
class LabeledExample:
    review_id: str
    text: str
    label: AttitudeLabel
    annotator_id: str | None = None


def load_labeled_examples(path: str) -> list[LabeledExample]:
    """Line-delimited {review_id, targeted_text, label} records."""
    examples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            examples.append(LabeledExample(
                review_id=str(obj["review_id"]),
                text=str(obj["targeted_text"]),
                label=AttitudeLabel.parse(obj["label"]),
                annotator_id=obj.get("annotator_id"),
            ))
    return examples


@dataclass(frozen=True)
class AgreementResult:
    alpha: float
    observed_disagreement: float
    expected_disagreement: float
    degenerate: bool = False


def krippendorff_alpha(
        items: Sequence[tuple[object, object, object]]) -> AgreementResult:
    """Nominal two-coder agreement, 1 - D_o/D_e, via the coincidence matrix.

    ``items`` rows are (item_id, label_a, label_b).  Label values are
    compared for equality only (nominal metric); the four attitude classes
    are categorical, so no label is "between" two others.

    When every coincidence falls on the diagonal (D_o = 0) the result is 1.
    When D_e = 0 (all annotations identical) the value is returned as the
    degenerate 1.0 with a diagnostic flag.
    """
    if len(items) < 2:
        raise ValueError("need at least 2 items")
    labels = sorted({str(a) for _, a, b in items} | {str(b) for _, a, b in items})
    index = {lab: i for i, lab in enumerate(labels)}
    k = len(labels)
    # Coincidence matrix: each item contributes both orderings of its pair.
    coincidence = [[0.0] * k for _ in range(k)]
    for _, a, b in items:
        ia, ib = index[str(a)], index[str(b)]
        coincidence[ia][ib] += 1.0
        coincidence[ib][ia] += 1.0
    n_c = [sum(row) for row in coincidence]
    n_total = sum(n_c)
    d_o = sum(coincidence[i][j]
              for i in range(k) for j in range(k) if i != j) / n_total
    d_e = sum(n_c[i] * n_c[j]
              for i in range(k) for j in range(k) if i != j)
    d_e /= n_total * (n_total - 1)
    if d_e == 0.0:
        return AgreementResult(1.0, d_o, d_e, degenerate=True)
    return AgreementResult(1.0 - d_o / d_e, d_o, d_e)


def split(examples: Sequence[LabeledExample], ratio: float, seed: int,
          stratified: bool = False
          ) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """Deterministic train/test split with |train| = round(ratio * n).

    Unstratified by default; ``stratified`` splits within each class and
    is provided for experiments only.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be in (0, 1)")
    n = len(examples)
    if n < 2:
        raise ValueError("need at least 2 examples to split")
    rng = random.Random(seed)
    if not stratified:
        order = list(examples)
        rng.shuffle(order)
        n_train = round(ratio * n)
        return order[:n_train], order[n_train:]
    train: list[LabeledExample] = []
    test: list[LabeledExample] = []
    for label in LABEL_ORDER:
        group = [e for e in examples if e.label is label]
        rng.shuffle(group)
        n_train = round(ratio * len(group))
        train.extend(group[:n_train])
        test.extend(group[n_train:])
    return train, test


def class_histogram(examples: Iterable[LabeledExample]
                    ) -> dict[AttitudeLabel, int]:
    counts = {label: 0 for label in LABEL_ORDER}
    for example in examples:
        counts[example.label] += 1
    return counts

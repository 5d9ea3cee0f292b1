"""Classifier quality metrics: per-class precision/recall/F1, accuracy,
and the confusion matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class EvalReport:
    classes: tuple
    confusion: tuple[tuple[int, ...], ...]  # rows = gold, cols = predicted
    precision: dict
    recall: dict
    f1: dict
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    n: int


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def evaluate(pred: Sequence, gold: Sequence,
             classes: Sequence | None = None) -> EvalReport:
    """One-vs-rest precision/recall/F1 per class, macro averages, accuracy.

    0/0 ratios are defined as 0.  ``classes`` fixes row/column order of
    the confusion matrix; by default the sorted union of observed labels.
    """
    if len(pred) != len(gold):
        raise ValueError("pred and gold must have equal length")
    if not gold:
        raise ValueError("need at least one example")
    if classes is None:
        classes = sorted({str(x) for x in pred} | {str(x) for x in gold})
        index = {c: i for i, c in enumerate(classes)}
        pred = [str(x) for x in pred]
        gold = [str(x) for x in gold]
    else:
        classes = list(classes)
        index = {c: i for i, c in enumerate(classes)}
    k = len(classes)
    confusion = [[0] * k for _ in range(k)]
    for p, g in zip(pred, gold):
        confusion[index[g]][index[p]] += 1
    precision, recall, f1 = {}, {}, {}
    for i, cls in enumerate(classes):
        tp = confusion[i][i]
        pred_total = sum(confusion[r][i] for r in range(k))
        gold_total = sum(confusion[i])
        p = _safe_div(tp, pred_total)
        r = _safe_div(tp, gold_total)
        precision[cls] = p
        recall[cls] = r
        f1[cls] = _safe_div(2 * p * r, p + r)
    n = len(gold)
    return EvalReport(
        classes=tuple(classes),
        confusion=tuple(tuple(row) for row in confusion),
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=sum(precision.values()) / k,
        macro_recall=sum(recall.values()) / k,
        macro_f1=sum(f1.values()) / k,
        accuracy=sum(confusion[i][i] for i in range(k)) / n,
        n=n,
    )

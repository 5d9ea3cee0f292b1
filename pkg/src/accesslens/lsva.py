"""Lexical salience-valence analysis over labeled snippets.

Each review counts at most once per word (presence, not frequency).
Salience is log10 of the number of reviews containing the word; valence
is (positive count - negative count) over that total, so neutral and
unrelated reviews dampen valence through the denominator.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

from .agreement import AttitudeLabel
from .labeling import LabeledSnippet
from .textfeatures import tokenize


@dataclass(frozen=True)
class LsvaEntry:
    word: str
    n_total: int
    n_positive: int
    n_negative: int
    salience: float
    valence: float


def load_stopwords(path: str) -> frozenset[str]:
    words = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#", 1)[0].strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def lsva_compute(snippets: Iterable[LabeledSnippet],
                 stopwords: frozenset[str] = frozenset(),
                 min_total: int = 10) -> list[LsvaEntry]:
    """Per-word salience/valence entries over targeted review text.

    The targeted sentences are used because that is the text the attitude
    label describes.  Words seen in fewer than ``min_total`` reviews are
    dropped.
    """
    if min_total < 1:
        raise ValueError("min_total must be >= 1")
    totals: dict[str, int] = {}
    positives: dict[str, int] = {}
    negatives: dict[str, int] = {}
    for item in snippets:
        words = {w for w in tokenize(item.snippet.targeted_text)
                 if w not in stopwords}
        for word in words:
            totals[word] = totals.get(word, 0) + 1
            if item.label is AttitudeLabel.POSITIVE:
                positives[word] = positives.get(word, 0) + 1
            elif item.label is AttitudeLabel.NEGATIVE:
                negatives[word] = negatives.get(word, 0) + 1
    entries = []
    for word in sorted(totals):
        n_total = totals[word]
        if n_total < min_total:
            continue
        n_pos = positives.get(word, 0)
        n_neg = negatives.get(word, 0)
        entries.append(LsvaEntry(
            word=word,
            n_total=n_total,
            n_positive=n_pos,
            n_negative=n_neg,
            salience=math.log10(n_total),
            valence=(n_pos - n_neg) / n_total,
        ))
    return entries


def lsva_export(entries: list[LsvaEntry], path: str) -> None:
    """Scatter-plot data file, sorted by salience descending."""
    ordered = sorted(entries, key=lambda e: (-e.salience, e.word))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "salience", "valence", "n_total",
                         "n_positive", "n_negative"])
        for e in ordered:
            writer.writerow([e.word, repr(e.salience), repr(e.valence),
                             e.n_total, e.n_positive, e.n_negative])

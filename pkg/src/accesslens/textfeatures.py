"""Tokenization and TF-IDF features.

The weighting is implemented exactly as used throughout this pipeline:

    tfidf(t, d) = tf(t, d) * idf(t)
    tf(t, d)    = count(t in d) / len(tokens(d))
    idf(t)      = log(N / (1 + df(t)))

with natural log by default.  Note the ``1 + df`` term makes idf negative
whenever df(t) + 1 > N (e.g. a single-document corpus); the formula is
applied as-is rather than clamped, and the log base is recorded with the
vocabulary so serialized models are unambiguous.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy import sparse

_TOKEN = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric word sequences; everything else is a separator."""
    return _TOKEN.findall(text.lower())


@dataclass
class Vocabulary:
    """Term index plus document frequencies from the fitting corpus."""

    index: dict[str, int]
    doc_freq: dict[str, int]
    n_docs: int
    idf_base: str = "e"  # "e" or "10"

    def __post_init__(self) -> None:
        if self.n_docs < 1:
            raise ValueError("vocabulary requires at least one document")
        if self.idf_base not in ("e", "10"):
            raise ValueError("idf_base must be 'e' or '10'")

    def __len__(self) -> int:
        return len(self.index)

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term)
        if df is None:
            return 0.0
        ratio = self.n_docs / (1.0 + df)
        return math.log10(ratio) if self.idf_base == "10" else math.log(ratio)


class TfidfVectorizer:
    """Fit a vocabulary on a corpus and map documents to sparse vectors.

    Parameters
    ----------
    idf_base : "e" (default) or "10"; the log base used in idf.
    """

    def __init__(self, idf_base: str = "e") -> None:
        self.idf_base = idf_base
        self.vocabulary_: Vocabulary | None = None

    def get_params(self, deep: bool = True) -> dict:
        return {"idf_base": self.idf_base}

    def set_params(self, **params) -> "TfidfVectorizer":
        for key, value in params.items():
            if not hasattr(self, key):
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, docs: list[str]) -> "TfidfVectorizer":
        if not docs:
            raise ValueError("need at least one document")
        doc_freq: dict[str, int] = {}
        for doc in docs:
            for term in set(tokenize(doc)):
                doc_freq[term] = doc_freq.get(term, 0) + 1
        index = {term: i for i, term in enumerate(sorted(doc_freq))}
        self.vocabulary_ = Vocabulary(index=index, doc_freq=doc_freq,
                                      n_docs=len(docs), idf_base=self.idf_base)
        return self

    def transform(self, docs: list[str]) -> sparse.csr_matrix:
        vocab = self.vocabulary_
        if vocab is None:
            raise RuntimeError("vectorizer is not fitted")
        rows, cols, vals = [], [], []
        for r, doc in enumerate(docs):
            for col, weight in transform_doc(doc, vocab):
                rows.append(r)
                cols.append(col)
                vals.append(weight)
        return sparse.csr_matrix(
            (vals, (rows, cols)), shape=(len(docs), len(vocab)), dtype=np.float64
        )

    def fit_transform(self, docs: list[str]) -> sparse.csr_matrix:
        return self.fit(docs).transform(docs)


def transform_doc(doc: str, vocab: Vocabulary) -> list[tuple[int, float]]:
    """Sparse (term index, weight) pairs for one document.

    Out-of-vocabulary tokens contribute nothing; an empty token stream
    yields the zero vector.
    """
    tokens = tokenize(doc)
    if not tokens:
        return []
    counts: dict[str, int] = {}
    for tok in tokens:
        counts[tok] = counts.get(tok, 0) + 1
    n_tokens = len(tokens)
    pairs = []
    for term, count in counts.items():
        col = vocab.index.get(term)
        if col is None:
            continue
        pairs.append((col, (count / n_tokens) * vocab.idf(term)))
    pairs.sort()
    return pairs

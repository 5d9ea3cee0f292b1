"""K-fold cross-validation and exhaustive hyperparameter grid search."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from .linear import TextClassifier

# Grid values mirroring the shipped defaults; external solver tags are
# accepted but all map onto the native optimizer.
DEFAULT_GRIDS = {
    "logistic_regression": {
        "C": [0.1, 0.5, 1, 2, 5, 10, 20],
        "max_iter": [10, 20, 50, 100, 200],
        "solver": ["sag", "saga", "lbfgs", "newton-cg"],
    },
    "sgd": {
        "alpha": [1e-4, 1e-3, 1e-2, 1e-1, 1, 10],
        "max_iter": [500, 800, 1000, 2000, 3000],
        "penalty": ["l2", "l1", "elasticnet"],
    },
}


def kfold(n: int, k: int, seed: int,
          labels=None, stratified: bool = False) -> list[list[int]]:
    """Partition indices 0..n-1 into k validation folds of near-equal size.

    Unstratified by default; with ``stratified`` each class is spread
    round-robin over folds.
    """
    if k < 2:
        raise ValueError("need at least 2 folds")
    if n < k:
        raise ValueError("more folds than items")
    rng = random.Random(seed)
    if stratified:
        if labels is None:
            raise ValueError("stratified folds require labels")
        folds: list[list[int]] = [[] for _ in range(k)]
        by_class: dict[str, list[int]] = {}
        for i, lab in enumerate(labels):
            by_class.setdefault(str(lab), []).append(i)
        cursor = 0
        for lab in sorted(by_class):
            idx = by_class[lab]
            rng.shuffle(idx)
            for i in idx:
                folds[cursor % k].append(i)
                cursor += 1
        return [sorted(f) for f in folds]
    order = list(range(n))
    rng.shuffle(order)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for j in range(k):
        size = base + (1 if j < extra else 0)
        folds.append(sorted(order[start:start + size]))
        start += size
    return folds


@dataclass(frozen=True)
class GridSearchResult:
    best_params: dict
    best_score: float
    results: list  # (params, mean validation accuracy) in grid order


def load_grid(path: str) -> dict:
    """Grid file: JSON object of hyperparameter name -> list of values."""
    with open(path, "r", encoding="utf-8") as fh:
        grid = json.load(fh)
    if not isinstance(grid, dict) or not all(isinstance(v, list)
                                             for v in grid.values()):
        raise ValueError(f"grid file must map names to value lists: {path}")
    return grid


def grid_search(kind: str, grid: dict, k: int, texts: list[str], labels,
                seed: int = 0, stratified: bool = False) -> GridSearchResult:
    """Evaluate the full Cartesian grid with shared K-fold splits.

    Folds are built once and reused for every combination; ties are broken
    by the first-listed combination.  The vectorizer is refit on each
    training fold so no validation document leaks into the vocabulary.
    """
    labels = [str(v) for v in labels]
    folds = kfold(len(texts), k, seed, labels=labels, stratified=stratified)
    names = list(grid)
    combos = [dict(zip(names, values))
              for values in itertools.product(*(grid[n] for n in names))]
    results = []
    best_params = None
    best_score = -1.0
    for params in combos:
        scores = []
        for fold in folds:
            val = set(fold)
            train_idx = [i for i in range(len(texts)) if i not in val]
            clf = TextClassifier.train(
                kind, params,
                [texts[i] for i in train_idx],
                [labels[i] for i in train_idx],
                seed=seed,
            )
            pred = clf.predict([texts[i] for i in fold])
            gold = [labels[i] for i in fold]
            scores.append(sum(p == g for p, g in zip(pred, gold)) / len(fold))
        mean = sum(scores) / len(scores)
        results.append((params, mean))
        if mean > best_score:
            best_score = mean
            best_params = params
    return GridSearchResult(best_params=best_params, best_score=best_score,
                            results=results)

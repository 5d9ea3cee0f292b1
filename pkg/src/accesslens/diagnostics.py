"""Multicollinearity diagnostics: variance inflation factors and
iterative pruning of columns with VIF > 5."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

VIF_LIMIT = 5.0
_R2_CAP = 1.0 - 1e-12


def compute_vif(X: np.ndarray, names: list[str]) -> dict[str, float]:
    """VIF_j = 1 / (1 - R^2_j) from regressing column j on the others
    (with intercept).  Exact collinearity reports +inf."""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    if p < 2:
        raise ValueError("need at least 2 columns")
    if n <= p:
        raise ValueError("need more rows than columns")
    vifs = {}
    ones = np.ones((n, 1))
    for j in range(p):
        yj = X[:, j]
        others = np.hstack([ones, np.delete(X, j, axis=1)])
        beta, *_ = np.linalg.lstsq(others, yj, rcond=None)
        resid = yj - others @ beta
        tss = float(((yj - yj.mean()) ** 2).sum())
        if tss == 0:
            raise ValueError(f"column {names[j]!r} is constant")
        r2 = 1.0 - float((resid ** 2).sum()) / tss
        vifs[names[j]] = float("inf") if r2 >= _R2_CAP else 1.0 / (1.0 - r2)
    return vifs


@dataclass
class VifPruneResult:
    kept: list[str]
    dropped: list[tuple[str, float]] = field(default_factory=list)
    final_vifs: dict[str, float] = field(default_factory=dict)


def prune_vif(X: np.ndarray, names: list[str],
              limit: float = VIF_LIMIT) -> VifPruneResult:
    """Iteratively drop the max-VIF column while any exceeds ``limit``.

    Ties break by column order; infinite VIFs (exact collinearity) sort
    above everything and are dropped first.  Terminates because the
    column count strictly decreases.
    """
    X = np.asarray(X, dtype=float)
    names = list(names)
    result = VifPruneResult(kept=names)
    while len(names) >= 2:
        vifs = compute_vif(X, names)
        worst = max(names, key=lambda n: vifs[n])
        if vifs[worst] <= limit:
            result.final_vifs = vifs
            break
        result.dropped.append((worst, vifs[worst]))
        j = names.index(worst)
        names.pop(j)
        X = np.delete(X, j, axis=1)
    else:
        result.final_vifs = dict.fromkeys(names, 1.0)
    result.kept = names
    return result

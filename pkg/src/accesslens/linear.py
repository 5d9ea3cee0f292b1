"""Native linear classifiers over TF-IDF features.

Two trainers share the multinomial softmax model:

* ``LogisticRegressionClassifier`` minimizes the regularized maximum
  likelihood objective with L-BFGS (deterministic; the per-iteration
  objective trace is kept for inspection).
* ``SgdLinearClassifier`` minimizes regularized logistic loss with
  seeded stochastic updates and the l2 / l1 / elasticnet penalty options.

Grid files may name external solver tags (sag, saga, lbfgs, newton-cg);
they are accepted and mapped onto the single native solver, since the
contract is the optimum reached, not the algorithm label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, sparse

from .textfeatures import TfidfVectorizer, Vocabulary

_ACCEPTED_SOLVER_TAGS = ("lbfgs", "sag", "saga", "newton-cg")


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _encode_labels(y) -> tuple[np.ndarray, list]:
    classes = sorted({str(v) for v in y})
    index = {c: i for i, c in enumerate(classes)}
    return np.array([index[str(v)] for v in y], dtype=np.intp), classes


class _LinearBase:
    """Shared scoring/prediction for fitted softmax models."""

    classes_: list
    coef_: np.ndarray        # (n_classes, n_features)
    intercept_: np.ndarray   # (n_classes,)
    converged_: bool

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X @ self.coef_.T) + self.intercept_

    def predict(self, X) -> list:
        scores = self.decision_function(X)
        return [self.classes_[i] for i in scores.argmax(axis=1)]

    def predict_proba(self, X) -> np.ndarray:
        return _softmax(self.decision_function(X))

    def get_params(self, deep: bool = True) -> dict:
        return {k: v for k, v in vars(self).items() if not k.endswith("_")}

    def set_params(self, **params):
        for key, value in params.items():
            if key.endswith("_") or not hasattr(self, key):
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def _check_fit_inputs(self, X, y) -> None:
        if X.shape[0] != len(y):
            raise ValueError("X and y length mismatch")
        if X.shape[0] < 4:
            raise ValueError("need at least 4 training examples")
        if len(set(str(v) for v in y)) < 2:
            raise ValueError("need at least 2 classes")


class LogisticRegressionClassifier(_LinearBase):
    """Multinomial logistic regression, L2-penalized, solved with L-BFGS.

    Objective: sum of negative log-likelihoods + ||W||^2 / (2 C).
    The intercept is unpenalized.  Training is deterministic; ``seed`` is
    accepted for interface uniformity only.
    """

    def __init__(self, C: float = 1.0, max_iter: int = 100,
                 solver: str = "lbfgs", tol: float = 1e-8,
                 seed: int = 0) -> None:
        if solver not in _ACCEPTED_SOLVER_TAGS:
            raise ValueError(f"unknown solver tag {solver!r}")
        self.C = C
        self.max_iter = max_iter
        self.solver = solver
        self.tol = tol
        self.seed = seed

    def fit(self, X, y) -> "LogisticRegressionClassifier":
        X = sparse.csr_matrix(X) if not sparse.issparse(X) else X.tocsr()
        self._check_fit_inputs(X, y)
        codes, classes = _encode_labels(y)
        n, d = X.shape
        k = len(classes)
        onehot = np.zeros((n, k))
        onehot[np.arange(n), codes] = 1.0
        trace: list[float] = []

        def objective(theta: np.ndarray):
            W = theta[: k * d].reshape(k, d)
            b = theta[k * d:]
            scores = np.asarray(X @ W.T) + b
            shifted = scores - scores.max(axis=1, keepdims=True)
            logz = np.log(np.exp(shifted).sum(axis=1))
            nll = float((logz - shifted[np.arange(n), codes]).sum())
            loss = nll + (W ** 2).sum() / (2.0 * self.C)
            prob = np.exp(shifted) / np.exp(shifted).sum(axis=1, keepdims=True)
            delta = prob - onehot
            grad_w = np.asarray(delta.T @ X) + W / self.C
            grad_b = delta.sum(axis=0)
            return loss, np.concatenate([grad_w.ravel(), grad_b])

        def record(theta: np.ndarray) -> None:
            trace.append(objective(theta)[0])

        theta0 = np.zeros(k * d + k)
        result = optimize.minimize(
            objective, theta0, jac=True, method="L-BFGS-B", callback=record,
            options={"maxiter": self.max_iter, "ftol": self.tol,
                     "gtol": self.tol},
        )
        self.classes_ = classes
        self.coef_ = result.x[: k * d].reshape(k, d)
        self.intercept_ = result.x[k * d:]
        self.converged_ = bool(result.success)
        self.loss_trace_ = trace
        return self


class SgdLinearClassifier(_LinearBase):
    """Regularized softmax classifier trained with stochastic updates.

    Objective: mean negative log-likelihood + alpha * penalty(W), with
    penalty one of l2 (||W||^2 / 2), l1 (||W||_1), or elasticnet
    (0.15 l1 + 0.85 l2).  Deterministic for a fixed seed.
    """

    def __init__(self, alpha: float = 1e-4, max_iter: int = 1000,
                 penalty: str = "l2", eta0: float = 0.5,
                 l1_ratio: float = 0.15, tol: float = 1e-5,
                 seed: int = 0) -> None:
        if penalty not in ("l2", "l1", "elasticnet"):
            raise ValueError(f"unknown penalty {penalty!r}")
        self.alpha = alpha
        self.max_iter = max_iter
        self.penalty = penalty
        self.eta0 = eta0
        self.l1_ratio = l1_ratio
        self.tol = tol
        self.seed = seed

    def _penalty_terms(self) -> tuple[float, float]:
        if self.penalty == "l2":
            return 0.0, 1.0
        if self.penalty == "l1":
            return 1.0, 0.0
        return self.l1_ratio, 1.0 - self.l1_ratio

    def fit(self, X, y) -> "SgdLinearClassifier":
        X = sparse.csr_matrix(X) if not sparse.issparse(X) else X.tocsr()
        self._check_fit_inputs(X, y)
        codes, classes = _encode_labels(y)
        n, d = X.shape
        k = len(classes)
        l1_w, l2_w = self._penalty_terms()
        rng = np.random.default_rng(self.seed)
        W = np.zeros((k, d))
        b = np.zeros(k)
        Xd = X.toarray()
        self.converged_ = False
        step = 0
        prev_loss = np.inf
        self.loss_trace_ = []
        for _ in range(self.max_iter):
            order = rng.permutation(n)
            for i in order:
                step += 1
                eta = self.eta0 / (1.0 + self.eta0 * self.alpha * step)
                xi = Xd[i]
                scores = W @ xi + b
                scores -= scores.max()
                prob = np.exp(scores)
                prob /= prob.sum()
                prob[codes[i]] -= 1.0
                grad_w = np.outer(prob, xi) + self.alpha * l2_w * W
                W -= eta * grad_w
                if l1_w:
                    # Soft-threshold step for the l1 component.
                    shrink = eta * self.alpha * l1_w
                    W = np.sign(W) * np.maximum(np.abs(W) - shrink, 0.0)
                b -= eta * prob
            loss = self._loss(Xd, codes, W, b)
            self.loss_trace_.append(loss)
            if abs(prev_loss - loss) < self.tol:
                self.converged_ = True
                break
            prev_loss = loss
        self.classes_ = classes
        self.coef_ = W
        self.intercept_ = b
        return self

    def _loss(self, Xd, codes, W, b) -> float:
        scores = Xd @ W.T + b
        shifted = scores - scores.max(axis=1, keepdims=True)
        logz = np.log(np.exp(shifted).sum(axis=1))
        nll = float((logz - shifted[np.arange(len(codes)), codes]).mean())
        l1_w, l2_w = self._penalty_terms()
        return nll + self.alpha * (l1_w * np.abs(W).sum()
                                   + l2_w * 0.5 * (W ** 2).sum())


MODEL_KINDS = {
    "logistic_regression": LogisticRegressionClassifier,
    "sgd": SgdLinearClassifier,
}


def make_classifier(kind: str, hyperparams: dict, seed: int = 0):
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown classifier kind {kind!r}")
    return MODEL_KINDS[kind](seed=seed, **hyperparams)


@dataclass
class TextClassifier:
    """A fitted vectorizer + linear model pair, serializable to one file."""

    vectorizer: TfidfVectorizer
    model: _LinearBase
    kind: str
    hyperparams: dict = field(default_factory=dict)

    @classmethod
    def train(cls, kind: str, hyperparams: dict, texts: list[str], labels,
              seed: int = 0, idf_base: str = "e") -> "TextClassifier":
        vectorizer = TfidfVectorizer(idf_base=idf_base)
        X = vectorizer.fit_transform(texts)
        model = make_classifier(kind, hyperparams, seed=seed)
        model.fit(X, [str(v) for v in labels])
        return cls(vectorizer=vectorizer, model=model, kind=kind,
                   hyperparams=dict(hyperparams))

    def predict(self, texts: list[str]) -> list[str]:
        return self.model.predict(self.vectorizer.transform(texts))

    def save(self, path: str) -> None:
        vocab = self.vectorizer.vocabulary_
        payload = {
            "format": "accesslens-text-classifier/1",
            "kind": self.kind,
            "hyperparams": self.hyperparams,
            "idf_base": vocab.idf_base,
            "n_docs": vocab.n_docs,
            "terms": [
                [term, vocab.index[term], vocab.doc_freq[term]]
                for term in sorted(vocab.index)
            ],
            "classes": self.model.classes_,
            "coef": self.model.coef_.tolist(),
            "intercept": self.model.intercept_.tolist(),
            "converged": self.model.converged_,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "TextClassifier":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != "accesslens-text-classifier/1":
            raise ValueError(f"not a classifier file: {path}")
        vectorizer = TfidfVectorizer(idf_base=payload["idf_base"])
        vectorizer.vocabulary_ = Vocabulary(
            index={t: i for t, i, _ in payload["terms"]},
            doc_freq={t: df for t, _, df in payload["terms"]},
            n_docs=payload["n_docs"],
            idf_base=payload["idf_base"],
        )
        model = make_classifier(payload["kind"], payload["hyperparams"])
        model.classes_ = payload["classes"]
        model.coef_ = np.array(payload["coef"])
        model.intercept_ = np.array(payload["intercept"])
        model.converged_ = payload["converged"]
        return cls(vectorizer=vectorizer, model=model, kind=payload["kind"],
                   hyperparams=payload["hyperparams"])

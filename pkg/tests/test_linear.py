import numpy as np
import pytest
from scipy import sparse

from accesslens.linear import (LogisticRegressionClassifier,
                               SgdLinearClassifier, TextClassifier,
                               make_classifier)


def _blobs(seed=0, n_per_class=100, k=4, d=6, sep=4.0):
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(k, d)) * sep
    X = np.vstack([centers[c] + rng.normal(size=(n_per_class, d))
                   for c in range(k)])
    y = np.repeat([f"c{c}" for c in range(k)], n_per_class)
    return sparse.csr_matrix(X), y


def test_logistic_separable_two_class():
    X = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 2.0],
                                    [1.0, 0.0], [2.0, 0.0]]))
    y = np.array(["a", "a", "b", "b"])
    clf = LogisticRegressionClassifier(C=10.0, max_iter=200).fit(X, y)
    assert list(clf.predict(X)) == list(y)
    proba = clf.predict_proba(X)
    assert np.allclose(proba.sum(axis=1), 1.0)


def test_logistic_loss_trace_non_increasing():
    X, y = _blobs(seed=1)
    clf = LogisticRegressionClassifier(C=1.0, max_iter=100).fit(X, y)
    trace = clf.loss_trace_
    assert len(trace) >= 2
    assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))


def test_logistic_four_class_recovery():
    X, y = _blobs(seed=2)
    clf = LogisticRegressionClassifier(C=1.0, max_iter=200).fit(X, y)
    assert (clf.predict(X) == y).mean() >= 0.98


def test_logistic_bit_identical_reruns():
    X, y = _blobs(seed=3)
    a = LogisticRegressionClassifier(C=1.0, max_iter=50).fit(X, y)
    b = LogisticRegressionClassifier(C=1.0, max_iter=50).fit(X, y)
    assert (a.coef_ == b.coef_).all()
    assert (a.intercept_ == b.intercept_).all()


def test_logistic_regularization_shrinks_weights():
    X, y = _blobs(seed=4)
    tight = LogisticRegressionClassifier(C=0.01, max_iter=200).fit(X, y)
    loose = LogisticRegressionClassifier(C=100.0, max_iter=200).fit(X, y)
    assert np.linalg.norm(tight.coef_) < np.linalg.norm(loose.coef_)


@pytest.mark.parametrize("penalty", ["l2", "l1", "elasticnet"])
def test_sgd_penalties_learn_blobs(penalty):
    X, y = _blobs(seed=5)
    clf = SgdLinearClassifier(alpha=1e-4, max_iter=300, penalty=penalty,
                              seed=0).fit(X, y)
    assert (clf.predict(X) == y).mean() >= 0.95


def test_sgd_l1_sparser_than_l2():
    # 4 informative dimensions plus 20 pure-noise ones: the l1 proximal
    # step should zero noise weights exactly, plain l2 shrinkage never does.
    rng = np.random.default_rng(0)
    centers = rng.normal(size=(4, 4)) * 4.0
    informative = np.vstack([centers[c] + rng.normal(size=(100, 4))
                             for c in range(4)])
    X = sparse.csr_matrix(np.hstack([informative,
                                     rng.normal(size=(400, 20))]))
    y = np.repeat([f"c{c}" for c in range(4)], 100)
    l1 = SgdLinearClassifier(alpha=0.05, max_iter=300, penalty="l1",
                             seed=0).fit(X, y)
    l2 = SgdLinearClassifier(alpha=0.05, max_iter=300, penalty="l2",
                             seed=0).fit(X, y)
    assert (np.abs(l1.coef_) < 1e-12).sum() >= 20
    assert (np.abs(l2.coef_) < 1e-12).sum() == 0
    assert (l1.predict(X) == y).mean() >= 0.95


def test_sgd_seeded_determinism():
    X, y = _blobs(seed=7)
    a = SgdLinearClassifier(alpha=1e-3, max_iter=100, seed=11).fit(X, y)
    b = SgdLinearClassifier(alpha=1e-3, max_iter=100, seed=11).fit(X, y)
    c = SgdLinearClassifier(alpha=1e-3, max_iter=100, seed=12).fit(X, y)
    assert (a.coef_ == b.coef_).all()
    assert not (a.coef_ == c.coef_).all()


def test_get_set_params_round_trip():
    clf = LogisticRegressionClassifier(C=2.0, max_iter=25)
    params = clf.get_params()
    assert params["C"] == 2.0 and params["max_iter"] == 25
    clf.set_params(C=5.0)
    assert clf.get_params()["C"] == 5.0
    with pytest.raises(ValueError):
        clf.set_params(unknown=1)


def test_make_classifier_kinds():
    assert isinstance(make_classifier("logistic_regression", {"C": 1.0}),
                      LogisticRegressionClassifier)
    assert isinstance(make_classifier("sgd", {"alpha": 0.1}),
                      SgdLinearClassifier)
    with pytest.raises(ValueError):
        make_classifier("random_forest", {})


TEXTS = ["wonderful smooth ramp", "broken blocked entrance",
         "sign near the door", "cheap and near the freeway"] * 25
LABELS = ["positive", "negative", "neutral", "unrelated"] * 25


def test_text_classifier_train_predict_save_load(tmp_path):
    clf = TextClassifier.train("logistic_regression",
                               {"C": 1.0, "max_iter": 100}, TEXTS, LABELS)
    assert clf.predict(TEXTS) == LABELS
    path = tmp_path / "model.json"
    clf.save(str(path))
    loaded = TextClassifier.load(str(path))
    assert loaded.predict(TEXTS) == LABELS
    probe = ["broken ramp wonderful sign freeway", ""]
    assert loaded.predict(probe) == clf.predict(probe)


def test_text_classifier_save_is_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    TextClassifier.train("logistic_regression", {"C": 1.0, "max_iter": 50},
                         TEXTS, LABELS).save(str(p1))
    TextClassifier.train("logistic_regression", {"C": 1.0, "max_iter": 50},
                         TEXTS, LABELS).save(str(p2))
    assert p1.read_bytes() == p2.read_bytes()

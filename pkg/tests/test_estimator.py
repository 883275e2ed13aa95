"""Scikit-learn interface contract for the detector wrapper."""

import numpy as np
import pytest
from sklearn.base import clone

from codedetect import LikelihoodRatioDetector, encode, lrt_decide, parse_octal_generators


@pytest.fixture()
def sample_rows(code57, code45):
    rng = np.random.default_rng(8)
    rows, labels = [], []
    for _ in range(40):
        label = int(rng.integers(0, 2))
        code = code57 if label == 0 else code45
        clean = encode(code, rng.integers(0, 2, 32))
        rows.append(clean ^ (rng.random(64) < 0.1))
        labels.append(label)
    return np.array(rows), np.array(labels)


def test_get_set_params_roundtrip():
    det = LikelihoodRatioDetector(code1="11,5", code2="7,10", epsilon=0.2)
    params = det.get_params()
    assert params["code1"] == "11,5" and params["epsilon"] == 0.2
    cloned = clone(det)
    assert cloned.get_params() == params


def test_predict_matches_lrt(code57, code45, sample_rows):
    X, _ = sample_rows
    det = LikelihoodRatioDetector(code1="5,7", code2="4,5", epsilon=0.1).fit()
    preds = det.predict(X)
    for row, pred in zip(X, preds):
        decision = lrt_decide(code57, code45, row, 0.1).decision
        assert pred == (0 if decision == "H1" else 1)


def test_score_beats_chance(sample_rows):
    X, y = sample_rows
    det = LikelihoodRatioDetector(epsilon=0.1).fit()
    assert det.score(X, y) > 0.7


def test_accepts_convcode_objects(code57, code45, sample_rows):
    X, _ = sample_rows
    a = LikelihoodRatioDetector(code1=code57, code2=code45, epsilon=0.1).fit().predict(X)
    b = LikelihoodRatioDetector(code1="5,7", code2="4,5", epsilon=0.1).fit().predict(X)
    assert np.array_equal(a, b)


def test_tie_goes_to_label_zero(code57):
    det = LikelihoodRatioDetector(code1=code57, code2=code57, epsilon=0.1).fit()
    X = np.array([[1, 0, 1, 1], [0, 0, 1, 0]])
    assert det.predict(X).tolist() == [0, 0]


def test_validation_errors(sample_rows):
    X, _ = sample_rows
    det = LikelihoodRatioDetector()
    with pytest.raises(RuntimeError):
        det.predict(X)
    det.fit()
    with pytest.raises(ValueError):
        det.predict(X[:, :63])  # odd width
    with pytest.raises(ValueError):
        det.predict(np.full((2, 4), 2))
    with pytest.raises(ValueError):
        LikelihoodRatioDetector(code1="5,7", code2="5,7,3").fit()
    with pytest.raises(ValueError):
        LikelihoodRatioDetector(epsilon=0.9).fit()


def test_decision_function_sign(code57, code45):
    rng = np.random.default_rng(9)
    clean = encode(code57, rng.integers(0, 2, 50))
    det = LikelihoodRatioDetector(code1="5,7", code2="4,5", epsilon=1e-4).fit()
    margin = det.decision_function(clean[None, :])
    assert margin[0] < 0  # toward label 0 = code1

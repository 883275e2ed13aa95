"""Scikit-learn compatible wrapper around the likelihood ratio detector.

Rows of X are received bit sequences (all the same length); the predicted
label is 0 when the first code explains the row better, 1 otherwise, with
ties resolved toward label 0.  Useful for composing with the usual sklearn
tooling (cross-validation, pipelines, metrics).
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array

from .codes import ConvCode, _bits_to_words, parse_octal_generators
from .detector import _bcjr_batch

__all__ = ["LikelihoodRatioDetector"]


def _resolve_code(spec) -> ConvCode:
    if isinstance(spec, ConvCode):
        return spec
    if isinstance(spec, str):
        return parse_octal_generators([p for p in spec.split(",") if p.strip()])
    raise TypeError("code must be a ConvCode or an octal string like '5,7'")


class LikelihoodRatioDetector(BaseEstimator, ClassifierMixin):
    """Decide which of two candidate convolutional codes produced each row.

    Parameters
    ----------
    code1, code2 : ConvCode or comma-separated octal string, e.g. "5,7".
    epsilon : BSC crossover probability assumed by the likelihoods.
    tau : likelihood-ratio threshold; 1.0 is Bayes-optimal for equal priors.
    mode : "scaled" (safe) or "unscaled" (reproduces large-N underflow).
    """

    def __init__(self, code1="5,7", code2="4,5", epsilon=0.1, tau=1.0, mode="scaled"):
        self.code1 = code1
        self.code2 = code2
        self.epsilon = epsilon
        self.tau = tau
        self.mode = mode

    def fit(self, X=None, y=None):
        """Resolve and validate the candidate pair; no parameters are learned."""
        c1, c2 = _resolve_code(self.code1), _resolve_code(self.code2)
        if c1.n != c2.n:
            raise ValueError("codes must share the output word length n")
        if not 0.0 <= self.epsilon <= 0.5:
            raise ValueError("epsilon must be in [0, 0.5]")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        self.code1_ = c1
        self.code2_ = c2
        self.classes_ = np.array([0, 1])
        if X is not None:
            self._validate_bits(X)
        return self

    def _validate_bits(self, X) -> np.ndarray:
        X = check_array(X, dtype=None)
        bits = np.asarray(X)
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("X must contain only 0/1 entries")
        if X.shape[1] == 0 or X.shape[1] % self.code1_.n:
            raise ValueError(f"row length must be a positive multiple of n={self.code1_.n}")
        return bits.astype(np.int64)

    def decision_function(self, X) -> np.ndarray:
        """Log-likelihood margin toward label 1 (code2), shifted by ln(tau)."""
        if not hasattr(self, "code1_"):
            raise RuntimeError("call fit() before predicting")
        bits = self._validate_bits(X)
        words = _bits_to_words(bits, self.code1_.n)
        ll1, _ = _bcjr_batch(self.code1_, words, float(self.epsilon), self.mode)
        ll2, _ = _bcjr_batch(self.code2_, words, float(self.epsilon), self.mode)
        ratio = np.zeros_like(ll1)
        differ = ll1 != ll2  # equal (possibly both -inf) ties to zero
        ratio[differ] = ll1[differ] - ll2[differ]
        return math.log(self.tau) - ratio

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(int)

"""Sequence likelihoods P(Y | code) and the likelihood ratio test.

The forward-backward recursion runs over memory-states with the emission
attached to branches: the metric of branch (s' -> s) on received word y is
2^{-k} * eps^d * (1-eps)^(n-d) with d the Hamming distance between y and the
branch output.  alpha starts concentrated on the zero state and, because
messages are not tail-terminated, the backward pass is the constant one
vector, so the likelihood is just the sum of the final alphas.

``scaled`` mode renormalizes alpha every step and accumulates the log scale
factors; it cannot underflow.  ``unscaled`` mode works in the linear domain
on purpose: it reproduces the numerical collapse at large N that motivates
the scaled variant, and flags it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
from scipy.special import logsumexp

from .codes import ConvCode, _bits_to_words, _encode_words, trellis

__all__ = [
    "BcjrLikelihood",
    "LikelihoodResult",
    "bcjr_log_likelihood",
    "brute_force_log_likelihood",
    "lrt_decide",
]

BcjrMode = Literal["scaled", "unscaled"]

BRUTE_FORCE_BIT_CAP = 20


class BcjrLikelihood(NamedTuple):
    log_likelihood: float
    underflow: bool


@dataclass(frozen=True)
class LikelihoodResult:
    """Per-hypothesis log-likelihoods and the threshold decision."""

    log_likelihood_h1: float
    log_likelihood_h2: float
    log_ratio: float
    decision: str  # "H1" | "H2"
    underflow_h1: bool = False
    underflow_h2: bool = False


def _check_mode(mode: str) -> None:
    if mode not in ("scaled", "unscaled"):
        raise ValueError(f"mode must be 'scaled' or 'unscaled', got {mode!r}")


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon <= 0.5:
        raise ValueError(f"epsilon must be in [0, 0.5], got {epsilon}")


@functools.lru_cache(maxsize=None)
def _metric_tensors(code: ConvCode, epsilon: float) -> np.ndarray:
    """T[y, s', s] = summed branch metrics s'->s under received word y."""
    tr = trellis(code)
    n_states, n_inputs = tr.next_state.shape
    n_words = 1 << code.n
    weights = np.array(
        [
            epsilon**d * (1 - epsilon) ** (code.n - d) / n_inputs
            for d in range(code.n + 1)
        ]
    )
    T = np.zeros((n_words, n_states, n_states))
    for y in range(n_words):
        dist = np.bitwise_count(tr.output ^ y)
        for s in range(n_states):
            for u in range(n_inputs):
                T[y, s, tr.next_state[s, u]] += weights[dist[s, u]]
    T.setflags(write=False)
    return T


def _bcjr_batch(
    code: ConvCode, rx_words: np.ndarray, epsilon: float, mode: BcjrMode
) -> tuple[np.ndarray, np.ndarray]:
    """Log-likelihoods and underflow flags for a (B, N) matrix of received words."""
    T = _metric_tensors(code, float(epsilon))
    n_trials, n_steps = rx_words.shape
    n_states = T.shape[1]
    alpha = np.zeros((n_trials, n_states))
    alpha[:, 0] = 1.0
    if mode == "scaled":
        log_lik = np.zeros(n_trials)
        dead = np.zeros(n_trials, dtype=bool)
        for t in range(n_steps):
            new = np.empty_like(alpha)
            column = rx_words[:, t]
            for y in range(T.shape[0]):
                idx = np.nonzero(column == y)[0]
                if idx.size:
                    new[idx] = alpha[idx] @ T[y]
            scale = new.sum(axis=1)
            dead |= scale == 0.0
            safe = np.where(scale == 0.0, 1.0, scale)
            alpha = new / safe[:, None]
            log_lik += np.log(safe)
        log_lik[dead] = -np.inf
        return log_lik, np.zeros(n_trials, dtype=bool)

    for t in range(n_steps):
        new = np.empty_like(alpha)
        column = rx_words[:, t]
        for y in range(T.shape[0]):
            idx = np.nonzero(column == y)[0]
            if idx.size:
                new[idx] = alpha[idx] @ T[y]
        alpha = new
    total = alpha.sum(axis=1)
    underflow = (total == 0.0) | (total < np.finfo(float).tiny)
    with np.errstate(divide="ignore"):
        log_lik = np.log(total)
    return log_lik, underflow


def _received_to_words(code: ConvCode, received) -> np.ndarray:
    rx = np.asarray(received)
    if rx.ndim != 1 or rx.size % code.n:
        raise ValueError(f"received length must be a multiple of n={code.n}")
    if rx.size == 0:
        raise ValueError("received sequence is empty")
    if not np.isin(rx, (0, 1)).all():
        raise ValueError("received sequence must be binary")
    return _bits_to_words(rx, code.n)


def bcjr_log_likelihood(
    code: ConvCode, received, epsilon: float, mode: BcjrMode = "scaled"
) -> BcjrLikelihood:
    """ln P(received | code) under BSC(epsilon), marginalized over messages.

    An impossible observation at eps=0 yields -inf (a value, not an error).
    """
    _check_mode(mode)
    _check_epsilon(epsilon)
    words = _received_to_words(code, received)
    log_lik, flags = _bcjr_batch(code, words[None, :], epsilon, mode)
    return BcjrLikelihood(float(log_lik[0]), bool(flags[0]))


def brute_force_log_likelihood(code: ConvCode, received, epsilon: float) -> float:
    """Exhaustive marginalization over all 2^(N*k) messages (oracle-grade).

    Kept deliberately independent of the forward recursion: it enumerates
    complete codewords and sums their likelihoods with log-sum-exp.
    """
    _check_epsilon(epsilon)
    rx_words = _received_to_words(code, received)
    n_steps = rx_words.size
    msg_bits = n_steps * code.k
    if msg_bits > BRUTE_FORCE_BIT_CAP:
        raise ValueError(f"2^{msg_bits} messages exceed the enumeration cap")
    msgs = np.arange(1 << msg_bits, dtype=np.int64)
    shifts = np.arange(msg_bits - 1, -1, -1)
    bits = (msgs[:, None] >> shifts) & 1
    words = _encode_words(code, bits)
    dist = np.bitwise_count(words ^ rx_words[None, :]).sum(axis=1)
    total_bits = n_steps * code.n
    if epsilon == 0.0:
        exact = int((dist == 0).sum())
        return math.log(exact) - msg_bits * math.log(2) if exact else -math.inf
    terms = dist * math.log(epsilon) + (total_bits - dist) * math.log1p(-epsilon)
    return float(logsumexp(terms)) - msg_bits * math.log(2)


def lrt_decide(
    code1: ConvCode,
    code2: ConvCode,
    received,
    epsilon: float,
    tau: float = 1.0,
    mode: BcjrMode = "scaled",
) -> LikelihoodResult:
    """Decide which code produced `received` by thresholding the log ratio.

    Ties (including a doubly impossible or doubly underflowed observation)
    deterministically go to H1.
    """
    if code1.n != code2.n:
        raise ValueError("codes must share the output word length n")
    if tau <= 0.0:
        raise ValueError("threshold must be positive")
    ll1 = bcjr_log_likelihood(code1, received, epsilon, mode)
    ll2 = bcjr_log_likelihood(code2, received, epsilon, mode)
    ratio = 0.0 if ll1.log_likelihood == ll2.log_likelihood else (
        ll1.log_likelihood - ll2.log_likelihood
    )
    return LikelihoodResult(
        log_likelihood_h1=ll1.log_likelihood,
        log_likelihood_h2=ll2.log_likelihood,
        log_ratio=ratio,
        decision="H1" if ratio >= math.log(tau) else "H2",
        underflow_h1=ll1.underflow,
        underflow_h2=ll2.underflow,
    )


def _decide_batch(
    code1: ConvCode,
    code2: ConvCode,
    rx_words: np.ndarray,
    epsilon: float,
    tau: float = 1.0,
    mode: BcjrMode = "scaled",
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decisions (0 for H1, 1 for H2) plus per-trial underflow flags."""
    ll1, uf1 = _bcjr_batch(code1, rx_words, epsilon, mode)
    ll2, uf2 = _bcjr_batch(code2, rx_words, epsilon, mode)
    ratio = np.zeros_like(ll1)
    differ = ll1 != ll2  # equal (possibly both -inf) ties to zero
    ratio[differ] = ll1[differ] - ll2[differ]
    return (ratio < math.log(tau)).astype(np.int8), uf1 | uf2

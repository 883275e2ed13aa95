"""Output-state Markov chains of a convolutional code.

The chain state is the window of the last m output words (clean words for
the noise-free chain, received words otherwise), packed with the most recent
word in the least significant n bits.  A transition ``s -> s'`` is admissible
only when the windows overlap: ``s' = ((s mod 2^{n(m-1)}) << n) | w`` for
some new word ``w``, so every row has at most 2^n nonzero entries.

Two noisy constructions are provided.  ``noisy_transition_exact`` computes
each entry as the ratio of an (m+1)-word window probability to an m-word
window probability under a uniform prior over the corresponding section
codes; its rows sum to one by construction and it is the ground truth used
everywhere else.  ``noisy_transition_factored`` instead chains the clean
transition through per-window noise likelihoods and renormalizes; it treats
the noise on consecutive windows as independent even though the windows
overlap, so it only approximates the exact construction (the gap is worth
measuring, see the tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.sparse

from .codes import ConvCode, section_code, trellis, validate_assumptions, weight_enumerator

__all__ = [
    "TransitionMatrix",
    "ClosedFormRow",
    "noise_free_transition",
    "noisy_transition_exact",
    "noisy_transition_factored",
    "closed_form_p",
    "stationary_distribution",
    "max_entry_difference",
    "admissible_successors",
]

STATE_CAP = 2**26


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Sparse row-stochastic matrix over the 2^{nm} output states.

    ``rows`` maps a state index to its successor->probability map; states
    that never occur (clean-unreachable windows) simply have no row.
    """

    dimension: int
    rows: dict[int, dict[int, float]]
    state_space: str  # "clean" | "noisy"
    epsilon: float | None = None

    def row(self, state: int) -> dict[int, float]:
        return self.rows.get(state, {})

    def nonempty_rows(self) -> list[int]:
        return sorted(self.rows)

    def entries(self) -> Iterator[tuple[int, int, float]]:
        for i in sorted(self.rows):
            for j, p in sorted(self.rows[i].items()):
                yield i, j, p

    def to_csr(self) -> scipy.sparse.csr_matrix:
        rows, cols, vals = [], [], []
        for i, j, p in self.entries():
            rows.append(i)
            cols.append(j)
            vals.append(p)
        return scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(self.dimension, self.dimension)
        )


@dataclass(frozen=True)
class ClosedFormRow:
    """The two-level row of an analysis-eligible noisy chain."""

    p: float

    @property
    def row(self) -> tuple[float, float, float, float]:
        """Nonzero row entries in ascending order."""
        lo, hi = (1.0 - self.p) / 2.0, self.p / 2.0
        return (lo, lo, hi, hi)


def admissible_successors(state: int, n: int, m: int) -> list[int]:
    """All states reachable from `state` by shifting in one new word."""
    base = (state & ((1 << (n * (m - 1))) - 1)) << n
    return [base | w for w in range(1 << n)]


def _check_state_cap(code: ConvCode) -> int:
    dim_bits = code.n * code.m
    if 2**dim_bits > STATE_CAP:
        raise ValueError(f"state space 2^{dim_bits} exceeds cap {STATE_CAP}")
    return 1 << dim_bits


def noise_free_transition(code: ConvCode) -> TransitionMatrix:
    """Tally clean-window transitions over all start states and input blocks.

    Equivalent to sweeping every (2m+1)-step input sequence: each of the
    2^{mk} memory-states times 2^{k(m+1)} further inputs contributes one
    (window, next window) pair to the frequency table.
    """
    dim = _check_state_cap(code)
    tr = trellis(code)
    m, n, k = code.m, code.n, code.k
    n_states = code.state_count()
    blocks = np.arange(1 << (k * (m + 1)), dtype=np.int64)
    mask = (1 << k) - 1
    state = np.repeat(np.arange(n_states, dtype=np.int64)[:, None], blocks.size, axis=1)
    words = []
    for t in range(m + 1):
        u = (blocks >> ((m - t) * k)) & mask
        words.append(tr.output[state, u[None, :]])
        state = tr.next_state[state, u[None, :]]
    frm = np.zeros_like(words[0])
    for w in words[:m]:
        frm = (frm << n) | w
    to = np.zeros_like(words[0])
    for w in words[1:]:
        to = (to << n) | w
    pairs, counts = np.unique(frm.ravel() * dim + to.ravel(), return_counts=True)
    rows: dict[int, dict[int, float]] = {}
    for pair, c in zip(pairs, counts):
        rows.setdefault(int(pair) // dim, {})[int(pair) % dim] = float(c)
    for r in rows.values():
        total = sum(r.values())
        for j in r:
            r[j] /= total
    return TransitionMatrix(dimension=dim, rows=rows, state_space="clean", epsilon=None)


def _window_probs(codewords: np.ndarray, n_bits: int, eps: float) -> np.ndarray:
    """P[window] for every packed window of `n_bits` bits, uniform prior on codewords."""
    targets = np.arange(1 << n_bits, dtype=np.int64)
    weights = eps ** np.arange(n_bits + 1) * (1 - eps) ** np.arange(n_bits, -1, -1)
    probs = np.empty(targets.size)
    chunk = max(1, (1 << 23) // max(1, codewords.size))
    for lo in range(0, targets.size, chunk):
        dists = np.bitwise_count(targets[lo : lo + chunk, None] ^ codewords[None, :])
        probs[lo : lo + chunk] = weights[dists].sum(axis=1)
    return probs / codewords.size


def noisy_transition_exact(code: ConvCode, epsilon: float) -> TransitionMatrix:
    """Entry (s -> s' via word w) = P[(m+1)-window [s, w]] / P[m-window s].

    Window probabilities average the BSC likelihood over the uniform prior
    on the section codes of m+1 and m steps; each row then sums to one
    because the (m+1)-step code projects onto the m-step code.
    """
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(
            "epsilon must be in (0, 0.5]; use noise_free_transition for the clean chain"
        )
    dim = _check_state_cap(code)
    n, m = code.n, code.m
    d_m = np.fromiter(section_code(code, m).codewords, dtype=np.int64)
    d_m1 = np.fromiter(section_code(code, m + 1).codewords, dtype=np.int64)
    den = _window_probs(d_m, n * m, epsilon)
    num = _window_probs(d_m1, n * (m + 1), epsilon)
    rows: dict[int, dict[int, float]] = {}
    for s in range(dim):
        r = {}
        for w in range(1 << n):
            succ = ((s & ((1 << (n * (m - 1))) - 1)) << n) | w
            r[succ] = float(num[(s << n) | w] / den[s])
        rows[s] = r
    return TransitionMatrix(dimension=dim, rows=rows, state_space="noisy", epsilon=epsilon)


def noisy_transition_factored(code: ConvCode, epsilon: float) -> TransitionMatrix:
    """Chain the clean transitions through per-window BSC likelihoods.

    entry(s, s') ∝ sum over clean windows c, c' of
    L(s|c) * P'(c'|c) * L(s'|c'), renormalized over the admissible
    successors of s only.
    """
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(
            "epsilon must be in (0, 0.5]; use noise_free_transition for the clean chain"
        )
    dim = _check_state_cap(code)
    n, m = code.n, code.m
    clean = noise_free_transition(code)
    reach = np.array(clean.nonempty_rows(), dtype=np.int64)
    p_clean = np.zeros((reach.size, reach.size))
    index = {int(c): i for i, c in enumerate(reach)}
    for i, c in enumerate(reach):
        for j, p in clean.rows[int(c)].items():
            p_clean[i, index[j]] = p
    n_bits = n * m
    weights = epsilon ** np.arange(n_bits + 1) * (1 - epsilon) ** np.arange(n_bits, -1, -1)
    dists = np.bitwise_count(np.arange(dim, dtype=np.int64)[:, None] ^ reach[None, :])
    lik = weights[dists]  # L[s, c]
    raw = lik @ p_clean @ lik.T
    rows: dict[int, dict[int, float]] = {}
    for s in range(dim):
        succ = admissible_successors(s, n, m)
        vals = raw[s, succ]
        total = vals.sum()
        rows[s] = {sp: float(v / total) for sp, v in zip(succ, vals)}
    return TransitionMatrix(dimension=dim, rows=rows, state_space="noisy", epsilon=epsilon)


def closed_form_p(code: ConvCode, epsilon: float) -> ClosedFormRow:
    """Row parameter of an analysis-eligible noisy chain from weight enumerators.

    p = sum_j A_j^(3) eps^j (1-eps)^(3n-j) / sum_j A_j^(2) eps^j (1-eps)^(2n-j),
    with the enumerator sums left unnormalized (the denominator is identically
    one for eligible codes, and this normalization is the one that matches the
    exact construction: p -> 1 as eps -> 0 and p = 0.5 at eps = 0.5).
    """
    if not 0.0 <= epsilon <= 0.5:
        raise ValueError(f"epsilon must be in [0, 0.5], got {epsilon}")
    report = validate_assumptions(code)
    if not report.is_analysis_eligible:
        raise ValueError("closed form requires a non-degenerate k=1, n=2, m=2 code")
    a3 = weight_enumerator(section_code(code, 3)).counts
    a2 = weight_enumerator(section_code(code, 2)).counts
    w3 = sum(a * epsilon**j * (1 - epsilon) ** (3 * code.n - j) for j, a in enumerate(a3))
    w2 = sum(a * epsilon**j * (1 - epsilon) ** (2 * code.n - j) for j, a in enumerate(a2))
    return ClosedFormRow(p=w3 / w2)


def stationary_distribution(
    matrix: TransitionMatrix, tol: float = 1e-10, max_iter: int = 10**5
) -> np.ndarray:
    """Left fixed point of the chain by power iteration, L1-normalized."""
    P = matrix.to_csr()
    pi = np.zeros(matrix.dimension)
    support = matrix.nonempty_rows()
    if not support:
        raise ValueError("matrix has no nonempty rows")
    pi[support] = 1.0 / len(support)
    for _ in range(max_iter):
        nxt = pi @ P
        total = nxt.sum()
        if total == 0.0:
            raise RuntimeError("probability mass vanished; chain support is not closed")
        nxt /= total
        if np.abs(nxt @ P - nxt).sum() <= tol:
            return nxt
        pi = nxt
    raise RuntimeError(f"stationary distribution did not converge in {max_iter} iterations")


def max_entry_difference(a: TransitionMatrix, b: TransitionMatrix) -> float:
    """Largest |a_ij - b_ij| over the union of supports (inf if shapes differ)."""
    if a.dimension != b.dimension:
        return float("inf")
    if set(a.rows) != set(b.rows):
        return float("inf")
    worst = 0.0
    for i, ra in a.rows.items():
        rb = b.rows[i]
        for j in set(ra) | set(rb):
            worst = max(worst, abs(ra.get(j, 0.0) - rb.get(j, 0.0)))
    return worst

"""Feed-forward convolutional codes: representation, encoding, trellises and
the block codes spanned by short trellis sections.

Conventions used throughout the package:

* Generator taps are ordered by delay: tap 0 multiplies the current input
  ``u_t``, tap ``d`` multiplies ``u_{t-d}``.
* A memory-state packs the last ``m`` input vectors into an integer with the
  most recent input in the least significant ``k`` bits, so the state update
  is ``(state << k | input) mod 2**(m*k)``.
* An n-bit output word ``[v0 .. v_{n-1}]`` packs into an integer with ``v0``
  as the most significant bit (the word reads like its binary string).
* Codewords of an i-step section code concatenate words oldest-first, newest
  word in the least significant n bits (the same layout as the Markov output
  states built on top of them).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ConvCode",
    "Trellis",
    "SectionCode",
    "WeightEnumerator",
    "AssumptionReport",
    "parse_octal_generators",
    "encode",
    "trellis",
    "section_code",
    "weight_enumerator",
    "validate_assumptions",
    "codes_equivalent",
]

# Packed-codeword enumeration guards for section_code().
PATH_CAP = 2**24
_PACKED_BIT_CAP = 62


@dataclass(frozen=True)
class ConvCode:
    """A binary feed-forward convolutional code of rate k/n and memory m.

    ``generators[j][i][d]`` is the tap of output line ``j`` on input line
    ``i`` at delay ``d``.  All tap rows have length ``m + 1``.
    """

    k: int
    n: int
    m: int
    generators: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.k < 1 or self.n <= self.k:
            raise ValueError(f"need n > k >= 1, got k={self.k}, n={self.n}")
        if self.m < 0:
            raise ValueError("memory order must be non-negative")
        if len(self.generators) != self.n:
            raise ValueError(f"expected {self.n} generators, got {len(self.generators)}")
        for g in self.generators:
            if len(g) != self.k or any(len(row) != self.m + 1 for row in g):
                raise ValueError("every generator needs k tap rows of m+1 taps")
            if any(b not in (0, 1) for row in g for b in row):
                raise ValueError("taps must be 0 or 1")
            if all(b == 0 for row in g for b in row):
                raise ValueError("all-zero generator")
        if self.m > 0 and not any(row[self.m] for g in self.generators for row in g):
            raise ValueError("m is not tight: no generator taps position m")

    @classmethod
    def make(cls, generators: Sequence, k: int = 1) -> "ConvCode":
        """Build a code from tap vectors, inferring n and m.

        For ``k == 1`` each generator may be a flat sequence of m+1 bits;
        for ``k > 1`` each generator is a k-sequence of tap rows.
        """
        canon = []
        for g in generators:
            rows = [g] if k == 1 and g and not isinstance(g[0], (list, tuple)) else g
            canon.append(tuple(tuple(int(b) for b in row) for row in rows))
        if not canon:
            raise ValueError("no generators given")
        taps_len = len(canon[0][0])
        return cls(k=k, n=len(canon), m=taps_len - 1, generators=tuple(canon))

    def state_count(self) -> int:
        return 1 << (self.m * self.k)

    def describe(self) -> str:
        """Octal form for k=1 codes, tap tuples otherwise."""
        if self.k == 1:
            return ",".join(
                format(int("".join(str(b) for b in g[0]), 2), "o") for g in self.generators
            )
        return repr(self.generators)


@dataclass(frozen=True, eq=False)
class Trellis:
    """Branch tables of a code: ``next_state[s, u]`` and ``output[s, u]``.

    ``s`` ranges over the 2**(m*k) memory-states and ``u`` over the 2**k
    input vectors; ``output`` holds packed n-bit words.
    """

    code: ConvCode
    next_state: np.ndarray
    output: np.ndarray

    @property
    def branch_count(self) -> int:
        return self.next_state.size


@dataclass(frozen=True)
class SectionCode:
    """The block code of length n*i swept out by i consecutive trellis steps."""

    steps: int
    block_length: int
    codewords: frozenset[int]
    dimension: int


@dataclass(frozen=True)
class WeightEnumerator:
    """Hamming-weight histogram of a section code: counts[w] codewords of weight w."""

    counts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class AssumptionReport:
    """Structural flags that gate the closed-form row analysis.

    ``has_collapsing_window_paths`` is true when two distinct m-step trellis
    paths emit the same m output words, so an observed window no longer pins
    down the encoder state (this happens exactly for k=1 codes whose
    generator polynomials share a nontrivial factor, and it breaks the
    two-level row structure even when the other two flags are clean).
    ``is_analysis_eligible`` requires all three flags false plus k=1, n=2,
    m=2.
    """

    has_identical_memory_states: bool
    has_equal_branch_outputs: bool
    has_collapsing_window_paths: bool
    is_analysis_eligible: bool


def parse_octal_generators(octal_strings: Sequence[str], k: int = 1) -> ConvCode:
    """Parse generators written as octal numerals, e.g. ["133", "171"].

    Each numeral expands to binary most-significant-digit first.  The longest
    expansion (leading zero bits stripped) fixes m; shorter generators are
    left-padded with zero taps.  Tap 0 is the leftmost surviving bit.
    """
    if k != 1:
        raise ValueError("octal parsing is only defined for k=1 codes")
    if not octal_strings:
        raise ValueError("empty generator list")
    values = []
    for s in octal_strings:
        s = s.strip()
        if not s or any(c not in "01234567" for c in s):
            raise ValueError(f"not an octal numeral: {s!r}")
        v = int(s, 8)
        if v == 0:
            raise ValueError(f"all-zero generator: {s!r}")
        values.append(v)
    width = max(v.bit_length() for v in values)
    taps = [tuple((v >> (width - 1 - d)) & 1 for d in range(width)) for v in values]
    return ConvCode.make(taps, k=1)


def _output_word(code: ConvCode, state: int, u: int) -> int:
    """Packed n-bit word emitted on the branch (state, input u)."""
    word = 0
    for j, g in enumerate(code.generators):
        bit = 0
        for i in range(code.k):
            row = g[i]
            if row[0]:
                bit ^= (u >> i) & 1
            for d in range(1, code.m + 1):
                if row[d]:
                    bit ^= (state >> ((d - 1) * code.k + i)) & 1
        word |= bit << (code.n - 1 - j)
    return word


@functools.lru_cache(maxsize=None)
def trellis(code: ConvCode) -> Trellis:
    """Tabulate every branch of the code's state machine."""
    n_states = code.state_count()
    n_inputs = 1 << code.k
    nxt = np.empty((n_states, n_inputs), dtype=np.int64)
    out = np.empty((n_states, n_inputs), dtype=np.int64)
    mask = n_states - 1
    for s in range(n_states):
        for u in range(n_inputs):
            nxt[s, u] = ((s << code.k) | u) & mask
            out[s, u] = _output_word(code, s, u)
    nxt.setflags(write=False)
    out.setflags(write=False)
    return Trellis(code=code, next_state=nxt, output=out)


def _words_to_bits(words: np.ndarray, n: int) -> np.ndarray:
    """(..., N) packed words -> (..., N*n) bits, v0 first within each word."""
    shifts = np.arange(n - 1, -1, -1)
    bits = (words[..., None] >> shifts) & 1
    return bits.reshape(*words.shape[:-1], -1).astype(np.int8)


def _bits_to_words(bits: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`_words_to_bits`."""
    b = np.asarray(bits).reshape(*np.shape(bits)[:-1], -1, n)
    shifts = np.arange(n - 1, -1, -1)
    return (b.astype(np.int64) << shifts).sum(axis=-1)


def _encode_words(code: ConvCode, messages: np.ndarray) -> np.ndarray:
    """Encode a (B, N*k) bit matrix into (B, N) packed output words.

    Encoders start in the all-zero memory-state.
    """
    tr = trellis(code)
    msgs = np.asarray(messages, dtype=np.int64)
    if msgs.ndim != 2 or msgs.shape[1] % code.k:
        raise ValueError("message block length must be a multiple of k")
    n_steps = msgs.shape[1] // code.k
    shifts = np.arange(code.k)
    u = (msgs.reshape(msgs.shape[0], n_steps, code.k) << shifts).sum(axis=2)
    state = np.zeros(msgs.shape[0], dtype=np.int64)
    words = np.empty((msgs.shape[0], n_steps), dtype=np.int64)
    for t in range(n_steps):
        words[:, t] = tr.output[state, u[:, t]]
        state = tr.next_state[state, u[:, t]]
    return words


def encode(code: ConvCode, message: Iterable[int]) -> np.ndarray:
    """Encode a message of N*k bits into N*n output bits.

    Output bit order: word at step t precedes the word at t+1, and within a
    word line 0's bit comes first.
    """
    msg = np.asarray(list(message) if not isinstance(message, np.ndarray) else message)
    if msg.ndim != 1:
        raise ValueError("message must be one-dimensional")
    words = _encode_words(code, msg[None, :])
    return _words_to_bits(words, code.n)[0]


def _enumerate_paths(code: ConvCode, steps: int) -> np.ndarray:
    """Packed output vectors of every (start state, input block) path."""
    tr = trellis(code)
    n_states = code.state_count()
    blocks = np.arange(1 << (steps * code.k), dtype=np.int64)
    mask = (1 << code.k) - 1
    acc = np.zeros((n_states, blocks.size), dtype=np.int64)
    state = np.repeat(np.arange(n_states, dtype=np.int64)[:, None], blocks.size, axis=1)
    for t in range(steps):
        u = (blocks >> ((steps - 1 - t) * code.k)) & mask
        acc = (acc << code.n) | tr.output[state, u[None, :]]
        state = tr.next_state[state, u[None, :]]
    return acc.ravel()


def section_code(code: ConvCode, steps: int, path_cap: int = PATH_CAP) -> SectionCode:
    """Collect the distinct output vectors of all `steps`-long trellis paths."""
    if steps < 1:
        raise ValueError("need at least one step")
    n_paths = 1 << (code.m * code.k + steps * code.k)
    if n_paths > path_cap or code.n * steps > _PACKED_BIT_CAP:
        raise ValueError(
            f"enumeration too large: {n_paths} paths of {code.n * steps} bits "
            f"(cap {path_cap} paths, {_PACKED_BIT_CAP} bits)"
        )
    distinct = np.unique(_enumerate_paths(code, steps))
    size = distinct.size
    if size & (size - 1):
        raise AssertionError("section code size is not a power of two")
    return SectionCode(
        steps=steps,
        block_length=code.n * steps,
        codewords=frozenset(int(c) for c in distinct),
        dimension=size.bit_length() - 1,
    )


def weight_enumerator(section: SectionCode) -> WeightEnumerator:
    counts = [0] * (section.block_length + 1)
    for c in section.codewords:
        counts[c.bit_count()] += 1
    return WeightEnumerator(counts=tuple(counts))


def validate_assumptions(code: ConvCode) -> AssumptionReport:
    """Report the structural assumptions behind the closed-form analysis.

    Never rejects: degenerate codes remain usable by the generic machinery.
    """
    tr = trellis(code)
    branch_outputs = [tuple(int(w) for w in row) for row in tr.output]
    identical = len(set(branch_outputs)) < len(branch_outputs)
    equal_branches = any(len(set(row)) < len(row) for row in branch_outputs)
    if code.m == 0:
        collapsing = False
    else:
        paths = code.m * code.k * 2  # log2 of (start states x m input blocks)
        collapsing = section_code(code, code.m).dimension < paths
    eligible = (
        not identical
        and not equal_branches
        and not collapsing
        and code.k == 1
        and code.n == 2
        and code.m == 2
    )
    return AssumptionReport(
        has_identical_memory_states=identical,
        has_equal_branch_outputs=equal_branches,
        has_collapsing_window_paths=collapsing,
        is_analysis_eligible=eligible,
    )


def codes_equivalent(c1: ConvCode, c2: ConvCode) -> bool:
    """True iff the codes induce the same noise-free output-state chain."""
    if (c1.k, c1.n, c1.m) != (c2.k, c2.n, c2.m):
        raise ValueError("codes must share k, n and m")
    from .markov import noise_free_transition, max_entry_difference

    return max_entry_difference(noise_free_transition(c1), noise_free_transition(c2)) == 0.0

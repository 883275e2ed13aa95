"""Bernoulli(0.5) message sources and the binary symmetric channel.

Randomness is counter-based (Philox): an :class:`RngStream` is a value, and
the same (seed, stream path) always reproduces the same bits no matter how
calls are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import ConvCode, encode

__all__ = ["ChannelParams", "RngStream", "random_message", "bsc_apply", "generate_sample"]

DEFAULT_SEED = 0x5EED_C0DE


@dataclass(frozen=True)
class ChannelParams:
    """BSC crossover probability; only the analyzed range [0, 0.5] is legal."""

    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.5:
            raise ValueError(f"crossover probability must be in [0, 0.5], got {self.epsilon}")


@dataclass(frozen=True)
class RngStream:
    """A master seed plus a path of stream indices.

    ``generator()`` always starts from the beginning of the stream, so a
    stream should be consumed by exactly one logical draw; derive children
    with :meth:`spawn` for independent draws.
    """

    seed: int
    path: tuple[int, ...] = field(default=())

    def spawn(self, *indices: int) -> "RngStream":
        return RngStream(seed=self.seed, path=self.path + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(ss))


def random_message(n_steps: int, k: int, rng: RngStream) -> np.ndarray:
    """n_steps*k independent fair bits."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    return rng.generator().integers(0, 2, size=n_steps * k, dtype=np.int8)


def bsc_apply(bits: np.ndarray, params: ChannelParams, rng: RngStream) -> np.ndarray:
    """Flip each bit independently with probability epsilon."""
    bits = np.asarray(bits, dtype=np.int8)
    flips = (rng.generator().random(bits.shape) < params.epsilon).astype(np.int8)
    return bits ^ flips


def generate_sample(
    code: ConvCode, n_steps: int, params: ChannelParams, rng: RngStream
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw (message, clean bits, received bits) for one transmission.

    Message and noise come from distinct child streams so the triple is
    reproducible from the stream value alone.
    """
    message = random_message(n_steps, code.k, rng.spawn(0))
    clean = encode(code, message)
    received = bsc_apply(clean, params, rng.spawn(1))
    return message, clean, received

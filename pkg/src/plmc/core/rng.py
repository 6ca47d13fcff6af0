"""Reproducible per-chain random streams."""

from __future__ import annotations

import numpy as np

from ..util.errors import ConfigError

_MAX_SEED = 2**64


class RngStream:
    """Counter-based random stream identified by ``(seed, stream_id)``.

    Built on Philox keyed through ``SeedSequence(seed, spawn_key=(stream_id,))``, so distinct
    stream ids are independent and equal ids replay bit-for-bit. Index sets and Gaussian noise
    come from two separate child generators: an Euler step and a one-step Poisson batch consume
    exactly the same Gaussian draws.
    """

    __slots__ = ("seed", "stream_id", "bernoulli", "gaussian")

    def __init__(self, seed: int, stream_id: int = 0) -> None:
        if not 0 <= seed < _MAX_SEED:
            raise ConfigError("seed must be an unsigned 64-bit integer", details={"seed": seed})
        if stream_id < 0:
            raise ConfigError("stream_id must be non-negative", details={"stream_id": stream_id})
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        bernoulli_seq, gaussian_seq = sequence.spawn(2)
        self.bernoulli = np.random.Generator(np.random.Philox(bernoulli_seq))
        self.gaussian = np.random.Generator(np.random.Philox(gaussian_seq))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def standard_normal(self, shape) -> np.ndarray:
        return self.gaussian.standard_normal(shape)

    def spawn(self, stream_id: int) -> RngStream:
        return RngStream(self.seed, stream_id)

    def clone(self) -> RngStream:
        """Fresh stream with the same identity, positioned at the start."""
        return RngStream(self.seed, self.stream_id)

    def copy(self) -> RngStream:
        """Stream with the same identity and the same current position."""
        twin = RngStream(self.seed, self.stream_id)
        twin.bernoulli.bit_generator.state = self.bernoulli.bit_generator.state
        twin.gaussian.bit_generator.state = self.gaussian.bit_generator.state
        return twin


__all__ = ["RngStream"]

"""numpy-backed random sources."""

import logging
import secrets
from typing import Optional

import numpy as np

from ..domain.services import Chooser, ChooserFactory

logger = logging.getLogger(__name__)


class RandomChooser(Chooser):
    """Implementation of the chooser over a numpy Generator."""

    def __init__(self, generator: np.random.Generator) -> None:
        self._generator = generator

    def choose(self, n: int) -> int:
        return int(self._generator.integers(n))


class SeedStreams(ChooserFactory):
    """Independent streams keyed by counters under one master seed.

    Stream ``key`` is seeded with ``SeedSequence(seed, spawn_key=key)``, so
    a stream's draws never depend on which other streams were opened.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed

    def stream(self, *key: int) -> Chooser:
        sequence = np.random.SeedSequence(self.seed, spawn_key=key)
        return RandomChooser(np.random.default_rng(sequence))


def resolve_seed(seed: Optional[int]) -> int:
    """Return ``seed``, or fresh 63-bit system entropy when it is None."""
    if seed is not None:
        return seed
    drawn = secrets.randbits(63)
    logger.info("Drew master seed", extra={"seed": drawn})
    return drawn

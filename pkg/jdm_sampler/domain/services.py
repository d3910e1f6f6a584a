"""Service protocols for dependency injection."""

from typing import Protocol

from .models import WeightedSample


class Chooser(Protocol):
    """Protocol for the random source driving every sampler decision."""

    def choose(self, n: int) -> int:
        """Pick an index uniformly from ``range(n)``.

        Args:
            n: Number of alternatives, at least 1

        Returns:
            The chosen index
        """
        ...


class SampleSink(Protocol):
    """Protocol for weighted-sample writers."""

    def write(self, sample: WeightedSample) -> None:
        """Persist one weighted sample.

        Args:
            sample: The sample to write

        Raises:
            InvalidInputError: If the sample cannot be serialized
        """
        ...


class ChooserFactory(Protocol):
    """Protocol for counter-based derivation of independent random streams."""

    def stream(self, *key: int) -> Chooser:
        """Open the stream identified by ``key``.

        Args:
            key: Counter path, e.g. ``(spectra_id, 1, sample_index)``

        Returns:
            A chooser whose draws depend only on the master seed and ``key``
        """
        ...

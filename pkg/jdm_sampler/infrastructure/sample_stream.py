"""Line-delimited JSON records of weighted samples.

One object per line:
``{"sample_id", "spectra_id", "log_weight", "spectra_log_weight", "n", "edges"}``
with ``edges`` a list of ``[u, v]`` pairs, ``u < v``.
"""

import json
import logging
from typing import IO, Any, Dict, Iterator

from ..domain.exceptions import InvalidInputError
from ..domain.models import LabeledGraph, WeightedSample
from ..domain.services import SampleSink

logger = logging.getLogger(__name__)


def sample_to_record(sample: WeightedSample) -> Dict[str, Any]:
    return {
        "sample_id": sample.sample_id,
        "spectra_id": sample.spectra_id,
        "log_weight": sample.log_weight,
        "spectra_log_weight": sample.spectra_log_weight,
        "n": sample.graph.n,
        "edges": [list(edge) for edge in sample.graph.edge_list()],
    }


def record_to_sample(record: Dict[str, Any], line: int = 0) -> WeightedSample:
    """Rebuild a sample from a decoded record.

    Raises:
        InvalidInputError: If a field is missing or malformed
    """
    try:
        graph = LabeledGraph.from_edges(int(record["n"]), (tuple(e) for e in record["edges"]))
        return WeightedSample(
            sample_id=int(record["sample_id"]),
            spectra_id=int(record["spectra_id"]),
            graph=graph,
            log_weight=float(record["log_weight"]),
            spectra_log_weight=float(record.get("spectra_log_weight", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"malformed sample record: {e}", line=line) from e
    except InvalidInputError as e:
        raise InvalidInputError(str(e), line=line) from e


class JsonlSampleWriter(SampleSink):
    """Implementation of the sample sink writing JSON lines to a text stream."""

    def __init__(self, stream: IO[str]) -> None:
        self._stream = stream
        self.count = 0

    def write(self, sample: WeightedSample) -> None:
        self._stream.write(json.dumps(sample_to_record(sample), separators=(",", ":")) + "\n")
        self.count += 1


def read_samples(stream: IO[str]) -> Iterator[WeightedSample]:
    """Yield samples from a JSON-lines stream, skipping blank lines.

    Raises:
        InvalidInputError: On an undecodable line, naming its number
    """
    for number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"invalid JSON: {e.msg}", line=number) from e
        if not isinstance(record, dict):
            raise InvalidInputError("record is not an object", line=number)
        yield record_to_sample(record, line=number)

"""Application use cases, one per command."""

import logging
from typing import IO, Iterable, List, Optional

from ..domain.assembler import SPECTRA_STREAM, sample_ensemble
from ..domain.core import degree_classes, degree_correlations, extract_jdm
from ..domain.estimate import estimate_report, log_weight_histogram
from ..domain.exceptions import EmptySeries, InvalidInputError, JdmSamplerError, MaxLenExceeded, ConfigurationError
from ..domain.graphicality import jdm_graphicality_failure
from ..domain.models import CommandResult, EstimateRow, Jdm, ObservableSeries, RunConfig, SpectraSample
from ..domain.oracle import enumerate_realizations
from ..domain.services import ChooserFactory, SampleSink
from ..domain.spectra import sample_spectra
from ..infrastructure import formats
from ..infrastructure.sample_stream import read_samples

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2

# input malformation; every other JdmSamplerError is a domain failure
_INPUT_ERRORS = (InvalidInputError, ConfigurationError, MaxLenExceeded)


def exit_code_for(error: JdmSamplerError) -> int:
    return EXIT_INPUT if isinstance(error, _INPUT_ERRORS) else EXIT_DOMAIN


def _failure(command: str, error: JdmSamplerError) -> CommandResult:
    logger.warning(f"{command} failed", extra={"error": str(error), "error_type": type(error).__name__})
    return CommandResult(
        exit_code=exit_code_for(error),
        report=f"error: {error}\n",
        details={"error_type": type(error).__name__},
    )


def load_jdm(path: str) -> Jdm:
    return formats.parse_jdm(formats.read_text(path))


class CheckUseCase:
    """Use case for the JDM graphicality check."""

    def execute(self, config: RunConfig) -> CommandResult:
        """Check a JDM file and describe its degree classes.

        Returns:
            Exit 0 when graphical, 1 when not, 2 on malformed input
        """
        try:
            j = load_jdm(config.input_path)
            failure = jdm_graphicality_failure(j)
            lines = [f"graphical: {'yes' if failure is None else 'no'}"]
            if failure is not None:
                lines.append(f"reason: {failure}")
                logger.info("JDM is not graphical", extra={"reason": failure})
                return CommandResult(exit_code=EXIT_DOMAIN, report="\n".join(lines) + "\n", details={"graphical": False})

            part = degree_classes(j)
            correlations = degree_correlations(j)
            lines.append("class sizes: " + " ".join(f"{a}:{part.class_size[a]}" for a in sorted(part.class_size)))
            lines.append(f"N: {part.total_nodes}")
            lines.append(f"M: {part.total_edges}")
            lines.append(
                "average neighbor degree: "
                + " ".join(f"{a}:{v:.6f}" for a, v in sorted(correlations.average_neighbor_degree.items()))
            )
            lines.append(f"assortativity: {correlations.assortativity:.6f}")
            return CommandResult(
                exit_code=EXIT_OK,
                report="\n".join(lines) + "\n",
                details={"graphical": True, "N": part.total_nodes, "M": part.total_edges},
            )
        except JdmSamplerError as e:
            return _failure("check", e)


class SampleUseCase:
    """Use case for drawing weighted graph samples."""

    def __init__(self, streams: ChooserFactory, sink: SampleSink) -> None:
        """Initialize sample use case.

        Args:
            streams: Random streams under the run's master seed
            sink: Destination of the sample records
        """
        self._streams = streams
        self._sink = sink

    def execute(self, config: RunConfig) -> CommandResult:
        """Sample ``n_spectra * samples_per_spectra`` graphs into the sink."""
        try:
            j = load_jdm(config.input_path)
            spectra: Optional[List[SpectraSample]] = None
            if config.spectra_path:
                spectra = formats.parse_spectra(formats.read_text(config.spectra_path))
            count = 0
            for sample in sample_ensemble(
                j,
                config.n_spectra,
                config.samples_per_spectra,
                self._streams,
                jobs=config.jobs,
                spectra=spectra,
            ):
                self._sink.write(sample)
                count += 1
            logger.info("Samples written", extra={"count": count})
            return CommandResult(exit_code=EXIT_OK, report=f"samples: {count}\n", details={"samples": count})
        except JdmSamplerError as e:
            return _failure("sample", e)


class SpectraUseCase:
    """Use case for the spectra-only stage."""

    def __init__(self, streams: ChooserFactory) -> None:
        self._streams = streams

    def execute(self, config: RunConfig) -> CommandResult:
        """Draw spectra matrices; the report holds the spectra blocks."""
        try:
            j = load_jdm(config.input_path)
            part = degree_classes(j)
            blocks: List[str] = []
            log_weights: List[float] = []
            for spectra_id in range(config.n_spectra):
                drawn = sample_spectra(j, self._streams.stream(spectra_id, SPECTRA_STREAM), part)
                blocks.append(formats.format_spectra(drawn.matrix, spectra_id, drawn.log_weight))
                log_weights.append(drawn.log_weight)

            if config.histogram_path:
                series = ObservableSeries(values=tuple(0.0 for _ in log_weights), log_weights=tuple(log_weights))
                formats.write_text(config.histogram_path, formats.format_histogram(log_weight_histogram(series, config.bins)))
            return CommandResult(exit_code=EXIT_OK, report="".join(blocks), details={"spectra": len(blocks)})
        except JdmSamplerError as e:
            return _failure("spectra", e)


def render_rows(rows: Iterable[EstimateRow]) -> str:
    lines = ["observable\tkey\tweighted\tproduct_weighted\tunweighted\teffective_sample_size\tn_samples"]
    for row in rows:
        lines.append(
            f"{row.observable}\t{row.key}\t{row.weighted:.6f}\t{row.product_weighted:.6f}\t"
            f"{row.unweighted:.6f}\t{row.effective_sample_size:.2f}\t{row.n_samples}"
        )
    return "\n".join(lines) + "\n"


class EstimateUseCase:
    """Use case for estimating an observable from a sample stream."""

    def __init__(self, stream: IO[str]) -> None:
        """Initialize estimate use case.

        Args:
            stream: Open JSON-lines sample stream
        """
        self._stream = stream

    def execute(self, config: RunConfig) -> CommandResult:
        """Print weighted and unweighted estimates per key."""
        try:
            rows, series = estimate_report(read_samples(self._stream), config.observable, config.max_cycle_len)
            if not rows:
                raise EmptySeries(f"no {config.observable} values in the sample stream")
            if config.histogram_path:
                formats.write_text(config.histogram_path, formats.format_histogram(log_weight_histogram(series, config.bins)))
            return CommandResult(
                exit_code=EXIT_OK,
                report=render_rows(rows),
                details={"samples": len(series), "rows": rows},
            )
        except JdmSamplerError as e:
            return _failure("estimate", e)


class ExtractUseCase:
    """Use case for extracting the JDM of an edge list."""

    def execute(self, config: RunConfig) -> CommandResult:
        """The report holds the JDM text unless it went to ``out_path``."""
        try:
            graph = formats.parse_edge_list(formats.read_text(config.input_path))
            text = formats.format_jdm(extract_jdm(graph).trimmed())
            if config.out_path:
                formats.write_text(config.out_path, text)
                return CommandResult(exit_code=EXIT_OK, report="", details={"edges": len(graph.edges)})
            return CommandResult(exit_code=EXIT_OK, report=text, details={"edges": len(graph.edges)})
        except JdmSamplerError as e:
            return _failure("extract", e)


class EnumerateUseCase:
    """Use case for the realization catalog of a small JDM."""

    def execute(self, config: RunConfig) -> CommandResult:
        """The report holds the catalog unless it went to ``out_path``."""
        try:
            j = load_jdm(config.input_path)
            catalog = enumerate_realizations(j, limit_n=config.oracle_limit)
            text = formats.format_catalog(catalog)
            details = {"classes": len(catalog.iso_classes), "labeled": len(catalog.labeled_graphs)}
            if config.out_path:
                formats.write_text(config.out_path, text)
                return CommandResult(exit_code=EXIT_OK, report="", details=details)
            return CommandResult(exit_code=EXIT_OK, report=text, details=details)
        except JdmSamplerError as e:
            return _failure("enumerate", e)

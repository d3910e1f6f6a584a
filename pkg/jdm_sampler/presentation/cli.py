"""Command-line front end.

Exit codes: 0 success, 1 domain failure (non-graphical input, empty stream,
enumeration guard), 2 malformed input or configuration.
"""

import argparse
import logging
import os
import sys
import tempfile
from typing import Callable, Dict, List, Optional

from ..application.use_cases import (
    EXIT_DOMAIN,
    EXIT_INPUT,
    CheckUseCase,
    EnumerateUseCase,
    EstimateUseCase,
    ExtractUseCase,
    SampleUseCase,
    SpectraUseCase,
)
from ..domain.estimate import MAX_CYCLE_LEN, OBSERVABLES
from ..domain.exceptions import ConfigurationError
from ..domain.models import CommandResult, RunConfig
from ..infrastructure.config import Config
from ..infrastructure.logging_config import configure_logging
from ..infrastructure.random_source import SeedStreams, resolve_seed
from ..infrastructure.sample_stream import JsonlSampleWriter

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jdm-sampler",
        description="Graphicality tests, weighted JDM graph sampling and ensemble estimates.",
    )
    parser.add_argument("--log-level", default=None, help="logging level (default: $JDM_SAMPLER_LOG_LEVEL or WARNING)")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="test whether a JDM file is graphical")
    check.add_argument("jdm_path")

    def add_seeded(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("jdm_path")
        sub.add_argument("--seed", type=int, default=None, help="master seed (default: $JDM_SAMPLER_SEED or system entropy)")
        sub.add_argument("--n-spectra", type=int, default=1)
        sub.add_argument("--out", default=None, help="output file (default: stdout)")

    sample = commands.add_parser("sample", help="sample weighted graphs realizing a JDM")
    add_seeded(sample)
    sample.add_argument("--samples-per-spectra", type=int, default=1)
    sample.add_argument("--jobs", type=int, default=None, help="worker processes (default: $JDM_SAMPLER_JOBS or 1)")
    sample.add_argument("--spectra", default=None, help="sample graphs for the spectra matrices in this file")

    spectra = commands.add_parser("spectra", help="sample degree-spectra matrices only")
    add_seeded(spectra)
    spectra.add_argument("--histogram", default=None, help="write a histogram of the spectra log-weights")
    spectra.add_argument("--bins", type=int, default=None)

    estimate = commands.add_parser("estimate", help="estimate an observable from a sample stream")
    estimate.add_argument("samples_path", help="JSON-lines sample file, or - for stdin")
    estimate.add_argument("--observable", choices=OBSERVABLES, default="clustering")
    estimate.add_argument("--max-cycle-len", type=int, default=5)
    estimate.add_argument("--histogram", default=None, help="write a histogram of the sample log-weights")
    estimate.add_argument("--bins", type=int, default=None)

    extract = commands.add_parser("extract", help="extract the JDM of an edge list")
    extract.add_argument("edge_list_path")
    extract.add_argument("--out", default=None)

    enumerate_ = commands.add_parser("enumerate", help="enumerate the realizations of a small JDM")
    enumerate_.add_argument("jdm_path")
    enumerate_.add_argument("--out", default=None)
    return parser


def build_run_config(args: argparse.Namespace, env: Config) -> RunConfig:
    """Merge flags over environment defaults and validate the result.

    Raises:
        ConfigurationError: If a count, seed or bound is out of range
    """
    input_path = getattr(args, "jdm_path", None) or getattr(args, "samples_path", None) or getattr(args, "edge_list_path")
    seed = getattr(args, "seed", None)
    jobs = getattr(args, "jobs", None)
    bins = getattr(args, "bins", None)
    config = RunConfig(
        command=args.command,
        input_path=input_path,
        seed=seed if seed is not None else env.SEED,
        n_spectra=getattr(args, "n_spectra", 1),
        samples_per_spectra=getattr(args, "samples_per_spectra", 1),
        out_path=getattr(args, "out", None),
        observable=getattr(args, "observable", "clustering"),
        max_cycle_len=getattr(args, "max_cycle_len", 5),
        jobs=jobs if jobs is not None else env.JOBS,
        spectra_path=getattr(args, "spectra", None),
        histogram_path=getattr(args, "histogram", None),
        bins=bins if bins is not None else env.HISTOGRAM_BINS,
        oracle_limit=env.ORACLE_LIMIT,
    )
    if config.n_spectra < 1 or config.samples_per_spectra < 1:
        raise ConfigurationError("sample counts must be at least 1")
    if config.jobs < 1:
        raise ConfigurationError("--jobs must be at least 1")
    if config.bins < 1:
        raise ConfigurationError("--bins must be at least 1")
    if not 3 <= config.max_cycle_len <= MAX_CYCLE_LEN:
        raise ConfigurationError(f"--max-cycle-len must lie in [3, {MAX_CYCLE_LEN}]")
    if config.seed is not None and config.seed < 0:
        raise ConfigurationError("--seed must be non-negative")
    return config


def _seeded_streams(config: RunConfig) -> SeedStreams:
    seed = resolve_seed(config.seed)
    if config.seed is None:
        print(f"seed: {seed}", file=sys.stderr)
    return SeedStreams(seed)


def cmd_check(config: RunConfig) -> CommandResult:
    return CheckUseCase().execute(config)


def cmd_sample(config: RunConfig) -> CommandResult:
    streams = _seeded_streams(config)
    if not config.out_path:
        result = SampleUseCase(streams, JsonlSampleWriter(sys.stdout)).execute(config)
        if result.exit_code == 0:
            # records own stdout
            print(result.report, end="", file=sys.stderr)
            return CommandResult(exit_code=result.exit_code, report="", details=result.details)
        return result

    # --out is replaced only after a successful run
    directory = os.path.dirname(os.path.abspath(config.out_path))
    out = tempfile.NamedTemporaryFile("w", encoding="utf-8", dir=directory, suffix=".part", delete=False)
    try:
        with out:
            result = SampleUseCase(streams, JsonlSampleWriter(out)).execute(config)
        if result.exit_code == 0:
            os.replace(out.name, config.out_path)
    finally:
        if os.path.exists(out.name):
            os.unlink(out.name)
    return result


def cmd_spectra(config: RunConfig) -> CommandResult:
    result = SpectraUseCase(_seeded_streams(config)).execute(config)
    if config.out_path and result.exit_code == 0:
        with open(config.out_path, "w", encoding="utf-8") as out:
            out.write(result.report)
        return CommandResult(exit_code=result.exit_code, report="", details=result.details)
    return result


def cmd_estimate(config: RunConfig) -> CommandResult:
    if config.input_path == "-":
        return EstimateUseCase(sys.stdin).execute(config)
    with open(config.input_path, encoding="utf-8") as stream:
        return EstimateUseCase(stream).execute(config)


def cmd_extract(config: RunConfig) -> CommandResult:
    return ExtractUseCase().execute(config)


def cmd_enumerate(config: RunConfig) -> CommandResult:
    return EnumerateUseCase().execute(config)


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "check": cmd_check,
    "sample": cmd_sample,
    "spectra": cmd_spectra,
    "estimate": cmd_estimate,
    "extract": cmd_extract,
    "enumerate": cmd_enumerate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        env = Config()
        configure_logging(args.log_level or env.LOG_LEVEL)
        config = build_run_config(args, env)
    except (ConfigurationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    try:
        logger.info("Command invoked", extra={"command": config.command, "input": config.input_path})
        result = COMMANDS[config.command](config)
    except OSError as e:
        logger.error("Command failed", extra={"command": config.command, "error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.error("Command failed", extra={"command": config.command, "error": str(e)}, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN

    stream = sys.stdout if result.exit_code == 0 or "error_type" not in result.details else sys.stderr
    print(result.report, end="", file=stream)
    return result.exit_code

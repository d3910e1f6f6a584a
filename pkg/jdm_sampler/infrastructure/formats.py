"""Text formats for JDMs, edge lists, spectra matrices, catalogs and histograms.

Blank lines and lines starting with ``#`` are skipped by every reader except
the spectra reader, which takes its block metadata from ``#`` headers.
"""

import csv
import io
import logging
import re
from pathlib import Path
from typing import Iterator, List, Optional, Set, Tuple

from ..domain.exceptions import InvalidInputError
from ..domain.models import Edge, Jdm, LabeledGraph, LogWeightHistogram, RealizationCatalog, SpectraMatrix, SpectraSample

logger = logging.getLogger(__name__)

_SPECTRA_HEADER = re.compile(r"#\s*spectra_id=(-?\d+)\s+log_weight=(\S+)")


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _ints(line: str, number: int) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError as e:
        raise InvalidInputError(f"expected integers, got {line!r}", line=number) from e


def read_text(path: str) -> str:
    """Read a UTF-8 text file.

    Raises:
        InvalidInputError: If the file cannot be read
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e.strerror or e}") from e


def parse_jdm(text: str) -> Jdm:
    """Parse ``"D"`` followed by D rows of D non-negative integers.

    Raises:
        InvalidInputError: On a malformed, negative or asymmetric matrix,
            naming the offending line
    """
    lines = list(_content_lines(text))
    if not lines:
        raise InvalidInputError("empty JDM file", line=1)
    number, header = lines[0]
    dims = _ints(header, number)
    if len(dims) != 1 or dims[0] < 0:
        raise InvalidInputError(f"expected the matrix dimension, got {header!r}", line=number)
    dim = dims[0]
    rows = lines[1:]
    if len(rows) != dim:
        last = rows[-1][0] if rows else number
        raise InvalidInputError(f"expected {dim} rows, found {len(rows)}", line=last)

    entries: List[List[int]] = []
    for number, line in rows:
        values = _ints(line, number)
        if len(values) != dim:
            raise InvalidInputError(f"expected {dim} entries, found {len(values)}", line=number)
        if any(v < 0 for v in values):
            raise InvalidInputError("negative entry", line=number)
        entries.append(values)
    for a in range(dim):
        for b in range(a):
            if entries[a][b] != entries[b][a]:
                raise InvalidInputError(f"matrix is not symmetric at ({a + 1}, {b + 1})", line=rows[a][0])
    return Jdm.from_rows(entries)


def format_jdm(j: Jdm) -> str:
    lines = [str(j.dim)] + [" ".join(str(v) for v in row) for row in j.entries]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, n: Optional[int] = None) -> LabeledGraph:
    """Parse one ``u v`` pair per line into a simple graph.

    Args:
        text: Edge list with 0-indexed nodes
        n: Node count; defaults to the largest index plus one

    Raises:
        InvalidInputError: On a malformed line, a self-loop or a duplicate edge
    """
    edges: Set[Edge] = set()
    top = -1
    for number, line in _content_lines(text):
        values = _ints(line, number)
        if len(values) != 2:
            raise InvalidInputError(f"expected 'u v', got {line!r}", line=number)
        u, v = values
        if u < 0 or v < 0:
            raise InvalidInputError("negative node index", line=number)
        if u == v:
            raise InvalidInputError(f"self-loop at node {u}", line=number)
        key = (u, v) if u < v else (v, u)
        if key in edges:
            raise InvalidInputError(f"duplicate edge {key[0]} {key[1]}", line=number)
        edges.add(key)
        top = max(top, u, v)
    return LabeledGraph(n=n if n is not None else top + 1, edges=frozenset(edges))


def format_edge_list(g: LabeledGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edge_list())


def format_spectra(s: SpectraMatrix, spectra_id: Optional[int] = None, log_weight: float = 0.0) -> str:
    """Write ``"D N"`` and D rows of N integers, optionally under a block header."""
    lines = []
    if spectra_id is not None:
        lines.append(f"# spectra_id={spectra_id} log_weight={log_weight!r}")
    lines.append(f"{s.dim} {s.n}")
    lines.extend(" ".join(str(v) for v in row) for row in s.entries)
    return "\n".join(lines) + "\n"


def parse_spectra(text: str) -> List[SpectraSample]:
    """Parse one or more spectra blocks.

    A block's log-weight comes from the ``# spectra_id=.. log_weight=..``
    header preceding it, and is 0 without one.

    Raises:
        InvalidInputError: On a malformed header or row
    """
    samples: List[SpectraSample] = []
    pending_weight = 0.0
    lines = text.splitlines()
    number = 0
    while number < len(lines):
        line = lines[number].strip()
        number += 1
        if not line:
            continue
        if line.startswith("#"):
            match = _SPECTRA_HEADER.match(line)
            if match:
                try:
                    pending_weight = float(match.group(2))
                except ValueError as e:
                    raise InvalidInputError(f"bad log-weight {match.group(2)!r}", line=number) from e
            continue
        dims = _ints(line, number)
        if len(dims) != 2 or min(dims) < 0:
            raise InvalidInputError(f"expected 'D N', got {line!r}", line=number)
        dim, n = dims
        rows = []
        for _ in range(dim):
            if number >= len(lines):
                raise InvalidInputError(f"expected {dim} rows", line=number)
            row = _ints(lines[number], number + 1)
            number += 1
            if len(row) != n or any(v < 0 for v in row):
                raise InvalidInputError(f"expected {n} non-negative entries", line=number)
            rows.append(tuple(row))
        samples.append(SpectraSample(
            matrix=SpectraMatrix(dim=dim, n=n, entries=tuple(rows)),
            log_weight=pending_weight,
        ))
        pending_weight = 0.0
    if not samples:
        raise InvalidInputError("no spectra matrix found", line=1)
    return samples


def format_catalog(catalog: RealizationCatalog) -> str:
    """Canonical edge list of each isomorphism class with its labeled count."""
    lines = [f"# classes={len(catalog.iso_classes)} labeled={len(catalog.labeled_graphs)}"]
    for index, iso in enumerate(catalog.iso_classes):
        lines.append(f"# class={index} labeled={len(iso.members)}")
        lines.extend(f"{u} {v}" for u, v in iso.representative.edge_list())
    return "\n".join(lines) + "\n"


def format_histogram(h: LogWeightHistogram) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["bin_left", "bin_right", "count", "gaussian_fit"])
    for k, count in enumerate(h.counts):
        writer.writerow([repr(h.bin_edges[k]), repr(h.bin_edges[k + 1]), count, repr(h.gaussian_fit[k])])
    return buffer.getvalue()


def write_text(path: str, content: str) -> None:
    """Write a UTF-8 text file.

    Raises:
        InvalidInputError: If the file cannot be written
    """
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot write {path}: {e.strerror or e}") from e
    logger.debug("File written", extra={"path": path, "bytes": len(content)})

import csv
import io

import pytest

from jdm_sampler.domain.exceptions import InvalidInputError
from jdm_sampler.domain.models import Jdm, LabeledGraph, LogWeightHistogram, SpectraMatrix
from jdm_sampler.domain.oracle import enumerate_realizations
from jdm_sampler.infrastructure import formats


def test_parse_jdm(six_node_jdm):
    text = "# six nodes\n3\n0 0 0\n\n0 2 4\n0 4 1\n"
    assert formats.parse_jdm(text) == six_node_jdm
    assert formats.parse_jdm(formats.format_jdm(six_node_jdm)) == six_node_jdm


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "empty"),
        ("2 2\n0 0\n0 0\n", 1, "dimension"),
        ("2\n0 1\n", 2, "expected 2 rows"),
        ("2\n0 1\n1\n", 3, "expected 2 entries"),
        ("2\n0 x\n1 0\n", 2, "integers"),
        ("2\n0 -1\n-1 0\n", 2, "negative"),
        ("2\n0 1\n2 0\n", 3, "not symmetric"),
    ],
)
def test_parse_jdm_errors(text, line, fragment):
    with pytest.raises(InvalidInputError) as e:
        formats.parse_jdm(text)
    assert e.value.line == line
    assert fragment in str(e.value)


def test_parse_edge_list():
    g = formats.parse_edge_list("# triangle\n0 1\n1 2\n\n2 0\n")
    assert g == LabeledGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert formats.parse_edge_list("0 1\n", n=4).n == 4
    assert formats.format_edge_list(g) == "0 1\n0 2\n1 2\n"


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("0 1\n1 1\n", 2, "self-loop"),
        ("0 1\n1 0\n", 2, "duplicate"),
        ("0 1 2\n", 1, "expected 'u v'"),
        ("0 -1\n", 1, "negative"),
        ("0 a\n", 1, "integers"),
    ],
)
def test_parse_edge_list_errors(text, line, fragment):
    with pytest.raises(InvalidInputError) as e:
        formats.parse_edge_list(text)
    assert e.value.line == line
    assert fragment in str(e.value)


def test_spectra_blocks(shared_spectra):
    text = formats.format_spectra(shared_spectra, spectra_id=0, log_weight=1.25) + formats.format_spectra(shared_spectra, spectra_id=1)
    blocks = formats.parse_spectra(text)

    assert [b.matrix for b in blocks] == [shared_spectra, shared_spectra]
    assert [b.log_weight for b in blocks] == [1.25, 0.0]


def test_bare_spectra_block(shared_spectra):
    text = formats.format_spectra(shared_spectra)
    assert text.splitlines()[0] == "3 6"
    [block] = formats.parse_spectra(text)
    assert block.log_weight == 0.0


def test_spectra_errors():
    with pytest.raises(InvalidInputError):
        formats.parse_spectra("# nothing here\n")
    with pytest.raises(InvalidInputError) as e:
        formats.parse_spectra("2 3\n0 0 0\n1 1\n")
    assert e.value.line == 3
    with pytest.raises(InvalidInputError):
        formats.parse_spectra("2 3\n0 0 0\n")


def test_format_catalog():
    catalog = enumerate_realizations(Jdm.from_rows([[2]]))
    lines = formats.format_catalog(catalog).splitlines()
    assert lines[0] == "# classes=1 labeled=3"
    assert lines[1] == "# class=0 labeled=3"
    assert len(lines) == 4


def test_format_histogram():
    h = LogWeightHistogram(bin_edges=(0.0, 0.5, 1.0), counts=(3, 1), mean=0.4, variance=0.1, gaussian_fit=(2.5, 1.5))
    rows = list(csv.reader(io.StringIO(formats.format_histogram(h))))
    assert rows[0] == ["bin_left", "bin_right", "count", "gaussian_fit"]
    assert rows[1] == ["0.0", "0.5", "3", "2.5"]
    assert len(rows) == 3


def test_file_helpers(tmp_path):
    path = tmp_path / "out.txt"
    formats.write_text(str(path), "3\n")
    assert formats.read_text(str(path)) == "3\n"
    with pytest.raises(InvalidInputError):
        formats.read_text(str(tmp_path / "missing.jdm"))
    with pytest.raises(InvalidInputError):
        formats.write_text(str(tmp_path / "no" / "such" / "dir.txt"), "")


def test_spectra_matrix_format_is_rectangular():
    s = SpectraMatrix(dim=2, n=3, entries=((0, 0, 0), (2, 2, 2)))
    assert formats.format_spectra(s) == "2 3\n0 0 0\n2 2 2\n"

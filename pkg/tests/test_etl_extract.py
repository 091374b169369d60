"""Extraction: provenance, ragged-row quarantine, failure modes."""

import pytest

from starcube.errors import SourceNotFound
from starcube.etl import Quarantine, SourceDef, extract


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_rows_carry_file_order_and_line_numbers(tmp_path):
    path = write(tmp_path / "s.csv", "a,b\n1,2\n3,4\n")
    q = Quarantine()
    rows = list(extract(SourceDef("s", str(path)), q))
    assert [(r.values, r.line) for r in rows] == [
        ({"a": "1", "b": "2"}, 2), ({"a": "3", "b": "4"}, 3)]
    assert rows[0].source == "s"
    assert len(q) == 0


def test_header_only_file_yields_empty_stream(tmp_path):
    path = write(tmp_path / "s.csv", "a,b\n")
    q = Quarantine()
    assert list(extract(SourceDef("s", str(path)), q)) == []
    assert len(q) == 0


def test_ragged_row_quarantines_not_aborts(tmp_path):
    path = write(tmp_path / "s.csv", "a,b,c,d,e,f\n1,2,3,4,5\n")
    q = Quarantine()
    rows = list(extract(SourceDef("s", str(path)), q))
    assert rows == []
    assert len(q) == 1
    rec = q.records[0]
    assert rec.step == "extract"
    assert "RaggedRow" in rec.reason
    assert rec.line == 2


def test_missing_file_is_fatal(tmp_path):
    with pytest.raises(SourceNotFound):
        list(extract(SourceDef("s", str(tmp_path / "nope.csv")), Quarantine()))


def test_custom_delimiter_and_quoting(tmp_path):
    path = write(tmp_path / "s.csv", 'a;b\n"x;y";2\n')
    q = Quarantine()
    rows = list(extract(SourceDef("s", str(path), delimiter=";"), q))
    assert rows[0].values == {"a": "x;y", "b": "2"}


def test_headerless_source_generates_column_names(tmp_path):
    path = write(tmp_path / "s.csv", "1,2\n3,4\n")
    q = Quarantine()
    rows = list(extract(SourceDef("s", str(path), has_header=False), q))
    assert rows[0].values == {"col1": "1", "col2": "2"}
    assert len(rows) == 2


def test_quarantine_csv_is_written_with_all_columns(tmp_path):
    path = write(tmp_path / "s.csv", "a,b\n1\n")
    q = Quarantine()
    list(extract(SourceDef("s", str(path)), q))
    out = tmp_path / "q" / "batch.csv"
    q.write_csv(out)
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "source,line,step,reason,raw_row"
    assert "RaggedRow" in text

import json
from fractions import Fraction

import pytest
from mpmath import mp

from primon.config import OutputFormat
from primon.report import Provenance, Report, render, render_csv, render_json, summary_line

PROVENANCE = Provenance(precision=128, tolerance=1e-20, prime_table_checksum="deadbeef")


def sample():
    report = Report(kind="demo", columns=["n", "value", "note", "holds"])
    report.add(n=1, value=mp.mpf(1) / 3, note="plain", holds=True)
    report.add(n=2, value=Fraction(-1, 8), note='has "quotes", commas', holds=False)
    report.summary.update(rows=2, best=mp.mpf(2).sqrt())
    return report


def test_csv_is_rfc4180():
    text = render_csv(sample(), digits=5)
    lines = text.split("\r\n")
    assert lines[0] == "n,value,note,holds"
    assert lines[1] == "1,0.33333,plain,true"
    assert lines[2] == '2,-1/8,"has ""quotes"", commas",false'
    assert text.endswith("\r\n")


def test_json_is_one_sorted_object():
    document = json.loads(render_json(sample(), PROVENANCE, digits=8))
    assert document["kind"] == "demo"
    assert document["rows"][0]["value"] == "0.33333333"
    assert document["summary"]["best"] == "1.4142136"
    assert document["provenance"] == {
        "precision": 128,
        "tolerance": "1e-20",
        "prime_table_checksum": "deadbeef",
        "toolkit_version": PROVENANCE.toolkit_version,
    }


def test_render_dispatch():
    report = sample()
    assert render(report, OutputFormat.CSV, PROVENANCE) == render_csv(report)
    assert render(report, OutputFormat.JSON, PROVENANCE).startswith("{")


def test_missing_cells_are_empty():
    report = Report(kind="demo", columns=["a", "b"])
    report.add(a=1)
    assert render_csv(report).split("\r\n")[1] == "1,"


def test_unknown_columns_are_refused():
    with pytest.raises(KeyError):
        Report(kind="demo", columns=["a"]).add(b=1)


def test_summary_line():
    assert summary_line(sample(), digits=3) == "demo: rows=2 best=1.41"


def test_infinities_render():
    report = Report(kind="demo", columns=["x"])
    report.add(x=mp.ninf)
    assert render_csv(report).split("\r\n")[1] == "-inf"

"""
Module to gather tests of reports and their output.

This file is executed by ``pytest`` to have good CI.
"""

import json

import pytest
from sympy.polys.domains import QQ

from dglastacks.coefficients import ArtinRing, RElement
from dglastacks.errors import DglaStacksError, Violation
from dglastacks.postprocessor import (
    Postprocessor, canonical_dumps, make_report, to_exact_json
)


class TestReports(object):
    """Class to bundle the report tests."""

    def test_exact_values(self):
        """Rationals, ring elements and violations become strings."""
        R = ArtinRing(2)
        obj = {
            "x": RElement(R, [1, QQ(-1, 3)]),
            "v": Violation("gauge", {"order": 1}),
            "s": {3, 1},
        }
        out = to_exact_json(obj)
        assert out["x"] == RElement(R, [1, QQ(-1, 3)]).to_json()
        assert out["v"]["name"] == "gauge"
        assert out["s"] == [1, 3]

    def test_no_floats(self):
        """Floats never reach a report."""
        with pytest.raises(DglaStacksError):
            to_exact_json({"a": [0.5]})
        with pytest.raises(DglaStacksError):
            to_exact_json(object())

    def test_canonical_text(self):
        """Sorted keys, fixed indentation and a final newline."""
        report = make_report("cech", "ok", {"dimensions": [1, 1, 0]})
        text = canonical_dumps(report)
        assert text.endswith("}\n")
        assert json.loads(text) == report
        assert text.index('"command"') < text.index('"witnesses"')

    @pytest.mark.parametrize("status, code", [
        ("ok", 0), ("violations", 1), ("error", 2)
    ])
    def test_exit_codes(self, status, code):
        """Report status maps to the process exit code."""
        assert Postprocessor(make_report("mc", status)).exit_code == code

    def test_unknown_status(self):
        """Only the three statuses exist."""
        with pytest.raises(DglaStacksError):
            make_report("mc", "maybe")


class TestOutput(object):
    """Class to bundle the file output tests."""

    def test_write_report(self, tmp_path):
        """Reports are written as canonical JSON."""
        report = make_report("hochschild", "ok", {"dimensions": [2, 1, 1]})
        path = tmp_path / "report.json"
        Postprocessor(report, str(path)).write_report()
        assert path.read_text() == canonical_dumps(report)

    def test_write_stdout(self, capsys):
        """Without a path the report goes to stdout."""
        Postprocessor(make_report("mc", "ok")).write_report()
        assert json.loads(capsys.readouterr().out)["status"] == "ok"

    def test_write_properties(self, tmp_path):
        """The self test summary is a csv file."""
        rows = [
            {"property": "conjugation", "instances": 3, "passed": 3},
            {"property": "strictification", "instances": 2, "passed": 1},
        ]
        path = tmp_path / "selftest.csv"
        Postprocessor(None).write_properties(rows, str(path))
        lines = path.read_text().splitlines()
        assert lines == [
            "property,instances,passed,failed",
            "conjugation,3,3,0",
            "strictification,2,1,1",
        ]

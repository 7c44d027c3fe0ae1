"""
Module to gather tests of the job file parser.

This file is executed by ``pytest`` to have good CI.
"""

import pytest

from dglastacks.errors import CapExceeded, ParsingError
from dglastacks.input import DEFAULT_CAPS, Input


def write_job(tmp_path, text):
    """Write a job file and return its path."""
    path = tmp_path / "job.yml"
    path.write_text(text)
    return str(path)


class TestInput(object):
    """Class to bundle the job file parser tests."""

    def test_defaults(self, tmp_path):
        """Missing caps fall back to the defaults."""
        job = Input(write_job(tmp_path, "algebra: dual_numbers\n"),
                    "hochschild")
        for key, value in DEFAULT_CAPS.items():
            assert job.caps[key] == value
        assert job.dict["n_max"] == 2
        assert job.caps["seed"] == 0

    def test_caps_and_overrides(self, tmp_path):
        """Command line values override the caps block."""
        text = "caps:\n  N: 4\n  d_cap: 1\ncover:\n  model: point\n"
        job = Input(write_job(tmp_path, text), "cech",
                    overrides={"N": 2, "n_cap": None})
        assert job.caps["N"] == 2
        assert job.caps["d_cap"] == 1
        assert job.caps["n_cap"] == DEFAULT_CAPS["n_cap"]

    def test_datum_order(self, tmp_path):
        """The datum's own ``N`` sets the order; the command line wins."""
        text = "datum:\n  N: 4\n  cover:\n    model: point\n"
        job = Input(write_job(tmp_path, text), "class", overrides={"N": 2})
        assert job.caps["N"] == 2
        assert job.dict["datum"]["N"] == 2
        assert Input(write_job(tmp_path, text), "class").caps["N"] == 4

    def test_schema_violations(self, tmp_path):
        """Unknown keys, wrong types and missing keys are parsing errors."""
        with pytest.raises(ParsingError):
            Input("etc/doctest_data/corrupt_input.yml", "mc")
        with pytest.raises(ParsingError) as err:
            Input(write_job(tmp_path, "n_max: 2\n"), "cech")
        assert "cover" in err.value.errors
        with pytest.raises(ParsingError):
            Input(write_job(tmp_path, "- a list\n"), "selftest")
        with pytest.raises(ParsingError):
            Input(None, "integrate")

    def test_cap_bounds(self, tmp_path):
        """Caps below one are rejected."""
        with pytest.raises(CapExceeded):
            Input(None, "selftest", overrides={"arity_cap": 0})

    def test_missing_file(self):
        """A missing job file is reported as such."""
        with pytest.raises(FileNotFoundError):
            Input("no/such/job.yml", "selftest")

    def test_lookup(self, tmp_path):
        """Stacked key access and assignment."""
        text = "datum:\n  cover:\n    model: sphere\n"
        job = Input(write_job(tmp_path, text), "classify")
        assert job.get_from_input(["datum", "cover", "model"]) == "sphere"
        job.set_in_input(["datum", "cover", "model"], "point")
        assert job.dict["datum"]["cover"]["model"] == "point"
        with pytest.raises(ParsingError):
            job.get_from_input(["datum", "a01"])
        assert job.summary().startswith("Input:")

    def test_parse_malformed_values(self, tmp_path):
        """Values that fail to build are parsing errors at their key."""
        text = "algebra: dual_numbers\nstar:\n  - [[\"1\", \"x\"]]\n"
        job = Input(write_job(tmp_path, text), "mc")
        assert job.parse(["algebra"], len) == len("dual_numbers")
        assert job.parse(["gamma"], len, optional=True) == 0
        with pytest.raises(ParsingError) as err:
            job.parse(["star"], lambda v: [int(x) for x in v[0][0]])
        assert list(err.value.errors) == ["star"]
        with pytest.raises(ParsingError):
            job.parse(["gamma"], len)

"""
Module to gather tests of the randomized property suite.

This file is executed by ``pytest`` to have good CI.
"""

import pytest

from dglastacks.selftest import PROPERTIES, run_selftest


class TestSelftest(object):
    """Class to bundle the self test runner tests."""

    def test_passing(self):
        """Cheap properties pass on every instance."""
        lines = []
        rows = run_selftest(
            seed=1, count=2,
            properties=["bch_matrix_product", "conjugation"],
            log=lines.append
        )
        assert [row["property"] for row in rows] == \
            ["bch_matrix_product", "conjugation"]
        assert all(row["passed"] == 2 for row in rows)
        assert all(row["counterexample"] is None for row in rows)
        assert lines == ["-> bch_matrix_product: 2/2", "-> conjugation: 2/2"]

    def test_planted_bug(self):
        """A planted bug is caught on the first instance."""
        rows = run_selftest(
            count=2, plant_bug="bch_matrix_product",
            properties=["bch_matrix_product"], log=lambda _: None
        )
        assert rows[0]["passed"] == 0
        assert rows[0]["counterexample"]["instance"] == 0

    def test_unknown_property(self):
        """Planting a bug needs a known property."""
        with pytest.raises(KeyError):
            run_selftest(plant_bug="flux_capacitor")

    def test_registry(self):
        """Every property has a positive default instance count."""
        assert len(PROPERTIES) == 15
        assert all(default > 0 for _, default in PROPERTIES.values())

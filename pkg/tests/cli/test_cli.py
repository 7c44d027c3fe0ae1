"""
Module to gather tests of the command line driver.

This file is executed by ``pytest`` to have good CI.
"""

import json
import subprocess

import pytest


class TestCommandLine(object):
    """
    Class to bundle all command line tests.

    Exact reports are compared against reference reports, the others by
    their key fields.
    """

    working_dir = "tests/cli"
    solver_path = "dglastacks"

    def run_solver(self, command, inputfile, outfile, *args):
        """
        Run the driver as subprocess and return its exit code and report.
        """
        process = subprocess.run(
            [self.solver_path, command, "--input", inputfile,
             "--out", str(outfile)] + list(args),
            cwd=self.working_dir, check=False
        )
        with open(str(outfile)) as file:
            return process.returncode, json.load(file)

    def compare_reports(self, reportfile, ref_reportfile):
        """
        Check the canonical report byte by byte.

        Return exception if diff returns with !=0
        """
        subprocess.check_call([
            "diff", "-u", "--strip-trailing-cr", str(reportfile),
            ref_reportfile
        ], cwd=self.working_dir)

    @pytest.mark.parametrize("name", [
        "cech_pseudocircle", "hochschild_dual_numbers"
    ])
    def test_reference_reports(self, name, tmp_path):
        """Cohomology reports match their references exactly."""
        out = tmp_path / (name + ".json")
        code, _ = self.run_solver(
            name.split("_")[0], "inputs/" + name + ".yml", out
        )
        assert code == 0
        self.compare_reports(out, "referrors/" + name + ".json")

    def test_mc_associative(self, tmp_path):
        """``x * x = t`` solves the Maurer-Cartan equation."""
        code, report = self.run_solver(
            "mc", "inputs/mc_dual_numbers.yml", tmp_path / "mc.json"
        )
        assert code == 0
        assert report["payload"]["associative"] is True
        assert report["payload"]["residual_zero"] is True
        assert report["options"]["N"] == 2

    def test_mc_violation(self, tmp_path):
        """``x * 1 = t`` fails at first order with exit code one."""
        code, report = self.run_solver(
            "mc", "inputs/mc_not_associative.yml", tmp_path / "mc.json"
        )
        assert code == 1
        assert report["status"] == "violations"
        assert report["witnesses"][0]["name"] == "maurer_cartan"
        assert report["payload"]["associator"]["order"] == 1

    def test_classify(self, tmp_path):
        """One first-order class, in agreement with the oracle."""
        code, report = self.run_solver(
            "classify", "inputs/classify_point.yml", tmp_path / "c.json"
        )
        assert code == 0
        assert report["payload"]["dimension"] == 1
        assert report["payload"]["oracle"] == 1

    def test_strictify(self, tmp_path):
        """A random stack strictifies to a strict stack."""
        code, report = self.run_solver(
            "strictify", "inputs/strictify_random.yml", tmp_path / "s.json"
        )
        assert code == 0
        payload = report["payload"]
        assert payload["iterations"] == len(payload["trace"])
        assert payload["stack"]["g1"]["coefficients"] == {}
        assert payload["stack"]["g2"]["coefficients"] == {}

    def test_caps_override(self, tmp_path):
        """Command line caps win over the job file."""
        code, report = self.run_solver(
            "mc", "inputs/mc_dual_numbers.yml", tmp_path / "mc.json",
            "--N", "3"
        )
        assert code == 0
        assert report["options"]["N"] == 3

    def test_parsing_error(self, tmp_path):
        """Schema violations are error reports with exit code two."""
        code, report = self.run_solver(
            "cech", "inputs/cech_corrupt.yml", tmp_path / "e.json"
        )
        assert code == 2
        assert report["payload"]["error"] == "ParsingError"
        assert "cover" in report["payload"]["location"]
        assert "mesh" in report["payload"]["location"]

    @pytest.mark.parametrize("name", ["mc_bad_rational", "mc_bad_shape"])
    def test_malformed_values(self, name, tmp_path):
        """Values that pass the schema but do not parse exit with two."""
        code, report = self.run_solver(
            "mc", "inputs/" + name + ".yml", tmp_path / "e.json"
        )
        assert code == 2
        assert report["status"] == "error"
        assert report["payload"]["error"] == "ParsingError"
        assert list(report["payload"]["location"]) == ["star"]

    def test_selftest(self, tmp_path):
        """The self test writes a report and a csv summary."""
        out = tmp_path / "selftest.json"
        code, report = self.run_solver(
            "selftest", "inputs/selftest_quick.yml", out
        )
        assert code == 0
        assert [row["passed"] for row in report["payload"]["properties"]] \
            == [2, 2]
        assert (tmp_path / "selftest.csv").exists()

    def test_selftest_planted_bug(self, tmp_path):
        """A planted bug turns the self test into violations."""
        code, report = self.run_solver(
            "selftest", "inputs/selftest_quick.yml", tmp_path / "b.json",
            "--plant-bug", "bch_matrix_product"
        )
        assert code == 1
        assert report["witnesses"][0]["property"] == "bch_matrix_product"

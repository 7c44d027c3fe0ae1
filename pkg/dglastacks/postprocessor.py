# pylint: disable=invalid-name

"""
Module to store the postprocessor classes.

Reports are canonical JSON: sorted keys, two space indentation, rationals
as ``"p/q"`` strings and no floats anywhere.
"""

import csv
import json

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.coefficients import RElement, format_rational
from dglastacks.errors import DglaStacksError, Violation

STATUS_CODES = {"ok": 0, "violations": 1, "error": 2}


def to_exact_json(obj):
    """
    Convert an object tree to JSON types with exact rationals.

    >>> to_exact_json({"a": (QQ(1, 2), 3), "b": np.int64(4)})
    {'a': ['1/2', 3], 'b': 4}
    """
    if isinstance(obj, float):
        raise DglaStacksError(f"Float {obj!r} in a report")
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, RElement):
        return obj.to_json()
    if isinstance(obj, Violation):
        return to_exact_json(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_exact_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_exact_json(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_exact_json(v) for v in obj)
    if QQ.of_type(obj):
        return format_rational(obj)
    if hasattr(obj, "to_json"):
        return to_exact_json(obj.to_json())
    raise DglaStacksError(f"Cannot serialize {type(obj).__name__}")


def make_report(command, status, payload=None, witnesses=None, options=None):
    """Report dictionary ``{command, status, payload, witnesses}``."""
    if status not in STATUS_CODES:
        raise DglaStacksError(f"Unknown status {status}")
    return to_exact_json({
        "command": command,
        "options": options or {},
        "status": status,
        "payload": payload or {},
        "witnesses": list(witnesses or []),
    })


def canonical_dumps(report):
    """Canonical JSON text of a report, newline terminated."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


class Postprocessor:
    """
    The class for postprocessing reports.

    The constructor expects a report dictionary of the form:

    .. code-block:: python

        {
            "command": "cech",
            "options": {"N": 3, "seed": 0},
            "status": "ok",
            "payload": {"dimensions": [1, 1, 0]},
            "witnesses": []
        }

    Parameters
    ----------
    report : dict
        Report as returned by :func:`make_report`.
    output_path : string or None
        Output file of the JSON report; ``None`` prints to stdout.

    """

    def __init__(self, report, output_path=None):
        """
        Construct postprocessor.

        Only sets arguments
        """
        self.report = report
        self.output_path = output_path

    @property
    def exit_code(self):
        """``0`` on ok, ``1`` on violations, ``2`` on error."""
        return STATUS_CODES[self.report["status"]]

    def write_report(self):
        """Write the canonical JSON report."""
        text = canonical_dumps(self.report)
        if self.output_path is None:
            print(text, end="")
            return
        with open(self.output_path, mode="w") as file:
            print("-> Write {}".format(self.output_path))
            file.write(text)

    def write_properties(self, rows, output_path):
        r"""
        Write the self test summary to a csv file.

        The output file (e.g. ``selftest.csv``) looks like:

        .. code-block:: text

            property,instances,passed,failed
            bch_associativity,20,20,0
            gauge_group_action,20,20,0
        """
        with open(output_path, mode="w", newline="") as file:
            print("-> Write {}".format(output_path))
            writer = csv.writer(file, delimiter=",", quotechar='"')
            writer.writerow(["property", "instances", "passed", "failed"])
            for row in rows:
                writer.writerow([
                    row["property"], row["instances"], row["passed"],
                    row["instances"] - row["passed"]
                ])

#!/usr/bin/env python3

# pylint: disable=invalid-name

"""
Program to compute with Maurer-Cartan data of descent data and G-stacks.

Every command reads a job file, runs one library operation and writes a
canonical JSON report. Exit codes are ``0`` (ok), ``1`` (violations) and
``2`` (error).
"""

import argparse
import sys

import numpy as np

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import (
    Cover, DescentDatum, SheafData, cech_cohomology, twisted_form_class,
    validate_descent_datum
)
from dglastacks.dgla import (
    DglaElement, StructureDgla, check_conjugation, gauge_act, mc_residual,
    validate_dgla
)
from dglastacks.errors import (
    CapExceeded, DglaStacksError, ParsingError, Violation
)
from dglastacks.gdgla import (
    CosimplicialG, cech_hochschild_total, classify_first_order
)
from dglastacks.hochschild import (
    FinAlgebra, HochschildDgla, STANDARD_ALGEBRAS, StarProduct,
    hochschild_cohomology, mu_from_star
)
from dglastacks.input import COMMANDS, Input
from dglastacks.postprocessor import Postprocessor, make_report
from dglastacks.selftest import PROPERTIES, run_selftest
from dglastacks.stacks import (
    DeformationDatum, GStack, random_stack, star_to_gstack, strictify,
    validate_gstack
)


def print_information():
    r"""
    Print program name and information.

    That is:

    .. code-block:: text

        -> Version: 1.0
        -> Commands: validate, mc, gauge, hochschild, cech, class, ...
             _       _          _             _
          __| | __ _| | __ _ __| |_ __ _  ___| | _____
         / _` |/ _` | |/ _` / __| __/ _` |/ __| |/ / __|
        | (_| | (_| | | (_| \__ \ || (_| | (__|   <\__ \
         \__,_|\__, |_|\__,_|___/\__\__,_|\___|_|\_\___/
               |___/

    """
    print(r"""-> Version: 1.0
-> Commands: """ + ", ".join(COMMANDS) + r"""
     _       _          _             _
  __| | __ _| | __ _ __| |_ __ _  ___| | _____
 / _` |/ _` | |/ _` / __| __/ _` |/ __| |/ / __|
| (_| | (_| | | (_| \__ \ || (_| | (__|   <\__ \
 \__,_|\__, |_|\__,_|___/\__\__,_|\___|_|\_\___/
       |___/
""")


# Job helpers
# ===========

def _algebra(entry):
    if isinstance(entry, str):
        if entry not in STANDARD_ALGEBRAS:
            raise ParsingError(f"Unknown algebra {entry}",
                               {"algebra": [f"unknown name {entry}"]})
        return STANDARD_ALGEBRAS[entry]()
    return FinAlgebra.from_json(entry)


def _datum(job):
    return job.parse(["datum"], DescentDatum.from_json)


def _cosimplicial_g(job, d):
    caps = job.caps
    return CosimplicialG(d, n_cap=caps["n_cap"], d_cap=caps["d_cap"],
                         arity_cap=caps["arity_cap"])


def _status(witnesses):
    return "violations" if witnesses else "ok"


# Commands
# ========

def run_validate(job):
    """Validate a DGLA, a descent datum or a G-stack."""
    obj = job.dict["object"]
    if obj == "dgla":
        if "dgla" not in job.dict:
            raise ParsingError("validate dgla needs 'dgla'",
                               {"dgla": ["required field"]})
        violations = validate_dgla(
            job.parse(["dgla"], StructureDgla.from_json)
        )
    elif obj == "descent":
        if "datum" not in job.dict:
            raise ParsingError("validate descent needs 'datum'",
                               {"datum": ["required field"]})
        violations = validate_descent_datum(_datum(job))
    else:
        if "datum" not in job.dict:
            raise ParsingError("validate gstack needs 'datum'",
                               {"datum": ["required field"]})
        d = _datum(job)
        G = _cosimplicial_g(job, d)
        ring = d.ring
        if "stack" in job.dict:
            stack = job.parse(
                ["stack"], lambda v: GStack.from_json(G, ring, v)
            )
        elif "star" in job.dict:
            star = job.parse(
                ["star"], lambda v: StarProduct.from_json(d.fiber, ring, v)
            )
            stack = star_to_gstack(DeformationDatum.from_star(G, star))
        else:
            stack = GStack.trivial(G, ring)
        violations = validate_gstack(stack)
    return _status(violations), {
        "object": obj, "violations": len(violations)
    }, violations


def run_mc(job):
    """Maurer-Cartan residual of a star product or a DGLA element."""
    ring = ArtinRing(job.caps["N"])
    payload = {}
    if "dgla" in job.dict:
        g = job.parse(["dgla"], StructureDgla.from_json)
        gamma = job.parse(
            ["gamma"], lambda v: DglaElement.from_json(g, 1, ring, v),
            optional=True
        )
    elif "algebra" in job.dict:
        A = job.parse(["algebra"], _algebra)
        star = job.parse(
            ["star"], lambda v: StarProduct.from_json(A, ring, v),
            optional=True
        )
        witness = star.associator_witness()
        payload["associative"] = witness is None
        payload["associator"] = witness
        gamma = mu_from_star(star, HochschildDgla(A, 3))
    else:
        raise ParsingError("mc needs 'algebra' or 'dgla'",
                           {"algebra": ["required field"]})
    residual = mc_residual(gamma)
    payload["residual"] = residual.to_json()
    payload["residual_zero"] = residual.is_zero()
    payload["maximal_ideal"] = gamma.in_maximal_ideal()
    witnesses = []
    if not residual.is_zero():
        witnesses.append(Violation("maurer_cartan",
                                   {"order": residual.order()}))
    if not gamma.in_maximal_ideal():
        witnesses.append(Violation("maximal_ideal", {}))
    return _status(witnesses), payload, witnesses


def run_gauge(job):
    """Gauge action of ``exp X`` on an MC element."""
    ring = ArtinRing(job.caps["N"])
    g = job.parse(["dgla"], StructureDgla.from_json)
    gamma = job.parse(
        ["gamma"], lambda v: DglaElement.from_json(g, 1, ring, v)
    )
    X = job.parse(["X"], lambda v: DglaElement.from_json(g, 0, ring, v))
    image = gauge_act(X, gamma)
    payload = {
        "image": image.to_json(),
        "conjugation": check_conjugation(X, gamma, image),
    }
    witnesses = []
    if "target" in job.dict:
        target = job.parse(
            ["target"], lambda v: DglaElement.from_json(g, 1, ring, v)
        )
        if target != image:
            witnesses.append(Violation("target", {
                "order": (target - image).order()
            }))
    if not payload["conjugation"]:
        witnesses.append(Violation("conjugation", {}))
    return _status(witnesses), payload, witnesses


def run_hochschild(job):
    """Hochschild cohomology dimensions of an algebra."""
    A = job.parse(["algebra"], _algebra)
    return "ok", hochschild_cohomology(A, job.dict["n_max"]), []


def run_cech(job):
    """Cech cohomology of a cover with rational coefficients."""
    cover = job.parse(["cover"], Cover.from_json)
    dims = cech_cohomology(cover, SheafData.constant(cover.space),
                           job.dict["n_max"])
    return "ok", {"cover": cover.name, "dimensions": dims}, []


def run_class(job):
    """Twisted form class of a descent datum."""
    d = _datum(job)
    return "ok", twisted_form_class(d).to_json(d.cover), []


def run_strictify(job):
    """Strictify a G-stack and report the trace."""
    d = _datum(job)
    G = _cosimplicial_g(job, d)
    ring = d.ring
    if "stack" in job.dict:
        stack = job.parse(["stack"], lambda v: GStack.from_json(G, ring, v))
    elif job.dict["random"]:
        rng = np.random.default_rng(job.caps["seed"])
        stack, _ = random_stack(G, ring, rng)
    else:
        stack = GStack.trivial(G, ring)
    violations = validate_gstack(stack)
    if violations:
        return "violations", {"stage": "input"}, violations
    strict, morphism, trace = strictify(stack, check=True)
    violations = validate_gstack(strict)
    return _status(violations), {
        "iterations": len(trace),
        "trace": trace,
        "stack": strict.to_json(),
        "morphism": morphism.to_json(),
    }, violations


def run_classify(job):
    """First-order deformation classes of a descent datum."""
    d = _datum(job)
    result = classify_first_order(d, arity_cap=job.caps["arity_cap"])
    payload = {"dimension": result["dimension"], "basis": result["basis"]}
    witnesses = []
    if job.dict["oracle"]:
        oracle = cech_hochschild_total(d, 2)
        payload["oracle"] = oracle
        if oracle != result["dimension"]:
            witnesses.append(Violation("oracle", {
                "classify": result["dimension"], "oracle": oracle
            }))
    return _status(witnesses), payload, witnesses


COMMAND_RUNNERS = {
    "validate": run_validate,
    "mc": run_mc,
    "gauge": run_gauge,
    "hochschild": run_hochschild,
    "cech": run_cech,
    "class": run_class,
    "strictify": run_strictify,
    "classify": run_classify,
}


def run(command, input_path=None, overrides=None, out=None, plant_bug=None):
    """
    Run one job and return its report.

    ``overrides`` are the command line caps; ``out`` is only used by the
    self test to place its CSV summary next to the report.
    """
    options = {k: v for k, v in (overrides or {}).items() if v is not None}
    try:
        job = Input(input_path, command, overrides)
        options = {k: v for k, v in job.caps.items() if v is not None}
        print(f"-> Command: {command}")
        print(job.summary())
        if command == "selftest":
            rows = run_selftest(
                seed=job.caps["seed"], count=job.caps["count"],
                plant_bug=plant_bug, properties=job.dict.get("properties")
            )
            if out is not None:
                Postprocessor(None).write_properties(
                    rows, out.rsplit(".", 1)[0] + ".csv"
                )
            witnesses = [
                {"property": row["property"], **row["counterexample"]}
                for row in rows if row["counterexample"] is not None
            ]
            status, payload = _status(witnesses), {"properties": rows}
        else:
            status, payload, witnesses = COMMAND_RUNNERS[command](job)
    except ParsingError as err:
        return make_report(command, "error", {
            "error": "ParsingError", "message": str(err),
            "location": err.errors
        }, options=options)
    except CapExceeded as err:
        return make_report(command, "error", {
            "error": "CapExceeded", "message": str(err), "cap": err.cap
        }, options=options)
    except (DglaStacksError, FileNotFoundError, KeyError) as err:
        return make_report(command, "error", {
            "error": type(err).__name__, "message": str(err)
        }, options=options)
    return make_report(command, status, payload, witnesses, options)


def build_parser():
    """Argument parser of the command line driver."""
    parser = argparse.ArgumentParser(
        prog="dglastacks",
        description="Maurer-Cartan data of descent data and G-stacks."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", default=None, help="Job file (YAML/JSON)")
    parser.add_argument("--N", type=int, default=None,
                        help="Nilpotency order of Q[t]/(t^N)")
    parser.add_argument("--n-cap", type=int, default=None,
                        help="Highest cosimplicial level")
    parser.add_argument("--d-cap", type=int, default=None,
                        help="Largest object [q] of simplices")
    parser.add_argument("--arity-cap", type=int, default=None,
                        help="Hochschild arity cap")
    parser.add_argument("--seed", type=int, default=None,
                        help="Seed of randomized suites")
    parser.add_argument("--count", type=int, default=None,
                        help="Instances per self test property")
    parser.add_argument("--out", default=None, help="Report file")
    parser.add_argument("--plant-bug", default=None,
                        choices=sorted(PROPERTIES),
                        help="Perturb a self test property")
    return parser


def main(argv=None):
    """
    Execute the main program.

    Usage:

    .. code-block:: bash

        # Install dglastacks
        pip install .

        # Usage: dglastacks <command> --input <job> [--out <report>]
        cd tests/cli
        dglastacks cech --input inputs/cech_pseudocircle.yml \
          --out cech_pseudocircle.json

    """
    args = build_parser().parse_args(argv)
    print_information()
    if args.command != "selftest" and args.input is None:
        print("[Error] Command {} needs --input".format(args.command))
    overrides = {
        "N": args.N, "n_cap": args.n_cap, "d_cap": args.d_cap,
        "arity_cap": args.arity_cap, "seed": args.seed, "count": args.count,
    }
    report = run(args.command, args.input, overrides, args.out,
                 args.plant_bug)
    postp = Postprocessor(report, args.out)
    postp.write_report()
    return postp.exit_code


if __name__ == '__main__':
    sys.exit(main())

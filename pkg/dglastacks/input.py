"""
Module for input related Classes.

Contains the Input class that reads job files of the command line driver.
"""

from functools import reduce
import operator
from json import dumps
import yaml
from cerberus import Validator

from dglastacks.errors import CapExceeded, ParsingError

DEFAULT_CAPS = {"N": 3, "n_cap": 3, "d_cap": 2, "arity_cap": 3}

COMMANDS = [
    "validate", "mc", "gauge", "hochschild", "cech", "class", "strictify",
    "classify", "selftest",
]

CAPS_SCHEMA = {
    "caps": {
        "type": "dict",
        "required": False,
        "default": {},
        "schema": {
            "N": {"type": "integer", "min": 1},
            "n_cap": {"type": "integer", "min": 1},
            "d_cap": {"type": "integer", "min": 1},
            "arity_cap": {"type": "integer", "min": 1},
        }
    },
    "seed": {"type": "integer", "min": 0, "default": 0},
    "count": {"type": "integer", "min": 1, "nullable": True,
              "default": None},
}

# Cover: either {"model": name} or {"points", "order", "cover"}.
COVER_SCHEMA = {
    "type": "dict",
    "schema": {
        "model": {
            "type": "string",
            "allowed": ["point", "discrete", "pseudocircle", "circle3",
                        "sphere"],
            "excludes": ["points", "cover"]
        },
        "points": {"type": "list", "schema": {"type": "string"},
                   "dependencies": "cover"},
        "order": {"type": "list",
                  "schema": {"type": "list", "minlength": 2,
                             "maxlength": 2,
                             "schema": {"type": "string"}}},
        "cover": {"type": "list",
                  "schema": {"type": "list", "schema": {"type": "string"}}},
        "name": {"type": "string"},
    }
}

RELEMENT_SCHEMA = {
    "type": "list",
    "schema": {"type": ["string", "integer"]}
}

DATUM_SCHEMA = {
    "type": "dict",
    "schema": {
        "N": {"type": "integer", "min": 1},
        "cover": dict(COVER_SCHEMA, required=True),
        "fiber": {"type": ["string", "dict"]},
        "a01": {"type": "dict", "valuesrules": RELEMENT_SCHEMA},
        "a012": {"type": "dict", "valuesrules": RELEMENT_SCHEMA},
    }
}

ALGEBRA_SCHEMA = {
    "type": ["string", "dict"],
    "required": True,
}

DGLA_SCHEMA = {
    "type": "dict",
    "schema": {
        "degrees": {"type": "dict", "required": True},
        "differential": {"type": "list"},
        "bracket": {"type": "list"},
    }
}

ELEMENT_SCHEMA = {
    "type": "list",
    "schema": RELEMENT_SCHEMA
}

STACK_SCHEMA = {
    "type": "dict",
    "schema": {
        "N": {"type": "integer"},
        "g0": {"type": "dict", "required": True},
        "g1": {"type": "dict", "required": True},
        "g2": {"type": "dict", "required": True},
    }
}

COMMAND_SCHEMAS = {
    "validate": {
        "object": {
            "type": "string",
            "required": True,
            "allowed": ["dgla", "descent", "gstack"]
        },
        "dgla": DGLA_SCHEMA,
        "datum": DATUM_SCHEMA,
        "stack": STACK_SCHEMA,
        "star": {"type": "list"},
    },
    "mc": {
        "algebra": {"type": ["string", "dict"], "excludes": "dgla"},
        "star": {"type": "list", "dependencies": "algebra"},
        "dgla": dict(DGLA_SCHEMA, excludes="algebra"),
        "gamma": dict(ELEMENT_SCHEMA, dependencies="dgla"),
    },
    "gauge": {
        "dgla": dict(DGLA_SCHEMA, required=True),
        "gamma": dict(ELEMENT_SCHEMA, required=True),
        "X": dict(ELEMENT_SCHEMA, required=True),
        "target": ELEMENT_SCHEMA,
    },
    "hochschild": {
        "algebra": ALGEBRA_SCHEMA,
        "n_max": {"type": "integer", "min": 0, "max": 4, "default": 2},
    },
    "cech": {
        "cover": dict(COVER_SCHEMA, required=True),
        "n_max": {"type": "integer", "min": 0, "max": 4, "default": 2},
    },
    "class": {
        "datum": dict(DATUM_SCHEMA, required=True),
    },
    "strictify": {
        "datum": dict(DATUM_SCHEMA, required=True),
        "stack": STACK_SCHEMA,
        "random": {"type": "boolean", "default": False},
    },
    "classify": {
        "datum": dict(DATUM_SCHEMA, required=True),
        "oracle": {"type": "boolean", "default": True},
    },
    "selftest": {
        "properties": {"type": "list", "schema": {"type": "string"}},
    },
}


class Input:
    """
    Class to handle job files in YAML_ format (JSON is accepted as well).

    .. _YAML: https://en.wikipedia.org/wiki/YAML

    Every command has its own schema on top of the shared ``caps``,
    ``seed`` and ``count`` keys. An example job of the ``mc`` command:

    .. code-block:: yaml

        # Caps
        # ====
        # - N: Nilpotency order of R = Q[t]/(t^N)
        caps:
          N: 2

        # Star product x * x = t on the dual numbers
        # ==========================================
        # - algebra: Name of a standard algebra or {dim, unit, mult}
        # - star: Corrections B_1, ..., B_{N-1} as nested lists
        algebra: dual_numbers
        star:
          - [[["0", "0"], ["0", "0"]], [["0", "0"], ["1", "0"]]]

    Examples
    --------

    >>> corrupt_input = Input("etc/doctest_data/corrupt_input.yml", "mc")
    Traceback (most recent call last):
    ...
    dglastacks.errors.ParsingError: Parsing error

    """

    def __init__(self, yaml_file, command, overrides=None):
        """Construct the Input class."""
        if command not in COMMANDS:
            raise ParsingError(f"Unknown command {command}")
        self.command = command
        if yaml_file is None:
            self.dict = {}
        else:
            try:
                with open(yaml_file, "r") as stream:
                    self.dict = yaml.safe_load(stream) or {}
            except FileNotFoundError:
                print(f"[Error] The input file {yaml_file} is not found.\n")
                raise

        val = Validator()
        input_schema = dict(CAPS_SCHEMA, **COMMAND_SCHEMAS[command])
        if not isinstance(self.dict, dict) or \
                not val.validate(self.dict, input_schema):
            errors = val.errors if isinstance(self.dict, dict) else {
                "root": ["must be a mapping"]
            }
            print("! Parsing Error: \n" + str(errors) + "\n")
            raise ParsingError("Parsing error", errors)
        self.dict = val.document
        self.caps = self._caps(overrides or {})
        if "datum" in self.dict:
            self.set_in_input(["datum", "N"], self.caps["N"])

    def _caps(self, overrides):
        """Merge defaults, the ``caps`` block and command line values."""
        caps = dict(DEFAULT_CAPS)
        datum = self.dict.get("datum") or {}
        if "N" in datum:
            caps["N"] = datum["N"]
        caps.update(self.dict.get("caps", {}))
        for key in ("seed", "count"):
            caps[key] = self.dict.get(key)
        caps.update({k: v for k, v in overrides.items() if v is not None})
        for key in DEFAULT_CAPS:
            if caps[key] < 1:
                raise CapExceeded(key, caps[key], 1)
        return caps

    def summary(self):
        """Shortened JSON dump of the job for progress output."""
        input_dump = dumps(self.dict, indent=None, sort_keys=True)
        MAX_WIDTH = 5000
        dots_str = ""
        if len(input_dump) > MAX_WIDTH:
            dots_str = "..."
        return "Input:\n" + input_dump[0:MAX_WIDTH] + dots_str

    def get_from_input(self, map_list):
        """Get value of the input dict by using a list of stacked keys."""
        try:
            return reduce(operator.getitem, map_list, self.dict)
        except (KeyError, TypeError, IndexError) as err:
            raise ParsingError(
                f"Job has no entry with the key: {map_list}"
            ) from err

    def set_in_input(self, map_list, value):
        """Change value of the input dict by using a list of stacked keys."""
        self.get_from_input(map_list[:-1])[map_list[-1]] = value

    def parse(self, map_list, build, optional=False):
        """
        Build an object from the entry at the key path ``map_list``.

        Malformed values that pass the schema (bad rationals, tensors of
        the wrong shape, unknown names) become a :class:`ParsingError`
        located at the key path. An ``optional`` entry that is missing is
        built from an empty list.
        """
        if optional and map_list[-1] not in self.get_from_input(map_list[:-1]):
            value = []
        else:
            value = self.get_from_input(map_list)
        try:
            return build(value)
        except (ValueError, TypeError, IndexError, KeyError) as err:
            location = ".".join(str(key) for key in map_list)
            errors = {location: [str(err)]}
            print("! Parsing Error: \n" + str(errors) + "\n")
            raise ParsingError(
                f"Malformed entry {location}: {err}", errors
            ) from err

"""
Module to gather the exception classes and violation records.

All errors raised on purpose derive from :class:`DglaStacksError`, so the
command line driver can map them to exit code ``2``.
"""


class DglaStacksError(Exception):
    """Base class of all package errors."""


class RingMismatch(DglaStacksError):
    """Operands live in different Artin rings."""


class NotAUnit(DglaStacksError):
    """Inversion of an element with vanishing constant term."""


class DegreeError(DglaStacksError):
    """An element has the wrong DGLA degree or arity for an operation."""


class NotMaurerCartan(DglaStacksError):
    """An input that must satisfy the Maurer-Cartan equation does not."""


class BaseMismatch(DglaStacksError):
    """Incompatible base points of morphisms in a 2-groupoid."""


class CapExceeded(DglaStacksError):
    """A computation would leave the configured truncation caps."""

    def __init__(self, cap, value, limit):
        super().__init__(
            f"cap {cap} exceeded: requested {value}, limit {limit}"
        )
        self.cap = cap
        self.value = value
        self.limit = limit


class NotStrict(DglaStacksError):
    """A stack expected to be strict is not."""


class NoSolution(DglaStacksError):
    """
    A linear system has no solution.

    Carries a certificate (a left kernel vector pairing non-trivially with
    the right hand side, or a rank pair) and, during strictification, the
    stage in which the failure happened.
    """

    def __init__(self, message, certificate=None, stage=None):
        super().__init__(message)
        self.certificate = certificate
        self.stage = stage


class InvalidDatum(DglaStacksError):
    """A descent datum violates its axioms."""


class CompatibilityError(DglaStacksError):
    """A family of local data is not compatible along monotone maps."""


class ParsingError(DglaStacksError):
    """An input file does not match the schema of its command."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}


class Violation:
    """
    A violated axiom in a report-style check.

    Parameters
    ----------
    name : str
        Name of the axiom or condition.
    witness : dict
        JSON-serializable data locating the violation.
    """

    def __init__(self, name, witness=None):
        self.name = name
        self.witness = witness or {}

    def __repr__(self):
        return f"Violation({self.name!r}, {self.witness!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Violation)
            and other.name == self.name
            and other.witness == self.witness
        )

    def to_json(self):
        """Dictionary for reports."""
        return {"name": self.name, "witness": self.witness}

# pylint: disable=invalid-name

"""
Module for exact coefficients.

Contains rational parsing helpers and the truncated polynomial Artin rings
``R = Q[t]/(t^N)`` with their elements. All deformation parameters of the
package live in such a ring, its maximal ideal is generated by ``t``.

Examples
--------

>>> R = ArtinRing(3)
>>> one_plus_t = R.element([1, 1])
>>> print(one_plus_t * one_plus_t)
1 + 2*t + t^2
>>> print(r_invert(one_plus_t))
1 - t + t^2
>>> print(base_reduce(R.element([2, 5, 7]), 2))
2 + 5*t
"""

import re
from fractions import Fraction

from sympy.polys.domains import QQ

from dglastacks.errors import NotAUnit, RingMismatch

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_rational(value):
    """
    Convert ``value`` to an exact rational of the ``QQ`` domain.

    Accepts integers, ``fractions.Fraction``, domain elements and strings of
    the form ``"p/q"`` or ``"p"``. Floats are rejected on purpose, no float
    ever enters a computation.

    >>> to_rational("-6/4") == QQ(-3, 2)
    True
    """
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool):
        return QQ(int(value))
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError(f"Floats are not exact: {value!r}")
    return QQ.convert(value)


def parse_rational(text):
    """
    Parse ``"p/q"`` or ``"p"`` into a normalized rational.

    >>> format_rational(parse_rational("10/4"))
    '5/2'
    """
    match = _RATIONAL.match(str(text))
    if not match:
        raise ValueError(f"Not a rational: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise ValueError(f"Zero denominator: {text!r}")
    return QQ(numerator, denominator)


def format_rational(value):
    """Format a rational as ``"p/q"``, or ``"p"`` when ``q = 1``."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class ArtinRing:
    """
    The Artin ring ``Q[t]/(t^N)``.

    ``N = 1`` is the ground field itself.

    Parameters
    ----------
    N : int
        Nilpotency order, at least one.
    """

    def __init__(self, N):
        if int(N) != N or N < 1:
            raise ValueError(f"Nilpotency order must be >= 1, got {N}")
        self.N = int(N)

    def __eq__(self, other):
        return isinstance(other, ArtinRing) and other.N == self.N

    def __hash__(self):
        return hash(("ArtinRing", self.N))

    def __repr__(self):
        return f"ArtinRing({self.N})"

    def element(self, coeffs):
        """Return the element with the given coefficients of ``t^i``."""
        return RElement(self, coeffs)

    def zero(self):
        """Return ``0``."""
        return RElement(self, [])

    def one(self):
        """Return ``1``."""
        return RElement(self, [1])

    def t(self):
        """Return the generator of the maximal ideal (``0`` for ``N = 1``)."""
        return RElement(self, [0, 1])

    def random(self, rng, maximal=False, bound=3):
        """
        Draw a random element with integer coefficients in ``[-bound, bound]``.

        ``maximal`` forces the constant term to vanish, ``rng`` is a
        ``numpy.random.Generator``.
        """
        coeffs = [int(c) for c in rng.integers(-bound, bound + 1, self.N)]
        if maximal:
            coeffs[0] = 0
        return RElement(self, coeffs)


class RElement:
    """
    Element of ``Q[t]/(t^N)``.

    Stored as the tuple of its ``N`` coefficients, index ``i`` holding the
    coefficient of ``t^i``. Elements are immutable; higher powers given on
    construction are dropped since they vanish in the ring.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        coeffs = [to_rational(c) for c in list(coeffs)[:ring.N]]
        coeffs += [QQ(0)] * (ring.N - len(coeffs))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("RElement is immutable")

    def _coerce(self, other):
        if isinstance(other, RElement):
            if other.ring != self.ring:
                raise RingMismatch(
                    f"Operands in {self.ring} and {other.ring}"
                )
            return other
        return RElement(self.ring, [other])

    def __add__(self, other):
        other = self._coerce(other)
        return RElement(
            self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return RElement(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        N = self.ring.N
        out = [QQ(0)] * N
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(N - i):
                if other.coeffs[j]:
                    out[i + j] += a * other.coeffs[j]
        return RElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            return r_invert(self) ** (-exponent)
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other):
        return self * r_invert(self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, RElement):
            return self.ring == other.ring and self.coeffs == other.coeffs
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"RElement({self.ring.N}, {self.to_json()})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = format_rational(abs(c))
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = mag
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])

    @property
    def constant(self):
        """Coefficient of ``t^0``."""
        return self.coeffs[0]

    def in_maximal_ideal(self):
        """Whether the element lies in ``(t)``."""
        return not self.coeffs[0]

    def scale(self, c):
        """Multiply by a rational scalar."""
        c = to_rational(c)
        return RElement(self.ring, [c * a for a in self.coeffs])

    def exp(self):
        """Exponential of an element of the maximal ideal (finite series)."""
        if not self.in_maximal_ideal():
            raise NotAUnit("exp needs an element of the maximal ideal")
        result, term = self.ring.one(), self.ring.one()
        for k in range(1, self.ring.N):
            term = (term * self).scale(QQ(1, k))
            result = result + term
        return result

    def log(self):
        """Logarithm of an element with constant term one."""
        if self.coeffs[0] != 1:
            raise NotAUnit("log needs constant term 1")
        x = self - 1
        result, power = self.ring.zero(), self.ring.one()
        for k in range(1, self.ring.N):
            power = power * x
            result = result + power.scale(QQ((-1) ** (k + 1), k))
        return result

    def to_json(self):
        """List of ``"p/q"`` strings, index = power of ``t``."""
        return [format_rational(c) for c in self.coeffs]


def parse_relement(ring, data):
    """Parse a JSON list of rationals (or a single rational) into ``ring``."""
    if isinstance(data, (list, tuple)):
        return RElement(ring, data)
    return RElement(ring, [data])


def format_relement(a):
    """Inverse of :func:`parse_relement`."""
    return a.to_json()


def r_arith(op, a, b):
    """
    Truncated polynomial arithmetic ``a op b``.

    ``op`` is one of ``"add"``, ``"sub"``, ``"mul"``, ``"neg"`` (``b`` is
    ignored for ``neg``).

    >>> R = ArtinRing(2)
    >>> print(r_arith("mul", R.element([1, 1]), R.element([1, -1])))
    1
    >>> print(r_arith("mul", R.t(), R.t()))
    0
    """
    if op == "neg":
        return -a
    if not isinstance(b, RElement) or a.ring != b.ring:
        raise RingMismatch(f"Cannot {op} elements of different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown ring operation {op!r}")


def r_invert(a):
    """
    Inverse by the geometric series ``c^-1 sum (-x/c)^k``.

    >>> print(r_invert(ArtinRing(2).element([2])))
    1/2
    """
    c = a.coeffs[0]
    if not c:
        raise NotAUnit(f"{a} has vanishing constant term")
    ring = a.ring
    x = (a - ring.element([c])).scale(-1 / c)
    result, power = ring.one(), ring.one()
    for _ in range(1, ring.N):
        power = power * x
        result = result + power
    return result.scale(1 / c)


def base_reduce(a, target_order):
    """
    Reduce ``a`` along ``Q[t]/(t^N) -> Q[t]/(t^M)``.

    ``M = 1`` is the reduction modulo the maximal ideal.
    """
    if not 1 <= target_order <= a.ring.N:
        raise ValueError(
            f"Target order {target_order} outside [1, {a.ring.N}]"
        )
    return RElement(ArtinRing(target_order), a.coeffs[:target_order])

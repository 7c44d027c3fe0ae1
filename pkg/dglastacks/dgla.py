# pylint: disable=invalid-name

"""
Module for differential graded Lie algebras and their Deligne 2-groupoids.

Contains the abstract :class:`Dgla` interface (graded dimensions, the
differential and the bracket on rational coefficient vectors), the
:class:`StructureDgla` given by structure constants, elements over an Artin
ring and all operations of the 2-groupoid ``MC^2(g (x) m_R)``: Maurer-Cartan
residuals, the gauge action, conjugation checks, Baker-Campbell-Hausdorff
products, the twisted bracket and the compositions of 2-morphisms.

Vectors are one dimensional ``numpy`` object arrays of ``QQ`` entries. An
element over ``R = Q[t]/(t^N)`` stores one such vector per power of ``t``.

Examples
--------

>>> from dglastacks.coefficients import ArtinRing
>>> g = heisenberg()
>>> R = ArtinRing(3)
>>> x = DglaElement.basis(g, 0, 0, R).shift(1)
>>> y = DglaElement.basis(g, 0, 1, R).shift(1)
>>> [str(c) for c in bch_product(x, y).coeffs]
['t', 't', '1/2*t^2']
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.coefficients import RElement, format_rational, to_rational
from dglastacks.errors import (
    BaseMismatch, CapExceeded, DegreeError, DglaStacksError,
    NotMaurerCartan, Violation
)
from dglastacks.linalg import ExactMatrix, as_sparse_vector, dense_vector

BCH_MAX_LENGTH = 5
"""Longest bracket word of the precomputed Dynkin table."""


def zeros(n):
    """Zero vector of length ``n``."""
    return np.full(n, QQ(0), dtype=object)


def is_zero_vector(v):
    """Whether all entries vanish."""
    return not any(v)


def unit_vector(n, i):
    """The ``i``-th standard basis vector of length ``n``."""
    v = zeros(n)
    v[i] = QQ(1)
    return v


class Dgla:
    """
    Abstract finite-dimensional DGLA on coefficient vectors.

    Subclasses implement :meth:`dimension`, :meth:`diff` and
    :meth:`bracket`. Degrees outside :attr:`degrees` have dimension zero.
    Truncated DGLAs report the degrees in which they are exact through
    :meth:`in_range`.
    """

    name = "dgla"

    @property
    def degrees(self):
        """Sorted list of degrees with positive dimension."""
        raise NotImplementedError

    def dimension(self, deg):
        """Dimension of the degree ``deg`` piece."""
        raise NotImplementedError

    def diff(self, deg, u):
        """Differential of a degree ``deg`` vector."""
        raise NotImplementedError

    def bracket(self, da, u, db, v):
        """Bracket of a degree ``da`` vector with a degree ``db`` vector."""
        raise NotImplementedError

    def in_range(self, deg):
        """Whether brackets and differentials landing in ``deg`` are exact."""
        return True

    def zero(self, deg):
        """Zero vector of degree ``deg``."""
        return zeros(self.dimension(deg))

    def diff_matrix(self, deg):
        """Matrix of ``d: g^deg -> g^(deg+1)``."""
        n, m = self.dimension(deg), self.dimension(deg + 1)
        columns = [
            as_sparse_vector(self.diff(deg, unit_vector(n, i)))
            for i in range(n)
        ]
        return ExactMatrix.from_columns(columns, m)


class StructureDgla(Dgla):
    """
    DGLA presented by structure constants.

    Parameters
    ----------
    degrees : dict
        Degree to dimension.
    differential : list of dicts
        Blocks ``{"deg": k, "matrix": rows}`` with a
        ``dim(k+1) x dim(k)`` matrix.
    bracket : list of dicts
        Entries ``{"i", "j", "k", "deg_a", "deg_b", "c"}`` meaning that
        ``[e_i, e_j]`` has coefficient ``c`` on ``e_k``. Constants are used
        as given; :func:`validate_dgla` reports asymmetric input.
    """

    def __init__(self, degrees, differential=None, bracket=None,
                 name="dgla"):
        self.name = name
        self._degrees = {
            int(k): int(v) for k, v in degrees.items() if int(v) > 0
        }
        self._diff = {}
        for block in differential or []:
            k = int(block["deg"])
            rows, cols = self.dimension(k + 1), self.dimension(k)
            if rows == 0 or cols == 0:
                continue
            matrix = np.array(
                [[to_rational(v) for v in row] for row in block["matrix"]],
                dtype=object
            ).reshape(rows, cols)
            if k in self._diff:
                matrix = self._diff[k] + matrix
            self._diff[k] = matrix
        self._bracket = {}
        for entry in bracket or []:
            da, db = int(entry["deg_a"]), int(entry["deg_b"])
            key = (da, db)
            if key not in self._bracket:
                shape = (
                    self.dimension(da), self.dimension(db),
                    self.dimension(da + db)
                )
                if 0 in shape:
                    raise DegreeError(
                        f"Bracket entry {entry} outside the graded pieces"
                    )
                self._bracket[key] = np.full(shape, QQ(0), dtype=object)
            self._bracket[key][
                int(entry["i"]), int(entry["j"]), int(entry["k"])
            ] += to_rational(entry["c"])
        self.matrix_basis = None

    @classmethod
    def from_json(cls, data, name="dgla"):
        """Build from the JSON schema of job files."""
        return cls(
            data["degrees"], data.get("differential", []),
            data.get("bracket", []), name=name
        )

    @classmethod
    def from_operations(cls, degrees, diff, bracket, name="dgla"):
        """
        Build from callables on coefficient vectors.

        ``diff(deg, u)`` and ``bracket(da, u, db, v)`` are evaluated on all
        basis vectors.
        """
        degrees = {k: v for k, v in degrees.items() if v > 0}
        blocks = []
        for k, n in degrees.items():
            m = degrees.get(k + 1, 0)
            if m == 0:
                continue
            columns = [diff(k, unit_vector(n, i)) for i in range(n)]
            blocks.append({
                "deg": k,
                "matrix": [[columns[i][r] for i in range(n)]
                           for r in range(m)]
            })
        entries = []
        for (da, na), (db, nb) in product(degrees.items(), repeat=2):
            if degrees.get(da + db, 0) == 0:
                continue
            for i, j in product(range(na), range(nb)):
                value = bracket(
                    da, unit_vector(na, i), db, unit_vector(nb, j)
                )
                for k, c in enumerate(value):
                    if c:
                        entries.append({
                            "i": i, "j": j, "k": k, "deg_a": da,
                            "deg_b": db, "c": c
                        })
        return cls(degrees, blocks, entries, name=name)

    @property
    def degrees(self):
        return sorted(self._degrees)

    def dimension(self, deg):
        return self._degrees.get(deg, 0)

    def diff(self, deg, u):
        matrix = self._diff.get(deg)
        if matrix is None:
            return zeros(self.dimension(deg + 1))
        return matrix.dot(u)

    def bracket(self, da, u, db, v):
        tensor = self._bracket.get((da, db))
        if tensor is None:
            return zeros(self.dimension(da + db))
        partial = np.tensordot(u, tensor, axes=([0], [0]))
        return np.tensordot(v, partial, axes=([0], [0]))

    def to_json(self):
        """JSON schema of job files."""
        return {
            "degrees": {str(k): v for k, v in sorted(self._degrees.items())},
            "differential": [
                {"deg": k, "matrix": [
                    [format_rational(c) for c in row] for row in matrix
                ]}
                for k, matrix in sorted(self._diff.items())
            ],
            "bracket": [
                {"i": i, "j": j, "k": k, "deg_a": da, "deg_b": db,
                 "c": format_rational(tensor[i, j, k])}
                for (da, db), tensor in sorted(self._bracket.items())
                for i, j, k in product(*map(range, tensor.shape))
                if tensor[i, j, k]
            ],
        }


# Constructors
# ============

def abelian(degrees, differential=None):
    """
    Abelian DGLA with optional differential blocks.

    >>> g = abelian({0: 1, 1: 1}, [{"deg": 0, "matrix": [[1]]}])
    >>> validate_dgla(g)
    []
    """
    return StructureDgla(degrees, differential, [], name="abelian")


def heisenberg():
    """Heisenberg algebra ``[x, y] = z`` in degree zero, ``d = 0``."""
    return StructureDgla(
        {0: 3}, [],
        [{"i": 0, "j": 1, "k": 2, "deg_a": 0, "deg_b": 0, "c": 1},
         {"i": 1, "j": 0, "k": 2, "deg_a": 0, "deg_b": 0, "c": -1}],
        name="heisenberg"
    )


def _commutator_dgla(blocks, degree_of, delta, name):
    """
    Graded matrix DGLA spanned by elementary matrices.

    ``blocks`` lists the index pairs ``(a, b)`` of the basis matrices,
    ``degree_of(a, b)`` their degree and ``delta`` an optional degree one
    matrix defining ``d = [delta, .]``.
    """
    size = 1 + max(max(a, b) for a, b in blocks)
    basis = {}
    for a, b in blocks:
        e = np.full((size, size), QQ(0), dtype=object)
        e[a, b] = QQ(1)
        basis.setdefault(degree_of(a, b), []).append(e)
    degrees = {k: len(v) for k, v in basis.items()}

    def coords(deg, matrix):
        return np.array(
            [(matrix * e).sum() for e in basis.get(deg, [])], dtype=object
        )

    def combine(deg, u):
        out = np.full((size, size), QQ(0), dtype=object)
        for c, e in zip(u, basis[deg]):
            if c:
                out = out + c * e
        return out

    def commutator(da, u, db, v):
        A, B = combine(da, u), combine(db, v)
        sign = -1 if da * db % 2 else 1
        return coords(da + db, A.dot(B) - sign * B.dot(A))

    def diff(deg, u):
        if delta is None or degrees.get(deg + 1, 0) == 0:
            return zeros(degrees.get(deg + 1, 0))
        A = combine(deg, u)
        sign = -1 if deg % 2 else 1
        return coords(deg + 1, delta.dot(A) - sign * A.dot(delta))

    g = StructureDgla.from_operations(degrees, diff, commutator, name)
    g.matrix_basis = basis
    return g


def upper_triangular(k):
    """Strictly upper triangular ``k x k`` matrices in degree zero."""
    blocks = [(a, b) for a in range(k) for b in range(a + 1, k)]
    return _commutator_dgla(
        blocks, lambda a, b: 0, None, f"upper_triangular_{k}"
    )


def endomorphisms(p=1, q=1):
    """
    Endomorphism DGLA of a two-term complex ``Q^p -> Q^q``.

    The complex sits in degrees ``-1`` and ``0`` with the map of full rank
    as differential; ``End^k`` consists of the maps raising degree by ``k``.
    """
    size = p + q

    def degree_of(a, b):
        return (0 if a >= p else -1) - (0 if b >= p else -1)

    delta = np.full((size, size), QQ(0), dtype=object)
    for i in range(min(p, q)):
        delta[p + i, i] = QQ(1)
    blocks = [(a, b) for a in range(size) for b in range(size)]
    return _commutator_dgla(blocks, degree_of, delta, f"end_{p}_{q}")


def tensor_dual_numbers(g):
    """
    Tensor product with the commutative DGA ``Q[z, dz]/(z^2, z dz)``.

    The basis of ``(g (x) A)^k`` lists ``g^k (x) 1``, then ``g^k (x) z``,
    then ``g^(k-1) (x) dz``.
    """
    degrees = {}
    for k in set(g.degrees) | {k + 1 for k in g.degrees}:
        degrees[k] = 2 * g.dimension(k) + g.dimension(k - 1)

    def split(k, u):
        n = g.dimension(k)
        return u[:n], u[n:2 * n], u[2 * n:]

    def join(one, z, dz):
        return np.concatenate([one, z, dz]).astype(object)

    def diff(k, u):
        one, z, dz = split(k, u)
        sign = -1 if k % 2 else 1
        return join(
            g.diff(k, one), g.diff(k, z),
            g.diff(k - 1, dz) + sign * z
        )

    def bracket(da, u, db, v):
        a1, az, adz = split(da, u)
        b1, bz, bdz = split(db, v)
        one = g.bracket(da, a1, db, b1)
        z = g.bracket(da, a1, db, bz) + g.bracket(da, az, db, b1)
        # (x (x) a, y (x) b) -> (-1)^(|a||y|) [x, y] (x) ab
        sign_b = -1 if db % 2 else 1
        dz = (
            g.bracket(da, a1, db - 1, bdz)
            + sign_b * g.bracket(da - 1, adz, db, b1)
        )
        return join(one, z, dz)

    return StructureDgla.from_operations(
        degrees, diff, bracket, name=f"{g.name}_dual_numbers"
    )


def random_dgla(rng):
    """Draw one of the structured families."""
    families = [
        heisenberg, lambda: upper_triangular(3), endomorphisms,
        lambda: tensor_dual_numbers(heisenberg()),
        lambda: endomorphisms(2, 1)
    ]
    return families[int(rng.integers(len(families)))]()


# Elements
# ========

class DglaElement:
    """
    Homogeneous element of ``g (x) R``.

    Parameters
    ----------
    parent : Dgla
        The DGLA.
    degree : int
        The degree.
    ring : ArtinRing
        Coefficient ring ``Q[t]/(t^N)``.
    layers : list of numpy arrays, optional
        ``layers[r]`` is the coefficient vector of ``t^r``.
    """

    def __init__(self, parent, degree, ring, layers=None):
        self.parent = parent
        self.degree = int(degree)
        self.ring = ring
        dim = parent.dimension(self.degree)
        if layers is None:
            layers = [zeros(dim) for _ in range(ring.N)]
        layers = list(layers)[:ring.N]
        layers += [zeros(dim) for _ in range(ring.N - len(layers))]
        for layer in layers:
            assert len(layer) == dim, "Layer length must match dimension"
        self.layers = layers

    @classmethod
    def from_coeffs(cls, parent, degree, coeffs, ring=None):
        """Build from a list of ``RElement`` coefficients per basis index."""
        if ring is None:
            ring = coeffs[0].ring
        layers = [
            np.array([c.coeffs[r] for c in coeffs], dtype=object)
            if coeffs else zeros(0)
            for r in range(ring.N)
        ]
        return cls(parent, degree, ring, layers)

    @classmethod
    def from_json(cls, parent, degree, ring, data):
        """Build from a list of coefficient lists (``"p/q"`` strings)."""
        return cls.from_coeffs(
            parent, degree, [RElement(ring, c) for c in data], ring
        )

    @classmethod
    def basis(cls, parent, degree, i, ring):
        """Constant basis element ``e_i``."""
        layers = [unit_vector(parent.dimension(degree), i)]
        return cls(parent, degree, ring, layers)

    @classmethod
    def constant(cls, parent, degree, vector, ring):
        """Element with the given constant coefficient vector."""
        return cls(parent, degree, ring, [np.array(vector, dtype=object)])

    @property
    def coeffs(self):
        """Coefficients as a list of ``RElement``."""
        return [
            RElement(self.ring, [layer[i] for layer in self.layers])
            for i in range(self.parent.dimension(self.degree))
        ]

    def _check(self, other):
        if other.parent is not self.parent:
            raise DegreeError("Elements of different DGLAs")
        if other.degree != self.degree:
            raise DegreeError(
                f"Degrees {self.degree} and {other.degree} differ"
            )
        if other.ring != self.ring:
            raise DegreeError("Elements over different rings")

    def __add__(self, other):
        self._check(other)
        return DglaElement(
            self.parent, self.degree, self.ring,
            [a + b for a, b in zip(self.layers, other.layers)]
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DglaElement):
            return NotImplemented
        return (
            other.degree == self.degree and other.ring == self.ring
            and all(
                len(a) == len(b) and all(x == y for x, y in zip(a, b))
                for a, b in zip(self.layers, other.layers)
            )
        )

    def __hash__(self):
        return hash((self.degree, tuple(
            tuple(layer) for layer in self.layers
        )))

    def __repr__(self):
        return (
            f"DglaElement(degree={self.degree}, "
            f"coeffs={[str(c) for c in self.coeffs]})"
        )

    def scale(self, c):
        """Multiply by a rational scalar."""
        c = to_rational(c)
        return DglaElement(
            self.parent, self.degree, self.ring,
            [c * layer for layer in self.layers]
        )

    def shift(self, r):
        """Multiply by ``t^r``."""
        dim = self.parent.dimension(self.degree)
        layers = [zeros(dim) for _ in range(r)] + self.layers
        return DglaElement(self.parent, self.degree, self.ring, layers)

    def truncate(self, order):
        """Drop all powers ``t^r`` with ``r >= order``."""
        dim = self.parent.dimension(self.degree)
        layers = [
            layer if r < order else zeros(dim)
            for r, layer in enumerate(self.layers)
        ]
        return DglaElement(self.parent, self.degree, self.ring, layers)

    def is_zero(self):
        """Whether all coefficients vanish."""
        return all(is_zero_vector(layer) for layer in self.layers)

    def in_maximal_ideal(self):
        """Whether all coefficients lie in ``(t)``."""
        return is_zero_vector(self.layers[0])

    def order(self):
        """Smallest ``r`` with a nonzero ``t^r`` layer (``N`` if zero)."""
        for r, layer in enumerate(self.layers):
            if not is_zero_vector(layer):
                return r
        return self.ring.N

    def to_json(self):
        """List of coefficient lists."""
        return [c.to_json() for c in self.coeffs]


def differential(x):
    """The differential ``dx`` over ``R``."""
    g = x.parent
    layers = [
        g.zero(x.degree + 1) if is_zero_vector(layer)
        else g.diff(x.degree, layer)
        for layer in x.layers
    ]
    return DglaElement(g, x.degree + 1, x.ring, layers)


def bracket(x, y):
    """Bracket ``[x, y]`` over ``R`` (truncated convolution)."""
    if x.parent is not y.parent:
        raise DegreeError("Elements of different DGLAs")
    if x.ring != y.ring:
        raise DegreeError("Elements over different rings")
    g, N = x.parent, x.ring.N
    deg = x.degree + y.degree
    out = [g.zero(deg) for _ in range(N)]
    if g.dimension(deg) == 0:
        return DglaElement(g, deg, x.ring, out)
    for i, a in enumerate(x.layers):
        if is_zero_vector(a):
            continue
        for j in range(N - i):
            b = y.layers[j]
            if not is_zero_vector(b):
                out[i + j] = out[i + j] + g.bracket(x.degree, a, y.degree, b)
    return DglaElement(g, deg, x.ring, out)


def exp_ad(X, y):
    """
    ``e^{ad X} (y)`` for ``X`` in the maximal ideal.

    The series stops at ``(ad X)^(N-1)`` by nilpotency.
    """
    result, term = y, y
    for i in range(1, X.ring.N):
        term = bracket(X, term).scale(QQ(1, i))
        if term.is_zero():
            break
        result = result + term
    return result


def mc_residual(gamma):
    """
    Maurer-Cartan residual ``d gamma + 1/2 [gamma, gamma]``.

    >>> from dglastacks.coefficients import ArtinRing
    >>> g = abelian({1: 1, 2: 1}, [{"deg": 1, "matrix": [[1]]}])
    >>> gamma = DglaElement.basis(g, 1, 0, ArtinRing(2)).shift(1)
    >>> [str(c) for c in mc_residual(gamma).coeffs]
    ['t']
    """
    if gamma.degree != 1:
        raise DegreeError(f"MC elements have degree 1, not {gamma.degree}")
    return differential(gamma) + bracket(gamma, gamma).scale(QQ(1, 2))


def is_maurer_cartan(gamma):
    """Whether ``gamma`` lies in the maximal ideal and solves MC."""
    return gamma.in_maximal_ideal() and mc_residual(gamma).is_zero()


def _require_mc(gamma):
    if gamma.degree != 1:
        raise DegreeError(f"MC elements have degree 1, not {gamma.degree}")
    if not is_maurer_cartan(gamma):
        raise NotMaurerCartan("Input does not solve the MC equation")


class GaugeTransform:
    """
    Gauge transformation ``exp X`` with ``X`` of degree zero in ``g (x) m``.

    Parameters
    ----------
    log_part : DglaElement
        ``X``.
    source : DglaElement, optional
        The MC element the transformation starts from; enables base checks.
    """

    def __init__(self, log_part, source=None):
        if log_part.degree != 0:
            raise DegreeError("Gauge transformations have degree 0")
        if not log_part.in_maximal_ideal():
            raise DglaStacksError(
                "Gauge transformations must lie in the maximal ideal"
            )
        self.log_part = log_part
        self.source = source

    @property
    def target(self):
        """Image of the source, if a source is known."""
        if self.source is None:
            return None
        return gauge_act(self, self.source)

    def inverse(self):
        """``exp(-X)`` starting at the target."""
        return GaugeTransform(-self.log_part, self.target)

    def __eq__(self, other):
        return (
            isinstance(other, GaugeTransform)
            and other.log_part == self.log_part
        )

    def __hash__(self):
        return hash(self.log_part)


class TwoMorphismElt:
    """
    Element ``exp_gamma t`` of the unipotent group of ``g^{-1} (x) m``.

    Equality is equality of logarithms.
    """

    def __init__(self, base_mc, log_part, check=True):
        if log_part.degree != -1:
            raise DegreeError("2-morphisms have degree -1")
        if not log_part.in_maximal_ideal():
            raise DglaStacksError("2-morphisms must lie in the maximal ideal")
        if check:
            _require_mc(base_mc)
        self.base_mc = base_mc
        self.log_part = log_part

    def inverse(self):
        """The inverse 2-morphism."""
        return TwoMorphismElt(self.base_mc, -self.log_part, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, TwoMorphismElt)
            and other.base_mc == self.base_mc
            and other.log_part == self.log_part
        )

    def __hash__(self):
        return hash(self.log_part)


def _as_log(X):
    return X.log_part if isinstance(X, GaugeTransform) else X


def gauge_act(X, gamma):
    """
    Gauge action ``gamma - sum (ad X)^i/(i+1)! (dX + [gamma, X])``.

    ``X`` is a :class:`GaugeTransform` or its logarithm.
    """
    X = _as_log(X)
    _require_mc(gamma)
    if X.degree != 0:
        raise DegreeError("Gauge transformations have degree 0")
    term = differential(X) + bracket(gamma, X)
    total = term
    for i in range(1, X.ring.N):
        term = bracket(X, term).scale(QQ(1, i + 1))
        if term.is_zero():
            break
        total = total + term
    return gamma - total


def check_conjugation(X, gamma1, gamma2):
    """
    Check ``d + ad gamma2 = e^{ad X} (d + ad gamma1) e^{-ad X}``.

    Both operators are applied to every basis vector of every degree.
    """
    X = _as_log(X)
    g, ring = X.parent, X.ring
    minus_X = -X

    def twisted_d(gamma, y):
        return differential(y) + bracket(gamma, y)

    for deg in g.degrees:
        if not g.in_range(deg + 1):
            continue
        for i in range(g.dimension(deg)):
            e = DglaElement.basis(g, deg, i, ring)
            lhs = twisted_d(gamma2, e)
            rhs = exp_ad(X, twisted_d(gamma1, exp_ad(minus_X, e)))
            if lhs != rhs:
                return False
    return True


@lru_cache(maxsize=None)
def _block_splits(word):
    """Splits of ``word`` into consecutive blocks ``X^r Y^s``."""
    if not word:
        return [()]
    out = []
    for end in range(1, len(word) + 1):
        piece = word[:end]
        if any(a > b for a, b in zip(piece, piece[1:])):
            break
        block = (piece.count(0), piece.count(1))
        for rest in _block_splits(word[end:]):
            out.append((block,) + rest)
    return out


@lru_cache(maxsize=None)
def dynkin_coefficients(length):
    """
    Coefficients of right-nested words of the given length in the BCH series.

    Words are tuples over ``0`` (for ``X``) and ``1`` (for ``Y``); the word
    ``(w_1, ..., w_L)`` stands for ``[w_1, [w_2, ..., [w_{L-1}, w_L]]]``.

    >>> dynkin_coefficients(2)[(0, 1)] == QQ(1, 4)
    True
    """
    out = {}
    for word in product((0, 1), repeat=length):
        c = Fraction(0)
        for blocks in _block_splits(word):
            n = len(blocks)
            denominator = n
            for r, s in blocks:
                denominator *= factorial(r) * factorial(s)
            c += Fraction((-1) ** (n - 1), denominator)
        if c:
            c /= length
            out[word] = QQ(c.numerator, c.denominator)
    return out


def bch(X, Y, br):
    """
    Baker-Campbell-Hausdorff series of nilpotent elements for a bracket.

    ``br`` is the bracket callable; words longer than ``N - 1`` vanish.
    """
    max_length = X.ring.N - 1
    if max_length > BCH_MAX_LENGTH:
        raise CapExceeded("bch_length", max_length, BCH_MAX_LENGTH)
    letters = (X, Y)
    cache = {}

    def nested(word):
        if word not in cache:
            if len(word) == 1:
                cache[word] = letters[word[0]]
            else:
                inner = nested(word[1:])
                cache[word] = (
                    inner if inner.is_zero()
                    else br(letters[word[0]], inner)
                )
        return cache[word]

    result = X + Y
    for length in range(2, max_length + 1):
        for word, c in dynkin_coefficients(length).items():
            value = nested(word)
            if not value.is_zero():
                result = result + value.scale(c)
    return result


def twisted_bracket(gamma, a, b):
    """Twisted bracket ``[a, db + [gamma, b]]`` on degree ``-1``."""
    if gamma.degree != 1 or a.degree != -1 or b.degree != -1:
        raise DegreeError("Twisted bracket needs gamma in 1 and a, b in -1")
    return bracket(a, differential(b) + bracket(gamma, b))


def twisted_differential(gamma, t):
    """``dt + [gamma, t]``."""
    return differential(t) + bracket(gamma, t)


def bch_product(X, Y, bracket_kind="plain"):
    """
    Product in ``exp g^0`` or, given an MC element, in ``exp_gamma g^{-1}``.

    Parameters
    ----------
    X, Y : DglaElement
        Logarithms, both of degree 0 (plain) or -1 (twisted).
    bracket_kind : "plain" or DglaElement
        ``"plain"`` or the MC element defining the twisted bracket.
    """
    X, Y = _as_log(X), _as_log(Y)
    if X.degree != Y.degree:
        raise DegreeError("BCH operands of different degree")
    if isinstance(bracket_kind, str):
        if bracket_kind != "plain" or X.degree != 0:
            raise DegreeError("Plain BCH products live in degree 0")
        return bch(X, Y, bracket)
    gamma = bracket_kind
    if X.degree != -1:
        raise DegreeError("Twisted BCH products live in degree -1")
    return bch(X, Y, lambda a, b: twisted_bracket(gamma, a, b))


def two_morphism_act(t, X):
    """
    Act by ``exp_gamma t`` on ``exp X``: ``exp(dt + [gamma, t]) exp X``.

    ``t.base_mc`` must be the target of ``X`` when ``X`` knows its source.
    """
    if not isinstance(X, GaugeTransform):
        X = GaugeTransform(X)
    if X.source is not None and X.target != t.base_mc:
        raise BaseMismatch("2-morphism base differs from the target of X")
    log = bch(
        twisted_differential(t.base_mc, t.log_part), X.log_part, bracket
    )
    return GaugeTransform(log, X.source)


def vertical_compose(s, t):
    """Product ``exp_gamma s exp_gamma t`` of 2-morphisms with one base."""
    if s.base_mc != t.base_mc:
        raise BaseMismatch("Vertical composition needs a common base")
    log = bch_product(s.log_part, t.log_part, s.base_mc)
    return TwoMorphismElt(s.base_mc, log, check=False)


def horizontal_compose(t23, t12, X23):
    """
    Horizontal composition ``exp t23 exp(e^{ad X23} t12)`` over ``gamma3``.

    ``X23`` maps the base of ``t12`` to the base of ``t23``.
    """
    X23 = _as_log(X23)
    if gauge_act(X23, t12.base_mc) != t23.base_mc:
        raise BaseMismatch("X23 does not map the base of t12 to gamma3")
    log = bch_product(t23.log_part, exp_ad(X23, t12.log_part), t23.base_mc)
    return TwoMorphismElt(t23.base_mc, log, check=False)


# First order and obstruction theory
# ==================================

def enumerate_first_order_classes(g):
    """
    Basis of ``H^1 = ker(d: g^1 -> g^2) / im(d: g^0 -> g^1)``.

    >>> len(enumerate_first_order_classes(abelian({1: 2})))
    2
    """
    n = g.dimension(1)
    cocycles = g.diff_matrix(1).nullspace() if n else []
    image = g.diff_matrix(0)
    columns = [
        {i: v for i, v in row.items()}
        for row in image.transpose().rows.values()
    ]
    basis = []
    current = ExactMatrix.from_columns(columns, n).rank()
    for z in cocycles:
        trial = ExactMatrix.from_columns(columns + [z], n)
        if trial.rank() > current:
            columns.append(z)
            current += 1
            basis.append(dense_vector(z, n))
    return basis


def mc_obstruction(gamma, r):
    """
    Obstruction to solving MC at order ``r``.

    ``gamma`` must solve MC modulo ``t^r``. Returns the ``t^r`` coefficient
    ``o`` of the residual (a 2-cocycle) and a correction ``u`` with
    ``du = -o`` when ``o`` is a coboundary, otherwise ``None``.
    """
    residual = mc_residual(gamma)
    for s in range(r):
        if not is_zero_vector(residual.layers[s]):
            raise NotMaurerCartan(f"Residual nonzero at order {s} < {r}")
    g = gamma.parent
    obstruction = residual.layers[r]
    if is_zero_vector(obstruction):
        return obstruction, g.zero(1)
    solution = g.diff_matrix(1).solve(
        as_sparse_vector(-obstruction)
    )
    if solution is None:
        return obstruction, None
    return obstruction, dense_vector(solution, g.dimension(1))


def extend_mc(gamma, r, cocycle=None):
    """
    Lift ``gamma`` (MC modulo ``t^r``) to an MC element modulo ``t^(r+1)``.

    Adds ``t^r (u + z)`` with the canonical correction ``u`` and an optional
    1-cocycle ``z``.
    """
    _, correction = mc_obstruction(gamma, r)
    if correction is None:
        raise NotMaurerCartan(f"Obstruction at order {r} is not exact")
    if cocycle is not None:
        correction = correction + cocycle
    g = gamma.parent
    layer = DglaElement(g, 1, gamma.ring, [correction]).shift(r)
    return gamma + layer


def random_element(g, degree, ring, rng, bound=2, maximal=True):
    """Random element with small integer coefficients."""
    dim = g.dimension(degree)
    layers = []
    for r in range(ring.N):
        if maximal and r == 0:
            layers.append(zeros(dim))
        else:
            layers.append(np.array(
                [QQ(int(c)) for c in rng.integers(-bound, bound + 1, dim)],
                dtype=object
            ))
    return DglaElement(g, degree, ring, layers)


def random_mc(g, ring, rng, bound=2, attempts=10):
    """
    Random MC element, built order by order from random 1-cocycles.

    Falls back to zero when every attempt meets a non-exact obstruction.
    """
    n = g.dimension(1)
    cocycles = g.diff_matrix(1).nullspace() if n else []
    for _ in range(attempts):
        gamma = DglaElement(g, 1, ring)
        try:
            for r in range(1, ring.N):
                z = zeros(n)
                draws = rng.integers(-bound, bound + 1, len(cocycles))
                for c, v in zip(draws, cocycles):
                    z = z + QQ(int(c)) * dense_vector(v, n)
                gamma = extend_mc(gamma, r, z)
            return gamma
        except NotMaurerCartan:
            continue
    return DglaElement(g, 1, ring)


# Validation
# ==========

def _sign(k):
    return -1 if k % 2 else 1


def validate_dgla(g):
    """
    Report violated DGLA axioms.

    Checks ``d^2 = 0``, graded antisymmetry, the graded Jacobi identity,
    the Leibniz rule and the absence of degrees below ``-1`` on all basis
    triples. Every violation carries its witness.

    >>> bad = StructureDgla({0: 3}, [], [
    ...     {"i": 0, "j": 1, "k": 2, "deg_a": 0, "deg_b": 0, "c": 1},
    ...     {"i": 1, "j": 0, "k": 2, "deg_a": 0, "deg_b": 0, "c": 1}])
    >>> sorted({v.name for v in validate_dgla(bad)})
    ['antisymmetry']
    """
    violations = []
    degrees = g.degrees
    for deg in degrees:
        if deg < -1:
            violations.append(Violation(
                "degree_bound", {"degree": deg, "dim": g.dimension(deg)}
            ))

    def basis(deg):
        n = g.dimension(deg)
        return [(i, unit_vector(n, i)) for i in range(n)]

    def br(da, u, db, v):
        if g.dimension(da + db) == 0:
            return zeros(0)
        return g.bracket(da, u, db, v)

    for deg in degrees:
        if not g.in_range(deg + 2):
            continue
        for i, e in basis(deg):
            if not is_zero_vector(g.diff(deg + 1, g.diff(deg, e))):
                violations.append(Violation(
                    "d_squared", {"degree": deg, "basis": i}
                ))

    for da, db in product(degrees, repeat=2):
        if not g.in_range(da + db):
            continue
        for (i, a), (j, b) in product(basis(da), basis(db)):
            sym = br(da, a, db, b) + _sign(da * db) * br(db, b, da, a)
            if not is_zero_vector(sym):
                violations.append(Violation("antisymmetry", {
                    "degrees": [da, db], "basis": [i, j]
                }))
            if all(g.in_range(k) for k in (da + 1, db + 1, da + db + 1)):
                lhs = g.diff(da + db, br(da, a, db, b)) \
                    if g.dimension(da + db) else zeros(
                        g.dimension(da + db + 1))
                rhs = br(da + 1, g.diff(da, a), db, b) \
                    + _sign(da) * br(da, a, db + 1, g.diff(db, b))
                if len(lhs) == len(rhs) and not is_zero_vector(lhs - rhs):
                    violations.append(Violation("leibniz", {
                        "degrees": [da, db], "basis": [i, j]
                    }))

    for da, db, dc in product(degrees, repeat=3):
        partial = (da + db, db + dc, dc + da, da + db + dc)
        if not all(g.in_range(k) for k in partial):
            continue
        if g.dimension(da + db + dc) == 0:
            continue
        for (i, a), (j, b), (k, c) in product(
                basis(da), basis(db), basis(dc)):
            total = (
                _sign(da * dc) * br(da, a, db + dc, br(db, b, dc, c))
                + _sign(db * da) * br(db, b, dc + da, br(dc, c, da, a))
                + _sign(dc * db) * br(dc, c, da + db, br(da, a, db, b))
            )
            if not is_zero_vector(total):
                violations.append(Violation("jacobi", {
                    "degrees": [da, db, dc], "basis": [i, j, k]
                }))
    return violations


# Faithful matrix representations
# ===============================

def _kron(A, B):
    (a0, a1), (b0, b1) = A.shape, B.shape
    out = np.full((a0 * b0, a1 * b1), QQ(0), dtype=object)
    for i, j in product(range(a0), range(a1)):
        if A[i, j]:
            out[i * b0:(i + 1) * b0, j * b1:(j + 1) * b1] = A[i, j] * B
    return out


def shift_matrix(N):
    """Matrix of multiplication by ``t`` on ``Q[t]/(t^N)``."""
    T = np.full((N, N), QQ(0), dtype=object)
    for i in range(N - 1):
        T[i + 1, i] = QQ(1)
    return T


def matrix_representation(x):
    """
    Matrix of a degree zero element of a matrix DGLA over ``R``.

    Uses ``x |-> sum_r rho(x_r) (x) T^r`` with the shift matrix ``T``,
    which is faithful and respects commutators.
    """
    g = x.parent
    if g.matrix_basis is None:
        raise DglaStacksError(f"{g.name} has no matrix representation")
    basis = g.matrix_basis[x.degree]
    N = x.ring.N
    size = basis[0].shape[0]
    out = np.full((size * N, size * N), QQ(0), dtype=object)
    power = np.identity(N, dtype=object) * QQ(1)
    T = shift_matrix(N)
    for layer in x.layers:
        rho = np.full((size, size), QQ(0), dtype=object)
        for c, e in zip(layer, basis):
            if c:
                rho = rho + c * e
        out = out + _kron(rho, power)
        power = T.dot(power)
    return out


def nilpotent_exp(M):
    """Exponential of a nilpotent matrix (finite series)."""
    n = M.shape[0]
    result = np.identity(n, dtype=object) * QQ(1)
    term = result
    for k in range(1, n + 1):
        term = term.dot(M) * QQ(1, k)
        if not any(term.flat):
            break
        result = result + term
    return result


def nilpotent_log(M):
    """Logarithm of a unipotent matrix (finite series)."""
    n = M.shape[0]
    identity = np.identity(n, dtype=object) * QQ(1)
    x = M - identity
    result = np.full((n, n), QQ(0), dtype=object)
    power = identity
    for k in range(1, n + 1):
        power = power.dot(x)
        if not any(power.flat):
            break
        result = result + power * QQ((-1) ** (k + 1), k)
    return result

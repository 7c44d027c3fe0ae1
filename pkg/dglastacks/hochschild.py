# pylint: disable=invalid-name

"""
Module for Hochschild cochains of finite-dimensional algebras.

Contains :class:`FinAlgebra`, dense :class:`HochschildCochain` tensors, the
brace composition, the Gerstenhaber bracket and the Hochschild differential
``delta = [m, .]``, the shifted cochain DGLA :class:`HochschildDgla` and the
dictionary between star products and Maurer-Cartan elements.

A cochain of arity ``n`` is a numpy object array of shape ``(d,)*(n+1)``;
entry ``T[i_1, ..., i_n, k]`` is the coefficient of ``e_k`` in
``D(e_{i_1}, ..., e_{i_n})``. The basis vector ``e_0`` is always the unit.

Examples
--------

>>> A = dual_numbers()
>>> hochschild_cohomology(A, 2)["full"]
[2, 1, 1]
"""

from itertools import product

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.coefficients import format_rational, to_rational
from dglastacks.dgla import (
    Dgla, DglaElement, GaugeTransform, TwoMorphismElt, is_maurer_cartan,
    zeros
)
from dglastacks.errors import (
    CapExceeded, DegreeError, DglaStacksError, NotMaurerCartan, Violation
)
from dglastacks.linalg import ExactMatrix

MAX_MATRIX_ENTRIES = 10 ** 6
"""Size guard of :func:`hochschild_cohomology`."""


def zero_tensor(dim, arity):
    """Zero cochain tensor."""
    return np.full((dim,) * (arity + 1), QQ(0), dtype=object)


def as_tensor(data):
    """Convert nested lists of rationals into an object array."""
    array = np.array(data, dtype=object)
    return np.vectorize(to_rational, otypes=[object])(array) \
        if array.size else array


class FinAlgebra:
    """
    Finite-dimensional unital associative algebra.

    Parameters
    ----------
    mult : array_like
        Structure constants ``mult[i, j, k]``: coefficient of ``e_k`` in
        ``e_i e_j``.
    unit : array_like, optional
        Coordinates of the unit, ``e_0`` by default.
    name : str
        Label for reports.
    """

    def __init__(self, mult, unit=None, name="algebra"):
        self.mult = as_tensor(mult)
        self.dim = self.mult.shape[0]
        if unit is None:
            unit = [1] + [0] * (self.dim - 1)
        self.unit = np.array([to_rational(u) for u in unit], dtype=object)
        self.name = name

    @classmethod
    def from_json(cls, data, name="algebra"):
        """Build from ``{"dim", "unit", "mult"}``."""
        mult = as_tensor(data["mult"]).reshape((int(data["dim"]),) * 3)
        return cls(mult, data.get("unit"), name=name)

    @classmethod
    def from_matrices(cls, basis, name="matrix_algebra"):
        """
        Algebra spanned by a multiplicatively closed list of matrices.

        ``basis[0]`` must be the identity.
        """
        flat = ExactMatrix.from_dense(
            [[m.flat[r] for m in basis] for r in range(basis[0].size)]
        )
        d = len(basis)
        mult = np.full((d, d, d), QQ(0), dtype=object)
        for i, j in product(range(d), repeat=2):
            coords = flat.solve(list(basis[i].dot(basis[j]).flat))
            assert coords is not None, "Basis is not closed under products"
            for k, value in coords.items():
                mult[i, j, k] = value
        return cls(mult, name=name)

    def to_json(self):
        """JSON of job files."""
        return {
            "dim": self.dim,
            "unit": [format_rational(u) for u in self.unit],
            "mult": _format_tensor(self.mult),
        }

    def multiply(self, a, b):
        """Product of two coefficient vectors."""
        partial = np.tensordot(a, self.mult, axes=([0], [0]))
        return np.tensordot(b, partial, axes=([0], [0]))

    def is_associative(self):
        """
        Associativity check.

        Returns
        -------
        tuple
            ``(True, None)`` or ``(False, [i, j, k])`` for a failing triple.
        """
        lhs = np.tensordot(self.mult, self.mult, axes=([2], [0]))
        rhs = np.tensordot(self.mult, self.mult, axes=([2], [1]))
        # ((e_i e_j) e_k)_l against (e_i (e_j e_k))_l
        rhs = np.moveaxis(rhs, 2, 0)
        for index in product(range(self.dim), repeat=3):
            if any(a != b for a, b in zip(lhs[index], rhs[index])):
                return False, list(index)
        return True, None

    def validate(self):
        """Report violations of associativity and of the unit laws."""
        violations = []
        ok, witness = self.is_associative()
        if not ok:
            violations.append(Violation("associativity", {"basis": witness}))
        unit_is_e0 = self.unit[0] == 1 and not any(self.unit[1:])
        if not unit_is_e0:
            violations.append(Violation("unit_basis", {}))
        for i in range(self.dim):
            e = np.zeros(self.dim, dtype=object) + QQ(0)
            e[i] = QQ(1)
            if any(self.multiply(self.unit, e) != e) \
                    or any(self.multiply(e, self.unit) != e):
                violations.append(Violation("unit", {"basis": i}))
        return violations

    def is_commutative(self):
        """Whether ``e_i e_j = e_j e_i`` for all basis pairs."""
        return all(
            self.mult[i, j, k] == self.mult[j, i, k]
            for i, j, k in product(range(self.dim), repeat=3)
        )


def _format_tensor(tensor):
    if np.ndim(tensor) == 0:
        return format_rational(np.asarray(tensor, dtype=object)[()])
    return [_format_tensor(t) for t in tensor]


def rationals():
    """The ground field ``Q``."""
    return FinAlgebra([[[1]]], name="Q")


def split_pair():
    """``Q x Q`` with basis ``1 = (1, 1)``, ``e = (1, 0)``."""
    mult = np.full((2, 2, 2), QQ(0), dtype=object)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = mult[1, 1, 1] = QQ(1)
    return FinAlgebra(mult, name="QxQ")


def dual_numbers():
    """``Q[x]/(x^2)`` with basis ``1, x``."""
    mult = np.full((2, 2, 2), QQ(0), dtype=object)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = QQ(1)
    return FinAlgebra(mult, name="Q[x]/(x^2)")


def matrices_2x2():
    """``M_2(Q)`` with basis ``1, E12, E21, E11``."""
    def matrix(entries):
        return np.array(
            [[QQ(v) for v in row] for row in entries], dtype=object
        )
    basis = [
        matrix([[1, 0], [0, 1]]), matrix([[0, 1], [0, 0]]),
        matrix([[0, 0], [1, 0]]), matrix([[1, 0], [0, 0]]),
    ]
    return FinAlgebra.from_matrices(basis, name="M2(Q)")


STANDARD_ALGEBRAS = {
    "Q": rationals,
    "QxQ": split_pair,
    "dual_numbers": dual_numbers,
    "M2": matrices_2x2,
}


# Tensor calculus
# ===============

def compose_at(T1, i, T2):
    """
    Insertion ``D1(..., D2(...), ...)`` of ``D2`` at slot ``i`` of ``D1``.

    No sign is applied.
    """
    n1, n2 = T1.ndim - 1, T2.ndim - 1
    assert 0 <= i < n1, "Slot out of range"
    res = np.tensordot(T2, T1, axes=([n2], [i]))
    return np.moveaxis(res, list(range(n2)), list(range(i, i + n2)))


def compose(T1, T2):
    """Gerstenhaber composition ``sum_i (-1)^(i (n2-1)) D1 o_i D2``."""
    n1, n2 = T1.ndim - 1, T2.ndim - 1
    dim = T1.shape[-1]
    out = zero_tensor(dim, n1 + n2 - 1) if n1 + n2 >= 1 else None
    if n1 == 0:
        return out
    for i in range(n1):
        term = compose_at(T1, i, T2)
        out = out + term if (i * (n2 - 1)) % 2 == 0 else out - term
    return out


def bracket_tensors(T1, T2):
    """
    Gerstenhaber bracket ``D1 o D2 - (-1)^((n1-1)(n2-1)) D2 o D1``.

    Returns ``None`` when the result would have negative arity.
    """
    n1, n2 = T1.ndim - 1, T2.ndim - 1
    if n1 + n2 == 0:
        return None
    first, second = compose(T1, T2), compose(T2, T1)
    if ((n1 - 1) * (n2 - 1)) % 2:
        return first + second
    return first - second


def diff_tensor(mult, T):
    """Hochschild differential ``[m, D]``."""
    return bracket_tensors(mult, T)


def normalized_mask(dim, arity):
    """Boolean mask of the entries with no input index equal to ``0``."""
    mask = np.ones((dim,) * (arity + 1), dtype=bool)
    for slot in range(arity):
        index = [slice(None)] * (arity + 1)
        index[slot] = 0
        mask[tuple(index)] = False
    return mask


class HochschildCochain:
    """
    A Hochschild cochain ``A^(x)n -> A`` with rational coefficients.

    Its DGLA degree is ``arity - 1``.
    """

    def __init__(self, algebra, tensor):
        self.algebra = algebra
        self.tensor = np.asarray(tensor, dtype=object)
        self.arity = self.tensor.ndim - 1
        assert self.tensor.shape == (algebra.dim,) * (self.arity + 1), \
            "Tensor shape must be dim^(arity+1)"

    @classmethod
    def zero(cls, algebra, arity):
        """Zero cochain."""
        return cls(algebra, zero_tensor(algebra.dim, arity))

    @classmethod
    def from_json(cls, algebra, arity, data):
        """Build from nested lists of rationals."""
        return cls(
            algebra, as_tensor(data).reshape((algebra.dim,) * (arity + 1))
        )

    @property
    def degree(self):
        """DGLA degree ``arity - 1``."""
        return self.arity - 1

    def __add__(self, other):
        return HochschildCochain(self.algebra, self.tensor + other.tensor)

    def __sub__(self, other):
        return HochschildCochain(self.algebra, self.tensor - other.tensor)

    def scale(self, c):
        """Multiply by a rational."""
        return HochschildCochain(self.algebra, to_rational(c) * self.tensor)

    def __eq__(self, other):
        return (
            isinstance(other, HochschildCochain)
            and other.tensor.shape == self.tensor.shape
            and all(a == b for a, b in zip(self.tensor.flat,
                                           other.tensor.flat))
        )

    def __hash__(self):
        return hash(tuple(self.tensor.flat))

    def is_zero(self):
        """Whether all entries vanish."""
        return not any(self.tensor.flat)

    def is_normalized(self):
        """Whether ``D`` vanishes as soon as an argument is the unit."""
        mask = normalized_mask(self.algebra.dim, self.arity)
        return not any(self.tensor[~mask])

    def evaluate(self, *indices):
        """Coefficient vector of ``D(e_{i_1}, ..., e_{i_n})``."""
        return self.tensor[tuple(indices)]

    def to_json(self):
        """Nested lists of rationals."""
        return _format_tensor(self.tensor)


def hochschild_diff(D):
    """
    Hochschild differential ``delta D = [m, D]``.

    >>> A = dual_numbers()
    >>> one = HochschildCochain(A, np.array([QQ(1), QQ(0)], dtype=object))
    >>> hochschild_diff(one).is_zero()
    True
    """
    A = D.algebra
    return HochschildCochain(A, diff_tensor(A.mult, D.tensor))


def gerstenhaber_bracket(D1, D2):
    """Gerstenhaber bracket of two cochains (arity ``n1 + n2 - 1``)."""
    if D1.arity + D2.arity == 0:
        raise DegreeError("The bracket of two 0-cochains has arity -1")
    return HochschildCochain(
        D1.algebra, bracket_tensors(D1.tensor, D2.tensor)
    )


def normalize_project(D):
    """Zero every entry with an input equal to the unit ``e_0``."""
    mask = normalized_mask(D.algebra.dim, D.arity)
    tensor = D.tensor.copy()
    tensor[~mask] = QQ(0)
    return HochschildCochain(D.algebra, tensor)


class HochschildDgla(Dgla):
    """
    The shifted Hochschild DGLA ``C(A)[1]`` truncated at an arity cap.

    Degree ``k`` holds cochains of arity ``k + 1`` for
    ``-1 <= k <= arity_cap - 1``; vectors are flattened tensors, or their
    normalized coordinates when ``normalized`` is set.
    """

    def __init__(self, algebra, arity_cap=3, normalized=False):
        self.algebra = algebra
        self.arity_cap = arity_cap
        self.normalized = normalized
        self.name = f"hochschild_{algebra.name}"
        self._masks = {}

    @property
    def degrees(self):
        return [
            k for k in range(-1, self.arity_cap) if self.dimension(k) > 0
        ]

    def in_range(self, deg):
        return -1 <= deg <= self.arity_cap - 1

    def mask(self, arity):
        """Flat coordinate mask of the arity."""
        if arity not in self._masks:
            d = self.algebra.dim
            if self.normalized:
                self._masks[arity] = normalized_mask(d, arity).ravel()
            else:
                self._masks[arity] = np.ones(d ** (arity + 1), dtype=bool)
        return self._masks[arity]

    def dimension(self, deg):
        if not self.in_range(deg):
            return 0
        return int(self.mask(deg + 1).sum())

    def to_tensor(self, deg, u):
        """Tensor of a coefficient vector."""
        arity = deg + 1
        d = self.algebra.dim
        flat = np.full(d ** (arity + 1), QQ(0), dtype=object)
        flat[self.mask(arity)] = u
        return flat.reshape((d,) * (arity + 1))

    def from_tensor(self, tensor):
        """Coefficient vector of a tensor (normalized part if normalized)."""
        arity = tensor.ndim - 1
        return np.asarray(tensor.ravel()[self.mask(arity)], dtype=object)

    def diff(self, deg, u):
        if self.dimension(deg + 1) == 0:
            return zeros(0)
        return self.from_tensor(
            diff_tensor(self.algebra.mult, self.to_tensor(deg, u))
        )

    def bracket(self, da, u, db, v):
        if self.dimension(da + db) == 0:
            return zeros(0)
        return self.from_tensor(bracket_tensors(
            self.to_tensor(da, u), self.to_tensor(db, v)
        ))

    def element(self, layers, ring):
        """DGLA element from a list of tensors (one per power of ``t``)."""
        layers = list(layers)
        deg = layers[0].ndim - 2
        return DglaElement(
            self, deg, ring, [self.from_tensor(T) for T in layers]
        )

    def tensor_layers(self, x):
        """Tensors of the layers of an element."""
        return [self.to_tensor(x.degree, layer) for layer in x.layers]


class StarProduct:
    """
    Star product ``m' = m + sum_r t^r B_r`` on ``A (x) Q[t]/(t^N)``.

    Parameters
    ----------
    algebra : FinAlgebra
    ring : ArtinRing
    corrections : list of arrays
        ``B_1, ..., B_{N-1}``, arity two tensors; missing ones are zero.
    """

    def __init__(self, algebra, ring, corrections=()):
        self.algebra = algebra
        self.ring = ring
        corrections = [as_tensor(B) for B in corrections]
        corrections += [
            zero_tensor(algebra.dim, 2)
            for _ in range(ring.N - 1 - len(corrections))
        ]
        self.corrections = corrections[:ring.N - 1]

    @classmethod
    def from_json(cls, algebra, ring, data):
        """Build from a list of arity two tensors."""
        d = algebra.dim
        return cls(algebra, ring, [
            as_tensor(B).reshape((d, d, d)) for B in data
        ])

    def to_json(self):
        """Corrections as nested lists."""
        return [_format_tensor(B) for B in self.corrections]

    @property
    def layers(self):
        """``[m, B_1, ..., B_{N-1}]``."""
        return [self.algebra.mult] + self.corrections

    def __eq__(self, other):
        return (
            isinstance(other, StarProduct)
            and other.ring == self.ring
            and all(
                all(a == b for a, b in zip(B.flat, C.flat))
                for B, C in zip(self.corrections, other.corrections)
            )
        )

    def __hash__(self):
        return hash(self.ring)

    def multiply(self, a, b):
        """
        Star product of ``R``-valued vectors given as lists of layers.

        Layer ``r`` of the inputs and output is the ``t^r`` coefficient.
        """
        N = self.ring.N
        d = self.algebra.dim
        out = [np.full(d, QQ(0), dtype=object) for _ in range(N)]
        for p, M in enumerate(self.layers):
            for i, ai in enumerate(a):
                for j in range(N - p - i):
                    if not any(ai) or not any(b[j]):
                        continue
                    partial = np.tensordot(ai, M, axes=([0], [0]))
                    out[p + i + j] = out[p + i + j] + np.tensordot(
                        b[j], partial, axes=([0], [0])
                    )
        return out

    def associator_witness(self):
        """
        First failing basis triple and order of ``(a*b)*c = a*(b*c)``.

        Returns ``None`` when ``m'`` is associative modulo ``t^N``.
        """
        d = self.algebra.dim
        layers = self.layers
        for s in range(self.ring.N):
            total = zero_tensor(d, 3)
            for p in range(s + 1):
                q = s - p
                total = total + compose_at(layers[p], 0, layers[q]) \
                    - compose_at(layers[p], 1, layers[q])
            for index in product(range(d), repeat=3):
                if any(total[index]):
                    return {"order": s, "basis": list(index)}
        return None

    def is_associative(self):
        """Whether ``m'`` is associative modulo ``t^N``."""
        return self.associator_witness() is None

    def exp(self, a):
        """Star exponential of an element of ``A (x) m``."""
        N = self.ring.N
        d = self.algebra.dim
        one = [self.algebra.unit.copy()] + [
            np.full(d, QQ(0), dtype=object) for _ in range(N - 1)
        ]
        result, term = one, one
        for k in range(1, N):
            term = [QQ(1, k) * x for x in self.multiply(term, a)]
            result = [x + y for x, y in zip(result, term)]
        return result

    def log(self, b):
        """Star logarithm of an element of ``1 + A (x) m``."""
        N = self.ring.N
        x = [layer.copy() for layer in b]
        x[0] = x[0] - self.algebra.unit
        if any(x[0]):
            raise DglaStacksError("Star log needs an element of 1 + A(x)m")
        result = [np.full(self.algebra.dim, QQ(0), dtype=object)
                  for _ in range(N)]
        power = None
        for k in range(1, N):
            power = x if power is None else self.multiply(power, x)
            sign = QQ((-1) ** (k + 1), k)
            result = [r + sign * p for r, p in zip(result, power)]
        return result


def mu_from_star(s, dgla=None):
    """
    Maurer-Cartan element ``mu(m') = m' - m`` in degree one.

    ``dgla`` defaults to the full Hochschild DGLA with arity cap three.
    """
    g = dgla or HochschildDgla(s.algebra, 3)
    d = s.algebra.dim
    return g.element([zero_tensor(d, 2)] + s.corrections, s.ring)


def star_from_mc(gamma):
    """Star product ``m + gamma`` of an MC element of degree one."""
    if gamma.degree != 1:
        raise DegreeError("Star products come from arity two cochains")
    if not is_maurer_cartan(gamma):
        raise NotMaurerCartan("gamma does not solve the MC equation")
    g = gamma.parent
    tensors = g.tensor_layers(gamma)
    return StarProduct(g.algebra, gamma.ring, tensors[1:])


def _compose_maps(F, G, ring):
    """Layers of ``F o G`` for arity one maps given by tensor layers."""
    N = ring.N
    d = F[0].shape[0]
    out = [zero_tensor(d, 1) for _ in range(N)]
    for p, Fp in enumerate(F):
        for q in range(N - p):
            # T[i, k] = coefficient of e_k in f(e_i)
            out[p + q] = out[p + q] + G[q].dot(Fp)
    return out


def def_morphism_to_gauge(phi_layers, g, ring):
    """
    Gauge transformation ``X = log(phi)`` of ``phi = Id + sum t^r phi_r``.

    Parameters
    ----------
    phi_layers : list of arrays
        ``[phi_0, phi_1, ...]`` arity one tensors with ``phi_0 = Id``.
    g : HochschildDgla
    ring : ArtinRing
    """
    d = g.algebra.dim
    identity = np.identity(d, dtype=object) * QQ(1)
    layers = [as_tensor(p) for p in phi_layers]
    layers += [zero_tensor(d, 1) for _ in range(ring.N - len(layers))]
    if any(a != b for a, b in zip(layers[0].flat, identity.flat)):
        raise DglaStacksError("phi does not reduce to the identity")
    x = [zero_tensor(d, 1)] + layers[1:ring.N]
    log = [zero_tensor(d, 1) for _ in range(ring.N)]
    power = None
    for k in range(1, ring.N):
        power = x if power is None else _compose_maps(power, x, ring)
        sign = QQ((-1) ** (k + 1), k)
        log = [a + sign * b for a, b in zip(log, power)]
    return GaugeTransform(g.element(log, ring))


def gauge_to_def_morphism(X):
    """Layers of the algebra map ``exp(X)`` of a degree zero element."""
    X = X.log_part if isinstance(X, GaugeTransform) else X
    g, ring = X.parent, X.ring
    d = g.algebra.dim
    x = g.tensor_layers(X)
    result = [np.identity(d, dtype=object) * QQ(1)] + [
        zero_tensor(d, 1) for _ in range(ring.N - 1)
    ]
    term = result
    for k in range(1, ring.N):
        term = [QQ(1, k) * T for T in _compose_maps(term, x, ring)]
        result = [a + b for a, b in zip(result, term)]
    return result


def two_morphism_from_unit(b, star, g):
    """
    2-morphism ``exp_gamma t`` of an invertible ``b`` in ``1 + A (x) m``.

    ``t`` is the star logarithm of ``b``, so that acting with it on a
    gauge transformation ``phi`` yields ``Ad(b) o phi``.
    """
    t = star.log(b)
    gamma = mu_from_star(star, g)
    log = DglaElement(g, -1, star.ring, [g.from_tensor(layer) for layer in t])
    return TwoMorphismElt(gamma, log)


# Cohomology oracle
# =================

def diff_matrix(algebra, arity, normalized=False):
    """Matrix of ``delta`` from arity ``n`` to ``n + 1`` cochains."""
    d = algebra.dim
    source = normalized_mask(d, arity).ravel() if normalized \
        else np.ones(d ** (arity + 1), dtype=bool)
    target = normalized_mask(d, arity + 1).ravel() if normalized \
        else np.ones(d ** (arity + 2), dtype=bool)
    source_index = np.flatnonzero(source)
    target_position = -np.ones(target.size, dtype=int)
    target_position[np.flatnonzero(target)] = np.arange(int(target.sum()))
    columns = []
    for flat_index in source_index:
        T = np.full(d ** (arity + 1), QQ(0), dtype=object)
        T[flat_index] = QQ(1)
        image = diff_tensor(algebra.mult, T.reshape((d,) * (arity + 1)))
        column = {}
        for position, value in enumerate(image.flat):
            if value:
                row = target_position[position]
                assert row >= 0, "delta leaves the normalized subcomplex"
                column[int(row)] = value
        columns.append(column)
    return ExactMatrix.from_columns(columns, int(target.sum()))


def hochschild_cohomology(algebra, n_max):
    """
    Dimensions of ``HH^n``, ``0 <= n <= n_max``, full and normalized.

    Raises
    ------
    CapExceeded
        If a differential matrix has more than ``10^6`` entries.
    """
    d = algebra.dim
    entries = d ** (n_max + 1) * d ** (n_max + 2)
    if entries > MAX_MATRIX_ENTRIES:
        raise CapExceeded("matrix_entries", entries, MAX_MATRIX_ENTRIES)
    out = {}
    for normalized in (False, True):
        ranks = [
            diff_matrix(algebra, n, normalized).rank()
            for n in range(n_max + 1)
        ]
        dims = [
            int(normalized_mask(d, n).sum()) if normalized
            else d ** (n + 1)
            for n in range(n_max + 1)
        ]
        out["normalized" if normalized else "full"] = [
            dims[n] - ranks[n] - (ranks[n - 1] if n else 0)
            for n in range(n_max + 1)
        ]
    return out


def random_cochain(algebra, arity, rng, bound=2):
    """Random cochain with small integer entries."""
    d = algebra.dim
    values = rng.integers(-bound, bound + 1, d ** (arity + 1))
    tensor = np.array([QQ(int(v)) for v in values], dtype=object)
    return HochschildCochain(algebra, tensor.reshape((d,) * (arity + 1)))


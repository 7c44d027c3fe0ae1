# pylint: disable=invalid-name

"""
Module for the matrix algebras of a descent datum and their local cochains.

Contains the block algebras ``Mat(A)^p`` (:class:`BlockAlgebra` per sheet,
:class:`MatrixAlgebraP` over a whole nerve level), local Hochschild
cochains (:class:`LocalCochain`) with their bracket and differential,
combinatorial restriction along monotone maps, the filtration by
``s(I) = |Im I| - 1`` and the cotrace from cochains of the fiber algebra.

A local cochain of arity ``k`` is stored by chains ``I = (i_0, ..., i_k)``:
the block arguments ``(i_0 i_1), (i_1 i_2), ...`` are composable by
construction and the value lands in the block ``(i_0 i_k)``. Each chain
carries a fiber tensor of shape ``(d,)*(k+1)`` in the layout of
:mod:`dglastacks.hochschild`.

Examples
--------

>>> from dglastacks.coefficients import ArtinRing
>>> from dglastacks.descent import DescentDatum, one_point
>>> d = DescentDatum.trivial(one_point(), ArtinRing(2))
>>> A = matrix_algebra(d, 1)
>>> A.stalk(((0, 0), 0)).to_algebra().dim
4
"""

from itertools import product

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.dgla import Dgla, zeros
from dglastacks.errors import (
    BaseMismatch, CompatibilityError, DegreeError, InvalidDatum
)
from dglastacks.hochschild import (
    FinAlgebra, HochschildCochain, compose_at, diff_matrix, normalized_mask,
    zero_tensor
)
from dglastacks.linalg import ExactMatrix, as_sparse_vector


class BlockAlgebra:
    """
    Stalk of ``Mat(A)^p`` at a point of a sheet of nerve level ``p``.

    The block ``(a, b)`` is spanned by ``E_ab (x) J``; products of
    generators are ``E_ab E_bc = c(J_a, J_b, J_c) E_ac`` with the effective
    cocycle ``c`` of the datum at ``point``.

    Parameters
    ----------
    datum : DescentDatum
    charts : tuple of int
        Chart index of every block position.
    point : str
        A point of ``U_charts``.
    """

    def __init__(self, datum, charts, point):
        self.datum = datum
        self.charts = tuple(charts)
        self.point = point
        self.p = len(self.charts) - 1
        self.fiber = datum.fiber
        self._pairing = {}

    def __eq__(self, other):
        return (
            isinstance(other, BlockAlgebra)
            and other.datum is self.datum
            and other.charts == self.charts
            and other.point == self.point
        )

    def __hash__(self):
        return hash((self.charts, self.point))

    def __repr__(self):
        return f"BlockAlgebra({self.charts}, {self.point})"

    @property
    def size(self):
        """Number of block positions ``p + 1``."""
        return self.p + 1

    def pairing(self, a, b, c):
        """Constant of ``E_ab E_bc = pairing(a, b, c) E_ac``."""
        key = (a, b, c)
        if key not in self._pairing:
            value = self.datum.cocycle(
                self.point, self.charts[a], self.charts[b], self.charts[c]
            )
            self._pairing[key] = value.constant
        return self._pairing[key]

    def unit_coefficient(self, a):
        """Coefficient of ``1_aa`` on ``E_aa``."""
        return 1 / self.pairing(a, a, a)

    def restrict(self, f):
        """``f^# Mat^q``: the blocks ``(f(a), f(b))``."""
        if f.target != self.p:
            raise DegreeError(f"{f} does not end at [{self.p}]")
        return BlockAlgebra(
            self.datum, [self.charts[f(a)] for a in range(f.source + 1)],
            self.point
        )

    def basis_index(self, a, b, i):
        """Flat index of ``E_ab (x) e_i``."""
        return (a * self.size + b) * self.fiber.dim + i

    def to_algebra(self):
        """The stalk as a :class:`FinAlgebra` (unit not on ``e_0``)."""
        n, d = self.size, self.fiber.dim
        dim = n * n * d
        mult = np.full((dim,) * 3, QQ(0), dtype=object)
        J = self.fiber.mult
        for a, b, c in product(range(n), repeat=3):
            scale = self.pairing(a, b, c)
            for i, j, k in product(range(d), repeat=3):
                if J[i, j, k]:
                    mult[self.basis_index(a, b, i),
                         self.basis_index(b, c, j),
                         self.basis_index(a, c, k)] = scale * J[i, j, k]
        unit = [QQ(0)] * dim
        for a in range(n):
            for i in range(d):
                unit[self.basis_index(a, a, i)] = \
                    self.unit_coefficient(a) * self.fiber.unit[i]
        return FinAlgebra(mult, unit, name=f"Mat^{self.p}")

    def check(self):
        """
        Associativity and unit laws of the stalk.

        Returns a list of failed law names.
        """
        algebra = self.to_algebra()
        failures = []
        if not algebra.is_associative()[0]:
            failures.append("associativity")
        for i in range(algebra.dim):
            e = zeros(algebra.dim)
            e[i] = QQ(1)
            if any(algebra.multiply(algebra.unit, e) != e) \
                    or any(algebra.multiply(e, algebra.unit) != e):
                failures.append("unit")
                break
        return failures


class MatrixAlgebraP:
    """
    The sheaf of algebras ``Mat(A)^p`` on nerve level ``p``.

    Values are locally constant, so the sheaf is given by one
    :class:`BlockAlgebra` per sheet ``(J, k)``.
    """

    def __init__(self, datum, p):
        self.datum = datum
        self.p = p
        self.cover = datum.cover

    def sheets(self):
        """Sheets of nerve level ``p``."""
        return self.cover.level_sheets(self.p)

    def stalk(self, sheet):
        """Block algebra on a sheet ``(J, k)``."""
        J, k = sheet
        return BlockAlgebra(
            self.datum, J, self.cover.representative(J, k)
        )

    def stalk_at(self, point):
        """Block algebra at a :class:`NervePoint` of level ``p``."""
        return BlockAlgebra(self.datum, point.indices, point.point)

    def check(self):
        """Map of failing sheets to failed laws."""
        out = {}
        for sheet in self.sheets():
            failures = self.stalk(sheet).check()
            if failures:
                out[sheet] = failures
        return out


def matrix_algebra(d, p):
    """
    Assemble ``Mat(A)^p`` and assert its algebra laws on every sheet.

    >>> from dglastacks.coefficients import ArtinRing
    >>> from dglastacks.descent import DescentDatum, pseudocircle
    >>> A = matrix_algebra(DescentDatum.trivial(pseudocircle(), ArtinRing(2)),
    ...                    0)
    >>> len(A.sheets())
    2
    """
    algebra = MatrixAlgebraP(d, p)
    failures = algebra.check()
    if failures:
        sheet, laws = sorted(failures.items())[0]
        raise InvalidDatum(f"Mat^{p} fails {laws[0]} on sheet {sheet}")
    return algebra


def comb_restrict_algebra(f, A):
    """
    Combinatorial restriction ``f^# Mat^q`` of a stalk along ``f: [p]->[q]``.

    Returns the restricted algebra and the canonical isomorphism from the
    stalk of the pulled back ``Mat^p`` (same point, charts ``J o f``);
    both have the basis ``E_ab (x) e_i``, so the isomorphism is the
    identity matrix.
    """
    restricted = A.restrict(f)
    dim = restricted.size ** 2 * restricted.fiber.dim
    identity = ExactMatrix({i: {i: QQ(1)} for i in range(dim)}, (dim, dim))
    return restricted, identity


# Local cochains
# ==============

def chains(size, arity):
    """All chains ``(i_0, ..., i_arity)``, lexicographic."""
    return list(product(range(size), repeat=arity + 1))


def chain_of_blocks(blocks):
    """
    Chain of a list of composable blocks ``[(i_1, j_1), ..., (i_k, j_k)]``.

    Raises
    ------
    CompatibilityError
        If some ``j_l != i_(l+1)``.
    """
    blocks = [tuple(b) for b in blocks]
    for (_, j), (i, _) in zip(blocks, blocks[1:]):
        if j != i:
            raise CompatibilityError(f"Blocks {blocks} are not composable")
    return (blocks[0][0],) + tuple(b[1] for b in blocks)


def filtration_degree(chain):
    """``s(I) = |Im I| - 1``."""
    return len(set(chain)) - 1


class LocalCochain:
    """
    Local Hochschild cochain on a :class:`BlockAlgebra`.

    Parameters
    ----------
    base : BlockAlgebra
    arity : int
    components : dict
        Chain to fiber tensor; missing chains are zero.
    """

    def __init__(self, base, arity, components=None):
        self.base = base
        self.arity = int(arity)
        shape = (base.fiber.dim,) * (self.arity + 1)
        self.components = {}
        for chain, tensor in (components or {}).items():
            chain = tuple(chain)
            assert len(chain) == self.arity + 1, "Chain length must be k+1"
            assert all(0 <= i < base.size for i in chain), \
                "Chain leaves the block range"
            tensor = np.asarray(tensor, dtype=object)
            assert tensor.shape == shape, "Tensor shape must be d^(k+1)"
            if any(tensor.flat):
                self.components[chain] = tensor

    @property
    def degree(self):
        """DGLA degree ``arity - 1``."""
        return self.arity - 1

    def component(self, chain):
        """Tensor of a chain (zero if absent)."""
        chain = tuple(chain)
        if chain in self.components:
            return self.components[chain]
        return zero_tensor(self.base.fiber.dim, self.arity)

    def block_component(self, blocks):
        """Tensor of ``D`` restricted to the given blocks."""
        if len(blocks) != self.arity:
            raise DegreeError(
                f"Expected {self.arity} blocks, got {len(blocks)}"
            )
        return self.component(chain_of_blocks(blocks))

    def _check(self, other):
        if other.base != self.base:
            raise BaseMismatch("Local cochains on different blocks")
        if other.arity != self.arity:
            raise DegreeError("Local cochains of different arity")

    def __add__(self, other):
        self._check(other)
        out = dict(self.components)
        for chain, tensor in other.components.items():
            out[chain] = out[chain] + tensor if chain in out else tensor
        return LocalCochain(self.base, self.arity, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply by a rational."""
        c = QQ(c) if isinstance(c, int) else c
        return LocalCochain(self.base, self.arity, {
            chain: c * tensor for chain, tensor in self.components.items()
        })

    def __eq__(self, other):
        if not isinstance(other, LocalCochain) or other.arity != self.arity \
                or other.base != self.base:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.components))))

    def is_zero(self):
        """Whether every component vanishes."""
        return not self.components

    @classmethod
    def from_vector(cls, base, arity, v):
        """Inverse of :meth:`to_vector`."""
        block = base.fiber.dim ** (arity + 1)
        shape = (base.fiber.dim,) * (arity + 1)
        components = {}
        for r, chain in enumerate(chains(base.size, arity)):
            piece = v[r * block:(r + 1) * block]
            if any(piece):
                components[chain] = np.array(piece, dtype=object) \
                    .reshape(shape)
        return cls(base, arity, components)

    def to_vector(self):
        """Coefficients ordered by chain, then by fiber tensor entry."""
        block = self.base.fiber.dim ** (self.arity + 1)
        out = zeros(self.base.size ** (self.arity + 1) * block)
        for r, chain in enumerate(chains(self.base.size, self.arity)):
            if chain in self.components:
                out[r * block:(r + 1) * block] = \
                    self.components[chain].ravel()
        return out

    def to_full_tensor(self):
        """The cochain as a dense tensor on ``base.to_algebra()``."""
        base = self.base
        dim = base.size ** 2 * base.fiber.dim
        out = np.full((dim,) * (self.arity + 1), QQ(0), dtype=object)
        for chain, tensor in self.components.items():
            for index in product(range(base.fiber.dim),
                                 repeat=self.arity + 1):
                value = tensor[index]
                if not value:
                    continue
                slots = [
                    base.basis_index(chain[s], chain[s + 1], index[s])
                    for s in range(self.arity)
                ]
                slots.append(
                    base.basis_index(chain[0], chain[-1], index[-1])
                )
                out[tuple(slots)] = value
        return out

    def to_json(self):
        """Chains as ``"i0,i1,..."`` keys."""
        fiber = self.base.fiber
        return {
            ",".join(map(str, chain)):
                HochschildCochain(fiber, tensor).to_json()
            for chain, tensor in sorted(self.components.items())
        }


def multiplication(base):
    """The product of the block algebra as a local 2-cochain."""
    mult = base.fiber.mult
    return LocalCochain(base, 2, {
        chain: base.pairing(*chain) * mult
        for chain in chains(base.size, 2)
    })


def local_compose(D1, D2):
    """
    ``sum_i (-1)^(i (n2-1)) D1 o_i D2`` componentwise.

    Slot ``i`` of a chain ``K1`` accepts the value of ``K2`` iff
    ``K1[i] = K2[0]`` and ``K1[i+1] = K2[-1]``; the composite chain is
    ``K1[:i] + K2 + K1[i+2:]``.
    """
    n1, n2 = D1.arity, D2.arity
    out = {}
    if n1 == 0:
        return out
    by_ends = {}
    for K2, T2 in D2.components.items():
        by_ends.setdefault((K2[0], K2[-1]), []).append((K2, T2))
    for K1, T1 in D1.components.items():
        for i in range(n1):
            for K2, T2 in by_ends.get((K1[i], K1[i + 1]), ()):
                chain = K1[:i] + K2 + K1[i + 2:]
                term = compose_at(T1, i, T2)
                if (i * (n2 - 1)) % 2:
                    term = -term
                out[chain] = out[chain] + term if chain in out else term
    return out


def local_bracket(D1, D2):
    """
    Gerstenhaber bracket ``D1 o D2 - (-1)^((n1-1)(n2-1)) D2 o D1``.

    The result is again local.
    """
    if D1.base != D2.base:
        raise BaseMismatch("Local cochains on different blocks")
    n1, n2 = D1.arity, D2.arity
    if n1 + n2 == 0:
        raise DegreeError("The bracket of two 0-cochains has arity -1")
    first, second = local_compose(D1, D2), local_compose(D2, D1)
    odd = ((n1 - 1) * (n2 - 1)) % 2
    out = dict(first)
    for chain, tensor in second.items():
        term = tensor if odd else -tensor
        out[chain] = out[chain] + term if chain in out else term
    return LocalCochain(D1.base, n1 + n2 - 1, out)


def local_diff(D, m=None):
    """Hochschild differential ``[m, D]`` of the block algebra."""
    if m is None:
        m = multiplication(D.base)
    return local_bracket(m, D)


class LocalCochainDgla(Dgla):
    """
    The DGLA ``C(Mat)^loc[1]`` of one block algebra, truncated.

    Degree ``k`` holds local cochains of arity ``k + 1`` for
    ``-1 <= k <= arity_cap - 1``; vectors follow
    :meth:`LocalCochain.to_vector`.
    """

    def __init__(self, base, arity_cap=3):
        self.base = base
        self.arity_cap = arity_cap
        self.name = f"local_{base.charts}"
        self._m = multiplication(base)

    @property
    def degrees(self):
        return list(range(-1, self.arity_cap))

    def in_range(self, deg):
        return -1 <= deg <= self.arity_cap - 1

    def dimension(self, deg):
        if not self.in_range(deg):
            return 0
        return (self.base.size * self.base.fiber.dim) ** (deg + 2)

    def cochain(self, deg, u):
        """Local cochain of a coefficient vector."""
        return LocalCochain.from_vector(self.base, deg + 1, u)

    def diff(self, deg, u):
        if not self.in_range(deg + 1):
            return zeros(0)
        return local_diff(self.cochain(deg, u), self._m).to_vector()

    def bracket(self, da, u, db, v):
        if not self.in_range(da + db):
            return zeros(0)
        return local_bracket(
            self.cochain(da, u), self.cochain(db, v)
        ).to_vector()


def local_cochain_ops(base, arity_cap=3):
    """
    DGLA interface of the local cochains of a block algebra.

    >>> from dglastacks.coefficients import ArtinRing
    >>> from dglastacks.descent import DescentDatum, one_point
    >>> d = DescentDatum.trivial(one_point(), ArtinRing(2))
    >>> g = local_cochain_ops(matrix_algebra(d, 1).stalk(((0, 0), 0)))
    >>> g.dimension(-1)
    2
    """
    return LocalCochainDgla(base, arity_cap)


def comb_restrict_cochain(f, D):
    """
    Combinatorial restriction ``(f^# D)^I = D^(f o I)`` along ``f: [p]->[q]``.
    """
    base = D.base.restrict(f)
    out = {}
    for chain in chains(base.size, D.arity):
        image = tuple(f(i) for i in chain)
        if image in D.components:
            out[chain] = D.components[image]
    return LocalCochain(base, D.arity, out)


def filtration_project(D, s):
    """
    Split ``D`` into its ``F^s`` part and its ``Gr^s`` part.

    ``F^s`` keeps the chains with ``s(I) >= s``, ``Gr^s`` those with
    ``s(I) = s``.
    """
    if not 0 <= s <= D.arity:
        raise DegreeError(f"Filtration index {s} outside [0, {D.arity}]")
    upper = {
        chain: tensor for chain, tensor in D.components.items()
        if filtration_degree(chain) >= s
    }
    graded = {
        chain: tensor for chain, tensor in upper.items()
        if filtration_degree(chain) == s
    }
    return (LocalCochain(D.base, D.arity, upper),
            LocalCochain(D.base, D.arity, graded))


def cotrace(D, base):
    """
    Cotrace ``cotr(D)(a_1 (x) j_1, ...) = a_1 ... a_n D(j_1, ..., j_n)``.

    The component at a chain ``I`` is ``D`` times the constant of the
    product ``E_(I0 I1) ... E_(I(n-1) In)``; for ``n = 0`` it is the unit
    coefficient of ``E_(I0 I0)``.
    """
    fiber = base.fiber
    if D.algebra.dim != fiber.dim or any(
            a != b for a, b in zip(D.algebra.mult.flat, fiber.mult.flat)):
        raise BaseMismatch("Cochain and block algebra have different fibers")
    if not fiber.is_commutative():
        raise InvalidDatum("The cotrace needs a commutative fiber")
    if not D.is_normalized():
        raise InvalidDatum("The cotrace needs a normalized cochain")
    n = D.arity
    out = {}
    for chain in chains(base.size, n):
        if n == 0:
            scale = base.unit_coefficient(chain[0])
        else:
            scale = QQ(1)
            for k in range(1, n):
                scale = scale * base.pairing(chain[0], chain[k],
                                             chain[k + 1])
        out[chain] = scale * D.tensor
    return LocalCochain(base, n, out)


def local_cohomology(base, n_max):
    """
    Dimensions of ``H^n`` of the local cochain complex for ``n <= n_max``.

    Degrees are Hochschild arities.
    """
    g = LocalCochainDgla(base, arity_cap=n_max + 1)
    dims = [g.dimension(n - 1) for n in range(n_max + 2)]
    ranks = [g.diff_matrix(n - 1).rank() for n in range(n_max + 1)]
    out = []
    for n in range(n_max + 1):
        incoming = ranks[n - 1] if n > 0 else 0
        out.append(dims[n] - ranks[n] - incoming)
    return out


def cotrace_image_dimension(base, n):
    """
    Dimension of the image of ``HH^n`` of the fiber in local ``H^n``.

    Cotraces of the normalized ``n``-cocycles of the fiber are reduced
    modulo the local coboundaries; the cotrace is injective on ``HH^n``
    exactly when the result equals ``dim HH^n``.
    """
    fiber = base.fiber
    dim = fiber.dim
    positions = np.flatnonzero(normalized_mask(dim, n).ravel())
    images = []
    for cocycle in diff_matrix(fiber, n, normalized=True).nullspace():
        tensor = np.full(dim ** (n + 1), QQ(0), dtype=object)
        for i, value in cocycle.items():
            tensor[positions[i]] = value
        D = HochschildCochain(fiber, tensor.reshape((dim,) * (n + 1)))
        images.append(as_sparse_vector(cotrace(D, base).to_vector()))
    g = LocalCochainDgla(base, arity_cap=max(n, 1))
    nrows = g.dimension(n - 1)
    if n == 0:
        boundaries = []
    else:
        delta = g.diff_matrix(n - 2).transpose()
        boundaries = [delta.rows.get(j, {}) for j in range(delta.shape[0])]
    combined = ExactMatrix.from_columns(boundaries + images, nrows)
    reduced = ExactMatrix.from_columns(boundaries, nrows)
    return combined.rank() - reduced.rank()

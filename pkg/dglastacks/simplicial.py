# pylint: disable=invalid-name

"""
Module for the simplex category, cosimplicial vector spaces and the hat
construction.

Contains monotone maps with their face/degeneracy generators and epi-mono
factorizations, simplices ``lambda: [n] -> Delta`` (:class:`DeltaSimplex`),
finite cosimplicial vector spaces (:class:`CosimplicialVS`), lazily evaluated
cochains of the hat construction (:class:`HatCochain`) and the explicit
comparison data ``upsilon``, ``iota``, ``pi`` and ``homotopy_h`` between a
cosimplicial space and its hat construction.

The homotopy identity holds with the global sign :data:`HOMOTOPY_SIGN`:
``iota(pi(f)) - f = HOMOTOPY_SIGN * (d h f + h d f)``.

Examples
--------

>>> d0 = MonotoneMap.face(1, 0)
>>> d0.values
(1,)
>>> s0 = MonotoneMap.degeneracy(1, 0)
>>> s0.compose(MonotoneMap.face(2, 0)) == MonotoneMap.identity(1)
True
"""

from functools import lru_cache
from itertools import combinations_with_replacement, product

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.coefficients import format_rational, to_rational
from dglastacks.errors import CapExceeded, DglaStacksError, Violation
from dglastacks.linalg import ExactMatrix, as_sparse_vector, dense_vector

HOMOTOPY_SIGN = -1
"""Sign ``s`` of ``iota pi - Id = s (d h + h d)``."""


class MonotoneMap:
    """
    Monotone map ``[m] -> [n]``.

    Parameters
    ----------
    source : int
        ``m``.
    target : int
        ``n``.
    values : sequence of int
        Nondecreasing images of ``0, ..., m``.
    """

    __slots__ = ("source", "target", "values")

    def __init__(self, source, target, values):
        values = tuple(int(v) for v in values)
        if len(values) != source + 1:
            raise ValueError(f"{values} does not have {source + 1} entries")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(f"{values} is not monotone")
        if values and not 0 <= values[0] <= values[-1] <= target:
            raise ValueError(f"{values} leaves [{target}]")
        self.source = int(source)
        self.target = int(target)
        self.values = values

    @classmethod
    def identity(cls, n):
        """``id: [n] -> [n]``."""
        return cls(n, n, range(n + 1))

    @classmethod
    def face(cls, n, i):
        """Face ``d_i: [n-1] -> [n]`` skipping ``i``."""
        return cls(n - 1, n, [k if k < i else k + 1 for k in range(n)])

    @classmethod
    def degeneracy(cls, n, i):
        """Degeneracy ``s_i: [n+1] -> [n]`` hitting ``i`` twice."""
        return cls(n + 1, n, [k if k <= i else k - 1 for k in range(n + 2)])

    @classmethod
    def constant(cls, m, n, value):
        """Constant map ``[m] -> [n]``."""
        return cls(m, n, [value] * (m + 1))

    def __call__(self, k):
        return self.values[k]

    def __eq__(self, other):
        return (
            isinstance(other, MonotoneMap)
            and other.target == self.target
            and other.values == self.values
        )

    def __hash__(self):
        return hash((self.target, self.values))

    def __repr__(self):
        return f"MonotoneMap({self.source}, {self.target}, {self.values})"

    def compose(self, other):
        """``self o other``."""
        if other.target != self.source:
            raise ValueError("Maps are not composable")
        return MonotoneMap(
            other.source, self.target, [self.values[v] for v in other.values]
        )

    def is_injective(self):
        """Whether the map is injective."""
        return len(set(self.values)) == len(self.values)

    def is_surjective(self):
        """Whether the map is surjective."""
        return set(self.values) == set(range(self.target + 1))

    def image(self):
        """Sorted image."""
        return sorted(set(self.values))

    def generators(self):
        """
        Faces and degeneracies whose composite is the map.

        Returned in application order: first all degeneracies, then all
        faces.

        >>> f = MonotoneMap(2, 2, [0, 0, 2])
        >>> [(g.source, g.target, g.values) for g in f.generators()]
        [(2, 1, (0, 0, 1)), (1, 2, (0, 2))]
        """
        out = []
        values = list(self.values)
        # surjective part: delete repeated positions
        while any(a == b for a, b in zip(values, values[1:])):
            j = next(k for k in range(len(values) - 1)
                     if values[k] == values[k + 1])
            out.append(MonotoneMap.degeneracy(len(values) - 2, j))
            del values[j + 1]
        # injective part: split off the largest missing value first
        faces = []
        target = self.target
        while len(values) < target + 1:
            i = max(v for v in range(target + 1) if v not in values)
            faces.append(MonotoneMap.face(target, i))
            values = [v if v < i else v - 1 for v in values]
            target -= 1
        out.extend(reversed(faces))
        return out


def all_monotone_maps(m, n):
    """All monotone maps ``[m] -> [n]`` in lexicographic order."""
    return [
        MonotoneMap(m, n, values)
        for values in combinations_with_replacement(range(n + 1), m + 1)
    ]


class DeltaSimplex:
    """
    A functor ``lambda: [n] -> Delta``.

    Parameters
    ----------
    objects : sequence of int
        ``lambda(0), ..., lambda(n)``.
    arrows : sequence of MonotoneMap
        ``lambda(i, i+1): [lambda(i)] -> [lambda(i+1)]``.
    """

    __slots__ = ("objects", "arrows", "_key")

    def __init__(self, objects, arrows):
        objects = tuple(int(o) for o in objects)
        arrows = tuple(arrows)
        if len(arrows) != len(objects) - 1:
            raise ValueError("Need one arrow per consecutive pair")
        for i, arrow in enumerate(arrows):
            if arrow.source != objects[i] or arrow.target != objects[i + 1]:
                raise ValueError(f"Arrow {i} does not match the objects")
        self.objects = objects
        self.arrows = arrows
        self._key = (objects, tuple(a.values for a in arrows))

    @classmethod
    def point(cls, q):
        """The 0-simplex at ``[q]``."""
        return cls([q], [])

    @classmethod
    def arrow_simplex(cls, f):
        """The 1-simplex given by a single arrow."""
        return cls([f.source, f.target], [f])

    @property
    def n(self):
        """Dimension."""
        return len(self.objects) - 1

    def __eq__(self, other):
        return isinstance(other, DeltaSimplex) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"DeltaSimplex({self.objects}, {self._key[1]})"

    def to_json(self):
        """Objects and arrow values."""
        return {"objects": list(self.objects),
                "arrows": [list(a.values) for a in self.arrows]}

    def arrow(self, i, k):
        """Composite ``lambda(i, k)`` for ``i <= k``."""
        result = MonotoneMap.identity(self.objects[i])
        for j in range(i, k):
            result = self.arrows[j].compose(result)
        return result

    def restrict(self, j, l):
        """Truncation ``lambda|[j l]``."""
        return DeltaSimplex(self.objects[j:l + 1], self.arrows[j:l])

    def precompose(self, phi):
        """``lambda o phi`` for ``phi: [m] -> [n]``."""
        if phi.target != self.n:
            raise ValueError("phi does not land in [n]")
        objects = [self.objects[v] for v in phi.values]
        arrows = [
            self.arrow(a, b) for a, b in zip(phi.values, phi.values[1:])
        ]
        return DeltaSimplex(objects, arrows)


def upsilon(lam):
    """
    The map ``[n] -> [lambda(n)]``, ``k |-> lambda(k n)(top of [lambda(k)])``.

    >>> lam = DeltaSimplex([0, 1, 2],
    ...     [MonotoneMap.face(1, 0), MonotoneMap.face(2, 1)])
    >>> upsilon(lam).values
    (2, 2, 2)
    """
    n = lam.n
    return MonotoneMap(
        n, lam.objects[n],
        [lam.arrow(k, n)(lam.objects[k]) for k in range(n + 1)]
    )


def concat(lam1, lam2):
    """Concatenation ``lambda1 * lambda2``, ``lambda1(n1) = lambda2(0)``."""
    if lam1.objects[-1] != lam2.objects[0]:
        raise ValueError("Endpoints of the simplices differ")
    return DeltaSimplex(
        lam1.objects + lam2.objects[1:], lam1.arrows + lam2.arrows
    )


def concat_all(simplices):
    """Left fold of :func:`concat`."""
    result = simplices[0]
    for lam in simplices[1:]:
        result = concat(result, lam)
    return result


def face_simplex(k, i):
    """The 1-simplex ``d_i: [k] -> [k+1]``."""
    return DeltaSimplex.arrow_simplex(MonotoneMap.face(k + 1, i))


def simplices(n, d_cap):
    """All ``n``-simplices with objects at most ``d_cap``."""
    for objects in product(range(d_cap + 1), repeat=n + 1):
        choices = [
            all_monotone_maps(a, b) for a, b in zip(objects, objects[1:])
        ]
        for arrows in product(*choices):
            yield DeltaSimplex(objects, arrows)


@lru_cache(maxsize=None)
def face_prefixes(j):
    """
    Pairs ``(sign exponent, d^0_{i_0} * ... * d^{j-1}_{i_{j-1}})``.

    The empty prefix (``j = 0``) is ``None`` with exponent ``0``.
    """
    if j == 0:
        return [(0, None)]
    out = []
    for indices in product(*[range(k + 2) for k in range(j)]):
        lam = concat_all([face_simplex(k, i) for k, i in enumerate(indices)])
        out.append((sum(indices), lam))
    return out


class CosimplicialVS:
    """
    Finite-dimensional cosimplicial vector space, truncated at ``top``.

    Parameters
    ----------
    dims : list of int
        ``dim V^0, ..., dim V^top``.
    cofaces : dict
        ``cofaces[(n, i)]``: matrix of ``V(d_i): V^(n-1) -> V^n``.
    codegeneracies : dict
        ``codegeneracies[(n, i)]``: matrix of ``V(s_i): V^(n+1) -> V^n``.
    """

    def __init__(self, dims, cofaces, codegeneracies, name="cosimplicial"):
        self.dims = [int(d) for d in dims]
        self.top = len(self.dims) - 1
        self.name = name
        self.cofaces = {
            key: np.asarray(m, dtype=object).reshape(
                self.dims[key[0]], self.dims[key[0] - 1])
            for key, m in cofaces.items()
        }
        self.codegeneracies = {
            key: np.asarray(m, dtype=object).reshape(
                self.dims[key[0]], self.dims[key[0] + 1])
            for key, m in codegeneracies.items()
        }
        self._structure = {}

    @classmethod
    def from_json(cls, data):
        """
        Build from ``{"dims": [...], "cofaces": {"n,i": rows},
        "codegeneracies": {"n,i": rows}}``.
        """
        def parse(block):
            out = {}
            for key, rows in block.items():
                n, i = (int(x) for x in key.split(","))
                out[(n, i)] = np.array(
                    [[to_rational(v) for v in row] for row in rows],
                    dtype=object
                )
            return out
        return cls(
            data["dims"], parse(data.get("cofaces", {})),
            parse(data.get("codegeneracies", {})),
            name=data.get("name", "cosimplicial")
        )

    def to_json(self):
        """Inverse of :meth:`from_json`."""
        def fmt(block):
            return {
                f"{n},{i}": [[format_rational(v) for v in row] for row in m]
                for (n, i), m in sorted(block.items())
            }
        return {"dims": self.dims, "cofaces": fmt(self.cofaces),
                "codegeneracies": fmt(self.codegeneracies),
                "name": self.name}

    @classmethod
    def constant(cls, dim, top):
        """Constant cosimplicial space with all structure maps identities."""
        identity = np.identity(dim, dtype=object) * QQ(1)
        cofaces = {(n, i): identity for n in range(1, top + 1)
                   for i in range(n + 1)}
        codegeneracies = {(n, i): identity for n in range(top)
                          for i in range(n + 1)}
        return cls([dim] * (top + 1), cofaces, codegeneracies, "constant")

    @classmethod
    def from_simplicial_coefficients(cls, levels, face, degeneracy, fiber,
                                     transport, top, name):
        """
        Cochains on a finite simplicial object with local coefficients.

        ``levels(n)`` lists the ``n``-simplices, ``face(n, i, x)`` and
        ``degeneracy(n, i, x)`` act on them, ``fiber(n, x)`` is the
        dimension of the coefficient space at ``x`` and
        ``transport(n, x)`` the matrix from the coefficients at the last
        face ``face(n, n, x)`` to those at ``x``. Faces ``i < n`` act by
        identity on coefficients.
        """
        blocks = []
        dims = []
        for n in range(top + 1):
            offsets, total = {}, 0
            for x in levels(n):
                offsets[x] = total
                total += fiber(n, x)
            blocks.append(offsets)
            dims.append(total)
        cofaces, codegeneracies = {}, {}
        for n in range(1, top + 1):
            for i in range(n + 1):
                M = np.full((dims[n], dims[n - 1]), QQ(0), dtype=object)
                for x, row in blocks[n].items():
                    y = face(n, i, x)
                    col = blocks[n - 1][y]
                    block = transport(n, x) if i == n else np.identity(
                        fiber(n, x), dtype=object) * QQ(1)
                    M[row:row + fiber(n, x), col:col + fiber(n - 1, y)] = \
                        block
                cofaces[(n, i)] = M
        for n in range(top):
            for i in range(n + 1):
                M = np.full((dims[n], dims[n + 1]), QQ(0), dtype=object)
                for x, row in blocks[n].items():
                    y = degeneracy(n, i, x)
                    col = blocks[n + 1][y]
                    M[row:row + fiber(n, x), col:col + fiber(n, x)] = \
                        np.identity(fiber(n, x), dtype=object) * QQ(1)
                codegeneracies[(n, i)] = M
        return cls(dims, cofaces, codegeneracies, name)

    @classmethod
    def chain_diagram(cls, maps, top, name="chain_diagram"):
        """
        Cosimplicial replacement of a diagram ``F(0) -> ... -> F(P)``.

        ``V^n`` is the sum of ``F(p_n)`` over chains ``p_0 <= ... <= p_n``;
        ``maps[p]`` is the matrix of ``F(p) -> F(p+1)``.
        """
        P = len(maps)
        fibers = [maps[0].shape[1]] + [m.shape[0] for m in maps] \
            if maps else None
        if fibers is None:
            raise DglaStacksError("Diagram needs at least one map")

        def levels(n):
            return list(combinations_with_replacement(range(P + 1), n + 1))

        def transfer(a, b):
            M = np.identity(fibers[a], dtype=object) * QQ(1)
            for p in range(a, b):
                M = maps[p].dot(M)
            return M

        return cls.from_simplicial_coefficients(
            levels,
            lambda n, i, x: x[:i] + x[i + 1:],
            lambda n, i, x: x[:i + 1] + x[i:],
            lambda n, x: fibers[x[-1]],
            lambda n, x: transfer(x[-2], x[-1]),
            top, name
        )

    @classmethod
    def random(cls, rng, top, max_fiber=2, max_length=2):
        """Random chain diagram replacement with small integer maps."""
        length = int(rng.integers(1, max_length + 1))
        fibers = [int(rng.integers(1, max_fiber + 1))
                  for _ in range(length + 1)]
        maps = [
            np.array([[QQ(int(v)) for v in row] for row in
                      rng.integers(-2, 3, (fibers[p + 1], fibers[p]))],
                     dtype=object)
            for p in range(length)
        ]
        return cls.chain_diagram(maps, top, name="random_chain_diagram")

    def dimension(self, n):
        """``dim V^n``."""
        self._check_cap(n)
        return self.dims[n]

    def _check_cap(self, n):
        if n > self.top:
            raise CapExceeded("n_cap", n, self.top)

    def generator_matrix(self, g):
        """Matrix of a face or degeneracy."""
        if g.target == g.source + 1:
            i = next(k for k in range(g.target + 1) if k not in g.values)
            return self.cofaces[(g.target, i)]
        i = next(k for k in range(g.source) if g.values[k] == g.values[k + 1])
        return self.codegeneracies[(g.target, i)]

    def structure(self, f):
        """Matrix ``V(f)``, synthesized from generators and cached."""
        self._check_cap(max(f.source, f.target))
        if f not in self._structure:
            M = np.identity(self.dims[f.source], dtype=object) * QQ(1)
            for g in f.generators():
                M = self.generator_matrix(g).dot(M)
            self._structure[f] = M
        return self._structure[f]

    def apply(self, f, v):
        """``V(f)(v)``."""
        return self.structure(f).dot(v)

    def validate(self):
        """Report violated cosimplicial identities on generators."""
        violations = []

        def check(name, lhs, rhs, witness):
            if any(a != b for a, b in zip(lhs.flat, rhs.flat)):
                violations.append(Violation(name, witness))

        d, s = self.cofaces, self.codegeneracies
        for n in range(2, self.top + 1):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    # d^j d^i = d^i d^(j-1) for i < j
                    check("coface_identity",
                          d[(n, j)].dot(d[(n - 1, i)]),
                          d[(n, i)].dot(d[(n - 1, j - 1)]),
                          {"n": n, "i": i, "j": j})
        for n in range(self.top):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    if n + 2 <= self.top:
                        check("codegeneracy_identity",
                              s[(n, j)].dot(s[(n + 1, i)]),
                              s[(n, i)].dot(s[(n + 1, j + 1)]),
                              {"n": n, "i": i, "j": j})
                identity = np.identity(self.dims[n], dtype=object) * QQ(1)
                for j in (i, i + 1):
                    check("unit_identity", s[(n, i)].dot(d[(n + 1, j)]),
                          identity, {"n": n, "i": i, "j": j})
        return violations

    # Cochain complex
    # ---------------

    def differential_matrix(self, n):
        """``d = sum (-1)^i V(d_i): V^n -> V^(n+1)``."""
        self._check_cap(n + 1)
        M = np.full((self.dims[n + 1], self.dims[n]), QQ(0), dtype=object)
        for i in range(n + 2):
            M = M + (-1) ** i * self.cofaces[(n + 1, i)]
        return M

    def degeneracy_matrix(self, n):
        """Stacked ``V(s_i): V^n -> V^(n-1)``."""
        if n == 0:
            return np.full((0, self.dims[0]), QQ(0), dtype=object)
        return np.vstack([self.codegeneracies[(n - 1, i)]
                          for i in range(n)])

    def cohomology(self, n_max):
        """Dimensions of ``H^0..H^n_max`` of the full cochain complex."""
        ranks = [ExactMatrix.from_dense(self.differential_matrix(n),
                                        ncols=self.dims[n]).rank()
                 for n in range(n_max + 1)]
        return [self.dims[n] - ranks[n] - (ranks[n - 1] if n else 0)
                for n in range(n_max + 1)]

    def normalized_basis(self, n):
        """Basis of the normalized subspace ``cap ker V(s_i)``."""
        S = self.degeneracy_matrix(n)
        if S.shape[0] == 0:
            return [dense_vector({i: QQ(1)}, self.dims[n])
                    for i in range(self.dims[n])]
        kernel = ExactMatrix.from_dense(S, ncols=self.dims[n]).nullspace()
        return [dense_vector(v, self.dims[n]) for v in kernel]

    def normalized_cohomology(self, n_max):
        """Dimensions of ``H^0..H^n_max`` of the normalized subcomplex."""
        bases = [self.normalized_basis(n) for n in range(n_max + 2)]
        ranks = []
        for n in range(n_max + 1):
            D = self.differential_matrix(n)
            images = [D.dot(v) for v in bases[n]]
            if not images:
                ranks.append(0)
                continue
            columns = [as_sparse_vector(v) for v in images]
            ranks.append(ExactMatrix.from_columns(
                columns, self.dims[n + 1]).rank())
        dims = [len(b) for b in bases]
        return [dims[n] - ranks[n] - (ranks[n - 1] if n else 0)
                for n in range(n_max + 1)]


def cochain_differential(V, n, v):
    """``(sum_i (-1)^i d_i) v`` for ``v`` in ``V^n``."""
    return V.differential_matrix(n).dot(v)


def normalized_part(V, n, v):
    """
    Membership in the normalized subcomplex and projection onto it.

    Returns ``(is_normalized, projection)``; the projection is
    ``v - S^T w`` with ``S S^T w = S v`` for the stacked degeneracies ``S``.
    """
    S = V.degeneracy_matrix(n)
    v = np.asarray(v, dtype=object)
    if S.shape[0] == 0:
        return True, v
    Sv = S.dot(v)
    if not any(Sv):
        return True, v
    SSt = ExactMatrix.from_dense(S.dot(S.T), ncols=S.shape[0])
    w = SSt.solve(as_sparse_vector(Sv))
    assert w is not None, "S S^T w = S v is always solvable"
    return False, v - S.T.dot(dense_vector(w, S.shape[0]))


class HatCochain:
    """
    Element of the hat construction: a memoized function of simplices.

    Parameters
    ----------
    parent : CosimplicialVS
    n : int
        Degree.
    evaluate : callable
        ``lambda -> vector in V^(lambda(n))``.
    d_cap : int, optional
        Bound on the objects of evaluated simplices.
    """

    def __init__(self, parent, n, evaluate, d_cap=None):
        self.parent = parent
        self.n = n
        self._evaluate = evaluate
        self.d_cap = parent.top if d_cap is None else d_cap
        self._memo = {}

    def __call__(self, lam):
        if lam.n != self.n:
            raise ValueError(f"Degree {self.n} cochain at a {lam.n}-simplex")
        if max(lam.objects) > self.parent.top:
            raise CapExceeded("d_cap", max(lam.objects), self.parent.top)
        value = self._memo.get(lam)
        if value is None:
            value = np.asarray(self._evaluate(lam), dtype=object)
            assert len(value) == self.parent.dims[lam.objects[-1]], \
                "Value must lie in V^(lambda(n))"
            self._memo.setdefault(lam, value)
        return value

    def __add__(self, other):
        return HatCochain(self.parent, self.n,
                          lambda lam: self(lam) + other(lam), self.d_cap)

    def __sub__(self, other):
        return HatCochain(self.parent, self.n,
                          lambda lam: self(lam) - other(lam), self.d_cap)

    def scale(self, c):
        """Multiply by a rational."""
        c = to_rational(c)
        return HatCochain(self.parent, self.n, lambda lam: c * self(lam),
                          self.d_cap)

    @classmethod
    def random(cls, parent, n, seed, bound=2):
        """Deterministic pseudo-random cochain seeded per simplex."""
        def evaluate(lam):
            key = [seed, n] + list(lam.objects) + [
                v for a in lam.arrows for v in a.values
            ]
            rng = np.random.default_rng(key)
            dim = parent.dims[lam.objects[-1]]
            return np.array(
                [QQ(int(v)) for v in rng.integers(-bound, bound + 1, dim)],
                dtype=object
            )
        return cls(parent, n, evaluate)


def hat_structure(phi, f):
    """
    Structure map ``phi_*`` for ``phi: [m] -> [n]``.

    ``(phi_* f)(lambda) = V(lambda(phi(m), n)) f(lambda o phi)``.
    """
    if phi.source != f.n:
        raise ValueError("phi must start at the degree of f")
    V = f.parent

    def evaluate(lam):
        h = lam.arrow(phi.values[-1], lam.n)
        return V.apply(h, f(lam.precompose(phi)))

    return HatCochain(V, phi.target, evaluate, f.d_cap)


def hat_differential(f):
    """``sum_i (-1)^i (d_i)_* f``."""
    n = f.n + 1
    faces = [hat_structure(MonotoneMap.face(n, i), f) for i in range(n + 1)]

    def evaluate(lam):
        total = faces[0](lam)
        for i in range(1, n + 1):
            total = total + (-1) ** i * faces[i](lam)
        return total

    return HatCochain(f.parent, n, evaluate, f.d_cap)


def iota(V, n, v):
    """``iota(v)(lambda) = V(upsilon(lambda)) v``."""
    v = np.asarray(v, dtype=object)
    return HatCochain(V, n, lambda lam: V.apply(upsilon(lam), v))


@lru_cache(maxsize=None)
def _pi_terms(n):
    if n == 0:
        return [(0, DeltaSimplex.point(0))]
    return face_prefixes(n)


def pi(f):
    """
    ``(-1)^(n(n+1)/2) sum (-1)^(i_0+...) f(d^0_(i_0) * ... * d^(n-1)_(i_n-1))``
    over all chains of faces.

    In degree zero this is the value at the point ``[0]``.
    """
    n = f.n
    total = np.full(f.parent.dimension(n), QQ(0), dtype=object)
    for exponent, lam in _pi_terms(n):
        total = total + (-1) ** exponent * f(lam)
    return (-1) ** (n * (n + 1) // 2) * total


def homotopy_h(f):
    """
    Homotopy ``h`` from degree ``n`` to ``n - 1``.

    ``hf(lambda) = sum_j eps_j sum (-1)^(i_0+...+i_(j-1))
    f(d^0_{i_0} * ... * d^(j-1)_{i_(j-1)} * upsilon(lambda|[0 j]) *
    lambda|[j n-1])`` with ``eps_j = (-1)^(j(j-1)/2)``. In degree zero
    ``h`` is the zero map and ``None`` is returned.
    """
    n = f.n
    V = f.parent
    if n == 0:
        return None

    def evaluate(lam):
        total = np.full(V.dims[lam.objects[-1]], QQ(0), dtype=object)
        for j in range(n):
            epsilon = (-1) ** (j * (j - 1) // 2)
            middle = DeltaSimplex.arrow_simplex(upsilon(lam.restrict(0, j)))
            tail = lam.restrict(j, n - 1)
            for exponent, prefix in face_prefixes(j):
                parts = [middle, tail] if prefix is None \
                    else [prefix, middle, tail]
                total = total + epsilon * (-1) ** exponent * f(
                    concat_all(parts)
                )
        return total

    return HatCochain(V, n - 1, evaluate, f.d_cap)


def homotopy_defect(f, lam):
    """
    ``(iota pi f - f)(lambda) - s (d h f + h d f)(lambda)``, zero when the
    homotopy identity holds at ``lambda``.
    """
    V = f.parent
    lhs = iota(V, f.n, pi(f))(lam) - f(lam)
    rhs = homotopy_h(hat_differential(f))(lam)
    hf = homotopy_h(f)
    if hf is not None:
        rhs = rhs + hat_differential(hf)(lam)
    return lhs - HOMOTOPY_SIGN * rhs

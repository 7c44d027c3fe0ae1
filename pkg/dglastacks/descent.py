# pylint: disable=invalid-name

"""
Module for finite spaces, covers, Cech complexes and descent data.

Contains finite posets with their Alexandrov topology (:class:`FiniteSpace`;
opens are down-sets), finite covers (:class:`Cover`) with their nerves and
sheets (connected components of the intersections ``U_J``), sheaves given
by stalks and restrictions (:class:`SheafData`), Cech cohomology, descent
data of twisted forms (:class:`DescentDatum`) and the class of their
cocycle in ``H^2(U; O^x)``.

Examples
--------

>>> cover = pseudocircle()
>>> cech_cohomology(cover, SheafData.constant(cover.space), 1)
[1, 1]
>>> [len(build_nerve(cover, p)) for p in range(2)]
[6, 10]
"""

from functools import lru_cache
from itertools import combinations, product

import numpy as np
from sympy import factorint
from sympy.polys.domains import GF, QQ

from dglastacks.coefficients import (
    ArtinRing, RElement, base_reduce, format_relement, parse_relement,
    r_invert
)
from dglastacks.errors import InvalidDatum, Violation
from dglastacks.hochschild import STANDARD_ALGEBRAS, FinAlgebra
from dglastacks.linalg import ExactMatrix, IntegerLattice
from dglastacks.simplicial import CosimplicialVS


class FiniteSpace:
    """
    Finite poset with the Alexandrov topology whose opens are down-sets.

    Parameters
    ----------
    points : list of str
        Point names; their order fixes all enumerations.
    order : list of pairs
        Relations ``(x, y)`` meaning ``x <= y``; closed up reflexively and
        transitively.
    """

    def __init__(self, points, order=()):
        self.points = [str(p) for p in points]
        if len(set(self.points)) != len(self.points):
            raise InvalidDatum("Point names must be unique")
        self.index = {p: i for i, p in enumerate(self.points)}
        leq = {p: {p} for p in self.points}
        for x, y in order:
            if x not in self.index or y not in self.index:
                raise InvalidDatum(f"Unknown point in relation {x} <= {y}")
            leq[str(y)].add(str(x))
        changed = True
        while changed:
            changed = False
            for y in self.points:
                below = set(leq[y])
                for x in list(below):
                    below |= leq[x]
                if below != leq[y]:
                    leq[y] = below
                    changed = True
        for y in self.points:
            for x in leq[y]:
                if x != y and y in leq[x]:
                    raise InvalidDatum(f"{x} and {y} violate antisymmetry")
        self._below = {y: frozenset(xs) for y, xs in leq.items()}

    def leq(self, x, y):
        """Whether ``x <= y``."""
        return x in self._below[y]

    def down(self, x):
        """Smallest open neighbourhood ``{y <= x}``."""
        return self._below[x]

    def is_open(self, subset):
        """Whether ``subset`` is a down-set."""
        subset = set(subset)
        return all(self._below[x] <= subset for x in subset)

    def sort(self, subset):
        """Points of ``subset`` in the fixed order."""
        return sorted(subset, key=self.index.__getitem__)

    def components(self, subset):
        """Connected components of a subspace, in the fixed order."""
        remaining = self.sort(subset)
        out = []
        while remaining:
            start = remaining[0]
            component, frontier = {start}, [start]
            while frontier:
                x = frontier.pop()
                for y in remaining:
                    if y not in component and (
                            self.leq(x, y) or self.leq(y, x)):
                        component.add(y)
                        frontier.append(y)
            out.append(frozenset(component))
            remaining = [x for x in remaining if x not in component]
        return out

    def to_json(self):
        """Points and generating order relations."""
        return {
            "points": list(self.points),
            "order": [[x, y] for y in self.points for x in self.sort(
                self._below[y]) if x != y],
        }


class NervePoint:
    """Point ``(x, i_0, ..., i_p)`` of the ``p``-th nerve level."""

    __slots__ = ("point", "indices")

    def __init__(self, point, indices):
        self.point = point
        self.indices = tuple(indices)

    @property
    def level(self):
        """``p``."""
        return len(self.indices) - 1

    def key(self):
        """Serialization ``"x|i0,i1,..."``."""
        return f"{self.point}|{','.join(map(str, self.indices))}"

    @classmethod
    def from_key(cls, key):
        """Inverse of :meth:`key`."""
        point, _, indices = key.partition("|")
        return cls(point, [int(i) for i in indices.split(",") if i != ""])

    def face(self, i):
        """Delete the ``i``-th index."""
        return NervePoint(self.point, self.indices[:i] + self.indices[i + 1:])

    def degeneracy(self, i):
        """Repeat the ``i``-th index."""
        return NervePoint(
            self.point, self.indices[:i + 1] + self.indices[i:]
        )

    def __eq__(self, other):
        return (
            isinstance(other, NervePoint) and other.point == self.point
            and other.indices == self.indices
        )

    def __hash__(self):
        return hash((self.point, self.indices))

    def __repr__(self):
        return f"NervePoint({self.key()!r})"


class Cover:
    """
    Finite open cover of a finite space.

    Parameters
    ----------
    space : FiniteSpace
    members : list of iterables
        The charts ``U_i``.
    """

    def __init__(self, space, members, name="cover"):
        self.space = space
        self.members = [frozenset(str(x) for x in m) for m in members]
        self.name = name
        for i, member in enumerate(self.members):
            if not member <= set(space.points):
                raise InvalidDatum(f"Chart {i} has unknown points")
            if not space.is_open(member):
                raise InvalidDatum(f"Chart {i} is not open")
        if set().union(*self.members) != set(space.points):
            raise InvalidDatum("The charts do not cover the space")
        self._sheets = {}

    @classmethod
    def from_json(cls, data):
        """Build from ``{"points", "order", "cover"}`` or ``{"model"}``."""
        if "model" in data:
            return MODELS[data["model"]]()
        space = FiniteSpace(data["points"], data.get("order", []))
        return cls(space, data["cover"], name=data.get("name", "cover"))

    def to_json(self):
        """Inverse of :meth:`from_json`."""
        out = self.space.to_json()
        out["cover"] = [self.space.sort(m) for m in self.members]
        out["name"] = self.name
        return out

    @property
    def size(self):
        """Number of charts."""
        return len(self.members)

    def intersection(self, indices):
        """``U_{i_0} cap ... cap U_{i_p}``."""
        out = set(self.space.points)
        for i in indices:
            out &= self.members[i]
        return frozenset(out)

    def tuples(self, p):
        """All index tuples of length ``p + 1``, lexicographic."""
        return list(product(range(self.size), repeat=p + 1))

    def sheets(self, indices):
        """Connected components of ``U_J``."""
        indices = tuple(indices)
        if indices not in self._sheets:
            self._sheets[indices] = self.space.components(
                self.intersection(indices)
            )
        return self._sheets[indices]

    def sheet_of(self, indices, x):
        """Index of the sheet of ``U_J`` containing ``x``."""
        for k, sheet in enumerate(self.sheets(indices)):
            if x in sheet:
                return k
        raise InvalidDatum(f"{x} is not in U_{indices}")

    def representative(self, indices, k):
        """First point of a sheet."""
        return self.space.sort(self.sheets(indices)[k])[0]

    def level_sheets(self, p):
        """All ``(J, k)`` of nerve level ``p``, lexicographic."""
        return [
            (J, k) for J in self.tuples(p)
            for k in range(len(self.sheets(J)))
        ]


def build_nerve(cover, p):
    """
    Points of ``N_p U``: all ``(x, i_0, ..., i_p)`` with ``x`` in ``U_J``.

    Sorted by point, then lexicographically by indices.
    """
    out = []
    for x in cover.space.points:
        for J in cover.tuples(p):
            if x in cover.intersection(J):
                out.append(NervePoint(x, J))
    return out


# Models
# ======

def one_point():
    """A single point with a single chart."""
    return Cover(FiniteSpace(["p"]), [["p"]], name="point")


def discrete(k=3):
    """Discrete ``k``-point space covered by its singletons."""
    points = [f"p{i}" for i in range(k)]
    return Cover(FiniteSpace(points), [[p] for p in points],
                 name=f"discrete_{k}")


def pseudocircle():
    """Four-point circle ``a, b <= c, d`` with the charts below ``c``, ``d``."""
    space = FiniteSpace(
        ["a", "b", "c", "d"],
        [["a", "c"], ["b", "c"], ["a", "d"], ["b", "d"]]
    )
    return Cover(space, [["a", "b", "c"], ["a", "b", "d"]],
                 name="pseudocircle")


def circle3():
    """Six-point circle with three charts meeting in single points."""
    lows = [f"x{i}" for i in range(3)]
    highs = [f"y{i}" for i in range(3)]
    order = [[lows[i], highs[i]] for i in range(3)] + \
        [[lows[(i + 1) % 3], highs[i]] for i in range(3)]
    members = [[highs[i], lows[i], lows[(i + 1) % 3]] for i in range(3)]
    return Cover(FiniteSpace(lows + highs, order), members, name="circle3")


def sphere():
    """
    Face poset of the boundary of the 3-simplex, covered by closed facets.

    Its Cech cohomology with rational coefficients is ``(1, 0, 1)``.
    """
    vertices = range(4)
    faces = [
        frozenset(s) for r in (1, 2, 3)
        for s in combinations(vertices, r)
    ]
    names = {f: "".join(map(str, sorted(f))) for f in faces}
    order = [
        [names[f], names[g]] for f in faces for g in faces
        if f < g
    ]
    space = FiniteSpace([names[f] for f in faces], order)
    facets = [f for f in faces if len(f) == 3]
    members = [[names[f] for f in faces if f <= T] for T in facets]
    return Cover(space, members, name="sphere")


MODELS = {
    "point": one_point,
    "discrete": discrete,
    "pseudocircle": pseudocircle,
    "circle3": circle3,
    "sphere": sphere,
}


# Sheaves and Cech cohomology
# ===========================

class SheafData:
    """
    Sheaf on a finite space by stalks and restriction matrices.

    Parameters
    ----------
    space : FiniteSpace
    stalks : dict
        Point to dimension of ``F(down(x))``.
    restrictions : dict
        ``(y, x)`` with ``x <= y`` to the matrix ``F_y -> F_x``; missing
        entries between equal dimensions are identities.
    """

    def __init__(self, space, stalks, restrictions=None):
        self.space = space
        self.stalks = {p: int(stalks[p]) for p in space.points}
        self.restrictions = dict(restrictions or {})
        self._sections = {}

    @classmethod
    def constant(cls, space, dim=1):
        """Constant sheaf ``Q^dim``."""
        return cls(space, {p: dim for p in space.points})

    def restriction(self, y, x):
        """Matrix ``F_y -> F_x``."""
        if (y, x) in self.restrictions:
            return np.asarray(self.restrictions[(y, x)], dtype=object)
        assert self.stalks[x] == self.stalks[y], "Missing restriction"
        return np.identity(self.stalks[x], dtype=object) * QQ(1)

    def _offsets(self, points):
        offsets, total = {}, 0
        for p in points:
            offsets[p] = total
            total += self.stalks[p]
        return offsets, total

    def sections(self, subset):
        """
        Basis of ``F(U)`` as families over the points of ``U``.

        Computed as the exact limit: the kernel of all restriction
        constraints ``r_{y x} s_y = s_x``.
        """
        key = frozenset(subset)
        if key not in self._sections:
            points = self.space.sort(key)
            offsets, total = self._offsets(points)
            rows, r = {}, 0
            for y in points:
                for x in points:
                    if x == y or not self.space.leq(x, y):
                        continue
                    R = self.restriction(y, x)
                    for a in range(self.stalks[x]):
                        row = {offsets[x] + a: QQ(-1)}
                        for b in range(self.stalks[y]):
                            if R[a, b]:
                                row[offsets[y] + b] = R[a, b]
                        rows[r] = row
                        r += 1
            basis = ExactMatrix(rows, (r, total)).nullspace()
            self._sections[key] = (points, offsets, total, basis)
        return self._sections[key]

    def section_dimension(self, subset):
        """``dim F(U)``."""
        return len(self.sections(subset)[3])

    def restriction_matrix(self, big, small):
        """Matrix of ``F(big) -> F(small)`` in the section bases."""
        points, offsets, _, basis = self.sections(big)
        s_points, s_offsets, s_total, s_basis = self.sections(small)
        target = ExactMatrix.from_columns(s_basis, s_total)
        M = np.full((len(s_basis), len(basis)), QQ(0), dtype=object)
        for col, v in enumerate(basis):
            restricted = {}
            for x in s_points:
                for a in range(self.stalks[x]):
                    value = v.get(offsets[x] + a)
                    if value:
                        restricted[s_offsets[x] + a] = value
            coords = target.solve(restricted)
            assert coords is not None, "Restriction of a section"
            for row, value in coords.items():
                M[row, col] = value
        return M


def cech_cosimplicial(cover, sheaf, top):
    """Cosimplicial space ``p |-> Gamma(N_p U; F)`` up to level ``top``."""
    offsets, dims = [], []
    for p in range(top + 1):
        table, total = {}, 0
        for J in cover.tuples(p):
            table[J] = total
            total += sheaf.section_dimension(cover.intersection(J))
        offsets.append(table)
        dims.append(total)

    def size(J):
        return sheaf.section_dimension(cover.intersection(J))

    cofaces, codegeneracies = {}, {}
    for n in range(1, top + 1):
        for i in range(n + 1):
            M = np.full((dims[n], dims[n - 1]), QQ(0), dtype=object)
            for J, row in offsets[n].items():
                K = J[:i] + J[i + 1:]
                col = offsets[n - 1][K]
                if size(J) and size(K):
                    M[row:row + size(J), col:col + size(K)] = \
                        sheaf.restriction_matrix(
                            cover.intersection(K), cover.intersection(J))
            cofaces[(n, i)] = M
    for n in range(top):
        for i in range(n + 1):
            M = np.full((dims[n], dims[n + 1]), QQ(0), dtype=object)
            for J, row in offsets[n].items():
                K = J[:i + 1] + J[i:]
                col = offsets[n + 1][K]
                M[row:row + size(J), col:col + size(J)] = \
                    np.identity(size(J), dtype=object) * QQ(1)
            codegeneracies[(n, i)] = M
    return CosimplicialVS(dims, cofaces, codegeneracies,
                          name=f"cech_{cover.name}")


def cech_cohomology(cover, sheaf, n_max):
    """Dimensions of ``H^0..H^n_max`` of the Cech complex."""
    return cech_cosimplicial(cover, sheaf, n_max + 1).cohomology(n_max)


# Descent data
# ============

def _unit_parts(a):
    """Sign, prime exponents and logarithm coefficients of a unit."""
    c = a.constant
    sign = 1 if c < 0 else 0
    exponents = {}
    for p, e in factorint(abs(int(c.numerator))).items():
        exponents[p] = exponents.get(p, 0) + e
    for p, e in factorint(int(c.denominator)).items():
        exponents[p] = exponents.get(p, 0) - e
    log = (a.scale(1 / c)).log()
    return sign, exponents, list(log.coeffs[1:])


class DescentDatum:
    """
    Descent datum of a twisted form with trivialized line bundles.

    Parameters
    ----------
    cover : Cover
    ring : ArtinRing
    a01 : dict
        ``NervePoint`` of level one to invertible ``RElement``.
    a012 : dict
        ``NervePoint`` of level two to invertible ``RElement``.
    fiber : FinAlgebra, optional
        Commutative fiber algebra ``J``, ``Q`` by default.

    Missing values are ``1``. Values must be constant on sheets.
    """

    def __init__(self, cover, ring, a01=None, a012=None, fiber=None):
        self.cover = cover
        self.ring = ring
        self.a01 = dict(a01 or {})
        self.a012 = dict(a012 or {})
        self.fiber = fiber or STANDARD_ALGEBRAS["Q"]()

    @classmethod
    def trivial(cls, cover, ring, fiber=None):
        """The datum with all values ``1``."""
        return cls(cover, ring, fiber=fiber)

    @classmethod
    def from_json(cls, data, cover=None):
        """Build from ``{"N", "cover", "a01", "a012", "fiber"}``."""
        cover = cover or Cover.from_json(data["cover"])
        ring = ArtinRing(int(data.get("N", 2)))
        fiber = data.get("fiber")
        if isinstance(fiber, str):
            fiber = STANDARD_ALGEBRAS[fiber]()
        elif fiber is not None:
            fiber = FinAlgebra.from_json(fiber)

        def parse(block):
            return {
                NervePoint.from_key(k): parse_relement(ring, v)
                for k, v in (block or {}).items()
            }
        return cls(cover, ring, parse(data.get("a01")),
                   parse(data.get("a012")), fiber)

    def to_json(self):
        """Inverse of :meth:`from_json`."""
        return {
            "N": self.ring.N,
            "cover": self.cover.to_json(),
            "fiber": self.fiber.to_json(),
            "a01": {k.key(): format_relement(v) for k, v in sorted(
                self.a01.items(), key=lambda kv: kv[0].key())},
            "a012": {k.key(): format_relement(v) for k, v in sorted(
                self.a012.items(), key=lambda kv: kv[0].key())},
        }

    def value01(self, x, i, j):
        """``a01`` at ``(x, i, j)``."""
        return self.a01.get(NervePoint(x, (i, j)), self.ring.one())

    def value012(self, x, i, j, k):
        """``a012`` at ``(x, i, j, k)``."""
        return self.a012.get(NervePoint(x, (i, j, k)), self.ring.one())

    def cocycle(self, x, i, j, k):
        """
        Effective pairing constant of ``A_ij (x) A_jk -> A_ik`` at ``x``.

        ``a012(ijk) a01(ij) a01(jk) / a01(ik)``.
        """
        return (
            self.value012(x, i, j, k) * self.value01(x, i, j)
            * self.value01(x, j, k) / self.value01(x, i, k)
        )

    def sheet_cocycle(self, J, k):
        """Effective cocycle on the ``k``-th sheet of ``U_J``."""
        x = self.cover.representative(J, k)
        return self.cocycle(x, *J)

    def unit(self, x, i):
        """Coefficient of the unit ``1_ii = u g_ii``."""
        return r_invert(self.cocycle(x, i, i, i))

    def base_change(self, M):
        """Reduce every value to ``Q[t]/(t^M)``."""
        ring = ArtinRing(M)
        return DescentDatum(
            self.cover, ring,
            {k: base_reduce(v, M) for k, v in self.a01.items()},
            {k: base_reduce(v, M) for k, v in self.a012.items()},
            self.fiber
        )

    def pullback(self, cover, index_map):
        """
        Pull back along a refinement ``V_a subset U_{index_map[a]}``.
        """
        for a, member in enumerate(cover.members):
            if not member <= self.cover.members[index_map[a]]:
                raise InvalidDatum(f"Chart {a} is not inside its image")
        a01, a012 = {}, {}
        for point in build_nerve(cover, 1):
            image = tuple(index_map[a] for a in point.indices)
            a01[point] = self.value01(point.point, *image)
        for point in build_nerve(cover, 2):
            image = tuple(index_map[a] for a in point.indices)
            a012[point] = self.value012(point.point, *image)
        return DescentDatum(cover, self.ring, a01, a012, self.fiber)


def validate_descent_datum(d):
    """
    Report violated axioms of a descent datum.

    Checks invertibility, local constancy on sheets, associativity
    ``c(ijk) c(ikl) = c(jkl) c(ijl)`` on nerve level three and the unit
    laws ``u(i) c(iij) = 1 = c(ijj) u(j)``.
    """
    violations = []
    cover = d.cover
    for table, level in ((d.a01, 1), (d.a012, 2)):
        for point, value in sorted(table.items(), key=lambda kv: kv[0].key()):
            if point.level != level or point.point not in \
                    cover.intersection(point.indices):
                violations.append(Violation(
                    "domain", {"point": point.key()}))
            elif value.in_maximal_ideal():
                violations.append(Violation(
                    "invertibility", {"point": point.key()}))
    if violations:
        return violations
    for level, getter in ((1, d.value01), (2, d.value012)):
        for J, k in cover.level_sheets(level):
            values = {getter(x, *J) for x in cover.sheets(J)[k]}
            if len(values) > 1:
                violations.append(Violation("locally_constant", {
                    "indices": list(J), "sheet": k
                }))
    for point in build_nerve(cover, 3):
        x, (i, j, k, l) = point.point, point.indices
        c = d.cocycle
        if c(x, i, j, k) * c(x, i, k, l) != c(x, j, k, l) * c(x, i, j, l):
            violations.append(Violation(
                "associativity", {"point": point.key()}))
    for point in build_nerve(cover, 1):
        x, (i, j) = point.point, point.indices
        if d.unit(x, i) * d.cocycle(x, i, i, j) != 1:
            violations.append(Violation("unit_left", {"point": point.key()}))
        if d.cocycle(x, i, j, j) * d.unit(x, j) != 1:
            violations.append(Violation(
                "unit_right", {"point": point.key()}))
    return violations


def _require_valid(d):
    violations = validate_descent_datum(d)
    if violations:
        raise InvalidDatum(
            f"Invalid descent datum: {violations[0].name} at "
            f"{violations[0].witness}"
        )


@lru_cache(maxsize=None)
def _coboundary_columns(cover):
    """Sparse columns of ``d: C^1 -> C^2`` on sheets, entries in Z."""
    rows = {s: r for r, s in enumerate(cover.level_sheets(2))}
    columns = {s: {} for s in cover.level_sheets(1)}
    for (J, k), r in rows.items():
        x = cover.representative(J, k)
        i, j, l = J
        for face, sign in (((j, l), 1), ((i, l), -1), ((i, j), 1)):
            s = (face, cover.sheet_of(face, x))
            columns[s][r] = columns[s].get(r, 0) + sign
    return list(columns), [columns[s] for s in columns], len(rows)


class TwistedFormClass:
    """
    Class of a multiplicative 2-cocycle in ``H^2(U; O^x)``.

    Attributes
    ----------
    trivial : bool
    normal_form : dict
        Canonical invariants of the class per factor of ``R^x``.
    trivialization : dict or None
        Level one sheet ``(J, k)`` to ``RElement`` with ``d(phi) = c``.
    certificate : dict or None
        Unsolvability certificate of the first failing factor.
    """

    def __init__(self, trivial, normal_form, trivialization, certificate):
        self.trivial = trivial
        self.normal_form = normal_form
        self.trivialization = trivialization
        self.certificate = certificate

    def to_json(self, cover):
        """Report payload with trivializations per nerve point."""
        trivialization = None
        if self.trivialization is not None:
            trivialization = {}
            for point in build_nerve(cover, 1):
                s = (point.indices, cover.sheet_of(point.indices,
                                                   point.point))
                trivialization[point.key()] = format_relement(
                    self.trivialization[s])
        return {
            "trivial": self.trivial,
            "normal_form": self.normal_form,
            "trivialization": trivialization,
            "certificate": self.certificate,
        }


def multiplicative_class(cover, ring, values):
    """
    Decide whether ``values`` (level two sheet to unit) is ``d(phi)``.

    The unit group ``Q^x x (1 + m)`` splits into signs (solved over
    ``GF(2)``), prime exponents (over ``Z``) and logarithms (over ``Q``).
    """
    unknowns, columns, nrows = _coboundary_columns(cover)
    sheets2 = cover.level_sheets(2)
    parts = [_unit_parts(values[s]) for s in sheets2]
    primes = sorted({p for _, e, _ in parts for p in e})
    nf, certificate = {}, None
    phi_sign, phi_exp, phi_log = {}, {}, {}

    # signs
    F2 = GF(2)
    A2 = ExactMatrix.from_columns(columns, nrows, F2)
    b2 = {r: F2(1) for r, (s, _, _) in enumerate(parts) if s}
    solution = A2.solve(b2)
    kernel = A2.transpose().nullspace()
    nf["sign"] = [
        int(bool(sum((w[i] for i in w if i in b2), F2(0)))) for w in kernel
    ]
    if solution is None:
        certificate = {"factor": "sign", "left_kernel": _sheet_vector(
            A2.certificate(b2), sheets2, lambda v: 1)}
    else:
        phi_sign = {unknowns[c]: 1 for c in solution}

    # prime exponents
    dense_columns = [[col.get(r, 0) for r in range(nrows)] for col in columns]
    lattice = IntegerLattice(dense_columns, nrows)
    nf["primes"] = {}
    for p in primes:
        b = [e.get(p, 0) for _, e, _ in parts]
        nf["primes"][str(p)] = lattice.reduce(b)
        x = lattice.solve(b)
        if x is None and certificate is None:
            rational = ExactMatrix.from_columns(columns, nrows).certificate(b)
            certificate = {"factor": f"prime_{p}"}
            if rational is not None:
                certificate["left_kernel"] = _sheet_vector(
                    rational, sheets2, str)
            else:
                certificate["divisibility"] = lattice.obstruction(b)
        elif x is not None:
            for c, e in enumerate(x):
                if e:
                    phi_exp.setdefault(unknowns[c], {})[p] = e

    # logarithms
    AQ = ExactMatrix.from_columns(columns, nrows)
    cokernel = AQ.transpose().nullspace()
    nf["log"] = []
    for r in range(1, ring.N):
        b = {row: part[2][r - 1] for row, part in enumerate(parts)
             if part[2][r - 1]}
        nf["log"].append([
            str(sum((w[i] * b[i] for i in w if i in b), QQ(0)))
            for w in cokernel
        ])
        x = AQ.solve(b)
        if x is None and certificate is None:
            certificate = {"factor": f"log_t{r}", "left_kernel":
                           _sheet_vector(AQ.certificate(b), sheets2, str)}
        elif x is not None:
            for c, value in x.items():
                phi_log.setdefault(unknowns[c], [QQ(0)] * ring.N)[r] = value

    if certificate is not None:
        return TwistedFormClass(False, nf, None, certificate)
    trivialization = {}
    for s in unknowns:
        constant = QQ(-1) if phi_sign.get(s) else QQ(1)
        for p, e in phi_exp.get(s, {}).items():
            constant *= QQ(p) ** e
        log = RElement(ring, phi_log.get(s, [0]))
        trivialization[s] = log.exp().scale(constant)
    return TwistedFormClass(True, nf, trivialization, None)


def _sheet_vector(w, sheets, fmt):
    if w is None:
        return None
    return {
        f"{','.join(map(str, sheets[i][0]))}#{sheets[i][1]}": fmt(v)
        for i, v in sorted(w.items())
    }


def twisted_form_class(d):
    """
    Class of the effective cocycle of a valid datum in ``H^2(U; O^x)``.

    Returns a :class:`TwistedFormClass`; trivial classes carry a
    trivializing ``phi`` with
    ``c(ijk) = phi(jk) phi(ik)^-1 phi(ij)``, nontrivial ones an
    unsolvability certificate.
    """
    _require_valid(d)
    values = {s: d.sheet_cocycle(*s) for s in d.cover.level_sheets(2)}
    return multiplicative_class(d.cover, d.ring, values)


def coboundary(cover, ring, phi):
    """Multiplicative coboundary of a level one sheet function."""
    out = {}
    for J, k in cover.level_sheets(2):
        x = cover.representative(J, k)
        i, j, l = J

        def at(face):
            return phi.get((face, cover.sheet_of(face, x)), ring.one())
        out[(J, k)] = at((j, l)) * at((i, j)) / at((i, l))
    return out


def datum_from_sheet_cocycle(cover, ring, values, fiber=None):
    """Datum with ``a01 = 1`` and ``a012`` given per level two sheet."""
    a012 = {}
    for point in build_nerve(cover, 2):
        s = (point.indices, cover.sheet_of(point.indices, point.point))
        if s in values and values[s] != 1:
            a012[point] = values[s]
    return DescentDatum(cover, ring, {}, a012, fiber)


def sign_cocycle_datum(cover, ring, face=(0, 1, 2)):
    """
    The ``{+1, -1}``-valued cocycle of a 2-face.

    ``c(ijk) = -1`` exactly when ``i, j, k`` are pairwise distinct and
    ``{i, j, k}`` is the given face; on the sphere model this is a
    nontrivial class.
    """
    face = set(face)
    values = {}
    for J, k in cover.level_sheets(2):
        if len(set(J)) == 3 and set(J) == face:
            values[(J, k)] = RElement(ring, [-1])
    return datum_from_sheet_cocycle(cover, ring, values)


def random_level1(cover, ring, rng, bound=2):
    """Random invertible locally constant level one function."""
    phi = {}
    for s in cover.level_sheets(1):
        coeffs = [int(c) for c in rng.integers(-bound, bound + 1, ring.N)]
        coeffs[0] = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        phi[s] = RElement(ring, coeffs)
    return phi


def datum_isomorphism(d1, d2):
    """
    Transition function between two data on the same cover, or ``None``.

    The data are isomorphic iff their effective cocycles differ by a
    coboundary; the returned ``phi`` satisfies ``c1 = d(phi) c2``.
    """
    if d1.cover.to_json() != d2.cover.to_json() or d1.ring != d2.ring:
        raise InvalidDatum("Data live on different covers or rings")
    _require_valid(d1)
    _require_valid(d2)
    cover = d1.cover
    ratio = {
        s: d1.sheet_cocycle(*s) / d2.sheet_cocycle(*s)
        for s in cover.level_sheets(2)
    }
    result = multiplicative_class(cover, d1.ring, ratio)
    return result.trivialization if result.trivial else None


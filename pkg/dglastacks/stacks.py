# pylint: disable=invalid-name

"""
Module for G-stacks: Maurer-Cartan data of the cosimplicial DGLA ``G(A)``.

A G-stack is a triple ``(gamma0, X, t)``:

* ``gamma0`` of degree one in ``G^0``, a Maurer-Cartan element,
* ``X`` of degree zero in ``G^1``, a gauge transformation from the
  vertex ``1`` to the vertex ``0`` image of ``gamma0``,
* ``t`` of degree minus one in ``G^2``, a 2-morphism from
  ``X_01 X_12`` to ``X_02``,

all with coefficients in the maximal ideal of ``R``, normalized
(``s_0 X = 0``, ``s_0 t = s_1 t = 0``) and subject to the cocycle
condition on ``t`` in ``G^3``. Vertex and edge images are pushforwards
along the monotone maps ``{v} -> [n]`` and ``{a < b} -> [n]``.

A 2-morphism ``t: A => B`` over the base ``gamma`` (the target of ``A``
and ``B``) means ``B = bch(dt + [gamma, t], A)``.
"""

import bisect

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.coefficients import RElement, format_rational
from dglastacks.dgla import (
    DglaElement, bch_product, exp_ad, gauge_act, is_maurer_cartan,
    random_element, twisted_differential, zeros
)
from dglastacks.errors import (
    CompatibilityError, DegreeError, NoSolution, NotMaurerCartan, NotStrict,
    RingMismatch, Violation
)
from dglastacks.gdgla import (
    KernelDgla, acyclicity_homotopy, chain_position
)
from dglastacks.hochschild import zero_tensor
from dglastacks.linalg import ExactMatrix, dense_vector
from dglastacks.matrixalgebras import chains
from dglastacks.simplicial import DeltaSimplex


# Element helpers
# ===============

def element_to_json(x):
    """Sparse JSON form ``{"level", "degree", "coefficients"}``."""
    coefficients = {}
    for i in range(len(x.layers[0])):
        if any(layer[i] for layer in x.layers):
            coefficients[str(i)] = RElement(
                x.ring, [layer[i] for layer in x.layers]
            ).to_json()
    return {
        "level": x.parent.n,
        "degree": x.degree,
        "coefficients": coefficients,
    }


def element_from_json(G, ring, data):
    """Inverse of :func:`element_to_json`."""
    g = G.level(int(data["level"]))
    degree = int(data["degree"])
    dim = g.dimension(degree)
    layers = [zeros(dim) for _ in range(ring.N)]
    for key, value in data.get("coefficients", {}).items():
        c = RElement(ring, value)
        for r in range(ring.N):
            layers[r][int(key)] = c.coeffs[r]
    return DglaElement(g, degree, ring, layers)


def zero_element(G, n, degree, ring):
    """The zero element of ``G^n`` in a degree."""
    return DglaElement(G.level(n), degree, ring)


def twisted_product(gamma, *logs):
    """Product in ``exp_gamma G^(-1)`` of several logarithms."""
    result = logs[0]
    for x in logs[1:]:
        result = bch_product(result, x, gamma)
    return result


def plain_product(*logs):
    """Product in ``exp G^0`` of several logarithms."""
    result = logs[0]
    for x in logs[1:]:
        result = bch_product(result, x)
    return result


def locate(level, arity, index):
    """Block and chain of a coordinate of a level."""
    offsets = level.offsets(arity)
    position = bisect.bisect_right(offsets, index) - 1
    block = level.blocks[position]
    B = level.G.fiber.dim ** (arity + 1)
    size = block[0].objects[0] + 1
    r = (index - offsets[position]) // B
    return block, list(chains(size, arity))[r]


def _difference(a, b):
    """Witness of ``a != b``: the order and first coordinate, or ``None``."""
    for r, (x, y) in enumerate(zip(a.layers, b.layers)):
        diff = x - y
        for i, value in enumerate(diff):
            if value:
                return {"level": a.parent.n, "order": r, "coordinate": i}
    return None


def _nonzero_witness(x):
    return _difference(x, DglaElement(x.parent, x.degree, x.ring))


# G-stacks
# ========

class GStack:
    """
    A G-stack ``(gamma0, X, t)``.

    Parameters
    ----------
    G : CosimplicialG
    g0, g1, g2 : DglaElement
        Elements of ``G^0`` (degree 1), ``G^1`` (degree 0) and ``G^2``
        (degree -1) over one ring.
    """

    def __init__(self, G, g0, g1, g2):
        for n, (x, degree) in enumerate(((g0, 1), (g1, 0), (g2, -1))):
            if x.parent is not G.level(n) or x.degree != degree:
                raise DegreeError(
                    f"Component {n} must have degree {degree} in G^{n}"
                )
        if not g0.ring == g1.ring == g2.ring:
            raise RingMismatch("Stack components over different rings")
        self.G = G
        self.ring = g0.ring
        self.g0, self.g1, self.g2 = g0, g1, g2

    @classmethod
    def strict(cls, G, gamma0):
        """The stack ``(gamma0, 0, 0)``."""
        ring = gamma0.ring
        return cls(G, gamma0, zero_element(G, 1, 0, ring),
                   zero_element(G, 2, -1, ring))

    @classmethod
    def trivial(cls, G, ring):
        """The stack ``(0, 0, 0)``."""
        return cls.strict(G, zero_element(G, 0, 1, ring))

    @classmethod
    def from_json(cls, G, ring, data):
        """Build from ``{"g0", "g1", "g2"}`` in sparse element form."""
        return cls(G, *(element_from_json(G, ring, data[k])
                        for k in ("g0", "g1", "g2")))

    def to_json(self):
        """Sparse JSON form."""
        return {
            "N": self.ring.N,
            "g0": element_to_json(self.g0),
            "g1": element_to_json(self.g1),
            "g2": element_to_json(self.g2),
        }

    def __eq__(self, other):
        return (
            isinstance(other, GStack) and other.G is self.G
            and other.g0 == self.g0 and other.g1 == self.g1
            and other.g2 == self.g2
        )

    def __hash__(self):
        return hash(self.g0)

    def vertex(self, v, n):
        """Image ``gamma_v`` of ``gamma0`` in ``G^n``."""
        return self.G.image(self.g0, (v,), n)

    def edge(self, a, b, n):
        """Image ``X_ab`` of ``X`` in ``G^n``."""
        return self.G.image(self.g1, (a, b), n)

    def triangle(self, a, b, c, n):
        """Image ``t_abc`` of ``t`` in ``G^n``."""
        return self.G.image(self.g2, (a, b, c), n)

    def is_strict(self):
        """``X = 0``, ``t = 0`` and ``gamma0`` is compatible."""
        return (
            self.g1.is_zero() and self.g2.is_zero()
            and self.G.face(self.g0, 0) == self.G.face(self.g0, 1)
        )


def validate_gstack(s):
    """
    List of :class:`~dglastacks.errors.Violation` of the G-stack axioms.

    A failing Maurer-Cartan equation stops the check, since the gauge
    action is only defined on Maurer-Cartan elements.
    """
    G = s.G
    out = []
    for x in (s.g0, s.g1, s.g2):
        if not x.in_maximal_ideal():
            out.append(Violation("maximal_ideal", {"level": x.parent.n}))
    if out:
        return out
    if not is_maurer_cartan(s.g0):
        return [Violation("maurer_cartan", {})]

    witness = _difference(
        gauge_act(s.g1, G.face(s.g0, 0)), G.face(s.g0, 1)
    )
    if witness:
        out.append(Violation("gauge", witness))
    witness = _nonzero_witness(G.degeneracy(s.g1, 0))
    if witness:
        out.append(Violation("normalized_g1", witness))

    gamma = s.vertex(0, 2)
    lhs = plain_product(s.edge(0, 1, 2), s.edge(1, 2, 2))
    rhs = bch_product(twisted_differential(gamma, s.g2), lhs)
    witness = _difference(s.edge(0, 2, 2), rhs)
    if witness:
        out.append(Violation("two_morphism", witness))
    for i in (0, 1):
        witness = _nonzero_witness(G.degeneracy(s.g2, i))
        if witness:
            out.append(Violation("normalized_g2", dict(witness, index=i)))

    gamma = s.vertex(0, 3)
    lhs = bch_product(
        s.triangle(0, 1, 3, 3),
        exp_ad(s.edge(0, 1, 3), s.triangle(1, 2, 3, 3)), gamma
    )
    rhs = bch_product(s.triangle(0, 2, 3, 3), s.triangle(0, 1, 2, 3), gamma)
    witness = _difference(lhs, rhs)
    if witness:
        out.append(Violation("cocycle", witness))
    return out


# Morphisms
# =========

class StackOneMorphism:
    """
    1-morphism ``(L, lam)`` between G-stacks.

    ``L`` has degree zero in ``G^0`` and maps ``source.g0`` to
    ``target.g0``; ``lam`` has degree minus one in ``G^1`` and is a
    2-morphism ``X2 L_1 => L_0 X1`` over the vertex ``0`` of the target.
    """

    def __init__(self, source, target, L, lam):
        G = source.G
        if L.parent is not G.level(0) or L.degree != 0:
            raise DegreeError("L must have degree 0 in G^0")
        if lam.parent is not G.level(1) or lam.degree != -1:
            raise DegreeError("lam must have degree -1 in G^1")
        self.source = source
        self.target = target
        self.L = L
        self.lam = lam

    def to_json(self):
        """Sparse JSON form of ``(L, lam)``."""
        return {"L": element_to_json(self.L),
                "lam": element_to_json(self.lam)}

    def __eq__(self, other):
        return (
            isinstance(other, StackOneMorphism)
            and other.L == self.L and other.lam == self.lam
        )

    def __hash__(self):
        return hash(self.L)


class StackTwoMorphism:
    """2-morphism ``phi`` (degree -1 in ``G^0``) between 1-morphisms."""

    def __init__(self, source, target, phi):
        if source.target != target.target or source.source != target.source:
            raise CompatibilityError("2-morphisms need parallel 1-morphisms")
        self.source = source
        self.target = target
        self.phi = phi


def validate_one_morphism(m):
    """Violations of the 1-morphism conditions of ``m``."""
    G = m.source.G
    s1, s2 = m.source, m.target
    out = []
    witness = _difference(gauge_act(m.L, s1.g0), s2.g0)
    if witness:
        return [Violation("gauge", witness)]

    gamma = s2.vertex(0, 1)
    L0, L1 = G.image(m.L, (0,), 1), G.image(m.L, (1,), 1)
    lhs = plain_product(L0, s1.g1)
    rhs = plain_product(
        twisted_differential(gamma, m.lam), s2.g1, L1
    )
    witness = _difference(lhs, rhs)
    if witness:
        out.append(Violation("two_morphism", witness))

    gamma = s2.vertex(0, 2)
    lhs = twisted_product(
        gamma,
        exp_ad(G.image(m.L, (0,), 2), s1.g2),
        G.image(m.lam, (0, 1), 2),
        exp_ad(s2.edge(0, 1, 2), G.image(m.lam, (1, 2), 2)),
    )
    rhs = twisted_product(gamma, G.image(m.lam, (0, 2), 2), s2.g2)
    witness = _difference(lhs, rhs)
    if witness:
        out.append(Violation("compatibility", witness))
    witness = _nonzero_witness(G.degeneracy(m.lam, 0))
    if witness:
        out.append(Violation("normalized_lam", witness))
    return out


def validate_two_morphism(a):
    """Violations of the 2-morphism conditions of ``a``."""
    G = a.phi.parent.G
    m1, m2 = a.source, a.target
    gamma = m1.target.g0
    out = []
    expected = bch_product(twisted_differential(gamma, a.phi), m1.L)
    witness = _difference(m2.L, expected)
    if witness:
        out.append(Violation("gauge", witness))
    gamma = m1.target.vertex(0, 1)
    lhs = twisted_product(
        gamma, m2.lam,
        exp_ad(m1.target.g1, G.image(a.phi, (1,), 1))
    )
    rhs = twisted_product(gamma, G.image(a.phi, (0,), 1), m1.lam)
    witness = _difference(lhs, rhs)
    if witness:
        out.append(Violation("two_morphism", witness))
    return out


def identity_morphism(s):
    """The 1-morphism ``(0, 0)`` of a stack."""
    return StackOneMorphism(s, s, zero_element(s.G, 0, 0, s.ring),
                            zero_element(s.G, 1, -1, s.ring))


def compose_1morphisms(first, second):
    """
    ``second o first``: ``(bch(M, L), bch(e^{ad M_0} lam, lam'))``.

    ``first`` runs from ``gamma1`` to ``gamma2`` and ``second`` from
    ``gamma2`` to ``gamma3``.
    """
    if first.target != second.source:
        raise CompatibilityError("1-morphisms are not composable")
    G = first.source.G
    gamma = second.target.vertex(0, 1)
    L = plain_product(second.L, first.L)
    lam = twisted_product(
        gamma, exp_ad(G.image(second.L, (0,), 1), first.lam), second.lam
    )
    return StackOneMorphism(first.source, second.target, L, lam)


def identity_2cell(m):
    """The identity 2-morphism of a 1-morphism."""
    zero = zero_element(m.source.G, 0, -1, m.source.ring)
    return StackTwoMorphism(m, m, zero)


def act_2cell(phi, m):
    """
    Move ``m`` along ``phi``; returns the 2-morphism ``m => m'``.

    ``L' = bch(d phi + [gamma2, phi], L)`` and
    ``lam' = bch(phi_0, lam, -e^{ad X2} phi_1)`` over ``gamma2_0``.
    """
    G = m.source.G
    target = m.target
    if phi.parent is not G.level(0) or phi.degree != -1:
        raise DegreeError("2-cells have degree -1 in G^0")
    L = bch_product(twisted_differential(target.g0, phi), m.L)
    lam = twisted_product(
        target.vertex(0, 1),
        G.image(phi, (0,), 1), m.lam,
        -exp_ad(target.g1, G.image(phi, (1,), 1))
    )
    moved = StackOneMorphism(m.source, target, L, lam)
    return StackTwoMorphism(m, moved, phi)


def vertical_2cells(second, first):
    """``second o first`` for 2-cells ``m1 => m2 => m3``."""
    if first.target != second.source:
        raise CompatibilityError("2-cells are not composable")
    phi = bch_product(second.phi, first.phi, first.source.target.g0)
    return StackTwoMorphism(first.source, second.target, phi)


def morphism_2cells(op, first, second):
    """
    2-cell operations: ``"vertical"`` composes the 2-cells ``second o
    first``, ``"act"`` moves the 1-morphism ``second`` along the cell
    ``first`` (a degree ``-1`` element of ``G^0``).

    Raises
    ------
    CompatibilityError
        If the result fails the 2-morphism conditions.
    """
    if op == "vertical":
        result = vertical_2cells(second, first)
    elif op == "act":
        result = act_2cell(first, second)
    else:
        raise DegreeError(f"Unknown 2-cell operation {op}")
    violations = validate_two_morphism(result)
    if violations:
        raise CompatibilityError(f"2-cell {op} fails: {violations[0]!r}")
    return result


# Transport and strictification
# =============================

def normalize_lam(G, lam):
    """``lam - (d_0)_* (s_0)_* lam``, which has ``(s_0)_* = 0``."""
    return lam - G.face(G.degeneracy(lam, 0), 0)


def transport_stack(s, L, lam):
    """
    Transport ``s`` along ``(L, lam)``.

    Returns the target stack and the 1-morphism. ``lam`` must be
    normalized.
    """
    G = s.G
    g0 = gauge_act(L, s.g0)
    gamma1 = G.image(g0, (0,), 1)
    L0, L1 = G.image(L, (0,), 1), G.image(L, (1,), 1)
    g1 = plain_product(
        -twisted_differential(gamma1, lam),
        plain_product(L0, s.g1), -L1
    )
    gamma2 = G.image(g0, (0,), 2)
    X01 = G.image(g1, (0, 1), 2)
    g2 = twisted_product(
        gamma2,
        -G.image(lam, (0, 2), 2),
        exp_ad(G.image(L, (0,), 2), s.g2),
        G.image(lam, (0, 1), 2),
        exp_ad(X01, G.image(lam, (1, 2), 2)),
    )
    target = GStack(G, g0, g1, g2)
    return target, StackOneMorphism(s, target, L, lam)


def cosimplicial_solve(G, n, arity, target, method="linear", stage=None):
    """
    Normalized ``x`` in ``G^(n, arity)`` with ``sum (-1)^i (d_i)_* x``
    equal to ``target``.

    ``method="linear"`` solves the stacked sparse system of the
    coboundary and the degeneracies exactly; ``method="homotopy"`` applies
    the contracting homotopy and checks the residual.

    Raises
    ------
    NoSolution
        With an unsolvability certificate.
    """
    target = np.asarray(target, dtype=object)
    if method == "homotopy":
        x = acyclicity_homotopy(G, n + 1, arity, target)
        residual = G.coboundary(n, arity, x) - target
        if any(residual):
            raise NoSolution("The homotopy leaves a residual",
                             stage=stage)
        return x
    d = G.coboundary_matrix(n, arity)
    rows = {i: dict(row) for i, row in d.rows.items()}
    nrows = d.shape[0]
    if n > 0:
        s = G.degeneracy_matrix(n, arity)
        for i, row in s.rows.items():
            rows[nrows + i] = dict(row)
        nrows += s.shape[0]
    A = ExactMatrix(rows, (nrows, d.shape[1]))
    rhs = list(target) + [QQ(0)] * (nrows - d.shape[0])
    solution = A.solve(rhs)
    if solution is None:
        raise NoSolution(
            f"No normalized primitive at level {n}, arity {arity}",
            certificate=A.certificate(rhs), stage=stage
        )
    return dense_vector(solution, d.shape[1])


def _trace_entry(phase, r, layer, solution):
    return {
        "phase": phase,
        "order": r,
        "residual": format_rational(sum((abs(v) for v in layer), QQ(0))),
        "support": int(sum(1 for v in solution if v)),
    }


def strictify(s, check=False):
    """
    Equivalent strict stack of ``s`` and a 1-morphism ``s -> strict``.

    Order by order, first kill ``t`` with 1-morphisms ``(0, b t^r)``, then
    ``X`` with 1-morphisms ``(a t^r, 0)``. Returns ``(strict, morphism,
    trace)``; ``trace`` records every order with the norm of the removed
    layer.

    Raises
    ------
    NoSolution
        If a layer has no normalized primitive.
    """
    G = s.G
    ring = s.ring
    current = s
    morphism = identity_morphism(s)
    trace = []
    for r in range(1, ring.N):
        layer = current.g2.layers[r]
        if not any(layer):
            continue
        b = cosimplicial_solve(G, 1, 0, -layer,
                               stage=f"two_morphism order {r}")
        lam = DglaElement(G.level(1), -1, ring, [b]).shift(r)
        current, step = transport_stack(
            current, zero_element(G, 0, 0, ring), lam
        )
        morphism = compose_1morphisms(morphism, step)
        trace.append(_trace_entry("two_morphism", r, layer, b))
    for r in range(1, ring.N):
        layer = current.g1.layers[r]
        if not any(layer):
            continue
        a = cosimplicial_solve(G, 0, 1, layer, stage=f"gauge order {r}")
        L = DglaElement(G.level(0), 0, ring, [a]).shift(r)
        current, step = transport_stack(
            current, L, zero_element(G, 1, -1, ring)
        )
        morphism = compose_1morphisms(morphism, step)
        trace.append(_trace_entry("gauge", r, layer, a))
    if not current.is_strict():
        raise NotStrict("Strictification left a non-strict stack")
    if check:
        violations = validate_one_morphism(morphism)
        if violations:
            raise CompatibilityError(
                f"Strictifying morphism fails: {violations[0]!r}"
            )
    return current, morphism, trace


# Strict stacks and Maurer-Cartan elements of the kernel
# ======================================================

def kernel_of(G):
    """The equalizer DGLA matching the truncation of ``G``."""
    return KernelDgla(G.datum, arity_cap=G.arity_cap, d_max=G.d_cap)


def _coordinate(G, arity, q, sheet, chain):
    level = G.level(0)
    position = level.index[(DeltaSimplex.point(q), sheet)]
    B = G.fiber.dim ** (arity + 1)
    return level.offsets(arity)[position] + chain_position(chain, q + 1) * B


def strict_to_mc(s, K=None):
    """``gamma0`` of a strict stack as an MC element of the kernel DGLA."""
    if not s.is_strict():
        raise NotStrict("Only strict stacks have a kernel MC element")
    G = s.G
    K = K or kernel_of(G)
    B = G.fiber.dim ** 3
    representatives, _ = K.classes(2)
    layers = []
    for layer in s.g0.layers:
        out = zeros(K.dimension(1))
        for c, (q, sheet, chain) in enumerate(representatives):
            start = _coordinate(G, 2, q, sheet, chain)
            out[c * B:(c + 1) * B] = layer[start:start + B]
        layers.append(out)
    gamma = DglaElement(K, 1, s.ring, layers)
    if not is_maurer_cartan(gamma):
        raise NotMaurerCartan("Kernel element fails the MC equation")
    return gamma


def mc_to_strict(G, gamma):
    """Strict stack of an MC element of :func:`kernel_of`."""
    K = gamma.parent
    B = G.fiber.dim ** 3
    _, members = K.classes(2)
    dim = G.level(0).dimension(1)
    layers = []
    for layer in gamma.layers:
        out = zeros(dim)
        for c, group in enumerate(members):
            values = layer[c * B:(c + 1) * B]
            for (q, sheet), chain_list in group.items():
                for chain in chain_list:
                    start = _coordinate(G, 2, q, sheet, chain)
                    out[start:start + B] = values
        layers.append(out)
    return GStack.strict(G, DglaElement(G.level(0), 1, gamma.ring, layers))


# Deformation data
# ================

class DeformationDatum:
    """
    Deformation of the descent datum's matrix algebras.

    ``mu`` has degree one in ``G^0``: on every block ``([q], sheet)`` the
    deformation ``m' - m`` of the product of ``Mat^q``.
    """

    def __init__(self, G, mu):
        if mu.parent is not G.level(0) or mu.degree != 1:
            raise DegreeError("mu must have degree 1 in G^0")
        self.G = G
        self.mu = mu

    @classmethod
    def from_star(cls, G, star, datum=None):
        """
        Deformation from a star product on the fiber and a datum over R.

        On the block of ``[q]`` the product of ``E_ab`` and ``E_bc`` is
        ``c'_abc m_*``, where ``c'`` is the cocycle of ``datum`` (``G``'s
        own datum by default) and ``m_*`` the star product.
        """
        datum = datum or G.datum
        ring = star.ring
        if datum.ring != ring:
            raise RingMismatch("Star product and datum over different rings")
        if star.algebra.dim != G.fiber.dim:
            raise DegreeError("Star product does not live on the fiber")
        level = G.level(0)
        offsets = level.offsets(2)
        B = G.fiber.dim ** 3
        layers = [zeros(offsets[-1]) for _ in range(ring.N)]
        star_layers = star.layers
        mult = star.algebra.mult
        for position, block in enumerate(level.blocks):
            base = G.base(block)
            for chain in chains(base.size, 2):
                c = datum.cocycle(
                    base.point, *(base.charts[a] for a in chain)
                )
                if c.constant != base.pairing(*chain):
                    raise CompatibilityError(
                        f"Datum differs from G at {block!r}, chain {chain}"
                    )
                start = offsets[position] + \
                    chain_position(chain, base.size) * B
                for r in range(ring.N):
                    total = sum(
                        (c.coeffs[i] * star_layers[r - i]
                         for i in range(r + 1)),
                        zero_tensor(G.fiber.dim, 2)
                    )
                    if r == 0:
                        total = total - base.pairing(*chain) * mult
                    layers[r][start:start + B] = np.ravel(total)
        return cls(G, DglaElement(level, 1, ring, layers))

    def local_product(self, sheet):
        """
        Tensor layers of the deformed product of the chart algebra of a
        level zero sheet.
        """
        G = self.G
        start = _coordinate(G, 2, 0, sheet, (0, 0, 0))
        d = G.fiber.dim
        base = G.base((DeltaSimplex.point(0), sheet))
        out = []
        for r, layer in enumerate(self.mu.layers):
            tensor = np.array(layer[start:start + d ** 3], dtype=object)
            tensor = tensor.reshape((d, d, d))
            if r == 0:
                tensor = tensor + base.pairing(0, 0, 0) * G.fiber.mult
            out.append(tensor)
        return out

    def to_json(self):
        """Sparse JSON form of ``mu``."""
        return {"N": self.mu.ring.N, "mu": element_to_json(self.mu)}


def star_to_gstack(deformation):
    """
    Strict stack of a deformation datum.

    Raises
    ------
    CompatibilityError
        If the local deformations disagree along a monotone map; the
        message names the map.
    NotMaurerCartan
        If a local deformation is not associative.
    """
    G, mu = deformation.G, deformation.mu
    witness = _difference(G.face(mu, 0), G.face(mu, 1))
    if witness:
        (lam, _), chain = locate(G.level(1), 2, witness["coordinate"])
        f = lam.arrows[0]
        raise CompatibilityError(
            f"Deformations disagree along f={list(f.values)} from "
            f"[{f.source}] to [{f.target}] at chain {list(chain)}, "
            f"order {witness['order']}"
        )
    if not is_maurer_cartan(mu):
        raise NotMaurerCartan("The deformation is not associative")
    return GStack.strict(G, mu)


def gstack_to_star(s):
    """Deformation datum of a strict stack."""
    if not s.is_strict():
        raise NotStrict("Only strict stacks are deformation data")
    return DeformationDatum(s.G, s.g0)


# Random stacks
# =============

def random_stack(G, ring, rng, bound=1, base=None):
    """
    Random valid stack: transport of ``base`` (the trivial stack by
    default) along a random 1-morphism. Returns the stack and the
    1-morphism.
    """
    if base is None:
        base = GStack.trivial(G, ring)
    L = random_element(G.level(0), 0, ring, rng, bound)
    lam = normalize_lam(G, random_element(G.level(1), -1, ring, rng, bound))
    return transport_stack(base, L, lam)

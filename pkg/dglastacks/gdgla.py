# pylint: disable=invalid-name

"""
Module for the cosimplicial DGLA ``G(A)`` of a descent datum.

Level ``n`` of ``G(A)`` is the product over simplices
``lambda: [n] -> Delta`` (objects at most ``d_cap``) of the global local
cochains of ``Mat(A)^lambda(0)`` pulled back to nerve level ``lambda(n)``.
Values are locally constant, so every factor splits into blocks
``(lambda, sheet)``, one :class:`~dglastacks.matrixalgebras.BlockAlgebra`
each. Vectors of a level concatenate the
:meth:`~dglastacks.matrixalgebras.LocalCochain.to_vector` coordinates of
the blocks in enumeration order.

Every structure map ``phi_*`` and the contracting homotopy ``h`` only move
coordinates; they are stored as integer gather arrays.

Examples
--------

>>> from dglastacks.coefficients import ArtinRing
>>> from dglastacks.descent import DescentDatum, one_point
>>> G = CosimplicialG(DescentDatum.trivial(one_point(), ArtinRing(2)))
>>> [G.level(n).dimension(-1) for n in range(3)]
[3, 11, 41]
"""

import numpy as np
from sympy.polys.domains import QQ

from dglastacks.descent import SheafData, cech_cosimplicial
from dglastacks.dgla import (
    Dgla, DglaElement, enumerate_first_order_classes, zeros
)
from dglastacks.errors import CapExceeded, DegreeError
from dglastacks.hochschild import diff_matrix
from dglastacks.linalg import ExactMatrix
from dglastacks.matrixalgebras import (
    BlockAlgebra, LocalCochain, chains, local_bracket, local_diff,
    multiplication
)
from dglastacks.simplicial import (
    CosimplicialVS, DeltaSimplex, MonotoneMap, simplices
)


def chain_position(chain, size):
    """Lexicographic position of a chain in :func:`chains`."""
    position = 0
    for i in chain:
        position = position * size + i
    return position


def factor_chain(chain):
    """
    Factor a chain ``L = e o I`` with ``e`` injective, ``I`` surjective.

    Returns the image of ``e`` and the chain ``I``.
    """
    image = sorted(set(chain))
    return image, tuple(image.index(i) for i in chain)


class BlockProductDgla(Dgla):
    """
    Product of the local cochain DGLAs of a list of blocks.

    Parameters
    ----------
    G : CosimplicialG
    blocks : list of (DeltaSimplex, sheet)
    name : str
    n : int
        Cosimplicial level of the simplices.
    """

    def __init__(self, G, blocks, name, n):
        self.G = G
        self.n = n
        self.blocks = list(blocks)
        self.index = {b: i for i, b in enumerate(self.blocks)}
        self.name = name
        self._offsets = {}

    @property
    def degrees(self):
        return list(range(-1, self.G.arity_cap))

    def in_range(self, deg):
        return -1 <= deg <= self.G.arity_cap - 1

    def block_size(self, block, arity):
        """Coordinates of one block at an arity."""
        width = (block[0].objects[0] + 1) * self.G.fiber.dim
        return width ** (arity + 1)

    def offsets(self, arity):
        """Start of every block, followed by the total dimension."""
        if arity not in self._offsets:
            out, total = [], 0
            for block in self.blocks:
                out.append(total)
                total += self.block_size(block, arity)
            out.append(total)
            self._offsets[arity] = out
        return self._offsets[arity]

    def dimension(self, deg):
        if not self.in_range(deg):
            return 0
        return self.offsets(deg + 1)[-1]

    def local(self, deg, u, position):
        """Local cochain of block ``position``, ``None`` when zero."""
        start, stop = self.offsets(deg + 1)[position:position + 2]
        piece = u[start:stop]
        if not any(piece):
            return None
        return LocalCochain.from_vector(
            self.G.base(self.blocks[position]), deg + 1, piece
        )

    def assemble(self, arity, pieces):
        """Vector of a map ``position -> LocalCochain``."""
        offsets = self.offsets(arity)
        out = zeros(offsets[-1])
        for position, D in pieces.items():
            out[offsets[position]:offsets[position + 1]] = D.to_vector()
        return out

    def diff(self, deg, u):
        if not self.in_range(deg + 1):
            return zeros(0)
        pieces = {}
        for position, block in enumerate(self.blocks):
            D = self.local(deg, u, position)
            if D is not None:
                pieces[position] = local_diff(D, self.G.mult(block))
        return self.assemble(deg + 2, pieces)

    def bracket(self, da, u, db, v):
        if not self.in_range(da + db):
            return zeros(0)
        pieces = {}
        for position in range(len(self.blocks)):
            D1 = self.local(da, u, position)
            if D1 is None:
                continue
            D2 = self.local(db, v, position)
            if D2 is not None:
                pieces[position] = local_bracket(D1, D2)
        return self.assemble(da + db + 1, pieces)


class CosimplicialG:
    """
    The truncated cosimplicial DGLA ``G(A)``.

    Parameters
    ----------
    datum : DescentDatum
        Only the constant terms of its values enter.
    n_cap : int
        Highest cosimplicial level.
    d_cap : int
        Largest object ``[q]`` of the simplices ``lambda``.
    arity_cap : int
        Degrees ``-1 .. arity_cap - 1``.
    """

    def __init__(self, datum, n_cap=3, d_cap=1, arity_cap=3):
        self.datum = datum
        self.cover = datum.cover
        self.fiber = datum.fiber
        self.n_cap = n_cap
        self.d_cap = d_cap
        self.arity_cap = arity_cap
        self._levels = {}
        self._bases = {}
        self._mults = {}
        self._gathers = {}

    def _check_level(self, n):
        if n > self.n_cap:
            raise CapExceeded("n_cap", n, self.n_cap)

    def _check_arity(self, arity):
        if not 0 <= arity <= self.arity_cap:
            raise CapExceeded("arity_cap", arity, self.arity_cap)

    def blocks_of(self, lam):
        """Blocks ``(lambda, sheet)`` of one simplex."""
        return [(lam, s) for s in self.cover.level_sheets(lam.objects[-1])]

    def level(self, n):
        """The DGLA ``G^n``."""
        self._check_level(n)
        if n not in self._levels:
            blocks = [
                b for lam in simplices(n, self.d_cap)
                for b in self.blocks_of(lam)
            ]
            self._levels[n] = BlockProductDgla(self, blocks, f"G^{n}", n)
        return self._levels[n]

    def base(self, block):
        """Block algebra ``lambda(0n)^* Mat^lambda(0)`` on a sheet."""
        if block not in self._bases:
            lam, (J, k) = block
            f = lam.arrow(0, lam.n)
            self._bases[block] = BlockAlgebra(
                self.datum, [J[f(a)] for a in range(f.source + 1)],
                self.cover.representative(J, k)
            )
        return self._bases[block]

    def mult(self, block):
        """Product of the block algebra as a local 2-cochain."""
        if block not in self._mults:
            self._mults[block] = multiplication(self.base(block))
        return self._mults[block]

    def pulled_sheet(self, sheet, h):
        """Sheet ``sigma o h`` of ``U_(J o h)`` containing ``sigma``."""
        return _pull_sheet(self.cover, sheet, h)

    # Structure maps
    # --------------

    def gather(self, phi, arity, source, target):
        """
        Gather array of ``phi_*: source -> target``.

        ``(phi_* D)_lambda^(sigma, I) = D_(lambda o phi)^(sigma o h, f o I)``
        with ``f = lambda(0, phi(0))`` and ``h = lambda(phi(m), n)``;
        ``source`` and ``target`` are block products of the simplices
        ``lambda o phi`` and ``lambda``.
        """
        key = (phi, arity, source.name, target.name)
        if key in self._gathers:
            return self._gathers[key]
        B = self.fiber.dim ** (arity + 1)
        t_offsets, s_offsets = target.offsets(arity), source.offsets(arity)
        out = np.zeros(t_offsets[-1], dtype=int)
        within = np.arange(B)
        m = phi.source
        for position, (lam, sheet) in enumerate(target.blocks):
            f = lam.arrow(0, phi(0))
            h = lam.arrow(phi(m), lam.n)
            src = source.index[(lam.precompose(phi),
                                self.pulled_sheet(sheet, h))]
            size_t, size_s = lam.objects[0] + 1, f.target + 1
            for r, chain in enumerate(chains(size_t, arity)):
                image = chain_position([f(i) for i in chain], size_s)
                start = t_offsets[position] + r * B
                out[start:start + B] = s_offsets[src] + image * B + within
        self._gathers[key] = out
        return out

    def push_vector(self, phi, arity, v):
        """``phi_*`` on a coefficient vector of level ``phi.source``."""
        self._check_arity(arity)
        g = self.gather(phi, arity, self.level(phi.source),
                        self.level(phi.target))
        return np.asarray(v, dtype=object)[g]

    def push(self, phi, x):
        """``phi_*`` on an element of ``G^m (x) R``."""
        if x.parent is not self.level(phi.source):
            raise DegreeError(f"Element does not live on level {phi.source}")
        arity = x.degree + 1
        return DglaElement(
            self.level(phi.target), x.degree, x.ring,
            [self.push_vector(phi, arity, layer) for layer in x.layers]
        )

    def image(self, x, values, n):
        """Image of ``x`` along the monotone map ``values`` into ``[n]``."""
        return self.push(
            MonotoneMap(x.parent.n, n, values), x
        )

    def face(self, x, i):
        """``(d_i)_*: G^(n-1) -> G^n``."""
        n = x.parent.n + 1
        return self.push(MonotoneMap.face(n, i), x)

    def degeneracy(self, x, i):
        """``(s_i)_*: G^(n+1) -> G^n``."""
        n = x.parent.n - 1
        return self.push(MonotoneMap.degeneracy(n, i), x)

    # Cochain complexes of fixed arity
    # --------------------------------

    def coboundary(self, n, arity, v):
        """``sum_i (-1)^i (d_i)_* v`` from level ``n`` to ``n + 1``."""
        out = None
        for i in range(n + 2):
            term = self.push_vector(MonotoneMap.face(n + 1, i), arity, v)
            term = term if i % 2 == 0 else -term
            out = term if out is None else out + term
        return out

    def coboundary_matrix(self, n, arity):
        """Sparse matrix of :meth:`coboundary`."""
        rows = {}
        for i in range(n + 2):
            phi = MonotoneMap.face(n + 1, i)
            g = self.gather(phi, arity, self.level(n), self.level(n + 1))
            sign = QQ(1) if i % 2 == 0 else QQ(-1)
            for r, c in enumerate(g):
                row = rows.setdefault(r, {})
                row[int(c)] = row.get(int(c), QQ(0)) + sign
        shape = (self.level(n + 1).offsets(arity)[-1],
                 self.level(n).offsets(arity)[-1])
        return ExactMatrix(rows, shape)

    def degeneracy_matrix(self, n, arity):
        """Stacked ``(s_i)_*: G^n -> G^(n-1)``, ``0 <= i < n``."""
        rows, offset = {}, 0
        for i in range(n):
            phi = MonotoneMap.degeneracy(n - 1, i)
            g = self.gather(phi, arity, self.level(n), self.level(n - 1))
            for r, c in enumerate(g):
                rows[offset + r] = {int(c): QQ(1)}
            offset += len(g)
        return ExactMatrix(rows, (offset, self.level(n).offsets(arity)[-1]))

    def cosimplicial_vs(self, arity, top):
        """``G^(., arity)`` as a dense :class:`CosimplicialVS`."""
        dims = [self.level(n).offsets(arity)[-1] for n in range(top + 1)]

        def dense(phi):
            g = self.gather(phi, arity, self.level(phi.source),
                            self.level(phi.target))
            M = np.full((len(g), dims[phi.source]), QQ(0), dtype=object)
            M[np.arange(len(g)), g] = QQ(1)
            return M

        cofaces = {
            (n, i): dense(MonotoneMap.face(n, i))
            for n in range(1, top + 1) for i in range(n + 1)
        }
        codegeneracies = {
            (n, i): dense(MonotoneMap.degeneracy(n, i))
            for n in range(top) for i in range(n + 1)
        }
        return CosimplicialVS(dims, cofaces, codegeneracies,
                              name=f"G_arity_{arity}")

    # Acyclicity
    # ----------

    def homotopy_gather(self, n, arity):
        """
        Gather array of ``h^n: G^n -> G^(n-1)``.

        ``h(D)_mu^(sigma, e o I) = D_(mu^e)^(sigma, I)`` where ``mu^e``
        prepends the arrow ``e: [s] -> [mu(0)]`` to ``mu``.
        """
        key = ("h", n, arity)
        if key in self._gathers:
            return self._gathers[key]
        source, target = self.level(n), self.level(n - 1)
        B = self.fiber.dim ** (arity + 1)
        t_offsets, s_offsets = target.offsets(arity), source.offsets(arity)
        out = np.zeros(t_offsets[-1], dtype=int)
        within = np.arange(B)
        for position, (mu, sheet) in enumerate(target.blocks):
            size = mu.objects[0] + 1
            for r, chain in enumerate(chains(size, arity)):
                image, I = factor_chain(chain)
                s = len(image) - 1
                e = MonotoneMap(s, mu.objects[0], image)
                nu = DeltaSimplex((s,) + mu.objects, (e,) + mu.arrows)
                src = source.index[(nu, sheet)]
                start = t_offsets[position] + r * B
                out[start:start + B] = \
                    s_offsets[src] + chain_position(I, s + 1) * B + within
        self._gathers[key] = out
        return out


def g_eval(G, lam):
    """
    The DGLA ``G^lambda`` of one simplex, a product over sheets.

    >>> from dglastacks.coefficients import ArtinRing
    >>> from dglastacks.descent import DescentDatum, pseudocircle
    >>> G = CosimplicialG(DescentDatum.trivial(pseudocircle(), ArtinRing(2)))
    >>> g_eval(G, DeltaSimplex.point(1)).dimension(0)
    24
    """
    return BlockProductDgla(G, G.blocks_of(lam), f"G^{lam!r}", lam.n)


def g_map(G, phi, lam, x):
    """
    ``phi_*: G^(lambda o phi) -> G^lambda`` on an element of
    ``g_eval(G, lambda o phi)``.
    """
    target = g_eval(G, lam)
    source = x.parent
    if source.blocks != G.blocks_of(lam.precompose(phi)):
        raise DegreeError("Element does not live on lambda o phi")
    arity = x.degree + 1
    g = G.gather(phi, arity, source, target)
    return DglaElement(target, x.degree, x.ring,
                       [np.asarray(layer, dtype=object)[g]
                        for layer in x.layers])


def acyclicity_homotopy(G, n, arity, v):
    """
    ``h^n(D)_mu = sum_(I, e) e_* D^I_(mu^e)`` on a level ``n`` vector.

    The sum runs over all filtration degrees at once, ``s = s(e o I)``.
    """
    if n < 1:
        raise DegreeError("The homotopy starts at level one")
    return np.asarray(v, dtype=object)[G.homotopy_gather(n, arity)]


def filtration_mask(G, n, arity, s):
    """Mask of the ``F^s`` coordinates ``s(L) >= s`` of ``G^(n, arity)``."""
    level = G.level(n)
    offsets = level.offsets(arity)
    B = G.fiber.dim ** (arity + 1)
    mask = np.zeros(offsets[-1], dtype=bool)
    for position, (lam, _) in enumerate(level.blocks):
        for r, chain in enumerate(chains(lam.objects[0] + 1, arity)):
            if len(factor_chain(chain)[0]) - 1 >= s:
                start = offsets[position] + r * B
                mask[start:start + B] = True
    return mask


def homotopy_identity_defect(G, n, arity, v, s=None):
    """
    Coordinates where ``h d + d h = Id`` fails on a level ``n`` vector.

    Only coordinates ``(lambda, L)`` with ``lambda(01) o m(L)`` injective
    are inspected; with ``s`` given only the ``Gr^s`` coordinates
    ``s(L) = s``. Returns a list of ``(simplex, sheet, chain)``.
    """
    if n < 1:
        raise DegreeError("The identity holds from level one on")
    v = np.asarray(v, dtype=object)
    hd = acyclicity_homotopy(G, n + 1, arity, G.coboundary(n, arity, v))
    dh = G.coboundary(n - 1, arity, acyclicity_homotopy(G, n, arity, v))
    defect = hd + dh - v
    level = G.level(n)
    offsets = level.offsets(arity)
    B = G.fiber.dim ** (arity + 1)
    out = []
    for position, (lam, sheet) in enumerate(level.blocks):
        first = lam.arrows[0]
        for r, chain in enumerate(chains(lam.objects[0] + 1, arity)):
            image, _ = factor_chain(chain)
            if len({first(i) for i in image}) != len(image):
                continue
            if s is not None and len(image) - 1 != s:
                continue
            start = offsets[position] + r * B
            if any(defect[start:start + B]):
                out.append((lam, sheet, chain))
    return out


def rank_oracle(G, arity, p_max):
    """
    Dimensions of ``H^0 .. H^p_max`` of ``G^(., arity)`` on the truncation.
    """
    if p_max + 1 > G.n_cap:
        raise CapExceeded("n_cap", p_max + 1, G.n_cap)
    dims = [G.level(n).offsets(arity)[-1] for n in range(p_max + 1)]
    ranks = [G.coboundary_matrix(n, arity).rank() for n in range(p_max + 1)]
    return [dims[n] - ranks[n] - (ranks[n - 1] if n else 0)
            for n in range(p_max + 1)]


# The equalizer ker(G^0 => G^1)
# =============================

class _UnionFind:

    def __init__(self):
        self.parent = {}

    def find(self, x):
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while x != root:
            self.parent[x], x = root, self.parent.get(x, x)
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller key wins, so roots prefer low levels
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class KernelDgla(Dgla):
    """
    The sub-DGLA ``ker((d_0)_*, (d_1)_*: G^0 -> G^1)``.

    A vector of ``G^0`` lies in the kernel iff it takes equal values at
    ``([q1], sigma, alpha o L)`` and ``([q0], sigma o alpha, L)`` for every
    arrow ``alpha: [q0] -> [q1]``; faces and degeneracies generate these
    identifications. A basis of arity ``k`` is given by the classes of
    coordinates ``(q, sheet, chain)`` times the fiber tensor entries.

    Parameters
    ----------
    datum : DescentDatum
    arity_cap : int
    d_max : int, optional
        Largest object used for the identifications, ``arity_cap`` by
        default.
    """

    def __init__(self, datum, arity_cap=3, d_max=None):
        self.datum = datum
        self.cover = datum.cover
        self.fiber = datum.fiber
        self.arity_cap = arity_cap
        self.d_max = arity_cap if d_max is None else d_max
        self.name = "kernel"
        self._classes = {}
        self._bases = {}
        self._mults = {}

    @property
    def degrees(self):
        return list(range(-1, self.arity_cap))

    def in_range(self, deg):
        return -1 <= deg <= self.arity_cap - 1

    def base(self, block):
        """Block algebra of ``([q], sheet)``."""
        if block not in self._bases:
            _, (J, k) = block
            self._bases[block] = BlockAlgebra(
                self.datum, J, self.cover.representative(J, k)
            )
        return self._bases[block]

    def mult(self, block):
        """Product of a block as a local 2-cochain."""
        if block not in self._mults:
            self._mults[block] = multiplication(self.base(block))
        return self._mults[block]

    def classes(self, arity):
        """
        Classes of one arity.

        Returns ``(representatives, members)``: the representative
        ``(q, sheet, chain)`` of every class (smallest level first) and,
        per class, a map ``(q, sheet) -> chains``.
        """
        if arity in self._classes:
            return self._classes[arity]
        uf = _UnionFind()
        coordinates = []
        for q in range(self.d_max + 1):
            for sheet in self.cover.level_sheets(q):
                for chain in chains(q + 1, arity):
                    coordinates.append((q, sheet, chain))
        arrows = [
            MonotoneMap.face(q, i)
            for q in range(1, self.d_max + 1) for i in range(q + 1)
        ] + [
            MonotoneMap.degeneracy(q, i)
            for q in range(self.d_max) for i in range(q + 1)
        ]
        for alpha in arrows:
            for sheet in self.cover.level_sheets(alpha.target):
                pulled = _pull_sheet(self.cover, sheet, alpha)
                for chain in chains(alpha.source + 1, arity):
                    uf.union(
                        (alpha.source, pulled, chain),
                        (alpha.target, sheet, tuple(alpha(i) for i in chain))
                    )
        roots = {}
        members = []
        representatives = []
        for coordinate in coordinates:
            root = uf.find(coordinate)
            if root not in roots:
                roots[root] = len(members)
                members.append({})
                representatives.append(root)
            q, sheet, chain = coordinate
            members[roots[root]].setdefault((q, sheet), []).append(chain)
        self._classes[arity] = (representatives, members)
        return self._classes[arity]

    def dimension(self, deg):
        if not self.in_range(deg):
            return 0
        arity = deg + 1
        return len(self.classes(arity)[0]) * self.fiber.dim ** (arity + 1)

    def _blocks(self, deg, u):
        """Restrictions of a kernel vector to the blocks it touches."""
        arity = deg + 1
        B = self.fiber.dim ** (arity + 1)
        shape = (self.fiber.dim,) * (arity + 1)
        _, members = self.classes(arity)
        pieces = {}
        for c, group in enumerate(members):
            values = u[c * B:(c + 1) * B]
            if not any(values):
                continue
            tensor = np.array(values, dtype=object).reshape(shape)
            for (q, sheet), chain_list in group.items():
                block = pieces.setdefault((q, sheet), {})
                for chain in chain_list:
                    block[chain] = tensor
        return pieces

    def _read(self, arity, values):
        """Kernel vector from block cochains evaluated at representatives."""
        B = self.fiber.dim ** (arity + 1)
        representatives, _ = self.classes(arity)
        out = zeros(len(representatives) * B)
        for c, (q, sheet, chain) in enumerate(representatives):
            D = values.get((q, sheet))
            if D is not None and chain in D.components:
                out[c * B:(c + 1) * B] = D.components[chain].ravel()
        return out

    def diff(self, deg, u):
        if not self.in_range(deg + 1):
            return zeros(0)
        values = {}
        for block, components in self._blocks(deg, u).items():
            D = LocalCochain(self.base(block), deg + 1, components)
            values[block] = local_diff(D, self.mult(block))
        return self._read(deg + 2, values)

    def bracket(self, da, u, db, v):
        if not self.in_range(da + db):
            return zeros(0)
        first, second = self._blocks(da, u), self._blocks(db, v)
        values = {}
        for block, components in first.items():
            if block not in second:
                continue
            base = self.base(block)
            values[block] = local_bracket(
                LocalCochain(base, da + 1, components),
                LocalCochain(base, db + 1, second[block])
            )
        return self._read(da + db + 1, values)


def _pull_sheet(cover, sheet, alpha):
    J, k = sheet
    Ja = tuple(J[alpha(a)] for a in range(alpha.source + 1))
    return Ja, cover.sheet_of(Ja, cover.representative(J, k))


def kernel_basis(datum, arity, d_max=None):
    """
    Classes spanning ``ker(G^0 => G^1)`` at an arity.

    Each entry is the list of coordinates ``(q, sheet, chain)`` of a class;
    the kernel is spanned by the class indicators times fiber tensors.

    >>> from dglastacks.coefficients import ArtinRing
    >>> from dglastacks.descent import DescentDatum, one_point
    >>> len(kernel_basis(DescentDatum.trivial(one_point(), ArtinRing(2)), 1))
    1
    """
    K = KernelDgla(datum, arity_cap=max(arity, 1),
                   d_max=d_max if d_max is not None else arity + 1)
    _, members = K.classes(arity)
    return [
        [(q, sheet, chain) for (q, sheet), chain_list in group.items()
         for chain in chain_list]
        for group in members
    ]


def classify_first_order(d, arity_cap=3):
    """
    First-order deformation classes: a basis of ``H^1`` of the kernel DGLA.

    Returns a dictionary with the dimension and the class representatives
    (kernel coefficient vectors).
    """
    K = KernelDgla(d, arity_cap=arity_cap)
    basis = enumerate_first_order_classes(K)
    return {"dimension": len(basis), "basis": basis, "dgla": K}


def cech_hochschild_total(d, degree):
    """
    ``H^degree`` of the total complex of ``C^p(U; C^q(J))``.

    Differential ``d_cech (x) 1 + (-1)^p 1 (x) delta``; Hochschild
    cochains are unnormalized.
    """
    cover, fiber = d.cover, d.fiber
    V = cech_cosimplicial(cover, SheafData.constant(cover.space), degree + 1)
    cech = [
        ExactMatrix.from_dense(V.differential_matrix(p), ncols=V.dims[p])
        for p in range(degree + 1)
    ]
    hoch = [diff_matrix(fiber, q) for q in range(degree + 1)]
    hdim = [fiber.dim ** (q + 1) for q in range(degree + 2)]

    def layout(m):
        out, total = {}, 0
        for p in range(m + 1):
            out[p] = total
            total += V.dims[p] * hdim[m - p]
        return out, total

    def total_matrix(m):
        source, ncols = layout(m)
        target, nrows = layout(m + 1)
        rows = {}

        def add(r, c, value):
            row = rows.setdefault(r, {})
            row[c] = row.get(c, QQ(0)) + value

        for p in range(m + 1):
            q = m - p
            sign = QQ(1) if p % 2 == 0 else QQ(-1)
            for i, row in cech[p].rows.items():
                for j, value in row.items():
                    for y in range(hdim[q]):
                        add(target[p + 1] + i * hdim[q] + y,
                            source[p] + j * hdim[q] + y, value)
            for y2, row in hoch[q].rows.items():
                for y, value in row.items():
                    for x in range(V.dims[p]):
                        add(target[p] + x * hdim[q + 1] + y2,
                            source[p] + x * hdim[q] + y, sign * value)
        return ExactMatrix(rows, (nrows, ncols))

    dim = layout(degree)[1]
    incoming = total_matrix(degree - 1).rank() if degree > 0 else 0
    return dim - total_matrix(degree).rank() - incoming

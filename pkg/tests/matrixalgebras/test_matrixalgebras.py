"""
Module to gather tests of block algebras and local cochains.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest
from sympy.polys.domains import QQ

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import (
    DescentDatum, coboundary, datum_from_sheet_cocycle, one_point,
    pseudocircle, random_level1
)
from dglastacks.errors import CompatibilityError, InvalidDatum
from dglastacks.hochschild import (
    HochschildCochain, diff_tensor, dual_numbers, hochschild_cohomology,
    hochschild_diff, matrices_2x2, normalize_project, random_cochain
)
from dglastacks.matrixalgebras import (
    LocalCochain, chain_of_blocks, comb_restrict_algebra,
    comb_restrict_cochain, cotrace, cotrace_image_dimension,
    filtration_project, local_cohomology, local_diff, matrix_algebra
)
from dglastacks.simplicial import MonotoneMap


def block_base(fiber=None):
    """The block algebra ``Mat^1`` of the trivial datum on a point."""
    d = DescentDatum.trivial(one_point(), ArtinRing(1), fiber)
    return matrix_algebra(d, 1).stalk(((0, 0), 0))


def random_local(base, arity, rng):
    """Random local cochain with small integer entries."""
    dim = base.fiber.dim
    components = {}
    for chain in np.ndindex(*(base.size,) * (arity + 1)):
        values = rng.integers(-2, 3, dim ** (arity + 1))
        components[chain] = np.array(
            [QQ(int(v)) for v in values], dtype=object
        ).reshape((dim,) * (arity + 1))
    return LocalCochain(base, arity, components)


class TestBlockAlgebras(object):
    """Class to bundle the tests of ``Mat(A)^p``."""

    def test_laws_on_every_sheet(self):
        """Twisted block algebras of valid data are unital associative."""
        cover, ring = pseudocircle(), ArtinRing(1)
        values = coboundary(cover, ring,
                            random_level1(cover, ring,
                                          np.random.default_rng(0)))
        d = datum_from_sheet_cocycle(cover, ring, values, dual_numbers())
        for p in range(2):
            assert matrix_algebra(d, p).check() == {}

    def test_stalk_dimension(self):
        """``Mat^1`` with fiber ``J`` has dimension ``4 dim J``."""
        base = block_base(dual_numbers())
        assert base.to_algebra().dim == 8

    def test_combinatorial_restriction(self):
        """Restriction along ``[0] -> [1]`` keeps one block, iso is Id."""
        base = block_base(dual_numbers())
        face = MonotoneMap.face(1, 1)
        restricted, iso = comb_restrict_algebra(face, base)
        assert restricted == base.restrict(face)
        assert restricted.size == 1
        assert iso.shape == (2, 2)
        assert list(iso.to_dense().ravel()) == [1, 0, 0, 1]


class TestLocalCochains(object):
    """Class to bundle the tests of local Hochschild cochains."""

    def test_blocks(self):
        """Non composable blocks have no chain."""
        assert chain_of_blocks([(0, 1), (1, 1)]) == (0, 1, 1)
        with pytest.raises(CompatibilityError):
            chain_of_blocks([(0, 1), (0, 1)])

    def test_diff_squared(self):
        """``delta^2 = 0`` on local cochains."""
        rng = np.random.default_rng(9)
        base = block_base()
        for arity in range(3):
            D = random_local(base, arity, rng)
            assert local_diff(local_diff(D)).is_zero()

    def test_diff_matches_full_algebra(self):
        """The local differential is the Hochschild differential of Mat."""
        rng = np.random.default_rng(10)
        base = block_base()
        mult = base.to_algebra().mult
        D = random_local(base, 1, rng)
        lhs = local_diff(D).to_full_tensor()
        rhs = diff_tensor(mult, D.to_full_tensor())
        assert all(a == b for a, b in zip(lhs.flat, rhs.flat))

    def test_vector_form(self):
        """Coefficient vectors rebuild the cochain."""
        base = block_base()
        D = random_local(base, 2, np.random.default_rng(3))
        assert LocalCochain.from_vector(base, 2, D.to_vector()) == D

    def test_filtration(self):
        """``F^1`` drops constant chains."""
        base = block_base()
        one = np.array([QQ(1)], dtype=object).reshape(1, 1)
        D = LocalCochain(base, 1, {(0, 0): one, (0, 1): one})
        upper, graded = filtration_project(D, 1)
        assert sorted(upper.components) == [(0, 1)]
        assert sorted(graded.components) == [(0, 1)]

    def test_restriction_along_face(self):
        """Restriction along ``[0] -> [1]`` keeps the ``(0, 0)`` block."""
        base = block_base()
        one = np.array([QQ(1)], dtype=object).reshape(1, 1)
        two = np.array([QQ(2)], dtype=object).reshape(1, 1)
        D = LocalCochain(base, 1, {(0, 0): one, (0, 1): two})
        restricted = comb_restrict_cochain(MonotoneMap.face(1, 1), D)
        assert restricted.base.size == 1
        assert restricted.component((0, 0))[0, 0] == QQ(1)

    def test_local_cohomology(self):
        """Local cochains of ``Mat_2(Q)`` compute ``HH(Q)``."""
        assert local_cohomology(block_base(), 1) == [1, 0]

    @pytest.mark.parametrize("p", [
        0, 1, pytest.param(2, marks=pytest.mark.slow)
    ])
    def test_cotrace_isomorphism(self, p):
        """The cotrace is an isomorphism ``HH(J) -> H(Mat_(p+1)(J))``."""
        J = dual_numbers()
        d = DescentDatum.trivial(one_point(), ArtinRing(1), J)
        A = matrix_algebra(d, p)
        base = A.stalk(A.sheets()[0])
        assert base.size == p + 1
        expected = hochschild_cohomology(J, 2)["normalized"]
        assert expected == [2, 1, 1]
        assert local_cohomology(base, 2) == expected
        images = [cotrace_image_dimension(base, n) for n in range(3)]
        assert images == expected


class TestCotrace(object):
    """Class to bundle the tests of the cotrace."""

    @pytest.mark.parametrize("arity", [0, 1, 2])
    def test_chain_map(self, arity):
        """``[m, cotr D] = cotr(delta D)``."""
        base = block_base(dual_numbers())
        D = normalize_project(
            random_cochain(dual_numbers(), arity, np.random.default_rng(arity))
        )
        assert local_diff(cotrace(D, base)) == cotrace(hochschild_diff(D), base)

    def test_needs_normalized_cochain(self):
        """Cochains that see the unit are rejected."""
        base = block_base(dual_numbers())
        D = HochschildCochain.zero(dual_numbers(), 1)
        D.tensor[0, 0] = QQ(1)
        with pytest.raises(InvalidDatum):
            cotrace(D, base)

    def test_needs_commutative_fiber(self):
        """The cotrace is defined for commutative fibers only."""
        d = DescentDatum.trivial(one_point(), ArtinRing(1), matrices_2x2())
        base = matrix_algebra(d, 1).stalk(((0, 0), 0))
        D = HochschildCochain.zero(matrices_2x2(), 1)
        with pytest.raises(InvalidDatum):
            cotrace(D, base)

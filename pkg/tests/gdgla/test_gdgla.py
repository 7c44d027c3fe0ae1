"""
Module to gather tests of the cosimplicial DGLA of a descent datum.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import (
    DescentDatum, circle3, discrete, one_point, pseudocircle
)
from dglastacks.dgla import DglaElement, random_element
from dglastacks.errors import CapExceeded, DegreeError
from dglastacks.gdgla import (
    CosimplicialG, KernelDgla, acyclicity_homotopy, cech_hochschild_total,
    classify_first_order, filtration_mask, g_eval, g_map,
    homotopy_identity_defect, kernel_basis, rank_oracle
)
from dglastacks.hochschild import dual_numbers
from dglastacks.simplicial import DeltaSimplex, MonotoneMap


def point_G(fiber=None):
    """``G(A)`` of the trivial datum on a point."""
    d = DescentDatum.trivial(one_point(), ArtinRing(2), fiber)
    return CosimplicialG(d, n_cap=3, d_cap=1, arity_cap=2)


class TestCosimplicialStructure(object):
    """Class to bundle the tests of the structure maps."""

    @pytest.mark.parametrize("arity", [0, 1])
    def test_cosimplicial_identities(self, arity):
        """Faces and degeneracies satisfy the cosimplicial identities."""
        assert point_G().cosimplicial_vs(arity, 2).validate() == []

    def test_coboundary_squared(self):
        """``d d = 0`` between levels zero and two."""
        G = point_G()
        rng = np.random.default_rng(0)
        dim = G.level(0).offsets(1)[-1]
        v = np.array([int(c) for c in rng.integers(-2, 3, dim)],
                     dtype=object)
        assert not any(G.coboundary(1, 1, G.coboundary(0, 1, v)))

    def test_face_of_element(self):
        """``(d_0)_*`` and ``(d_1)_*`` agree on constants of a point."""
        G = point_G()
        R = ArtinRing(2)
        x = DglaElement.basis(G.level(0), 0, 0, R)
        assert G.face(x, 0).parent is G.level(1)
        assert G.degeneracy(G.face(x, 0), 0) == x

    def test_caps(self):
        """Levels and arities beyond the caps raise."""
        G = point_G()
        with pytest.raises(CapExceeded):
            G.level(4)
        with pytest.raises(CapExceeded):
            G.push_vector(None, 5, [])
        with pytest.raises(DegreeError):
            acyclicity_homotopy(G, 0, 0, [])

    def test_simplex_maps(self):
        """Pushing along the identity of ``[0]`` changes nothing."""
        G = point_G()
        lam = DeltaSimplex.point(1)
        x = random_element(g_eval(G, lam), 0, ArtinRing(2),
                           np.random.default_rng(3), maximal=False)
        y = g_map(G, MonotoneMap.identity(0), lam, x)
        assert y.parent.blocks == x.parent.blocks
        assert [list(a) for a in y.layers] == [list(a) for a in x.layers]
        z = random_element(g_eval(G, DeltaSimplex.point(0)), 0, ArtinRing(2),
                           np.random.default_rng(3))
        with pytest.raises(DegreeError):
            g_map(G, MonotoneMap.identity(0), lam, z)


def trivial_G(cover, N=2, fiber=None):
    """``G(A)`` of the trivial datum on ``cover``, up to arity two."""
    d = DescentDatum.trivial(cover(), ArtinRing(N), fiber)
    return CosimplicialG(d, n_cap=3, d_cap=1, arity_cap=2)


def graded_defects(G, n, arity, seed):
    """Defects on ``Gr^s`` of random level ``n`` vectors in ``F^s``."""
    rng = np.random.default_rng([seed, n, arity])
    dim = G.level(n).offsets(arity)[-1]
    out = []
    for s in range(arity + 1):
        v = np.array([int(c) for c in rng.integers(-2, 3, dim)],
                     dtype=object)
        v = np.where(filtration_mask(G, n, arity, s), v, 0)
        out += homotopy_identity_defect(G, n, arity, v, s)
    return out


class TestAcyclicity(object):
    """Class to bundle the tests of the contracting homotopy."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_homotopy_identity(self, seed):
        """``h d + d h = Id`` on injective coordinates at level one."""
        G = trivial_G(pseudocircle)
        rng = np.random.default_rng(seed)
        dim = G.level(1).offsets(0)[-1]
        v = np.array([int(c) for c in rng.integers(-2, 3, dim)],
                     dtype=object)
        assert homotopy_identity_defect(G, 1, 0, v) == []

    @pytest.mark.parametrize("cover", [discrete, pseudocircle, circle3])
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("arity", [0, 1])
    def test_graded_identity(self, cover, n, arity):
        """The identity holds on ``Gr^s`` for vectors in ``F^s``."""
        assert graded_defects(trivial_G(cover), n, arity, 0) == []

    @pytest.mark.slow
    @pytest.mark.parametrize("cover", [discrete, pseudocircle, circle3])
    @pytest.mark.parametrize("n", [1, 2])
    def test_graded_identity_arity_two(self, cover, n):
        """The identity holds on ``Gr^s`` in arity two."""
        assert graded_defects(trivial_G(cover), n, 2, 1) == []

    def test_filtration_mask(self):
        """``F^0`` is everything and arity zero has no ``F^1``."""
        G = trivial_G(pseudocircle)
        assert filtration_mask(G, 1, 1, 0).all()
        assert not filtration_mask(G, 1, 0, 1).any()
        assert filtration_mask(G, 1, 1, 1).any()

    @pytest.mark.parametrize("cover", [discrete, pseudocircle, circle3])
    def test_rank_oracle(self, cover):
        """Arity zero has no higher cohomology on the truncation."""
        G = trivial_G(cover)
        assert rank_oracle(G, 0, 2)[1:] == [0, 0]
        with pytest.raises(CapExceeded):
            rank_oracle(G, 0, 3)

    @pytest.mark.slow
    @pytest.mark.parametrize("cover", [discrete, pseudocircle])
    @pytest.mark.parametrize("arity", [1, 2])
    def test_rank_oracle_arities(self, cover, arity):
        """Higher arities have no higher cohomology on the truncation."""
        assert rank_oracle(trivial_G(cover), arity, 2)[1:] == [0, 0]


class TestKernel(object):
    """Class to bundle the tests of the equalizer DGLA."""

    def test_kernel_of_point(self):
        """On a point the kernel has one class per arity."""
        d = DescentDatum.trivial(one_point(), ArtinRing(2))
        assert len(kernel_basis(d, 0)) == 1
        assert len(kernel_basis(d, 2)) == 1
        K = KernelDgla(d, arity_cap=2)
        assert [K.dimension(k) for k in (-1, 0, 1)] == [1, 1, 1]

    def test_first_order_classes(self):
        """First-order classes of ``Q[x]/(x^2)`` on a point: ``HH^2``."""
        d = DescentDatum.trivial(one_point(), ArtinRing(2), dual_numbers())
        result = classify_first_order(d, arity_cap=3)
        assert result["dimension"] == 1
        assert cech_hochschild_total(d, 2) == 1

    @pytest.mark.slow
    def test_first_order_classes_circle(self):
        """On the pseudocircle the classes match the total complex."""
        d = DescentDatum.trivial(pseudocircle(), ArtinRing(2), dual_numbers())
        result = classify_first_order(d, arity_cap=3)
        assert result["dimension"] == cech_hochschild_total(d, 2) == 2

    @pytest.mark.parametrize("degree, expected", [(0, 1), (1, 1), (2, 0)])
    def test_total_complex(self, degree, expected):
        """Total cohomology of the pseudocircle with fiber ``Q``."""
        d = DescentDatum.trivial(pseudocircle(), ArtinRing(2))
        assert cech_hochschild_total(d, degree) == expected

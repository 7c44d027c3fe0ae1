"""
Module to gather tests of the simplex category and the hat construction.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest
from sympy.polys.domains import QQ

from dglastacks.errors import CapExceeded
from dglastacks.simplicial import (
    CosimplicialVS, DeltaSimplex, HatCochain, MonotoneMap, all_monotone_maps,
    cochain_differential, concat, hat_differential, homotopy_defect,
    normalized_part, simplices, upsilon
)


class TestMonotoneMaps(object):
    """Class to bundle the tests of monotone maps."""

    @pytest.mark.parametrize("m, n", [(0, 2), (2, 1), (2, 3), (3, 3)])
    def test_generators_compose_to_map(self, m, n):
        """Degeneracies then faces recompose every monotone map."""
        for f in all_monotone_maps(m, n):
            result = MonotoneMap.identity(m)
            for g in f.generators():
                result = g.compose(result)
            assert result == f

    def test_simplicial_identity(self):
        """``s_j d_j = id``."""
        for j in range(3):
            s = MonotoneMap.degeneracy(2, j)
            d = MonotoneMap.face(3, j)
            assert s.compose(d) == MonotoneMap.identity(2)

    def test_invalid_maps(self):
        """Non monotone values are rejected."""
        with pytest.raises(ValueError):
            MonotoneMap(1, 1, [1, 0])
        with pytest.raises(ValueError):
            MonotoneMap(1, 1, [0, 2])

    def test_simplices_count(self):
        """Objects ``[0], [1]``: there are ``1 + 2 + 1 + 3`` 1-simplices."""
        assert len(list(simplices(0, 1))) == 2
        assert len(list(simplices(1, 1))) == 7

    def test_upsilon_of_point(self):
        """``upsilon`` of a 0-simplex picks the top vertex."""
        assert upsilon(DeltaSimplex.point(2)).values == (2,)

    def test_concatenation(self):
        """``[0] -> [1]`` followed by ``[1] -> [2]`` is a 2-simplex."""
        lam1 = DeltaSimplex.arrow_simplex(MonotoneMap.face(1, 0))
        lam2 = DeltaSimplex.arrow_simplex(MonotoneMap.face(2, 1))
        lam = concat(lam1, lam2)
        assert list(lam.objects) == [0, 1, 2]
        assert lam.arrow(0, 2) == \
            MonotoneMap.face(2, 1).compose(MonotoneMap.face(1, 0))
        with pytest.raises(ValueError):
            concat(lam2, lam1)


class TestCosimplicial(object):
    """Class to bundle the tests of cosimplicial vector spaces."""

    def test_constant_space(self):
        """The constant space has ``H^0 = Q`` and nothing else."""
        V = CosimplicialVS.constant(1, 3)
        assert V.validate() == []
        assert V.cohomology(2) == [1, 0, 0]
        assert V.normalized_cohomology(2) == [1, 0, 0]

    def test_chain_diagram_limit(self):
        """The replacement of ``Q^2 -> Q`` has ``H^0 = Q^2``."""
        M = np.array([[QQ(1), QQ(-1)]], dtype=object)
        V = CosimplicialVS.chain_diagram([M], 2)
        assert V.validate() == []
        assert V.cohomology(1) == [2, 0]

    def test_json(self):
        """Structure maps survive the JSON form."""
        V = CosimplicialVS.random(np.random.default_rng(1), 2)
        W = CosimplicialVS.from_json(V.to_json())
        assert W.to_json() == V.to_json()

    def test_cap(self):
        """Levels above the truncation raise."""
        V = CosimplicialVS.constant(1, 2)
        with pytest.raises(CapExceeded):
            V.dimension(3)

    @pytest.mark.parametrize("seed", [2, 5])
    def test_cochain_differential(self, seed):
        """The alternating coface sum squares to zero."""
        V = CosimplicialVS.random(np.random.default_rng(seed), 3)
        for n in range(2):
            v = np.array([QQ(k + 1) for k in range(V.dimension(n))],
                         dtype=object)
            dv = cochain_differential(V, n, v)
            assert len(dv) == V.dimension(n + 1)
            assert not any(cochain_differential(V, n + 1, dv))

    def test_normalized_projection(self):
        """Degree one of a constant space has no normalized part."""
        V = CosimplicialVS.constant(1, 2)
        normalized, projection = normalized_part(
            V, 1, np.array([QQ(1)], dtype=object))
        assert not normalized
        assert list(projection) == [QQ(0)]


class TestHatConstruction(object):
    """Class to bundle the tests of the hat construction."""

    def test_differential_squares_to_zero(self):
        """``d d f = 0`` at 2-simplices."""
        V = CosimplicialVS.random(np.random.default_rng(8), 2)
        f = HatCochain.random(V, 0, 17)
        ddf = hat_differential(hat_differential(f))
        for lam in list(simplices(2, 1))[:10]:
            assert not any(ddf(lam))

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_homotopy_identity(self, n):
        """``iota pi - Id = s (d h + h d)`` at all simplices on ``[0], [1]``."""
        V = CosimplicialVS.random(np.random.default_rng(n), 3)
        f = HatCochain.random(V, n, 5)
        for lam in simplices(n, 1):
            assert not any(homotopy_defect(f, lam))

    @pytest.mark.parametrize("seed", range(20))
    def test_homotopy_identity_spaces(self, seed):
        """The identity holds on twenty random diagrams up to ``[3]``."""
        V = CosimplicialVS.random(np.random.default_rng([seed, 1]), 3)
        f = HatCochain.random(V, 1, seed)
        for lam in simplices(1, 3):
            assert not any(homotopy_defect(f, lam))

    @pytest.mark.slow
    @pytest.mark.parametrize("n, d_cap", [(2, 3), (3, 2)])
    def test_homotopy_identity_truncation(self, n, d_cap):
        """The identity holds at every simplex of a deeper truncation."""
        V = CosimplicialVS.random(np.random.default_rng(n + 10), 3)
        f = HatCochain.random(V, n, 11)
        count = 0
        for lam in simplices(n, d_cap):
            assert not any(homotopy_defect(f, lam))
            count += 1
        assert count == {(2, 3): 5374, (3, 2): 5071}[n, d_cap]

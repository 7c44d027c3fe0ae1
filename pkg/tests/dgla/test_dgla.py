"""
Module to gather tests of DGLAs and their Deligne 2-groupoids.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest
from sympy.polys.domains import QQ

from dglastacks.coefficients import ArtinRing
from dglastacks.dgla import (
    DglaElement, GaugeTransform, StructureDgla, TwoMorphismElt, abelian,
    bch_product, check_conjugation, endomorphisms,
    enumerate_first_order_classes, extend_mc, gauge_act, heisenberg,
    horizontal_compose, is_maurer_cartan, matrix_representation,
    mc_obstruction, mc_residual, nilpotent_exp, random_element, random_mc,
    tensor_dual_numbers, twisted_bracket, two_morphism_act, upper_triangular,
    validate_dgla, vertical_compose
)
from dglastacks.errors import (
    BaseMismatch, DglaStacksError, DegreeError, NotMaurerCartan
)


def obstructed():
    """``g^1 = Q e``, ``g^2 = Q f`` with ``[e, e] = f`` and ``d = 0``."""
    return StructureDgla(
        {1: 1, 2: 1}, [],
        [{"i": 0, "j": 0, "k": 0, "deg_a": 1, "deg_b": 1, "c": 1}],
        name="obstructed"
    )


class TestStructure(object):
    """Class to bundle the tests of the DGLA axioms."""

    @pytest.mark.parametrize("g", [
        heisenberg(), upper_triangular(3), endomorphisms(),
        endomorphisms(2, 1), tensor_dual_numbers(heisenberg()), obstructed()
    ])
    def test_families_are_dglas(self, g):
        """The structured families satisfy all axioms."""
        assert validate_dgla(g) == []

    def test_non_nilpotent_differential(self):
        """``d^2 != 0`` is reported with its witness."""
        g = abelian({0: 1, 1: 1, 2: 1}, [
            {"deg": 0, "matrix": [[1]]}, {"deg": 1, "matrix": [[1]]}
        ])
        names = [v.name for v in validate_dgla(g)]
        assert names == ["d_squared"]

    def test_degree_bound(self):
        """Degrees below ``-1`` are not allowed."""
        names = [v.name for v in validate_dgla(abelian({-2: 1}))]
        assert names == ["degree_bound"]

    def test_json(self):
        """The JSON form rebuilds the same structure constants."""
        g = heisenberg()
        assert StructureDgla.from_json(g.to_json()).to_json() == g.to_json()


class TestMaurerCartan(object):
    """Class to bundle MC, gauge and BCH tests."""

    def test_gauge_on_abelian(self):
        """``exp X . 0 = -dX`` when the bracket vanishes."""
        g = abelian({0: 1, 1: 1}, [{"deg": 0, "matrix": [[1]]}])
        R = ArtinRing(2)
        X = DglaElement.basis(g, 0, 0, R).shift(1)
        zero = DglaElement(g, 1, R)
        image = gauge_act(X, zero)
        assert image.to_json() == [["0", "-1"]]
        assert is_maurer_cartan(image)
        assert check_conjugation(X, zero, image)

    def test_gauge_needs_maximal_ideal(self):
        """Gauge transformations live in ``g^0 (x) m``."""
        g = heisenberg()
        R = ArtinRing(2)
        with pytest.raises(DglaStacksError):
            GaugeTransform(DglaElement.basis(g, 0, 0, R))
        with pytest.raises(DegreeError):
            mc_residual(DglaElement(g, 0, R))

    def test_bch_inverse(self):
        """``bch(X, -X) = 0`` and ``bch(X, 0) = X``."""
        rng = np.random.default_rng(11)
        g, R = upper_triangular(3), ArtinRing(4)
        X = random_element(g, 0, R, rng)
        assert bch_product(X, -X).is_zero()
        assert bch_product(X, DglaElement(g, 0, R)) == X

    def test_bch_matrix_product(self):
        """``exp bch(X, Y) = exp X exp Y`` for upper triangular matrices."""
        g, R = upper_triangular(3), ArtinRing(3)
        X = DglaElement.basis(g, 0, 0, R).shift(1)
        Y = DglaElement.basis(g, 0, 2, R).shift(1)
        lhs = nilpotent_exp(matrix_representation(bch_product(X, Y)))
        rhs = nilpotent_exp(matrix_representation(X)).dot(
            nilpotent_exp(matrix_representation(Y)))
        assert all(a == b for a, b in zip(lhs.flat, rhs.flat))

    def test_random_mc(self):
        """Random MC elements solve MC and stay MC under gauge."""
        rng = np.random.default_rng(5)
        g, R = endomorphisms(), ArtinRing(3)
        gamma = random_mc(g, R, rng)
        assert is_maurer_cartan(gamma)
        X = random_element(g, 0, R, rng, bound=1)
        assert is_maurer_cartan(gauge_act(X, gamma))

    def test_obstruction(self):
        """``t e`` solves MC modulo ``t^2`` only, and cannot be extended."""
        g, R = obstructed(), ArtinRing(3)
        gamma = DglaElement.basis(g, 1, 0, R).shift(1)
        assert [str(c) for c in mc_residual(gamma).coeffs] == ["1/2*t^2"]
        obstruction, correction = mc_obstruction(gamma, 2)
        assert list(obstruction) == [QQ(1, 2)]
        assert correction is None
        with pytest.raises(NotMaurerCartan):
            extend_mc(gamma, 2)

    def test_first_order_classes(self):
        """``H^1`` of ``Q -> Q^2`` with ``d = (1, 0)`` is one dimensional."""
        g = abelian({0: 1, 1: 2}, [{"deg": 0, "matrix": [[1], [0]]}])
        basis = enumerate_first_order_classes(g)
        assert len(basis) == 1
        assert list(basis[0]) == [QQ(0), QQ(1)]


class TestTwoMorphisms(object):
    """Class to bundle the tests of 2-morphisms ``exp_gamma g^{-1}``."""

    # ``End(Q -> Q)`` over ``Q[t]/(t^3)`` with the MC elements 0 and t E10
    g, R = endomorphisms(1, 1), ArtinRing(3)
    gamma0 = DglaElement(g, 1, R)
    gamma1 = DglaElement.basis(g, 1, 0, R).shift(1)
    zero = DglaElement(g, 0, R)

    def two_cell(self, base, r=1):
        """``exp_base t^r E01``."""
        log = DglaElement.basis(self.g, -1, 0, self.R).shift(r)
        return TwoMorphismElt(base, log)

    def test_degrees(self):
        """``End^k`` of the two-term complex has the expected dimensions."""
        assert [self.g.dimension(k) for k in (-1, 0, 1)] == [1, 2, 1]
        assert is_maurer_cartan(self.gamma1)

    def test_vertical_inverse(self):
        """A 2-morphism composed with its inverse is the identity."""
        s = self.two_cell(self.gamma0)
        assert vertical_compose(s, s.inverse()).log_part.is_zero()
        assert vertical_compose(s, s).log_part == s.log_part.scale(2)

    def test_action_on_gauge(self):
        """``exp(dt) exp(0)`` is the central ``t Id`` and fixes the base."""
        s = self.two_cell(self.gamma0)
        moved = two_morphism_act(s, self.zero)
        expected = DglaElement.constant(
            self.g, 0, [QQ(1), QQ(1)], self.R).shift(1)
        assert moved.log_part == expected
        assert gauge_act(moved, self.gamma0) == self.gamma0

    def test_horizontal_with_trivial_gauge(self):
        """Along ``exp 0`` horizontal and vertical composition agree."""
        t23 = self.two_cell(self.gamma0)
        t12 = self.two_cell(self.gamma0, 2)
        assert horizontal_compose(t23, t12, self.zero) == \
            vertical_compose(t23, t12)

    def test_base_mismatch(self):
        """Composing over different MC elements raises."""
        s = self.two_cell(self.gamma0)
        u = self.two_cell(self.gamma1)
        with pytest.raises(BaseMismatch):
            vertical_compose(s, u)
        X = DglaElement.basis(self.g, 0, 0, self.R).shift(1)
        with pytest.raises(BaseMismatch):
            horizontal_compose(s, self.two_cell(self.gamma0, 2), X)
        with pytest.raises(BaseMismatch):
            two_morphism_act(s, GaugeTransform(self.zero, self.gamma1))

    def test_twisted_bracket(self):
        """``d E01`` is central, so the twisted bracket vanishes."""
        a = DglaElement.basis(self.g, -1, 0, self.R).shift(1)
        assert twisted_bracket(self.gamma1, a, a).is_zero()
        with pytest.raises(DegreeError):
            twisted_bracket(self.gamma1, self.zero, a)


def twisted_setting(g, seed, N=3):
    """Random MC ``gamma2``, a gauge ``X`` and ``gamma3 = X.gamma2``."""
    R = ArtinRing(N)
    rng = np.random.default_rng(seed)
    gamma2 = random_mc(g, R, rng, bound=1)
    X = random_element(g, 0, R, rng, bound=1)
    return R, rng, gamma2, X, gauge_act(X, gamma2)


class TestTwistedBracket(object):
    """Class to bundle the Lie algebra axioms of ``[a, d_gamma b]``."""

    @pytest.mark.parametrize("g", [
        endomorphisms(2, 2), endomorphisms(2, 1), endomorphisms(1, 2)
    ])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_antisymmetry(self, g, seed):
        """``[a, b]_gamma = -[b, a]_gamma`` as ``g^(-2) = 0``."""
        R, rng, gamma, _, _ = twisted_setting(g, seed)
        a, b = (random_element(g, -1, R, rng) for _ in range(2))
        assert twisted_bracket(gamma, a, b) == -twisted_bracket(gamma, b, a)
        assert twisted_bracket(gamma, a, a).is_zero()

    @pytest.mark.parametrize("g", [
        endomorphisms(2, 2), endomorphisms(2, 1), endomorphisms(1, 2)
    ])
    @pytest.mark.parametrize("seed", [3, 4, 5])
    def test_jacobi(self, g, seed):
        """The twisted bracket satisfies the Jacobi identity."""
        R, rng, gamma, _, _ = twisted_setting(g, seed, N=4)
        a, b, c = (random_element(g, -1, R, rng) for _ in range(3))

        def br(x, y):
            return twisted_bracket(gamma, x, y)

        total = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
        assert total.is_zero()

    @pytest.mark.parametrize("g", [endomorphisms(2, 2), endomorphisms(2, 1)])
    @pytest.mark.parametrize("seed", [6, 7, 8])
    def test_interchange_law(self, g, seed):
        """Horizontal composition of vertical composites interchanges."""
        R, rng, gamma2, X, gamma3 = twisted_setting(g, seed)
        s12, t12 = (TwoMorphismElt(gamma2, random_element(g, -1, R, rng))
                    for _ in range(2))
        s23, t23 = (TwoMorphismElt(gamma3, random_element(g, -1, R, rng))
                    for _ in range(2))
        # source of t23 after s23
        X2 = two_morphism_act(s23, GaugeTransform(X, gamma2)).log_part
        lhs = horizontal_compose(
            vertical_compose(t23, s23), vertical_compose(t12, s12), X
        )
        rhs = vertical_compose(
            horizontal_compose(t23, t12, X2),
            horizontal_compose(s23, s12, X)
        )
        assert lhs == rhs

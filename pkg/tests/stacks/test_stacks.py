"""
Module to gather tests of G-stacks, their morphisms and strictification.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import DescentDatum, one_point, pseudocircle
from dglastacks.dgla import DglaElement, random_element
from dglastacks.errors import (
    CompatibilityError, DegreeError, NotStrict, RingMismatch
)
from dglastacks.gdgla import CosimplicialG
from dglastacks.hochschild import StarProduct, dual_numbers
from dglastacks.stacks import (
    DeformationDatum, GStack, act_2cell, compose_1morphisms, gstack_to_star,
    identity_2cell, identity_morphism, mc_to_strict, morphism_2cells,
    random_stack, star_to_gstack, strict_to_mc, strictify, transport_stack,
    validate_gstack, validate_one_morphism, validate_two_morphism,
    vertical_2cells, zero_element
)


def point_G(N=3, fiber=None, cover=one_point):
    """``G(A)`` of the trivial datum on a point (or another cover)."""
    d = DescentDatum.trivial(cover(), ArtinRing(N), fiber)
    return CosimplicialG(d, n_cap=3, d_cap=1, arity_cap=3)


def deformed_dual_numbers(N, c=1):
    """Star product ``x * x = c t`` on the dual numbers."""
    B = [[["0", "0"], ["0", "0"]], [["0", "0"], [str(c), "0"]]]
    return StarProduct.from_json(dual_numbers(), ArtinRing(N), [B])


class TestGStack(object):
    """Class to bundle the tests of stacks and their validation."""

    def test_trivial(self):
        """The trivial stack is valid and strict."""
        G = point_G()
        s = GStack.trivial(G, ArtinRing(3))
        assert validate_gstack(s) == []
        assert s.is_strict()
        assert validate_one_morphism(identity_morphism(s)) == []

    def test_compose_identities(self):
        """Identities compose to the identity; mismatched ends raise."""
        G = point_G()
        m = identity_morphism(GStack.trivial(G, ArtinRing(3)))
        assert compose_1morphisms(m, m) == m
        other = identity_morphism(GStack.trivial(G, ArtinRing(2)))
        with pytest.raises(CompatibilityError):
            compose_1morphisms(m, other)

    def test_component_degrees(self):
        """Components in the wrong degree are rejected."""
        G = point_G()
        R = ArtinRing(3)
        with pytest.raises(DegreeError):
            GStack(G, zero_element(G, 0, 0, R), zero_element(G, 1, 0, R),
                   zero_element(G, 2, -1, R))
        with pytest.raises(RingMismatch):
            GStack(G, zero_element(G, 0, 1, R), zero_element(G, 1, 0, R),
                   zero_element(G, 2, -1, ArtinRing(2)))

    def test_json(self):
        """A random stack survives its sparse JSON form."""
        G = point_G()
        R = ArtinRing(3)
        s, _ = random_stack(G, R, np.random.default_rng(3))
        assert GStack.from_json(G, R, s.to_json()) == s

    def test_transport(self):
        """Transport along a random 1-morphism gives a valid stack."""
        G = point_G()
        s, morphism = random_stack(G, ArtinRing(3), np.random.default_rng(1))
        assert validate_gstack(s) == []
        assert validate_one_morphism(morphism) == []
        again, step = transport_stack(
            s, zero_element(G, 0, 0, s.ring), zero_element(G, 1, -1, s.ring)
        )
        assert again == s
        assert validate_one_morphism(step) == []

    def test_perturbed_triangle(self):
        """A perturbed ``t`` only breaks the conditions on ``t``."""
        G = point_G()
        R = ArtinRing(3)
        s, _ = random_stack(G, R, np.random.default_rng(4))
        bump = random_element(G.level(2), -1, R, np.random.default_rng(5),
                              bound=2)
        perturbed = GStack(G, s.g0, s.g1, s.g2 + bump)
        assert validate_gstack(s) == []
        names = {v.name for v in validate_gstack(perturbed)}
        assert names
        assert names <= {"two_morphism", "normalized_g2", "cocycle"}

    def test_compose_associative(self):
        """Composition of three transports is associative."""
        G = point_G()
        R = ArtinRing(3)
        rng = np.random.default_rng(6)
        s1, m1 = random_stack(G, R, rng)
        s2, m2 = random_stack(G, R, rng, base=s1)
        _, m3 = random_stack(G, R, rng, base=s2)
        first = compose_1morphisms(compose_1morphisms(m1, m2), m3)
        second = compose_1morphisms(m1, compose_1morphisms(m2, m3))
        assert first == second
        assert validate_one_morphism(first) == []


class TestStrictification(object):
    """Class to bundle the strictification tests."""

    @pytest.mark.parametrize("seed", [0, 1])
    def test_random_stack(self, seed):
        """Strictified random stacks are valid and strict."""
        G = point_G()
        s, _ = random_stack(G, ArtinRing(3), np.random.default_rng(seed))
        strict, morphism, trace = strictify(s, check=True)
        assert strict.is_strict()
        assert validate_gstack(strict) == []
        assert validate_one_morphism(morphism) == []
        assert all(entry["phase"] in ("two_morphism", "gauge")
                   for entry in trace)

    def test_already_strict(self):
        """A strict stack needs no rounds."""
        G = point_G()
        s = GStack.trivial(G, ArtinRing(3))
        strict, _, trace = strictify(s)
        assert trace == []
        assert strict == s

    def test_kernel_round_trip(self):
        """Strict stacks and kernel MC elements correspond."""
        G = point_G()
        s, _ = random_stack(G, ArtinRing(3), np.random.default_rng(2))
        strict, _, _ = strictify(s)
        assert mc_to_strict(G, strict_to_mc(strict)) == strict

    @pytest.mark.parametrize("seed", [0, 1])
    def test_circle(self, seed):
        """Random stacks on the two-chart pseudocircle strictify."""
        G = point_G(cover=pseudocircle)
        s, _ = random_stack(G, ArtinRing(3), np.random.default_rng(seed))
        strict, morphism, _ = strictify(s, check=True)
        assert strict.is_strict()
        assert validate_gstack(strict) == []
        assert morphism.source == s

    @pytest.mark.parametrize("seed", [2, 3])
    def test_circle_deformation(self, seed):
        """Transports of a deformation of the dual numbers strictify."""
        G = point_G(fiber=dual_numbers(), cover=pseudocircle)
        base = star_to_gstack(
            DeformationDatum.from_star(G, deformed_dual_numbers(3))
        )
        s, _ = random_stack(G, ArtinRing(3), np.random.default_rng(seed),
                            base=base)
        assert validate_gstack(s) == []
        strict, morphism, _ = strictify(s, check=True)
        assert strict.is_strict()
        assert validate_gstack(strict) == []
        assert validate_one_morphism(morphism) == []
        assert not strict.g0.is_zero()

    def test_non_strict(self):
        """Only strict stacks map to kernel elements."""
        G = point_G()
        R = ArtinRing(3)
        X = DglaElement.basis(G.level(1), 0, 0, R).shift(1)
        s = GStack(G, zero_element(G, 0, 1, R), X, zero_element(G, 2, -1, R))
        assert not s.is_strict()
        with pytest.raises(NotStrict):
            strict_to_mc(s)
        with pytest.raises(NotStrict):
            gstack_to_star(s)


class TestDeformationData(object):
    """Class to bundle the star product to stack dictionary tests."""

    def test_star_to_gstack(self):
        """``x * x = t`` on every chart gives a strict valid stack."""
        G = point_G(2, dual_numbers())
        deformation = DeformationDatum.from_star(G, deformed_dual_numbers(2))
        s = star_to_gstack(deformation)
        assert s.is_strict()
        assert validate_gstack(s) == []
        assert gstack_to_star(s).mu == deformation.mu

    def test_local_product(self):
        """The chart product is recovered with its classical part."""
        G = point_G(2, dual_numbers())
        deformation = DeformationDatum.from_star(G, deformed_dual_numbers(2))
        sheet = G.cover.level_sheets(0)[0]
        layers = deformation.local_product(sheet)
        assert layers[1][1, 1, 0] == 1
        assert layers[0][0, 1, 1] == 1

    def test_ring_mismatch(self):
        """Star products over another ring are rejected."""
        G = point_G(2, dual_numbers())
        with pytest.raises(RingMismatch):
            DeformationDatum.from_star(G, deformed_dual_numbers(3))


class TestTwoCells(object):
    """Class to bundle the 2-morphism tests."""

    def setting(self, seed):
        G = point_G()
        rng = np.random.default_rng(seed)
        s, _ = random_stack(G, ArtinRing(3), rng)
        phi = random_element(G.level(0), -1, s.ring, rng, bound=1)
        return s, phi

    def test_identity(self):
        """The identity 2-cell satisfies the 2-morphism conditions."""
        s, _ = self.setting(0)
        assert validate_two_morphism(identity_2cell(identity_morphism(s))) \
            == []

    def test_act(self):
        """Acting with a 2-cell gives a 2-morphism ``m => m'``."""
        s, phi = self.setting(1)
        m = identity_morphism(s)
        cell = morphism_2cells("act", phi, m)
        assert cell.source == m
        assert validate_two_morphism(cell) == []

    def test_vertical_unit(self):
        """Identity 2-cells are units of vertical composition."""
        s, phi = self.setting(2)
        cell = act_2cell(phi, identity_morphism(s))
        composed = morphism_2cells("vertical", cell,
                                   identity_2cell(cell.target))
        assert composed.phi == cell.phi
        assert composed.target == cell.target

    def test_mismatch(self):
        """Only composable 2-cells compose."""
        s, phi = self.setting(3)
        cell = act_2cell(phi, identity_morphism(s))
        other = identity_2cell(
            identity_morphism(GStack.trivial(s.G, ArtinRing(2)))
        )
        with pytest.raises(CompatibilityError):
            vertical_2cells(cell, other)
        with pytest.raises(DegreeError):
            morphism_2cells("horizontal", cell, cell)

"""
Module to gather tests of finite spaces, Cech cohomology and descent data.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import (
    Cover, DescentDatum, FiniteSpace, NervePoint, SheafData, cech_cohomology,
    circle3, coboundary, datum_from_sheet_cocycle, datum_isomorphism,
    discrete, one_point, pseudocircle, random_level1, sign_cocycle_datum,
    sphere, twisted_form_class, validate_descent_datum
)
from dglastacks.errors import InvalidDatum


class TestFiniteSpaces(object):
    """Class to bundle the tests of finite spaces and covers."""

    def test_antisymmetry(self):
        """``a <= b <= a`` is not a partial order."""
        with pytest.raises(InvalidDatum):
            FiniteSpace(["a", "b"], [["a", "b"], ["b", "a"]])

    def test_charts_must_be_open(self):
        """Charts are down-sets."""
        space = pseudocircle().space
        with pytest.raises(InvalidDatum):
            Cover(space, [["c"], ["a", "b", "d"]])

    def test_sheets(self):
        """``U_0 cap U_1`` of the pseudocircle has two sheets."""
        cover = pseudocircle()
        assert len(cover.sheets((0, 1))) == 2
        assert len(cover.sheets((0, 0))) == 1

    def test_nerve_point_key(self):
        """Keys parse back to the same nerve point."""
        point = NervePoint("a", (0, 1, 1))
        assert NervePoint.from_key(point.key()) == point
        assert point.face(2) == NervePoint("a", (0, 1))


class TestCech(object):
    """Class to bundle the Cech cohomology tests."""

    @pytest.mark.parametrize("cover, expected", [
        (one_point(), [1, 0, 0]),
        (discrete(3), [3, 0, 0]),
        (pseudocircle(), [1, 1, 0]),
        (circle3(), [1, 1, 0]),
        (sphere(), [1, 0, 1]),
    ])
    def test_constant_coefficients(self, cover, expected):
        """Cohomology of the models with rational coefficients."""
        sheaf = SheafData.constant(cover.space)
        assert cech_cohomology(cover, sheaf, 2) == expected

    def test_json_cover(self):
        """Explicit covers and models agree."""
        data = pseudocircle().to_json()
        cover = Cover.from_json(data)
        assert cover.to_json() == data
        assert Cover.from_json({"model": "sphere"}).name == "sphere"


class TestDescentData(object):
    """Class to bundle the tests of descent data and their classes."""

    def test_trivial_datum(self):
        """The trivial datum is valid with trivial class."""
        d = DescentDatum.trivial(pseudocircle(), ArtinRing(3))
        assert validate_descent_datum(d) == []
        result = twisted_form_class(d)
        assert result.trivial
        assert result.certificate is None

    def test_invertibility(self):
        """Values in the maximal ideal are rejected."""
        R = ArtinRing(2)
        d = DescentDatum(pseudocircle(), R,
                         {NervePoint("a", (0, 1)): R.t()})
        names = [v.name for v in validate_descent_datum(d)]
        assert names == ["invertibility"]
        with pytest.raises(InvalidDatum):
            twisted_form_class(d)

    def test_domain(self):
        """Values outside of ``U_J`` are rejected."""
        R = ArtinRing(2)
        d = DescentDatum(pseudocircle(), R,
                         {NervePoint("c", (1, 1)): R.one()})
        assert [v.name for v in validate_descent_datum(d)] == ["domain"]

    def test_locally_constant(self):
        """Values must be constant on the sheets of ``U_J``."""
        R = ArtinRing(1)
        d = DescentDatum(circle3(), R,
                         {NervePoint("y0", (0, 0)): R.element([2])})
        names = {v.name for v in validate_descent_datum(d)}
        assert "locally_constant" in names

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_coboundary_is_trivial(self, N):
        """Coboundaries are trivialized by a ``phi`` with ``d(phi) = c``."""
        cover, ring = circle3(), ArtinRing(N)
        phi = random_level1(cover, ring, np.random.default_rng(N))
        values = coboundary(cover, ring, phi)
        result = twisted_form_class(
            datum_from_sheet_cocycle(cover, ring, values))
        assert result.trivial
        assert coboundary(cover, ring, result.trivialization) == values

    def test_sign_class_on_sphere(self):
        """The face sign cocycle is nontrivial on the sphere."""
        d = sign_cocycle_datum(sphere(), ArtinRing(1))
        assert validate_descent_datum(d) == []
        result = twisted_form_class(d)
        assert not result.trivial
        assert result.certificate["factor"] == "sign"
        assert result.to_json(d.cover)["trivialization"] is None

    def test_isomorphism(self):
        """A datum is isomorphic to itself by ``phi = 1``."""
        d = DescentDatum.trivial(pseudocircle(), ArtinRing(2))
        phi = datum_isomorphism(d, d)
        assert all(v == 1 for v in phi.values())

    def test_json(self):
        """The JSON form rebuilds the datum."""
        R = ArtinRing(2)
        d = DescentDatum(pseudocircle(), R,
                         {NervePoint("a", (0, 1)): R.element([2, 1])})
        again = DescentDatum.from_json(d.to_json())
        assert again.to_json() == d.to_json()

    def test_base_change(self):
        """Reduction to ``N = 1`` keeps the constant terms."""
        R = ArtinRing(3)
        d = DescentDatum(pseudocircle(), R,
                         {NervePoint("a", (0, 1)): R.element([2, 1, 1])})
        reduced = d.base_change(1)
        assert reduced.value01("a", 0, 1).to_json() == ["2"]

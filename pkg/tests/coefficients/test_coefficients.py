"""
Module to gather tests of the truncated polynomial rings.

This file is executed by ``pytest`` to have good CI.
"""

import numpy as np
import pytest
from sympy.polys.domains import QQ

from dglastacks.coefficients import (
    ArtinRing, base_reduce, format_rational, parse_rational, r_arith,
    r_invert, to_rational
)
from dglastacks.errors import NotAUnit, RingMismatch


class TestArtinRing(object):
    """
    Class to bundle the arithmetic tests of ``Q[t]/(t^N)``.

    Every identity is exact, so comparisons use ``==``.
    """

    def test_rational_parsing(self):
        """Strings, integers and fractions give the same normalized value."""
        assert parse_rational("6/4") == QQ(3, 2)
        assert to_rational(" -2 ") == QQ(-2)
        assert format_rational("12/3") == "4"
        with pytest.raises(ValueError):
            parse_rational("1.5")
        with pytest.raises(ValueError):
            parse_rational("1/0")
        with pytest.raises(TypeError):
            to_rational(0.5)

    def test_truncation(self):
        """Powers of ``t`` at or above ``N`` vanish."""
        R = ArtinRing(3)
        t = R.t()
        assert t * t * t == R.zero()
        assert (t * t).to_json() == ["0", "0", "1"]
        assert R.element([1, 2, 3, 4, 5]).to_json() == ["1", "2", "3"]

    def test_inverse(self):
        """``a * a^-1 = 1`` for random units."""
        rng = np.random.default_rng(7)
        for N in range(1, 5):
            R = ArtinRing(N)
            for _ in range(5):
                a = R.random(rng, maximal=True) + 3
                assert a * r_invert(a) == R.one()

    def test_not_a_unit(self):
        """Elements of the maximal ideal have no inverse."""
        R = ArtinRing(2)
        with pytest.raises(NotAUnit):
            r_invert(R.t())
        with pytest.raises(NotAUnit):
            R.one().exp()

    def test_exp_log(self):
        """``log exp x = x`` on the maximal ideal."""
        rng = np.random.default_rng(3)
        R = ArtinRing(4)
        for _ in range(5):
            x = R.random(rng, maximal=True)
            assert x.exp().log() == x

    def test_ring_mismatch(self):
        """Mixing rings of different order raises."""
        with pytest.raises(RingMismatch):
            r_arith("add", ArtinRing(2).one(), ArtinRing(3).one())
        with pytest.raises(RingMismatch):
            ArtinRing(2).t() * ArtinRing(3).t()

    def test_base_reduce(self):
        """Reduction is a ring map."""
        R = ArtinRing(4)
        a, b = R.element([1, 2, 3, 4]), R.element([2, -1, 0, 5])
        assert base_reduce(a * b, 2) == base_reduce(a, 2) * base_reduce(b, 2)
        assert base_reduce(a, 1).to_json() == ["1"]
        with pytest.raises(ValueError):
            base_reduce(a, 5)

    def test_printing(self):
        """String form with signs and powers."""
        R = ArtinRing(3)
        assert str(R.element([0, -1, "1/2"])) == "-t + 1/2*t^2"
        assert str(R.zero()) == "0"

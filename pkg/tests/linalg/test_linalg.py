"""
Module to gather tests of the exact linear algebra.

This file is executed by ``pytest`` to have good CI.
"""

from sympy.polys.domains import QQ

from dglastacks.linalg import (
    GF2, ExactMatrix, IntegerLattice, cohomology_dimensions, rank
)


class TestExactMatrix(object):
    """Class to bundle the tests of :class:`ExactMatrix`."""

    def test_rank_field_dependence(self):
        """``[[1, 1], [1, -1]]`` has rank 2 over QQ and 1 over GF(2)."""
        dense = [[1, 1], [1, -1]]
        assert ExactMatrix.from_dense(dense).rank() == 2
        assert ExactMatrix.from_dense(dense, domain=GF2).rank() == 1

    def test_nullspace(self):
        """Every nullspace vector is annihilated."""
        A = ExactMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        basis = A.nullspace()
        assert len(basis) == 3 - A.rank() == 1
        for v in basis:
            assert A.matvec(v) == {}

    def test_canonical_solution(self):
        """Free variables are zero in the canonical solution."""
        A = ExactMatrix.from_dense([[1, 1, 0], [0, 0, 1]])
        x = A.solve([2, 3])
        assert x == {0: QQ(2), 2: QQ(3)}
        assert A.matvec(x) == {0: QQ(2), 1: QQ(3)}

    def test_certificate(self):
        """Unsolvable systems come with ``w A = 0`` and ``w b != 0``."""
        A = ExactMatrix.from_dense([[1, 2], [2, 4]])
        b = [1, 1]
        assert A.solve(b) is None
        w = A.certificate(b)
        assert A.transpose().matvec(w) == {}
        assert w.get(0, 0) * 1 + w.get(1, 0) * 1 != 0
        assert A.certificate([1, 2]) is None

    def test_empty(self):
        """Zero sized matrices have rank zero."""
        assert ExactMatrix({}, (0, 3)).rank() == 0
        assert len(ExactMatrix({}, (2, 3)).nullspace()) == 3
        assert rank([[0, 0]]) == 0

    def test_cohomology_of_interval(self):
        """The simplicial interval has ``H^0 = 1``."""
        d0 = ExactMatrix.from_dense([[-1, 1]])
        assert cohomology_dimensions([2, 1], [d0]) == [1]


class TestIntegerLattice(object):
    """Class to bundle the tests of :class:`IntegerLattice`."""

    def test_solution_reproduces_rhs(self):
        """``A x = b`` for a solvable integer system."""
        columns = [[2, 4, 0], [3, 5, 1]]
        lattice = IntegerLattice(columns, 3)
        x = lattice.solve([5, 9, 1])
        assert x is not None
        image = [
            sum(col[r] * x[c] for c, col in enumerate(columns))
            for r in range(3)
        ]
        assert image == [5, 9, 1]

    def test_obstruction(self):
        """Odd vectors are not in ``2 Z``."""
        lattice = IntegerLattice([[2]], 1)
        assert lattice.solve([3]) is None
        assert lattice.obstruction([3]) == {
            "row": 0, "pivot": 2, "residual": 3
        }
        assert lattice.reduce([3]) == [1]

# pylint: disable=invalid-name

"""
Module for exact linear algebra.

Contains the :class:`ExactMatrix` wrapper around sympy's sparse
``DomainMatrix`` (rank, reduced row echelon form, nullspace, canonical
solutions and unsolvability certificates over ``QQ`` or ``GF(2)``) and the
:class:`IntegerLattice` used for solvability over the integers.

Examples
--------

>>> A = ExactMatrix.from_dense([[1, 2], [2, 4]])
>>> A.rank()
1
>>> A.solve([1, 2]) == {0: QQ(1)}
True
>>> A.solve([1, 3]) is None
True
"""

import numpy as np
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

GF2 = GF(2)


def _nonzero(value):
    return bool(value)


class ExactMatrix:
    """
    Sparse matrix over an exact field.

    Rows are stored as ``{row: {col: value}}`` without zero entries.

    Parameters
    ----------
    rows : dict
        Nested dictionary of entries.
    shape : tuple
        ``(nrows, ncols)``.
    domain : sympy domain
        ``QQ`` (default) or ``GF(2)``.
    """

    def __init__(self, rows, shape, domain=QQ):
        self.shape = (int(shape[0]), int(shape[1]))
        self.domain = domain
        self.rows = {}
        for i, row in rows.items():
            converted = {}
            for j, value in row.items():
                value = domain.convert(value)
                if _nonzero(value):
                    converted[j] = value
            if converted:
                self.rows[i] = converted
        self._rref = None

    @classmethod
    def from_dense(cls, array, domain=QQ, ncols=None):
        """Build from a nested list or a 2d numpy array."""
        array = list(array)
        if ncols is None:
            ncols = len(array[0]) if array else 0
        rows = {
            i: {j: v for j, v in enumerate(row) if v}
            for i, row in enumerate(array)
        }
        return cls(rows, (len(array), ncols), domain)

    @classmethod
    def from_columns(cls, columns, nrows, domain=QQ):
        """Build from a list of sparse columns ``{row: value}``."""
        rows = {}
        for j, col in enumerate(columns):
            for i, value in col.items():
                rows.setdefault(i, {})[j] = value
        return cls(rows, (nrows, len(columns)), domain)

    def to_dense(self):
        """Dense numpy object array."""
        out = np.full(self.shape, self.domain.zero, dtype=object)
        for i, row in self.rows.items():
            for j, value in row.items():
                out[i, j] = value
        return out

    def transpose(self):
        """Transposed matrix."""
        rows = {}
        for i, row in self.rows.items():
            for j, value in row.items():
                rows.setdefault(j, {})[i] = value
        return ExactMatrix(rows, self.shape[::-1], self.domain)

    def matvec(self, x):
        """Product with a sparse vector ``{col: value}``."""
        x = as_sparse_vector(x, self.domain)
        out = {}
        for i, row in self.rows.items():
            acc = self.domain.zero
            for j, value in row.items():
                if j in x:
                    acc += value * x[j]
            if _nonzero(acc):
                out[i] = acc
        return out

    def rref(self):
        """
        Reduced row echelon form.

        Returns
        -------
        list of (int, dict)
            Pairs of pivot column and normalized row, sorted by pivot.
        """
        if self._rref is None:
            nrows, ncols = self.shape
            if nrows == 0 or ncols == 0 or not self.rows:
                self._rref = []
            else:
                matrix = DomainMatrix(self.rows, self.shape, self.domain)
                reduced, _ = matrix.to_sparse().rref()
                rep = reduced.to_sparse().rep
                echelon = []
                for row in rep.values():
                    row = {j: v for j, v in row.items() if _nonzero(v)}
                    if row:
                        echelon.append((min(row), row))
                echelon.sort(key=lambda item: item[0])
                self._rref = echelon
        return self._rref

    def pivots(self):
        """Pivot columns of the reduced row echelon form."""
        return [pivot for pivot, _ in self.rref()]

    def rank(self):
        """Rank."""
        return len(self.rref())

    def nullspace(self):
        """
        Basis of the kernel, one vector per free column.

        The vector for free column ``f`` has a ``1`` at ``f`` and zeros at
        all other free columns.
        """
        echelon = self.rref()
        pivots = {pivot for pivot, _ in echelon}
        basis = []
        for free in range(self.shape[1]):
            if free in pivots:
                continue
            vector = {free: self.domain.one}
            for pivot, row in echelon:
                if free in row:
                    vector[pivot] = -row[free]
            basis.append(vector)
        return basis

    def augmented(self, rhs):
        """The matrix ``[A | b]``."""
        rhs = as_sparse_vector(rhs, self.domain)
        rows = {i: dict(row) for i, row in self.rows.items()}
        for i, value in rhs.items():
            rows.setdefault(i, {})[self.shape[1]] = value
        return ExactMatrix(
            rows, (self.shape[0], self.shape[1] + 1), self.domain
        )

    def solve(self, rhs):
        """
        Canonical solution of ``A x = b``, or ``None``.

        Free variables are set to zero, which makes the solution a function
        of ``(A, b)`` alone.
        """
        ncols = self.shape[1]
        echelon = self.augmented(rhs).rref()
        solution = {}
        for pivot, row in echelon:
            if pivot == ncols:
                return None
            if ncols in row:
                solution[pivot] = row[ncols]
        return solution

    def is_solvable(self, rhs):
        """Whether ``A x = b`` has a solution."""
        return self.solve(rhs) is not None

    def certificate(self, rhs):
        """
        Unsolvability certificate of ``A x = b``.

        Returns a row vector ``w`` with ``w A = 0`` and ``w b != 0``, or
        ``None`` if the system is solvable.
        """
        rhs = as_sparse_vector(rhs, self.domain)
        for w in self.transpose().nullspace():
            pairing = sum(
                (w[i] * rhs[i] for i in w if i in rhs), self.domain.zero
            )
            if _nonzero(pairing):
                return w
        return None


def as_sparse_vector(x, domain=QQ):
    """Convert a dense sequence or a dict to ``{index: value}``."""
    if isinstance(x, dict):
        items = x.items()
    else:
        items = enumerate(x)
    out = {}
    for i, value in items:
        value = domain.convert(value)
        if _nonzero(value):
            out[int(i)] = value
    return out


def dense_vector(x, length, domain=QQ):
    """Convert a sparse vector to a dense numpy object array."""
    out = np.full(length, domain.zero, dtype=object)
    for i, value in x.items():
        out[i] = value
    return out


def rank(matrix):
    """Rank of a dense matrix (nested lists or numpy array)."""
    return ExactMatrix.from_dense(matrix).rank()


def cohomology_dimensions(dims, differentials):
    """
    Dimensions of the cohomology of a finite cochain complex.

    Parameters
    ----------
    dims : list of int
        ``dim C^0, ..., dim C^n``.
    differentials : list of ExactMatrix
        ``d^i: C^i -> C^{i+1}`` for ``i < n``; the last space is treated as
        the end of the truncation, so only ``H^0 ... H^{n-1}`` are exact.

    >>> d0 = ExactMatrix.from_dense([[1], [1]])
    >>> cohomology_dimensions([1, 2], [d0])
    [0]
    """
    ranks = [m.rank() for m in differentials]
    out = []
    for i in range(len(differentials)):
        before = ranks[i - 1] if i > 0 else 0
        out.append(dims[i] - ranks[i] - before)
    return out


class IntegerLattice:
    """
    Lattice spanned by the columns of an integer matrix.

    A column Hermite reduction ``H = A U`` with unimodular ``U`` is computed
    over Python integers. ``H`` is lower echelon: its ``c``-th column has
    its first nonzero entry, which is positive, at pivot row ``r_c`` and the
    pivot rows increase with ``c``.

    >>> L = IntegerLattice([[2, 0], [0, 3]], 2)
    >>> L.solve([4, 3])
    [2, 1]
    >>> L.solve([1, 0]) is None
    True
    >>> L.reduce([5, 7])
    [1, 1]
    """

    def __init__(self, columns, nrows):
        self.nrows = nrows
        cols = [[int(v) for v in col] for col in columns]
        n = len(cols)
        unimodular = [[int(i == j) for i in range(n)] for j in range(n)]
        pivots = []
        c = 0
        for r in range(nrows):
            if c == n:
                break
            for j in range(c + 1, n):
                while cols[j][r] != 0:
                    q = cols[c][r] // cols[j][r]
                    cols[c] = [a - q * b for a, b in zip(cols[c], cols[j])]
                    unimodular[c] = [
                        a - q * b
                        for a, b in zip(unimodular[c], unimodular[j])
                    ]
                    cols[c], cols[j] = cols[j], cols[c]
                    unimodular[c], unimodular[j] = (
                        unimodular[j], unimodular[c]
                    )
            if cols[c][r] != 0:
                if cols[c][r] < 0:
                    cols[c] = [-a for a in cols[c]]
                    unimodular[c] = [-a for a in unimodular[c]]
                pivots.append((r, c))
                c += 1
        self.hermite = cols
        self.unimodular = unimodular
        self.pivots = pivots

    def _forward(self, b):
        b = [int(v) for v in b]
        y = [0] * len(self.hermite)
        pivot_of = dict(self.pivots)
        for r in range(self.nrows):
            value = b[r] - sum(
                col[r] * y[j] for j, col in enumerate(self.hermite) if y[j]
            )
            if r in pivot_of:
                c = pivot_of[r]
                h = self.hermite[c][r]
                if value % h:
                    return None, {"row": r, "pivot": h, "residual": value}
                y[c] = value // h
            elif value:
                return None, {"row": r, "pivot": 0, "residual": value}
        return y, None

    def solve(self, b):
        """Integer solution ``x`` of ``A x = b`` or ``None``."""
        y, _ = self._forward(b)
        if y is None:
            return None
        n = len(self.hermite)
        return [
            sum(self.unimodular[j][i] * y[j] for j in range(n))
            for i in range(n)
        ]

    def obstruction(self, b):
        """Row, pivot and residual where solving ``A x = b`` fails."""
        return self._forward(b)[1]

    def reduce(self, b):
        """
        Canonical residue of ``b`` modulo the lattice.

        At every pivot row the residue lies in ``[0, pivot)``.
        """
        b = [int(v) for v in b]
        for r, c in self.pivots:
            col = self.hermite[c]
            q = b[r] // col[r]
            if q:
                b = [x - q * y for x, y in zip(b, col)]
        return b

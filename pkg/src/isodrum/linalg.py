"""Small exact rational matrices: elimination, determinants, nullspaces."""

from __future__ import annotations

from fractions import Fraction


class RationalMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(Fraction(x) for x in row) for row in data)
        if not data or not data[0]:
            raise ValueError("matrix needs at least one row and column")
        if any(len(row) != len(data[0]) for row in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", len(data[0]))

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_permutation(cls, perm):
        """Column j carries a 1 in row perm(j): the matrix sending e_j to e_perm(j)."""
        n = perm.degree
        return cls([[1 if perm.images[j] == i else 0 for j in range(n)]
                    for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)]
        )

    def scale(self, c):
        c = Fraction(c)
        return RationalMatrix([[c * x for x in row] for row in self.data])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.data))
        return RationalMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.data]
        )

    def transpose(self):
        return RationalMatrix(list(zip(*self.data)))

    def determinant(self):
        if self.rows != self.cols:
            raise ValueError("determinant of nonsquare matrix")
        n = self.rows
        m = [list(row) for row in self.data]
        det = Fraction(1)
        for col in range(n):
            pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != col:
                m[col], m[pivot_row] = m[pivot_row], m[col]
                det = -det
            pivot = m[col][col]
            det *= pivot
            inv = 1 / pivot
            for r in range(col + 1, n):
                factor = m[r][col] * inv
                if factor:
                    mr = m[r]
                    mc = m[col]
                    for c in range(col, n):
                        mr[c] -= factor * mc[c]
        return det

    def is_invertible(self):
        return self.rows == self.cols and self.determinant() != 0

    def is_permutation_matrix(self):
        if self.rows != self.cols:
            return False
        for row in self.data:
            if sum(row) != 1 or any(x not in (0, 1) for x in row):
                return False
        for col in zip(*self.data):
            if sum(col) != 1:
                return False
        return True

    def to_permutation(self):
        """Inverse of from_permutation; requires a permutation matrix."""
        from isodrum.permgroup import Permutation

        if not self.is_permutation_matrix():
            raise ValueError("not a permutation matrix")
        images = [0] * self.cols
        for j in range(self.cols):
            for i in range(self.rows):
                if self.data[i][j] == 1:
                    images[j] = i
                    break
        return Permutation(images)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"RationalMatrix([{body}])"


def rref(rows):
    """Reduced row echelon form of a list of Fraction lists (in place copy).

    Returns (rref_rows, pivot_columns)."""
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_basis(rows, ncols):
    """Basis vectors (as Fraction lists) of the right nullspace.

    The basis is deterministic: one vector per free column in ascending
    order, with a 1 in the free coordinate.
    """
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for prow, pcol in zip(reduced, pivots):
            vec[pcol] = -prow[f]
        basis.append(vec)
    return basis

"""Dense exact matrices and Gaussian elimination.

Pivoting always takes the first nonzero entry in column order, so every
derived object (rank factorisations, solutions, null-space bases) is
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import Field, QQ, same_field


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        return cls(field, rows, ncols)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls.from_rows(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls.from_rows(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)) if self.rows else tuple(() for _ in range(self.ncols)), self.nrows)

    T = property(transpose)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        f = same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().rows
        out = []
        for r in self.rows:
            out.append(tuple(f.reduce(sum((a * b for a, b in zip(r, c) if a and b), f.zero)) for c in cols))
        return Matrix(f, tuple(out), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        f = same_field(self.field, other.field)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(f, tuple(tuple(f.reduce(a + b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, tuple(tuple(f.reduce(-a) for a in r) for r in self.rows), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        return Matrix(f, tuple(tuple(f.reduce(c * a) for a in r) for r in self.rows), self.ncols)

    def apply(self, vec: Sequence) -> tuple:
        f = self.field
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        return tuple(f.reduce(sum((a * b for a, b in zip(r, vec) if a and b), f.zero)) for r in self.rows)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i))

    def is_alternating(self) -> bool:
        n = self.nrows
        return n == self.ncols and all(self.rows[i][i] == 0 for i in range(n)) and all(
            self.field.reduce(self.rows[i][j] + self.rows[j][i]) == 0 for i in range(n) for j in range(i)
        )

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        rows, pivots = _rref(self.field, [list(r) for r in self.rows], self.ncols)
        return Matrix(self.field, tuple(tuple(r) for r in rows), self.ncols), pivots

    def rank(self) -> int:
        return rank(self)

    def nullspace(self) -> list[tuple]:
        return nullspace(self)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(self.field.format(a) for a in r) + "]" for r in self.rows)


def _rref(f: Field, rows: list[list], ncols: int):
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.reduce(a * inv) for a in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [f.reduce(a - factor * b) for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, tuple(pivots)


def rank(m: Matrix) -> int:
    return len(m.rref()[1])


def nullspace(m: Matrix) -> list[tuple]:
    """Basis of {x : m x = 0}, one vector per free column, in column order."""
    f = m.field
    R, pivots = m.rref()
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [f.zero] * m.ncols
        x[fc] = f.one
        for i, pc in enumerate(pivots):
            x[pc] = f.reduce(-R.rows[i][fc])
        basis.append(tuple(x))
    return basis


def solve_linear(m: Matrix, rhs: Sequence) -> tuple | None:
    """A solution x of m x = rhs, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    f = m.field
    if len(rhs) != m.nrows:
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {m.nrows}")
    rhs = [f(x) for x in rhs]
    aug = [list(r) + [b] for r, b in zip(m.rows, rhs)]
    rows, pivots = _rref(f, aug, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [f.zero] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m.ncols]
    return tuple(x)


def rank_factorization(m: Matrix) -> tuple[Matrix, Matrix]:
    """m = C @ R with C the pivot columns of m and R the nonzero rows of rref(m)."""
    R, pivots = m.rref()
    C = Matrix.from_columns(m.field, [m.column(c) for c in pivots], m.nrows) if pivots else Matrix.zeros(m.field, m.nrows, 0)
    Rr = Matrix(m.field, R.rows[: len(pivots)], m.ncols)
    return C, Rr


class EchelonBasis:
    """Incrementally maintained basis of a span of sparse vectors.

    Vectors are dicts from hashable coordinate keys to field values.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self._rows: list[tuple[object, dict]] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, vec: dict) -> dict:
        f = self.field
        v = {k: f.reduce(x) for k, x in vec.items() if f.reduce(x) != 0}
        for key, row in self._rows:
            c = v.get(key)
            if c:
                for k, x in row.items():
                    y = f.reduce(v.get(k, f.zero) - c * x)
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        """Add vec to the span; True when it was independent."""
        v = self.reduce(vec)
        if not v:
            return False
        key = min(v, key=_sort_key)
        inv = self.field.inv(v[key])
        self._rows.append((key, {k: self.field.reduce(x * inv) for k, x in v.items()}))
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def _sort_key(k):
    return (repr(type(k)), k)

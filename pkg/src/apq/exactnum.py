"""Exact rational scalars and dense matrices.

Scalars are :class:`fractions.Fraction`. :class:`Matrix` keeps its entries in a
``python-flint`` ``fmpq_mat`` so that rank, kernel and determinant of the
few-hundred-square systems produced by Hom computations stay fast while
remaining exact. :mod:`apq.reference` holds a pure-Fraction elimination used
as an independent oracle in the tests.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import flint

__all__ = [
    "Rational",
    "Matrix",
    "to_fraction",
    "parse_rational",
    "format_rational",
    "rank",
    "nullspace_basis",
    "det",
]

Rational = Fraction


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions, flint rationals and ``"a/b"`` strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (flint.fmpq, flint.fmpz)):
        if isinstance(x, flint.fmpz):
            return Fraction(int(x))
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational literal {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(x) -> str:
    """Canonical ``num/den`` text used by every serialized format."""
    f = to_fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return flint.fmpq(x)
    f = to_fraction(x)
    return flint.fmpq(f.numerator, f.denominator)


class Matrix:
    """Immutable exact matrix over the rationals.

    ``rows`` or ``cols`` may be zero; such matrices act as zero maps between
    zero spaces.
    """

    __slots__ = ("_m",)

    def __init__(self, rows: int, cols: int, entries: Iterable | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        if entries is None:
            values = [flint.fmpq(0)] * (rows * cols)
        else:
            values = [_fmpq(e) for e in entries]
        if len(values) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(values)}"
            )
        self._m = flint.fmpq_mat(rows, cols, values)

    @classmethod
    def _wrap(cls, m: flint.fmpq_mat) -> "Matrix":
        obj = cls.__new__(cls)
        obj._m = m
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged row list")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._wrap(flint.fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = flint.fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls._wrap(m)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        m = flint.fmpq_mat(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length does not match row count")
            for i, e in enumerate(col):
                m[i, j] = _fmpq(e)
        return cls._wrap(m)

    # -- shape and entries -------------------------------------------------

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def flint(self) -> flint.fmpq_mat:
        """The underlying ``fmpq_mat``; callers must not mutate it."""
        return self._m

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(to_fraction(e) for e in self._m.entries())

    def tolist(self) -> list[list[Fraction]]:
        return [[to_fraction(e) for e in row] for row in self._m.tolist()]

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return to_fraction(self._m[i, j])

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(to_fraction(self._m[i, j]) for i in range(self.rows))

    # -- algebra -----------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        return Matrix._wrap(self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._wrap(self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._wrap(self._m - other._m)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(-self._m)

    def scale(self, c) -> "Matrix":
        return Matrix._wrap(self._m * _fmpq(c))

    def transpose(self) -> "Matrix":
        return Matrix._wrap(self._m.transpose())

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.entries)))

    def __repr__(self) -> str:
        body = ", ".join(format_rational(e) for e in self.entries)
        return f"Matrix({self.rows}, {self.cols}, [{body}])"

    def is_zero(self) -> bool:
        return all(e == 0 for e in self._m.entries())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        m = flint.fmpq_mat(len(rows), len(cols))
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                m[a, b] = self._m[i, j]
        return Matrix._wrap(m)

    # -- decompositions ----------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        if self.rows == 0 or self.cols == 0:
            return self, ()
        r, rk = self._m.rref()
        pivots = []
        col = 0
        for i in range(rk):
            while r[i, col] == 0:
                col += 1
            pivots.append(col)
            col += 1
        return Matrix._wrap(r), tuple(pivots)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._m.rank()

    def nullspace_basis(self) -> list[tuple[Fraction, ...]]:
        """Basis of the right kernel, one column vector per free column."""
        return [tuple(to_fraction(e) for e in v) for v in _kernel_columns(self._m)]

    def nullspace_matrix(self) -> "Matrix":
        """Kernel basis packed as the columns of a ``cols x k`` matrix."""
        return Matrix._wrap(kernel(self._m))

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError(f"determinant of non-square {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return Fraction(1)
        return to_fraction(self._m.det())

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        if self.rows == 0:
            return self
        return Matrix._wrap(self._m.inv())


def _kernel_columns(m: flint.fmpq_mat) -> list[list[flint.fmpq]]:
    rows, cols = m.nrows(), m.ncols()
    if cols == 0:
        return []
    if rows == 0:
        basis = []
        for j in range(cols):
            v = [flint.fmpq(0)] * cols
            v[j] = flint.fmpq(1)
            basis.append(v)
        return basis
    r, rk = m.rref()
    pivots = []
    col = 0
    for i in range(rk):
        while r[i, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [flint.fmpq(0)] * cols
        v[f] = flint.fmpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, f]
        basis.append(v)
    return basis


def kernel(m: flint.fmpq_mat) -> flint.fmpq_mat:
    """Right kernel of a raw ``fmpq_mat`` as the columns of a new one."""
    cols = _kernel_columns(m)
    out = flint.fmpq_mat(m.ncols(), len(cols))
    for j, v in enumerate(cols):
        for i, e in enumerate(v):
            if e != 0:
                out[i, j] = e
    return out


def rank(m: Matrix) -> int:
    return m.rank()


def nullspace_basis(m: Matrix) -> list[tuple[Fraction, ...]]:
    return m.nullspace_basis()


def det(m: Matrix) -> Fraction:
    return m.det()


def hstack(blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise ValueError("hstack needs equal row counts")
    total = sum(b.cols for b in blocks)
    out = flint.fmpq_mat(r, total)
    off = 0
    for b in blocks:
        bm = b.flint
        for i in range(r):
            for j in range(b.cols):
                e = bm[i, j]
                if e != 0:
                    out[i, off + j] = e
        off += b.cols
    return Matrix._wrap(out)


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = flint.fmpq_mat(rows, cols)
    r0 = c0 = 0
    for b in blocks:
        bm = b.flint
        for i in range(b.rows):
            for j in range(b.cols):
                e = bm[i, j]
                if e != 0:
                    out[r0 + i, c0 + j] = e
        r0 += b.rows
        c0 += b.cols
    return Matrix._wrap(out)

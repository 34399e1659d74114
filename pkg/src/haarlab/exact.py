"""Exact rational-complex scalars, matrices and linear solves.

Everything in this module is built on fractions.Fraction so that the
Weingarten tables and the trace-expectation engine stay exact.  The
matrix helpers work on tuples of tuples of QC and skip zero entries
when multiplying, which makes products with identity, diagonal and
single-band matrices cheap without any special-case flags.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError

RationalLike = int | Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class QC:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("QC is immutable")

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "QC":
        other = as_qc(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "QC":
        other = as_qc(other)
        return QC(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "QC":
        return as_qc(other) - self

    def __mul__(self, other) -> "QC":
        other = as_qc(other)
        return QC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QC":
        other = as_qc(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero QC")
        return QC((self.re * other.re + self.im * other.im) / d,
                  (self.im * other.re - self.re * other.im) / d)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    # -- structure -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QC)):
            other = as_qc(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"QC({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}i"


QC_ZERO = QC(0)
QC_ONE = QC(1)
QC_I = QC(0, 1)


def as_qc(x) -> QC:
    if isinstance(x, QC):
        return x
    if isinstance(x, (int, Fraction)):
        return QC(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as QC")


QCMatrix = tuple  # tuple of tuples of QC; alias for readability


def qc_matrix(rows: Iterable[Iterable]) -> QCMatrix:
    """Coerce a nested iterable of ints/Fractions/QC into a QC matrix."""
    mat = tuple(tuple(as_qc(x) for x in row) for row in rows)
    if mat and any(len(row) != len(mat[0]) for row in mat):
        raise DimensionError("ragged rows in matrix literal")
    return mat


def identity_qc(n: int) -> QCMatrix:
    return tuple(tuple(QC_ONE if i == j else QC_ZERO for j in range(n))
                 for i in range(n))


def mat_dim(a: QCMatrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def mat_mul(a: QCMatrix, b: QCMatrix) -> QCMatrix:
    n, k = mat_dim(a)
    k2, m = mat_dim(b)
    if k != k2:
        raise DimensionError(f"cannot multiply {n}x{k} by {k2}x{m}")
    # sparse row walk: only touch nonzero entries of the left factor
    out = []
    for i in range(n):
        row = [QC_ZERO] * m
        for l, ail in enumerate(a[i]):
            if not ail:
                continue
            brow = b[l]
            for j in range(m):
                if brow[j]:
                    row[j] = row[j] + ail * brow[j]
        out.append(tuple(row))
    return tuple(out)


def mat_add(a: QCMatrix, b: QCMatrix) -> QCMatrix:
    if mat_dim(a) != mat_dim(b):
        raise DimensionError("shape mismatch in matrix sum")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: QCMatrix, b: QCMatrix) -> QCMatrix:
    if mat_dim(a) != mat_dim(b):
        raise DimensionError("shape mismatch in matrix difference")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: QCMatrix) -> QCMatrix:
    c = as_qc(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_transpose(a: QCMatrix) -> QCMatrix:
    return tuple(zip(*a)) if a else a


def mat_conj(a: QCMatrix) -> QCMatrix:
    return tuple(tuple(x.conjugate() for x in row) for row in a)


def mat_trace(a: QCMatrix) -> QC:
    n, m = mat_dim(a)
    if n != m:
        raise DimensionError("trace of a non-square matrix")
    t = QC_ZERO
    for i in range(n):
        t = t + a[i][i]
    return t


def mat_is_identity(a: QCMatrix) -> bool:
    n, m = mat_dim(a)
    if n != m:
        return False
    return all(a[i][j] == (QC_ONE if i == j else QC_ZERO)
               for i in range(n) for j in range(n))


def to_complex_rows(a: QCMatrix) -> list[list[complex]]:
    return [[complex(x) for x in row] for row in a]


# -- exact linear algebra over Fraction -------------------------------

def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def solve_exact(a: Sequence[Sequence[Fraction]],
                b: Sequence[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square system exactly.  Raises ValueError if
    the matrix is singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])]
           for i, row in enumerate(a)]
    aug, pivots = _rref(aug)
    if len(pivots) != n or pivots != list(range(n)):
        raise ValueError("singular system")
    return [aug[i][n] for i in range(n)]


def solve_consistent(a: Sequence[Sequence[Fraction]],
                     b: Sequence[Fraction]) -> list[Fraction]:
    """One solution of a consistent (possibly singular) square system,
    with all free variables set to zero."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])]
           for i, row in enumerate(a)]
    aug, pivots = _rref(aug)
    if n in pivots:
        # a pivot in the augmented column means 0 = 1 somewhere
        raise ValueError("inconsistent system")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def nullspace_exact(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the nullspace of a square matrix, exact."""
    n = len(a)
    rows = [[Fraction(x) for x in row] for row in a]
    rows, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis

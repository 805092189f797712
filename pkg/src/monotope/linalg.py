"""Exact integer/rational linear algebra shared by every other module.

Scalars are plain Python ``int`` (arbitrary precision) and
``fractions.Fraction`` (always in lowest terms with positive denominator),
so no overflow or rounding can ever occur.  Vectors and matrices are plain
tuples of scalars; everything here is a pure function over immutable values.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Vector = tuple[Scalar, ...]
Matrix = tuple[Vector, ...]


def as_scalar(x) -> Scalar:
    """Normalize a number to int when integral, Fraction otherwise."""
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


def as_vector(coords: Iterable) -> Vector:
    return tuple(as_scalar(c) for c in coords)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(as_vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def is_integral(v: Iterable[Scalar]) -> bool:
    return all(isinstance(c, int) or c.denominator == 1 for c in v)


def to_int_vector(v: Iterable[Scalar]) -> tuple[int, ...]:
    out = []
    for c in v:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("vector is not integral")
            c = c.numerator
        out.append(c)
    return tuple(out)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Scalar, v: Sequence[Scalar]) -> Vector:
    return tuple(as_scalar(c * x) for x in v)


def mat_vec(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(m: Sequence[Sequence[Scalar]]) -> Matrix:
    return tuple(zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its coordinates.

    The result has coordinate gcd 1 and points in the same direction.
    """
    v = to_int_vector(v)
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(c // g for c in v)


def primitive_direction(v: Sequence[Scalar]) -> tuple[int, ...]:
    """Primitive integer vector parallel to a nonzero rational vector."""
    z, _ = _clear_denominators(v)
    return primitive_part(z)


def _clear_denominators(row: Sequence[Scalar]) -> tuple[tuple[int, ...], int]:
    """Return (integer row, positive multiplier) with multiplier*row integral."""
    mult = 1
    for c in row:
        if isinstance(c, Fraction):
            d = c.denominator
            mult = mult * d // gcd(mult, d)
    return tuple(int(c * mult) for c in row), mult


def det(m: Sequence[Sequence[Scalar]]) -> Scalar:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rational rows are scaled to integers first so all intermediate values
    stay integral; the accumulated scale is divided out at the end.
    """
    rows = [tuple(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    scale = 1
    a = []
    for r in rows:
        ir, mult = _clear_denominators(r)
        a.append(list(ir))
        scale *= mult
    d = _bareiss_det(a)
    return as_scalar(Fraction(d, scale))


def _bareiss_det(a: list[list[int]]) -> int:
    """In-place Bareiss determinant of an integer matrix."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def is_unimodular_basis(m: Sequence[Sequence[Scalar]]) -> bool:
    """True iff the square integer matrix has determinant +-1."""
    rows = as_matrix(m)
    if rows and len(rows) != len(rows[0]):
        raise ValueError("unimodularity requires a square matrix")
    for r in rows:
        if not is_integral(r):
            raise ValueError("unimodularity requires integer entries")
    return abs(det(rows)) == 1


def inverse_unimodular(m: Sequence[Sequence[Scalar]]) -> Matrix:
    """Exact integer inverse of a matrix with determinant +-1."""
    rows = as_matrix(m)
    n = len(rows)
    d = det(rows)
    if abs(d) != 1:
        raise ValueError("not unimodular")
    # solve_columns returns the solution columns as rows, i.e. the transpose
    inv = transpose(solve_columns(rows, identity(n)))
    return tuple(to_int_vector(r) for r in inv)


def solve_columns(a: Matrix, rhs_cols_as_rows: Matrix) -> Matrix:
    """Solve a X = b for each b given as a *row* of rhs_cols_as_rows.

    Returns the solutions as rows as well (i.e. the transpose of X when
    rhs rows are the transpose of B).  Uses exact Gauss-Jordan over Q.
    """
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(c[i]) for c in rhs_cols_as_rows]
           for i, row in enumerate(a)]
    width = n + len(rhs_cols_as_rows)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    # column j of X sits in augmented column n+j
    return tuple(tuple(as_scalar(aug[i][n + j]) for i in range(n))
                 for j in range(width - n))


def solve_square(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> Vector:
    """Unique solution of a x = b; raises on singular a."""
    (x,) = solve_columns(as_matrix(a), (as_vector(b),))
    return x


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    """Rank over Q by fraction-free elimination."""
    rows = [list(_clear_denominators(r)[0]) for r in m]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][col] != 0:
                p, q = rows[r][col], rows[i][col]
                rows[i] = [p * x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def kernel_vector(m: Sequence[Sequence[Scalar]]) -> tuple[int, ...] | None:
    """A primitive integer spanning vector of ker(m) when it is 1-dimensional.

    Returns None unless rank(m) == ncols - 1.  Rows may be rational.
    """
    rows = [list(_clear_denominators(r)[0]) for r in m]
    ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return None
    # reduce to row echelon form over Z (fraction-free)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][col] != 0:
                p, q = rows[r][col], rows[i][col]
                rows[i] = [p * x - q * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if r != ncols - 1:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i in reversed(range(r)):
        col = pivots[i]
        s = sum((Fraction(rows[i][j]) * x[j] for j in range(col + 1, ncols)),
                Fraction(0))
        x[col] = -s / Fraction(rows[i][col])
    mult = 1
    for c in x:
        mult = mult * c.denominator // gcd(mult, c.denominator)
    return primitive_part(tuple(int(c * mult) for c in x))

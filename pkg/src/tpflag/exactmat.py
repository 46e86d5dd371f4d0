"""Exact rational dense linear algebra: minors, the unit-upper * torus *
unit-lower Gaussian decomposition, and exterior (wedge) powers.

Matrices are immutable and carry ``fractions.Fraction`` entries, so every
identity in this module is exact: no tolerances appear anywhere.  Entry
*storage* is plain Python (``m.rows[i][j]``, 0-based), but the index sets
handed to :func:`minor` and reported in witnesses are 1-based, matching
the classical Delta_{rows,cols} notation used throughout the package.

Row/column subsets indexing exterior powers are ordered colexicographically
(compare largest elements first); the order is fixed once here because
downstream code reads specific wedge coordinates.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DecompositionUnavailable

#: Largest group-element dimension accepted at external interfaces.  Wedge
#: matrices may of course be larger; the cap keeps exact arithmetic at desk
#: scale.
MAX_DIMENSION = 8


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable square matrix over exact rationals.

    >>> m = RationalMatrix.from_rows([[1, 0], [Fraction(1, 2), 1]])
    >>> m.rows[1][0]
    Fraction(1, 2)
    >>> m.det()
    Fraction(1, 1)
    """

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise ValueError("matrix must be non-empty")
        coerced = tuple(tuple(_as_fraction(x) for x in row) for row in self.rows)
        for row in coerced:
            if len(row) != n:
                raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", coerced)

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, entries) -> "RationalMatrix":
        entries = [_as_fraction(x) for x in entries]
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(n))
                         for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        cols = tuple(zip(*other.rows))
        return RationalMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.rows))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)))

    def det(self) -> Fraction:
        return _det([list(row) for row in self.rows])

    def inverse(self) -> "RationalMatrix":
        """Exact inverse via Gauss-Jordan elimination."""
        n = self.n
        a = [list(row) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return RationalMatrix(tuple(tuple(row[n:]) for row in a))

    def minor(self, rowset, colset) -> Fraction:
        """Determinant of the submatrix on 1-based, strictly increasing
        index sets of equal size."""
        rows = tuple(rowset)
        cols = tuple(colset)
        if len(rows) != len(cols) or not rows:
            raise ValueError("row and column sets must be non-empty and of equal size")
        for idx in (rows, cols):
            if any(not 1 <= i <= self.n for i in idx):
                raise ValueError(f"index out of range 1..{self.n}: {idx}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index set must be strictly increasing: {idx}")
        sub = [[self.rows[r - 1][c - 1] for c in cols] for r in rows]
        return _det(sub)

    def is_unit_triangular(self, sign: str) -> bool:
        """True for unit lower ('lower') or unit upper ('upper')
        triangular matrices; exact check."""
        check_upper_zero = sign == "lower"
        if sign not in ("lower", "upper"):
            raise ValueError("sign must be 'lower' or 'upper'")
        for i in range(self.n):
            if self.rows[i][i] != 1:
                return False
            for j in range(i + 1, self.n):
                off = self.rows[i][j] if check_upper_zero else self.rows[j][i]
                if off != 0:
                    return False
        return True

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0
                   for i in range(self.n) for j in range(self.n) if i != j)

    def diagonal_entries(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(self.n))

    def to_float(self):
        """Entries as nested tuples of floats."""
        return tuple(tuple(float(x) for x in row) for row in self.rows)

    def to_json_dict(self) -> dict:
        return {"n": self.n,
                "entries": [[str(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RationalMatrix":
        """Parse the on-disk format ``{"n": int, "entries": [["p/q",...]]}``.

        The round trip through :meth:`to_json_dict` is bit-exact.  Group
        elements are capped at dimension MAX_DIMENSION here.
        """
        try:
            n = int(data["n"])
            entries = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from exc
        if not 2 <= n <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in 2..{MAX_DIMENSION}, got {n}")
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ValueError("entries shape does not match n")
        try:
            rows = tuple(tuple(Fraction(str(x)) for x in row) for row in entries)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational entry: {exc}") from exc
        return cls(rows)

    def __str__(self) -> str:
        cells = [[str(x) for x in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]"
                         for row in cells)


def _det(a) -> Fraction:
    """Determinant of a mutable list-of-lists of Fractions, by Gaussian
    elimination with row swaps."""
    n = len(a)
    sign = 1
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * det


def minor(m: RationalMatrix, rowset, colset) -> Fraction:
    """Module-level alias for :meth:`RationalMatrix.minor`."""
    return m.minor(rowset, colset)


def float_det(rows) -> float:
    """Determinant of a small float matrix by Gaussian elimination with
    partial pivoting; shared by the float codepaths."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1.0
    det = 1.0
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0.0:
            return 0.0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0.0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * det


# ---------------------------------------------------------------------------
# Gaussian decomposition g = upper * torus * lower


@dataclass(frozen=True)
class GaussFactors:
    """Factors of g = upper * torus * lower with unit-triangular upper and
    lower and diagonal torus; the product reproduces the input exactly."""

    upper: RationalMatrix
    torus: RationalMatrix
    lower: RationalMatrix

    def product(self) -> RationalMatrix:
        return self.upper @ self.torus @ self.lower


def _flip(m: RationalMatrix) -> RationalMatrix:
    """Conjugation by the exchange permutation: entry (i,j) -> (n+1-i, n+1-j)."""
    n = m.n
    return RationalMatrix(tuple(tuple(m.rows[n - 1 - i][n - 1 - j] for j in range(n))
                                for i in range(n)))


def gauss_decompose(g: RationalMatrix) -> GaussFactors:
    """Factor g = upper * torus * lower (unit upper, diagonal, unit lower).

    Exists iff all trailing principal minors (rows and columns {k..n}) are
    nonzero; otherwise raises :class:`DecompositionUnavailable`.  Computed
    by flipping the matrix about its antidiagonal, running the standard
    unit-lower * diag * unit-upper elimination, and flipping back.
    """
    n = g.n
    h = _flip(g)
    a = [list(row) for row in h.rows]
    lower = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = a[col][col]
        if pivot == 0:
            k = n - col
            raise DecompositionUnavailable(
                f"trailing principal minor on rows/cols {{{k}..{n}}} vanishes")
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / pivot
                lower[r][col] = f
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    pivots = [a[i][i] for i in range(n)]
    unit_upper = [[a[i][j] / pivots[i] for j in range(n)] for i in range(n)]
    l_h = RationalMatrix(tuple(tuple(row) for row in lower))
    d_h = RationalMatrix.diagonal(pivots)
    u_h = RationalMatrix(tuple(tuple(row) for row in unit_upper))
    return GaussFactors(upper=_flip(l_h), torus=_flip(d_h), lower=_flip(u_h))


# ---------------------------------------------------------------------------
# Exterior powers


def colex_subsets(n: int, j: int) -> tuple:
    """All j-element subsets of {1..n} as 1-based tuples, in
    colexicographic order (largest elements compared first).

    >>> colex_subsets(4, 2)
    ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4))
    """
    subs = [tuple(i + 1 for i in c) for c in combinations(range(n), j)]
    return tuple(sorted(subs, key=lambda t: t[::-1]))


def exterior_power(m: RationalMatrix, j: int) -> RationalMatrix:
    """Matrix of the induced action on the j-th wedge power: the
    C(n,j) x C(n,j) matrix of all j x j minors, rows and columns indexed
    by colexicographic j-subsets.  Multiplicative in m (Cauchy-Binet)."""
    n = m.n
    if not 1 <= j <= n - 1:
        raise ValueError(f"wedge index must be in 1..{n - 1}, got {j}")
    subs = colex_subsets(n, j)
    return RationalMatrix(tuple(
        tuple(m.minor(r, c) for c in subs) for r in subs))


# ---------------------------------------------------------------------------
# Exact roots of rationals (used to rebuild torus matrices from coordinate
# ratios; only perfect powers have exact results)


def _int_nth_root(value: int, k: int):
    """Exact integer k-th root of a positive integer, or None."""
    if value <= 0:
        return None
    if k == 2:
        r = math.isqrt(value)
        return r if r * r == value else None
    lo, hi = 1, 1 << (value.bit_length() // k + 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < value:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == value else None


def perfect_nth_root(x: Fraction, k: int):
    """Fraction r with r**k == x, or None when x is not a perfect k-th
    power of a rational.  x must be positive."""
    if x <= 0:
        return None
    num = _int_nth_root(x.numerator, k)
    den = _int_nth_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)

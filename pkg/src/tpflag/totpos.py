"""Membership tests for the totally positive sub-semigroups of SL_n and
coordinates on the cells of unit-triangular matrices.

A cell point is an ordered product of elementary factors along a reduced
word: letter i with parameter a contributes I + a*E_{i+1,i} on the lower
side and I + a*E_{i,i+1} on the upper side.  With the full-reversal word
and strictly positive parameters these products sweep out exactly the
totally positive unit-triangular matrices, which is what the membership
tests characterize via minors.

Everything here is exact rational arithmetic.  The only float-aware code
path is parameter extraction, which the flag pipeline reuses on float
matrices by passing an explicit tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .errors import (DecompositionUnavailable, InconsistentCriteria,
                     NotInCell)
from .exactmat import RationalMatrix, _det, float_det, gauss_decompose
from .prng import SplitMix64, derive_seed
from .weyl import WeylElement, is_reduced, longest_element, reduced_word

_SIGNS = ("lower", "upper")


def _check_sign(sign: str):
    if sign not in _SIGNS:
        raise ValueError(f"sign must be one of {_SIGNS}, got {sign!r}")


@dataclass(frozen=True)
class LusztigParams:
    """A reduced word together with one strictly positive parameter per
    letter: coordinates on a cell of unit-triangular matrices."""

    word: tuple
    params: tuple

    def __post_init__(self):
        word = tuple(int(i) for i in self.word)
        params = tuple(self.params)
        if len(word) != len(params):
            raise ValueError("word and params must have equal length")
        if any(p <= 0 for p in params):
            raise ValueError("all parameters must be strictly positive")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "params", params)

    def to_json_dict(self) -> dict:
        return {"word": list(self.word), "params": [str(p) for p in self.params]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "LusztigParams":
        try:
            word = [int(i) for i in data["word"]]
            params = [Fraction(str(p)) for p in data["params"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed params object: {exc}") from exc
        return cls(tuple(word), tuple(params))


@dataclass(frozen=True)
class MinorWitness:
    """The first violated constraint of a failed membership test: the
    1-based row/column sets of the offending minor and its value."""

    rows: tuple
    cols: tuple
    value: object
    note: str = ""

    def describe(self) -> str:
        base = f"minor rows {set(self.rows)} cols {set(self.cols)} = {self.value}"
        return f"{base} ({self.note})" if self.note else base

    def to_json_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols),
                "value": str(self.value), "note": self.note}


@dataclass(frozen=True)
class PositivityVerdict:
    member: bool
    witness: Optional[MinorWitness] = None

    def __post_init__(self):
        if self.member == (self.witness is not None):
            raise ValueError("witness must be present exactly when member is false")

    def to_json_dict(self) -> dict:
        return {"member": self.member,
                "witness": self.witness.to_json_dict() if self.witness else None}


# ---------------------------------------------------------------------------
# Evaluation: parameters -> matrix


def elementary(i: int, a, sign: str, n: int) -> RationalMatrix:
    """The elementary factor for letter i: identity plus a single
    off-diagonal entry a at (i+1, i) for 'lower', (i, i+1) for 'upper'."""
    _check_sign(sign)
    if not 1 <= i <= n - 1:
        raise ValueError(f"letter out of range 1..{n - 1}: {i}")
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    if sign == "lower":
        rows[i][i - 1] = Fraction(a)
    else:
        rows[i - 1][i] = Fraction(a)
    return RationalMatrix.from_rows(rows)


def evaluate_params(p: LusztigParams, sign: str, n: int) -> RationalMatrix:
    """Ordered product of elementary factors along the word, left to
    right.  The result is unit triangular of the requested sign; with a
    reduced word for the full reversal and positive parameters it is
    totally positive.
    """
    _check_sign(sign)
    out = RationalMatrix.identity(n)
    for i, a in zip(p.word, p.params):
        out = out @ elementary(i, a, sign, n)
    return out


# ---------------------------------------------------------------------------
# Extraction: matrix -> parameters
#
# The last parameter of a product along a reduced word peels off as a
# ratio of two minors.  For u in the cell of w with last letter i, the
# wedge of the first i columns of u is supported on row sets dominated
# by sorted(w{1..i}); stripping the last factor u -> u * y_i(-t) kills
# the coordinate at exactly that extreme row set, which forces
#
#     t = minor(u, R, {1..i}) / minor(u, R, {1..i-1, i+1}),
#     R = sorted(w({1..i})).
#
# Iterating over the word right-to-left (and transposing for the upper
# side) extracts every parameter with two small determinants per letter,
# for any reduced word.  A vanishing denominator, a non-positive
# parameter, or a non-identity remainder all mean "outside the cell".


def extract_params(u, w: WeylElement, sign: str,
                   word: Optional[tuple] = None,
                   atol: Optional[float] = None) -> LusztigParams:
    """Invert :func:`evaluate_params`: recover the parameters of ``u`` on
    the cell of ``w``, along the canonical reduced word unless an explicit
    reduced ``word`` is given.

    Raises :class:`NotInCell` when the peeling forces a zero, negative,
    or inconsistent parameter (that is, u lies outside the cell).  ``u``
    may be a :class:`RationalMatrix` (exact mode, default) or a nested
    float sequence with ``atol`` supplied for the consistency checks.
    """
    _check_sign(sign)
    n = w.n
    if word is None:
        word = reduced_word(w)
    else:
        word = tuple(word)
        if not is_reduced(word, n) or WeylElement.from_word(word, n) != w:
            raise ValueError("word is not a reduced word for w")

    exact = isinstance(u, RationalMatrix)
    if exact:
        if u.n != n:
            raise ValueError("matrix size does not match w")
        if not u.is_unit_triangular(sign):
            raise ValueError(f"input is not unit {sign} triangular")
        rows = [list(row) for row in u.rows]
    else:
        if atol is None:
            raise ValueError("float extraction requires atol")
        rows = [[float(x) for x in row] for row in u]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("matrix size does not match w")

    if sign == "upper":
        # transpose maps upper products to lower products along the
        # reversed word, which spells the inverse element
        flipped = [[rows[c][r] for c in range(n)] for r in range(n)]
        if exact:
            flipped = RationalMatrix.from_rows(flipped)
        inner = extract_params(flipped, w.inverse(), "lower",
                               word=tuple(reversed(word)), atol=atol)
        return LusztigParams(word, tuple(reversed(inner.params)))

    params = [None] * len(word)
    w_cur = w
    scale = 1.0 if exact else max(1.0, max(abs(x) for r in rows for x in r))
    for k in range(len(word) - 1, -1, -1):
        i = word[k]
        rset = tuple(sorted(w_cur.oneline[:i]))
        cols_num = tuple(range(1, i + 1))
        cols_den = tuple(range(1, i)) + (i + 1,)
        num = _minor_of_rows(rows, rset, cols_num, exact)
        den = _minor_of_rows(rows, rset, cols_den, exact)
        if (den == 0) if exact else (abs(den) <= 1e-13 * scale):
            raise NotInCell(f"peeling letter {i}: pivot minor vanishes "
                            "(matrix is outside the cell)")
        t = num / den
        if (t == 0) if exact else (abs(t) <= 1e-13):
            raise NotInCell(f"parameter at word position {k} is forced to zero")
        params[k] = t
        for r in range(n):
            rows[r][i - 1] -= t * rows[r][i]
        w_cur = w_cur * WeylElement.simple(i, n)

    # fully peeled: the remainder must be the identity
    if exact:
        if any(rows[r][c] != (1 if r == c else 0)
               for r in range(n) for c in range(n)):
            raise NotInCell("parameters do not reproduce the matrix "
                            "(matrix is outside the cell)")
    else:
        err = max(abs(rows[r][c] - (1.0 if r == c else 0.0))
                  for r in range(n) for c in range(n))
        if err > atol * scale:
            raise NotInCell(f"parameters reproduce the matrix only to {err:.3g}")
    bad = [t for t in params if t <= 0]
    if bad:
        raise NotInCell(f"non-positive parameter(s) forced: {bad}")
    return LusztigParams(word, tuple(params))


def _minor_of_rows(rows, rset, cset, exact):
    sub = [[rows[r - 1][c - 1] for c in cset] for r in rset]
    return _det([list(r) for r in sub]) if exact else float_det(sub)


def _evaluate_float(word, params, sign, n):
    out = [[float(r == c) for c in range(n)] for r in range(n)]
    for i, a in zip(word, params):
        a = float(a)
        # right-multiply by the elementary factor: one column update
        if sign == "lower":
            src, dst = i, i - 1
        else:
            src, dst = i - 1, i
        for r in range(n):
            out[r][dst] += a * out[r][src]
    return out


# ---------------------------------------------------------------------------
# Positivity tests


MAX_TEST_DIMENSION = 6

_DETECTION_SEEDS = (0x5EED0001, 0x5EED0002, 0x5EED0003)


@lru_cache(maxsize=None)
def relevant_minor_pairs(n: int, sign: str) -> tuple:
    """All (rows, cols) index-set pairs whose minor is not identically
    zero on the unit-triangular group of the given sign.

    Detection is sample-based: a minor is declared identically zero iff
    it vanishes on three independent positive cell points with exact
    rational parameters (a polynomial that vanishes at three generic
    positive points of the cell is zero on the cell at these sizes; the
    combinatorial description is cross-checked in the test suite).
    Pairs are ordered by size, then colexicographically.
    """
    _check_sign(sign)
    w0 = longest_element(range(1, n), n)
    samples = [evaluate_params(sample_positive(w0, sign, seed, scale=7), sign, n)
               for seed in _DETECTION_SEEDS]
    pairs = []
    for k in range(1, n + 1):
        subsets = sorted((tuple(i + 1 for i in c) for c in combinations(range(n), k)),
                         key=lambda t: t[::-1])
        for rows in subsets:
            for cols in subsets:
                if any(s.minor(rows, cols) != 0 for s in samples):
                    pairs.append((rows, cols))
    return tuple(pairs)


def is_totally_positive_unitriangular(u: RationalMatrix, sign: str) -> PositivityVerdict:
    """Membership in the totally positive unit-triangular semigroup:
    every minor that is not identically zero on the triangular group must
    be strictly positive.  Brute force over all index pairs; exact."""
    _check_sign(sign)
    if u.n > MAX_TEST_DIMENSION:
        raise ValueError(f"positivity tests are limited to n <= {MAX_TEST_DIMENSION}")
    if not u.is_unit_triangular(sign):
        raise ValueError(f"input is not unit {sign} triangular")
    for rows, cols in relevant_minor_pairs(u.n, sign):
        value = u.minor(rows, cols)
        if value <= 0:
            return PositivityVerdict(False, MinorWitness(rows, cols, value,
                                                         "must be > 0"))
    return PositivityVerdict(True)


def _all_minors_positive(g: RationalMatrix) -> PositivityVerdict:
    """The classical criterion: every minor of every size is > 0."""
    n = g.n
    for k in range(1, n + 1):
        subsets = sorted((tuple(i + 1 for i in c) for c in combinations(range(n), k)),
                         key=lambda t: t[::-1])
        for rows in subsets:
            for cols in subsets:
                value = g.minor(rows, cols)
                if value <= 0:
                    return PositivityVerdict(False, MinorWitness(rows, cols, value,
                                                                 "must be > 0"))
    return PositivityVerdict(True)


def is_g_positive(g: RationalMatrix) -> PositivityVerdict:
    """Membership in the totally positive semigroup of SL_n.

    Two independent routes are evaluated and must agree: (a) the Gaussian
    factorization exists and each factor (unit upper, positive diagonal,
    unit lower) passes its own positivity test; (b) every minor of g of
    every size is strictly positive.  Determinant != 1 is a negative
    verdict, not an error.
    """
    if g.n > MAX_TEST_DIMENSION:
        raise ValueError(f"positivity tests are limited to n <= {MAX_TEST_DIMENSION}")
    if g.det() != 1:
        full = tuple(range(1, g.n + 1))
        return PositivityVerdict(False, MinorWitness(full, full, g.det(),
                                                     "determinant must be 1"))
    by_factorization = True
    try:
        factors = gauss_decompose(g)
        if any(d <= 0 for d in factors.torus.diagonal_entries()):
            by_factorization = False
        elif not is_totally_positive_unitriangular(factors.upper, "upper").member:
            by_factorization = False
        elif not is_totally_positive_unitriangular(factors.lower, "lower").member:
            by_factorization = False
    except DecompositionUnavailable:
        by_factorization = False

    by_minors = _all_minors_positive(g)
    if by_factorization != by_minors.member:
        raise InconsistentCriteria(
            "factorization-based and all-minors membership disagree "
            f"(factorization={by_factorization}, minors={by_minors.member})")
    return by_minors


# ---------------------------------------------------------------------------
# Deterministic sampling


def sample_positive(w: WeylElement, sign: str, seed: int, scale: int = 4) -> LusztigParams:
    """Pseudo-random positive rational parameters on the canonical word
    of w; reproducible from the seed."""
    _check_sign(sign)
    word = reduced_word(w)
    rng = SplitMix64(seed)
    return LusztigParams(word, tuple(rng.fraction(scale) for _ in word))


def sample_torus_matrix(n: int, seed: int, scale: int = 4) -> RationalMatrix:
    """Random positive diagonal matrix with exact determinant 1: the
    first n-1 entries are sampled, the last is forced."""
    rng = SplitMix64(seed)
    entries = [rng.fraction(scale) for _ in range(n - 1)]
    prod = Fraction(1)
    for e in entries:
        prod *= e
    entries.append(1 / prod)
    return RationalMatrix.diagonal(entries)


def sample_g_positive(n: int, seed: int, scale: int = 4) -> RationalMatrix:
    """Random element of the totally positive semigroup, built as
    (upper cell point) * (positive torus) * (lower cell point)."""
    w0 = longest_element(range(1, n), n)
    upper = evaluate_params(sample_positive(w0, "upper", derive_seed(seed, 0), scale),
                            "upper", n)
    torus = sample_torus_matrix(n, derive_seed(seed, 1), scale)
    lower = evaluate_params(sample_positive(w0, "lower", derive_seed(seed, 2), scale),
                            "lower", n)
    return upper @ torus @ lower

"""Exact dense linear algebra over prime fields and over the rationals.

Every rank and kernel here is exact; floating point never decides a
pivot.  The prime-field elimination stores residues in float64 because
all intermediate values are integers kept strictly below 2**53:

- rows are eliminated in narrow panels whose modular reductions are
  deferred (an entry accumulates at most ``_PANEL`` products of reduced
  values, so it stays below ``_PANEL * (p-1)**2 + p < 2**53``);
- the trailing submatrix is updated once per panel through a float64
  matrix product (BLAS speed) whose dot products have the same bound;
- reductions use multiply-by-1/p and floor, whose quotient is off by at
  most one and is repaired by a conditional pass, never by rounding.

The rational path clears denominators row by row and runs fraction-free
(Bareiss) elimination on Python integers.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

import numpy as np

__all__ = [
    "FieldSpec",
    "GF32003",
    "RATIONALS",
    "rank",
    "kernel_basis",
    "rank_and_left_kernel",
    "matmul_mod",
]

# Largest usable modulus: a single product must stay below 2**53 so the
# degenerate panel width 1 is still exact in float64.
_MAX_PRIME = 94906249
_PANEL = 128
_EXACT = 2**53


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    top = isqrt(n)
    while d <= top:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: GF(p) for a prime p, or the exact rationals."""

    kind: str = "prime"
    p: int | None = 32003

    def __post_init__(self) -> None:
        if self.kind == "prime":
            p = self.p
            if not isinstance(p, int) or p <= 3:
                raise ValueError("prime modulus must be an integer > 3")
            if p > _MAX_PRIME:
                raise ValueError(f"prime modulus must be <= {_MAX_PRIME}")
            if not _is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
        elif self.kind == "rationals":
            object.__setattr__(self, "p", None)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    @property
    def dtype(self):
        """numpy dtype used for matrices over this field."""
        return np.int64 if self.is_prime_field else object

    @property
    def sample_bound(self) -> int:
        """Exclusive upper bound for integer coefficient sampling.

        Rational instances draw from the same range as the default prime
        field, so a fixed seed yields the same integer matrix over both
        fields; the cross-field audit relies on this.
        """
        return self.p if self.is_prime_field else 32003

    def reduce(self, x):
        return x % self.p if self.is_prime_field else x

    def label(self) -> str:
        return f"GF({self.p})" if self.is_prime_field else "QQ"


GF32003 = FieldSpec()
RATIONALS = FieldSpec(kind="rationals", p=None)


def _as_matrix(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def _as_int(x) -> int:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise TypeError("prime-field matrices must have integer entries")
        return x.numerator
    return operator.index(x)


def _to_residues(arr: np.ndarray, p: int) -> np.ndarray:
    """Copy `arr` into float64 with every entry reduced into [0, p)."""
    if arr.dtype.kind in "iu":
        return np.asarray(arr % p, dtype=np.float64)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.floor(arr)):
            raise TypeError("prime-field matrices must have integer entries")
        return np.asarray(arr % p, dtype=np.float64)
    flat = [_as_int(x) % p for x in arr.ravel().tolist()]
    return np.asarray(flat, dtype=np.float64).reshape(arr.shape)


def _reduce_block(w: np.ndarray, p: float) -> None:
    """Exact in-place reduction into [0, p) of integer-valued float64 data.

    The floored quotient is off by at most one (values are < 2**53 and
    the relative error of w/p is ~2**-52), so one conditional pass in
    each direction repairs it exactly.
    """
    q = np.floor(w * (1.0 / p))
    w -= q * p
    w[w < 0.0] += p
    w[w >= p] -= p


def _echelon_core(A: np.ndarray, p: int, pivot_limit: int) -> int:
    """In-place blocked row echelon over GF(p); returns the rank.

    Pivots are searched in columns [0, pivot_limit) only, while row
    operations span the whole width, so augmenting with an identity
    tracks the row transform.  Trailing entries are only reduced when
    they are about to multiply something: an entry accumulates at most
    one bounded dot product per panel, which keeps it far below 2**53
    (see _max_deferred).  Rows >= rank end up mathematically zero across
    the pivot region; callers must reduce any region they read back.
    """
    m, n = A.shape
    panel = max(1, min(_PANEL, (_EXACT - p) // ((p - 1) * (p - 1))))
    _check_deferred_bound(p, panel, pivot_limit)
    r = 0
    c0 = 0
    while c0 < pivot_limit and r < m:
        c1 = min(c0 + panel, pivot_limit)
        r0 = r
        piv_cols: list[int] = []
        for j in range(c0, c1):
            col = A[r:, j]
            _reduce_block(col, p)
            nz = np.flatnonzero(col)
            if nz.size == 0:
                continue
            pi = r + int(nz[0])
            if pi != r:
                A[[r, pi]] = A[[pi, r]]
            inv = pow(int(A[r, j]), p - 2, p)
            if j + 1 < c1:
                _reduce_block(A[r, j + 1 : c1], p)
            if r + 1 < m:
                f = A[r + 1 :, j] * float(inv)
                _reduce_block(f, p)
                if j + 1 < c1:
                    A[r + 1 :, j + 1 : c1] -= np.outer(f, A[r, j + 1 : c1])
                A[r + 1 :, j] = f
            piv_cols.append(j)
            r += 1
            if r == m:
                break
        k = r - r0
        if k and c1 < n:
            T = A[r0:r, c1:]
            L = A[r0:r, piv_cols]
            _reduce_block(T[0], p)
            for i in range(1, k):
                _reduce_block(T[i], p)
                T[i] -= L[i, :i] @ T[:i]
                _reduce_block(T[i], p)
            if r < m:
                A[r:, c1:] -= A[r:, piv_cols] @ T
        c0 = c1
    return r


def _check_deferred_bound(p: int, panel: int, pivot_limit: int) -> None:
    # One deferred dot product (<= panel terms of reduced factors) per
    # panel, plus the in-panel outer-product accumulation.
    panels = pivot_limit // panel + 1
    bound = p + (panels + 1) * panel * (p - 1) * (p - 1)
    if bound >= _EXACT:
        raise ValueError("matrix too wide for exact deferred reduction at this p")


def _rank_modp(a: np.ndarray, p: int) -> int:
    A = np.ascontiguousarray(_to_residues(a, p))
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return _echelon_core(A, p, A.shape[1])


def _left_kernel_modp(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """(rank, Q) with Q (m-rank) x m of full rank and Q a = 0, over GF(p)."""
    arr = _to_residues(a, p)
    m, n = arr.shape
    if m == 0:
        return 0, np.zeros((0, 0), dtype=np.int64)
    if n == 0:
        return 0, np.eye(m, dtype=np.int64)
    aug = np.zeros((m, n + m), dtype=np.float64)
    aug[:, :n] = arr
    aug[np.arange(m), n + np.arange(m)] = 1.0
    r = _echelon_core(aug, p, n)
    q = aug[r:, n:]
    _reduce_block(q, p)
    return r, np.asarray(q, dtype=np.int64)


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); returns (R, pivot columns)."""
    A = np.ascontiguousarray(np.asarray(_to_residues(a, p), dtype=np.int64))
    m, n = A.shape
    piv: list[int] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, j])
        if nz.size == 0:
            continue
        pi = r + int(nz[0])
        if pi != r:
            A[[r, pi]] = A[[pi, r]]
        inv = pow(int(A[r, j]), p - 2, p)
        A[r] = A[r] * inv % p
        others = np.flatnonzero(A[:, j])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, j], A[r])) % p
        piv.append(j)
        r += 1
    return A, piv


def _int_rows(arr: np.ndarray) -> list[list[int]]:
    """Rows as Python integers, clearing rational denominators row by row."""
    out: list[list[int]] = []
    for row in arr.tolist():
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        cleared = []
        for x in row:
            if isinstance(x, Fraction):
                cleared.append(int(x * den))
            else:
                cleared.append(operator.index(x) * den)
        out.append(cleared)
    return out


def _rank_bareiss(arr: np.ndarray) -> int:
    """Fraction-free elimination; every intermediate entry is a minor."""
    rows = _int_rows(arr)
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[c]
        for i in range(r + 1, m):
            irow = rows[i]
            f = irow[c]
            for j in range(c + 1, n):
                q, rem = divmod(irow[j] * pval - f * prow[j], prev)
                if rem:
                    raise ArithmeticError("fraction-free elimination lost exactness")
                irow[j] = q
            irow[c] = 0
        prev = pval
        r += 1
    return r


def _rref_fraction(arr) -> tuple[list[list[Fraction]], list[int]]:
    rows = [[Fraction(x) for x in row] for row in np.asarray(arr).tolist()]
    m = len(rows)
    n = len(rows[0]) if m else 0
    piv: list[int] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        pi = None
        for i in range(r, m):
            if rows[i][j]:
                pi = i
                break
        if pi is None:
            continue
        if pi != r:
            rows[r], rows[pi] = rows[pi], rows[r]
        inv = 1 / rows[r][j]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(j)
        r += 1
    return rows, piv


def rank(a, field: FieldSpec = GF32003) -> int:
    """Exact rank of the matrix `a` over `field`."""
    arr = _as_matrix(a)
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return 0
    if field.is_prime_field:
        return _rank_modp(arr, field.p)
    return _rank_bareiss(arr)


def kernel_basis(a, field: FieldSpec = GF32003) -> np.ndarray:
    """Basis of the right kernel of `a`; one basis vector per column.

    The returned matrix has shape (cols(a), cols(a) - rank(a)).  Over a
    prime field the entries are int64 residues; over the rationals they
    are Fractions.
    """
    arr = _as_matrix(a)
    m, n = arr.shape
    if n == 0:
        return np.zeros((0, 0), dtype=field.dtype)
    if m == 0:
        if field.is_prime_field:
            return np.eye(n, dtype=np.int64)
        return np.asarray(
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)],
            dtype=object,
        )
    if field.is_prime_field:
        p = field.p
        red, piv = _rref_modp(arr, p)
        free = [j for j in range(n) if j not in piv]
        out = np.zeros((n, len(free)), dtype=np.int64)
        for col, fc in enumerate(free):
            out[fc, col] = 1
            for t, pc in enumerate(piv):
                out[pc, col] = (-int(red[t, fc])) % p
        return out
    red, piv = _rref_fraction(arr)
    free = [j for j in range(n) if j not in piv]
    out = np.empty((n, len(free)), dtype=object)
    out[:] = Fraction(0)
    for col, fc in enumerate(free):
        out[fc, col] = Fraction(1)
        for t, pc in enumerate(piv):
            out[pc, col] = -red[t][fc]
    return out


def rank_and_left_kernel(a, field: FieldSpec = GF32003) -> tuple[int, np.ndarray]:
    """(rank, Q) with Q of shape (rows - rank, rows), full rank, Q a = 0.

    The rows of Q are coordinates on the cokernel of `a`: a vector's
    class in coker(a) is determined by Q @ v, and Q @ a = 0.
    """
    arr = _as_matrix(a)
    if field.is_prime_field:
        return _left_kernel_modp(arr, field.p)
    r = rank(arr, field)
    q = kernel_basis(arr.T, field).T
    return r, q


def matmul_mod(x, y, field: FieldSpec = GF32003) -> np.ndarray:
    """Exact matrix product over `field`.

    Over GF(p) the product is formed in float64, which is exact as long
    as the inner dimension stays below 2**53 / (p-1)**2.
    """
    X = _as_matrix(x)
    Y = _as_matrix(y)
    if X.shape[1] != Y.shape[0]:
        raise ValueError(f"shape mismatch {X.shape} @ {Y.shape}")
    if not field.is_prime_field:
        return X @ Y
    p = field.p
    inner = X.shape[1]
    if inner * (p - 1) * (p - 1) >= _EXACT:
        raise ValueError("inner dimension too large for exact float64 product")
    out = _to_residues(X, p) @ _to_residues(Y, p)
    _reduce_block(out, p)
    return np.asarray(out, dtype=np.int64)

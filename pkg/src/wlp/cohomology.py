"""Chern data, cohomology tables, stability classification, splitting types.

The kernel sheaf of a finite-length instance is locally free of rank 2
on the projective plane.  Its h0 comes from per-degree kernel ranks, h1
is the cokernel dimension, and h2 is obtained through Serre duality
combined with rank-2 self-duality (the dual is the bundle twisted by
-c1), so the Riemann-Roch identity h0 - h1 + h2 = chi is a genuine
three-way cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import ConsistencyFailure, LineDegenerate
from .graded import GradedMap, coker_dims, kernel_dims, scan_bounds
from .linalg import rank
from .poly import (
    BinaryForm,
    LineParam,
    binary_dim,
    binary_mult_matrix,
    random_line,
    restrict_to_line,
)

__all__ = [
    "ChernData",
    "chern_classes",
    "euler_char",
    "CohomologyTable",
    "default_table_range",
    "cohomology_table",
    "BundleClass",
    "classify",
    "instability_index",
    "SplittingType",
    "predicted_splitting",
    "splitting_on_line",
    "computed_splitting",
    "H0FormulaReport",
    "h0_formula_check",
]

STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class ChernData:
    """Chern classes of the kernel sheaf plus its normalization twist."""

    c1: int
    c2: int
    s: int

    def __post_init__(self) -> None:
        if self.s != (-self.c1) // 2:
            raise ValueError("normalization twist must be floor(-c1/2)")

    @property
    def c1_norm(self) -> int:
        return self.c1 + 2 * self.s

    @property
    def slope(self) -> Fraction:
        return Fraction(self.c1, 2)


def _e2(seq) -> int:
    s1 = sum(seq)
    return (s1 * s1 - sum(x * x for x in seq)) // 2


def chern_classes(source, target) -> ChernData:
    """Chern data of the kernel of a map with the given twists.

    Dividing total Chern polynomials of the two free modules and
    truncating in degree 2 gives c1 = b - a and
    c2 = e2(a) - e2(b) + b*(b - a).
    """
    a = sum(source)
    b = sum(target)
    c1 = b - a
    c2 = _e2(source) - _e2(target) + b * (b - a)
    return ChernData(c1=c1, c2=c2, s=(-c1) // 2)


def euler_char(c: ChernData, t: int) -> int:
    """Riemann-Roch Euler characteristic of the twisted rank-2 sheaf."""
    c1t = c.c1 + 2 * t
    c2t = c.c2 + c.c1 * t + t * t
    num = 3 * c1t + c1t * c1t - 2 * c2t
    if num % 2:
        raise ArithmeticError("Euler characteristic must be an integer")
    return 2 + num // 2


@dataclass(frozen=True)
class CohomologyTable:
    """Rows (t, h0, h1, h2) over a contiguous twist range."""

    rows: tuple[tuple[int, int, int, int], ...]

    def row(self, t: int) -> tuple[int, int, int, int]:
        lo = self.rows[0][0]
        return self.rows[t - lo]


def default_table_range(m: GradedMap) -> tuple[int, int]:
    """Twist range symmetric under the duality mirror t -> -3 - c1 - t."""
    lo, top = scan_bounds(m.source, m.target)
    ends = (lo - 1, top + 1)
    return min(ends), max(ends)


def cohomology_table(
    m: GradedMap, c: ChernData, trange: tuple[int, int] | None = None
) -> CohomologyTable:
    """Measure h0/h1/h2 per twist and cross-check Riemann-Roch everywhere."""
    h = coker_dims(m)
    lo, hi = trange if trange is not None else default_table_range(m)
    rows = []
    for t in range(lo, hi + 1):
        h0 = kernel_dims(m, t)
        h1 = h.value(t)
        h2 = kernel_dims(m, -3 - c.c1 - t)
        chi = euler_char(c, t)
        if h0 - h1 + h2 != chi:
            raise ConsistencyFailure(
                f"twist {t}: h0-h1+h2 = {h0}-{h1}+{h2} != chi = {chi}"
            )
        rows.append((t, h0, h1, h2))
    return CohomologyTable(tuple(rows))


@dataclass(frozen=True)
class BundleClass:
    """Stability classification of the normalized kernel bundle."""

    variant: str
    c1_norm: int
    k: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in (STABLE, STRICTLY_SEMISTABLE, UNSTABLE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.c1_norm not in (-1, 0):
            raise ValueError("c1_norm must be -1 or 0")
        if self.variant == STRICTLY_SEMISTABLE and self.c1_norm != 0:
            raise ValueError("strictly semistable requires c1_norm = 0")
        if self.variant == UNSTABLE:
            floor = 1 if self.c1_norm == 0 else 0
            if self.k is None or self.k < floor:
                raise ValueError(f"unstable with c1_norm={self.c1_norm} needs k >= {floor}")
        elif self.k is not None:
            raise ValueError("only unstable bundles carry an instability index")


def _h0_norm(m: GradedMap, c: ChernData, t: int) -> int:
    """h0 of the normalized bundle twisted by t."""
    return kernel_dims(m, c.s + t)


def instability_index(m: GradedMap, c: ChernData) -> int:
    """Largest j with a nonzero section of the normalized bundle at twist -j.

    Only meaningful for unstable instances; terminates because sections
    vanish below the smallest source twist.
    """
    j = 1 if c.c1_norm == 0 else 0
    while _h0_norm(m, c, -(j + 1)) != 0:
        j += 1
    return j


def classify(m: GradedMap, c: ChernData) -> BundleClass:
    """Stability of the normalized kernel bundle from h0 vanishing."""
    if c.c1_norm == 0:
        if _h0_norm(m, c, 0) == 0:
            return BundleClass(STABLE, 0)
        if _h0_norm(m, c, -1) == 0:
            return BundleClass(STRICTLY_SEMISTABLE, 0)
        return BundleClass(UNSTABLE, 0, instability_index(m, c))
    if _h0_norm(m, c, 0) == 0:
        return BundleClass(STABLE, -1)
    return BundleClass(UNSTABLE, -1, instability_index(m, c))


@dataclass(frozen=True)
class SplittingType:
    """Restriction to a general line: O(e) + O(f) with e <= f."""

    e: int
    f: int

    def __post_init__(self) -> None:
        if self.e > self.f:
            raise ValueError("splitting type must be ordered e <= f")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.e, self.f)


def predicted_splitting(b: BundleClass) -> SplittingType:
    """Normalized splitting type forced by the classification.

    Semistable bundles split as evenly as possible (Grauert-Mulich);
    unstable ones split as (-k, k), shifted once more when c1 = -1.
    """
    if b.variant in (STABLE, STRICTLY_SEMISTABLE):
        return SplittingType(-1, 0) if b.c1_norm == -1 else SplittingType(0, 0)
    if b.c1_norm == 0:
        return SplittingType(-b.k, b.k)
    return SplittingType(-b.k - 1, b.k)


def _restricted_rank(m: GradedMap, grid, t: int) -> int:
    rdims = [binary_dim(t - b) for b in m.target]
    cdims = [binary_dim(t - a) for a in m.source]
    out = np.zeros((sum(rdims), sum(cdims)), dtype=m.field.dtype)
    roff = 0
    for j, rd in enumerate(rdims):
        coff = 0
        for i, cd in enumerate(cdims):
            g: BinaryForm = grid[j][i]
            if rd and cd and g.degree >= 0 and not g.is_zero:
                out[roff : roff + rd, coff : coff + cd] = binary_mult_matrix(
                    g, t - m.source[i], m.field
                )
            coff += cd
        roff += rd
    return rank(out, m.field)


def _restricted_kernel_dim(m: GradedMap, grid, t: int) -> int:
    return sum(binary_dim(t - a) for a in m.source) - _restricted_rank(m, grid, t)


def splitting_on_line(m: GradedMap, c: ChernData, line: LineParam) -> SplittingType | None:
    """Splitting type measured on one line, or None if the profile is inconsistent.

    Restricts every entry to the line, then reads the section-count
    staircase of the restricted kernel: the first twist with a nonzero
    kernel pins the larger summand, and the whole staircase must match
    the resulting pair.
    """
    grid = [
        [restrict_to_line(entry, line, m.field) for entry in row]
        for row in m.entries
    ]
    t_lo = min(m.source)
    t_hi = c.s + 2
    first = None
    for t in range(t_lo, t_hi + 1):
        kd = _restricted_kernel_dim(m, grid, t)
        if kd:
            first = (t, kd)
            break
    if first is None:
        return None
    t0, kd0 = first
    if kd0 == 1:
        f = -t0
        e = c.c1 - f
    elif kd0 == 2 and 2 * t0 == -c.c1:
        e = f = -t0
    else:
        return None
    if e > f:
        return None
    for t in range(t_lo, max(-e, t0) + 3):
        if _restricted_kernel_dim(m, grid, t) != binary_dim(t + e) + binary_dim(t + f):
            return None
    return SplittingType(e + c.s, f + c.s)


def computed_splitting(
    m: GradedMap,
    c: ChernData,
    rng: np.random.Generator | None = None,
    line: LineParam | None = None,
    max_tries: int = 8,
) -> SplittingType:
    split, _ = splitting_with_line(m, c, rng, line, max_tries)
    return split


def splitting_with_line(
    m: GradedMap,
    c: ChernData,
    rng: np.random.Generator | None = None,
    line: LineParam | None = None,
    max_tries: int = 8,
) -> tuple[SplittingType, LineParam]:
    """Like computed_splitting but also returns the line that certified it."""
    tried = 0
    if line is not None:
        split = splitting_on_line(m, c, line)
        if split is not None:
            return split, line
        tried += 1
    if rng is None:
        raise LineDegenerate("the supplied line is degenerate and no generator was given")
    while tried < max_tries:
        cand = random_line(rng, m.field)
        split = splitting_on_line(m, c, cand)
        if split is not None:
            return split, cand
        tried += 1
    raise LineDegenerate(
        f"no consistent rank-2 restriction profile after {max_tries} lines"
    )


@dataclass(frozen=True)
class H0FormulaReport:
    """Check of h0(normalized(t)) = C(k+t+2, 2) across the unstable range."""

    applicable: bool
    ok: bool
    t_lo: int | None = None
    t_hi: int | None = None
    mismatches: tuple[tuple[int, int, int], ...] = ()


def h0_formula_check(m: GradedMap, b: BundleClass, c: ChernData) -> H0FormulaReport:
    """Verify the binomial section-count formula on an unstable instance.

    The range is -k-2 <= t < k when c1_norm = 0 and -k-2 <= t <= k when
    c1_norm = -1; mismatches are reported as (t, measured, expected).
    """
    if b.variant != UNSTABLE:
        return H0FormulaReport(applicable=False, ok=True)
    k = b.k
    t_lo = -k - 2
    t_hi = k - 1 if c.c1_norm == 0 else k
    mismatches = []
    for t in range(t_lo, t_hi + 1):
        measured = _h0_norm(m, c, t)
        expected = comb(k + t + 2, 2)
        if measured != expected:
            mismatches.append((t, measured, expected))
    return H0FormulaReport(
        applicable=True,
        ok=not mismatches,
        t_lo=t_lo,
        t_hi=t_hi,
        mismatches=tuple(mismatches),
    )

"""Twisted graded free modules, graded maps, and Hilbert functions.

A map phi: (+) R(-a_i) -> (+) R(-b_j) between n+2 source and n target
summands is stored as an n x (n+2) grid of homogeneous entries, entry
(j, i) of degree a_i - b_j.  When the cokernel M has finite length the
free resolution with dual twists a - b - c makes dim M_d equal to an
alternating sum of binomials; ``coker_dims`` measures dimensions through
exact ranks, certifies them against that alternating sum on a window
that provably pins the whole module, and rejects degenerate maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .errors import DegreeError, GenerationFailed, NotFiniteLength, ShapeError
from .linalg import GF32003, FieldSpec, rank, rank_and_left_kernel
from .poly import HomogPoly, mult_matrix, num_monomials, random_homog

__all__ = [
    "free_dim",
    "GradedMap",
    "HilbertFunction",
    "phi_matrix",
    "phi_rank",
    "coker_coords",
    "expected_hilbert",
    "scan_bounds",
    "coker_dims",
    "kernel_dims",
    "random_instance",
    "ci_instance",
]


def free_dim(twists, d: int) -> int:
    """Dimension of the degree-d piece of (+) R(-a) over the given twists."""
    return sum(comb(d - a + 2, 2) for a in twists if d >= a)


@dataclass(frozen=True)
class GradedMap:
    """Degree-zero graded map between twisted free modules.

    entries[j][i] is the row-j, column-i entry, homogeneous of degree
    source[i] - target[j] (a zero polynomial of that degree when the
    difference is negative).  Instances are immutable; per-degree ranks
    and the Hilbert function are memoized on the side.
    """

    source: tuple[int, ...]
    target: tuple[int, ...]
    entries: tuple[tuple[HomogPoly, ...], ...]
    field: FieldSpec = GF32003
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.target)
        if n < 1:
            raise ShapeError("target needs at least one summand")
        if len(self.source) != n + 2:
            raise ShapeError(
                f"source needs {n + 2} summands for a rank-{n} target, "
                f"got {len(self.source)}"
            )
        if len(self.entries) != n:
            raise ShapeError(f"entry grid needs {n} rows, got {len(self.entries)}")
        for j, row in enumerate(self.entries):
            if len(row) != n + 2:
                raise ShapeError(
                    f"entry row {j} needs {n + 2} columns, got {len(row)}"
                )
            for i, entry in enumerate(row):
                want = self.source[i] - self.target[j]
                if entry.degree != want:
                    raise DegreeError(
                        f"entry ({j},{i}) must have degree {want}, "
                        f"got {entry.degree}"
                    )

    @property
    def n(self) -> int:
        return len(self.target)

    @property
    def a(self) -> int:
        return sum(self.source)

    @property
    def b(self) -> int:
        return sum(self.target)


def phi_matrix(m: GradedMap, d: int) -> np.ndarray:
    """Degree-d matrix of the map, blocks in summand-then-monomial order."""
    rdims = [num_monomials(d - b) for b in m.target]
    cdims = [num_monomials(d - a) for a in m.source]
    out = np.zeros((sum(rdims), sum(cdims)), dtype=m.field.dtype)
    roff = 0
    for j, rd in enumerate(rdims):
        coff = 0
        for i, cd in enumerate(cdims):
            entry = m.entries[j][i]
            if rd and cd and entry.degree >= 0 and not entry.is_zero:
                out[roff : roff + rd, coff : coff + cd] = mult_matrix(
                    entry, d - m.source[i], m.field
                )
            coff += cd
        roff += rd
    return out


def phi_rank(m: GradedMap, d: int) -> int:
    """Exact rank of the degree-d matrix, memoized per map."""
    key = ("rank", d)
    if key not in m._cache:
        m._cache[key] = rank(phi_matrix(m, d), m.field)
    return m._cache[key]


def coker_coords(m: GradedMap, d: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Coordinates on the degree-d cokernel piece, memoized per map.

    Returns (Q, lift_cols): Q maps the degree-d piece of the target onto
    coker coordinates (Q has full row rank and kills the image of the
    map), and lift_cols are target-basis positions whose unit vectors
    span the cokernel, picked from the pivot columns of Q's reduced
    form.  Also primes the rank cache for this degree.
    """
    key = ("coker", d)
    if key not in m._cache:
        from .linalg import _rref_fraction, _rref_modp  # local: private helpers

        r, q = rank_and_left_kernel(phi_matrix(m, d), m.field)
        m._cache[("rank", d)] = r
        if q.shape[0] == 0:
            cols: tuple[int, ...] = ()
        elif m.field.is_prime_field:
            _, piv = _rref_modp(q, m.field.p)
            cols = tuple(piv)
        else:
            _, piv = _rref_fraction(q)
            cols = tuple(piv)
        m._cache[key] = (q, cols)
    return m._cache[key]


def expected_hilbert(source, target, d: int) -> int:
    """Alternating-sum dimension of the cokernel in degree d.

    Reads off the length-four free resolution whose outer terms carry the
    dual twists a - b - c; valid whenever the cokernel has finite length.
    """
    if len(source) != len(target) + 2:
        raise ShapeError("source must have exactly two more summands than target")
    shift = sum(source) - sum(target)
    dual_src = [shift - a for a in source]
    dual_tgt = [shift - b for b in target]
    return (
        free_dim(target, d)
        - free_dim(source, d)
        + free_dim(dual_src, d)
        - free_dim(dual_tgt, d)
    )


def scan_bounds(source, target) -> tuple[int, int]:
    """(lowest possibly-nonzero degree, top degree) of a finite-length cokernel."""
    shift = sum(source) - sum(target)
    return min(target), shift - min(target) - 3


@dataclass(frozen=True)
class HilbertFunction:
    """Finite-support degree -> dimension map; dims trimmed at both ends."""

    offset: int
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dims and (self.dims[0] == 0 or self.dims[-1] == 0):
            raise ValueError("Hilbert function must be trimmed")

    @staticmethod
    def from_values(start: int, values) -> "HilbertFunction":
        vals = list(values)
        lo = 0
        while lo < len(vals) and vals[lo] == 0:
            lo += 1
        hi = len(vals)
        while hi > lo and vals[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            return HilbertFunction(0, ())
        return HilbertFunction(start + lo, tuple(vals[lo:hi]))

    @property
    def is_zero(self) -> bool:
        return not self.dims

    @property
    def min_deg(self) -> int | None:
        return self.offset if self.dims else None

    @property
    def max_deg(self) -> int | None:
        return self.offset + len(self.dims) - 1 if self.dims else None

    @property
    def total(self) -> int:
        return sum(self.dims)

    def value(self, d: int) -> int:
        if not self.dims or d < self.offset or d > self.offset + len(self.dims) - 1:
            return 0
        return self.dims[d - self.offset]


def _certificate_top(source, target) -> int:
    # M is generated in degrees <= max(target): once a degree >= max(target)
    # vanishes, everything above it vanishes too.
    _, top = scan_bounds(source, target)
    return max(top + 1, max(target))


def coker_dims(m: GradedMap) -> HilbertFunction:
    """Hilbert function of the cokernel, certified to be finite length.

    Scans from min(target) up to the certificate degree, comparing the
    rank-measured dimension against the alternating sum at every step;
    any mismatch means the map is too degenerate for the resolution to
    be exact and raises NotFiniteLength.
    """
    if "hilbert" in m._cache:
        return m._cache["hilbert"]
    lo, top = scan_bounds(m.source, m.target)
    hi = _certificate_top(m.source, m.target)
    values = []
    for d in range(lo, hi + 1):
        expected = expected_hilbert(m.source, m.target, d)
        if expected > 0:
            # The rank profile will need cokernel coordinates here; the
            # augmented elimination computes them together with the rank.
            coker_coords(m, d)
        direct = free_dim(m.target, d) - phi_rank(m, d)
        if direct != expected:
            raise NotFiniteLength(
                f"degree {d}: measured dimension {direct} != alternating sum "
                f"{expected}; cokernel is not finite length"
            )
        if d <= top:
            values.append(direct)
    if expected_hilbert(m.source, m.target, hi) != 0:
        raise NotFiniteLength(
            f"alternating sum does not vanish at certificate degree {hi}"
        )
    h = HilbertFunction.from_values(lo, values)
    m._cache["hilbert"] = h
    return h


def kernel_dims(m: GradedMap, t: int) -> int:
    """Dimension of the degree-t kernel of the map (sections of the kernel sheaf)."""
    return free_dim(m.source, t) - phi_rank(m, t)


def _pattern_defect(source, target) -> str | None:
    """Cheap reasons why no map with these twists can have finite-length cokernel."""
    min_b = min(target)
    max_a = max(source)
    for i, a in enumerate(source):
        if a < min_b:
            return f"column {i} has only negative-degree entries"
    for j, b in enumerate(target):
        if b > max_a:
            return f"row {j} has only negative-degree entries"
    lo, _ = scan_bounds(source, target)
    hi = _certificate_top(source, target)
    for d in range(lo, hi + 1):
        if expected_hilbert(source, target, d) < 0:
            return f"alternating sum negative at degree {d}"
    if expected_hilbert(source, target, hi) != 0:
        return f"alternating sum nonzero at certificate degree {hi}"
    return None


def random_instance(
    source,
    target,
    rng: np.random.Generator,
    field: FieldSpec = GF32003,
    max_tries: int = 8,
) -> GradedMap:
    """Random map with the given twists and a certified finite-length cokernel.

    Entries are drawn afresh until the certificate passes, up to
    `max_tries`; degree patterns that can never pass fail fast.
    """
    source = tuple(int(a) for a in source)
    target = tuple(int(b) for b in target)
    if len(target) < 1 or len(source) != len(target) + 2:
        raise ShapeError("need n target and n+2 source twists with n >= 1")
    defect = _pattern_defect(source, target)
    if defect is not None:
        raise GenerationFailed(f"infeasible twist pattern: {defect}")
    last: NotFiniteLength | None = None
    for _ in range(max_tries):
        entries = tuple(
            tuple(
                random_homog(a - b, rng, field)
                if a >= b
                else HomogPoly.zero(a - b)
                for a in source
            )
            for b in target
        )
        m = GradedMap(source, target, entries, field)
        try:
            coker_dims(m)
            return m
        except NotFiniteLength as exc:
            last = exc
    raise GenerationFailed(
        f"no finite-length cokernel after {max_tries} tries for "
        f"source={source} target={target}"
    ) from last


def ci_instance(f1: HomogPoly, f2: HomogPoly, f3: HomogPoly, field: FieldSpec = GF32003) -> GradedMap:
    """Koszul presentation of R/(f1, f2, f3): R(-d1)+R(-d2)+R(-d3) -> R."""
    for f in (f1, f2, f3):
        if f.degree < 1:
            raise ValueError("complete-intersection forms need positive degree")
    return GradedMap(
        source=(f1.degree, f2.degree, f3.degree),
        target=(0,),
        entries=((f1, f2, f3),),
        field=field,
    )

"""Multiplication-by-linear-form rank profiles and the Lefschetz verdict.

The rank of x L: M_{d-1} -> M_d on a cokernel presented by phi is
rank([phi_d | B_L]) - rank(phi_d), where B_L realizes multiplication by
L between the degree d-1 and d pieces of the target free module.  It is
computed here in quotient coordinates: with Q_d projecting onto the
degree-d cokernel piece and unit vectors e_f (f over lift columns)
spanning the degree d-1 piece, the number equals rank(Q_d B_L[:, f]),
a product and elimination at the size of the Hilbert function rather
than of the presentation.  Generic behaviour is the componentwise
maximum over a few random linear forms (rank is lower-semicontinuous in
the coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cohomology import STABLE, STRICTLY_SEMISTABLE, BundleClass
from .errors import TheoremViolation
from .graded import GradedMap, HilbertFunction, coker_coords, coker_dims
from .linalg import matmul_mod, rank
from .poly import HomogPoly, monomial_basis, num_monomials, random_homog

__all__ = [
    "ProfileEntry",
    "RankProfile",
    "mult_rank_profile",
    "generic_profile",
    "WlpVerdict",
    "wlp_verdict",
    "PredictedRanges",
    "theorem_ranges",
    "ConcordanceReport",
    "verify_theorem",
    "unimodality",
]

INJECTIVE = "injective"
SURJECTIVE = "surjective"
BIJECTIVE = "bijective"
NEITHER = "neither"


@dataclass(frozen=True)
class ProfileEntry:
    d: int
    dim_prev: int
    dim_cur: int
    rank: int

    @property
    def flag(self) -> str:
        inj = self.rank == self.dim_prev
        surj = self.rank == self.dim_cur
        if inj and surj:
            return BIJECTIVE
        if inj:
            return INJECTIVE
        if surj:
            return SURJECTIVE
        return NEITHER

    @property
    def maximal(self) -> bool:
        return self.rank == min(self.dim_prev, self.dim_cur)


@dataclass(frozen=True)
class RankProfile:
    """Per-degree ranks of x L, with the forms that achieved them.

    `achieved_by[i]` lists the indices of the sampled forms whose rank at
    entries[i].d equals the reported (componentwise maximum) rank.
    """

    entries: tuple[ProfileEntry, ...]
    forms: tuple[HomogPoly, ...]
    achieved_by: tuple[tuple[int, ...], ...]

    @property
    def sample_count(self) -> int:
        return len(self.forms)


def _profile_degrees(h: HilbertFunction) -> range:
    if h.is_zero:
        return range(0)
    return range(h.offset, h.max_deg + 2)


def _lift_columns(m: GradedMap, L: HomogPoly, d: int, lift_cols) -> np.ndarray:
    """Columns L * e_f of the multiplication block, for target positions f.

    Position f in the degree d-1 target piece means monomial `mon` in
    summand j; multiplying by L lands on monomials mon + x/y/z inside
    the degree-d piece of the same summand.
    """
    rdims = [num_monomials(d - b) for b in m.target]
    cdims = [num_monomials(d - 1 - b) for b in m.target]
    roffs = np.concatenate([[0], np.cumsum(rdims)])
    coffs = np.concatenate([[0], np.cumsum(cdims)])
    out = np.zeros((int(roffs[-1]), len(lift_cols)), dtype=m.field.dtype)
    lterms = list(L.terms())
    for col, f in enumerate(lift_cols):
        j = int(np.searchsorted(coffs, f, side="right")) - 1
        mon = monomial_basis(d - 1 - m.target[j])[f - int(coffs[j])]
        target_index = {
            t: i for i, t in enumerate(monomial_basis(d - m.target[j]))
        }
        for v, c in lterms:
            row = int(roffs[j]) + target_index[(mon[0] + v[0], mon[1] + v[1], mon[2] + v[2])]
            out[row, col] = c
    return out


def _rank_of_multiplication(m: GradedMap, L: HomogPoly, d: int) -> int:
    h = coker_dims(m)
    if h.value(d) == 0 or h.value(d - 1) == 0:
        return 0
    q, _ = coker_coords(m, d)
    _, lift_cols = coker_coords(m, d - 1)
    cols = _lift_columns(m, L, d, lift_cols)
    return rank(matmul_mod(q, cols, m.field), m.field)


def mult_rank_profile(m: GradedMap, L: HomogPoly) -> RankProfile:
    """Rank profile of multiplication by the single linear form L."""
    if L.degree != 1 or L.is_zero:
        raise ValueError("multiplication needs a nonzero linear form")
    h = coker_dims(m)
    entries = []
    for d in _profile_degrees(h):
        rk = _rank_of_multiplication(m, L, d)
        entry = ProfileEntry(d, h.value(d - 1), h.value(d), rk)
        if rk > min(entry.dim_prev, entry.dim_cur):
            raise AssertionError(f"rank exceeds both dimensions at degree {d}")
        entries.append(entry)
    return RankProfile(tuple(entries), (L,), tuple((0,) for _ in entries))


def generic_profile(m: GradedMap, rng: np.random.Generator, samples: int = 3) -> RankProfile:
    """Componentwise-maximum profile over `samples` random linear forms."""
    if samples < 1:
        raise ValueError("need at least one sampled form")
    forms = []
    while len(forms) < samples:
        L = random_homog(1, rng, m.field)
        if not L.is_zero:
            forms.append(L)
    h = coker_dims(m)
    degrees = list(_profile_degrees(h))
    per_form = [[_rank_of_multiplication(m, L, d) for d in degrees] for L in forms]
    entries = []
    achieved = []
    for col, d in enumerate(degrees):
        ranks = [per_form[i][col] for i in range(samples)]
        best = max(ranks)
        entries.append(ProfileEntry(d, h.value(d - 1), h.value(d), best))
        achieved.append(tuple(i for i, rk in enumerate(ranks) if rk == best))
    return RankProfile(tuple(entries), tuple(forms), tuple(achieved))


@dataclass(frozen=True)
class WlpVerdict:
    """Per-degree flags plus the overall maximal-rank verdict."""

    flags: tuple[tuple[int, str], ...]
    wlp: bool
    first_surjective_degree: int | None


def wlp_verdict(p: RankProfile) -> WlpVerdict:
    flags = tuple((e.d, e.flag) for e in p.entries)
    wlp = all(f != NEITHER for _, f in flags)
    first_surj = None
    for d, f in reversed(flags):
        if f in (SURJECTIVE, BIJECTIVE):
            first_surj = d
        else:
            break
    return WlpVerdict(flags, wlp, first_surj)


@dataclass(frozen=True)
class PredictedRanges:
    """Guaranteed injective/surjective ranges, in normalized twists.

    Module degrees are twists shifted by s: the map at normalized twist t
    acts M_{t+s-1} -> M_{t+s}.
    """

    inj_max_t: int
    surj_min_t: int
    s: int
    derived_from_proof: bool = False

    @property
    def inj_max_d(self) -> int:
        return self.inj_max_t + self.s

    @property
    def surj_min_d(self) -> int:
        return self.surj_min_t + self.s


def theorem_ranges(b: BundleClass, s: int) -> PredictedRanges:
    """Predicted ranges for the classified bundle.

    The strictly semistable case is not covered by the stable/unstable
    statements; its ranges follow from the restriction criteria applied
    to the even splitting, and reports flag them as derived.
    """
    if b.variant == STABLE:
        if b.c1_norm == 0:
            return PredictedRanges(-1, -1, s)
        return PredictedRanges(-1, 0, s)
    if b.variant == STRICTLY_SEMISTABLE:
        return PredictedRanges(-1, -1, s, derived_from_proof=True)
    if b.c1_norm == 0:
        return PredictedRanges(b.k - 1, -b.k - 1, s)
    return PredictedRanges(b.k, -b.k - 1, s)


@dataclass(frozen=True)
class ConcordanceReport:
    concordant: bool
    discrepancies: tuple[str, ...]
    injective_claims: int
    surjective_claims: int


def verify_theorem(
    v: WlpVerdict, r: PredictedRanges, h: HilbertFunction | None = None
) -> ConcordanceReport:
    """Check measured flags against the predicted ranges.

    A measured rank that contradicts a claimed range raises
    TheoremViolation; incomplete coverage (e.g. a truncated profile) is
    only reported as a discrepancy.
    """
    violations = []
    inj_claims = surj_claims = 0
    for d, flag in v.flags:
        if d <= r.inj_max_d:
            inj_claims += 1
            if flag not in (INJECTIVE, BIJECTIVE):
                violations.append(f"degree {d}: claimed injective, measured {flag}")
        if d >= r.surj_min_d:
            surj_claims += 1
            if flag not in (SURJECTIVE, BIJECTIVE):
                violations.append(f"degree {d}: claimed surjective, measured {flag}")
    if violations:
        raise TheoremViolation("; ".join(violations))
    discrepancies = []
    present = {d for d, _ in v.flags}
    if h is not None and not h.is_zero:
        for d in range(h.offset, h.max_deg + 2):
            if d not in present:
                discrepancies.append(f"degree {d} missing from the profile")
    for d, _ in v.flags:
        if r.surj_min_d > d > r.inj_max_d:
            discrepancies.append(f"degree {d} not covered by any predicted range")
    if not v.wlp:
        raise TheoremViolation("profile contains a degree with non-maximal rank")
    return ConcordanceReport(
        concordant=not discrepancies,
        discrepancies=tuple(discrepancies),
        injective_claims=inj_claims,
        surjective_claims=surj_claims,
    )


def unimodality(h: HilbertFunction) -> bool:
    """True when the dimensions rise to a peak and then fall."""
    dims = h.dims
    i = 0
    while i + 1 < len(dims) and dims[i] <= dims[i + 1]:
        i += 1
    while i + 1 < len(dims) and dims[i] >= dims[i + 1]:
        i += 1
    return i + 1 >= len(dims)

"""Instance parsing, the analyze/fuzz/ci pipelines, and reports.

Instance files and reports are JSON.  Reports are byte-identical across
runs for a fixed (instance, seed, field): timings are collected but only
shown in the human-readable rendering, never in the JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cohomology import (
    UNSTABLE,
    BundleClass,
    ChernData,
    CohomologyTable,
    H0FormulaReport,
    SplittingType,
    chern_classes,
    classify,
    cohomology_table,
    default_table_range,
    h0_formula_check,
    predicted_splitting,
    splitting_with_line,
)
from .errors import (
    ConsistencyFailure,
    DegreeError,
    GenerationFailed,
    LineDegenerate,
    NotFiniteLength,
    ParseError,
    ShapeError,
    TheoremViolation,
    WlpError,
)
from .graded import (
    GradedMap,
    HilbertFunction,
    ci_instance,
    coker_dims,
    random_instance,
)
from .lefschetz import (
    ConcordanceReport,
    PredictedRanges,
    RankProfile,
    WlpVerdict,
    generic_profile,
    theorem_ranges,
    unimodality,
    verify_theorem,
    wlp_verdict,
)
from .linalg import GF32003, RATIONALS, FieldSpec
from .poly import HomogPoly, LineParam, monomial_basis, num_monomials, random_homog

__all__ = [
    "Instance",
    "Report",
    "FuzzConfig",
    "FuzzSummary",
    "parse_instance",
    "instance_from_dict",
    "analyze",
    "fuzz",
    "ci_mode",
    "main",
]

DEFAULT_SAMPLES = 3
_GENERATION_TRIES = 8
_CI_TRIES = 8
_VALIDATION_ERRORS = (ParseError, ShapeError, DegreeError, GenerationFailed, ValueError)
_INVARIANT_ERRORS = (NotFiniteLength, LineDegenerate, ConsistencyFailure, TheoremViolation)


@dataclass(frozen=True)
class Instance:
    """A complete problem statement: twists, field, optional explicit entries."""

    source: tuple[int, ...]
    target: tuple[int, ...]
    field: FieldSpec = GF32003
    entries: tuple[tuple[HomogPoly, ...], ...] | None = None
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    max_degree: int | None = None


def _parse_field(obj) -> FieldSpec:
    if obj is None:
        return GF32003
    if isinstance(obj, str):
        return _field_from_flag(obj)
    if not isinstance(obj, dict):
        raise ParseError("field must be an object like {'kind': 'prime', 'p': 32003}")
    kind = obj.get("kind", "prime")
    if kind in ("prime", "prime-field"):
        try:
            return FieldSpec("prime", int(obj.get("p", 32003)))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if kind in ("rationals", "Q"):
        return RATIONALS
    raise ParseError(f"unknown field kind {kind!r}")


def _field_from_flag(text: str) -> FieldSpec:
    if text in ("p", "prime"):
        return GF32003
    if text in ("Q", "q", "rationals"):
        return RATIONALS
    try:
        return FieldSpec("prime", int(text))
    except ValueError as exc:
        raise ParseError(f"bad field flag {text!r}: {exc}") from exc


def _parse_poly(terms, degree: int, field: FieldSpec, where: str) -> HomogPoly:
    if terms is None:
        return HomogPoly.zero(degree)
    if not isinstance(terms, list):
        raise ParseError(f"{where}: polynomial must be a list of [i, j, k, coeff] terms")
    coeffs = [0] * num_monomials(degree)
    index = {mon: pos for pos, mon in enumerate(monomial_basis(degree))}
    for term in terms:
        if not (isinstance(term, list) and len(term) == 4):
            raise ParseError(f"{where}: each term must be [i, j, k, coeff]")
        i, j, k, c = term
        for v in (i, j, k, c):
            if not isinstance(v, int):
                raise ParseError(f"{where}: term values must be integers")
        if i < 0 or j < 0 or k < 0 or i + j + k != degree:
            raise DegreeError(
                f"{where}: term x^{i} y^{j} z^{k} has degree {i + j + k}, "
                f"expected {degree}"
            )
        coeffs[index[(i, j, k)]] = field.reduce(coeffs[index[(i, j, k)]] + c)
    return HomogPoly(degree, tuple(coeffs))


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    try:
        source = tuple(int(a) for a in data["source"])
        target = tuple(int(b) for b in data["target"])
    except (KeyError, TypeError) as exc:
        raise ParseError("instance needs integer 'source' and 'target' lists") from exc
    if len(target) < 1 or len(source) != len(target) + 2:
        raise ShapeError(
            f"need n target twists and n+2 source twists with n >= 1, "
            f"got {len(source)} and {len(target)}"
        )
    field = _parse_field(data.get("field"))
    entries = None
    if data.get("entries") is not None:
        grid = data["entries"]
        if not isinstance(grid, list) or len(grid) != len(target):
            raise ShapeError(f"entry grid needs {len(target)} rows")
        rows = []
        for j, row in enumerate(grid):
            if not isinstance(row, list) or len(row) != len(source):
                raise ShapeError(f"entry row {j} needs {len(source)} columns")
            rows.append(
                tuple(
                    _parse_poly(
                        cell, source[i] - target[j], field, f"entry ({j},{i})"
                    )
                    for i, cell in enumerate(row)
                )
            )
        entries = tuple(rows)
    seed = data.get("seed", 0)
    samples = data.get("samples", DEFAULT_SAMPLES)
    max_degree = data.get("max_degree")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError("'seed' must be an integer")
    if not isinstance(samples, int) or samples < 1:
        raise ParseError("'samples' must be a positive integer")
    if max_degree is not None and not isinstance(max_degree, int):
        raise ParseError("'max_degree' must be an integer when present")
    return Instance(
        source=source,
        target=target,
        field=field,
        entries=entries,
        seed=seed,
        samples=samples,
        max_degree=max_degree,
    )


def parse_instance(path: str) -> Instance:
    """Load and validate an instance file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_dict(data)


@dataclass(frozen=True)
class Report:
    """Everything the pipeline measured, reproducible from (instance, seed)."""

    instance: Instance
    hilbert: HilbertFunction
    chern: ChernData
    bundle: BundleClass
    predicted: SplittingType
    computed: SplittingType
    table: CohomologyTable
    profile: RankProfile
    verdict: WlpVerdict
    ranges: PredictedRanges
    concordance: ConcordanceReport
    h0_formula: H0FormulaReport
    unimodal: bool
    palindrome: bool
    splitting_match: bool
    line: LineParam
    timings: tuple[tuple[str, float], ...]


def _poly_terms(p: HomogPoly) -> list[list[int]]:
    return [[mon[0], mon[1], mon[2], int(c)] for mon, c in p.terms()]


def report_to_dict(r: Report) -> dict:
    """JSON-ready dictionary; deterministic for fixed (instance, seed, field)."""
    inst = r.instance
    return {
        "instance": {
            "source": list(inst.source),
            "target": list(inst.target),
            "field": inst.field.label(),
            "seed": inst.seed,
            "samples": inst.samples,
        },
        "hilbert": {"offset": r.hilbert.offset, "dims": list(r.hilbert.dims)},
        "chern": {"c1": r.chern.c1, "c2": r.chern.c2, "s": r.chern.s, "c1Norm": r.chern.c1_norm},
        "class": {"variant": r.bundle.variant, "k": r.bundle.k},
        "splitting": {
            "predicted": list(r.predicted.pair),
            "computed": list(r.computed.pair),
        },
        "cohomology": [list(row) for row in r.table.rows],
        "profile": [
            [e.d, e.dim_prev, e.dim_cur, e.rank, e.flag] for e in r.profile.entries
        ],
        "ranges": {
            "injMaxD": r.ranges.inj_max_d,
            "surjMinD": r.ranges.surj_min_d,
            "injMaxT": r.ranges.inj_max_t,
            "surjMinT": r.ranges.surj_min_t,
            "derivedFromProof": r.ranges.derived_from_proof,
        },
        "wlp": r.verdict.wlp,
        "firstSurjectiveDegree": r.verdict.first_surjective_degree,
        "concordance": {
            "concordant": r.concordance.concordant,
            "discrepancies": list(r.concordance.discrepancies),
        },
        "h0Formula": {
            "applicable": r.h0_formula.applicable,
            "ok": r.h0_formula.ok,
            "mismatches": [list(x) for x in r.h0_formula.mismatches],
        },
        "unimodal": r.unimodal,
        "palindrome": r.palindrome,
        "splittingMatch": r.splitting_match,
        "seeds": {
            "seed": inst.seed,
            "linearForms": [list(f.coeffs) for f in r.profile.forms],
            "achievedBy": [list(a) for a in r.profile.achieved_by],
            "line": [list(r.line.p0), list(r.line.p1)],
        },
    }


def report_to_json(r: Report) -> str:
    return json.dumps(report_to_dict(r), sort_keys=True, indent=2) + "\n"


def report_to_text(r: Report) -> str:
    inst = r.instance
    lines = [
        f"instance: source={inst.source} target={inst.target} "
        f"field={inst.field.label()} seed={inst.seed} samples={inst.samples}",
        f"hilbert: offset {r.hilbert.offset}, dims {list(r.hilbert.dims)}"
        + (" (zero module)" if r.hilbert.is_zero else ""),
        f"chern: c1={r.chern.c1} c2={r.chern.c2} s={r.chern.s} c1_norm={r.chern.c1_norm}",
        "class: "
        + (
            f"{r.bundle.variant} (k={r.bundle.k})"
            if r.bundle.variant == UNSTABLE
            else r.bundle.variant
        ),
        f"splitting (normalized): predicted {r.predicted.pair} computed {r.computed.pair}"
        + ("" if r.splitting_match else "  [MISMATCH]"),
        "cohomology (t: h0 h1 h2):",
    ]
    for t, h0, h1, h2 in r.table.rows:
        lines.append(f"  {t:4d}: {h0:4d} {h1:4d} {h2:4d}")
    lines.append("rank profile (d: dim_prev dim_cur rank flag):")
    for e in r.profile.entries:
        lines.append(
            f"  {e.d:4d}: {e.dim_prev:4d} {e.dim_cur:4d} {e.rank:4d}  {e.flag}"
        )
    ranges_note = " (derived from the restriction criteria, not the stable/unstable statements)" if r.ranges.derived_from_proof else ""
    lines += [
        f"predicted ranges: injective t<={r.ranges.inj_max_t} (d<={r.ranges.inj_max_d}), "
        f"surjective t>={r.ranges.surj_min_t} (d>={r.ranges.surj_min_d}){ranges_note}",
        f"wlp: {r.verdict.wlp}   first surjective degree: {r.verdict.first_surjective_degree}",
        f"concordance: {r.concordance.concordant}"
        + (
            "" if r.concordance.concordant
            else "  " + "; ".join(r.concordance.discrepancies)
        ),
        f"unimodal: {r.unimodal}   palindrome: {r.palindrome}",
    ]
    if r.h0_formula.applicable:
        lines.append(
            f"h0 binomial formula on t in [{r.h0_formula.t_lo}, {r.h0_formula.t_hi}]: "
            + ("ok" if r.h0_formula.ok else f"MISMATCH {r.h0_formula.mismatches}")
        )
    lines.append(
        "timings: " + "  ".join(f"{name}={secs * 1000:.1f}ms" for name, secs in r.timings)
    )
    return "\n".join(lines) + "\n"


def _build_map(inst: Instance, rng: np.random.Generator) -> GradedMap:
    if inst.entries is not None:
        return GradedMap(inst.source, inst.target, inst.entries, inst.field)
    return random_instance(
        inst.source, inst.target, rng, inst.field, max_tries=_GENERATION_TRIES
    )


def _run_pipeline(inst: Instance, m: GradedMap, rng: np.random.Generator, t0: float) -> Report:
    timings = [("build", time.perf_counter() - t0)]

    t = time.perf_counter()
    hilbert = coker_dims(m)
    timings.append(("hilbert", time.perf_counter() - t))

    t = time.perf_counter()
    chern = chern_classes(inst.source, inst.target)
    trange = default_table_range(m)
    if inst.max_degree is not None:
        trange = (trange[0], max(trange[0], min(trange[1], inst.max_degree)))
    table = cohomology_table(m, chern, trange)
    timings.append(("cohomology", time.perf_counter() - t))

    t = time.perf_counter()
    bundle = classify(m, chern)
    predicted = predicted_splitting(bundle)
    computed, line = splitting_with_line(m, chern, rng)
    timings.append(("splitting", time.perf_counter() - t))

    t = time.perf_counter()
    profile = generic_profile(m, rng, inst.samples)
    verdict = wlp_verdict(profile)
    ranges = theorem_ranges(bundle, chern.s)
    concordance = verify_theorem(verdict, ranges, hilbert)
    timings.append(("profile", time.perf_counter() - t))

    h0rep = h0_formula_check(m, bundle, chern)
    return Report(
        instance=inst,
        hilbert=hilbert,
        chern=chern,
        bundle=bundle,
        predicted=predicted,
        computed=computed,
        table=table,
        profile=profile,
        verdict=verdict,
        ranges=ranges,
        concordance=concordance,
        h0_formula=h0rep,
        unimodal=unimodality(hilbert),
        palindrome=hilbert.dims == hilbert.dims[::-1],
        splitting_match=predicted == computed,
        line=line,
        timings=tuple(timings),
    )


def analyze(inst: Instance) -> Report:
    """Full pipeline: map, Hilbert function, cohomology, classification,
    splitting, rank profile, verdict, concordance."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(inst.seed)
    m = _build_map(inst, rng)
    return _run_pipeline(inst, m, rng, t0)


def ci_mode(
    d1: int,
    d2: int,
    d3: int,
    seed: int = 0,
    field: FieldSpec = GF32003,
    samples: int = DEFAULT_SAMPLES,
) -> Report:
    """Analyze the Koszul presentation of a random complete intersection."""
    for d in (d1, d2, d3):
        if d < 1:
            raise ValueError("complete-intersection degrees must be >= 1")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    last: NotFiniteLength | None = None
    for _ in range(_CI_TRIES):
        forms = [random_homog(d, rng, field) for d in (d1, d2, d3)]
        m = ci_instance(*forms, field=field)
        try:
            coker_dims(m)
        except NotFiniteLength as exc:
            last = exc
            continue
        inst = Instance(
            source=m.source,
            target=m.target,
            field=field,
            entries=m.entries,
            seed=seed,
            samples=samples,
        )
        return _run_pipeline(inst, m, rng, t0)
    raise GenerationFailed(
        f"no regular sequence of degrees ({d1},{d2},{d3}) after {_CI_TRIES} tries"
    ) from last


@dataclass(frozen=True)
class FuzzConfig:
    count: int
    max_n: int = 4
    max_twist: int = 8
    seed: int = 0
    field: FieldSpec = GF32003
    samples: int = DEFAULT_SAMPLES
    threads: int | None = None


@dataclass(frozen=True)
class FuzzRow:
    """Per-instance outcome; every boolean must be True on a healthy run."""

    source: tuple[int, ...]
    target: tuple[int, ...]
    seed: int
    variant: str
    k: int | None
    hilbert_total: int
    wlp: bool
    concordant: bool
    splitting_match: bool
    palindrome: bool
    unimodal: bool
    h0_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.wlp
            and self.concordant
            and self.splitting_match
            and self.palindrome
            and self.unimodal
            and self.h0_ok
        )


@dataclass(frozen=True)
class FuzzSummary:
    config_seed: int
    count: int
    rows: tuple[FuzzRow, ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures and all(row.ok for row in self.rows)

    def tally(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.rows:
            out[row.variant] = out.get(row.variant, 0) + 1
        return out


_PATTERN_TRIES = 64


def _fuzz_one(cfg: FuzzConfig, child: np.random.SeedSequence) -> FuzzRow | str:
    pattern_rng = np.random.default_rng(child)
    for attempt_seq in child.spawn(_PATTERN_TRIES):
        n = int(pattern_rng.integers(1, cfg.max_n + 1))
        target = tuple(int(v) for v in pattern_rng.integers(0, cfg.max_twist + 1, size=n))
        source = tuple(
            int(v) for v in pattern_rng.integers(0, cfg.max_twist + 1, size=n + 2)
        )
        seed = int(attempt_seq.generate_state(1)[0])
        inst = Instance(
            source=source,
            target=target,
            field=cfg.field,
            seed=seed,
            samples=cfg.samples,
        )
        try:
            report = analyze(inst)
        except (GenerationFailed, ShapeError):
            continue  # infeasible twist pattern: draw another
        except WlpError as exc:
            return f"source={source} target={target} seed={seed}: {type(exc).__name__}: {exc}"
        return FuzzRow(
            source=source,
            target=target,
            seed=seed,
            variant=report.bundle.variant,
            k=report.bundle.k,
            hilbert_total=report.hilbert.total,
            wlp=report.verdict.wlp,
            concordant=report.concordance.concordant,
            splitting_match=report.splitting_match,
            palindrome=report.palindrome,
            unimodal=report.unimodal,
            h0_ok=report.h0_formula.ok,
        )
    return f"no feasible twist pattern found in {_PATTERN_TRIES} draws"


def _worker_count(cfg: FuzzConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    env = os.environ.get("LEFSCHETZ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def fuzz(cfg: FuzzConfig) -> FuzzSummary:
    """Generate, analyze, and tally `count` random instances.

    Infeasible twist patterns are redrawn and do not count; any other
    per-instance error becomes a failure entry without aborting the run.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.count)
    workers = _worker_count(cfg)
    if workers > 1 and cfg.count > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda ch: _fuzz_one(cfg, ch), children))
    else:
        outcomes = [_fuzz_one(cfg, ch) for ch in children]
    rows = tuple(o for o in outcomes if isinstance(o, FuzzRow))
    failures = tuple(o for o in outcomes if isinstance(o, str))
    failures += tuple(
        f"source={r.source} target={r.target} seed={r.seed}: invariant failure"
        for r in rows
        if not r.ok
    )
    return FuzzSummary(
        config_seed=cfg.seed, count=cfg.count, rows=rows, failures=failures
    )


def fuzz_summary_to_dict(s: FuzzSummary) -> dict:
    return {
        "seed": s.config_seed,
        "count": s.count,
        "tally": s.tally(),
        "ok": s.ok,
        "failures": list(s.failures),
        "instances": [
            {
                "source": list(r.source),
                "target": list(r.target),
                "seed": r.seed,
                "variant": r.variant,
                "k": r.k,
                "hilbertTotal": r.hilbert_total,
                "wlp": r.wlp,
                "concordant": r.concordant,
                "splittingMatch": r.splitting_match,
                "palindrome": r.palindrome,
                "unimodal": r.unimodal,
                "h0Ok": r.h0_ok,
            }
            for r in s.rows
        ],
    }


def fuzz_summary_to_text(s: FuzzSummary) -> str:
    lines = [
        f"fuzz: {len(s.rows)}/{s.count} instances analyzed, seed {s.config_seed}",
        "tally: " + ", ".join(f"{k}={v}" for k, v in sorted(s.tally().items())),
        f"all invariants hold: {s.ok}",
    ]
    for f in s.failures:
        lines.append(f"FAILURE: {f}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="wlp",
        description=(
            "Hilbert functions, kernel-bundle cohomology, and Weak Lefschetz "
            "verification for finite-length cokernels over K[x,y,z]"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze one instance file")
    pa.add_argument("file")
    pa.add_argument("--json", action="store_true")
    pa.add_argument("--field", default=None, help="p, Q, or a prime modulus")
    pa.add_argument("--seed", type=int, default=None)
    pa.add_argument("--samples", type=int, default=None)

    pf = sub.add_parser("fuzz", help="analyze a corpus of random instances")
    pf.add_argument("--count", type=int, required=True)
    pf.add_argument("--max-n", type=int, default=4)
    pf.add_argument("--max-twist", type=int, default=8)
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--field", default=None)
    pf.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    pf.add_argument("--json", action="store_true")

    pc = sub.add_parser("ci", help="random complete intersection of given degrees")
    pc.add_argument("d1", type=int)
    pc.add_argument("d2", type=int)
    pc.add_argument("d3", type=int)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--field", default=None)
    pc.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    pc.add_argument("--json", action="store_true")

    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            inst = parse_instance(args.file)
            overrides = {}
            if args.field is not None:
                overrides["field"] = _field_from_flag(args.field)
            if args.seed is not None:
                overrides["seed"] = args.seed
            if args.samples is not None:
                overrides["samples"] = args.samples
            if overrides:
                inst = Instance(
                    source=inst.source,
                    target=inst.target,
                    field=overrides.get("field", inst.field),
                    entries=inst.entries,
                    seed=overrides.get("seed", inst.seed),
                    samples=overrides.get("samples", inst.samples),
                    max_degree=inst.max_degree,
                )
            report = analyze(inst)
            sys.stdout.write(
                report_to_json(report) if args.json else report_to_text(report)
            )
            return 0
        if args.command == "fuzz":
            cfg = FuzzConfig(
                count=args.count,
                max_n=args.max_n,
                max_twist=args.max_twist,
                seed=args.seed,
                field=_field_from_flag(args.field) if args.field else GF32003,
                samples=args.samples,
            )
            summary = fuzz(cfg)
            if args.json:
                sys.stdout.write(
                    json.dumps(fuzz_summary_to_dict(summary), sort_keys=True, indent=2)
                    + "\n"
                )
            else:
                sys.stdout.write(fuzz_summary_to_text(summary))
            return 0 if summary.ok else 3
        if args.command == "ci":
            report = ci_mode(
                args.d1,
                args.d2,
                args.d3,
                seed=args.seed,
                field=_field_from_flag(args.field) if args.field else GF32003,
                samples=args.samples,
            )
            sys.stdout.write(
                report_to_json(report) if args.json else report_to_text(report)
            )
            return 0
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _INVARIANT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

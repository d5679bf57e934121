"""Named end-to-end checks, runnable as ``nilsub verify all`` or ``nilsub verify <name>``.

Each check returns a :class:`CheckResult` with one line per fact it
established; a failing fact marks the whole check as failed. Census reports
are shared between checks through a :class:`VerifyContext`.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from nilsub.arfun import (
    TAU_BOUNDARY_ORBIT,
    boundary_coincidences,
    boundary_objects,
    is_projective,
    tau,
    tau_orbit,
    tau_period,
)
from nilsub.catalog import list_entries, tube_dimvectors, worked_examples, x_family
from nilsub.census import CensusReport, census, check_duality, verify_region
from nilsub.config import NilsubConfig
from nilsub.covering import graded_hom_to_pair, pi, random_cover, shift
from nilsub.decorators import observe
from nilsub.exactla import Field, rank
from nilsub.homalg import (
    decompose,
    end_algebra,
    hom,
    infinite_radical_nilpotency,
    is_indecomposable,
    is_morphism,
    iso,
    recompose,
)
from nilsub.kform import (
    DimVector,
    chi,
    classify_region,
    e8_positive_roots,
    h0,
    h_inf,
    in_radical_lattice,
    pi_k0,
    root_dimpair_table,
    root_to_dimpair,
    t_support,
)
from nilsub.nilmod import DimPair, PairObject, direct_sum, dual, random_object
from nilsub.types import BoundaryName, OperationKind, RegionKind

logger = logging.getLogger(__name__)

F2 = Field.prime(2)
F3 = Field.prime(3)
F5 = Field.prime(5)

# Total dimension bound per n for the small censuses.
CENSUS_BOUNDS = {1: 2, 2: 4, 3: 6, 4: 8}
EXPECTED_COUNTS = {1: 2, 2: 5, 3: 10, 4: 20, 5: 50}


class CheckResult(NamedTuple):
    name: str
    ok: bool
    lines: List[str]
    seconds: float

    def format(self) -> str:
        head = f"[{'PASS' if self.ok else 'FAIL'}] {self.name} ({self.seconds:.1f}s)"
        return "\n".join([head] + [f"  {line}" for line in self.lines])


@dataclass
class VerifyContext:
    """Shared state for a verification run."""

    seed: int = dc_field(default_factory=lambda: NilsubConfig.from_env().seed)
    jobs: Optional[int] = None
    lines: List[str] = dc_field(default_factory=list)
    ok: bool = True
    reports: Dict[Tuple[int, int, int], CensusReport] = dc_field(default_factory=dict)

    def expect(self, condition: bool, message: str) -> bool:
        self.lines.append(("ok    " if condition else "FAIL  ") + message)
        self.ok = self.ok and bool(condition)
        return bool(condition)

    def note(self, message: str) -> None:
        self.lines.append("note  " + message)

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + salt)

    def census(self, field: Field, n: int, bound: int) -> CensusReport:
        key = (field.p or 0, n, bound)
        if key not in self.reports:
            self.reports[key] = census(field, n, bound, jobs=self.jobs)
        return self.reports[key]


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    run: Callable[[VerifyContext], None]
    slow: bool = False


CHECKS: Dict[str, Check] = {}

CheckFunc = Callable[[VerifyContext], None]


def check(name: str, description: str, slow: bool = False) -> Callable[[CheckFunc], CheckFunc]:
    """Register a check under ``name``."""

    def register(func: CheckFunc) -> CheckFunc:
        CHECKS[name] = Check(name, description, func, slow)
        return func

    return register


def _expect_matched(ctx: VerifyContext, label: str, report: CensusReport) -> bool:
    return ctx.expect(
        report.unmatched == 0,
        f"{label}: {report.unmatched} summands of examined objects outside the representatives",
    )


def _pairwise_distinct(objects: List[PairObject]) -> bool:
    for i, x in enumerate(objects):
        for y in objects[i + 1:]:
            if iso(x, y):
                return False
    return True


# ---------------------------------------------------------------------------
# Counts and regions


@check("counts", "census counts for n <= 4 and the n = 5 list")
def check_counts(ctx: VerifyContext) -> None:
    for n, bound in CENSUS_BOUNDS.items():
        report = ctx.census(F2, n, bound)
        ctx.expect(
            len(report) == EXPECTED_COUNTS[n],
            f"n={n} dim<={bound}: {len(report)} indecomposables, expected {EXPECTED_COUNTS[n]}",
        )
        _expect_matched(ctx, f"n={n} dim<={bound}", report)
    for field in (F2, F3):
        entries = list_entries(5, field)
        objects = [e.obj for e in entries]
        ctx.expect(len(entries) == 50, f"n=5 list over {field}: {len(entries)} entries")
        ctx.expect(all(is_indecomposable(x) for x in objects), f"n=5 list over {field}: all indecomposable")
        ctx.expect(_pairwise_distinct(objects), f"n=5 list over {field}: pairwise non-isomorphic")


@check("catalog", "catalog lists agree with the census and are closed under duality")
def check_catalog(ctx: VerifyContext) -> None:
    for n in range(1, 6):
        for field in (F2, F3):
            objects = [e.obj for e in list_entries(n, field)]
            ctx.expect(
                all(is_indecomposable(x) for x in objects),
                f"n={n} over {field}: {len(objects)} entries, all indecomposable",
            )
            missing = [x for x in objects if not any(iso(dual(x), y) for y in objects)]
            ctx.expect(not missing, f"n={n} over {field}: closed under duality")
        if n in CENSUS_BOUNDS:
            report = ctx.census(F2, n, CENSUS_BOUNDS[n])
            objects = [e.obj for e in list_entries(n, F2)]
            found = [e.obj for e in report.indecomposables]
            matched = all(any(iso(x, y) for y in found) for x in objects)
            ctx.expect(
                matched and len(found) == len(objects),
                f"n={n}: catalog and census agree up to isomorphism",
            )


@check("region", "dimension pairs of S(6) up to dimension 7")
def check_region(ctx: VerifyContext) -> None:
    report = ctx.census(F2, 6, 7)
    region = verify_region(report)
    ctx.expect(region.ok, f"|v - 2u| <= 6 on {len(report)} indecomposables (max {region.max_deviation})")
    _expect_matched(ctx, "n=6 dim<=7", report)
    counts = report.counts()
    for pair in ((7, 1), (7, 6)):
        ctx.expect(pair not in counts, f"no indecomposable with dimension pair {pair}")
    for pair in ((6, 0), (2, 1), (6, 3), (7, 2), (7, 5)):
        ctx.expect(pair in counts, f"an indecomposable with dimension pair {pair}")


@check("stripe", "|v - 2u| <= n on every census report computed so far")
def check_stripe(ctx: VerifyContext) -> None:
    for n, bound in CENSUS_BOUNDS.items():
        ctx.census(F2, n, bound)
    for (_, n, bound), report in sorted(ctx.reports.items()):
        if n <= 6:
            region = verify_region(report)
            ctx.expect(region.ok, f"n={n} dim<={bound}: max |v - 2u| = {region.max_deviation}")


# ---------------------------------------------------------------------------
# The family X_c


@check("x-family", "X_c over F_5")
def check_x_family(ctx: VerifyContext) -> None:
    objects = [x_family(F5, c) for c in range(5)]
    for c, x in enumerate(objects):
        ctx.expect(x.dim_pair == DimPair(12, 6), f"X_{c}: dimension pair {x.dim_pair}")
        ctx.expect(is_indecomposable(x), f"X_{c}: indecomposable")
    ctx.expect(_pairwise_distinct(objects), "X_0, ..., X_4 pairwise non-isomorphic")
    dims = [end_algebra(x).dim for x in objects]
    ctx.note(f"dim End(X_c) for c = 0..4: {dims}")


# ---------------------------------------------------------------------------
# Quadratic form and index functions


def _expected_chi(x: DimVector) -> int:
    if in_radical_lattice(x):
        return 0
    return 2 if t_support(x) == 8 else 1


@check("chi", "values of the quadratic form on tube and ray vectors")
def check_chi(ctx: VerifyContext) -> None:
    for family, vectors in tube_dimvectors().items():
        bad = [str(x) for x in vectors if chi(x) != _expected_chi(x)]
        ctx.expect(not bad, f"{family}: {len(vectors)} vectors" + (f", mismatches {bad}" if bad else ""))
    combos = [a * h0() + b * h_inf() for a in range(0, 4) for b in range(0, 4)]
    ctx.expect(all(chi(x) == 0 for x in combos), "chi vanishes on a h0 + b h_inf, 0 <= a, b <= 3")


@check("iota", "region of the radical vectors and their sums")
def check_iota(ctx: VerifyContext) -> None:
    cases = [
        ("h0", h0(), RegionKind.T0_PRIME, None),
        ("h_inf", h_inf(), RegionKind.TINF_PRIME, None),
        ("h0 + h_inf", h0() + h_inf(), RegionKind.T_GAMMA, Fraction(1)),
        ("2 h0 + h_inf", 2 * h0() + h_inf(), RegionKind.T_GAMMA, Fraction(1, 2)),
    ]
    for label, x, kind, gamma in cases:
        got = classify_region(x)
        ctx.expect(got.kind is kind and got.gamma == gamma, f"{label} -> {got}")


# ---------------------------------------------------------------------------
# Covering


@check("pi", "covering functor on K-groups and under shift")
def check_pi(ctx: VerifyContext) -> None:
    for m in range(1, 5):
        got = pi_k0(m * h_inf())
        ctx.expect(got == DimPair(12 * m, 6 * m), f"pi({m} h_inf) = {got}")
    witness = worked_examples(F2)["box-notation"].cover
    base = pi(witness)
    ctx.expect(base.dim_pair == DimPair(14, 7), f"box-notation example has dimension pair {base.dim_pair}")
    for ell in range(-2, 3):
        ctx.expect(iso(pi(shift(witness, ell)), base), f"pi(M[{ell}]) = pi(M)")


@check("grading", "graded homs of a cover add up to End of its image")
def check_grading(ctx: VerifyContext) -> None:
    witnesses = [("box-notation", worked_examples(F2)["box-notation"].cover)]
    rng = ctx.rng(8)
    for k in range(3):
        witnesses.append((f"random-{k}", random_cover(F2, 4, rng)))
    for label, r in witnesses:
        total = sum(dim for _, dim in graded_hom_to_pair(r, r))
        end = end_algebra(pi(r)).dim
        ctx.expect(total == end, f"{label}: sum over g of dim Hom(M, M[g]) = {total}, dim End = {end}")


# ---------------------------------------------------------------------------
# Auslander-Reiten translate


@check("boundary", "tau on the boundary objects")
def check_boundary(ctx: VerifyContext) -> None:
    objects = boundary_objects(F2, 6)
    ctx.expect(iso(tau(objects[BoundaryName.K]), objects[BoundaryName.J]), "n=6: tau K = J")
    ctx.expect(iso(tau(objects[BoundaryName.J]), objects[BoundaryName.R]), "n=6: tau J = R")
    for n in (3, 4, 5, 6):
        objects = boundary_objects(F2, n)
        orbit = tau_orbit(objects[BoundaryName.K], 6)
        names = [name for name in TAU_BOUNDARY_ORBIT[1:]] + [BoundaryName.K]
        follows = all(iso(x, objects[name]) for x, name in zip(orbit[1:], names))
        ctx.expect(follows, f"n={n}: orbit of K runs through J, R, P'/K, R', S")
        ctx.expect(tau_period(objects[BoundaryName.K]) == 6, f"n={n}: tau-period of K is 6")
    pairs = set(boundary_coincidences(F2, 2))
    expected = {
        (BoundaryName.R, BoundaryName.S),
        (BoundaryName.R_PRIME, BoundaryName.J),
        (BoundaryName.P_PRIME_MOD_K, BoundaryName.K),
    }
    ctx.expect(pairs == expected, f"n=2: isomorphic boundary pairs {sorted(p.value + '=' + q.value for p, q in pairs)}")
    ctx.expect(tau_period(boundary_objects(F2, 2)[BoundaryName.K]) == 3, "n=2: tau-period of K is 3")


@check("tau-period", "tau^6 fixes the non-projective boundary objects for n = 7", slow=True)
def check_tau_period(ctx: VerifyContext) -> None:
    for name, x in boundary_objects(F2, 7).items():
        if x.is_zero() or is_projective(x) or not is_indecomposable(x):
            continue
        orbit = tau_orbit(x, 6)
        ctx.expect(iso(orbit[-1], x), f"n=7: tau^6 {name.value} = {name.value}")


# ---------------------------------------------------------------------------
# Roots


@check("roots", "positive roots of E8 and their dimension pairs")
def check_roots(ctx: VerifyContext) -> None:
    roots = e8_positive_roots()
    ctx.expect(len(roots) == 120, f"{len(roots)} positive roots")
    top = root_to_dimpair(roots[-1])
    ctx.expect((top.v, top.u, top.m) == (20, 7, 5), f"highest root {top.root} -> ({top.v},{top.u}), m = {top.m}")
    unit = root_to_dimpair((1, 0, 0, 0, 0, 0, 0, 0))
    ctx.expect((unit.v, unit.u) == (1, 1), f"root a -> ({unit.v},{unit.u})")
    total = sum(count for _, count, _ in root_dimpair_table())
    ctx.expect(total == 120, f"table counts add up to {total}")


# ---------------------------------------------------------------------------
# Radical of the endomorphism ring


@check(
    "radical",
    "nilpotency of the positive-shift radical on the worked example and five random indecomposable covers",
)
def check_radical(ctx: VerifyContext) -> None:
    example = worked_examples(F2)["infinite-radical"]
    x = example.obj
    phi, epsilon = example.endomorphisms["phi"], example.endomorphisms["epsilon"]
    ctx.expect(is_morphism(x, x, phi), "phi is an endomorphism")
    ctx.expect(rank(epsilon) == 1, f"T^5 phi^2 has rank {rank(epsilon)}")
    ctx.expect(is_indecomposable(x), "the example is indecomposable")
    index = infinite_radical_nilpotency(x, example.cover)
    ctx.expect(index == 8, f"nilpotency index {index}")
    rng = ctx.rng(12)
    found = 0
    for _ in range(200):
        if found == 5:
            break
        r = random_cover(F2, 6, rng, max_columns=3, max_generators=2, spread=3)
        y = pi(r)
        if y.is_zero() or not is_indecomposable(y):
            continue
        found += 1
        index = infinite_radical_nilpotency(y, r)
        ctx.expect(index <= 8, f"random indecomposable {y.dim_pair}: nilpotency index {index}")
    ctx.expect(found == 5, f"{found} random indecomposable covers sampled")


# ---------------------------------------------------------------------------
# Duality and structural properties


@check("duality", "duality on census representatives for n <= 4 and n = 6 up to dimension 7")
def check_duality_reports(ctx: VerifyContext) -> None:
    reports = [ctx.census(F2, n, bound) for n, bound in CENSUS_BOUNDS.items()]
    reports.append(ctx.census(F2, 6, 7))
    for report in reports:
        n = report.n
        ctx.expect(check_duality(report), f"n={n}: representatives closed under duality, counts symmetric")
        for entry in report.indecomposables:
            x = entry.obj
            dx = dual(x)
            if dx.dim_pair != x.dim_pair.delta() or not iso(dual(dx), x):
                ctx.expect(False, f"n={n}: duality fails on {x.describe()}")
                break
        else:
            ctx.expect(True, f"n={n}: X** = X and dim X* = (v, v-u) for {len(report)} objects")


def _summand_signature(objects: Iterable[PairObject]) -> List[Tuple[object, ...]]:
    return sorted((x.partition.parts, x.dim_pair.u, x.subspace_partition().parts) for x in objects)


@check("krs", "decompositions are stable and Hom is biadditive")
def check_krs(ctx: VerifyContext) -> None:
    for n in range(2, 7):
        rng = ctx.rng(100 + n)
        stable = True
        for _ in range(200):
            x = random_object(F2, n, rng, max_dim=7)
            parts = decompose(x)
            again = [s for p in parts for s in decompose(p)]
            if _summand_signature(parts) != _summand_signature(again) or not iso(recompose(parts), x):
                stable = False
                ctx.expect(False, f"n={n}: decomposition of {x.describe()} is not stable")
                break
        if stable:
            ctx.expect(True, f"n={n}: 200 random objects decompose stably")
    rng = ctx.rng(200)
    additive = True
    for _ in range(100):
        n = int(rng.integers(2, 7))
        x, y, z = (random_object(F2, n, rng, max_dim=4) for _ in range(3))
        xy = direct_sum(x, y)
        if hom(xy, z).dim != hom(x, z).dim + hom(y, z).dim or hom(z, xy).dim != hom(z, x).dim + hom(z, y).dim:
            additive = False
            break
    ctx.expect(additive, "Hom is additive in both arguments on 100 random triples")


# ---------------------------------------------------------------------------
# Runner


@observe(name="verify", kind=OperationKind.VERIFY, capture_output=False)
def run_check(name: str, ctx: Optional[VerifyContext] = None) -> CheckResult:
    """Run one named check.

    Raises:
        KeyError: There is no check called ``name``.
    """
    spec = CHECKS[name]
    ctx = ctx or VerifyContext()
    ctx.lines, ctx.ok = [], True
    start = time.perf_counter()
    try:
        spec.run(ctx)
    except Exception as exc:
        logger.debug(f"check {name} raised {exc!r}")
        ctx.expect(False, f"raised {type(exc).__name__}: {exc}")
    result = CheckResult(name, ctx.ok, list(ctx.lines), time.perf_counter() - start)
    logger.debug(f"check {name}: {'ok' if result.ok else 'failed'} in {result.seconds:.2f}s")
    return result


def run_checks(names: Optional[Iterable[str]] = None, *, include_slow: bool = True,
               ctx: Optional[VerifyContext] = None) -> List[CheckResult]:
    """Run the named checks (all registered checks by default) with one shared context."""
    ctx = ctx or VerifyContext()
    selected = list(names) if names is not None else [
        name for name, spec in CHECKS.items() if include_slow or not spec.slow
    ]
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [run_check(name, ctx) for name in selected]

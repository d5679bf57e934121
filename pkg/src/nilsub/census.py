"""Brute-force census of indecomposable objects over a small prime field.

Every T-invariant subspace of dimension ``u + 1`` contains a T-invariant
hyperplane, so all subspaces arise by adding one line of ``T^{-1}(W)/W`` to
an invariant ``W``. The census walks these extensions level by level and keeps
one representative per isomorphism class; the literal subspace-by-subspace
walk is available as :func:`enumerate_invariant_subspaces`.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from nilsub.arfun import boundary_objects
from nilsub.config import NilsubConfig
from nilsub.decorators import observe
from nilsub.errors import BoundExceededError, UnsupportedFieldError
from nilsub.exactla import Field, Matrix, kernel, left_kernel, rank, row_basis
from nilsub.formats import field_token, write_pair
from nilsub.homalg import decompose, end_algebra, hom, invariants, iso
from nilsub.nilmod import DimPair, PairObject, Partition, dual, make_pair
from nilsub.types import BoundaryName, OperationKind

logger = logging.getLogger(__name__)


def partitions(total: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``total`` with parts at most ``max_part``, in reverse lexicographic order."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def partitions_up_to(n: int, bound: int) -> List[Partition]:
    """Nonempty partitions with parts at most ``n`` and total at most ``bound``, by total."""
    return [Partition(parts, n) for total in range(1, bound + 1) for parts in partitions(total, n)]


# ---------------------------------------------------------------------------
# One-step extensions


def _require_finite(field: Field) -> int:
    if field.p is None:
        raise UnsupportedFieldError("a census needs a finite field")
    return field.p


def _preimage(w: Matrix, operator: Matrix) -> Matrix:
    """Rows spanning ``T^{-1}(W) = {v : T v in W}``."""
    size = operator.rows
    annihilator = kernel(w) if w.rows else Matrix.identity(w.field, size)
    return left_kernel(operator.T @ annihilator)


def _new_directions(w: Matrix, preimage: Matrix) -> Matrix:
    """Rows of ``preimage`` completing ``W`` to a basis of ``T^{-1}(W)``."""
    chosen: List[Matrix] = []
    span = w
    current = w.rows
    for j in range(preimage.rows):
        row = preimage.take_rows([j])
        trial = span.vstack(row) if span.rows else row
        trial_rank = rank(trial)
        if trial_rank > current:
            span, current = trial, trial_rank
            chosen.append(row)
    if not chosen:
        return Matrix.zeros(w.field, 0, preimage.cols)
    return row_basis(_stack(chosen))


def _stack(rows: Sequence[Matrix]) -> Matrix:
    out = rows[0]
    for row in rows[1:]:
        out = out.vstack(row)
    return out


def _lines(p: int, dim: int) -> Iterator[Tuple[int, ...]]:
    """Normalized representatives of the points of the projective space of ``F_p^dim``."""
    for lead in range(dim):
        for tail in itertools.product(range(p), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


def _extensions(x: PairObject) -> Iterator[PairObject]:
    """All objects ``(V, W + <v>)`` with ``T v in W``, one per line of ``T^{-1}(W)/W``."""
    p = _require_finite(x.field)
    directions = _new_directions(x.subspace, _preimage(x.subspace, x.operator))
    for coeffs in _lines(p, directions.rows):
        vec = Matrix(x.field, [list(coeffs)]) @ directions
        rows = x.subspace.vstack(vec) if x.u else vec
        yield PairObject(x.field, x.n, x.partition, row_basis(rows))


@observe(name="enumerate_invariant_subspaces", kind=OperationKind.CENSUS, capture_output=False)
def enumerate_invariant_subspaces(
    field: Field, n: int, partition: Partition, limit: Optional[int] = None
) -> List[PairObject]:
    """Every T-invariant subspace of the module of ``partition``, each exactly once.

    Raises:
        BoundExceededError: More than ``limit`` subspaces (default: the configured
            exhaustive limit).
        UnsupportedFieldError: ``field`` is not finite.
    """
    _require_finite(field)
    if limit is None:
        limit = NilsubConfig.from_env().exhaustive_limit
    level = [make_pair(field, n, partition)]
    found = list(level)
    while level:
        seen: Dict[Tuple[Any, ...], PairObject] = {}
        for obj in level:
            for ext in _extensions(obj):
                seen.setdefault(ext.subspace.key(), ext)
        level = list(seen.values())
        found.extend(level)
        if len(found) > limit:
            raise BoundExceededError(f"{partition} has more than {limit} invariant subspaces")
    logger.debug(f"{partition} over {field}: {len(found)} invariant subspaces")
    return found


@lru_cache(maxsize=64)
def _probes(field: Field, n: int) -> Tuple[PairObject, ...]:
    objects = boundary_objects(field, n)
    names = (BoundaryName.S, BoundaryName.K, BoundaryName.R, BoundaryName.J)
    return tuple(objects[name] for name in names if not objects[name].is_zero())


def _dedup_key(x: PairObject) -> Tuple[Any, ...]:
    return invariants(x) + (end_algebra(x).dim,) + hom_probe_dims(x, _probes(x.field, x.n))


class _ClassBuckets:
    """Representatives grouped by a cheap key; membership is settled by ``iso``."""

    def __init__(self) -> None:
        self.buckets: Dict[Tuple[Any, ...], List[PairObject]] = {}

    def find(self, x: PairObject) -> Optional[PairObject]:
        for rep in self.buckets.get(_dedup_key(x), []):
            if iso(rep, x):
                return rep
        return None

    def add(self, x: PairObject) -> bool:
        """Add ``x`` unless an isomorphic representative exists; True when added."""
        if self.find(x) is not None:
            return False
        self.buckets.setdefault(_dedup_key(x), []).append(x)
        return True

    def __iter__(self) -> Iterator[PairObject]:
        for bucket in self.buckets.values():
            yield from bucket

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())


def enumerate_classes(field: Field, n: int, partition: Partition) -> List[PairObject]:
    """One object per isomorphism class of pairs on the module of ``partition``."""
    _require_finite(field)
    level = [make_pair(field, n, partition)]
    classes = list(level)
    while level:
        buckets = _ClassBuckets()
        for obj in level:
            for ext in _extensions(obj):
                buckets.add(ext)
        level = list(buckets)
        classes.extend(level)
    logger.debug(f"{partition} over {field}: {len(classes)} isomorphism classes")
    return classes


# ---------------------------------------------------------------------------
# Reports


class CensusEntry(NamedTuple):
    obj: PairObject
    dim_pair: DimPair
    end_dim: int


@dataclass
class CensusReport:
    """Indecomposables found by a census, one representative per class.

    Attributes:
        field: Base field.
        n: Nilpotency bound.
        bound: Largest total dimension examined.
        indecomposables: Representatives with dimension pair and ``dim End``.
        partitions: Number of partitions examined.
        objects: Number of objects (classes, or subspaces when exhaustive) examined.
        exhaustive: Whether every invariant subspace was enumerated.
        unmatched: Summands of examined objects missing from the representatives.
    """

    field: Field
    n: int
    bound: int
    indecomposables: List[CensusEntry] = dc_field(default_factory=list)
    partitions: int = 0
    objects: int = 0
    exhaustive: bool = False
    unmatched: int = 0

    def counts(self) -> Dict[Tuple[int, int], int]:
        counter: Counter = Counter((e.dim_pair.v, e.dim_pair.u) for e in self.indecomposables)
        return dict(sorted(counter.items()))

    def __len__(self) -> int:
        return len(self.indecomposables)

    def to_table(self) -> str:
        lines = [f"# census field {field_token(self.field)} n {self.n} dim {self.bound}"]
        lines.extend(f"dimpair {v} {u} : {count}" for (v, u), count in self.counts().items())
        lines.append(f"total : {len(self)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": field_token(self.field),
            "n": self.n,
            "dim": self.bound,
            "exhaustive": self.exhaustive,
            "partitions": self.partitions,
            "objects": self.objects,
            "unmatched": self.unmatched,
            "total": len(self),
            "counts": [{"v": v, "u": u, "count": c} for (v, u), c in self.counts().items()],
            "indecomposables": [
                {
                    "partition": list(e.obj.partition.parts),
                    "v": e.dim_pair.v,
                    "u": e.dim_pair.u,
                    "end_dim": e.end_dim,
                    "subspace": e.obj.subspace.tolist(),
                }
                for e in self.indecomposables
            ],
        }

    def write(self, out_dir: Path) -> List[Path]:
        """Write the table, a JSON dump and one pair file per representative."""
        out_dir.mkdir(parents=True, exist_ok=True)
        written = [out_dir / "census.txt", out_dir / "census.json"]
        written[0].write_text(self.to_table(), encoding="utf-8")
        written[1].write_text(json.dumps(self.to_dict(), indent=2, default=str), encoding="utf-8")
        for k, entry in enumerate(self.indecomposables, start=1):
            path = out_dir / f"ind-{k:03d}-v{entry.dim_pair.v}-u{entry.dim_pair.u}.pair"
            write_pair(entry.obj, path)
            written.append(path)
        return written


def _entry_key(e: CensusEntry) -> Tuple[Any, ...]:
    return (e.dim_pair.v, e.dim_pair.u, e.obj.partition.parts, e.obj.subspace.key())


def _shard(args: Tuple[str, int, Tuple[int, ...], bool]) -> List[PairObject]:
    token, n, parts, exhaustive = args
    field = Field.parse(token)
    partition = Partition(parts, n)
    if exhaustive:
        return enumerate_invariant_subspaces(field, n, partition)
    return enumerate_classes(field, n, partition)


@observe(name="census", kind=OperationKind.CENSUS, capture_output=False)
def census(
    field: Field,
    n: int,
    bound: int,
    *,
    exhaustive: bool = False,
    deep: bool = False,
    jobs: Optional[int] = None,
) -> CensusReport:
    """Collect the indecomposables of total dimension at most ``bound``.

    Args:
        field: A prime field.
        n: Nilpotency bound.
        bound: Largest total dimension.
        exhaustive: Walk every invariant subspace instead of class representatives.
        deep: Allow ``bound`` above the configured maximum.
        jobs: Worker processes, one partition per task (default: configured).

    Raises:
        BoundExceededError: ``bound`` exceeds the configured maximum without ``deep``.
    """
    _require_finite(field)
    config = NilsubConfig.from_env()
    if bound > config.max_census_dim and not deep:
        raise BoundExceededError(
            f"dimension bound {bound} exceeds {config.max_census_dim}; pass deep=True"
        )
    jobs = config.jobs if jobs is None else jobs
    shapes = partitions_up_to(n, bound)
    tasks = [(field_token(field), n, p.parts, exhaustive) for p in shapes]
    if jobs > 1:
        with Pool(jobs) as pool:
            shards = pool.map(_shard, tasks)
    else:
        shards = [_shard(task) for task in tasks]

    report = CensusReport(field, n, bound, exhaustive=exhaustive, partitions=len(shapes))
    reps = _ClassBuckets()
    # partitions come by increasing total, so summands are met before their sums
    for shard in shards:
        for obj in shard:
            report.objects += 1
            summands = decompose(obj)
            if len(summands) == 1:
                if reps.add(obj):
                    report.indecomposables.append(CensusEntry(obj, obj.dim_pair, end_algebra(obj).dim))
            else:
                report.unmatched += sum(1 for s in summands if reps.find(s) is None)
    report.indecomposables.sort(key=_entry_key)
    logger.debug(
        f"census {field} n={n} dim<={bound}: {len(report)} indecomposables "
        f"from {report.objects} objects"
    )
    return report


# ---------------------------------------------------------------------------
# Checks on reports


class RegionCheck(NamedTuple):
    ok: bool
    counterexample: Optional[DimPair]
    max_deviation: int


def verify_region(report: CensusReport, extra: Sequence[DimPair] = ()) -> RegionCheck:
    """Check ``|v - 2u| <= n`` for every indecomposable (and any ``extra`` pairs)."""
    worst = 0
    pairs = [e.dim_pair for e in report.indecomposables] + list(extra)
    for pair in pairs:
        deviation = abs(pair.v - 2 * pair.u)
        worst = max(worst, deviation)
        if deviation > report.n:
            return RegionCheck(False, pair, deviation)
    return RegionCheck(True, None, worst)


def check_duality(report: CensusReport) -> bool:
    """Whether the representatives are closed under duality with δ-symmetric counts."""
    counts = report.counts()
    for (v, u), count in counts.items():
        if counts.get((v, v - u)) != count:
            return False
    reps = _ClassBuckets()
    for entry in report.indecomposables:
        reps.add(entry.obj)
    return all(reps.find(dual(e.obj)) is not None for e in report.indecomposables)


def hom_probe_dims(x: PairObject, probes: Sequence[PairObject]) -> Tuple[int, ...]:
    """``dim Hom(probe, x)`` for each probe."""
    return tuple(hom(p, x).dim for p in probes)

"""Named objects shipped as data: complete lists for small n, the X_c family,
tube dimension vectors and worked examples for n = 6.

Lists for ``n <= 5`` live in box files under ``<data_dir>/catalog``; every
entry declares the dimension vector printed next to it, and loading fails
with :class:`~nilsub.errors.CatalogError` when the boxes disagree.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from nilsub.config import NilsubConfig
from nilsub.covering import CoverRep, Generator, Term, dimvector, from_box_diagram, pi
from nilsub.errors import CatalogError, ParseError
from nilsub.exactla import Field, Matrix, Scalar
from nilsub.formats import BoxDiagram, parse_box_file, parse_dimvec
from nilsub.kform import DimVector, ray_dimvectors
from nilsub.nilmod import DimPair, PairObject, Partition, make_pair

logger = logging.getLogger(__name__)

CATALOG_COUNTS = {1: 2, 2: 5, 3: 10, 4: 20, 5: 50}


def _data_dir() -> Path:
    return NilsubConfig.from_env().data_dir


def _read_box_file(path: Path) -> Tuple[int, List[BoxDiagram]]:
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise CatalogError(f"catalog file {path} is missing") from None
    return parse_box_file(text, str(path))


def _terms(field: Field, entry: BoxDiagram, terms: Sequence) -> List[Term]:
    out: List[Term] = []
    for term in terms:
        try:
            coeff = field.parse_element(term.coeff)
        except ValueError as exc:
            raise ParseError(f"entry {entry.id}: {exc}", line=entry.line) from None
        out.append((term.column, term.power, coeff if term.sign > 0 else field.neg(coeff)))
    return out


def _generators(field: Field, entry: BoxDiagram) -> List[Generator]:
    return [(index, _terms(field, entry, terms)) for index, terms in entry.generators]


def box_cover(field: Field, n: int, entry: BoxDiagram) -> CoverRep:
    """Covering representation of a box-file entry, checked against its ``dimvec``."""
    rep = from_box_diagram(field, n, entry.columns, _generators(field, entry))
    if entry.dimvec is not None and dimvector(rep) != entry.dimvec:
        raise CatalogError(
            f"entry {entry.id}: boxes give {dimvector(rep)}, declared {entry.dimvec}"
        )
    return rep


def box_pair(
    field: Field,
    n: int,
    columns: Sequence[Tuple[int, int]],
    generators: Sequence[Generator],
) -> Tuple[PairObject, Dict[Tuple[int, int], int]]:
    """Pair object of a box diagram in the canonical Jordan basis.

    Returns the object and the position of every box ``(column, power)``;
    columns are placed by decreasing length, ties in their given order.
    """
    order = sorted(range(len(columns)), key=lambda c: -columns[c][0])
    partition = Partition(tuple(columns[c][0] for c in order), n)
    position: Dict[Tuple[int, int], int] = {}
    for block, c in enumerate(order):
        length = columns[c][0]
        top = partition.generator_index(block)
        for k in range(length):
            position[(c, k)] = top - k
    rows = []
    for _, terms in generators:
        row = [field.zero] * partition.total
        for c, power, coeff in terms:
            p = position[(c, power)]
            row[p] = field.add(row[p], field.element(coeff))
        rows.append(row)
    return make_pair(field, n, partition, rows), position


# ---------------------------------------------------------------------------
# Complete lists


class CatalogEntry(NamedTuple):
    """One named indecomposable with its covering representation.

    Attributes:
        id: Stable identifier such as ``n4-13``.
        provenance: Where the entry was read from.
        n: Nilpotency bound.
        cover: Covering representation built from the box diagram.
        obj: Image of ``cover`` under the covering functor.
        expected: Dimension pair read off the declared dimension vector.
        end_dim: Dimension of the endomorphism ring, when stated.
    """

    id: str
    provenance: str
    n: int
    cover: CoverRep
    obj: PairObject
    expected: DimPair
    end_dim: Optional[int] = None

    @property
    def dimvec(self) -> DimVector:
        return dimvector(self.cover)


def _pair_of(x: DimVector) -> DimPair:
    return DimPair(sum(x.bottom), sum(x.top))


@lru_cache(maxsize=None)
def _load(n: int, field: Field, data_dir: Path) -> Tuple[CatalogEntry, ...]:
    path = data_dir / "catalog" / f"n{n}.box"
    declared, boxes = _read_box_file(path)
    if declared != n:
        raise CatalogError(f"{path} declares nilpotency {declared}, expected {n}")
    entries = []
    for box in boxes:
        cover = box_cover(field, n, box)
        obj = pi(cover)
        expected = _pair_of(box.dimvec) if box.dimvec is not None else obj.dim_pair
        if obj.dim_pair != expected:
            raise CatalogError(f"entry {box.id}: object has {obj.dim_pair}, declared {expected}")
        entries.append(CatalogEntry(box.id, box.provenance, n, cover, obj, expected))
    if len(entries) != CATALOG_COUNTS[n]:
        raise CatalogError(f"{path} has {len(entries)} entries, expected {CATALOG_COUNTS[n]}")
    logger.debug(f"loaded {len(entries)} catalog entries for n={n} over {field}")
    return tuple(entries)


def list_entries(n: int, field: Optional[Field] = None) -> List[CatalogEntry]:
    """All indecomposables of S(n) up to isomorphism, for ``1 <= n <= 5``.

    Raises:
        ValueError: ``n`` is outside ``1..5``; S(n) has infinitely many
            indecomposables from ``n = 6`` on.
        CatalogError: A data file is missing or inconsistent.
    """
    if n not in CATALOG_COUNTS:
        raise ValueError(f"complete lists exist for n = 1..5 only, got n = {n}")
    field = field or Field.parse(NilsubConfig.from_env().default_field)
    return list(_load(n, field, _data_dir()))


def find_entry(entry_id: str, field: Optional[Field] = None) -> CatalogEntry:
    """Look up a catalog entry by id, e.g. ``n5-28``."""
    prefix = entry_id.split("-", 1)[0]
    if not prefix.startswith("n") or not prefix[1:].isdigit():
        raise KeyError(entry_id)
    for entry in list_entries(int(prefix[1:]), field):
        if entry.id == entry_id:
            return entry
    raise KeyError(entry_id)


# ---------------------------------------------------------------------------
# The one-parameter family for n = 6


def x_family(field: Field, c: Scalar) -> PairObject:
    """``X_c``: partition (6,4,2), U generated by ``e3+e8``, ``e11-e8`` and
    ``c e4 + (c-1) e9 + e12`` (1-based, ``T e_i = 0`` for ``i`` in 1, 7, 11).

    The objects are indecomposable of dimension pair (12,6), and pairwise
    non-isomorphic for distinct ``c``.
    """
    c = field.element(c)
    minus_one = field.neg(field.one)

    def vec(*terms: Tuple[int, Scalar]) -> List[Scalar]:
        row = [field.zero] * 12
        for index, coeff in terms:
            row[index - 1] = field.add(row[index - 1], coeff)
        return row

    generators = [
        vec((3, field.one), (8, field.one)),
        vec((11, field.one), (8, minus_one)),
        vec((4, c), (9, field.add(c, minus_one)), (12, field.one)),
    ]
    return make_pair(field, 6, Partition((6, 4, 2), 6), generators)


# ---------------------------------------------------------------------------
# Dimension vectors for n = 6


def tube_dimvectors(data_dir: Optional[Path] = None) -> Dict[str, List[DimVector]]:
    """Dimension vectors printed around the tubes, plus the first twelve objects of each ray.

    Keys are the tube families of ``tubes.txt`` (``rank2``, ..., ``coray``) and
    the ray names of :func:`nilsub.kform.ray_dimvectors`.
    """
    path = (data_dir or _data_dir()) / "examples" / "tubes.txt"
    families: Dict[str, List[DimVector]] = {}
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise CatalogError(f"tube data {path} is missing") from None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<family> <digits>'", str(path), number)
        try:
            families.setdefault(parts[0], []).append(parse_dimvec(parts[1]))
        except ParseError as exc:
            raise ParseError(str(exc), str(path), number) from None
    families.update(ray_dimvectors(12))
    return families


# ---------------------------------------------------------------------------
# Worked examples for n = 6


class WorkedExample(NamedTuple):
    """A worked example with its covering witness and any named endomorphisms.

    Endomorphisms are matrices on ``obj``'s space (columns are images).
    """

    id: str
    provenance: str
    cover: CoverRep
    obj: PairObject
    endomorphisms: Dict[str, Matrix]


def _box_map(
    field: Field,
    columns: Sequence[Tuple[int, int]],
    position: Dict[Tuple[int, int], int],
    images: Dict[int, Sequence[Term]],
) -> Matrix:
    """The Λ-linear map sending the generator ``a_c`` to ``images[c]``."""
    size = sum(length for length, _ in columns)
    arr = field.zeros((size, size))
    for c, terms in images.items():
        for k in range(columns[c][0]):
            for d, power, coeff in terms:
                if k + power < columns[d][0]:
                    row, col = position[(d, k + power)], position[(c, k)]
                    arr[row, col] = field.add(arr[row, col], field.element(coeff))
    return Matrix(field, arr)


def worked_examples(field: Optional[Field] = None) -> Dict[str, WorkedExample]:
    """The box-notation example and the infinite-radical example.

    ``infinite-radical`` carries ``phi`` (``a1 -> a3``, ``a2 -> a4 x^2``,
    ``a3 -> -a6``, other generators to zero), the operator ``T`` and
    ``epsilon = T^5 phi^2``, whose image is spanned by ``a6 x^5``.
    """
    field = field or Field.parse(NilsubConfig.from_env().default_field)
    path = _data_dir() / "examples" / "worked.box"
    n, boxes = _read_box_file(path)
    out: Dict[str, WorkedExample] = {}
    for box in boxes:
        cover = box_cover(field, n, box)
        generators = _generators(field, box)
        obj, position = box_pair(field, n, box.columns, generators)
        endos: Dict[str, Matrix] = {}
        if box.id == "infinite-radical":
            one, minus_one = field.one, field.neg(field.one)
            phi = _box_map(
                field,
                box.columns,
                position,
                {0: [(2, 0, one)], 1: [(3, 2, one)], 2: [(5, 0, minus_one)]},
            )
            t = obj.operator
            epsilon = phi @ phi
            for _ in range(5):
                epsilon = t @ epsilon
            endos = {"phi": phi, "T": t, "epsilon": epsilon}
        out[box.id] = WorkedExample(box.id, box.provenance, cover, obj, endos)
    return out

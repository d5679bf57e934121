"""Functors between S(n) and the morphism category, and the Auslander-Reiten translate.

The translate of a non-projective indecomposable ``X = (V, U)`` is
``Mimo(tau_Λ(Cok X))``: take the cokernel map ``V -> V/U``, pass to the
stable category by dropping projective summands, apply ``tau_Λ = Ω²`` (``Λ``
is symmetric) and complete the result to a monomorphism by the injective
envelope of its kernel.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from nilsub.decorators import observe
from nilsub.errors import (
    DecomposableInputError,
    DimensionMismatchError,
    FieldMismatchError,
    NotAMorphismError,
    ProjectiveInputError,
)
from nilsub.exactla import Field, Matrix, kernel, random_matrix, rank, row_basis, solve, vstack
from nilsub.homalg import is_indecomposable, iso
from nilsub.nilmod import (
    PairObject,
    Partition,
    dual,
    from_blocks,
    is_module_map,
    jordan_basis,
    make_pair,
    module_hom_basis,
    quotient_module,
)
from nilsub.types import BoundaryName, OperationKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MorphismObject:
    """A Λ-linear map ``A' -> A`` between partition modules.

    Attributes:
        field: Base field.
        n: Nilpotency bound.
        source: Partition of ``A'``.
        target: Partition of ``A``.
        map: ``target.total x source.total`` matrix, columns are images.
    """

    field: Field
    n: int
    source: Partition
    target: Partition
    map: Matrix

    def __post_init__(self) -> None:
        if self.map.shape != (self.target.total, self.source.total):
            raise DimensionMismatchError(
                f"map must be {self.target.total}x{self.source.total}, got {self.map.rows}x{self.map.cols}"
            )
        if self.source.n != self.n or self.target.n != self.n or self.map.field != self.field:
            raise FieldMismatchError("morphism data over different fields or bounds")
        if not is_module_map(self.source, self.target, self.map):
            raise NotAMorphismError("map does not commute with the nilpotent operators")

    def is_injective(self) -> bool:
        return rank(self.map) == self.source.total

    def __repr__(self) -> str:
        return f"MorphismObject({self.source} -> {self.target}, rank {rank(self.map)})"


def _module_on(columns: Matrix, operator: Matrix, n: int) -> Tuple[Partition, Matrix]:
    """Jordan type of a submodule spanned by ``columns`` and its canonical basis as columns."""
    if columns.cols == 0:
        return Partition((), n), columns
    local = solve(columns, operator @ columns)
    assert local is not None
    partition, change = jordan_basis(local, n)
    return partition, columns @ change


# ---------------------------------------------------------------------------
# Cok, Mono, Mimo


def cok(c: PairObject) -> MorphismObject:
    """The cokernel map ``V -> V/U`` with ``V/U`` in partition form."""
    quot, projection = quotient_module(c.field, c.n, c.partition, c.subspace)
    return MorphismObject(c.field, c.n, c.partition, quot, projection)


def inclusion(x: PairObject) -> MorphismObject:
    """The embedding ``U -> V`` with ``U`` in partition form."""
    sub_partition, basis = _module_on(x.subspace.T, x.operator, x.n)
    return MorphismObject(x.field, x.n, sub_partition, x.partition, basis)


def mono(b: MorphismObject) -> PairObject:
    """The pair ``(A, image of b)``."""
    image = row_basis(b.map.T) if b.map.cols else Matrix.zeros(b.field, 0, b.target.total)
    return make_pair(b.field, b.n, b.target, image)


def injective_envelope(field: Field, m: Partition) -> Tuple[Partition, Matrix]:
    """One copy of ``Λ`` per block of ``m``, each block embedded at the bottom of its copy."""
    envelope = Partition((m.n,) * len(m.parts), m.n)
    arr = field.zeros((envelope.total, m.total))
    for j, (offset, part) in enumerate(zip(m.offsets, m.parts)):
        for s in range(part):
            arr[envelope.offsets[j] + s, offset + s] = field.one
    return envelope, Matrix(field, arr, reduced=True)


def _extensions(
    field: Field, source: Partition, envelope: Partition, incl: Matrix, emb: Matrix
) -> Tuple[Matrix, List[Matrix]]:
    """A map ``e: A' -> I`` with ``e incl = emb`` and a basis of the maps with ``e incl = 0``."""
    basis = module_hom_basis(field, source, envelope)
    if not basis:
        return Matrix.zeros(field, envelope.total, source.total), []
    columns = np.stack([(h @ incl).data.reshape(-1) for h in basis], axis=1)
    system = Matrix(field, columns, reduced=True)
    rhs = Matrix(field, emb.data.reshape(-1, 1), reduced=True)
    coeffs = solve(system, rhs)
    if coeffs is None:
        raise NotAMorphismError("the kernel inclusion does not extend to the injective envelope")
    stacked = np.stack([h.data for h in basis])

    def combine(vec: np.ndarray) -> Matrix:
        return Matrix(field, np.tensordot(vec, stacked, axes=1))

    free = kernel(system)
    return combine(coeffs.data[:, 0]), [combine(free.data[:, k]) for k in range(free.cols)]


def mimo(a: MorphismObject, rng: Optional[np.random.Generator] = None) -> PairObject:
    """The minimal monomorphism ``[a e]: A' -> A ⊕ I(Ker a)`` as a pair object.

    ``e`` extends the envelope of the kernel to ``A'``. With ``rng`` a random
    other extension is used; the result does not depend on the choice.
    """
    ker_partition, ker_basis = _module_on(kernel(a.map), a.source.operator(a.field), a.n)
    envelope, emb = injective_envelope(a.field, ker_partition)
    ext, free = _extensions(a.field, a.source, envelope, ker_basis, emb)
    if rng is not None and free:
        weights = random_matrix(a.field, rng, len(free), 1)
        for w, h in zip(weights.tolist(), free):
            ext = ext + h.scale(w[0])
    joint = vstack(a.field, [a.map, ext])
    sizes = list(a.target.parts) + list(envelope.parts)
    rows = row_basis(joint.T) if joint.cols else Matrix.zeros(a.field, 0, joint.rows)
    result = from_blocks(a.field, a.n, sizes, rows)
    logger.debug(f"mimo: kernel {ker_partition}, result {result.describe()}")
    return result


# ---------------------------------------------------------------------------
# The stable category of Λ


def strip_projective(a: MorphismObject) -> MorphismObject:
    """Drop the blocks of size ``n`` from source and target."""
    def keep(p: Partition) -> Tuple[Partition, List[int]]:
        idx: List[int] = []
        parts: List[int] = []
        for offset, part in zip(p.offsets, p.parts):
            if part < p.n:
                idx.extend(range(offset, offset + part))
                parts.append(part)
        return Partition(tuple(parts), p.n), idx

    source, cols = keep(a.source)
    target, rows = keep(a.target)
    return MorphismObject(a.field, a.n, source, target, a.map.take_rows(rows).take_cols(cols))


def projective_cover(field: Field, m: Partition) -> Tuple[Partition, Matrix]:
    """``Λ^t -> M`` sending the generator of copy ``j`` to the generator of block ``j``."""
    cover = Partition((m.n,) * len(m.parts), m.n)
    arr = field.zeros((m.total, cover.total))
    for j, (offset, part) in enumerate(zip(m.offsets, m.parts)):
        for k in range(part):
            arr[offset + part - 1 - k, cover.offsets[j] + m.n - 1 - k] = field.one
    return cover, Matrix(field, arr, reduced=True)


def syzygy(field: Field, m: Partition) -> Tuple[Partition, Matrix]:
    """``Ω M`` and its embedding into the projective cover of ``M``.

    Block ``Λ/x^a`` contributes ``x^a Λ ≅ Λ/x^(n-a)``; blocks are reordered
    to keep the parts non-increasing.
    """
    cover, _ = projective_cover(field, m)
    order = sorted(range(len(m.parts)), key=lambda j: m.parts[j])
    parts = [m.n - m.parts[j] for j in order]
    omega = Partition.of(parts, m.n)
    arr = field.zeros((cover.total, omega.total))
    col = 0
    for j in order:
        size = m.n - m.parts[j]
        for s in range(size):
            arr[cover.offsets[j] + s, col + s] = field.one
        col += size
    return omega, Matrix(field, arr, reduced=True)


def _omega(a: MorphismObject) -> MorphismObject:
    field = a.field
    cover_src, p_src = projective_cover(field, a.source)
    cover_tgt, p_tgt = projective_cover(field, a.target)
    omega_src, incl_src = syzygy(field, a.source)
    omega_tgt, incl_tgt = syzygy(field, a.target)
    op_tgt = cover_tgt.operator(field)
    # lift a through the covers: generator j of P_src goes to a preimage of a(gen_j)
    lift = field.zeros((cover_tgt.total, cover_src.total))
    for j, (offset, part) in enumerate(zip(a.source.offsets, a.source.parts)):
        image = a.map.take_cols([offset + part - 1])
        y = solve(p_tgt, image)
        assert y is not None
        for k in range(a.n):
            lift[:, cover_src.offsets[j] + a.n - 1 - k] = y.data[:, 0]
            y = op_tgt @ y
    lifted = Matrix(field, lift, reduced=True)
    restricted = solve(incl_tgt, lifted @ incl_src)
    assert restricted is not None
    return MorphismObject(field, a.n, omega_src, omega_tgt, restricted)


def tau_lambda(a: MorphismObject) -> MorphismObject:
    """``tau_Λ = Ω²`` applied to a map of the stable category."""
    stable = strip_projective(a)
    return _omega(_omega(stable))


# ---------------------------------------------------------------------------
# The translate on S(n)


def is_projective(x: PairObject) -> bool:
    """Whether ``x`` is ``(Λ, 0)`` or ``(Λ, Λ)``, the projective-injectives."""
    return x.partition.parts == (x.n,) and x.u in (0, x.n)


@observe(name="tau", kind=OperationKind.FUNCTOR, capture_output=False)
def tau(x: PairObject) -> PairObject:
    """Auslander-Reiten translate of a non-projective indecomposable object.

    Raises:
        ProjectiveInputError: ``x`` is projective.
        DecomposableInputError: ``x`` is not indecomposable.
    """
    if is_projective(x):
        raise ProjectiveInputError(f"{x.describe()} is projective")
    if not is_indecomposable(x):
        raise DecomposableInputError(f"{x.describe()} is decomposable")
    result = mimo(tau_lambda(cok(x)))
    logger.debug(f"tau {x.describe()} = {result.describe()}")
    return result


def tau_inverse(x: PairObject) -> PairObject:
    """Inverse translate through duality: ``dual(tau(dual(x)))``."""
    return dual(tau(dual(x)))


def tau_orbit(x: PairObject, steps: int) -> List[PairObject]:
    """``[x, tau x, tau² x, ...]`` with ``steps`` applications, stopping early at a projective."""
    orbit = [x]
    for _ in range(steps):
        if is_projective(orbit[-1]):
            break
        orbit.append(tau(orbit[-1]))
    return orbit


def tau_period(x: PairObject, limit: int = 12) -> Optional[int]:
    """Least ``k <= limit`` with ``tau^k x ≅ x``, or None."""
    current = x
    for k in range(1, limit + 1):
        current = tau(current)
        if iso(current, x):
            return k
    return None


# ---------------------------------------------------------------------------
# Boundary objects

TAU_BOUNDARY_ORBIT = (
    BoundaryName.K,
    BoundaryName.J,
    BoundaryName.R,
    BoundaryName.P_PRIME_MOD_K,
    BoundaryName.R_PRIME,
    BoundaryName.S,
)


def boundary_objects(field: Field, n: int) -> Dict[BoundaryName, PairObject]:
    """The eight objects around the projective-injectives of S(n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    def unit(size: int, index: int) -> List[int]:
        vec = [0] * size
        vec[index] = 1
        return vec

    full = [unit(n, n - 1)]
    return {
        BoundaryName.P: make_pair(field, n, Partition.of([n], n)),
        BoundaryName.P_PRIME: make_pair(field, n, Partition.of([n], n), full),
        BoundaryName.R: make_pair(field, n, Partition.of([n - 1], n)),
        BoundaryName.R_PRIME: make_pair(field, n, Partition.of([n], n), [unit(n, n - 2)] if n > 1 else []),
        BoundaryName.J: make_pair(field, n, Partition.of([n], n), [unit(n, 0)]),
        BoundaryName.P_PRIME_MOD_K: make_pair(
            field, n, Partition.of([n - 1], n), [unit(n - 1, n - 2)] if n > 1 else []
        ),
        BoundaryName.S: make_pair(field, n, Partition.of([1], n)),
        BoundaryName.K: make_pair(field, n, Partition.of([1], n), [unit(1, 0)]),
    }


def boundary_coincidences(
    field: Field, n: int, names: Sequence[BoundaryName] = tuple(BoundaryName)
) -> List[Tuple[BoundaryName, BoundaryName]]:
    """Pairs of boundary objects that are isomorphic (nonzero ones only)."""
    objects = boundary_objects(field, n)
    pairs: List[Tuple[BoundaryName, BoundaryName]] = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            x, y = objects[a], objects[b]
            if not x.is_zero() and not y.is_zero() and iso(x, y):
                pairs.append((a, b))
    return pairs

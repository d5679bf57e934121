"""Objects of S(n): nilpotent modules with an invariant subspace.

A module over ``k[x]/x^n`` is given by a partition. Its canonical basis is
block-major with the parts non-increasing; inside a block starting at offset
``o`` the operator sends ``e_o`` to zero and ``e_{o+s}`` to ``e_{o+s-1}``. The
last vector of a block generates it. Vectors are row vectors, so the image of
a set of rows ``U`` under ``T`` is ``U @ T.T``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from nilsub.errors import (
    DimensionMismatchError,
    FieldMismatchError,
    NonSplitError,
    NotAMorphismError,
    NotInflationError,
    NotInvariantError,
    PartitionError,
)
from nilsub.exactla import (
    Field,
    Matrix,
    Scalar,
    block_diagonal,
    complement_rows,
    in_row_space,
    intersect_row_spaces,
    invert,
    irreducible_factor_degrees,
    kernel,
    minimal_polynomial,
    poly_roots,
    random_matrix,
    rank,
    row_basis,
    solve,
    vstack,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """Jordan type of a nilpotent operator: non-increasing parts, each at most ``n``."""

    parts: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PartitionError(f"nilpotency bound must be positive, got {self.n}")
        for part in self.parts:
            if part < 1:
                raise PartitionError(f"parts must be positive, got {part}")
            if part > self.n:
                raise PartitionError(f"part {part} exceeds the nilpotency bound {self.n}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise PartitionError(f"parts must be non-increasing, got {self.parts}")

    @classmethod
    def of(cls, parts: Sequence[int], n: int) -> "Partition":
        """Build a partition from parts in any order; zero parts are dropped."""
        return cls(tuple(sorted((int(p) for p in parts if p), reverse=True)), n)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def offsets(self) -> Tuple[int, ...]:
        out = []
        acc = 0
        for part in self.parts:
            out.append(acc)
            acc += part
        return tuple(out)

    def operator(self, field: Field) -> Matrix:
        """Matrix of ``T`` in the canonical basis (columns are images)."""
        arr = field.zeros((self.total, self.total))
        for offset, part in zip(self.offsets, self.parts):
            for s in range(1, part):
                arr[offset + s - 1, offset + s] = field.one
        return Matrix(field, arr, reduced=True)

    def generator_index(self, block: int) -> int:
        return self.offsets[block] + self.parts[block] - 1

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class DimPair:
    """Dimension pair ``(dim V, dim U)``."""

    v: int
    u: int

    def __post_init__(self) -> None:
        if not 0 <= self.u <= self.v:
            raise ValueError(f"dimension pair needs 0 <= u <= v, got ({self.v},{self.u})")

    def delta(self) -> "DimPair":
        return DimPair(self.v, self.v - self.u)

    def __add__(self, other: "DimPair") -> "DimPair":
        return DimPair(self.v + other.v, self.u + other.u)

    def __str__(self) -> str:
        return f"({self.v},{self.u})"


def partition_from_ranks(ranks: Sequence[int], n: int) -> Partition:
    """Jordan type from ``ranks[k] = rank(S^k)``, ``ranks[0]`` being the dimension."""
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts: List[int] = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return Partition(tuple(parts), n)


@dataclass(frozen=True)
class PairObject:
    """An object ``(V, U, T)`` of S(n) in normal form.

    Attributes:
        field: Base field.
        n: Nilpotency bound.
        partition: Jordan type of ``T`` on ``V``.
        subspace: Reduced echelon rows spanning ``U`` in the canonical basis.
    """

    field: Field
    n: int
    partition: Partition
    subspace: Matrix

    def __post_init__(self) -> None:
        if self.partition.n != self.n:
            raise FieldMismatchError(
                f"partition bound {self.partition.n} differs from object bound {self.n}"
            )
        if self.subspace.field != self.field:
            raise FieldMismatchError(f"subspace over {self.subspace.field}, object over {self.field}")
        if self.subspace.cols != self.partition.total:
            raise DimensionMismatchError(
                f"subspace rows have length {self.subspace.cols}, expected {self.partition.total}"
            )
        if row_basis(self.subspace) != self.subspace:
            raise NotInvariantError("subspace rows must be in reduced row-echelon form")
        if not in_row_space(self.subspace, self.subspace @ self.operator.T):
            raise NotInvariantError("subspace is not invariant under T")

    @cached_property
    def operator(self) -> Matrix:
        return self.partition.operator(self.field)

    @property
    def v(self) -> int:
        return self.partition.total

    @property
    def u(self) -> int:
        return self.subspace.rows

    @property
    def dim_pair(self) -> DimPair:
        return DimPair(self.v, self.u)

    def is_zero(self) -> bool:
        return self.v == 0

    def subspace_ranks(self) -> List[int]:
        """``rank(T^k|U)`` for ``k = 0..n``."""
        out = [self.u]
        rows = self.subspace
        for _ in range(self.n):
            rows = rows @ self.operator.T
            out.append(rank(rows))
        return out

    def quotient_ranks(self) -> List[int]:
        """``rank(T^k)`` on ``V/U`` for ``k = 0..n``."""
        out = [self.v - self.u]
        power = Matrix.identity(self.field, self.v)
        for _ in range(self.n):
            power = power @ self.operator
            out.append(rank(self.subspace.vstack(power.T)) - self.u)
        return out

    def subspace_partition(self) -> Partition:
        """Jordan type of ``T`` restricted to ``U``."""
        return partition_from_ranks(self.subspace_ranks(), self.n)

    def quotient_partition(self) -> Partition:
        """Jordan type of ``T`` induced on ``V/U``."""
        return partition_from_ranks(self.quotient_ranks(), self.n)

    def describe(self) -> str:
        return f"partition {self.partition} dim pair {self.dim_pair}"

    def __repr__(self) -> str:
        return f"PairObject({self.field}, n={self.n}, {self.partition}, u={self.u})"


# ---------------------------------------------------------------------------
# Construction


def _as_rows(field: Field, generators: Union[Matrix, Sequence[Sequence[Any]]], width: int) -> Matrix:
    if isinstance(generators, Matrix):
        if generators.cols != width:
            raise DimensionMismatchError(
                f"generator length {generators.cols} does not match total dimension {width}"
            )
        return generators
    for g in generators:
        if len(g) != width:
            raise DimensionMismatchError(
                f"generator length {len(g)} does not match total dimension {width}"
            )
    return Matrix.from_rows(field, generators, width)


def t_closure(rows: Matrix, operator: Matrix, n: int) -> Matrix:
    """Echelon basis of the smallest T-invariant subspace containing ``rows``."""
    blocks = [rows]
    current = rows
    for _ in range(n - 1):
        current = current @ operator.T
        if current.is_zero():
            break
        blocks.append(current)
    return row_basis(vstack(rows.field, blocks))


def make_pair(
    field: Field,
    n: int,
    partition: Union[Partition, Sequence[int]],
    generators: Union[Matrix, Sequence[Sequence[Any]]] = (),
) -> PairObject:
    """Pair object whose subspace is the T-closure of the span of ``generators``."""
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition), n)
    rows = _as_rows(field, generators, partition.total)
    subspace = t_closure(rows, partition.operator(field), n)
    return PairObject(field, n, partition, subspace)


def unit_vector(field: Field, length: int, *indices_and_coeffs: Tuple[int, Scalar]) -> List[Scalar]:
    """Vector with the given 0-based coordinates set."""
    vec = [field.zero] * length
    for index, coeff in indices_and_coeffs:
        vec[index] = field.add(vec[index], coeff)
    return vec


def from_blocks(
    field: Field,
    n: int,
    sizes: Sequence[int],
    subspace_rows: Matrix,
) -> PairObject:
    """Normalize an object given by Jordan blocks in arbitrary order.

    ``subspace_rows`` are expressed in the juxtaposed block basis. Blocks are
    stably sorted by decreasing size and coordinates permuted along.
    """
    offsets = []
    acc = 0
    for size in sizes:
        offsets.append(acc)
        acc += size
    if subspace_rows.cols != acc:
        raise DimensionMismatchError(f"subspace rows have length {subspace_rows.cols}, expected {acc}")
    order = sorted((i for i in range(len(sizes)) if sizes[i] > 0), key=lambda i: -sizes[i])
    perm: List[int] = []
    for i in order:
        perm.extend(range(offsets[i], offsets[i] + sizes[i]))
    partition = Partition(tuple(sizes[i] for i in order), n)
    rows = row_basis(subspace_rows.take_cols(perm)) if subspace_rows.rows else subspace_rows
    return PairObject(field, n, partition, rows)


def direct_sum(x: PairObject, y: PairObject) -> PairObject:
    """Direct sum, blocks merged by decreasing size with ``x`` first on ties."""
    if x.field != y.field or x.n != y.n:
        raise FieldMismatchError(f"cannot add objects over {x.field}/n={x.n} and {y.field}/n={y.n}")
    sizes = list(x.partition.parts) + list(y.partition.parts)
    rows = block_diagonal(x.field, [x.subspace, y.subspace])
    return from_blocks(x.field, x.n, sizes, rows)


def direct_sum_all(field: Field, n: int, objects: Sequence[PairObject]) -> PairObject:
    result = zero_object(field, n)
    for obj in objects:
        result = direct_sum(result, obj)
    return result


def zero_object(field: Field, n: int) -> PairObject:
    return PairObject(field, n, Partition((), n), Matrix.zeros(field, 0, 0))


# ---------------------------------------------------------------------------
# Normal forms for arbitrary nilpotent operators


def nilpotency_index(operator: Matrix) -> int:
    """Smallest ``m`` with ``operator^m = 0``; raises if the operator is not nilpotent."""
    size = operator.rows
    power = Matrix.identity(operator.field, size)
    for m in range(size + 1):
        if power.is_zero():
            return m
        power = power @ operator
    if power.is_zero():
        return size + 1
    raise PartitionError("operator is not nilpotent")


def jordan_basis(operator: Matrix, n: Optional[int] = None) -> Tuple[Partition, Matrix]:
    """Jordan type and a change of basis for a nilpotent operator.

    Returns ``(partition, P)`` with ``P^{-1} operator P`` the canonical
    operator of ``partition``. The columns of ``P`` are chains
    ``T^{L-1} v, ..., T v, v`` found from the kernel filtration, longest first.
    """
    field = operator.field
    size = operator.rows
    m = nilpotency_index(operator)
    bound = n if n is not None else max(m, 1)
    if m > bound:
        raise PartitionError(f"operator has nilpotency index {m} > {bound}")
    kernels = [Matrix.zeros(field, 0, size)]
    power = Matrix.identity(field, size)
    for _ in range(m):
        power = power @ operator
        kernels.append(kernel(power).T)

    chains: List[List[Matrix]] = []
    lengths: List[int] = []
    carried: List[Matrix] = []
    for level in range(m, 0, -1):
        span = vstack(field, [kernels[level - 1]] + carried) if carried else kernels[level - 1]
        current_rank = rank(span) if span.rows else 0
        new_gens: List[Matrix] = []
        for j in range(kernels[level].rows):
            cand = kernels[level].take_rows([j])
            trial = span.vstack(cand)
            trial_rank = rank(trial)
            if trial_rank > current_rank:
                span = trial
                current_rank = trial_rank
                new_gens.append(cand)
        for gen in new_gens:
            chain = [gen]
            for _ in range(level - 1):
                chain.append(chain[-1] @ operator.T)
            chains.append(list(reversed(chain)))
            lengths.append(level)
        # vectors of all chains one level down
        carried = [c @ operator.T for c in carried] + [g @ operator.T for g in new_gens]
        carried = [c for c in carried if not c.is_zero()]

    if chains:
        basis_rows = vstack(field, [row for chain in chains for row in chain])
    else:
        basis_rows = Matrix.zeros(field, 0, size)
    partition = Partition(tuple(lengths), bound)
    return partition, basis_rows.T


def from_operator(
    field: Field,
    n: int,
    operator: Matrix,
    subspace_rows: Matrix,
) -> PairObject:
    """Normal form of an arbitrary nilpotent operator with an invariant subspace."""
    if operator.rows != operator.cols or subspace_rows.cols != operator.rows:
        raise DimensionMismatchError("operator and subspace sizes do not match")
    partition, change = jordan_basis(operator, n)
    if operator.rows == 0:
        return zero_object(field, n)
    inverse = invert(change)
    assert inverse is not None
    rows = row_basis(subspace_rows @ inverse.T) if subspace_rows.rows else Matrix.zeros(
        field, 0, operator.rows
    )
    return PairObject(field, n, partition, rows)


def _quotient_data(operator: Matrix, sub_rows: Matrix) -> Tuple[Matrix, Matrix]:
    """Operator induced on ``V/W`` and the projection ``V -> V/W`` in complement coordinates.

    ``sub_rows`` spans a T-invariant subspace ``W``. Returns the induced
    operator (columns are images) and the projection matrix (``q x v``).
    """
    field = operator.field
    basis = row_basis(sub_rows) if sub_rows.rows else Matrix.zeros(field, 0, operator.rows)
    comp = complement_rows(basis)
    full = basis.vstack(comp)
    full_inv = invert(full)
    assert full_inv is not None
    r = basis.rows
    coords = full_inv.take_cols(range(r, operator.rows))
    induced = (comp @ operator.T @ coords).T
    return induced, coords.T


def quotient_module(
    field: Field,
    n: int,
    partition: Partition,
    sub_rows: Matrix,
) -> Tuple[Partition, Matrix]:
    """Normalize ``V/W`` for a submodule ``W`` of a partition module.

    Returns the partition of the quotient and the canonical projection
    ``V -> V/W`` (columns are images of the basis of ``V``).
    """
    induced, proj = _quotient_data(partition.operator(field), sub_rows)
    quot_partition, change = jordan_basis(induced, n)
    if induced.rows == 0:
        return quot_partition, proj
    change_inv = invert(change)
    assert change_inv is not None
    return quot_partition, change_inv @ proj


def _check_embedding(sub: PairObject, big: PairObject, embedding: Matrix) -> None:
    if embedding.shape != (big.v, sub.v):
        raise DimensionMismatchError(
            f"embedding must be {big.v}x{sub.v}, got {embedding.rows}x{embedding.cols}"
        )
    if embedding @ sub.operator != big.operator @ embedding:
        raise NotAMorphismError("embedding does not commute with T")
    if not in_row_space(big.subspace, sub.subspace @ embedding.T):
        raise NotAMorphismError("embedding does not map U' into U")
    if rank(embedding) != sub.v:
        raise NotAMorphismError("embedding is not injective")


def is_inflation(sub: PairObject, big: PairObject, embedding: Matrix) -> bool:
    """Whether ``embedding`` realizes ``sub`` as a subobject with ``U' = U ∩ V'``."""
    _check_embedding(sub, big, embedding)
    image_u = rank(sub.subspace @ embedding.T) if sub.u else 0
    meet = intersect_row_spaces(big.subspace, embedding.T)
    return image_u == meet.rows


def quotient(big: PairObject, sub: PairObject, embedding: Matrix) -> PairObject:
    """The quotient ``(V/V', U/U')`` of an inflation."""
    if not is_inflation(sub, big, embedding):
        raise NotInflationError("U' differs from U ∩ V'; the quotient is not defined")
    image = embedding.T
    induced, proj = _quotient_data(big.operator, image)
    rows = big.subspace @ proj.T
    return from_operator(big.field, big.n, induced, rows)


# ---------------------------------------------------------------------------
# Duality


def _block_reversal(partition: Partition) -> List[int]:
    perm: List[int] = []
    for offset, part in zip(partition.offsets, partition.parts):
        perm.extend(offset + part - 1 - s for s in range(part))
    return perm


def dual(x: PairObject) -> PairObject:
    """``(V*, (V/U)*, T*)`` on the same partition.

    The dual basis is reversed inside each block so that ``T*`` is again the
    canonical operator; the new subspace is the annihilator of ``U``.
    """
    if x.u == 0:
        annihilator = Matrix.identity(x.field, x.v)
    else:
        annihilator = kernel(x.subspace).T
    rows = annihilator.take_cols(_block_reversal(x.partition)) if annihilator.rows else annihilator
    return PairObject(x.field, x.n, x.partition, row_basis(rows) if rows.rows else rows)


# ---------------------------------------------------------------------------
# Morphisms between partition modules


def module_hom_basis(field: Field, source: Partition, target: Partition) -> List[Matrix]:
    """Basis of ``Hom_Λ`` from the module of ``source`` to the module of ``target``.

    Each element sends one block generator of ``source`` (size ``a``) to
    ``e_{o+t}`` in a block of ``target`` (size ``b``), ``t < min(a, b)``, and
    zero to all other generators.
    """
    basis: List[Matrix] = []
    for j, (src_off, a) in enumerate(zip(source.offsets, source.parts)):
        for i, (tgt_off, b) in enumerate(zip(target.offsets, target.parts)):
            for t in range(min(a, b)):
                arr = field.zeros((target.total, source.total))
                for k in range(t + 1):
                    arr[tgt_off + t - k, src_off + a - 1 - k] = field.one
                basis.append(Matrix(field, arr, reduced=True))
    return basis


def is_module_map(source: Partition, target: Partition, f: Matrix) -> bool:
    field = f.field
    return bool(f @ source.operator(field) == target.operator(field) @ f)


# ---------------------------------------------------------------------------
# Primary decomposition


class PrimaryComponent(NamedTuple):
    eigenvalue: Scalar
    pair: PairObject


def primary_components(
    field: Field,
    operator: Matrix,
    generators: Union[Matrix, Sequence[Sequence[Any]]] = (),
) -> List[PrimaryComponent]:
    """Split an arbitrary operator with invariant subspace into nilpotent components.

    Each eigenvalue ``λ`` of multiplicity ``m`` in the minimal polynomial
    gives the generalized eigenspace ``ker (T - λ)^m`` with operator ``T - λ``
    (nilpotency bound ``m``) and ``U`` restricted to it.

    Raises:
        NonSplitError: The minimal polynomial has non-linear irreducible factors.
    """
    if operator.rows != operator.cols:
        raise DimensionMismatchError("operator must be square")
    size = operator.rows
    rows = _as_rows(field, generators, size)
    minpoly = minimal_polynomial(operator)
    roots = poly_roots(field, minpoly)
    if sum(mult for _, mult in roots) != len(minpoly) - 1:
        degrees = [d for d in irreducible_factor_degrees(field, minpoly) if d > 1]
        raise NonSplitError(
            f"minimal polynomial does not split over {field}; irreducible factor degrees {degrees}",
            degrees,
        )
    closure = t_closure(rows, operator, size + 1) if rows.rows else rows
    ident = Matrix.identity(field, size)
    components: List[PrimaryComponent] = []
    for eigenvalue, mult in roots:
        shifted = operator - ident.scale(eigenvalue)
        space = kernel(shifted.power(mult))
        local_op = solve(space, shifted @ space)
        assert local_op is not None
        if closure.rows:
            meet = intersect_row_spaces(closure, space.T)
        else:
            meet = closure
        if meet.rows:
            coords = solve(space, meet.T)
            assert coords is not None
            local_rows = coords.T
        else:
            local_rows = Matrix.zeros(field, 0, space.cols)
        pair = from_operator(field, mult, local_op, local_rows)
        logger.debug(f"primary component λ={eigenvalue}: {pair.describe()}")
        components.append(PrimaryComponent(eigenvalue, pair))
    return components


def primary_decompose(
    field: Field,
    operator: Matrix,
    generators: Union[Matrix, Sequence[Sequence[Any]]] = (),
) -> List[PairObject]:
    """One nilpotent pair object per eigenvalue, in increasing eigenvalue order."""
    return [c.pair for c in primary_components(field, operator, generators)]


def random_automorphism(x: PairObject, rng: np.random.Generator) -> Matrix:
    """A random invertible Λ-linear map of ``V`` preserving ``U``."""
    from nilsub.homalg import hom, random_invertible

    found = random_invertible(hom(x, x), rng, trials=64)
    if found is None:
        raise AssertionError("no automorphism found")
    return found


def transport(x: PairObject, g: Matrix) -> PairObject:
    """The object ``(V, g(U))`` for an automorphism ``g`` of the module ``V``."""
    if not is_module_map(x.partition, x.partition, g):
        raise NotAMorphismError("transport needs a Λ-linear automorphism")
    rows = x.subspace @ g.T
    return PairObject(x.field, x.n, x.partition, row_basis(rows) if rows.rows else rows)


def random_object(
    field: Field,
    n: int,
    rng: np.random.Generator,
    max_dim: int = 8,
    max_generators: int = 2,
) -> PairObject:
    """A random object of total dimension ``1..max_dim`` with a few random generators."""
    total = int(rng.integers(1, max_dim + 1))
    parts: List[int] = []
    while total > 0:
        part = int(rng.integers(1, min(n, total) + 1))
        parts.append(part)
        total -= part
    partition = Partition.of(parts, n)
    count = int(rng.integers(0, max_generators + 1))
    generators = random_matrix(field, rng, count, partition.total).tolist() if count else []
    return make_pair(field, n, partition, generators)

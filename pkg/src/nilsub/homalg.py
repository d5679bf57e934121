"""Homomorphisms, endomorphism algebras and Krull-Remak-Schmidt decomposition."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import log
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np

from nilsub.config import NilsubConfig
from nilsub.decorators import observe
from nilsub.errors import BoundExceededError, CoverMismatchError, DecompositionError, FieldMismatchError
from nilsub.exactla import (
    Field,
    Matrix,
    Poly,
    intersect_row_spaces,
    irreducible_factor_degrees,
    kernel,
    minimal_polynomial,
    poly_at_matrix,
    poly_gcd,
    poly_powmod,
    poly_roots,
    poly_sub,
    rank,
    row_basis,
    rref,
    solve,
)
from nilsub.nilmod import (
    PairObject,
    Partition,
    direct_sum_all,
    from_operator,
    module_hom_basis,
)
from nilsub.types import OperationKind

if TYPE_CHECKING:
    from nilsub.covering import CoverRep

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomSpace:
    """Basis of ``Hom((V,U,T), (V',U',T'))``; each element is a ``v' x v`` matrix."""

    source: PairObject
    target: PairObject
    basis: Tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> Field:
        return self.source.field

    def flat(self) -> np.ndarray:
        """Basis as an array of shape ``(dim, v' * v)``."""
        shape = (self.dim, self.target.v * self.source.v)
        if not self.basis:
            return self.field.zeros(shape)
        return np.stack([b.data.reshape(-1) for b in self.basis])

    def combination(self, coeffs: Sequence[object]) -> Matrix:
        field = self.field
        arr = field.reduce(np.asarray(list(coeffs), dtype=object))
        if not self.basis:
            return Matrix.zeros(field, self.target.v, self.source.v)
        flat = field.reduce(arr @ self.flat())
        return Matrix(field, flat.reshape(self.target.v, self.source.v), reduced=True)

    def __repr__(self) -> str:
        return f"HomSpace({self.source.describe()} -> {self.target.describe()}, dim={self.dim})"


@lru_cache(maxsize=1024)
def _candidate_maps(field: Field, source: Partition, target: Partition) -> np.ndarray:
    basis = module_hom_basis(field, source, target)
    if not basis:
        return field.zeros((0, target.total, source.total))
    stacked = np.stack([b.data for b in basis])
    stacked.setflags(write=False)
    return stacked


def _hom_uncached(x: PairObject, y: PairObject) -> HomSpace:
    field = x.field
    candidates = _candidate_maps(field, x.partition, y.partition)
    count = candidates.shape[0]
    if count == 0:
        return HomSpace(x, y, ())
    constrained = x.u > 0 and y.u < y.v
    if not constrained:
        basis = tuple(Matrix(field, c, reduced=True) for c in candidates)
        return HomSpace(x, y, basis)
    annihilator = kernel(y.subspace).T
    # conditions Z F U^T = 0 for every candidate F
    conds = np.matmul(np.matmul(annihilator.data, candidates), x.subspace.data.T)
    system = Matrix(field, conds.reshape(count, -1).T)
    coeffs = kernel(system)
    if coeffs.cols == 0:
        return HomSpace(x, y, ())
    flat = field.reduce(coeffs.data.T @ candidates.reshape(count, -1))
    basis = tuple(
        Matrix(field, row.reshape(y.v, x.v).copy(), reduced=True) for row in flat
    )
    return HomSpace(x, y, basis)


@lru_cache(maxsize=8192)
def _hom_cached(x: PairObject, y: PairObject) -> HomSpace:
    return _hom_uncached(x, y)


def hom(x: PairObject, y: PairObject) -> HomSpace:
    """Basis of the maps ``f`` with ``f T = T' f`` and ``f(U) ⊆ U'``.

    The module maps between the two partitions are parametrized first; the
    subspace condition is then a linear system in the parameters.

    Raises:
        FieldMismatchError: The objects live over different fields or bounds.
    """
    if x.field != y.field or x.n != y.n:
        raise FieldMismatchError(
            f"hom between objects over {x.field}/n={x.n} and {y.field}/n={y.n}"
        )
    return _hom_cached(x, y)


def is_morphism(x: PairObject, y: PairObject, f: Matrix) -> bool:
    """Whether ``f`` is a map of pairs from ``x`` to ``y``."""
    if f.shape != (y.v, x.v):
        return False
    if f @ x.operator != y.operator @ f:
        return False
    if x.u == 0:
        return True
    image = x.subspace @ f.T
    return rank(y.subspace.vstack(image)) == y.u


# ---------------------------------------------------------------------------
# Endomorphism algebras


@dataclass(frozen=True)
class EndAlgebra:
    """``End(X)`` with a basis in reduced echelon form on the flattened matrices."""

    obj: PairObject
    basis: Tuple[Matrix, ...]
    pivots: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> Field:
        return self.obj.field

    def coordinates(self, f: Matrix) -> List[object]:
        """Coordinates of an element of the algebra in :attr:`basis`."""
        flat = f.data.reshape(-1)
        return [flat[p] for p in self.pivots]

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``c[i, j, k]`` with ``basis[i] @ basis[j] = sum_k c[i, j, k] basis[k]``."""
        field = self.field
        d = self.dim
        table = field.zeros((d, d, d))
        for i, j in itertools.product(range(d), repeat=2):
            table[i, j] = self.coordinates(self.basis[i] @ self.basis[j])
        return table

    def __repr__(self) -> str:
        return f"EndAlgebra({self.obj.describe()}, dim={self.dim})"


@lru_cache(maxsize=4096)
def end_algebra(x: PairObject) -> EndAlgebra:
    """Endomorphism algebra of ``x``."""
    space = hom(x, x)
    field = x.field
    if space.dim == 0:
        return EndAlgebra(x, (), ())
    flat = Matrix(field, space.flat(), reduced=True)
    red, pivots = rref(flat)
    basis = tuple(
        Matrix(field, red.data[k].reshape(x.v, x.v).copy(), reduced=True)
        for k in range(len(pivots))
    )
    return EndAlgebra(x, basis, tuple(pivots))


def _p_adic_trace_digit(mat: np.ndarray, p: int, level: int) -> int:
    """``(Tr(X^{p^level}) mod p^{level+1}) // p^level`` for an integer lift ``X``."""
    modulus = p ** (level + 1)
    use_int64 = modulus**2 * max(mat.shape[0], 1) < 2**62
    acc = np.array(mat, dtype=np.int64 if use_int64 else object) % modulus
    result = np.eye(mat.shape[0], dtype=acc.dtype) % modulus
    exponent = p**level
    while exponent:
        if exponent & 1:
            result = (result @ acc) % modulus
        acc = (acc @ acc) % modulus
        exponent >>= 1
    trace = int(np.trace(result)) % modulus
    return trace // p**level


def _radical_basis(algebra: EndAlgebra) -> Tuple[Matrix, ...]:
    field = algebra.field
    size = algebra.obj.v
    current = list(algebra.basis)
    if not current:
        return ()
    if field.p is None:
        levels = [0]
    else:
        levels = list(range(int(log(size, field.p) + 1e-9) + 1)) if size > 1 else [0]
    for level in levels:
        if not current:
            break
        table = field.zeros((len(current), algebra.dim))
        for k, elem in enumerate(current):
            for j, b in enumerate(algebra.basis):
                prod = elem @ b
                if field.p is None:
                    table[k, j] = sum(prod.data[i, i] for i in range(size))
                else:
                    lifted = np.array(prod.data, dtype=object)
                    table[k, j] = _p_adic_trace_digit(lifted, field.p, level) % field.p
        coeffs = kernel(Matrix(field, table).T)
        if coeffs.cols == len(current):
            continue
        flat = np.stack([c.data.reshape(-1) for c in current])
        combos = field.reduce(coeffs.data.T @ flat)
        current = [Matrix(field, row.reshape(size, size).copy(), reduced=True) for row in combos]
        if field.p is None:
            break
    if current:
        reduced = row_basis(Matrix(field, np.stack([c.data.reshape(-1) for c in current])))
        current = [
            Matrix(field, reduced.data[k].reshape(size, size).copy(), reduced=True)
            for k in range(reduced.rows)
        ]
    return tuple(current)


@lru_cache(maxsize=4096)
def _radical_cached(algebra: EndAlgebra) -> Tuple[Matrix, ...]:
    return _radical_basis(algebra)


def radical_of_end(algebra: EndAlgebra) -> Tuple[Matrix, ...]:
    """Basis of the Jacobson radical of ``End(X)``.

    Over ``F_p`` this is the iterated p-adic trace algorithm for matrix
    algebras: ``I_{-1} = End`` and ``I_i`` keeps the ``x`` in ``I_{i-1}`` with
    ``g_i(x y) = 0`` for all ``y``, where ``g_i`` is the ``i``-th p-adic digit
    of the trace of ``x^(p^i)``; after ``floor(log_p v)`` steps ``I_i = J``.
    Over the rationals the radical of the trace form is used.
    """
    return _radical_cached(algebra)


@dataclass(frozen=True)
class ResidueAlgebra:
    """``End(X)/J`` given by representatives of a complement of ``J``."""

    algebra: EndAlgebra
    radical: Tuple[Matrix, ...]
    representatives: Tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def _flat(self, mats: Sequence[Matrix]) -> Matrix:
        field = self.algebra.field
        size = self.algebra.obj.v * self.algebra.obj.v
        if not mats:
            return Matrix.zeros(field, 0, size)
        return Matrix(field, np.stack([m.data.reshape(-1) for m in mats]), reduced=True)

    def in_radical(self, f: Matrix) -> bool:
        rad = self._flat(self.radical)
        vec = self._flat([f])
        return rank(rad.vstack(vec)) == rad.rows

    def coordinates(self, f: Matrix) -> List[object]:
        """Coordinates of ``f + J`` in the representatives."""
        field = self.algebra.field
        both = self._flat(list(self.radical) + list(self.representatives))
        sol = solve(both.T, self._flat([f]).T)
        if sol is None:
            raise DecompositionError("element outside the endomorphism algebra")
        return [sol.entry(len(self.radical) + i, 0) for i in range(self.dim)]

    def is_commutative(self) -> bool:
        reps = self.representatives
        for a, b in itertools.combinations(reps, 2):
            if not self.in_radical(a @ b - b @ a):
                return False
        return True

    def frobenius_fixed_dim(self) -> int:
        """Dimension of ``{a : a^p = a}`` in a commutative residue algebra over ``F_p``."""
        field = self.algebra.field
        assert field.p is not None
        columns = []
        for rep in self.representatives:
            columns.append(self.coordinates(rep.power(field.p)))
        frob = Matrix(field, np.array(columns, dtype=object).T)
        ident = Matrix.identity(field, self.dim)
        return self.dim - rank(frob - ident)

    def is_field(self) -> bool:
        """Certified test that ``End/J`` is a field.

        Over ``F_p`` a commutative residue algebra is a field exactly when its
        Frobenius fixed algebra is the prime field. Over the rationals only a
        one-dimensional residue algebra is accepted.
        """
        if self.dim == 1:
            return True
        if self.dim == 0:
            return False
        field = self.algebra.field
        if field.p is not None:
            return self.is_commutative() and self.frobenius_fixed_dim() == 1
        return False


def residue_algebra(algebra: EndAlgebra) -> ResidueAlgebra:
    rad = radical_of_end(algebra)
    field = algebra.field
    size = algebra.obj.v
    if rad:
        flat_rad = Matrix(field, np.stack([m.data.reshape(-1) for m in rad]), reduced=True)
    else:
        flat_rad = Matrix.zeros(field, 0, size * size)
    reps: List[Matrix] = []
    span = flat_rad
    current_rank = span.rows
    for b in algebra.basis:
        trial = span.vstack(Matrix(field, b.data.reshape(1, -1), reduced=True))
        trial_rank = rank(trial)
        if trial_rank > current_rank:
            span = trial
            current_rank = trial_rank
            reps.append(b)
    return ResidueAlgebra(algebra, rad, tuple(reps))


def is_local(x: PairObject) -> bool:
    """Whether ``End(x)`` is local, i.e. ``x`` is indecomposable."""
    if x.is_zero():
        return False
    return residue_algebra(end_algebra(x)).is_field()


def is_indecomposable(x: PairObject) -> bool:
    if x.is_zero():
        return False
    algebra = end_algebra(x)
    residue = residue_algebra(algebra)
    if residue.is_field():
        return True
    if x.field.p is None and _splitting_element(x, algebra, residue) is None:
        raise DecompositionError(f"cannot certify {x.describe()} over Q")
    return False


# ---------------------------------------------------------------------------
# Decomposition


def _splitting_polynomial(field: Field, minpoly: Poly) -> Optional[Poly]:
    """A factor ``q`` of ``minpoly`` coprime to the cofactor, or None."""
    roots = poly_roots(field, minpoly)
    degree = len(minpoly) - 1
    for r, mult in roots:
        if mult < degree:
            return [field.neg(r), field.one]
    if roots or field.p is None:
        return None
    # no roots: separate irreducible factors of different degrees
    degrees = irreducible_factor_degrees(field, minpoly)
    if len(set(degrees)) < 2:
        return None
    d = min(degrees)
    x = [field.zero, field.one]
    power = x
    for _ in range(d):
        power = poly_powmod(field, power, field.p, minpoly)
    return poly_gcd(field, minpoly, poly_sub(field, power, x))


def _fitting_split(x: PairObject, f: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    """Column bases of ``ker f^v`` and ``im f^v`` when both are proper."""
    power = f.power(x.v)
    ker = kernel(power)
    if ker.cols == 0 or ker.cols == x.v:
        return None
    image = row_basis(power.T).T
    return ker, image


def _candidate_elements(
    algebra: EndAlgebra, rng: np.random.Generator, trials: int
) -> List[Matrix]:
    basis = list(algebra.basis)
    out = list(basis)
    out.extend(a @ b for a, b in itertools.product(basis[:8], repeat=2))
    field = algebra.field
    for _ in range(trials):
        coeffs = field.random_array(rng, (len(basis),))
        flat = field.reduce(coeffs @ np.stack([b.data.reshape(-1) for b in basis]))
        out.append(Matrix(field, flat.reshape(algebra.obj.v, algebra.obj.v), reduced=True))
    return out


def _splitting_element(
    x: PairObject,
    algebra: EndAlgebra,
    residue: ResidueAlgebra,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
) -> Optional[Tuple[Matrix, Matrix]]:
    config = NilsubConfig.from_env()
    rng = np.random.default_rng(config.seed if seed is None else seed)
    count = (trials or config.random_trials) * 8
    for f in _candidate_elements(algebra, rng, count):
        if residue.in_radical(f):
            continue
        minpoly = minimal_polynomial(f)
        q = _splitting_polynomial(x.field, minpoly)
        if q is None:
            continue
        split = _fitting_split(x, poly_at_matrix(q, f))
        if split is not None:
            return split
    return None


def restrict(x: PairObject, columns: Matrix) -> PairObject:
    """The subobject on the T-invariant subspace spanned by ``columns``.

    ``U`` must split along the subspace, as it does for Fitting summands.
    """
    local_op = solve(columns, x.operator @ columns)
    assert local_op is not None
    if x.u:
        meet = intersect_row_spaces(x.subspace, columns.T)
    else:
        meet = Matrix.zeros(x.field, 0, x.v)
    if meet.rows:
        coords = solve(columns, meet.T)
        assert coords is not None
        rows = coords.T
    else:
        rows = Matrix.zeros(x.field, 0, columns.cols)
    return from_operator(x.field, x.n, local_op, rows)


def _summand_key(x: PairObject) -> Tuple[object, ...]:
    return (-x.v, -x.u, x.partition.parts, x.subspace.key())


@lru_cache(maxsize=4096)
def _decompose_cached(x: PairObject) -> Tuple[PairObject, ...]:
    if x.is_zero():
        return ()
    algebra = end_algebra(x)
    residue = residue_algebra(algebra)
    if residue.is_field():
        return (x,)
    split = _splitting_element(x, algebra, residue)
    if split is None:
        raise DecompositionError(
            f"no splitting endomorphism found for {x.describe()} "
            f"(residue algebra of dimension {residue.dim})"
        )
    ker, image = split
    parts = _decompose_cached(restrict(x, ker)) + _decompose_cached(restrict(x, image))
    return tuple(sorted(parts, key=_summand_key))


@observe(name="decompose", kind=OperationKind.DECOMPOSE, capture_output=False)
def decompose(x: PairObject) -> List[PairObject]:
    """Indecomposable summands of ``x``, each certified by ``End/J`` being a field.

    Splits by Fitting's lemma: for an endomorphism ``f`` that is neither
    nilpotent nor invertible, ``X = ker f^v ⊕ im f^v`` as objects.
    """
    summands = list(_decompose_cached(x))
    logger.debug(f"decomposed {x.describe()} into {len(summands)} summands")
    return summands


# ---------------------------------------------------------------------------
# Isomorphism


def random_invertible(
    space: HomSpace, rng: np.random.Generator, trials: int
) -> Optional[Matrix]:
    """A random invertible element of ``space``, or None after ``trials`` attempts."""
    if space.source.v != space.target.v or space.dim == 0:
        return None
    field = space.field
    flat = space.flat()
    for _ in range(trials):
        coeffs = field.random_array(rng, (space.dim,))
        mat = Matrix(
            field,
            field.reduce(coeffs @ flat).reshape(space.target.v, space.source.v),
            reduced=True,
        )
        if rank(mat) == space.source.v:
            return mat
    return None


def exhaustive_invertible(space: HomSpace, limit: int) -> Optional[Matrix]:
    """Search every element of a hom space over a finite field; None if none is invertible.

    Raises:
        BoundExceededError: The space has more than ``limit`` elements.
    """
    field = space.field
    if field.p is None:
        raise BoundExceededError("exhaustive search needs a finite field")
    if field.p**space.dim > limit:
        raise BoundExceededError(f"{field.p}^{space.dim} elements exceed the limit {limit}")
    if space.source.v != space.target.v:
        return None
    flat = space.flat()
    for coeffs in itertools.product(range(field.p), repeat=space.dim):
        mat = Matrix(
            field,
            field.reduce(np.asarray(coeffs, dtype=np.int64) @ flat).reshape(
                space.target.v, space.source.v
            ),
            reduced=True,
        )
        if rank(mat) == space.source.v:
            return mat
    return None


def invariants(x: PairObject) -> Tuple[object, ...]:
    """Cheap isomorphism invariants."""
    return (
        x.dim_pair.v,
        x.dim_pair.u,
        x.partition.parts,
        tuple(x.subspace_ranks()),
        tuple(x.quotient_ranks()),
    )


def _indecomposables_isomorphic(a: PairObject, b: PairObject) -> bool:
    if invariants(a) != invariants(b):
        return False
    forward = hom(a, b)
    backward = hom(b, a)
    if forward.dim == 0 or backward.dim == 0:
        return False
    residue = residue_algebra(end_algebra(a))
    for f in forward.basis:
        for g in backward.basis:
            if not residue.in_radical(g @ f):
                return True
    return False


@observe(name="iso", kind=OperationKind.ISO)
def iso(x: PairObject, y: PairObject, seed: Optional[int] = None) -> bool:
    """Whether ``x`` and ``y`` are isomorphic.

    Invariants are compared first, then a seeded random search for an
    invertible map runs; a negative answer is settled exactly by matching
    indecomposable summands.
    """
    if x.field != y.field or x.n != y.n:
        return False
    if invariants(x) != invariants(y):
        return False
    if x.is_zero():
        return True
    forward = hom(x, y)
    if forward.dim != end_algebra(x).dim or hom(y, x).dim != end_algebra(y).dim:
        return False
    config = NilsubConfig.from_env()
    rng = np.random.default_rng(config.seed if seed is None else seed)
    if random_invertible(forward, rng, config.random_trials) is not None:
        return True
    return _same_summands(decompose(x), decompose(y))


def _same_summands(left: Sequence[PairObject], right: Sequence[PairObject]) -> bool:
    if len(left) != len(right):
        return False
    remaining = list(right)
    for a in left:
        for i, b in enumerate(remaining):
            if _indecomposables_isomorphic(a, b):
                del remaining[i]
                break
        else:
            return False
    return True


def multiplicities(x: PairObject) -> List[Tuple[PairObject, int]]:
    """Summands of ``x`` grouped by isomorphism class, with multiplicities."""
    classes: List[List[PairObject]] = []
    for summand in decompose(x):
        for cls in classes:
            if _indecomposables_isomorphic(cls[0], summand):
                cls.append(summand)
                break
        else:
            classes.append([summand])
    return [(cls[0], len(cls)) for cls in classes]


def classify(objects: Sequence[PairObject]) -> List[int]:
    """Class index of every object, isomorphic objects sharing an index."""
    reps: Dict[Tuple[object, ...], List[Tuple[PairObject, int]]] = {}
    labels: List[int] = []
    next_label = 0
    for obj in objects:
        bucket = reps.setdefault(invariants(obj), [])
        for rep, label in bucket:
            if iso(rep, obj):
                labels.append(label)
                break
        else:
            bucket.append((obj, next_label))
            labels.append(next_label)
            next_label += 1
    return labels


def recompose(objects: Sequence[PairObject]) -> PairObject:
    """Direct sum of a list of objects over one field."""
    if not objects:
        raise ValueError("recompose needs at least one object")
    return direct_sum_all(objects[0].field, objects[0].n, objects)


# ---------------------------------------------------------------------------
# Positive-degree radical of the endomorphism ring


@observe(name="infinite_radical_nilpotency", kind=OperationKind.HOM, capture_input=False)
def infinite_radical_nilpotency(x: PairObject, witness: "CoverRep") -> int:
    """Nilpotency index of ``P = ⊕_{g>0} Hom(M, M[g])`` for a cover ``M`` of ``x``.

    ``P_1 = P`` and ``P_{k+1}`` is spanned by products of ``P_k`` with ``P``;
    the result is the least ``N`` with ``P_N = 0``.

    Raises:
        CoverMismatchError: ``pi(witness)`` is not isomorphic to ``x``.
    """
    from nilsub.covering import graded_hom_basis, pi

    if not iso(pi(witness), x):
        raise CoverMismatchError(f"the witness does not cover {x.describe()}")
    field = witness.field
    positive: List[Matrix] = []
    for g in range(1, witness.hi - witness.lo + 1):
        positive.extend(graded_hom_basis(witness, witness, g))
    if not positive:
        return 1
    size = positive[0].rows
    generators = np.stack([m.data for m in positive])
    current = row_basis(Matrix(field, generators.reshape(len(positive), -1), reduced=True))
    power = 1
    while current.rows:
        mats = current.data.reshape(current.rows, size, size)
        products = field.reduce(np.matmul(mats[:, None, :, :], generators[None, :, :, :]))
        flat = Matrix(field, products.reshape(-1, size * size), reduced=True)
        current = row_basis(flat)
        power += 1
        logger.debug(f"positive radical power {power}: dimension {current.rows}")
    return power


"""Graded representations of the covering quiver and the covering functor.

A representation has spaces ``A_i`` (bottom) and ``A'_i`` (top) for ``i`` in a
finite window, maps ``alpha_i: A_i -> A_{i-1}``, ``alpha'_i: A'_i -> A'_{i-1}``
and ``beta_i: A'_i -> A_i`` with ``beta_{i-1} alpha'_i = alpha_i beta_i``, every
``n``-fold composite of alphas zero and every ``beta_i`` injective. Shifting
is ``M[l]_i = M_{i-l}``; a graded map ``M -> N[g]`` has components
``A_i -> B_{i-g}``.

In box notation an object is a list of columns ``(length, top index)``: column
``c`` has boxes ``x^k a_c`` at index ``top - k``, and the subspace is spanned
by homogeneous generators and their ``x``-multiples.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from nilsub.decorators import observe
from nilsub.errors import CoverValidationError, DimensionMismatchError, FieldMismatchError
from nilsub.exactla import (
    Field,
    Matrix,
    Scalar,
    block_diagonal,
    kernel,
    rank,
    row_basis,
    solve,
)
from nilsub.kform import DimVector
from nilsub.nilmod import PairObject, from_operator
from nilsub.types import OperationKind, ViolationKind

logger = logging.getLogger(__name__)

Column = Tuple[int, int]
Term = Tuple[int, int, Scalar]
Generator = Tuple[int, Sequence[Term]]


class ValidationReport(NamedTuple):
    """Outcome of :func:`validate`; ``index`` locates the first violation."""

    ok: bool
    kind: Optional[ViolationKind] = None
    index: Optional[int] = None
    message: str = "ok"


@dataclass(frozen=True)
class CoverRep:
    """A finitely supported representation of the covering quiver.

    Attributes:
        field: Base field.
        n: Nilpotency bound.
        lo: First index of the window.
        bottom: Dimensions of ``A_i`` for ``i = lo, ..., hi``.
        top: Dimensions of ``A'_i`` on the same window.
        alpha: ``alpha_i`` as ``d_{i-1} x d_i`` matrices (``0 x d_lo`` at ``lo``).
        alpha_prime: ``alpha'_i`` likewise for the top row.
        beta: ``beta_i`` as ``d_i x d'_i`` matrices.
    """

    field: Field
    n: int
    lo: int
    bottom: Tuple[int, ...]
    top: Tuple[int, ...]
    alpha: Tuple[Matrix, ...]
    alpha_prime: Tuple[Matrix, ...]
    beta: Tuple[Matrix, ...]

    def __post_init__(self) -> None:
        width = len(self.bottom)
        if not (len(self.top) == len(self.alpha) == len(self.alpha_prime) == len(self.beta) == width):
            raise DimensionMismatchError("window data of a covering representation differ in length")

    @property
    def hi(self) -> int:
        return self.lo + len(self.bottom) - 1

    @property
    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def d(self, i: int) -> int:
        return self.bottom[i - self.lo] if self.lo <= i <= self.hi else 0

    def d_top(self, i: int) -> int:
        return self.top[i - self.lo] if self.lo <= i <= self.hi else 0

    def alpha_at(self, i: int) -> Matrix:
        if self.lo <= i <= self.hi:
            return self.alpha[i - self.lo]
        return Matrix.zeros(self.field, self.d(i - 1), self.d(i))

    def alpha_prime_at(self, i: int) -> Matrix:
        if self.lo <= i <= self.hi:
            return self.alpha_prime[i - self.lo]
        return Matrix.zeros(self.field, self.d_top(i - 1), self.d_top(i))

    def beta_at(self, i: int) -> Matrix:
        if self.lo <= i <= self.hi:
            return self.beta[i - self.lo]
        return Matrix.zeros(self.field, self.d(i), self.d_top(i))

    @cached_property
    def offsets(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Offsets of ``A_i`` and ``A'_i`` in the flat spaces ``⊕ A_i`` and ``⊕ A'_i``."""
        return tuple(np.cumsum((0,) + self.bottom)[:-1].tolist()), tuple(
            np.cumsum((0,) + self.top)[:-1].tolist()
        )

    def offset(self, i: int) -> int:
        return int(self.offsets[0][i - self.lo])

    @property
    def total(self) -> int:
        return sum(self.bottom)

    @property
    def total_top(self) -> int:
        return sum(self.top)

    def __repr__(self) -> str:
        return f"CoverRep({self.field}, n={self.n}, {dimvector(self)})"


def dimvector(r: CoverRep) -> DimVector:
    return DimVector(r.lo, r.bottom, r.top)


def zero_cover(field: Field, n: int) -> CoverRep:
    return CoverRep(field, n, 0, (), (), (), (), ())


def validate(r: CoverRep) -> ValidationReport:
    """Check shapes, commuting squares, nilpotency of both rows and injectivity of beta."""
    for i in r.indices:
        expected = {
            "alpha": ((r.d(i - 1), r.d(i)), r.alpha_at(i)),
            "alpha'": ((r.d_top(i - 1), r.d_top(i)), r.alpha_prime_at(i)),
            "beta": ((r.d(i), r.d_top(i)), r.beta_at(i)),
        }
        for name, (shape, mat) in expected.items():
            if mat.shape != shape:
                return ValidationReport(
                    False, ViolationKind.SHAPE, i, f"{name}_{i} has shape {mat.shape}, expected {shape}"
                )
            if mat.field != r.field:
                return ValidationReport(False, ViolationKind.SHAPE, i, f"{name}_{i} over {mat.field}")
    for i in r.indices:
        if r.beta_at(i - 1) @ r.alpha_prime_at(i) != r.alpha_at(i) @ r.beta_at(i):
            return ValidationReport(
                False, ViolationKind.COMMUTATIVITY, i, f"beta_{i - 1} alpha'_{i} != alpha_{i} beta_{i}"
            )
    for i in r.indices:
        if i - r.n < r.lo:
            continue
        bottom = Matrix.identity(r.field, r.d(i))
        top = Matrix.identity(r.field, r.d_top(i))
        for k in range(r.n):
            bottom = r.alpha_at(i - k) @ bottom
            top = r.alpha_prime_at(i - k) @ top
        if not bottom.is_zero():
            return ValidationReport(
                False, ViolationKind.NILPOTENCY, i, f"{r.n} alphas starting at {i} do not compose to zero"
            )
        if not top.is_zero():
            return ValidationReport(
                False, ViolationKind.NILPOTENCY, i, f"{r.n} alpha's starting at {i}' do not compose to zero"
            )
    for i in r.indices:
        if rank(r.beta_at(i)) != r.d_top(i):
            return ValidationReport(False, ViolationKind.INJECTIVITY, i, f"beta_{i} is not injective")
    return ValidationReport(True)


def check(r: CoverRep) -> CoverRep:
    """Return ``r`` unchanged, raising when it fails :func:`validate`."""
    report = validate(r)
    if not report.ok:
        raise CoverValidationError(f"invalid covering representation: {report.message}", report)
    return r


def shift(r: CoverRep, ell: int) -> CoverRep:
    """The representation ``r[ell]``."""
    return CoverRep(r.field, r.n, r.lo + ell, r.bottom, r.top, r.alpha, r.alpha_prime, r.beta)


def cover_direct_sum(r: CoverRep, s: CoverRep) -> CoverRep:
    if r.field != s.field or r.n != s.n:
        raise FieldMismatchError("covering representations over different fields or bounds")
    if not r.bottom:
        return s
    if not s.bottom:
        return r
    lo = min(r.lo, s.lo)
    hi = max(r.hi, s.hi)
    idx = range(lo, hi + 1)
    f = r.field
    return CoverRep(
        f,
        r.n,
        lo,
        tuple(r.d(i) + s.d(i) for i in idx),
        tuple(r.d_top(i) + s.d_top(i) for i in idx),
        tuple(block_diagonal(f, [r.alpha_at(i), s.alpha_at(i)]) for i in idx),
        tuple(block_diagonal(f, [r.alpha_prime_at(i), s.alpha_prime_at(i)]) for i in idx),
        tuple(block_diagonal(f, [r.beta_at(i), s.beta_at(i)]) for i in idx),
    )


# ---------------------------------------------------------------------------
# The covering functor


def flat_operator(r: CoverRep) -> Matrix:
    """The nilpotent operator on ``⊕ A_i`` (columns are images)."""
    arr = r.field.zeros((r.total, r.total))
    for i in r.indices:
        if i - 1 < r.lo:
            continue
        a = r.alpha_at(i)
        o_src, o_dst = r.offset(i), r.offset(i - 1)
        arr[o_dst:o_dst + a.rows, o_src:o_src + a.cols] = a.data
    return Matrix(r.field, arr, reduced=True)


def flat_subspace(r: CoverRep) -> Matrix:
    """Rows spanning ``⊕ beta_i(A'_i)`` inside ``⊕ A_i``."""
    arr = r.field.zeros((r.total_top, r.total))
    top_offsets = r.offsets[1]
    for i in r.indices:
        b = r.beta_at(i)
        o_bottom, o_top = r.offset(i), int(top_offsets[i - r.lo])
        arr[o_top:o_top + b.cols, o_bottom:o_bottom + b.rows] = b.data.T
    return Matrix(r.field, arr, reduced=True)


@observe(name="pi", kind=OperationKind.COVER, capture_output=False)
def pi(r: CoverRep) -> PairObject:
    """Push a covering representation down to S(n) and normalize.

    Raises:
        CoverValidationError: ``r`` fails :func:`validate`.
    """
    check(r)
    obj = from_operator(r.field, r.n, flat_operator(r), row_basis(flat_subspace(r)))
    logger.debug(f"pi of {dimvector(r)}: {obj.describe()}")
    return obj


# ---------------------------------------------------------------------------
# Graded morphisms


def _kron(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = a[:, None, :, None] * b[None, :, None, :]
    return field.reduce(out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))


def graded_hom_basis(r: CoverRep, s: CoverRep, g: int) -> List[Matrix]:
    """Basis of ``Hom(r, s[g])`` as flat ``total(s) x total(r)`` matrices.

    Unknowns are the components ``f_i: A_i -> B_{i-g}`` and
    ``f'_i: A'_i -> B'_{i-g}``; every square with an alpha, an alpha' or a
    beta must commute. ``vec(A X B) = (A ⊗ B^T) vec(X)`` turns each square
    into rows of one linear system.
    """
    if r.field != s.field or r.n != s.n:
        raise FieldMismatchError("graded homs need representations over one field and bound")
    field = r.field
    slots: Dict[Tuple[int, bool], Tuple[int, int, int]] = {}
    size = 0
    for i in r.indices:
        for primed, (dr, ds) in ((False, (r.d(i), s.d(i - g))), (True, (r.d_top(i), s.d_top(i - g)))):
            slots[(i, primed)] = (size, ds, dr)
            size += ds * dr
    if size == 0:
        return []

    def block(i: int, primed: bool) -> Optional[Tuple[int, int, int]]:
        return slots.get((i, primed))

    equations: List[np.ndarray] = []

    def add_square(left: Matrix, right: Matrix, target_slot: Tuple[int, bool],
                   source_slot: Tuple[int, bool], rows: int, cols: int) -> None:
        # left @ f[target_slot] - f[source_slot] @ right = 0, a rows x cols system
        if rows == 0 or cols == 0:
            return
        eq = field.zeros((rows * cols, size))
        tgt = block(*target_slot)
        if tgt is not None and tgt[1] * tgt[2]:
            off, ds, dr = tgt
            eq[:, off:off + ds * dr] = _kron(field, left.data, np.eye(dr, dtype=np.int64))
        src = block(*source_slot)
        if src is not None and src[1] * src[2]:
            off, ds, dr = src
            term = _kron(field, np.eye(ds, dtype=np.int64), right.data.T)
            eq[:, off:off + ds * dr] = field.reduce(eq[:, off:off + ds * dr] - term)
        equations.append(eq)

    for i in r.indices:
        j = i - g
        # alpha^s_j f_i = f_{i-1} alpha^r_i : A_i -> B_{j-1}
        add_square(s.alpha_at(j), r.alpha_at(i), (i, False), (i - 1, False), s.d(j - 1), r.d(i))
        add_square(
            s.alpha_prime_at(j), r.alpha_prime_at(i), (i, True), (i - 1, True),
            s.d_top(j - 1), r.d_top(i),
        )
        # beta^s_j f'_i = f_i beta^r_i : A'_i -> B_j
        add_square(s.beta_at(j), r.beta_at(i), (i, True), (i, False), s.d(j), r.d_top(i))
    if equations:
        system = Matrix(field, np.concatenate(equations, axis=0), reduced=True)
        solutions = kernel(system)
    else:
        solutions = Matrix.identity(field, size)
    basis: List[Matrix] = []
    for k in range(solutions.cols):
        vec = solutions.data[:, k]
        flat = field.zeros((s.total, r.total))
        for i in r.indices:
            off, ds, dr = slots[(i, False)]
            if ds * dr == 0:
                continue
            o_dst, o_src = s.offset(i - g), r.offset(i)
            flat[o_dst:o_dst + ds, o_src:o_src + dr] = vec[off:off + ds * dr].reshape(ds, dr)
        basis.append(Matrix(field, flat, reduced=True))
    return basis


def hom_cover(r: CoverRep, s: CoverRep) -> int:
    """``dim Hom(r, s)`` in the covering category."""
    return len(graded_hom_basis(r, s, 0))


def graded_hom_to_pair(r: CoverRep, s: CoverRep) -> List[Tuple[int, int]]:
    """``(g, dim Hom(r, s[g]))`` for every degree that can be nonzero.

    The dimensions add up to ``dim Hom(pi r, pi s)``.
    """
    if not r.bottom or not s.bottom:
        return []
    return [(g, len(graded_hom_basis(r, s, g))) for g in range(r.lo - s.hi, r.hi - s.lo + 1)]


# ---------------------------------------------------------------------------
# Box diagrams


def from_box_diagram(
    field: Field,
    n: int,
    columns: Sequence[Column],
    generators: Sequence[Generator],
) -> CoverRep:
    """Build a representation from columns ``(length, top index)`` and generators.

    A generator is ``(index, [(column, power, coeff), ...])`` standing for
    ``Σ coeff x^power a_column``; every term must sit at ``index``.

    Raises:
        CoverValidationError: A column is longer than ``n`` or a generator is
            not homogeneous.
    """
    if not columns:
        return zero_cover(field, n)
    for c, (length, _) in enumerate(columns):
        if not 1 <= length <= n:
            raise CoverValidationError(f"column a{c + 1} has length {length}, expected 1..{n}")
    lo = min(top - length + 1 for length, top in columns)
    hi = max(top for _, top in columns)
    # boxes at each index, in column order
    boxes: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(lo, hi + 1)}
    for c, (length, top) in enumerate(columns):
        for k in range(length):
            boxes[top - k].append((c, k))
    position = {i: {box: p for p, box in enumerate(boxes[i])} for i in boxes}

    idx = range(lo, hi + 1)
    alpha: List[Matrix] = []
    for i in idx:
        arr = field.zeros((len(boxes.get(i - 1, [])), len(boxes[i])))
        for p, (c, k) in enumerate(boxes[i]):
            target = position.get(i - 1, {}).get((c, k + 1))
            if target is not None:
                arr[target, p] = field.one
        alpha.append(Matrix(field, arr, reduced=True))

    spans: Dict[int, List[List[Scalar]]] = {i: [] for i in idx}
    for g_index, (index, terms) in enumerate(generators):
        for t in range(n):
            row = [field.zero] * len(boxes.get(index - t, []))
            for c, power, coeff in terms:
                length, top = columns[c]
                if top - power != index:
                    raise CoverValidationError(
                        f"generator {g_index + 1}: term x^{power} a{c + 1} sits at {top - power}, not {index}"
                    )
                if power + t < length:
                    p = position[index - t][(c, power + t)]
                    row[p] = field.add(row[p], field.element(coeff))
            if all(v == field.zero for v in row):
                break
            spans[index - t].append(row)

    beta: List[Matrix] = []
    top_dims: List[int] = []
    for i in idx:
        rows = Matrix.from_rows(field, spans[i], len(boxes[i]))
        basis = row_basis(rows) if rows.rows else rows
        beta.append(basis.T)
        top_dims.append(basis.rows)
    alpha_prime: List[Matrix] = []
    for k, i in enumerate(idx):
        below = beta[k - 1] if k > 0 else Matrix.zeros(field, 0, 0)
        image = alpha[k] @ beta[k]
        solved = solve(below, image)
        if solved is None:
            raise CoverValidationError(f"subspace at {i}' is not closed under x")
        alpha_prime.append(solved)
    rep = CoverRep(
        field,
        n,
        lo,
        tuple(len(boxes[i]) for i in idx),
        tuple(top_dims),
        tuple(alpha),
        tuple(alpha_prime),
        tuple(beta),
    )
    return check(rep)


def random_cover(
    field: Field,
    n: int,
    rng: np.random.Generator,
    max_columns: int = 3,
    max_generators: int = 2,
    spread: int = 4,
) -> CoverRep:
    """A random validated representation from a random box diagram."""
    count = int(rng.integers(1, max_columns + 1))
    columns = [(int(rng.integers(1, n + 1)), int(rng.integers(0, spread + 1))) for _ in range(count)]
    lo = min(top - length + 1 for length, top in columns)
    hi = max(top for _, top in columns)
    generators: List[Generator] = []
    for _ in range(int(rng.integers(0, max_generators + 1))):
        index = int(rng.integers(lo, hi + 1))
        terms = []
        for c, (length, top) in enumerate(columns):
            power = top - index
            if 0 <= power < length and rng.integers(0, 2):
                coeff = field.element(int(rng.integers(1, field.p if field.p else 4)))
                terms.append((c, power, coeff))
        if terms:
            generators.append((index, terms))
    return from_box_diagram(field, n, columns, generators)

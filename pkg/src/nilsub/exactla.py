"""Exact dense linear algebra over prime fields and the rationals.

Matrices wrap :mod:`numpy` arrays. Prime fields below ``2**16`` use ``int64``
residues; larger primes use ``object`` arrays of Python integers and the
rationals use ``object`` arrays of :class:`fractions.Fraction`. All values are
immutable once constructed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import TypeAlias

from nilsub.errors import DimensionMismatchError, FieldMismatchError, UnsupportedFieldError

logger = logging.getLogger(__name__)

Scalar: TypeAlias = Any
Poly: TypeAlias = List[Any]

_SMALL_PRIME_LIMIT = 2**16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """A prime field ``F_p`` (``p`` set) or the rationals (``p`` is None)."""

    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.p is not None and not _is_prime(self.p):
            raise UnsupportedFieldError(f"{self.p} is not a prime")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"Q"`` or a prime such as ``"2"``."""
        label = text.strip()
        if label.upper() == "Q":
            return cls(None)
        try:
            return cls(int(label))
        except ValueError:
            raise UnsupportedFieldError(f"unknown field '{text}' (expected a prime or Q)") from None

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> Optional[int]:
        return self.p

    @property
    def label(self) -> str:
        return "Q" if self.p is None else str(self.p)

    @property
    def dtype(self) -> Any:
        if self.p is not None and self.p < _SMALL_PRIME_LIMIT:
            return np.int64
        return object

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    # scalar arithmetic

    def element(self, value: Any) -> Scalar:
        """Normalize a Python number into this field."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a + b) if self.p is None else (int(a) + int(b)) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a - b) if self.p is None else (int(a) - int(b)) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a * b) if self.p is None else (int(a) * int(b)) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return self.element(-a) if self.p is None else (-int(a)) % self.p

    def inverse(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inverse(b))

    def parse_element(self, text: str) -> Scalar:
        """Parse a literal such as ``3``, ``-1`` or ``1/2``."""
        try:
            return self.element(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{text}' is not an element of {self}") from None

    def format_element(self, a: Scalar) -> str:
        return str(self.element(a))

    def elements(self) -> Iterator[Scalar]:
        """Iterate over all elements of a finite field."""
        if self.p is None:
            raise UnsupportedFieldError("the rationals cannot be enumerated")
        return iter(range(self.p))

    # array helpers

    def reduce(self, values: Any) -> np.ndarray:
        """Return a new array with every entry normalized into this field."""
        arr = np.asarray(values)
        if self.p is None:
            if arr.size == 0:
                return arr.astype(object)
            return np.vectorize(Fraction, otypes=[object])(arr)
        if arr.dtype == object:
            if arr.size == 0:
                return arr.astype(self.dtype)
            return np.vectorize(self.element, otypes=[object])(arr).astype(self.dtype)
        return np.mod(arr.astype(self.dtype), self.p)

    def zeros(self, shape: Tuple[int, ...]) -> np.ndarray:
        if self.p is None:
            return np.full(shape, Fraction(0), dtype=object)
        if self.dtype is object:
            return np.zeros(shape, dtype=np.int64).astype(object)
        return np.zeros(shape, dtype=np.int64)

    def random_array(self, rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
        if self.p is None:
            return self.reduce(rng.integers(-3, 4, size=shape))
        return self.reduce(rng.integers(0, self.p, size=shape))


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "_data")

    def __init__(self, field: Field, data: Any, *, reduced: bool = False) -> None:
        arr = np.asarray(data) if reduced else field.reduce(data)
        if arr.ndim != 2:
            raise DimensionMismatchError(f"matrix data must be two-dimensional, got {arr.ndim}")
        arr.setflags(write=False)
        self.field = field
        self._data = arr

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)), reduced=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        arr = field.zeros((n, n))
        for i in range(n):
            arr[i, i] = field.one
        return cls(field, arr, reduced=True)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]], cols: int) -> "Matrix":
        """Build a matrix from row vectors; ``cols`` fixes the width when there are no rows."""
        if not rows:
            return cls.zeros(field, 0, cols)
        for row in rows:
            if len(row) != cols:
                raise DimensionMismatchError(f"row of length {len(row)} in a {cols}-column matrix")
        return cls(field, np.array([list(r) for r in rows], dtype=object))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self._data.T.copy(), reduced=True)

    def entry(self, i: int, j: int) -> Scalar:
        value = self._data[i, j]
        return value if self.field.p is None else int(value)

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"matrices over {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self._data @ other._data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self._data + other._data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self._data - other._data)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, -self._data)

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(self.field, self._data * self.field.element(c))

    def power(self, k: int) -> "Matrix":
        result = Matrix.identity(self.field, self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def take_rows(self, indices: Sequence[int]) -> "Matrix":
        idx = list(indices)
        if not idx:
            return Matrix.zeros(self.field, 0, self.cols)
        return Matrix(self.field, self._data[idx, :].copy(), reduced=True)

    def take_cols(self, indices: Sequence[int]) -> "Matrix":
        idx = list(indices)
        if not idx:
            return Matrix.zeros(self.field, self.rows, 0)
        return Matrix(self.field, self._data[:, idx].copy(), reduced=True)

    def hstack(self, other: "Matrix") -> "Matrix":
        return hstack(self.field, [self, other])

    def vstack(self, other: "Matrix") -> "Matrix":
        return vstack(self.field, [self, other])

    def is_zero(self) -> bool:
        return not bool(np.any(self._data != 0))

    def tolist(self) -> List[List[Scalar]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def key(self) -> Tuple[Any, ...]:
        """Hashable exact content, used for deduplication."""
        return (self.field.label, self.rows, self.cols, tuple(self._data.ravel().tolist()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._data == other._data))
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    def format(self) -> str:
        fmt = self.field.format_element
        return "\n".join(" ".join(fmt(v) for v in row) for row in self.tolist())


def hstack(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    """Concatenate matrices side by side."""
    if not blocks:
        raise DimensionMismatchError("nothing to stack")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionMismatchError("hstack needs equal row counts")
    return Matrix(field, np.concatenate([b.data for b in blocks], axis=1), reduced=True)


def vstack(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    """Concatenate matrices on top of each other."""
    if not blocks:
        raise DimensionMismatchError("nothing to stack")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionMismatchError("vstack needs equal column counts")
    return Matrix(field, np.concatenate([b.data for b in blocks], axis=0), reduced=True)


def block_diagonal(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    arr = field.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        arr[r:r + b.rows, c:c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return Matrix(field, arr, reduced=True)


def random_matrix(field: Field, rng: np.random.Generator, rows: int, cols: int) -> Matrix:
    return Matrix(field, field.random_array(rng, (rows, cols)), reduced=True)


# ---------------------------------------------------------------------------
# Row reduction


def _rref_array(field: Field, data: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    a = np.array(data, copy=True)
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = field.inverse(a[r, c])
        a[r] = field.reduce(a[r] * inv)
        col = a[:, c].copy()
        col[r] = 0
        others = np.nonzero(col != 0)[0]
        if others.size:
            a[others] = field.reduce(a[others] - np.outer(col[others], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row-echelon form and pivot columns.

    Pivots are chosen as the first nonzero entry in column order, so the result
    is the unique reduced echelon form of ``m``.
    """
    red, pivots = _rref_array(m.field, m.data)
    return Matrix(m.field, red, reduced=True), pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref_array(m.field, m.data)[1])


def row_basis(m: Matrix) -> Matrix:
    """Canonical basis of the row space: the nonzero rows of the reduced echelon form."""
    red, pivots = _rref_array(m.field, m.data)
    return Matrix(m.field, red[: len(pivots)].copy(), reduced=True)


def kernel(m: Matrix) -> Matrix:
    """Basis of the right null space, one column per free variable."""
    field = m.field
    red, pivots = _rref_array(field, m.data)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = field.zeros((m.cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = field.one
        if pivots:
            basis[pivots, k] = field.reduce(-red[: len(pivots), f])
    return Matrix(field, basis, reduced=True)


def left_kernel(m: Matrix) -> Matrix:
    """Rows spanning ``{y : y m = 0}``."""
    return kernel(m.T).T


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some ``x`` with ``a x = b``, free variables set to zero, or None if inconsistent."""
    if a.rows != b.rows:
        raise DimensionMismatchError(f"solve needs equal row counts, got {a.rows} and {b.rows}")
    field = a.field
    red, pivots = _rref_array(field, np.concatenate([a.data, b.data], axis=1))
    if any(pc >= a.cols for pc in pivots):
        return None
    x = field.zeros((a.cols, b.cols))
    for i, pc in enumerate(pivots):
        x[pc] = red[i, a.cols:]
    return Matrix(field, x, reduced=True)


def invert(m: Matrix) -> Optional[Matrix]:
    """Inverse of a square matrix, or None when it is singular."""
    if m.rows != m.cols:
        raise DimensionMismatchError(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    ident = Matrix.identity(m.field, n)
    red, pivots = _rref_array(m.field, np.concatenate([m.data, ident.data], axis=1))
    if pivots[:n] != list(range(n)):
        return None
    return Matrix(m.field, red[:, n:].copy(), reduced=True)


def in_row_space(basis: Matrix, vectors: Matrix) -> bool:
    """Whether every row of ``vectors`` lies in the row space of ``basis``."""
    if vectors.rows == 0:
        return True
    return rank(basis.vstack(vectors)) == rank(basis)


def intersect_row_spaces(a: Matrix, b: Matrix) -> Matrix:
    """Echelon basis of ``rowspace(a) ∩ rowspace(b)``."""
    if a.rows == 0 or b.rows == 0:
        return Matrix.zeros(a.field, 0, a.cols)
    coeffs = kernel(a.vstack(b).T)
    if coeffs.cols == 0:
        return Matrix.zeros(a.field, 0, a.cols)
    x = coeffs.take_rows(range(a.rows))
    return row_basis(x.T @ a)


def complement_rows(basis: Matrix) -> Matrix:
    """Unit row vectors spanning a complement of the row space of ``basis``."""
    _, pivots = rref(basis) if basis.rows else (basis, [])
    pivot_set = set(pivots)
    free = [j for j in range(basis.cols) if j not in pivot_set]
    return Matrix.identity(basis.field, basis.cols).take_rows(free)


def column_space_basis(m: Matrix) -> Matrix:
    """Columns spanning the column space, in echelon form."""
    return row_basis(m.T).T


# ---------------------------------------------------------------------------
# Polynomials (coefficient lists, lowest degree first)


def poly_trim(coeffs: Iterable[Scalar]) -> Poly:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_degree(f: Poly) -> int:
    return len(poly_trim(f)) - 1


def poly_monic(field: Field, f: Poly) -> Poly:
    f = poly_trim(f)
    if not f:
        return f
    inv = field.inverse(f[-1])
    return [field.mul(c, inv) for c in f]


def poly_sub(field: Field, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    f = list(f) + [field.zero] * (n - len(f))
    g = list(g) + [field.zero] * (n - len(g))
    return poly_trim(field.sub(a, b) for a, b in zip(f, g))


def poly_mul(field: Field, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return poly_trim(out)


def poly_divmod(field: Field, f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    g = poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = poly_trim(f)
    quot = [field.zero] * max(len(rem) - len(g) + 1, 0)
    inv = field.inverse(g[-1])
    while len(rem) >= len(g):
        shift = len(rem) - len(g)
        c = field.mul(rem[-1], inv)
        quot[shift] = c
        for i, b in enumerate(g):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(c, b))
        rem = poly_trim(rem)
    return poly_trim(quot), rem


def poly_gcd(field: Field, f: Poly, g: Poly) -> Poly:
    a, b = poly_trim(f), poly_trim(g)
    while b:
        a, b = b, poly_divmod(field, a, b)[1]
    return poly_monic(field, a)


def poly_eval(field: Field, f: Poly, x: Scalar) -> Scalar:
    acc = field.zero
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_at_matrix(f: Poly, m: Matrix) -> Matrix:
    """Evaluate ``f(m)`` by Horner's rule."""
    field = m.field
    ident = Matrix.identity(field, m.rows)
    acc = Matrix.zeros(field, m.rows, m.rows)
    for c in reversed(f):
        acc = acc @ m + ident.scale(c)
    return acc


def minimal_polynomial(m: Matrix) -> Poly:
    """Monic minimal polynomial of a square matrix, from the Krylov sequence of its powers."""
    if m.rows != m.cols:
        raise DimensionMismatchError("minimal polynomial of a non-square matrix")
    field = m.field
    n = m.rows
    if n == 0:
        return [field.one]
    power = Matrix.identity(field, n)
    columns = [power.data.reshape(-1, 1)]
    for k in range(1, n + 1):
        power = power @ m
        target = Matrix(field, power.data.reshape(-1, 1), reduced=True)
        span = Matrix(field, np.concatenate(columns, axis=1), reduced=True)
        x = solve(span, target)
        if x is not None:
            return [field.neg(x.entry(i, 0)) for i in range(k)] + [field.one]
        columns.append(power.data.reshape(-1, 1))
    raise AssertionError("Cayley-Hamilton violated")


def _integer_divisors(n: int) -> List[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def poly_roots(field: Field, f: Poly) -> List[Tuple[Scalar, int]]:
    """Roots of ``f`` in the field with multiplicities, in increasing order."""
    f = poly_trim(f)
    if len(f) <= 1:
        return []
    if field.p is not None:
        if field.p >= _SMALL_PRIME_LIMIT:
            raise UnsupportedFieldError(f"root finding over {field} is not supported")
        xs = np.arange(field.p, dtype=np.int64)
        acc = np.zeros(field.p, dtype=np.int64)
        for c in reversed(f):
            acc = (acc * xs + int(c)) % field.p
        candidates: List[Scalar] = [int(x) for x in np.nonzero(acc == 0)[0]]
    else:
        candidates = _rational_roots(f)
    roots = []
    for r in candidates:
        mult = 0
        g = f
        linear = [field.neg(r), field.one]
        while True:
            q, rem = poly_divmod(field, g, linear)
            if rem:
                break
            mult += 1
            g = q
        roots.append((r, mult))
    return roots


def _rational_roots(f: Poly) -> List[Fraction]:
    coeffs = [Fraction(c) for c in f]
    denominator = 1
    for c in coeffs:
        denominator = denominator * c.denominator // gcd(denominator, c.denominator)
    ints = [int(c * denominator) for c in coeffs]
    roots: List[Fraction] = []
    if ints[0] == 0:
        roots.append(Fraction(0))
    while ints and ints[0] == 0:
        ints = ints[1:]
    if len(ints) <= 1:
        return roots
    found = set()
    for num in _integer_divisors(ints[0]):
        for den in _integer_divisors(ints[-1]):
            for sign in (1, -1):
                cand = Fraction(sign * num, den)
                if cand in found:
                    continue
                if sum(c * cand**i for i, c in enumerate(ints)) == 0:
                    found.add(cand)
    return roots + sorted(found)


def poly_powmod(field: Field, base: Poly, exponent: int, modulus: Poly) -> Poly:
    result: Poly = [field.one]
    base = poly_divmod(field, base, modulus)[1]
    while exponent:
        if exponent & 1:
            result = poly_divmod(field, poly_mul(field, result, base), modulus)[1]
        base = poly_divmod(field, poly_mul(field, base, base), modulus)[1]
        exponent >>= 1
    return result


def irreducible_factor_degrees(field: Field, f: Poly) -> List[int]:
    """Degrees of the distinct irreducible factors of ``f``.

    Over ``F_p`` this is a distinct-degree factorization. Over the rationals
    linear factors are found exactly and any remaining cofactor is reported as
    a single entry of its degree.
    """
    g = poly_monic(field, f)
    degrees: List[int] = []
    for r, mult in poly_roots(field, g):
        degrees.append(1)
        for _ in range(mult):
            g = poly_divmod(field, g, [field.neg(r), field.one])[0]
    if poly_degree(g) <= 0:
        return degrees
    if field.p is None:
        return degrees + [poly_degree(g)]
    x = [field.zero, field.one]
    h = x
    d = 0
    while poly_degree(g) > 0:
        d += 1
        h = poly_powmod(field, h, field.p, g)
        common = poly_gcd(field, g, poly_sub(field, h, x))
        if poly_degree(common) > 0:
            degrees.extend([d] * (poly_degree(common) // d))
            while True:
                c = poly_gcd(field, g, common)
                if poly_degree(c) <= 0:
                    break
                g = poly_divmod(field, g, c)[0]
            h = poly_divmod(field, h, g)[1] if poly_degree(g) > 0 else h
    return degrees

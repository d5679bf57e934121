"""Dimension vectors on the covering quiver and the forms living on them.

A dimension vector assigns an integer to every vertex ``i`` (bottom row, the
total space grading) and ``i'`` (top row, the subspace grading). Elements of
the Grothendieck group may have negative entries; dimension vectors of
representations do not.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from nilsub.errors import UnsupportedNilpotencyError, WindowError
from nilsub.nilmod import DimPair
from nilsub.types import RegionKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimVector:
    """Finitely supported integer vector on the vertices ``i`` and ``i'``.

    Zero columns at both ends are trimmed on construction, so equal vectors
    compare equal whatever window they were written on.

    Attributes:
        lo: Index of the first column.
        bottom: Entries ``x_i`` for ``i = lo, lo+1, ...``.
        top: Entries ``x_{i'}`` on the same indices.
    """

    lo: int
    bottom: Tuple[int, ...]
    top: Tuple[int, ...]

    def __post_init__(self) -> None:
        bottom = tuple(int(b) for b in self.bottom)
        top = tuple(int(t) for t in self.top)
        width = max(len(bottom), len(top))
        bottom = bottom + (0,) * (width - len(bottom))
        top = top + (0,) * (width - len(top))
        start = 0
        while start < width and bottom[start] == 0 and top[start] == 0:
            start += 1
        end = width
        while end > start and bottom[end - 1] == 0 and top[end - 1] == 0:
            end -= 1
        lo = self.lo + start if start < end else 0
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "bottom", bottom[start:end])
        object.__setattr__(self, "top", top[start:end])

    @classmethod
    def zero(cls) -> "DimVector":
        return cls(0, (), ())

    @classmethod
    def unit(cls, index: int, primed: bool = False) -> "DimVector":
        """The vector ``e(i)``, or ``e(i')`` when ``primed``."""
        return cls(index, (0,), (1,)) if primed else cls(index, (1,), (0,))

    @classmethod
    def from_digits(cls, text: str, lo: int = 0) -> "DimVector":
        """Parse the compact ``top/bottom`` digit form, e.g. ``01221000/01233210``."""
        top_text, sep, bottom_text = text.replace(" ", "").partition("/")
        if not sep or not top_text.isdigit() or not bottom_text.isdigit():
            raise ValueError(f"expected '<top digits>/<bottom digits>', got {text!r}")
        return cls(lo, tuple(int(c) for c in bottom_text), tuple(int(c) for c in top_text))

    @property
    def hi(self) -> int:
        """Index of the last column (``lo - 1`` for the zero vector)."""
        return self.lo + len(self.bottom) - 1

    @property
    def width(self) -> int:
        return len(self.bottom)

    def at(self, index: int) -> int:
        offset = index - self.lo
        return self.bottom[offset] if 0 <= offset < self.width else 0

    def at_top(self, index: int) -> int:
        offset = index - self.lo
        return self.top[offset] if 0 <= offset < self.width else 0

    def window(self, lo: int, hi: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Bottom and top entries on ``[lo, hi]``, zero padded."""
        idx = range(lo, hi + 1)
        return tuple(self.at(i) for i in idx), tuple(self.at_top(i) for i in idx)

    def is_zero(self) -> bool:
        return self.width == 0

    def is_dimension_vector(self) -> bool:
        """Whether all entries are non-negative."""
        return all(b >= 0 for b in self.bottom) and all(t >= 0 for t in self.top)

    def _combine(self, other: "DimVector", sign: int) -> "DimVector":
        if self.is_zero():
            return other if sign > 0 else -other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        b1, t1 = self.window(lo, hi)
        b2, t2 = other.window(lo, hi)
        return DimVector(
            lo,
            tuple(x + sign * y for x, y in zip(b1, b2)),
            tuple(x + sign * y for x, y in zip(t1, t2)),
        )

    def __add__(self, other: "DimVector") -> "DimVector":
        return self._combine(other, 1)

    def __sub__(self, other: "DimVector") -> "DimVector":
        return self._combine(other, -1)

    def __neg__(self) -> "DimVector":
        return DimVector(self.lo, tuple(-b for b in self.bottom), tuple(-t for t in self.top))

    def __mul__(self, k: int) -> "DimVector":
        return DimVector(self.lo, tuple(k * b for b in self.bottom), tuple(k * t for t in self.top))

    __rmul__ = __mul__

    def shift(self, ell: int) -> "DimVector":
        """The vector of ``M[ell]``, with ``M[ell]_i = M_{i-ell}``."""
        return DimVector(self.lo + ell, self.bottom, self.top)

    def digits(self, lo: Optional[int] = None, hi: Optional[int] = None) -> str:
        """Compact ``top/bottom`` form; entries must be single digits."""
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        bottom, top = self.window(lo, hi)
        if any(not 0 <= e <= 9 for e in bottom + top):
            raise ValueError("the digit form needs entries between 0 and 9")
        return "".join(map(str, top)) + "/" + "".join(map(str, bottom))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        try:
            body = self.digits()
        except ValueError:
            body = f"{list(self.top)}/{list(self.bottom)}"
        return body if self.lo == 0 else f"{body}@{self.lo}"


def t_support(x: DimVector) -> int:
    """Number of indices ``i`` with ``x_i != 0``: the size of the support of the total space."""
    return sum(1 for b in x.bottom if b != 0)


def pi_k0(x: DimVector) -> DimPair:
    """Image in the Grothendieck group of S(n): ``(Σ x_i, Σ x_{i'})``.

    Raises:
        ValueError: The sums do not form a dimension pair.
    """
    return DimPair(sum(x.bottom), sum(x.top))


# ---------------------------------------------------------------------------
# The quadratic form for n = 6


def _require_six(n: int) -> None:
    if n != 6:
        raise UnsupportedNilpotencyError(f"the quadratic form is implemented for n = 6, got n = {n}")


def chi(x: DimVector, n: int = 6) -> int:
    """The integral quadratic form of the covering category for ``n = 6``.

    Every vertex contributes ``x_z^2``. Pairs ``{i, i+6}``, ``{i', (i+6)'}``
    and ``{i, (i+1)'}`` add ``x_z x_z'``; pairs ``{i, i+1}``,
    ``{i', (i+1)'}`` and ``{i, i'}`` subtract it.
    """
    _require_six(n)
    if x.is_zero():
        return 0
    b = np.array(x.bottom, dtype=object)
    t = np.array(x.top, dtype=object)
    value = int((b * b).sum() + (t * t).sum())
    value -= int((b[:-1] * b[1:]).sum() + (t[:-1] * t[1:]).sum() + (b * t).sum())
    value += int((b[:-1] * t[1:]).sum())
    if len(b) > n:
        value += int((b[:-n] * b[n:]).sum() + (t[:-n] * t[n:]).sum())
    return value


def bilinear(x: DimVector, y: DimVector, n: int = 6) -> Fraction:
    """The symmetric bilinear form ``(x, y) = (chi(x+y) - chi(x) - chi(y)) / 2``."""
    _require_six(n)
    return Fraction(chi(x + y, n) - chi(x, n) - chi(y, n), 2)


# ---------------------------------------------------------------------------
# Index functions of the tubular algebra

_THETA_BOTTOM = (0, 6)
_THETA_TOP = (0, 4)
_IOTA_ZERO = ((-1, -1, -1, 0, 1, 1, 0), (0, 0, 1, 1, 0))
_IOTA_INF = ((0, -1, -1, -1, 0, 1, 1), (0, 0, 0, 1, 1))


class RegionLabel(NamedTuple):
    """Region of the index plane; ``gamma`` is set for ``T_gamma`` only."""

    kind: RegionKind
    gamma: Optional[Fraction] = None

    def __str__(self) -> str:
        if self.kind is RegionKind.T_GAMMA:
            return f"T_{self.gamma}"
        return self.kind.value


def _theta_window(x: DimVector) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    for i in range(x.lo, x.hi + 1):
        if x.at(i) and not _THETA_BOTTOM[0] <= i <= _THETA_BOTTOM[1]:
            raise WindowError(f"{x}: bottom entry at {i} lies outside {_THETA_BOTTOM}")
        if x.at_top(i) and not _THETA_TOP[0] <= i <= _THETA_TOP[1]:
            raise WindowError(f"{x}: top entry at {i}' lies outside {_THETA_TOP}")
    bottom, _ = x.window(*_THETA_BOTTOM)
    _, top = x.window(*_THETA_TOP)
    return bottom, top


def iota(x: DimVector) -> Tuple[int, int]:
    """The pair ``(iota_0, iota_inf)`` of dot products on the tubular window.

    Raises:
        WindowError: ``x`` has support outside bottom ``0..6``, top ``0'..4'``.
    """
    bottom, top = _theta_window(x)
    zero = int(np.dot(bottom, _IOTA_ZERO[0]) + np.dot(top, _IOTA_ZERO[1]))
    inf = int(np.dot(bottom, _IOTA_INF[0]) + np.dot(top, _IOTA_INF[1]))
    return zero, inf


def classify_region(x: DimVector) -> RegionLabel:
    """Locate ``x`` by the signs of its index functions."""
    i0, iinf = iota(x)
    if i0 == 0 and iinf == 0:
        return RegionLabel(RegionKind.C_RADICAL)
    if i0 < 0:
        return RegionLabel(RegionKind.P if iinf <= 0 else RegionKind.C_RADICAL)
    if iinf > 0:
        return RegionLabel(RegionKind.Q)
    if i0 == 0:
        return RegionLabel(RegionKind.T0_PRIME)
    if iinf == 0:
        return RegionLabel(RegionKind.TINF_PRIME)
    return RegionLabel(RegionKind.T_GAMMA, Fraction(-i0, iinf))


# ---------------------------------------------------------------------------
# Radical vectors and the rays of the non-stable tube

H0 = DimVector.from_digits("12210000/12332100")
H_INF = DimVector.from_digits("01221000/01233210")


def h0() -> DimVector:
    return H0


def h_inf() -> DimVector:
    return H_INF


_RAY_R_PRIME = (
    "11111000/11111100",
    "01111000/01111100",
    "01111000/01222210",
    "01211000/01222210",
    "01221000/01232210",
    "01221000/01233210",
)
_RAY_R = (
    "00000000/00111110",
    "00100000/00111110",
    "00110000/00121110",
    "00110000/00122110",
    "11221000/11233210",
    "01221000/01233210",
)


def ray_dimvectors(count: int = 12) -> Dict[str, List[DimVector]]:
    """Dimension vectors of the first ``count`` objects on the four rays.

    The rays start at ``R' = rad P(5')`` and ``R = rad P(7)``; after six
    steps the vectors repeat up to adding ``h_inf``. ``P(5'){i}`` and
    ``P(7){i}`` add ``e(5')`` and ``e(7)``.
    """
    rays: Dict[str, List[DimVector]] = {"R'": [], "R": [], "P(5')": [], "P(7)": []}
    for i in range(count):
        period, step = divmod(i, 6)
        r_prime = DimVector.from_digits(_RAY_R_PRIME[step]) + period * H_INF
        r = DimVector.from_digits(_RAY_R[step]) + period * H_INF
        rays["R'"].append(r_prime)
        rays["R"].append(r)
        rays["P(5')"].append(r_prime + DimVector.unit(5, primed=True))
        rays["P(7)"].append(r + DimVector.unit(7))
    return rays


def in_radical_lattice(x: DimVector) -> bool:
    """Whether ``x`` is an integer combination of ``h0`` and ``h_inf``, up to shift.

    The lattice is taken with the tubular window fixed at index 0, so the
    shifts ``x.shift(6k)`` are tested too.
    """
    if x.is_zero():
        return True
    for ell in range(-x.hi - 1, -x.lo + 2):
        y = x.shift(ell)
        if y.lo < 0 or y.hi > 7:
            continue
        a = y.at(0)
        b = y.at(1) - 2 * a
        if a * H0 + b * H_INF == y:
            return True
    return False


# ---------------------------------------------------------------------------
# Roots of E8

# Simple roots ordered (a, b, g, b', c, d, e, f); g is the branch node.
E8_LABELS = ("a", "b", "g", "b'", "c", "d", "e", "f")
_E8_EDGES = ((0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (6, 7))


def _e8_cartan() -> np.ndarray:
    cartan = 2 * np.eye(8, dtype=np.int64)
    for i, j in _E8_EDGES:
        cartan[i, j] = cartan[j, i] = -1
    return cartan


def e8_positive_roots() -> List[Tuple[int, ...]]:
    """All positive roots of E8 in the simple-root basis, by reflection closure."""
    cartan = _e8_cartan()
    simple = [tuple(int(v) for v in row) for row in np.eye(8, dtype=np.int64)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            vec = np.array(root, dtype=np.int64)
            pairing = cartan @ vec
            for i in range(8):
                if pairing[i] == 0:
                    continue
                image = vec.copy()
                image[i] -= pairing[i]
                if (image < 0).any():
                    continue
                key = tuple(int(v) for v in image)
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    roots = sorted(seen, key=lambda r: (sum(r), r))
    logger.debug(f"generated {len(roots)} positive E8 roots")
    return roots


class RootDimPair(NamedTuple):
    """A positive root with its dimension pair ``(v, u)`` and maximal entry ``m``.

    ``u`` may be negative; the pair is a K-group element, not a dimension pair.
    """

    root: Tuple[int, ...]
    v: int
    u: int
    m: int


def root_to_dimpair(root: Sequence[int]) -> RootDimPair:
    """Convert ``(a, b, g, b', c, d, e, f)`` via ``c' = b' + c - g``."""
    if len(root) != 8:
        raise ValueError(f"expected 8 coordinates, got {len(root)}")
    a, b, g, b_prime, c, d, e, f = (int(v) for v in root)
    c_prime = b_prime + c - g
    v = a + b + c + d + e + f
    u = a + b_prime + c_prime
    m = max(a, b, c, d, e, f, b_prime, c_prime)
    return RootDimPair(tuple(int(r) for r in root), v, u, m)


def root_dimpair_table() -> List[Tuple[Tuple[int, int], int, int]]:
    """``((v, u), count, largest m)`` for every pair hit by a positive root, sorted."""
    counts: Counter = Counter()
    labels: Dict[Tuple[int, int], int] = {}
    for root in e8_positive_roots():
        rec = root_to_dimpair(root)
        key = (rec.v, rec.u)
        counts[key] += 1
        labels[key] = max(labels.get(key, 0), rec.m)
    return [(key, counts[key], labels[key]) for key in sorted(counts)]

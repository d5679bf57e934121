"""Tests for covering representations and the covering functor."""

import numpy as np
import pytest

from nilsub.covering import (
    CoverRep,
    cover_direct_sum,
    dimvector,
    from_box_diagram,
    graded_hom_basis,
    graded_hom_to_pair,
    hom_cover,
    pi,
    random_cover,
    shift,
    validate,
)
from nilsub.errors import CoverValidationError, FieldMismatchError
from nilsub.exactla import Matrix
from nilsub.homalg import hom, iso
from nilsub.kform import DimVector, pi_k0
from nilsub.nilmod import DimPair
from nilsub.types import ViolationKind


@pytest.fixture
def column_pair(f2):
    """One column of length 2 with its top box generating U: (k[x]/x^2, all)."""
    return from_box_diagram(f2, 2, [(2, 1)], [(1, [(0, 0, 1)])])


class TestBoxDiagrams:
    """Tests for from_box_diagram."""

    def test_single_column(self, column_pair):
        """Test dimension vector and image of a full column."""
        assert dimvector(column_pair) == DimVector.from_digits("11/11")
        obj = pi(column_pair)
        assert obj.partition.parts == (2,)
        assert obj.dim_pair == DimPair(2, 2)

    def test_socle_generator(self, f3):
        """Test a generator x a1 spans only the bottom box."""
        r = from_box_diagram(f3, 3, [(3, 2)], [(1, [(0, 1, 1)])])
        assert dimvector(r) == DimVector(0, (1, 1, 1), (1, 1, 0))
        assert pi(r).dim_pair == DimPair(3, 2)

    def test_two_columns_glued(self, f2):
        """Test a generator a1 x + a2 at one index."""
        r = from_box_diagram(f2, 3, [(3, 2), (1, 1)], [(1, [(0, 1, 1), (1, 0, 1)])])
        obj = pi(r)
        assert obj.partition.parts == (3, 1)
        assert obj.u == 2
        assert pi_k0(dimvector(r)) == obj.dim_pair

    def test_inhomogeneous_generator(self, f2):
        """Test all terms of a generator must sit at one index."""
        with pytest.raises(CoverValidationError, match="sits at"):
            from_box_diagram(f2, 2, [(2, 1)], [(1, [(0, 1, 1)])])

    def test_column_too_long(self, f2):
        """Test columns longer than n are rejected."""
        with pytest.raises(CoverValidationError, match="length"):
            from_box_diagram(f2, 2, [(3, 2)], [])

    def test_empty_diagram(self, f2):
        """Test no columns gives the zero representation."""
        r = from_box_diagram(f2, 2, [], [])
        assert dimvector(r).is_zero()
        assert validate(r).ok


class TestValidation:
    """Tests for validate."""

    def test_commutativity_violation(self, f2):
        """Test a beta that does not commute with the alphas."""
        one = Matrix(f2, [[1]])
        r = CoverRep(
            f2, 2, 0, (1, 1), (1, 0),
            (Matrix.zeros(f2, 0, 1), one),
            (Matrix.zeros(f2, 0, 1), Matrix.zeros(f2, 1, 0)),
            (one, Matrix.zeros(f2, 1, 0)),
        )
        assert validate(r).ok
        bad = CoverRep(
            f2, 2, 0, (1, 1), (0, 1),
            (Matrix.zeros(f2, 0, 1), one),
            (Matrix.zeros(f2, 0, 0), Matrix.zeros(f2, 0, 1)),
            (Matrix.zeros(f2, 1, 0), one),
        )
        report = validate(bad)
        assert not report.ok
        assert report.kind is ViolationKind.COMMUTATIVITY
        with pytest.raises(CoverValidationError):
            pi(bad)

    def test_nilpotency_violation(self, f2):
        """Test a chain of alphas longer than n."""
        one = Matrix(f2, [[1]])
        r = CoverRep(
            f2, 1, 0, (1, 1), (0, 0),
            (Matrix.zeros(f2, 0, 1), one),
            (Matrix.zeros(f2, 0, 0), Matrix.zeros(f2, 0, 0)),
            (Matrix.zeros(f2, 1, 0), Matrix.zeros(f2, 1, 0)),
        )
        report = validate(r)
        assert report.kind is ViolationKind.NILPOTENCY
        assert report.index == 1


class TestShiftsAndSums:
    """Tests for shift and direct sums of covers."""

    def test_shift_moves_dimvector(self, column_pair):
        """Test dimvector(r[ell]) is the shifted vector and pi forgets the shift."""
        moved = shift(column_pair, 3)
        assert dimvector(moved) == dimvector(column_pair).shift(3)
        assert pi(moved) == pi(column_pair)

    def test_direct_sum(self, column_pair, f2):
        """Test sums of covers map to sums of objects."""
        other = from_box_diagram(f2, 2, [(1, 4)], [])
        total = cover_direct_sum(column_pair, other)
        assert dimvector(total) == dimvector(column_pair) + dimvector(other)
        assert pi(total).dim_pair == DimPair(3, 2)

    def test_direct_sum_field_mismatch(self, column_pair, f3):
        """Test covers over different fields cannot be added."""
        other = from_box_diagram(f3, 2, [(1, 0)], [])
        with pytest.raises(FieldMismatchError):
            cover_direct_sum(column_pair, other)


class TestGradedHoms:
    """Tests for graded morphisms."""

    def test_identity_in_degree_zero(self, column_pair):
        """Test End of an indecomposable cover in degree 0 is the scalars."""
        assert hom_cover(column_pair, column_pair) == 1
        basis = graded_hom_basis(column_pair, column_pair, 0)
        assert basis[0] == Matrix.identity(column_pair.field, 2)

    def test_grades_add_up_to_hom(self, column_pair):
        """Test Σ_g dim Hom(r, s[g]) = dim Hom(pi r, pi s)."""
        total = sum(dim for _, dim in graded_hom_to_pair(column_pair, column_pair))
        assert total == hom(pi(column_pair), pi(column_pair)).dim

    def test_grades_add_up_on_random_covers(self, f3):
        """Test the same identity on random covers."""
        rng = np.random.default_rng(17)
        for _ in range(5):
            r = random_cover(f3, 4, rng)
            s = random_cover(f3, 4, rng)
            total = sum(dim for _, dim in graded_hom_to_pair(r, s))
            assert total == hom(pi(r), pi(s)).dim

    def test_random_cover_reproducible(self, f5):
        """Test seeded random covers agree and map to isomorphic objects."""
        a = random_cover(f5, 3, np.random.default_rng(9))
        b = random_cover(f5, 3, np.random.default_rng(9))
        assert dimvector(a) == dimvector(b)
        assert iso(pi(a), pi(b))

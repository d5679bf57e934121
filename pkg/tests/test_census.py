"""Tests for the census of small indecomposables."""

import json

import pytest

from nilsub.census import (
    census,
    check_duality,
    enumerate_classes,
    enumerate_invariant_subspaces,
    partitions,
    partitions_up_to,
    verify_region,
)
from nilsub.errors import BoundExceededError, UnsupportedFieldError
from nilsub.nilmod import DimPair, Partition


class TestPartitions:
    """Tests for partition enumeration."""

    def test_partitions(self):
        """Test reverse lexicographic order with bounded parts."""
        assert list(partitions(4, 2)) == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert list(partitions(0, 3)) == [()]

    def test_partitions_up_to(self):
        """Test shapes come by increasing total."""
        shapes = [p.parts for p in partitions_up_to(2, 3)]
        assert shapes == [(1,), (2,), (1, 1), (2, 1), (1, 1, 1)]


class TestSubspaces:
    """Tests for enumerating invariant subspaces."""

    def test_counts_over_f2(self, f2):
        """Test (2) has three invariant subspaces and (1,1) has five over F_2."""
        assert len(enumerate_invariant_subspaces(f2, 2, Partition((2,), 2))) == 3
        assert len(enumerate_invariant_subspaces(f2, 2, Partition((1, 1), 2))) == 5

    def test_counts_over_f3(self, f3):
        """Test k^2 has 1 + 4 + 1 subspaces over F_3."""
        found = enumerate_invariant_subspaces(f3, 1, Partition((1, 1), 1))
        assert len(found) == 6
        assert len({x.subspace.key() for x in found}) == 6

    def test_limit(self, f2):
        """Test the enumeration stops past the limit."""
        with pytest.raises(BoundExceededError):
            enumerate_invariant_subspaces(f2, 2, Partition((1, 1), 2), limit=2)

    def test_rationals_refused(self, rationals):
        """Test enumeration needs a finite field."""
        with pytest.raises(UnsupportedFieldError):
            enumerate_invariant_subspaces(rationals, 1, Partition((1,), 1))

    def test_classes_fewer_than_subspaces(self, f2):
        """Test class representatives of (1,1) with T = 0: 0, a line, everything."""
        classes = enumerate_classes(f2, 1, Partition((1, 1), 1))
        assert sorted(x.u for x in classes) == [0, 1, 2]


class TestCensus:
    """Tests for census."""

    def test_n1(self, f2):
        """Test S(1) has two indecomposables."""
        report = census(f2, 1, 2)
        assert len(report) == 2
        assert report.counts() == {(1, 0): 1, (1, 1): 1}

    def test_n2(self, f2):
        """Test S(2) has five indecomposables, all of dimension at most 2."""
        report = census(f2, 2, 4)
        assert len(report) == 5
        assert report.counts() == {(1, 0): 1, (1, 1): 1, (2, 0): 1, (2, 1): 1, (2, 2): 1}
        assert report.unmatched == 0
        assert report.partitions == len(partitions_up_to(2, 4))

    def test_n3(self, f3):
        """Test S(3) has ten indecomposables."""
        report = census(f3, 3, 6)
        assert len(report) == 10
        assert verify_region(report).ok

    def test_exhaustive_matches_classes(self, f2):
        """Test walking every subspace finds the same indecomposables."""
        fast = census(f2, 2, 3)
        slow = census(f2, 2, 3, exhaustive=True)
        assert slow.exhaustive
        assert slow.objects > fast.objects
        assert slow.counts() == fast.counts()

    def test_end_dimensions(self, f2):
        """Test dim End is 1 on the simple pairs and 2 on the others of S(2)."""
        assert [e.end_dim for e in census(f2, 2, 2).indecomposables] == [1, 1, 2, 2, 2]

    def test_jobs(self, f2):
        """Test a worker pool gives the same report."""
        assert census(f2, 2, 3, jobs=2).counts() == census(f2, 2, 3, jobs=1).counts()

    def test_bound_exceeded(self, f2):
        """Test bounds past the configured maximum need deep=True."""
        with pytest.raises(BoundExceededError, match="deep"):
            census(f2, 2, 13)

    def test_rationals_refused(self, rationals):
        """Test a census needs a finite field."""
        with pytest.raises(UnsupportedFieldError):
            census(rationals, 2, 2)


class TestReports:
    """Tests for report checks and output."""

    def test_region_counterexample(self, f2):
        """Test an extra pair outside the stripe is reported."""
        report = census(f2, 2, 2)
        check = verify_region(report, extra=[DimPair(7, 0)])
        assert not check.ok
        assert check.counterexample == DimPair(7, 0)
        assert check.max_deviation == 7

    def test_region_max_deviation(self, f2):
        """Test the largest |v - 2u| of S(2) is 2."""
        check = verify_region(census(f2, 2, 2))
        assert check.ok
        assert check.max_deviation == 2

    def test_duality(self, f2):
        """Test the representatives of S(3) are closed under duality."""
        assert check_duality(census(f2, 3, 6))

    def test_write(self, tmp_path, f2):
        """Test the table, JSON dump and pair files."""
        report = census(f2, 2, 2)
        written = report.write(tmp_path / "out")
        assert len(written) == 2 + 5
        table = (tmp_path / "out" / "census.txt").read_text()
        assert table.splitlines()[0] == "# census field 2 n 2 dim 2"
        assert table.splitlines()[-1] == "total : 5"
        data = json.loads((tmp_path / "out" / "census.json").read_text())
        assert data["total"] == 5
        assert sum(c["count"] for c in data["counts"]) == 5
        assert all(path.exists() for path in written)

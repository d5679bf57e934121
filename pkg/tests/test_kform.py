"""Tests for dimension vectors, the quadratic form and the index functions."""

from fractions import Fraction

import pytest

from nilsub.errors import UnsupportedNilpotencyError, WindowError
from nilsub.kform import (
    DimVector,
    bilinear,
    chi,
    classify_region,
    e8_positive_roots,
    h0,
    h_inf,
    in_radical_lattice,
    iota,
    pi_k0,
    ray_dimvectors,
    root_dimpair_table,
    root_to_dimpair,
    t_support,
)
from nilsub.nilmod import DimPair
from nilsub.types import RegionKind


class TestDimVector:
    """Tests for DimVector."""

    def test_trims_zero_columns(self):
        """Test that padding does not change the vector."""
        a = DimVector.from_digits("01221000/01233210")
        b = DimVector(1, (1, 2, 3, 3, 2, 1), (1, 2, 2, 1, 0, 0))
        assert a == b
        assert a.lo == 1
        assert a.hi == 6

    def test_digits_and_str(self):
        """Test the compact form and the start index suffix."""
        x = DimVector.from_digits("0110/1221", lo=-2)
        assert x.digits() == "0110/1221"
        assert str(x) == "0110/1221@-2"
        assert str(DimVector.unit(3)) == "0/1@3"
        assert str(DimVector.zero()) == "0"

    def test_arithmetic(self):
        """Test addition, scaling and shift."""
        x = h0()
        assert 2 * x == x + x
        assert (x - x).is_zero()
        assert x.shift(6).lo == x.lo + 6
        assert (-x).is_dimension_vector() is False

    def test_bad_digits(self):
        """Test malformed digit strings raise ValueError."""
        with pytest.raises(ValueError):
            DimVector.from_digits("12a/123")
        with pytest.raises(ValueError):
            DimVector.from_digits("123")

    def test_pi_k0(self):
        """Test the projection onto dimension pairs."""
        assert pi_k0(h0()) == DimPair(12, 6)
        assert pi_k0(DimVector.unit(4, primed=True) + DimVector.unit(4)) == DimPair(1, 1)

    def test_t_support(self):
        """Test the number of nonzero total-space entries."""
        assert t_support(h0()) == 6
        assert t_support(DimVector.unit(2, primed=True)) == 0


class TestChi:
    """Tests for the quadratic form."""

    def test_simple_vertices(self):
        """Test chi(e(i)) = chi(e(i')) = 1."""
        assert chi(DimVector.unit(0)) == 1
        assert chi(DimVector.unit(3, primed=True)) == 1

    def test_radical_vectors(self):
        """Test chi vanishes on h0 and h_inf and their combinations."""
        assert chi(h0()) == 0
        assert chi(h_inf()) == 0
        assert chi(2 * h0() + 3 * h_inf()) == 0

    def test_shift_invariance(self):
        """Test chi does not depend on the grading shift."""
        x = DimVector.from_digits("12210000/12221100")
        assert chi(x) == chi(x.shift(5)) == 1

    def test_bilinear_form(self):
        """Test the polarization is symmetric and restricts to chi."""
        x = DimVector.from_digits("0110/1221")
        assert chi(x) == 2
        assert bilinear(x, x) == chi(x)
        assert bilinear(h0(), x) == bilinear(x, h0()) == Fraction(1, 2)

    def test_only_six(self):
        """Test other nilpotency bounds are refused."""
        with pytest.raises(UnsupportedNilpotencyError):
            chi(DimVector.unit(0), n=5)

    def test_zero(self):
        """Test chi(0) = 0."""
        assert chi(DimVector.zero()) == 0


class TestIota:
    """Tests for the index functions and the region map."""

    def test_radical_vectors(self):
        """Test iota on h0 and h_inf."""
        assert iota(h0()) == (0, -6)
        assert iota(h_inf()) == (6, 0)

    def test_regions(self):
        """Test the tubes through h0 and h_inf and the mixed family."""
        assert classify_region(h0()).kind is RegionKind.T0_PRIME
        assert classify_region(h_inf()).kind is RegionKind.TINF_PRIME
        label = classify_region(h0() + h_inf())
        assert label.kind is RegionKind.T_GAMMA
        assert label.gamma == Fraction(1)
        assert str(label) == "T_1"

    def test_preprojective_simple(self):
        """Test e(0) lies in the preprojective region."""
        assert iota(DimVector.unit(0)) == (-1, 0)
        assert classify_region(DimVector.unit(0)).kind is RegionKind.P

    def test_window(self):
        """Test vectors outside the tubular window are rejected."""
        with pytest.raises(WindowError):
            iota(DimVector.unit(7))
        with pytest.raises(WindowError):
            iota(DimVector.unit(5, primed=True))

    def test_radical_lattice(self):
        """Test membership in the lattice spanned by h0 and h_inf."""
        assert in_radical_lattice(h0())
        assert in_radical_lattice(3 * h0() + h_inf())
        assert in_radical_lattice(h0().shift(6))
        assert not in_radical_lattice(DimVector.unit(0))
        assert in_radical_lattice(DimVector.zero())


class TestRays:
    """Tests for the four rays of the non-stable tube."""

    def test_keys_and_lengths(self):
        """Test the rays and their lengths."""
        rays = ray_dimvectors(8)
        assert set(rays) == {"R'", "R", "P(5')", "P(7)"}
        assert all(len(v) == 8 for v in rays.values())

    def test_period_adds_h_inf(self):
        """Test the vectors repeat after six steps up to h_inf."""
        rays = ray_dimvectors(12)
        for name, vectors in rays.items():
            for i in range(6):
                assert vectors[i + 6] == vectors[i] + h_inf(), name

    def test_ray_ends_at_h_inf(self):
        """Test the sixth vector on both radical rays is h_inf."""
        rays = ray_dimvectors(6)
        assert rays["R'"][5] == h_inf()
        assert rays["R"][5] == h_inf()

    def test_first_ray_vectors_are_roots(self):
        """Test chi = 1 on the objects where the rays start."""
        rays = ray_dimvectors(6)
        assert chi(rays["R'"][0]) == 1
        assert chi(rays["P(5')"][0]) == 1
        assert chi(rays["R"][2]) == 1
        assert chi(rays["P(7)"][0]) == 1


    def test_chi_trichotomy_on_two_periods(self):
        """Test chi is 0 on the radical lattice, 2 at full support and 1 elsewhere."""
        rays = ray_dimvectors(12)
        for name, vectors in rays.items():
            for i, x in enumerate(vectors):
                if in_radical_lattice(x):
                    expected = 0
                elif t_support(x) == 8:
                    expected = 2
                else:
                    expected = 1
                assert chi(x) == expected, (name, i)

    def test_chi_values_on_two_periods(self):
        """Test where the values 0 and 2 occur on the first twelve objects."""
        rays = ray_dimvectors(12)
        assert [chi(x) for x in rays["R'"]] == [1, 1, 1, 1, 1, 0] * 2
        assert [chi(x) for x in rays["R"]] == [1, 1, 1, 1, 1, 0] * 2
        assert [chi(x) for x in rays["P(5')"]] == [1] * 12
        assert [chi(x) for x in rays["P(7)"]] == [1, 1, 1, 1, 2, 1] * 2
        assert t_support(rays["P(7)"][10]) == 8


class TestE8:
    """Tests for E8 roots."""

    def test_root_count(self):
        """Test E8 has 120 positive roots with highest root of height 29."""
        roots = e8_positive_roots()
        assert len(roots) == 120
        assert max(sum(r) for r in roots) == 29
        assert all(min(r) >= 0 for r in roots)

    def test_root_to_dimpair(self):
        """Test the conversion on simple roots."""
        assert root_to_dimpair((1, 0, 0, 0, 0, 0, 0, 0))[1:3] == (1, 1)
        branch = root_to_dimpair((0, 0, 1, 0, 0, 0, 0, 0))
        assert (branch.v, branch.u) == (0, -1)

    def test_root_to_dimpair_length(self):
        """Test the root must have eight coordinates."""
        with pytest.raises(ValueError):
            root_to_dimpair((1, 0, 0))

    def test_table_counts(self):
        """Test the table accounts for every root."""
        table = root_dimpair_table()
        assert sum(count for _, count, _ in table) == 120
        assert table == sorted(table)

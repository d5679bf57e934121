"""Tests for Hom spaces, decomposition and isomorphism."""

import numpy as np
import pytest

from nilsub.errors import FieldMismatchError
from nilsub.exactla import Matrix
from nilsub.homalg import (
    classify,
    decompose,
    end_algebra,
    hom,
    is_indecomposable,
    is_local,
    is_morphism,
    iso,
    multiplicities,
    radical_of_end,
    recompose,
)
from nilsub.nilmod import DimPair, direct_sum, make_pair, random_automorphism, random_object, transport


@pytest.fixture
def simple_pairs(f2):
    """The two indecomposables of S(1): (k, 0) and (k, k)."""
    return make_pair(f2, 1, [1]), make_pair(f2, 1, [1], [[1]])


class TestHom:
    """Tests for hom and end_algebra."""

    def test_hom_respects_subspaces(self, simple_pairs):
        """Test maps must send U into U'."""
        empty, full = simple_pairs
        assert hom(empty, full).dim == 1
        assert hom(full, empty).dim == 0
        assert hom(full, full).dim == 1

    def test_basis_elements_are_morphisms(self, f3):
        """Test every basis element commutes with T and preserves U."""
        x = make_pair(f3, 3, [3, 2], [[0, 1, 0, 0, 1]])
        y = make_pair(f3, 3, [3, 1], [[0, 0, 1, 1]])
        space = hom(x, y)
        assert space.dim > 0
        assert all(is_morphism(x, y, f) for f in space.basis)

    def test_is_morphism_rejects_bad_shape(self, simple_pairs, f2):
        """Test a wrongly shaped matrix is not a morphism."""
        empty, _ = simple_pairs
        assert not is_morphism(empty, empty, Matrix.identity(f2, 2))

    def test_end_of_socle_pair(self, f2):
        """Test End of (k[x]/x^2, soc) is spanned by 1 and x."""
        x = make_pair(f2, 2, [2], [[1, 0]])
        assert end_algebra(x).dim == 2
        assert len(radical_of_end(end_algebra(x))) == 1

    def test_hom_field_mismatch(self, f2, f3):
        """Test hom refuses objects over different fields."""
        with pytest.raises(FieldMismatchError):
            hom(make_pair(f2, 2, [1]), make_pair(f3, 2, [1]))

    def test_hom_is_additive(self, f3):
        """Test dim Hom(X ⊕ Y, Z) = dim Hom(X, Z) + dim Hom(Y, Z)."""
        rng = np.random.default_rng(5)
        x, y, z = (random_object(f3, 3, rng, max_dim=5) for _ in range(3))
        assert hom(direct_sum(x, y), z).dim == hom(x, z).dim + hom(y, z).dim
        assert hom(z, direct_sum(x, y)).dim == hom(z, x).dim + hom(z, y).dim


class TestDecompose:
    """Tests for decompose and indecomposability."""

    def test_indecomposable_objects(self, f2):
        """Test the socle pair is indecomposable and local."""
        x = make_pair(f2, 2, [2], [[1, 0]])
        assert is_indecomposable(x)
        assert is_local(x)
        assert decompose(x) == [x]

    def test_split_mixed_generator(self, f2):
        """Test (k[x]/x^2 ⊕ k, <x + e>) splits as (2,0) ⊕ (1,1)."""
        x = make_pair(f2, 2, [2, 1], [[1, 0, 1]])
        summands = decompose(x)
        assert sorted(s.dim_pair.v for s in summands) == [1, 2]
        assert not is_indecomposable(x)
        expected = direct_sum(make_pair(f2, 2, [2]), make_pair(f2, 2, [1], [[1]]))
        assert iso(x, expected)

    def test_split_over_rationals(self, rationals):
        """Test the same split over Q."""
        x = make_pair(rationals, 2, [2, 1], [[1, 0, 1]])
        assert len(decompose(x)) == 2

    def test_recompose_round_trip(self, f3):
        """Test the sum of the summands is isomorphic to the object."""
        x = make_pair(f3, 3, [3, 2, 1], [[0, 1, 1, 0, 1, 0]])
        summands = decompose(x)
        assert sum((s.dim_pair for s in summands), DimPair(0, 0)) == x.dim_pair
        assert iso(recompose(summands), x)

    def test_multiplicities(self, simple_pairs):
        """Test summands grouped by class."""
        empty, full = simple_pairs
        x = direct_sum(direct_sum(empty, full), empty)
        counts = sorted((s.u, m) for s, m in multiplicities(x))
        assert counts == [(0, 2), (1, 1)]


class TestIso:
    """Tests for iso and classify."""

    def test_transported_object_is_isomorphic(self, f3):
        """Test (V, g(U)) ≅ (V, U) for an automorphism g."""
        x = make_pair(f3, 3, [3, 2], [[0, 1, 0, 1, 1]])
        g = random_automorphism(x, np.random.default_rng(2))
        y = transport(x, g)
        assert iso(x, y)

    def test_different_partitions(self, f2):
        """Test objects with different Jordan types are not isomorphic."""
        assert not iso(make_pair(f2, 2, [2]), make_pair(f2, 2, [1, 1]))

    def test_same_dim_pair_not_isomorphic(self, f2):
        """Test pairs that differ only in how U sits."""
        a = make_pair(f2, 2, [2, 1], [[1, 0, 0]])
        b = make_pair(f2, 2, [2, 1], [[0, 0, 1]])
        assert a.dim_pair == b.dim_pair
        assert not iso(a, b)

    def test_classify(self, simple_pairs):
        """Test isomorphic objects share a label."""
        empty, full = simple_pairs
        assert classify([empty, full, empty, full]) == [0, 1, 0, 1]

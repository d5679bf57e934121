"""
nilsub: invariant subspaces of nilpotent operators.

Exact linear algebra over prime fields and the rationals for the category
S(n) of pairs (V, U) with V a module over k[T]/T^n and U a submodule: Hom
spaces, decomposition, isomorphism, duality, the Auslander-Reiten translate,
the covering functor and the quadratic form for n = 6.
"""

__version__ = "0.1.0"

from nilsub.config import NilsubConfig
from nilsub.errors import NilsubError
from nilsub.exactla import Field, Matrix
from nilsub.nilmod import DimPair, PairObject, Partition, direct_sum, dual, from_blocks, make_pair
from nilsub.homalg import classify, decompose, end_algebra, hom, is_indecomposable, iso
from nilsub.arfun import boundary_objects, tau, tau_inverse
from nilsub.kform import DimVector, chi, classify_region, iota, pi_k0
from nilsub.covering import CoverRep, dimvector, pi
from nilsub.tracing import NilsubTracer
from nilsub.decorators import observe
from nilsub.types import BoundaryName, OperationKind, OperationStatus, RegionKind

__all__ = [
    # Linear algebra
    "Field",
    "Matrix",
    # Objects
    "Partition",
    "DimPair",
    "PairObject",
    "make_pair",
    "from_blocks",
    "direct_sum",
    "dual",
    # Homological algebra
    "hom",
    "end_algebra",
    "decompose",
    "is_indecomposable",
    "iso",
    "classify",
    # Auslander-Reiten theory
    "tau",
    "tau_inverse",
    "boundary_objects",
    # Covering and the quadratic form
    "CoverRep",
    "dimvector",
    "pi",
    "DimVector",
    "chi",
    "iota",
    "classify_region",
    "pi_k0",
    # Configuration and tracing
    "NilsubConfig",
    "NilsubTracer",
    "observe",
    "NilsubError",
    # Types
    "BoundaryName",
    "OperationKind",
    "OperationStatus",
    "RegionKind",
    # Version
    "__version__",
]

"""Shared enums, small records and span attribute keys for nilsub."""

from __future__ import annotations

from enum import Enum


class OperationKind(str, Enum):
    """Kind of traced operation."""

    HOM = "nilsub.hom"
    DECOMPOSE = "nilsub.decompose"
    ISO = "nilsub.iso"
    FUNCTOR = "nilsub.functor"
    COVER = "nilsub.cover"
    CENSUS = "nilsub.census"
    VERIFY = "nilsub.verify"
    INTERNAL = "internal"


class OperationStatus(str, Enum):
    """Status of a traced operation."""

    OK = "ok"
    ERROR = "error"


class BoundaryName(str, Enum):
    """Names of the boundary objects attached to the projective-injectives."""

    P = "P"
    P_PRIME = "P'"
    R = "R"
    R_PRIME = "R'"
    J = "J"
    P_PRIME_MOD_K = "P'/K"
    S = "S"
    K = "K"


class RegionKind(str, Enum):
    """Sign-pattern regions of the index functions."""

    P = "P"
    T0_PRIME = "T0'"
    T_GAMMA = "T_gamma"
    TINF_PRIME = "Tinf'"
    Q = "Q"
    C_RADICAL = "C''/radical"


# Attribute keys for OpenTelemetry spans
class NilsubAttributes:
    """Standard attribute keys for nilsub spans."""

    OPERATION = "nilsub.operation"
    ARGUMENTS = "nilsub.arguments"
    RESULT = "nilsub.result"

    FIELD = "nilsub.field"
    NILPOTENCY = "nilsub.nilpotency"
    DIM_PAIR = "nilsub.dim_pair"
    PARTITION = "nilsub.partition"
    SEED = "nilsub.seed"
    DATA_DIR = "nilsub.data_dir"

    CENSUS_PARTITIONS = "nilsub.census.partitions"
    CENSUS_CLASSES = "nilsub.census.classes"
    CENSUS_INDECOMPOSABLES = "nilsub.census.indecomposables"

    STATUS = "nilsub.status"
    ERROR_MESSAGE = "nilsub.error.message"
    ERROR_TYPE = "nilsub.error.type"

    DURATION_MS = "nilsub.duration_ms"


class ViolationKind(str, Enum):
    """Relation families checked on a covering representation."""

    SHAPE = "shape"
    COMMUTATIVITY = "commutativity"
    NILPOTENCY = "nilpotency"
    INJECTIVITY = "injectivity"

"""Exact ndepth of the poset of nonempty submultisets of a multiset."""

from .errors import (
    CertificateParseError,
    NdepthError,
    NoClosedForm,
    ResourceLimitError,
    SearchLimitExceeded,
    StructuralError,
    UsageError,
)
from .formulas import (
    THEOREM_FORMULAS,
    CanonicalWeights,
    MaxMinFormula,
    canonicalize,
    chain_power_ndepth,
    closed_form,
    upper_bound,
)
from .lattice import (
    GoodPartition,
    Interval,
    LemmaResult,
    SubsetMask,
    ValidationReport,
    WeightVector,
    interval_cardinality,
    interval_contains,
    lemma1_check,
    mask_depth,
    partition_ndepth,
    validate_good_partition,
    weight_of,
)
from .solver import SolveResult, exact_ndepth, feasible_at

__version__ = "0.1.0"

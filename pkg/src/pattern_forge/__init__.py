"""Permutations with a fixed number of 321 patterns: an injection, its inverse and counting checks."""

from .errors import (
    Avoider, DomainError, InsufficientData, InvalidPermutation, LimitExceeded,
    NotAType, NotInImage, PatternForgeError, RangeError,
)
from .perm import (
    Occurrence, Permutation, Word, count_321, direct_sum, first_middle,
    occurrences_321, participating_indices, pattern_type, reduce,
)
from .series import (
    CoefficientSeries, GrowthEstimate, catalan, catalan_convolution_check,
    catalan_quadrupling_check, catalan_series, closed_form_s, growth_estimate,
    partial_sum_at,
)
from .injection import (
    Decomposition, InjectionImage, TypeProfile, VerificationReport, decompose,
    phi, psi, type_profile, verify_injection,
)
from .enumeration import (
    BoundReport, SequenceTable, bound_report, build_table, enumerate_avoiders,
    enumerate_fixed, group_by_type, k_r_formula,
)

__version__ = "0.1.0"

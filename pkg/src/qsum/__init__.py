"""qsum: exact and high-precision q-series summation and verification.

The package evaluates q-Pochhammer symbols and unilateral/bilateral
basic hypergeometric series over two interchangeable backends (exact
rational functions in Q(q), and configurable-precision complex
numbers), and verifies a catalog of classical summation identities:
Bailey's 5psi5/3psi3/6psi6 sums, Ramanujan's 1psi1, and the terminating
Carlitz and Jackson sums they rest on, including their limiting cases
and the point-sequence agreement argument.
"""

from qsum.catalog import (IdentityId, ParamSet, VerificationReport,
                          instantiate, ismail_sequence_check, limit_check,
                          resolve_params, lhs_series, rhs_closed_form,
                          substitute, sweep_random, verify)
from qsum.errors import (ConstraintUnsatisfiable, DomainError, MissingParam,
                         NonConvergence, PoleAtPoint, PoleError,
                         PrecisionMismatch, QsumError, SubstitutionError,
                         SweepFailure)
from qsum.exact import BigRational, QPoly, QRatFun, qpoly_gcd
from qsum.numeric import HighPrecComplex, PrecisionContext, hp_close, rel_diff
from qsum.series import (INFINITY, MonoParam, Q, SeriesSpec, eval_bilateral,
                         eval_unilateral, negate_index, numeric_twin, poch,
                         ratio_shift, reindex_bilateral, reverse_finite_sum,
                         shift_base, shift_split)

__version__ = "0.1.0"

__all__ = [
    "BigRational", "ConstraintUnsatisfiable", "DomainError",
    "HighPrecComplex", "INFINITY", "IdentityId", "MissingParam", "MonoParam",
    "NonConvergence", "ParamSet", "PoleAtPoint", "PoleError",
    "PrecisionContext", "PrecisionMismatch", "Q", "QPoly", "QRatFun",
    "QsumError", "SeriesSpec", "SubstitutionError", "SweepFailure",
    "VerificationReport", "eval_bilateral", "eval_unilateral", "hp_close",
    "instantiate", "ismail_sequence_check", "lhs_series", "limit_check",
    "negate_index", "numeric_twin", "poch", "qpoly_gcd", "ratio_shift",
    "reindex_bilateral", "rel_diff", "resolve_params", "reverse_finite_sum",
    "rhs_closed_form", "shift_base", "shift_split", "substitute",
    "sweep_random", "verify",
]

"""Exact Lebesgue-Stieltjes integration and the substitution rule for
increasing integrators with jumps and flat stretches."""

from .integrand import PiecewiseFn, compose_with_monotone, integrate
from .measure import (
    LSMeasure,
    mass,
    measure_from,
    preimage_mass,
    pushforward,
    upper_preimage_mass,
)
from .monotone import (
    Breakpoint,
    CompositionError,
    DomainError,
    FlatLevel,
    FlatLevels,
    MonotoneFn,
    compose,
    eval_at,
    flat_levels,
    left_inverse,
    right_inverse,
    selector_inverse,
)
from .oracle import OracleConfig, oracle_integrate
from .substitution import (
    Decomposition,
    JumpSplit,
    PreconditionError,
    VerificationReport,
    check_inequalities,
    cov_lhs,
    cov_rhs,
    decompose,
    jump_split,
    verify_identity,
)

__version__ = "0.1.0"

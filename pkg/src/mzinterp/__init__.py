"""Interpolation of truncated multiple zeta values in the upper index.

``Psi(s; w)`` is an analytic function of ``w`` with ``Psi(s; N) = zeta_N(s)``
at non-negative integers.  The package evaluates it by nested series, by a
Mellin-type integral over the kernel ``G(q; w)``, and by shifting ``w``
through its difference equation; it also provides the quasi-shuffle algebra
that organizes the harmonic product relations between these functions.
"""

from .combinatorics import (
    DelannoyTable,
    binomial_complex,
    binomial_exact,
    delannoy_layers,
    delannoy_total,
    delannoy_via_stuffle,
)
from .g_function import (
    GEvalStrategy,
    divisor_proximity,
    g_additivity_rhs,
    g_batch,
    g_eval,
    g_explicit,
    g_last_one,
    g_multiplicativity_rhs,
    g_newton,
    g_ones_prefix,
    g_recursive,
    g_series_lt1,
)
from .kernel import (
    ConditioningError,
    ConvergenceError,
    DomainError,
    EvalResult,
    Method,
    MZError,
    RegionError,
    in_domain_Ud,
    principal_log,
    principal_power,
)
from .mellin import QuadratureSpec, psi_auto, psi_mellin
from .quasi_shuffle import (
    ADDITIVE,
    MULTIPLICATIVE,
    EvalMap,
    FormalTupleSum,
    SemigroupElement,
    antipode,
    convolve,
    coproduct,
    elements,
    harmonic_product,
    render,
    star_closure,
)
from .zeta_series import (
    SeriesConfig,
    hurwitz_multiple_zeta,
    psi_series,
    psi_shift_w,
    zeta,
    zeta_star_hurwitz,
    zeta_truncated,
)

__version__ = "0.1.0"

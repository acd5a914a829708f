"""Calculus of the Kolakoski sequence: words, S-integrals, parity histories."""

from ._kernels import USING_NUMBA
from .engine import SequenceWindow, generate, load_cache, save_cache, window_for
from .errors import (
    CorruptCache,
    EqualityViolation,
    InsufficientWindow,
    KolakoskiError,
    NoSDerivative,
    NotDifferentiable,
    NotFoundWithin,
    OutOfWindow,
    StructureViolation,
)
from .regularity import (
    NOT_REGULAR,
    AtLeast,
    ParityHistory,
    RegularityReport,
    closed_form_k_regular,
    find_k_minimal_prefix,
    find_shortest_k_regular_prefix,
    normality_order,
    parity_history,
)
from .subrows import SubrowRef, materialize, s_derivative, s_integral, s_integral_n
from .words import (
    INFINITE,
    Word,
    derivative,
    integrate,
    integrate_n,
    mirror,
    reverse,
    smoothness_order,
    word_sum,
)

__version__ = "0.1.0"

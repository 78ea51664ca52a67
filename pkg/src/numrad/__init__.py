"""Certified numerical radii on M_n(C), Buzano-type module inequalities, and
upper bounds for the numerical radius, with a reproducible campaign runner."""

from .algebra import (
    abs_square,
    adjoint,
    full_spectrum,
    hermitian_eigmax,
    matrix_power,
    operator_norm,
    spectral_radius,
)
from .bounds import (
    ElementProfile,
    cubic_bound,
    cubic_equality_probe,
    cubic_min_bound,
    cubic_presets,
    dominance_check,
    geometric_norm_bound,
    power_sum_bound,
    sextic_bound,
    sextic_preset,
)
from .buzano import BuzanoInstance, MeanFunction
from .radius import RadiusEnclosure, check_norm_sandwich, numerical_radius, rotated_part_max
from .report import BoundReport, PredicateReport
from .states import State, inner_product, state_apply

__version__ = "0.1.0"

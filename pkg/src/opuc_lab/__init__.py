"""Orthogonal polynomials on the unit circle: recursions, kernels and extremal weights."""

__version__ = "0.1.0"

from .errors import (AliasingError, ConstructionError, ConvergenceError, DegenerateMeasureError,
                     DivergentSeriesError, InvalidContextError, OpucError, PreconditionError)
from .trig import ComplexPoly, Grid, TrigSeries, eval_on_grid, integrate, multiply, series_from_samples, star_reverse, sup_norm
from .kernels import (build_H_n, build_Q_n, build_h_n, fejer_multipliers, frac_power_series,
                      jackson_multipliers)
from .opuc import (MeasureSpec, OrthoPolySet, SzegoData, VerblunskySeq, bernstein_szego, caratheodory,
                   localization_bound, monic_polynomial, moments, orthonormal_polynomial, szego_data,
                   szego_recursion, verblunsky_from_measure)
from .solver import ProjectionSpec, monic_fixed_point, p_norm_profile, project
from .extremal import (ConstructionReport, assemble_global_weight, build_large_deviation,
                       build_small_deviation, clip_weight, decop_splice_check, fejer_riesz)

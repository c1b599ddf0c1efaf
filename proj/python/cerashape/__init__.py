"""Biobjective shape optimization of 2D ceramic joints."""

from ._core import (
    ObjectivePair,
    QpDirection,
    RunConfig,
    ShapeProblem,
    analytic_rod_intensity,
    cos_power_mean,
    discrete_curvature,
    gradient_validation,
    load_config,
    parse_config,
    pareto_filter,
    run_sweep,
    steepest_direction_qp,
    write_config,
)

__all__ = [
    "ObjectivePair",
    "QpDirection",
    "RunConfig",
    "ShapeProblem",
    "analytic_rod_intensity",
    "cos_power_mean",
    "discrete_curvature",
    "gradient_validation",
    "load_config",
    "parse_config",
    "pareto_filter",
    "run_sweep",
    "steepest_direction_qp",
    "write_config",
]

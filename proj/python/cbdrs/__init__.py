"""Constant-bearing dependent reachable sets."""

from ._core import (
    Scenario,
    Thresholds,
    DrsRegion,
    SimConfig,
    ContainmentReport,
    ExtremaResult,
    HypothesisReport,
    OracleEnvelope,
    thresholds,
    constant_bearing_heading,
    dependent_velocity,
    closing_speed,
    apollonius_circle,
    region_at,
    contains,
    characteristic_points,
    boundary_polyline,
    region_area,
    apollonius_collinearity_gap,
    propagate,
    grid_search_extrema,
    hypothesis_extrema_check,
    multiswitch_oracle,
    parse_config,
    default_config_text,
    run_acceptance,
)

__all__ = [name for name in dir() if not name.startswith("_")]

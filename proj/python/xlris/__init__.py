"""Secrecy-rate optimization for an XL reflecting surface (native core)."""

from ._core import (  # noqa: F401
    ArrayConfig,
    ConfigError,
    PolarPosition,
    ScenarioConfig,
    SceneGeometry,
    Vec3,
    aperture,
    apply_full_scale,
    draw_channels,
    load_scenario,
    nearfield_steering,
    parse_mode,
    rayleigh_distance,
    secrecy_rates,
    solve_design,
    ula_response,
    upa_response,
)

__all__ = [
    "ArrayConfig",
    "ConfigError",
    "PolarPosition",
    "ScenarioConfig",
    "SceneGeometry",
    "Vec3",
    "aperture",
    "apply_full_scale",
    "draw_channels",
    "load_scenario",
    "nearfield_steering",
    "parse_mode",
    "rayleigh_distance",
    "secrecy_rates",
    "solve_design",
    "ula_response",
    "upa_response",
]

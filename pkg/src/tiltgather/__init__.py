"""Particle gathering in polyomino workspaces under uniform tilt commands."""

from tiltgather.grid import (
    Cell,
    DistanceMap,
    Instance,
    Polyomino,
    convex_corners,
    diameter,
    distance_map,
    extreme_pixel,
    parse_instance,
)
from tiltgather.sim import Configuration, apply, is_gathered, step

__all__ = [
    "Cell",
    "Configuration",
    "DistanceMap",
    "Instance",
    "Polyomino",
    "apply",
    "convex_corners",
    "diameter",
    "distance_map",
    "extreme_pixel",
    "is_gathered",
    "parse_instance",
    "step",
]

"""Terminating chip-firing games, their configuration and move posets."""

from .errors import ChipFiringError
from .firing import (
    ChipConfig,
    FiringSystem,
    MoveVector,
    available_sites,
    fire,
    mv_vector,
    replay,
    stabilize,
)
from .order import FinitePoset
from .posets import (
    FiringMove,
    build_config_poset,
    build_move_poset,
    only_move_config,
    verify_join_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "ChipConfig",
    "ChipFiringError",
    "FinitePoset",
    "FiringMove",
    "FiringSystem",
    "MoveVector",
    "available_sites",
    "build_config_poset",
    "build_move_poset",
    "fire",
    "mv_vector",
    "only_move_config",
    "replay",
    "stabilize",
    "verify_join_theorem",
]

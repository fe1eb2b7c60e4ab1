"""Controllability regions of linear discrete-time systems under unit input bounds."""

from ._core import (
    Error,
    LdtSystem,
    RegionKind,
    __version__,
    brute_vertices,
    compare_ability,
    min_time,
    normalize,
    project_2d,
    region_generators,
    run_verification,
    shape_report,
    strategy_space_dim,
    support,
    verify_theorem1,
    vertices,
    volume,
)

__all__ = [
    "Error",
    "LdtSystem",
    "RegionKind",
    "brute_vertices",
    "compare_ability",
    "min_time",
    "normalize",
    "project_2d",
    "region_generators",
    "run_verification",
    "shape_report",
    "strategy_space_dim",
    "support",
    "verify_theorem1",
    "vertices",
    "volume",
]

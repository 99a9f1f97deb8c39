"""Boundary-control reconstruction of 1D wave media."""

from ._bcm import (
    InadmissibleData,
    Kernel,
    Medium,
    admissibility,
    classical,
    eigen_target,
    extract_kernel,
    forward_state,
    invert,
    load_kernel,
    medium,
    medium_from_samples,
    roundtrip,
    shift_kernel,
)

__all__ = [
    "InadmissibleData",
    "Kernel",
    "Medium",
    "admissibility",
    "classical",
    "eigen_target",
    "extract_kernel",
    "forward_state",
    "invert",
    "load_kernel",
    "medium",
    "medium_from_samples",
    "roundtrip",
    "shift_kernel",
]

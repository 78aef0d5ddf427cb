"""Quaternion tensor completion via a nonlinear-transform tensor nuclear norm.

Quaternion tensors are float64 arrays of shape (n1, n2, n3, 4) holding the
s, x, y, z components; masks are boolean arrays of shape (n1, n2, n3).
"""

from ._core import (
    DataError,
    DimensionError,
    Error,
    InvalidArgument,
    SolverDivergence,
    StructureViolation,
    complete,
    embed_full,
    hamilton_product,
    psnr,
    q_nuclear_norm,
    rse,
    sample_mask,
    ssim,
    synth_lowrank,
)

__all__ = [
    "DataError",
    "DimensionError",
    "Error",
    "InvalidArgument",
    "SolverDivergence",
    "StructureViolation",
    "complete",
    "embed_full",
    "hamilton_product",
    "psnr",
    "q_nuclear_norm",
    "rse",
    "sample_mask",
    "ssim",
    "synth_lowrank",
]

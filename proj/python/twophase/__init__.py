"""Stationary inflow profiles and stability runs for a viscous two-phase flow model."""

import json

from ._core import (
    BlowUpError,
    FarFieldData,
    ModelParams,
    NoProfileError,
    RejectedPerturbation,
    StructuralError,
    classify,
    complete_far_field,
    mach_number,
    relative_entropy,
    sonic_stability_margin,
    weighted_inequality_check,
)
from . import _core

__all__ = [
    "BlowUpError",
    "FarFieldData",
    "ModelParams",
    "NoProfileError",
    "RejectedPerturbation",
    "StructuralError",
    "boundary_slope_sweep",
    "classify",
    "complete_far_field",
    "eigen_spectrum",
    "evolve",
    "mach_number",
    "relative_entropy",
    "solve_stationary",
    "sonic_stability_margin",
    "weighted_inequality_check",
]


def eigen_spectrum(params, far):
    """Far-field Jacobian spectrum as a dict (eigenvalues as {re, im})."""
    return json.loads(_core._spectrum_json(params, far))


def solve_stationary(params, far, nodes=4096, length=0.0, force_regime=None):
    """Profile arrays plus 'summary' and 'decay' dicts."""
    out = _core._solve_stationary(params, far, nodes, length, force_regime)
    out["summary"] = json.loads(out["summary"])
    out["decay"] = json.loads(out["decay"])
    return out


def boundary_slope_sweep(params, far, deltas, nodes=4096, length=0.0):
    return json.loads(_core._boundary_slope_sweep(params, far, list(deltas), nodes, length))


def evolve(params, far, bumps, t_end, report_every, nodes=4096, length=0.0, max_h1=1e-2):
    """bumps: iterable of (field, amplitude, center, width) with field in rho/u/n/v."""
    bumps = [(str(f), float(a), float(c), float(w)) for f, a, c, w in bumps]
    return _core._evolve(params, far, bumps, t_end, report_every, nodes, length, max_h1)

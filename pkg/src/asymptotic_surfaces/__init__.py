"""Time-like surfaces in Minkowski 3-space with real asymptotic lines.

Evaluate parametrised surfaces, compute their basic asymptotic invariants,
pass to canonical asymptotic parameters and rebuild surfaces from the
invariants or from the Gauss and mean curvature.
"""

from .canonical import canonicalize, gauge_functions, is_canonical
from .errors import MethodNotApplicable, SurfaceError
from .grid import Grid
from .invariants import InvariantField, all_residuals, invariants_at
from .minkowski import LorentzMotion, mcross, mdot
from .pde import GoursatProblem, constant_k_residual, minimal_k_residual, solve_cosh_gordon
from .reconstruct import (
    compare_up_to_motion,
    patch_from_surface,
    reconstruct_from_invariants,
    reconstruct_from_kh,
)
from .surface import SurfaceDef, classify_patch, curvatures, forms_at, forms_on_grid

__all__ = [
    "Grid",
    "GoursatProblem",
    "InvariantField",
    "LorentzMotion",
    "MethodNotApplicable",
    "SurfaceDef",
    "SurfaceError",
    "all_residuals",
    "canonicalize",
    "classify_patch",
    "compare_up_to_motion",
    "constant_k_residual",
    "curvatures",
    "forms_at",
    "forms_on_grid",
    "gauge_functions",
    "invariants_at",
    "is_canonical",
    "mcross",
    "mdot",
    "minimal_k_residual",
    "patch_from_surface",
    "reconstruct_from_invariants",
    "reconstruct_from_kh",
    "solve_cosh_gordon",
]

__version__ = "0.1.0"

"""Helmholtz layer potentials by quadrature by two expansions (QB2X)."""
from .boundary import BoundarySegment, RootSet, find_roots, detect_clusters
from .fourext import FourierCoeffs, build_extension_operator, extend
from .kernels import DensitySpec, LayerProblem
from .oracle import reference_eval, reference_many, reference_on_boundary_single
from .qb2x import build_context, canonical_integral, evaluate, evaluate_many
from .qbx import build_qbx, eval_qbx

__all__ = [
    "BoundarySegment", "RootSet", "find_roots", "detect_clusters",
    "FourierCoeffs", "build_extension_operator", "extend",
    "DensitySpec", "LayerProblem",
    "reference_eval", "reference_many", "reference_on_boundary_single",
    "build_context", "canonical_integral", "evaluate", "evaluate_many",
    "build_qbx", "eval_qbx",
]

"""Numerical tolerances shared by every module.

Callers that need looser or tighter checks pass their own ``Tolerances``
instead of editing the module default.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    tol_psd: float = 1e-10          # NotPSD threshold on the smallest eigenvalue
    tol_eig: float = 1e-12          # Hermitian asymmetry and eigen-orthogonality
    jacobi_offdiag: float = 1e-14   # relative off-diagonal mass at Jacobi exit
    inv_sqrt_floor: float = 1e-12   # smallest eigenvalue allowed for inverse roots
    pivot: float = 1e-14            # relative pivot floor in elimination
    generic_sep: float = 1e-12      # joint eigenvalue separation for genericity
    det_floor: float = 1e-10        # |det P| floor for eigenvector independence
    commute: float = 1e-10          # commutator norm allowed in drury_perturb
    sweep: float = 1e-9             # residual tolerance for randomized sweeps
    boundary_margin: float = 1e-6   # triggers the near-boundary d_cartan path


DEFAULT = Tolerances()

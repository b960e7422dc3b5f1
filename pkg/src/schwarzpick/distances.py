"""Pseudo-distances: the disk, the matrix ball (Cartan type I), ``d_Delta``,
and the two closed forms at the symmetric annulus points ``+-sqrt(r)``.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .domains import Annulus, DeltaMap, contains
from .errors import NotStrictContraction, OutOfRange, OutsideDisk, OutsideDomain
from .matkernel import adjoint, as_cmatrix, herm_sqrt, inverse, op_norm

CUBE_ROOT_TWO_MINUS_ONE = 2.0 ** (1.0 / 3.0) - 1.0
DEFAULT_TERMS = 200


def d_disk(z: complex, w: complex) -> float:
    """Pseudo-hyperbolic distance ``|z - w| / |1 - conj(w) z|`` on the unit disk."""
    z, w = complex(z), complex(w)
    if not (abs(z) < 1.0 and abs(w) < 1.0):
        raise OutsideDisk(f"points must lie in the open unit disk: {z}, {w}")
    return abs(z - w) / abs(1.0 - w.conjugate() * z)


def caratheodory_from_mobius(d: float) -> float:
    if not (0.0 <= d < 1.0):
        raise OutOfRange(f"Mobius distance must lie in [0, 1), got {d}")
    return math.atanh(d)


@dataclass(frozen=True)
class CartanDistance:
    value: float
    swapped: bool          # computed as d(B, A) for conditioning
    ill_conditioned: bool  # 1 - max(||A||, ||B||) below the boundary margin


def mobius_matrix(A: np.ndarray, B: np.ndarray, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Harris automorphism ``(I-BB*)^(-1/2) (A-B) (I-B*A)^(-1) (I-B*B)^(1/2)`` of the matrix ball."""
    s, r = B.shape
    left = herm_sqrt(np.eye(s) - B @ adjoint(B), inverse=True, tol=tol)
    mid = inverse(np.eye(r) - adjoint(B) @ A, tol=tol)
    right = herm_sqrt(np.eye(r) - adjoint(B) @ B, tol=tol)
    return left @ (A - B) @ mid @ right


def d_cartan_detailed(A, B, tol: Tolerances = DEFAULT) -> CartanDistance:
    A, B = as_cmatrix(A), as_cmatrix(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    na, nb = op_norm(A, tol), op_norm(B, tol)
    if na >= 1.0 or nb >= 1.0:
        raise NotStrictContraction(f"operator norms {na:.6g}, {nb:.6g} must be < 1")
    swapped = False
    ill = 1.0 - max(na, nb) < tol.boundary_margin
    # (I - B*A)^(-1) and (I - BB*)^(-1/2) blow up as ||B|| -> 1; use the better-conditioned base
    if 1.0 - nb < tol.boundary_margin and na < nb:
        A, B = B, A
        swapped = True
    value = op_norm(mobius_matrix(A, B, tol), tol)
    return CartanDistance(min(value, math.nextafter(1.0, 0.0)), swapped, ill)


def d_cartan(A, B, tol: Tolerances = DEFAULT) -> float:
    """Möbius distance of two strict contractions in the Cartan domain of type I."""
    return d_cartan_detailed(A, B, tol).value


def d_delta(m: DeltaMap, z, w, tol: Tolerances = DEFAULT) -> float:
    """``d_Delta(z, w) = d_cartan(Delta(z), Delta(w))`` for ``z, w`` in ``B_Delta``."""
    for name, p in (("z", z), ("w", w)):
        inside, mg = contains(m, p)
        if not inside:
            raise OutsideDomain(f"{name} is outside B_Delta (margin {mg:.3e})")
    return d_cartan(m.eval(z), m.eval(w), tol)


def d_delta_detailed(m: DeltaMap, z, w, tol: Tolerances = DEFAULT) -> CartanDistance:
    for name, p in (("z", z), ("w", w)):
        inside, mg = contains(m, p)
        if not inside:
            raise OutsideDomain(f"{name} is outside B_Delta (margin {mg:.3e})")
    return d_cartan_detailed(m.eval(z), m.eval(w), tol)


def _check_r(r: float) -> float:
    r = float(r)
    if not (0.0 < r < 1.0):
        raise OutOfRange(f"annulus parameter must lie in (0, 1), got {r}")
    return r


def annulus_da_symmetric(r: float) -> float:
    """``d_a(sqrt r, -sqrt r) = 2 sqrt(r) / (1 + r)`` for ``a(z) = diag(z, r/z)``."""
    r = _check_r(r)
    return 2.0 * math.sqrt(r) / (1.0 + r)


def annulus_da_direct(r: float, tol: Tolerances = DEFAULT) -> float:
    """Same quantity, computed through ``d_delta`` on the annulus map."""
    r = _check_r(r)
    q = math.sqrt(r)
    return d_delta(Annulus(r), [q], [-q], tol)


@dataclass(frozen=True)
class TruncatedProduct:
    value: float
    tail_bound: float
    n_terms: int


def annulus_dA_symmetric(r: float, n_terms: int = DEFAULT_TERMS) -> TruncatedProduct:
    """Möbius distance of the annulus ``r < |z| < 1`` at ``+-sqrt(r)``.

    Evaluates ``4 sqrt(r) prod (1 + r^(2n))^4 / prod (1 + r^(2n-1))^4`` over
    ``n = 1..N``. Dropped factors lie in ``[exp(-4 r^(2n-1)), 1]``, so the
    infinite product sits in ``[v exp(-4 r^(2N+1) / (1 - r^2)), v]``; the bound
    adds a rounding allowance for the log-sum.
    """
    r = _check_r(r)
    if n_terms < 1:
        raise OutOfRange("n_terms must be >= 1")
    logs = []
    for n in range(1, n_terms + 1):
        logs.append(4.0 * math.log1p(r ** (2 * n)))
        logs.append(-4.0 * math.log1p(r ** (2 * n - 1)))
    log_prod = math.fsum(logs)
    value = 4.0 * math.sqrt(r) * math.exp(log_prod)
    tail = value * -math.expm1(-4.0 * r ** (2 * n_terms + 1) / (1.0 - r * r))
    rounding = 8.0 * sys.float_info.epsilon * value * (1.0 + abs(log_prod))
    return TruncatedProduct(value, tail + rounding, n_terms)


@dataclass(frozen=True)
class AnnulusGap:
    r: float
    d_a: float
    d_A: float
    gap: float
    tail_bound: float

    @property
    def strict(self) -> bool:
        return self.gap > self.tail_bound


def annulus_gap(r: float, n_terms: int = DEFAULT_TERMS) -> AnnulusGap:
    d_a = annulus_da_symmetric(r)
    prod = annulus_dA_symmetric(r, n_terms)
    return AnnulusGap(float(r), d_a, prod.value, prod.value - d_a, prod.tail_bound)

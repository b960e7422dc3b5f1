"""Schur-Agler side: extremal functions, the Harris certificate, transfer-function
realizations, admissible two-point kernels and Schwarz-Pick residuals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT, Tolerances
from .distances import d_delta, d_disk, mobius_matrix
from .domains import DeltaMap, as_point, contains
from .errors import (
    DimPolicyError,
    ModulusViolation,
    NotPSD,
    OutsideDomain,
    RankDeficient,
    ShapeMismatch,
)
from .matkernel import adjoint, herm_eig, herm_sqrt, inverse, op_norm, random_unitary
from .tuples import DiagTuple, apply_delta, apply_matrix, apply_scalar, make_tuple

EXTREMAL_MARGIN = 1e-9
KERNEL_EPS = 1e-12


def _require_inside(m: DeltaMap, z, name: str, min_margin: float = 0.0) -> None:
    inside, mg = contains(m, z)
    if not inside or mg < min_margin:
        raise OutsideDomain(f"{name} must lie in B_Delta with margin >= {min_margin:g} (margin {mg:.3e})")


def _unit_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v))))
    return v * (abs(v[k]) / v[k])


# --- extremal functions ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtremalFunction:
    """``f(zeta) = <g_w(zeta) xi, eta>`` with ``g_w`` the Harris automorphism centred at ``Delta(w)``."""

    m: DeltaMap
    w: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    left: np.ndarray    # (I - Delta(w) Delta(w)^*)^(-1/2)
    right: np.ndarray   # (I - Delta(w)^* Delta(w))^(1/2)
    delta_w: np.ndarray

    def g(self, zeta) -> np.ndarray:
        D = self.m.eval(zeta)
        r = D.shape[1]
        mid = inverse(np.eye(r) - adjoint(self.delta_w) @ D)
        return self.left @ (D - self.delta_w) @ mid @ self.right

    def __call__(self, zeta) -> complex:
        return eval_extremal(self, zeta)


def extremal_function(m: DeltaMap, z, w, tol: Tolerances = DEFAULT) -> ExtremalFunction:
    """Function in the class attaining ``d_disk(f(z), f(w)) = d_Delta(z, w)``.

    ``xi``/``eta`` are the top right/left singular vectors of ``g_w(z)``;
    ties go to the lowest index, phases put the first nonzero entry on the
    positive real axis.
    """
    z = as_point(z, m.dim)
    w = as_point(w, m.dim)
    _require_inside(m, z, "z", EXTREMAL_MARGIN)
    _require_inside(m, w, "w", EXTREMAL_MARGIN)
    Dw = m.eval(w)
    s, r = Dw.shape
    left = herm_sqrt(np.eye(s) - Dw @ adjoint(Dw), inverse=True, tol=tol)
    right = herm_sqrt(np.eye(r) - adjoint(Dw) @ Dw, tol=tol)
    F = ExtremalFunction(m, w, np.zeros(r), np.zeros(s), left, right, Dw)
    G = F.g(z)
    lam, V = herm_eig(adjoint(G) @ G, tol)
    top = lam[-1]
    ties = [k for k in range(r) if top - lam[k] <= 1e-12 * max(top, 1e-300)]
    xi = _unit_phase(V[:, min(ties)]) if top > 0 else np.eye(r, dtype=np.complex128)[:, 0]
    Gx = G @ xi
    nrm = float(np.linalg.norm(Gx))
    eta = Gx / nrm if nrm > 0 else np.eye(s, dtype=np.complex128)[:, 0]
    return ExtremalFunction(m, w, xi, eta, left, right, Dw)


def eval_extremal(F: ExtremalFunction, zeta) -> complex:
    _require_inside(F.m, zeta, "zeta")
    return complex(np.vdot(F.eta, F.g(zeta) @ F.xi))


# --- Harris certificate ------------------------------------------------------

@dataclass(frozen=True)
class HarrisCertificate:
    residual: float   # ||(I - g(T)^* g(T)) - Q||
    min_eig: float    # smallest eigenvalue of I - g(T)^* g(T)
    g_norm: float     # ||g(T)||

    def holds(self, tol: float = 1e-9) -> bool:
        return self.residual <= tol and self.min_eig >= -tol and self.g_norm <= 1.0 + tol


def harris_operator(m: DeltaMap, t: DiagTuple, w, tol: Tolerances = DEFAULT):
    """``g(T)`` with ``Delta(W) = Delta(w) (x) I_2`` in place of ``Delta(w)``; also returns the pieces."""
    DT = apply_delta(t, m)
    DW = np.kron(m.eval(w), np.eye(2))
    return mobius_matrix(DT, DW, tol), DT, DW


def harris_certificate(m: DeltaMap, t: DiagTuple, w, tol: Tolerances = DEFAULT) -> HarrisCertificate:
    """Check ``I - g(T)^* g(T)`` against its factorization with ``I - Delta(T)^* Delta(T)`` in the middle."""
    w = as_point(w, m.dim)
    _require_inside(m, w, "w")
    gT, DT, DW = harris_operator(m, t, w, tol)
    n = DT.shape[1]
    I = np.eye(n)
    outer = herm_sqrt(I - adjoint(DW) @ DW, tol=tol)
    Q = (
        outer
        @ inverse(I - adjoint(DT) @ DW, tol)
        @ (I - adjoint(DT) @ DT)
        @ inverse(I - adjoint(DW) @ DT, tol)
        @ outer
    )
    lhs = I - adjoint(gT) @ gT
    residual = op_norm(lhs - Q, tol)
    lam, _ = herm_eig(0.5 * (lhs + adjoint(lhs)), tol)
    return HarrisCertificate(residual, float(lam[0]), op_norm(gT, tol))


def extremal_on_tuple(F: ExtremalFunction, t: DiagTuple) -> np.ndarray:
    """``f(T) = (eta^* (x) I_2) g(T) (xi (x) I_2)`` computed through the operator identity."""
    gT, _, _ = harris_operator(F.m, t, F.w)
    return np.kron(np.conj(F.eta)[None, :], np.eye(2)) @ gT @ np.kron(F.xi[:, None], np.eye(2))


# --- transfer-function realizations -----------------------------------------

@dataclass(frozen=True, eq=False)
class TransferRealization:
    """Unitary colligation ``U = [[A, B], [C, D]]`` on ``E (x) C^s (+) C``.

    ``A`` is ``(e r) x (e s)``, ``B`` is ``(e r) x 1``, ``C`` is ``1 x (e s)``.
    ``pad_from`` records the original ``(s, r)`` when a non-square map was
    padded with zero rows/columns to ``k x k``.
    """

    s: int
    r: int
    e: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: complex
    pad_from: tuple[int, int] | None = None

    @property
    def U(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, np.array([[self.D]])]])

    def unitarity_residual(self) -> float:
        U = self.U
        n = U.shape[0]
        return max(op_norm(adjoint(U) @ U - np.eye(n)), op_norm(U @ adjoint(U) - np.eye(n)))

    def to_dict(self) -> dict:
        U = self.U
        return {
            "e": self.e,
            "pad_from": list(self.pad_from) if self.pad_from else None,
            "r": self.r,
            "s": self.s,
            "U_im": U.imag.tolist(),
            "U_re": U.real.tolist(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TransferRealization":
        U = np.array(obj["U_re"]) + 1j * np.array(obj["U_im"])
        pad = tuple(obj["pad_from"]) if obj.get("pad_from") else None
        return realization_from_unitary(U, obj["s"], obj["r"], obj["e"], pad)


def realization_from_unitary(U, s: int, r: int, e: int, pad_from=None) -> TransferRealization:
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (e * r + 1, e * s + 1):
        raise ShapeMismatch(f"U has shape {U.shape}, expected {(e * r + 1, e * s + 1)}")
    return TransferRealization(
        s, r, e,
        U[: e * r, : e * s].copy(),
        U[: e * r, e * s:].copy(),
        U[e * r:, : e * s].copy(),
        complex(U[e * r, e * s]),
        tuple(pad_from) if pad_from else None,
    )


def random_realization(s: int, r: int, e: int, rng: np.random.Generator, pad: bool = True) -> TransferRealization:
    """Haar-random unitary colligation; non-square ``(s, r)`` is padded to ``max(s, r)``."""
    if min(s, r, e) < 1:
        raise DimPolicyError("s, r, e must be positive")
    pad_from = None
    if s != r:
        if not pad:
            raise DimPolicyError(f"a unitary colligation needs s == r, got {(s, r)}")
        pad_from = (s, r)
        s = r = max(s, r)
    return realization_from_unitary(random_unitary(e * s + 1, rng), s, r, e, pad_from)


def pad_square(D: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros((k, k), dtype=np.complex128)
    out[: D.shape[0], : D.shape[1]] = D
    return out


def _realization_delta(R: TransferRealization, m: DeltaMap, z) -> np.ndarray:
    D = m.eval(z)
    if R.pad_from is not None:
        if tuple(m.shape) != R.pad_from:
            raise ShapeMismatch(f"map shape {m.shape} vs realization built for {R.pad_from}")
        return pad_square(D, R.s)
    if tuple(m.shape) != (R.s, R.r):
        raise ShapeMismatch(f"map shape {m.shape} vs realization blocks {(R.s, R.r)}")
    return D


def transfer_eval(R: TransferRealization, m: DeltaMap, z) -> complex:
    """``D + C (I - (I_e (x) Delta(z)) A)^-1 (I_e (x) Delta(z)) B``."""
    _require_inside(m, z, "z")
    D = np.kron(np.eye(R.e), _realization_delta(R, m, z))
    n = D.shape[0]
    x = inverse(np.eye(n) - D @ R.A) @ (D @ R.B)
    return complex(R.D + (R.C @ x)[0, 0])


def transfer_eval_tuple(R: TransferRealization, m: DeltaMap, t: DiagTuple) -> np.ndarray:
    """Realization evaluated at the operator tuple (every coefficient tensored with ``I_2``)."""
    D1 = _realization_delta(R, m, t.z1)
    D2 = _realization_delta(R, m, t.z2)
    DT = apply_matrix(t, np.kron(np.eye(R.e), D1), np.kron(np.eye(R.e), D2))
    I2 = np.eye(2)
    A2, B2, C2 = np.kron(R.A, I2), np.kron(R.B, I2), np.kron(R.C, I2)
    n = DT.shape[0]
    return R.D * I2 + C2 @ inverse(np.eye(n) - DT @ A2) @ DT @ B2


@dataclass(frozen=True, eq=False)
class BoundRealization:
    """A realization bound to its map, usable as ``f(z)``."""

    R: TransferRealization
    m: DeltaMap

    def __call__(self, z) -> complex:
        return transfer_eval(self.R, self.m, z)


# --- admissible kernels ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KernelData:
    z1: np.ndarray
    z2: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.complex128)
        if k.shape != (2, 2):
            raise ShapeMismatch("kernel matrix must be 2x2")
        lam, _ = herm_eig(k)
        if lam[0] < -DEFAULT.tol_psd * max(1.0, lam[-1]):
            raise NotPSD(f"kernel is not PSD (min eigenvalue {lam[0]:.3e})")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "z1", as_point(self.z1))
        object.__setattr__(self, "z2", as_point(self.z2, self.z1.shape[0]))


def kernel_tuple(kd: KernelData, regularize: bool = True, eps: float = KERNEL_EPS) -> DiagTuple:
    """Tuple whose eigenvectors realize ``k(z_i, z_j) = <v_i, v_j>``.

    With ``G = [v1 v2]`` the Gram identity is ``G^* G = conj(k)``, so the
    Hermitian root of ``conj(k)`` supplies the columns. A singular kernel is
    replaced by ``k + eps I`` when ``regularize``.
    """
    k = np.conj(kd.k)
    lam, _ = herm_eig(k)
    if lam[0] <= eps * max(1.0, lam[-1]):
        if not regularize:
            raise RankDeficient(f"kernel is singular (min eigenvalue {lam[0]:.3e})")
        k = k + eps * np.eye(2)
    G = herm_sqrt(k)
    return make_tuple(kd.z1, kd.z2, G[:, 0], G[:, 1])


def admissible_min_eig(m: DeltaMap, kd: KernelData, regularize: bool = True) -> float:
    """Smallest eigenvalue of ``I - Delta(T)^* Delta(T)`` for the kernel's tuple; ``>= 0`` iff admissible."""
    t = kernel_tuple(kd, regularize)
    DT = apply_delta(t, m)
    M = np.eye(DT.shape[1]) - adjoint(DT) @ DT
    lam, _ = herm_eig(0.5 * (M + adjoint(M)))
    return float(lam[0])


def kernel_gram(k: np.ndarray, f1: complex, f2: complex) -> np.ndarray:
    """``[(1 - conj(f(z_j)) f(z_i)) k(z_i, z_j)]``; PSD iff ``||f(T)|| <= 1`` for the kernel's tuple."""
    f = np.array([f1, f2])
    return (1.0 - np.conj(f)[None, :] * f[:, None]) * np.asarray(k)


# --- Schwarz-Pick residuals --------------------------------------------------

def schwarz_pick_residual(f: Callable, m: DeltaMap, z, w, tol: Tolerances = DEFAULT) -> float:
    """``d_Delta(z, w) - d_disk(f(z), f(w))``; nonnegative for functions in the class."""
    fz, fw = complex(f(z)), complex(f(w))
    if abs(fz) >= 1.0 or abs(fw) >= 1.0:
        raise ModulusViolation(f"|f| must be < 1 at both points, got {abs(fz):.6g}, {abs(fw):.6g}")
    return d_delta(m, z, w, tol) - d_disk(fz, fw)


def von_neumann_norm(f: Callable, t: DiagTuple) -> float:
    """``||f(T)||`` through the two-point calculus."""
    return op_norm(apply_scalar(t, f(t.z1), f(t.z2)))

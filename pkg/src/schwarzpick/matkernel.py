"""Dense complex linear algebra for small matrices.

Matrices are ``numpy`` complex128 arrays. The eigensolver and the inverse run
on the compiled kernels when available (see ``_backend``); everything else is
plain ``numpy`` arithmetic.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .config import DEFAULT, Tolerances
from .errors import NotHermitian, NotPSD, Singular


def as_cmatrix(M) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (scalars become 1x1)."""
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a nonempty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def adjoint(M: np.ndarray) -> np.ndarray:
    return np.conj(M).T


def _pow2_scale(a: np.ndarray, e: int) -> np.ndarray:
    """Exact ``a * 2**e`` (also for subnormal entries and large ``|e|``)."""
    return np.ldexp(a.real, e) + 1j * np.ldexp(a.imag, e)


def _fro(a: np.ndarray) -> float:
    """Frobenius norm, rescaled so tiny entries do not underflow when squared."""
    peak = float(np.max(np.abs(a)))
    if peak == 0.0:
        return 0.0
    e = math.frexp(peak)[1]
    return math.ldexp(float(np.linalg.norm(_pow2_scale(a, -e))), e)


def herm_eig(H, tol: Tolerances = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues ``lam`` and a unitary ``V`` with
    ``H = V diag(lam) V^*``. Raises ``NotHermitian`` when the relative
    asymmetry ``||H - H^*|| / ||H||`` exceeds ``tol.tol_eig``.
    """
    a = as_cmatrix(H)
    n, m = a.shape
    if n != m:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    scale = _fro(a)
    if scale == 0.0:
        return np.zeros(n), np.eye(n, dtype=np.complex128)
    asym = _fro(a - adjoint(a))
    if asym > tol.tol_eig * scale:
        raise NotHermitian(f"relative asymmetry {asym / scale:.3e} exceeds {tol.tol_eig:g}")
    # work at unit scale so squared entries neither underflow nor overflow
    e = math.frexp(scale)[1]
    w, v, _ = _backend.kernels.jacobi_eigh(_pow2_scale(a, -e), tol.jacobi_offdiag)
    w = np.ldexp(np.asarray(w), e)
    order = np.argsort(w, kind="stable")
    return w[order], np.asarray(v)[:, order]


def op_norm(M, tol: Tolerances = DEFAULT) -> float:
    """Largest singular value, from the top eigenvalue of the smaller Gram matrix."""
    a = as_cmatrix(M)
    if a.shape[0] < a.shape[1]:
        gram = a @ adjoint(a)
    else:
        gram = adjoint(a) @ a
    lam, _ = herm_eig(0.5 * (gram + adjoint(gram)), tol)
    return math.sqrt(max(float(lam[-1]), 0.0))


def herm_sqrt(H, inverse: bool = False, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Principal PSD square root ``H^(1/2)``, or ``H^(-1/2)`` when ``inverse``."""
    lam, v = herm_eig(H, tol)
    lo = float(lam[0])
    if lo < -tol.tol_psd * max(1.0, abs(float(lam[-1]))):
        raise NotPSD(f"smallest eigenvalue {lo:.3e} is negative")
    if inverse:
        if lo < tol.inv_sqrt_floor:
            raise Singular(f"smallest eigenvalue {lo:.3e} too small for an inverse root")
        root = 1.0 / np.sqrt(lam)
    else:
        root = np.sqrt(np.clip(lam, 0.0, None))
    out = (v * root) @ adjoint(v)
    return 0.5 * (out + adjoint(out))


def inverse(M, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Inverse by elimination with partial pivoting.

    ``Singular`` when a pivot falls below ``tol.pivot`` times the
    infinity norm of ``M``.
    """
    a = as_cmatrix(M)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix is not square: {a.shape}")
    scale = float(np.max(np.sum(np.abs(a), axis=1)))
    if scale == 0.0:
        raise Singular("zero matrix")
    out = _backend.kernels.lu_inverse(a, tol.pivot * scale)
    if out is None:
        raise Singular("pivot below threshold in elimination")
    return np.asarray(out)


def kron(A, B) -> np.ndarray:
    return np.kron(as_cmatrix(A), as_cmatrix(B))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))

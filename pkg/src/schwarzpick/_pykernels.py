"""Pure-Python kernels: cyclic complex Jacobi and pivoted LU inversion.

Mirrors ``_ckernels.pyx`` line for line so both backends agree to rounding.
"""
from __future__ import annotations

import math

import numpy as np

MAX_SWEEPS = 60


def jacobi_eigh(H, offdiag_tol):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    ``H`` is copied and symmetrized. Sweeps stop once the off-diagonal
    Frobenius mass drops to ``offdiag_tol`` (absolute) or a sweep performs
    no rotation. Returns unsorted ``(w, V, sweeps)`` with ``H V = V diag(w)``.
    """
    a = np.array(H, dtype=np.complex128, copy=True)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * abs(a[p, q]) ** 2
        if math.sqrt(off) <= offdiag_tol:
            sweeps -= 1
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # underflow guard: rotation would be the identity
                if mag <= 1e-300:
                    continue
                ph = b / mag
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                # columns: A <- A J with J = [[c, s], [-s*conj(ph), c*conj(ph)]]
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * phc * colq
                a[:, q] = s * colp + c * phc * colq
                # rows: A <- J^H A
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * phc * vq
                v[:, q] = s * vp + c * phc * vq
                rotated = True
        if not rotated:
            break
    w = np.real(np.diag(a)).copy()
    return w, v, sweeps


def lu_inverse(M, pivot_tol):
    """Invert by Gauss-Jordan elimination with partial pivoting.

    Returns ``None`` when a pivot magnitude falls below ``pivot_tol``.
    """
    a = np.array(M, dtype=np.complex128, copy=True)
    n = a.shape[0]
    inv = np.eye(n, dtype=np.complex128)
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) < pivot_tol:
            return None
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            inv[[k, piv]] = inv[[piv, k]]
        d = a[k, k]
        a[k, :] /= d
        inv[k, :] /= d
        for i in range(n):
            if i != k:
                f = a[i, k]
                if f != 0.0:
                    a[i, :] -= f * a[k, :]
                    inv[i, :] -= f * inv[k, :]
    return inv

"""Diagonalizable commuting d-tuples acting on C^2.

A tuple is stored by its joint eigenvalues ``z1, z2`` (points of C^d) and unit
eigenvectors ``v1, v2``; each coordinate matrix is ``P diag(z1^k, z2^k) P^-1``
with ``P = [v1 v2]``. Functions of the tuple act by ``f(z_j)`` on ``v_j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .domains import DeltaMap, as_point, sample_interior
from .errors import DependentVectors, DimMismatch, Exhausted, NotCommuting
from .matkernel import adjoint, inverse, op_norm

E11 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
E22 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.shape != (2,):
        raise DimMismatch(f"eigenvectors live in C^2, got shape {v.shape}")
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise DependentVectors("zero eigenvector")
    v = v / nrm
    # phase convention: first nonzero component real positive
    k = 0 if abs(v[0]) > 1e-15 else 1
    return v * (abs(v[k]) / v[k])


@dataclass(frozen=True, eq=False)
class DiagTuple:
    z1: np.ndarray
    z2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    @property
    def d(self) -> int:
        return self.z1.shape[0]

    @cached_property
    def P(self) -> np.ndarray:
        return np.column_stack([self.v1, self.v2])

    @cached_property
    def P_inv(self) -> np.ndarray:
        return inverse(self.P)

    @cached_property
    def coords(self) -> list[np.ndarray]:
        """Coordinate matrices ``T^1, ..., T^d``."""
        return [apply_scalar(self, self.z1[k], self.z2[k]) for k in range(self.d)]

    @property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        return self.z1, self.z2

    def to_dict(self) -> dict:
        pair = lambda a: [[float(c.real), float(c.imag)] for c in a]  # noqa: E731
        return {"v1": pair(self.v1), "v2": pair(self.v2), "z1": pair(self.z1), "z2": pair(self.z2)}

    @classmethod
    def from_dict(cls, obj: dict) -> "DiagTuple":
        unpair = lambda xs: np.array([complex(a, b) for a, b in xs], dtype=np.complex128)  # noqa: E731
        z1, z2, v1, v2 = (unpair(obj[k]) for k in ("z1", "z2", "v1", "v2"))
        make_tuple(z1, z2, v1, v2)  # validation only; keep the stored bits
        return cls(z1, z2, v1, v2)


def make_tuple(z1, z2, v1, v2, tol: Tolerances = DEFAULT) -> DiagTuple:
    z1 = as_point(z1)
    z2 = as_point(z2, z1.shape[0])
    v1, v2 = _normalize(v1), _normalize(v2)
    det = abs(v1[0] * v2[1] - v1[1] * v2[0])
    if det < tol.det_floor:
        raise DependentVectors(f"|det P| = {det:.3e} below {tol.det_floor:g}")
    return DiagTuple(z1, z2, v1, v2)


def is_generic(t: DiagTuple, tol: Tolerances = DEFAULT) -> bool:
    return float(np.max(np.abs(t.z1 - t.z2))) > tol.generic_sep


def apply_scalar(t: DiagTuple, fz1: complex, fz2: complex) -> np.ndarray:
    """``f(T) = P diag(f(z1), f(z2)) P^-1``."""
    return (t.P * np.array([fz1, fz2], dtype=np.complex128)) @ t.P_inv


def apply_function(t: DiagTuple, f) -> np.ndarray:
    return apply_scalar(t, f(t.z1), f(t.z2))


def apply_matrix(t: DiagTuple, F1, F2) -> np.ndarray:
    """Matrix-valued calculus: ``e_i (x) v_j -> F(z_j) e_i (x) v_j`` on ``C^r (x) C^2``.

    ``F1 = F(z1)`` and ``F2 = F(z2)`` are ``s x r``; the result is ``2s x 2r``
    in the product basis ``e_i (x) f_k``.
    """
    F1 = np.atleast_2d(np.asarray(F1, dtype=np.complex128))
    F2 = np.atleast_2d(np.asarray(F2, dtype=np.complex128))
    s, r = F1.shape
    core = np.kron(F1, E11) + np.kron(F2, E22)
    return np.kron(np.eye(s), t.P) @ core @ np.kron(np.eye(r), t.P_inv)


def apply_delta(t: DiagTuple, m: DeltaMap) -> np.ndarray:
    if m.dim != t.d:
        raise DimMismatch(f"map has {m.dim} variables, tuple has {t.d}")
    return apply_matrix(t, m.eval(t.z1), m.eval(t.z2))


def sin_theta(t: DiagTuple) -> float:
    """Sine of the angle between the two eigenvector lines."""
    c = min(abs(np.vdot(t.v1, t.v2)), 1.0)
    return math.sqrt(max(0.0, 1.0 - c * c))


def delta_norm(t: DiagTuple, m: DeltaMap) -> float:
    return op_norm(apply_delta(t, m))


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return g / np.linalg.norm(g)


def tuple_at_angle(z1, z2, v1, u, theta: float) -> DiagTuple:
    """``v2 = cos(theta) v1 + sin(theta) u`` with ``u`` a unit vector orthogonal to ``v1``."""
    return make_tuple(z1, z2, v1, math.cos(theta) * v1 + math.sin(theta) * u)


def sample_contractive_tuple(
    m: DeltaMap,
    rng: np.random.Generator,
    bisect_steps: int = 50,
    max_tries: int = 100,
) -> DiagTuple:
    """Generic tuple with ``sigma(T)`` in ``B_Delta`` and ``||Delta(T)|| <= 1``.

    Eigenvalues come from ``sample_interior``; the eigenvector angle is drawn
    uniformly in ``(0, pi/2]``. An infeasible angle is pushed toward
    orthogonality by bisection, landing just inside the feasibility boundary.
    Orthogonal eigenvectors are always feasible since then
    ``||Delta(T)|| = max ||Delta(z_j)|| < 1``.
    """
    for _ in range(max_tries):
        z1 = sample_interior(m, rng)
        z2 = sample_interior(m, rng)
        if float(np.max(np.abs(z1 - z2))) <= DEFAULT.generic_sep:
            continue
        v1 = _random_unit(rng)
        # unit vector orthogonal to v1 with a random phase
        u = np.array([-np.conj(v1[1]), np.conj(v1[0])]) * np.exp(2j * np.pi * rng.random())
        theta = 0.5 * math.pi * (1.0 - rng.random())
        try:
            t = tuple_at_angle(z1, z2, v1, u, theta)
        except DependentVectors:
            t = None
        if t is not None and delta_norm(t, m) <= 1.0:
            return t
        lo, hi = theta, 0.5 * math.pi
        best = tuple_at_angle(z1, z2, v1, u, hi)
        for _ in range(bisect_steps):
            mid = 0.5 * (lo + hi)
            try:
                cand = tuple_at_angle(z1, z2, v1, u, mid)
            except DependentVectors:
                lo = mid
                continue
            if delta_norm(cand, m) <= 1.0:
                hi, best = mid, cand
            else:
                lo = mid
        if delta_norm(best, m) <= 1.0:
            return best
    raise Exhausted("could not sample a contractive tuple")


def drury_perturb(
    raw: Sequence, eps: float, generic: bool = False, tol: Tolerances = DEFAULT
) -> DiagTuple:
    """Diagonalizable commuting tuple within ``eps`` of a commuting 2x2 tuple.

    In a unitary frame ``Q`` sharing a common eigenvector every coordinate is
    ``a_k I + t_k K`` with ``K = [[0, beta], [0, alpha]]``. Moving ``alpha``
    off zero splits a Jordan block while the family stays inside the
    commutative algebra spanned by ``I`` and ``K``, so commutativity is exact.
    A tuple that is already diagonalizable is returned as is, unless
    ``generic`` asks to split a repeated joint eigenvalue.
    """
    mats = [np.asarray(T, dtype=np.complex128).reshape(2, 2) for T in raw]
    if not mats:
        raise DimMismatch("empty tuple")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = op_norm(mats[i] @ mats[j] - mats[j] @ mats[i])
            if c > tol.commute:
                raise NotCommuting(f"||[T{i}, T{j}]|| = {c:.3e}")

    q = _common_eigenvector(mats)
    Q = np.column_stack([q, np.array([-np.conj(q[1]), np.conj(q[0])])])
    tri = [adjoint(Q) @ T @ Q for T in mats]
    a = np.array([X[0, 0] for X in tri])
    vecs = np.array([[X[1, 1] - X[0, 0], X[0, 1]] for X in tri])
    norms = np.linalg.norm(vecs, axis=1)
    k = int(np.argmax(norms))

    if norms[k] <= tol.commute:
        # every coordinate is scalar
        z = a
        if generic:
            if eps <= 0:
                raise ValueError("splitting a scalar tuple needs eps > 0")
            z2 = z.copy()
            z2[0] += 0.5 * eps
            return make_tuple(z, z2, Q[:, 0], Q[:, 1], tol)
        return make_tuple(z, z, Q[:, 0], Q[:, 1], tol)

    alpha, beta = vecs[k] / norms[k]
    ts = vecs @ np.conj(np.array([alpha, beta]))
    z1 = a
    if abs(alpha) >= tol.det_floor:
        # already diagonalizable: eigenvectors q and Q (beta, alpha)
        alpha_new = alpha
    else:
        if eps <= 0:
            raise ValueError("non-diagonalizable tuple needs eps > 0")
        step = 0.5 * eps / float(np.max(np.abs(ts)))
        phase = alpha / abs(alpha) if alpha != 0 else 1.0
        alpha_new = alpha + phase * step
        if abs(alpha_new) < tol.det_floor:
            raise ValueError(f"eps={eps:g} too small to separate the eigenvectors")
    z2 = a + ts * alpha_new
    v2 = Q @ np.array([beta, alpha_new])
    return make_tuple(z1, z2, Q[:, 0], v2, tol)


def _common_eigenvector(mats: list[np.ndarray]) -> np.ndarray:
    """Joint eigenvector of a commuting family of 2x2 matrices.

    An eigenvector of any non-scalar member spans a one-dimensional
    eigenspace, which every commuting member preserves.
    """
    best, best_dev = None, 0.0
    for T in mats:
        dev = float(np.linalg.norm(T - 0.5 * np.trace(T) * np.eye(2)))
        if dev > best_dev:
            best, best_dev = T, dev
    if best is None or best_dev <= 1e-14:
        return np.array([1.0, 0.0], dtype=np.complex128)
    N = best - 0.5 * np.trace(best) * np.eye(2)
    # N = T - (tr/2) I has eigenvalues +-mu; an eigenvector of N is one of T
    mu = np.sqrt(N[0, 0] ** 2 + N[0, 1] * N[1, 0])
    # (N - mu I) x = 0; pick the better-conditioned row
    rows = [N[0] - mu * np.array([1, 0]), N[1] - mu * np.array([0, 1])]
    row = max(rows, key=lambda x: float(np.linalg.norm(x)))
    if np.linalg.norm(row) == 0.0:
        x = np.array([1.0, 0.0], dtype=np.complex128)
    else:
        x = np.array([-row[1], row[0]], dtype=np.complex128)
    return x / np.linalg.norm(x)

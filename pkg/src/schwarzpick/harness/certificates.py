"""Analytic certificates: the annulus non-spectral witness, the annulus gap
scan and the 2-bounding diagnostic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..distances import CUBE_ROOT_TWO_MINUS_ONE, DEFAULT_TERMS, annulus_gap
from ..domains import Annulus, DeltaMap
from ..errors import BisectionFailed, OutOfRange
from ..matkernel import op_norm
from ..tuples import DiagTuple, apply_delta, make_tuple, sample_contractive_tuple, sin_theta
from .report import stream

WITNESS_R_MAX = CUBE_ROOT_TWO_MINUS_ONE - 1e-6


class RangeError(OutOfRange):
    pass


@dataclass(frozen=True)
class NonSpectralCertificate:
    """Chain ``d_a <= sin(theta_T) < d_A`` for a tuple with ``||a(T)|| <= 1``.

    Any function bounded by 1 on the annulus has
    ``d_disk(f(sqrt r), f(-sqrt r)) <= sin(theta_T)`` when the annulus is a
    spectral domain for ``T``; the Möbius distance ``d_A`` exceeds
    ``sin(theta_T)``, so it is not.
    """

    r: float
    tuple: DiagTuple
    sin_theta: float
    d_a: float
    d_A: float
    tail_bound: float
    norm_aT: float
    norm_T: float
    critical_sin: float   # sin(theta) at which ||a(T)|| reaches 1

    @property
    def valid(self) -> bool:
        return (
            self.norm_aT <= 1.0 + 1e-10
            and self.d_a <= self.sin_theta
            and self.d_A - self.sin_theta > self.tail_bound
        )

    def to_dict(self) -> dict:
        return {
            "critical_sin": self.critical_sin,
            "d_A": self.d_A,
            "d_a": self.d_a,
            "norm_T": self.norm_T,
            "norm_aT": self.norm_aT,
            "r": self.r,
            "schema_version": 1,
            "sin_theta": self.sin_theta,
            "tail_bound": self.tail_bound,
            "tuple": self.tuple.to_dict(),
            "valid": self.valid,
        }


def symmetric_tuple(r: float, theta: float) -> DiagTuple:
    """Eigenvalues ``+-sqrt(r)`` on ``e1`` and ``(cos theta, sin theta)``."""
    q = math.sqrt(r)
    return make_tuple([q], [-q], [1.0, 0.0], [math.cos(theta), math.sin(theta)])


def critical_angle(r: float, steps: int = 200) -> float:
    """Angle where ``||a(T)|| = 1`` for the symmetric tuple, by bisection."""
    m = Annulus(r)
    f = lambda th: op_norm(apply_delta(symmetric_tuple(r, th), m)) - 1.0  # noqa: E731
    lo, hi = 1e-6, 0.5 * math.pi
    if not (f(lo) > 0.0 > f(hi)):
        raise BisectionFailed(f"no sign change of ||a(T)|| - 1 on ({lo}, pi/2)")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return hi


def non_spectral_witness(r: float, n_terms: int = DEFAULT_TERMS) -> NonSpectralCertificate:
    r = float(r)
    if not (0.0 < r < WITNESS_R_MAX):
        raise RangeError(f"r must lie in (0, {WITNESS_R_MAX:.9f}), got {r}")
    gap = annulus_gap(r, n_terms)
    target = 0.5 * (gap.d_a + gap.d_A)
    theta = math.asin(target)
    t = symmetric_tuple(r, theta)
    m = Annulus(r)
    return NonSpectralCertificate(
        r=r,
        tuple=t,
        sin_theta=sin_theta(t),
        d_a=gap.d_a,
        d_A=gap.d_A,
        tail_bound=gap.tail_bound,
        norm_aT=op_norm(apply_delta(t, m)),
        norm_T=op_norm(t.coords[0]),
        critical_sin=math.sin(critical_angle(r)),
    )


@dataclass(frozen=True)
class ScanRow:
    r: float
    d_a: float
    d_A: float
    gap: float
    tail_bound: float
    asserted: bool   # r below the cube-root bound, so strictness is claimed
    strict: bool

    @property
    def ok(self) -> bool:
        return self.strict or not self.asserted


SCAN_COLUMNS = ("r", "d_a", "d_A", "gap", "tail_bound", "asserted", "strict")


def annulus_scan(r_grid, n_terms: int = DEFAULT_TERMS) -> list[ScanRow]:
    rows = []
    for r in r_grid:
        g = annulus_gap(r, n_terms)
        rows.append(ScanRow(g.r, g.d_a, g.d_A, g.gap, g.tail_bound,
                            g.r < CUBE_ROOT_TWO_MINUS_ONE, g.strict))
    return rows


@dataclass(frozen=True)
class BoundEstimate:
    value: float
    running_max: list


def bounded_estimate(m: DeltaMap, samples: int, seed: int = 0) -> BoundEstimate:
    """Largest coordinate norm ``max_k ||T^k||`` over sampled admissible tuples.

    A lower bound on the supremum in the 2-bounding definition; growth of
    ``running_max`` with the sample count hints at an unbounded family.
    """
    best, running = 0.0, []
    for i in range(samples):
        t = sample_contractive_tuple(m, stream(seed, i))
        best = max(best, max(op_norm(T) for T in t.coords))
        running.append(best)
    return BoundEstimate(best, running)

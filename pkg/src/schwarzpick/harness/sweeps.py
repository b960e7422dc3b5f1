"""Randomized verification sweeps.

Every sample is a pure function of ``(config, index)``: it draws from its
own seeded stream, so serial and parallel runs produce identical reports.
A residual below ``-tol`` is a violation; each record carries the inputs
needed for ``recheck`` to reproduce it.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm, qmc

from ..distances import d_delta
from ..domains import (
    Annulus,
    BallRow,
    CartanIdentity,
    DeltaMap,
    DirectSum,
    MultiPoly,
    PolydiscDiag,
    direct_sum,
    from_spec,
    poly_eval_many,
    sample_interior,
)
from ..errors import ConfigError
from ..matkernel import op_norm
from ..schuragler import (
    BoundRealization,
    TransferRealization,
    extremal_function,
    random_realization,
    schwarz_pick_residual,
)
from ..tuples import DiagTuple, apply_matrix, apply_scalar, sample_contractive_tuple
from .report import SweepConfig, SweepReport, cpair, from_cpair, metadata, stream

METRIC_TOL = 1e-10
POSITIVITY_SEPARATION = 1e-6


def _map(fn, cfg: SweepConfig, indices):
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            return list(ex.map(fn, itertools.repeat(cfg), indices, chunksize=8))
    return [fn(cfg, i) for i in indices]


def _assemble(sweep: str, cfg: SweepConfig, records: list, t0: float, extra: dict | None = None) -> SweepReport:
    records = sorted(records, key=lambda rec: rec["index"])
    violations = [rec for rec in records if rec["violation"]]
    worst = min((rec["residual"] for rec in records), default=0.0)
    config = cfg.describe(sweep)
    if extra:
        config.update(extra)
    return SweepReport(
        sweep=sweep,
        samples=len(records),
        worst_residual=worst,
        violations=violations,
        passed=not violations,
        tolerance=cfg.tol,
        config=config,
        metadata=metadata(sweep),
        records=records if cfg.keep_samples else None,
        wall_time=time.perf_counter() - t0,
    )


def _require_domain(cfg: SweepConfig) -> DeltaMap:
    if cfg.domain is None:
        raise ConfigError("this sweep needs a domain")
    cfg.validate()
    return cfg.domain


# --- Schwarz-Pick ------------------------------------------------------------

def _sp_kind(cfg: SweepConfig, i: int) -> str:
    if cfg.mode == "mixed":
        return ("realization", "extremal")[i % 2]
    return cfg.mode


def _sp_sample(cfg: SweepConfig, i: int) -> dict:
    m = cfg.domain
    rng = stream(cfg.seed, i)
    z = sample_interior(m, rng)
    w = sample_interior(m, rng)
    kind = _sp_kind(cfg, i)
    rec = {"index": i, "kind": kind, "inputs": {"w": cpair(w), "z": cpair(z)}}
    if kind == "realization":
        s, r = m.shape
        R = random_realization(s, r, int(rng.integers(1, cfg.e_max + 1)), rng)
        rec["inputs"]["realization"] = R.to_dict()
    elif kind == "constant":
        c = complex(*(rng.uniform(-0.7, 0.7, 2)))
        rec["inputs"]["constant"] = [c.real, c.imag]
    rec["residual"] = _sp_residual(m, kind, rec["inputs"])
    rec["violation"] = rec["residual"] < -cfg.tol
    return rec


def _sp_function(m: DeltaMap, kind: str, inputs: dict, z, w):
    if kind == "realization":
        return BoundRealization(TransferRealization.from_dict(inputs["realization"]), m)
    if kind == "extremal":
        return extremal_function(m, z, w)
    c = complex(*inputs["constant"])
    return lambda _z: c


def _sp_residual(m: DeltaMap, kind: str, inputs: dict) -> float:
    z, w = from_cpair(inputs["z"]), from_cpair(inputs["w"])
    f = _sp_function(m, kind, inputs, z, w)
    res = schwarz_pick_residual(f, m, z, w)
    if kind == "extremal":
        # the extremal function must attain d_Delta: any deviation counts
        return -abs(res)
    return res


def sweep_schwarz_pick(cfg: SweepConfig) -> SweepReport:
    """``d_disk(f(z), f(w)) <= d_Delta(z, w)`` for realization / extremal / constant ``f``."""
    _require_domain(cfg)
    t0 = time.perf_counter()
    return _assemble("schwarz-pick", cfg, _map(_sp_sample, cfg, range(cfg.samples)), t0)


# --- von Neumann -------------------------------------------------------------

def _vn_sample(cfg: SweepConfig, i: int) -> dict:
    m = cfg.domain
    rng = stream(cfg.seed, i)
    t = sample_contractive_tuple(m, rng)
    s, r = m.shape
    R = random_realization(s, r, int(rng.integers(1, cfg.e_max + 1)), rng)
    rec = {"index": i, "kind": "realization", "inputs": {"realization": R.to_dict(), "tuple": t.to_dict()}}
    rec["residual"] = _vn_residual(m, rec["inputs"])
    rec["violation"] = rec["residual"] < -cfg.tol
    return rec


def _vn_residual(m: DeltaMap, inputs: dict) -> float:
    t = DiagTuple.from_dict(inputs["tuple"])
    f = BoundRealization(TransferRealization.from_dict(inputs["realization"]), m)
    return 1.0 - op_norm(apply_scalar(t, f(t.z1), f(t.z2)))


def sweep_von_neumann(cfg: SweepConfig) -> SweepReport:
    """``||phi(T)|| <= 1`` for realizations ``phi`` and contractive generic tuples ``T``."""
    _require_domain(cfg)
    t0 = time.perf_counter()
    return _assemble("von-neumann", cfg, _map(_vn_sample, cfg, range(cfg.samples)), t0)


# --- polyball ----------------------------------------------------------------

def polyball_domain(dims) -> DirectSum:
    return direct_sum([BallRow(int(n)) for n in dims])


def _monomials(n: int, degree: int):
    for total in range(degree + 1):
        for exp in itertools.product(range(total + 1), repeat=n):
            if sum(exp) == total:
                yield exp


def random_polynomial(n: int, degree: int, rng: np.random.Generator, matrix: bool) -> dict:
    """Random polynomial as ``{exp: coefficient}``; 2x2 coefficients when ``matrix``."""
    terms = {}
    for exp in _monomials(n, degree):
        if rng.random() < 0.5:
            continue
        if matrix:
            terms[exp] = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        else:
            terms[exp] = complex(rng.standard_normal(), rng.standard_normal())
    if not terms:
        terms[(0,) * n] = np.eye(2, dtype=np.complex128) if matrix else 1.0 + 0j
    return terms


def polyball_polynomials(cfg: SweepConfig) -> list[dict]:
    """Fixed family: a constant, the first coordinate, then random scalar and 2x2 polynomials."""
    n = sum(int(k) for k in cfg.ball_dims)
    polys = []
    for j in range(cfg.n_polys):
        rng = stream(cfg.seed, 1, j)
        if j == 0:
            c = complex(*(rng.uniform(-0.7, 0.7, 2)))
            polys.append({"matrix": False, "terms": {(0,) * n: c}})
        elif j == 1:
            polys.append({"matrix": False, "terms": MultiPoly.coordinate(n, 0).terms})
        else:
            matrix = cfg.matrix_polys and j % 2 == 1
            polys.append({"matrix": matrix, "terms": random_polynomial(n, cfg.degree, rng, matrix)})
    return polys


def _poly_values(poly: dict, Z: np.ndarray) -> np.ndarray:
    """Values on an ``(M, n)`` stack: shape ``(M,)`` scalar or ``(M, 2, 2)`` matrix."""
    Z = np.atleast_2d(Z)
    if not poly["matrix"]:
        return poly_eval_many(MultiPoly(Z.shape[1], poly["terms"]), Z)
    out = np.zeros((Z.shape[0], 2, 2), dtype=np.complex128)
    for exp, C in poly["terms"].items():
        mono = np.ones(Z.shape[0], dtype=np.complex128)
        for k, e in enumerate(exp):
            if e:
                mono = mono * Z[:, k] ** e
        out += mono[:, None, None] * C
    return out


def _poly_abs(poly: dict, Z: np.ndarray) -> np.ndarray:
    vals = _poly_values(poly, Z)
    if not poly["matrix"]:
        return np.abs(vals)
    return np.linalg.norm(vals, ord=2, axis=(1, 2))


def _sphere_points(x: np.ndarray, dims) -> np.ndarray:
    """Map real ``(M, 2n)`` vectors to the product of unit spheres in ``C^n1 x ... x C^nk``."""
    x = np.atleast_2d(x)
    n = sum(dims)
    z = x[:, :n] + 1j * x[:, n:]
    k = 0
    for d in dims:
        block = z[:, k:k + d]
        z[:, k:k + d] = block / np.maximum(np.linalg.norm(block, axis=1, keepdims=True), 1e-300)
        k += d
    return z


def estimate_sup(poly: dict, dims, points: int, seed: int, refine: int = 6) -> float:
    """Lower estimate of ``sup ||p||`` over the closed polyball.

    Scrambled Sobol points pushed through the Gaussian quantile and
    normalized land on the product of spheres, where the maximum of a
    polynomial is attained; a quarter of the points are interior. The best
    starts are polished by local maximization on the spheres.
    """
    dims = [int(d) for d in dims]
    n = sum(dims)
    sob = qmc.Sobol(d=2 * n, scramble=True, seed=np.random.default_rng([seed, 7]))
    m = 2 ** max(1, math.ceil(math.log2(points)))
    u = np.clip(sob.random(m), 1e-12, 1 - 1e-12)
    x = norm.ppf(u)
    Z = _sphere_points(x, dims)
    radial = np.linspace(0.0, 1.0, m // 4 + 2)[1:-1]
    interior = Z[: radial.size] * radial[:, None]
    vals = _poly_abs(poly, np.vstack([Z, interior]))
    best = float(vals.max())
    starts = x[np.argsort(-vals[: Z.shape[0]])[:refine]]
    objective = lambda v: -float(_poly_abs(poly, _sphere_points(v, dims))[0])  # noqa: E731
    for x0 in starts:
        res = minimize(objective, x0, method="L-BFGS-B", options={"maxiter": 200})
        best = max(best, -float(res.fun))
    return best


def _poly_on_tuple(poly: dict, t: DiagTuple) -> float:
    v1 = _poly_values(poly, t.z1[None, :])[0]
    v2 = _poly_values(poly, t.z2[None, :])[0]
    if poly["matrix"]:
        return op_norm(apply_matrix(t, v1, v2))
    return op_norm(apply_scalar(t, v1, v2))


def _poly_to_json(poly: dict) -> dict:
    terms = []
    for exp, c in sorted(poly["terms"].items()):
        c = np.asarray(c, dtype=np.complex128)
        terms.append({"coef": cpair(c), "exp": list(exp)})
    return {"matrix": poly["matrix"], "terms": terms}


def _poly_from_json(obj: dict) -> dict:
    terms = {}
    for t in obj["terms"]:
        c = from_cpair(t["coef"])
        terms[tuple(t["exp"])] = c.reshape(2, 2) if obj["matrix"] else complex(c[0])
    return {"matrix": obj["matrix"], "terms": terms}


def _pb_tuple(cfg: SweepConfig, i: int) -> DiagTuple:
    return sample_contractive_tuple(polyball_domain(cfg.ball_dims), stream(cfg.seed, 0, i))


def _pb_residual(inputs: dict, slack: float) -> float:
    poly = _poly_from_json(inputs["poly"])
    t = DiagTuple.from_dict(inputs["tuple"])
    return inputs["sup_estimate"] * (1.0 + slack) - _poly_on_tuple(poly, t)


def sweep_polyball_dilation(cfg: SweepConfig) -> SweepReport:
    """``||p(T)|| <= sup ||p||`` over the closed polyball for commuting row-contraction tuples.

    ``cfg.samples`` tuples are checked against ``cfg.n_polys`` polynomials.
    """
    cfg.validate()
    t0 = time.perf_counter()
    polys = polyball_polynomials(cfg)
    sups = [estimate_sup(p, cfg.ball_dims, cfg.sup_points, cfg.seed + j) for j, p in enumerate(polys)]
    tuples = _map(_pb_tuple, cfg, range(cfg.samples))
    records = []
    for i, t in enumerate(tuples):
        tdict = t.to_dict()
        for j, poly in enumerate(polys):
            inputs = {"poly": _poly_to_json(poly), "sup_estimate": sups[j], "tuple": tdict}
            res = _pb_residual(inputs, cfg.sup_slack)
            rec = {
                "index": i * cfg.n_polys + j,
                "kind": "matrix" if poly["matrix"] else "scalar",
                "residual": res,
                "violation": res < -cfg.tol,
            }
            if rec["violation"] or cfg.keep_samples:
                rec["inputs"] = inputs
            records.append(rec)
    return _assemble("polyball", cfg, records, t0, {"sup_estimates": sups})


# --- metric axioms -----------------------------------------------------------

def is_two_bounding_builtin(m: DeltaMap) -> bool:
    """Built-in kinds whose admissible tuples have uniformly bounded coordinates."""
    if isinstance(m, DirectSum):
        return all(is_two_bounding_builtin(p) for p in m.parts)
    return isinstance(m, (PolydiscDiag, BallRow, Annulus, CartanIdentity))


def _metric_sample(cfg: SweepConfig, i: int) -> dict:
    m = cfg.domain
    rng = stream(cfg.seed, i)
    x, y, z = (sample_interior(m, rng) for _ in range(3))
    inputs = {"x": cpair(x), "y": cpair(y), "z": cpair(z)}
    positivity = is_two_bounding_builtin(m) if cfg.positivity is None else cfg.positivity
    vals = _metric_values(m, inputs, positivity)
    res = min(-vals["symmetry"], vals["triangle"])
    violation = res < -METRIC_TOL or (positivity and not vals["positive"])
    return {"index": i, "kind": "metric", "inputs": inputs, "residual": res,
            "values": vals, "violation": bool(violation)}


def _metric_values(m: DeltaMap, inputs: dict, positivity: bool) -> dict:
    x, y, z = (from_cpair(inputs[k]) for k in ("x", "y", "z"))
    dxy, dyx = d_delta(m, x, y), d_delta(m, y, x)
    dyz, dxz = d_delta(m, y, z), d_delta(m, x, z)
    sep = float(np.max(np.abs(x - y)))
    positive = True
    if positivity and sep >= POSITIVITY_SEPARATION:
        positive = dxy > 0.0
    return {
        "d_xy": dxy,
        "positive": positive,
        "symmetry": abs(dxy - dyx),
        "triangle": dxy + dyz - dxz,
    }


def sweep_metric_axioms(cfg: SweepConfig) -> SweepReport:
    """Symmetry, triangle inequality and (for 2-bounding kinds) positivity of ``d_Delta``."""
    _require_domain(cfg)
    t0 = time.perf_counter()
    return _assemble("metric", cfg, _map(_metric_sample, cfg, range(cfg.samples)), t0)


# --- re-checking records -----------------------------------------------------

def recheck(sweep: str, record: dict, domain: DeltaMap | dict | None = None, slack: float = 1e-6) -> float:
    """Recompute a record's residual from its stored inputs."""
    if isinstance(domain, dict):
        domain = from_spec(domain)
    inputs = record["inputs"]
    if sweep == "schwarz-pick":
        return _sp_residual(domain, record["kind"], inputs)
    if sweep == "von-neumann":
        return _vn_residual(domain, inputs)
    if sweep == "polyball":
        return _pb_residual(inputs, slack)
    if sweep == "metric":
        vals = _metric_values(domain, inputs, False)
        return min(-vals["symmetry"], vals["triangle"])
    raise ConfigError(f"unknown sweep {sweep!r}")


SWEEPS = {
    "schwarz-pick": sweep_schwarz_pick,
    "von-neumann": sweep_von_neumann,
    "polyball": sweep_polyball_dilation,
    "metric": sweep_metric_axioms,
}

"""Sweep configuration, reports and their stable serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import __version__, _backend
from ..domains import DeltaMap
from ..errors import ConfigError

SCHEMA_VERSION = 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 stream for ``(seed, *key)`` via ``SeedSequence``.

    Sample ``i`` of a sweep draws from ``stream(seed, i)`` (or a tagged key),
    so results do not depend on evaluation order or worker count.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) % 2**64, *key])))


@dataclass
class SweepConfig:
    domain: DeltaMap | None = None
    samples: int = 100
    seed: int = 0
    tol: float = 1e-9
    mode: str = "realization"       # schwarz-pick f source: realization | extremal | constant | mixed
    e_max: int = 2                  # auxiliary dimension drawn from 1..e_max
    jobs: int = 1
    keep_samples: bool = False
    # polyball
    ball_dims: tuple = (2, 2)
    n_polys: int = 20
    degree: int = 3
    sup_points: int = 4096
    sup_slack: float = 1e-6
    matrix_polys: bool = True
    # metric axioms
    positivity: bool | None = None  # None: decide from the domain kind

    def validate(self) -> None:
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.e_max < 1:
            raise ConfigError("e_max must be >= 1")
        if self.mode not in ("realization", "extremal", "constant", "mixed"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if any(int(n) < 1 for n in self.ball_dims) or not self.ball_dims:
            raise ConfigError("ball dims must be positive")
        if self.n_polys < 1 or self.degree < 0 or self.sup_points < 1:
            raise ConfigError("polyball counts must be positive")

    def describe(self, sweep: str) -> dict:
        out = {"samples": self.samples, "seed": self.seed, "tol": self.tol}
        if sweep == "polyball":
            out.update(
                ball_dims=list(self.ball_dims),
                degree=self.degree,
                matrix_polys=self.matrix_polys,
                n_polys=self.n_polys,
                sup_points=self.sup_points,
                sup_slack=self.sup_slack,
            )
        else:
            out["domain"] = self.domain.to_spec() if self.domain is not None else None
        if sweep == "schwarz-pick":
            out["mode"] = self.mode
        if sweep in ("schwarz-pick", "von-neumann"):
            out["e_max"] = self.e_max
        return out


@dataclass
class SweepReport:
    sweep: str
    samples: int
    worst_residual: float
    violations: list
    passed: bool
    tolerance: float
    config: dict
    metadata: dict = field(default_factory=dict)
    records: list | None = None
    wall_time: float | None = None  # excluded from serialization unless asked

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        d.pop("wall_time")
        if self.records is None:
            d.pop("records")
        if timing:
            d["metadata"] = dict(d["metadata"], wall_time=self.wall_time)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """One row per kept sample (or per violation when samples were not kept)."""
        rows = self.records if self.records is not None else self.violations
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "kind", "residual", "violation"])
        for rec in rows:
            w.writerow([rec["index"], rec.get("kind", ""), repr(rec["residual"]), int(rec["violation"])])
        return buf.getvalue()


def metadata(sweep: str) -> dict:
    return {
        "backend": _backend.NAME,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "schema_version": SCHEMA_VERSION,
        "sweep": sweep,
    }


def cpair(values) -> list:
    """Complex array -> list of ``[re, im]`` pairs (exact float round-trip through JSON)."""
    return [[float(c.real), float(c.imag)] for c in np.ravel(np.asarray(values, dtype=np.complex128))]


def from_cpair(pairs) -> np.ndarray:
    return np.array([complex(a, b) for a, b in pairs], dtype=np.complex128)

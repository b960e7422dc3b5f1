"""Matrices of holomorphic functions ``Delta`` and the domains they cut out.

``B_Delta = {z : ||Delta(z)|| < 1}``. Built-in kinds are the polydisc,
the Euclidean ball (row map), the annulus ``diag(z, r/z)``, the Cartan
domain of type I and sparse polynomial matrices; ``DirectSum`` stacks any of
them block-diagonally on concatenated coordinates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AnnulusOrigin,
    DimMismatch,
    Exhausted,
    ParseError,
    Unsupported,
    ValidationError,
)
from .matkernel import op_norm

SAMPLER_MARGIN = 1e-6
MAX_REJECTIONS = 10_000
ANNULUS_ORIGIN_EPS = 1e-13


def as_point(z, dim: int | None = None) -> np.ndarray:
    p = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    if dim is not None and p.shape[0] != dim:
        raise DimMismatch(f"point has {p.shape[0]} coordinates, expected {dim}")
    return p


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in ``dim`` complex variables: exponent tuple -> coefficient."""

    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dim or any(e < 0 for e in exp):
                raise ValidationError(f"bad exponent {exp} for dim {self.dim}")
            c = complex(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v != 0})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, z) -> complex:
        return poly_eval(self, z)

    @classmethod
    def constant(cls, dim: int, c: complex) -> "MultiPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "MultiPoly":
        exp = [0] * dim
        exp[i] = 1
        return cls(dim, {tuple(exp): 1.0})


def poly_eval(p: MultiPoly, z) -> complex:
    z = as_point(z, p.dim)
    if not p.terms:
        return 0j
    powers: dict[tuple[int, int], complex] = {}
    total = 0j
    for exp, c in p.terms.items():
        term = c
        for i, e in enumerate(exp):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = z[i] ** e
                term = term * powers[key]
        total += term
    return complex(total)


def poly_eval_many(p: MultiPoly, Z: np.ndarray) -> np.ndarray:
    """Vectorized evaluation on an ``(n, dim)`` array of points."""
    Z = np.asarray(Z, dtype=np.complex128)
    out = np.zeros(Z.shape[0], dtype=np.complex128)
    for exp, c in p.terms.items():
        term = np.full(Z.shape[0], c, dtype=np.complex128)
        for i, e in enumerate(exp):
            if e:
                term = term * Z[:, i] ** e
        out += term
    return out


class DeltaMap:
    """Base class: ``dim`` variables, ``shape = (s, r)``, ``eval(z) -> s x r``."""

    dim: int
    shape: tuple[int, int]

    def eval(self, z) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z) -> np.ndarray:
        return self.eval(z)

    def to_spec(self) -> dict:
        raise NotImplementedError

    # sampler support; PolyMatrix overrides when a bbox is given
    def _sample(self, rng: np.random.Generator) -> np.ndarray:
        raise Unsupported(f"no interior sampler for {type(self).__name__}")


def _disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    mod = radius * np.sqrt(rng.random(n))
    return mod * np.exp(2j * np.pi * rng.random(n))


@dataclass(frozen=True)
class PolydiscDiag(DeltaMap):
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError("polydisc needs d >= 1")

    @property
    def dim(self):
        return self.d

    @property
    def shape(self):
        return (self.d, self.d)

    def eval(self, z):
        return np.diag(as_point(z, self.d))

    def to_spec(self):
        return {"type": "polydisc", "d": self.d}

    def _sample(self, rng):
        return _disk(rng, self.d, 0.999)


@dataclass(frozen=True)
class BallRow(DeltaMap):
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError("ball needs d >= 1")

    @property
    def dim(self):
        return self.d

    @property
    def shape(self):
        return (1, self.d)

    def eval(self, z):
        return as_point(z, self.d).reshape(1, self.d)

    def to_spec(self):
        return {"type": "ball", "d": self.d}

    def _sample(self, rng):
        g = rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d)
        g /= np.linalg.norm(g)
        radius = 0.999 * rng.random() ** (1.0 / (2 * self.d))
        return radius * g


@dataclass(frozen=True)
class Annulus(DeltaMap):
    """``diag(z, r/z)``; its domain is ``{r < |z| < 1}``."""

    r: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise ValidationError(f"annulus r must lie in (0, 1), got {self.r}")

    dim = 1
    shape = (2, 2)

    def eval(self, z):
        z = as_point(z, 1)[0]
        if abs(z) <= ANNULUS_ORIGIN_EPS:
            raise AnnulusOrigin("annulus map is undefined at the origin")
        return np.diag([z, self.r / z])

    def to_spec(self):
        return {"type": "annulus", "r": self.r}

    def _sample(self, rng):
        eta = 1e-3 * (1.0 - self.r)
        mod = rng.uniform(self.r + eta, 1.0 - eta)
        return np.array([mod * np.exp(2j * np.pi * rng.random())])


@dataclass(frozen=True)
class CartanIdentity(DeltaMap):
    """Coordinates read row-major into an ``s x r`` matrix."""

    s: int
    r: int

    def __post_init__(self):
        if self.s < 1 or self.r < 1:
            raise ValidationError("cartan shape must be positive")

    @property
    def dim(self):
        return self.s * self.r

    @property
    def shape(self):
        return (self.s, self.r)

    def eval(self, z):
        return as_point(z, self.dim).reshape(self.s, self.r).copy()

    def to_spec(self):
        return {"type": "cartan", "shape": [self.s, self.r]}

    def _sample(self, rng):
        g = rng.standard_normal((self.s, self.r)) + 1j * rng.standard_normal((self.s, self.r))
        g *= 0.999 * rng.random() / op_norm(g)
        return g.ravel()


@dataclass(frozen=True)
class PolyMatrix(DeltaMap):
    """``s x r`` grid of ``MultiPoly`` entries in ``d`` variables.

    ``bbox`` gives per-coordinate disk radii for the rejection sampler.
    """

    d: int
    entries: tuple
    bbox: tuple | None = None

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        if not rows or not rows[0] or any(len(row) != len(rows[0]) for row in rows):
            raise ValidationError("poly_matrix entries must be a nonempty rectangular grid")
        for row in rows:
            for p in row:
                if p.dim != self.d:
                    raise ValidationError(f"entry has dim {p.dim}, expected {self.d}")
        object.__setattr__(self, "entries", rows)
        if self.bbox is not None:
            box = tuple(float(b) for b in self.bbox)
            if len(box) != self.d or any(b <= 0 for b in box):
                raise ValidationError("bbox needs one positive radius per coordinate")
            object.__setattr__(self, "bbox", box)

    @property
    def dim(self):
        return self.d

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]))

    def eval(self, z):
        z = as_point(z, self.d)
        return np.array([[poly_eval(p, z) for p in row] for row in self.entries], dtype=np.complex128)

    def to_spec(self):
        spec = {
            "type": "poly_matrix",
            "d": self.d,
            "shape": list(self.shape),
            "entries": [[_poly_to_terms(p) for p in row] for row in self.entries],
        }
        if self.bbox is not None:
            spec["bbox"] = list(self.bbox)
        return spec

    def _sample(self, rng):
        if self.bbox is None:
            raise Unsupported("poly_matrix sampling needs a bbox")
        for _ in range(MAX_REJECTIONS):
            z = np.array([_disk(rng, 1, b)[0] for b in self.bbox])
            if margin(self, z) >= SAMPLER_MARGIN:
                return z
        raise Exhausted(f"no interior point after {MAX_REJECTIONS} rejections")


@dataclass(frozen=True)
class DirectSum(DeltaMap):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValidationError("direct sum needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def dim(self):
        return sum(p.dim for p in self.parts)

    @property
    def shape(self):
        return (sum(p.shape[0] for p in self.parts), sum(p.shape[1] for p in self.parts))

    def split(self, z) -> list[np.ndarray]:
        z = as_point(z, self.dim)
        out, k = [], 0
        for p in self.parts:
            out.append(z[k:k + p.dim])
            k += p.dim
        return out

    def eval(self, z):
        s, r = self.shape
        out = np.zeros((s, r), dtype=np.complex128)
        i = j = 0
        for part, zp in zip(self.parts, self.split(z)):
            block = part.eval(zp)
            out[i:i + block.shape[0], j:j + block.shape[1]] = block
            i += block.shape[0]
            j += block.shape[1]
        return out

    def to_spec(self):
        return {"type": "direct_sum", "parts": [p.to_spec() for p in self.parts]}

    def _sample(self, rng):
        return np.concatenate([sample_interior(p, rng) for p in self.parts])


def delta_eval(m: DeltaMap, z) -> np.ndarray:
    return m.eval(z)


def margin(m: DeltaMap, z) -> float:
    return 1.0 - op_norm(m.eval(z))


def contains(m: DeltaMap, z) -> tuple[bool, float]:
    """Strict membership ``||Delta(z)|| < 1`` together with the margin ``1 - ||Delta(z)||``."""
    mg = margin(m, z)
    return mg > 0.0, mg


def direct_sum(parts: Sequence[DeltaMap]) -> DirectSum:
    return DirectSum(tuple(parts))


def sample_interior(m: DeltaMap, rng: np.random.Generator) -> np.ndarray:
    """Random point of ``B_Delta`` with margin at least ``SAMPLER_MARGIN``.

    Not uniform; every built-in sampler has full support on its domain minus
    a thin boundary shell.
    """
    for _ in range(MAX_REJECTIONS):
        z = m._sample(rng)
        if margin(m, z) >= SAMPLER_MARGIN:
            return z
    raise Exhausted(f"no interior point after {MAX_REJECTIONS} rejections")


# --- domain-spec JSON -------------------------------------------------------

def _poly_to_terms(p: MultiPoly) -> list:
    return [
        {"exp": list(exp), "im": c.imag, "re": c.real}
        for exp, c in sorted(p.terms.items())
    ]


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field '{key}'")
    return obj[key]


def _int_field(obj: dict, key: str, where: str) -> int:
    v = _require(obj, key, where)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _terms_to_poly(d: int, terms, where: str) -> MultiPoly:
    if not isinstance(terms, list):
        raise ParseError(f"{where}: expected a list of terms")
    out: dict = {}
    for k, t in enumerate(terms):
        tw = f"{where}[{k}]"
        if not isinstance(t, dict):
            raise ParseError(f"{tw}: expected an object")
        exp = _require(t, "exp", tw)
        if not isinstance(exp, list) or len(exp) != d:
            raise ValidationError(f"{tw}.exp: expected {d} exponents, got {exp!r}")
        c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        key = tuple(int(e) for e in exp)
        out[key] = out.get(key, 0) + c
    return MultiPoly(d, out)


def from_spec(obj, where: str = "$") -> DeltaMap:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    kind = _require(obj, "type", where)
    if kind == "polydisc":
        return PolydiscDiag(_int_field(obj, "d", where))
    if kind == "ball":
        return BallRow(_int_field(obj, "d", where))
    if kind == "annulus":
        r = _require(obj, "r", where)
        if not isinstance(r, (int, float)) or isinstance(r, bool):
            raise ParseError(f"{where}.r: expected a number")
        return Annulus(float(r))
    if kind == "cartan":
        shape = _require(obj, "shape", where)
        if not (isinstance(shape, list) and len(shape) == 2):
            raise ParseError(f"{where}.shape: expected [s, r]")
        return CartanIdentity(int(shape[0]), int(shape[1]))
    if kind == "poly_matrix":
        d = _int_field(obj, "d", where)
        entries = _require(obj, "entries", where)
        if not isinstance(entries, list):
            raise ParseError(f"{where}.entries: expected an array of rows")
        grid = tuple(
            tuple(_terms_to_poly(d, cell, f"{where}.entries[{i}][{j}]") for j, cell in enumerate(row))
            for i, row in enumerate(entries)
        )
        if "shape" in obj:
            shape = obj["shape"]
            if [len(grid), len(grid[0]) if grid else 0] != list(shape):
                raise ValidationError(f"{where}.shape: {shape} does not match entries")
        return PolyMatrix(d, grid, obj.get("bbox"))
    if kind == "direct_sum":
        parts = _require(obj, "parts", where)
        if not isinstance(parts, list):
            raise ParseError(f"{where}.parts: expected an array")
        return DirectSum(tuple(from_spec(p, f"{where}.parts[{i}]") for i, p in enumerate(parts)))
    raise ParseError(f"{where}.type: unknown domain type {kind!r}")


def parse_domain_spec(text: bytes | str) -> DeltaMap:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_spec(obj)


def dump_domain_spec(m: DeltaMap) -> str:
    """Canonical JSON (sorted keys) for diff-stable fixtures."""
    return json.dumps(m.to_spec(), sort_keys=True, separators=(",", ":"))

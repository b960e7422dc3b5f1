"""Command-line interface.

Exit codes: 0 pass, 1 violation found, 2 usage or configuration error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from ..distances import (
    DEFAULT_TERMS,
    caratheodory_from_mobius,
    d_delta_detailed,
    d_disk,
)
from ..domains import DeltaMap, margin, parse_domain_spec
from ..errors import SchwarzPickError
from ..schuragler import extremal_function
from .certificates import SCAN_COLUMNS, annulus_scan, bounded_estimate, non_spectral_witness
from .report import SweepConfig, cpair
from .sweeps import SWEEPS

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _fail(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def load_domain(value: str) -> DeltaMap:
    """Domain spec from a JSON file path or inline JSON text."""
    text = value
    if not value.lstrip().startswith("{"):
        path = Path(value)
        if not path.exists():
            _fail(f"domain file not found: {value}")
        text = path.read_text(encoding="utf-8")
    return parse_domain_spec(text)


def parse_complex(tok: str) -> complex:
    tok = tok.strip().replace(" ", "").replace("i", "j")
    return complex(tok)


def parse_point(value: str) -> np.ndarray:
    try:
        return np.array([parse_complex(t) for t in value.split(",") if t.strip()], dtype=np.complex128)
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse complex list {value!r}: {exc}") from exc


def _fmt(c: complex) -> str:
    return repr(complex(c))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Pseudo-distances, extremal functions and verification sweeps on B_Delta domains."""


@main.command()
@click.option("--domain", required=True, help="Domain spec: JSON file or inline JSON.")
@click.option("--z", "z_text", required=True, help="Comma-separated complex coordinates.")
@click.option("--w", "w_text", required=True, help="Comma-separated complex coordinates.")
def dist(domain, z_text, w_text):
    """Print d_Delta(z, w), its Carathéodory value and both margins."""
    try:
        m = load_domain(domain)
        z, w = parse_point(z_text), parse_point(w_text)
        res = d_delta_detailed(m, z, w)
        out = {
            "caratheodory": caratheodory_from_mobius(res.value),
            "d_delta": res.value,
            "ill_conditioned": res.ill_conditioned,
            "margin_w": margin(m, w),
            "margin_z": margin(m, z),
        }
    except SchwarzPickError as exc:
        _fail(str(exc))
    click.echo(_dumps(out))


@main.command()
@click.option("--domain", required=True)
@click.option("--z", "z_text", required=True)
@click.option("--w", "w_text", required=True)
@click.option("--eval", "eval_file", type=click.Path(exists=True, dir_okay=False),
              help="File with one point per line (comma-separated complex coordinates).")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path for --eval results (default stdout).")
def extremal(domain, z_text, w_text, eval_file, out):
    """Build the extremal function for (z, w) and report the equality residual."""
    try:
        m = load_domain(domain)
        z, w = parse_point(z_text), parse_point(w_text)
        F = extremal_function(m, z, w)
        res = d_delta_detailed(m, z, w)
        fz, fw = F(z), F(w)
        summary = {
            "d_delta": res.value,
            "equality_residual": abs(res.value - d_disk(fz, fw)),
            "eta": cpair(F.eta),
            "f_w": [fw.real, fw.imag],
            "f_z": [fz.real, fz.imag],
            "xi": cpair(F.xi),
        }
        rows = []
        if eval_file:
            for line in Path(eval_file).read_text(encoding="utf-8").splitlines():
                if line.strip() and not line.lstrip().startswith("#"):
                    p = parse_point(line)
                    v = F(p)
                    rows.append([line.strip(), repr(v.real), repr(v.imag), repr(abs(v))])
    except SchwarzPickError as exc:
        _fail(str(exc))
    click.echo(_dumps(summary))
    if eval_file:
        buf = [["point", "re", "im", "abs"], *rows]
        text = "".join(",".join(f'"{c}"' if "," in c else c for c in row) + "\n" for row in buf)
        _write(text, out)


def _parse_grid(value: str) -> list[float]:
    """``0.25``, ``0.01,0.1,0.25`` or ``grid:START:STOP:COUNT`` (inclusive linspace)."""
    if value.startswith("grid:"):
        try:
            _, a, b, n = value.split(":")
            return [float(x) for x in np.linspace(float(a), float(b), int(n))]
        except ValueError as exc:
            raise click.BadParameter(f"bad grid spec {value!r}") from exc
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"bad r list {value!r}") from exc


@main.command()
@click.option("--r", "r_text", required=True, help="Value, comma list, or grid:START:STOP:COUNT.")
@click.option("--terms", default=DEFAULT_TERMS, show_default=True, type=click.IntRange(min=1))
@click.option("--witness", is_flag=True, help="Emit a non-spectral certificate (JSON) for each r.")
@click.option("--out", type=click.Path(dir_okay=False))
def annulus(r_text, terms, witness, out):
    """Annulus gap scan (CSV), or non-spectral witness certificates (JSON)."""
    grid = _parse_grid(r_text)
    try:
        if witness:
            certs = [non_spectral_witness(r, terms) for r in grid]
            payload = [c.to_dict() for c in certs]
            _write(_dumps(payload[0] if len(payload) == 1 else payload) + "\n", out)
            sys.exit(EXIT_PASS if all(c.valid for c in certs) else EXIT_VIOLATION)
        rows = annulus_scan(grid, terms)
    except SchwarzPickError as exc:
        _fail(str(exc))
    lines = [",".join(SCAN_COLUMNS)]
    for row in rows:
        lines.append(",".join([
            repr(row.r), repr(row.d_a), repr(row.d_A), repr(row.gap),
            repr(row.tail_bound), str(int(row.asserted)), str(int(row.strict)),
        ]))
    _write("\n".join(lines) + "\n", out)
    sys.exit(EXIT_PASS if all(row.ok for row in rows) else EXIT_VIOLATION)


@main.command()
@click.argument("kind", type=click.Choice(sorted(SWEEPS)))
@click.option("--domain", help="Domain spec (not used by polyball).")
@click.option("--samples", default=100, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--tol", default=1e-9, show_default=True, type=float)
@click.option("--mode", default="realization", show_default=True,
              type=click.Choice(["realization", "extremal", "constant", "mixed"]))
@click.option("--e-max", default=2, show_default=True, type=int)
@click.option("--dims", default="2,2", show_default=True, help="Polyball ball dimensions.")
@click.option("--polys", default=20, show_default=True, type=int)
@click.option("--degree", default=3, show_default=True, type=int)
@click.option("--sup-points", default=4096, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--keep-samples", is_flag=True, help="Store every sample record, not only violations.")
@click.option("--timing", is_flag=True, help="Include wall time (breaks byte-identical reruns).")
@click.option("--out", type=click.Path(dir_okay=False), help="Report JSON path (default stdout).")
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False), help="Per-sample residual CSV.")
def fuzz(kind, domain, samples, seed, tol, mode, e_max, dims, polys, degree, sup_points,
         jobs, keep_samples, timing, out, csv_out):
    """Run a seeded randomized sweep and write a SweepReport."""
    try:
        m = load_domain(domain) if domain else None
        if kind != "polyball" and m is None:
            _fail(f"fuzz {kind} needs --domain")
        try:
            ball_dims = tuple(int(x) for x in dims.split(","))
        except ValueError:
            _fail(f"bad --dims {dims!r}")
        cfg = SweepConfig(
            domain=m, samples=samples, seed=seed, tol=tol, mode=mode, e_max=e_max,
            jobs=jobs, keep_samples=keep_samples or bool(csv_out), ball_dims=ball_dims,
            n_polys=polys, degree=degree, sup_points=sup_points,
        )
        report = SWEEPS[kind](cfg)
    except SchwarzPickError as exc:
        _fail(str(exc))
    _write(report.to_json(timing), out)
    if csv_out:
        Path(csv_out).write_text(report.to_csv(), encoding="utf-8")
    if out:
        status = "PASS" if report.passed else "FAIL"
        click.echo(f"{kind}: {status} samples={report.samples} worst_residual={report.worst_residual!r} "
                   f"violations={len(report.violations)}", err=True)
    sys.exit(EXIT_PASS if report.passed else EXIT_VIOLATION)


@main.command()
@click.option("--domain", required=True)
@click.option("--samples", default=200, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=int)
def bound(domain, samples, seed):
    """Lower estimate of the 2-bounding supremum (diagnostic only)."""
    try:
        m = load_domain(domain)
        est = bounded_estimate(m, samples, seed)
    except SchwarzPickError as exc:
        _fail(str(exc))
    marks = sorted({max(1, samples // 4), max(1, samples // 2), samples})
    click.echo(_dumps({
        "estimate": est.value,
        "running_max": {str(k): est.running_max[k - 1] for k in marks},
        "samples": samples,
    }))


if __name__ == "__main__":
    main()

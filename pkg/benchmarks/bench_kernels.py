"""Compare the compiled and pure-Python kernel backends.

Times the Jacobi eigensolver, the pivoted inverse and a full ``d_delta``
evaluation (which runs several eigen-decompositions and inverses) for each
importable backend, and checks both backends agree.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 2,4,8,16,32]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from schwarzpick import _backend
from schwarzpick.distances import d_delta
from schwarzpick.domains import CartanIdentity, sample_interior


def _hermitian(n: int, rng) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def _best(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def run(sizes, repeat: int) -> list[dict]:
    rng = np.random.default_rng(0)
    backends = _backend.available()
    rows = []
    for n in sizes:
        H = _hermitian(n, rng)
        M = H + n * np.eye(n)
        m = CartanIdentity(n, n)
        z, w = sample_interior(m, rng), sample_interior(m, rng)
        row = {"n": n}
        eigs = {}
        for name, k in backends.items():
            row[f"eigh_{name}"] = _best(lambda: k.jacobi_eigh(H, 1e-14 * np.linalg.norm(H)), repeat)
            row[f"inv_{name}"] = _best(lambda: k.lu_inverse(M, 1e-14), repeat)
            _backend.kernels = k
            row[f"d_delta_{name}"] = _best(lambda: d_delta(m, z, w), repeat)
            eigs[name] = np.sort(np.asarray(k.jacobi_eigh(H, 1e-14 * np.linalg.norm(H))[0]))
        _backend.kernels = backends.get("cython", backends["python"])
        ref = eigs["python"]
        row["max_eig_diff"] = max(float(np.max(np.abs(v - ref))) for v in eigs.values())
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2,4,8,16,32")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = run(sizes, args.repeat)
    names = sorted(_backend.available())
    print(f"backends: {', '.join(names)}")
    header = ["n"]
    for op in ("eigh", "inv", "d_delta"):
        header += [f"{op}_{b} [us]" for b in names]
        if len(names) == 2:
            header.append(f"{op} speedup")
    header.append("max |eig diff|")
    print(" | ".join(header))
    for row in rows:
        cells = [str(row["n"])]
        for op in ("eigh", "inv", "d_delta"):
            cells += [f"{row[f'{op}_{b}'] * 1e6:.1f}" for b in names]
            if len(names) == 2:
                cells.append(f"{row[f'{op}_python'] / row[f'{op}_cython']:.1f}x")
        cells.append(f"{row['max_eig_diff']:.1e}")
        print(" | ".join(cells))


if __name__ == "__main__":
    main()

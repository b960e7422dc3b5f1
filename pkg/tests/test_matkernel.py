import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from schwarzpick.errors import NotHermitian, NotPSD, Singular
from schwarzpick.matkernel import as_cmatrix, herm_eig, herm_sqrt, inverse, kron, op_norm, random_unitary

from conftest import random_complex

GOLDEN = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(2), 1.0),
        ([[0, 2], [0, 0]], 2.0),
        ([[1, 1], [0, 1]], GOLDEN),
    ],
)
def test_op_norm_examples(backend, M, expected):
    assert op_norm(M) == pytest.approx(expected, rel=1e-12)


def test_herm_eig_examples(backend):
    lam, V = herm_eig(np.diag([3.0, 1.0]))
    assert lam == pytest.approx([1.0, 3.0], abs=1e-15)
    assert np.allclose(np.abs(V), [[0, 1], [1, 0]])

    lam, _ = herm_eig([[2, 1], [1, 2]])
    assert lam == pytest.approx([1.0, 3.0], abs=1e-14)

    lam, V = herm_eig(np.zeros((3, 3)))
    assert np.all(lam == 0) and np.array_equal(V, np.eye(3))


def test_herm_eig_rejects_non_hermitian(backend):
    with pytest.raises(NotHermitian):
        herm_eig([[1, 2], [0, 1]])
    with pytest.raises(NotHermitian):
        herm_eig(np.ones((2, 3)))


@pytest.mark.parametrize("n", [1, 2, 3, 8, 24, 64])
def test_herm_eig_contract_vs_numpy(backend, rng, n):
    G = random_complex(rng, n, n)
    H = G + G.conj().T
    lam, V = herm_eig(H)
    scale = np.linalg.norm(H, 2)
    assert np.linalg.norm(H @ V - V * lam, 2) <= 1e-11 * scale
    assert np.linalg.norm(V.conj().T @ V - np.eye(n), 2) <= 1e-12 * max(1, n / 8)
    assert np.all(np.diff(lam) >= 0)
    # independent oracle: LAPACK
    assert np.max(np.abs(lam - np.linalg.eigvalsh(H))) <= 1e-12 * scale


def test_herm_sqrt_examples(backend):
    assert np.allclose(herm_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-15)
    assert np.allclose(herm_sqrt(np.eye(3), inverse=True), np.eye(3), atol=1e-15)
    a, b = (math.sqrt(3) + 1) / 2, (math.sqrt(3) - 1) / 2
    assert np.allclose(herm_sqrt([[2, 1], [1, 2]]), [[a, b], [b, a]], atol=1e-14)


def test_herm_sqrt_errors(backend):
    with pytest.raises(NotPSD):
        herm_sqrt(np.diag([1.0, -1e-3]))
    with pytest.raises(Singular):
        herm_sqrt(np.diag([1.0, 0.0]), inverse=True)
    # tiny negative rounding is clipped, not rejected
    assert np.allclose(herm_sqrt(np.diag([1.0, -1e-14])), np.diag([1.0, 0.0]))


def test_inverse_examples(backend):
    assert np.array_equal(inverse(np.eye(3)), np.eye(3))
    assert np.allclose(inverse(np.diag([2, 1j])), np.diag([0.5, -1j]), atol=1e-16)
    assert np.allclose(inverse([[1, 1], [0, 1]]), [[1, -1], [0, 1]], atol=1e-16)


def test_inverse_singular(backend):
    with pytest.raises(Singular):
        inverse([[1, 2], [2, 4]])
    with pytest.raises(Singular):
        inverse(np.zeros((2, 2)))


def test_inverse_needs_pivoting(backend):
    M = np.array([[1e-18, 1], [1, 1]])
    assert np.allclose(inverse(M) @ M, np.eye(2), atol=1e-15)


def test_kron_examples():
    B = np.array([[1, 2j], [3, 4]])
    assert np.array_equal(kron(np.eye(2), B), np.block([[B, np.zeros((2, 2))], [np.zeros((2, 2)), B]]))
    A = np.array([[1, 2], [3, 4j]])
    assert np.array_equal(kron(A, [[1]]), A)
    swap = kron([[0, 1], [1, 0]], np.eye(2))
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = expected[2, 0] = expected[3, 1] = 1
    assert np.array_equal(swap, expected)


def test_kron_mixed_product(rng):
    A, B = random_complex(rng, 2, 3), random_complex(rng, 3, 2)
    x, y = random_complex(rng, 3), random_complex(rng, 2)
    assert np.allclose(kron(A, B) @ np.kron(x, y), np.kron(A @ x, B @ y))


def test_as_cmatrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_cmatrix([[1, np.nan]])


def test_random_unitary(rng):
    U = random_unitary(5, rng)
    assert np.linalg.norm(U.conj().T @ U - np.eye(5), 2) <= 1e-12


# --- properties ----------------------------------------------------------------

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(1, max_n).flatmap(
            lambda m: st.tuples(arrays(np.float64, (n, m), elements=finite),
                                arrays(np.float64, (n, m), elements=finite))
        )
    ).map(lambda p: p[0] + 1j * p[1])


@settings(max_examples=150, deadline=None)
@given(complex_matrices())
def test_op_norm_adjoint_and_svd(M):
    n = op_norm(M)
    assert abs(n - op_norm(M.conj().T)) <= 1e-11 * max(1.0, n)
    assert abs(n - np.linalg.norm(M, 2)) <= 1e-12 * max(1.0, n)


@settings(max_examples=100, deadline=None)
@given(complex_matrices(), st.integers(0, 2**32 - 1))
def test_op_norm_unitary_invariance(M, seed):
    rng = np.random.default_rng(seed)
    U, V = random_unitary(M.shape[0], rng), random_unitary(M.shape[1], rng)
    n = op_norm(M)
    assert abs(op_norm(U @ M @ V) - n) <= 1e-10 * max(1.0, n)


@settings(max_examples=100, deadline=None)
@given(complex_matrices())
def test_herm_sqrt_squares_back(G):
    H = G.conj().T @ G
    R = herm_sqrt(H)
    scale = max(np.linalg.norm(H, 2), 1e-300)
    assert np.linalg.norm(R @ R - H, 2) <= 1e-10 * scale
    assert np.allclose(R, R.conj().T)
    lam, _ = herm_eig(H)
    assert lam[0] >= -1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_inverse_well_conditioned(n, seed):
    rng = np.random.default_rng(seed)
    M = random_unitary(n, rng) @ np.diag(rng.uniform(0.5, 2.0, n)) @ random_unitary(n, rng)
    assert np.linalg.norm(inverse(M) @ M - np.eye(n), 2) <= 1e-12


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    code = (
        "import schwarzpick as sp;"
        "print(sp.backend, repr(sp.d_delta(sp.Annulus(0.25), [0.5], [-0.5])))"
    )
    env = dict(os.environ, SCHWARZPICK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, value = out.stdout.split()
    assert name == "python"
    assert float(value) == pytest.approx(0.8, abs=1e-12)


def test_backends_agree_on_small_inputs(rng):
    from schwarzpick import _backend

    mods = _backend.available()
    if len(mods) < 2:
        pytest.skip("compiled backend not built")
    G = random_complex(rng, 5, 5)
    H = G + G.conj().T
    a = mods["python"].jacobi_eigh(H, 1e-14 * np.linalg.norm(H))
    b = mods["cython"].jacobi_eigh(H, 1e-14 * np.linalg.norm(H))
    assert np.max(np.abs(np.sort(a[0]) - np.sort(b[0]))) <= 1e-13
    assert a[2] == b[2]   # same sweep count: same algorithm, same order

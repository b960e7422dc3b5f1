import numpy as np
import pytest

from schwarzpick.distances import d_cartan, d_delta, d_disk
from schwarzpick.domains import (
    Annulus,
    BallRow,
    CartanIdentity,
    PolydiscDiag,
    delta_eval,
    direct_sum,
    parse_domain_spec,
    sample_interior,
)
from schwarzpick.errors import (
    DimPolicyError,
    ModulusViolation,
    NotPSD,
    OutsideDomain,
    RankDeficient,
    ShapeMismatch,
)
from schwarzpick.matkernel import op_norm, random_unitary
from schwarzpick.schuragler import (
    BoundRealization,
    KernelData,
    TransferRealization,
    admissible_min_eig,
    eval_extremal,
    extremal_function,
    extremal_on_tuple,
    harris_certificate,
    harris_operator,
    kernel_gram,
    kernel_tuple,
    pad_square,
    random_realization,
    realization_from_unitary,
    schwarz_pick_residual,
    transfer_eval,
    transfer_eval_tuple,
    von_neumann_norm,
)
from schwarzpick.tuples import apply_scalar, make_tuple, sample_contractive_tuple

POLY_SPEC = (
    '{"type":"poly_matrix","d":2,"bbox":[1.0,1.0],"entries":['
    '[[{"exp":[1,0],"re":1}],[{"exp":[0,1],"re":0.5}]],'
    '[[{"exp":[1,1],"re":1}],[{"exp":[0,0],"re":0.1,"im":0.1}]]]}'
)


def all_kinds():
    return [
        PolydiscDiag(3),
        BallRow(2),
        Annulus(0.2),
        CartanIdentity(2, 3),
        parse_domain_spec(POLY_SPEC),
        direct_sum([Annulus(0.1), BallRow(2)]),
    ]


IDS = ["polydisc", "ball", "annulus", "cartan", "poly_matrix", "direct_sum"]


# --- extremal functions ----------------------------------------------------

@pytest.mark.parametrize("m", all_kinds(), ids=IDS)
def test_extremal_sharpness(m, rng):
    for _ in range(20):
        z, w = sample_interior(m, rng), sample_interior(m, rng)
        F = extremal_function(m, z, w)
        fz, fw = eval_extremal(F, z), eval_extremal(F, w)
        assert abs(fw) <= 1e-14
        assert abs(d_delta(m, z, w) - d_disk(fz, fw)) <= 1e-9
        assert abs(abs(fz) - d_delta(m, z, w)) <= 1e-9


@pytest.mark.parametrize("m", all_kinds(), ids=IDS)
def test_extremal_is_contractive_in_class(m, rng):
    z, w = sample_interior(m, rng), sample_interior(m, rng)
    F = extremal_function(m, z, w)
    for _ in range(30):
        a, b = sample_interior(m, rng), sample_interior(m, rng)
        assert schwarz_pick_residual(F, m, a, b) >= -1e-9
        t = sample_contractive_tuple(m, rng)
        assert von_neumann_norm(F, t) <= 1 + 1e-9


def test_extremal_deterministic_normalization(rng):
    m = CartanIdentity(2, 2)
    z, w = sample_interior(m, rng), sample_interior(m, rng)
    a, b = extremal_function(m, z, w), extremal_function(m, z, w)
    assert np.array_equal(a.xi, b.xi) and np.array_equal(a.eta, b.eta)
    k = np.flatnonzero(np.abs(a.xi) > 1e-12)[0]
    assert a.xi[k].imag == 0 and a.xi[k].real > 0


def test_extremal_tie_break_lowest_index():
    m = PolydiscDiag(2)
    F = extremal_function(m, [0.5, 0.5], [0, 0])   # equal singular values
    assert np.allclose(np.abs(F.xi), [1, 0])


def test_extremal_requires_interior():
    with pytest.raises(OutsideDomain):
        extremal_function(PolydiscDiag(1), [0.5], [1.0])


def test_extremal_operator_route_matches_calculus(rng):
    for m in all_kinds():
        z, w = sample_interior(m, rng), sample_interior(m, rng)
        F = extremal_function(m, z, w)
        t = sample_contractive_tuple(m, rng)
        direct = apply_scalar(t, F(t.z1), F(t.z2))
        assert op_norm(extremal_on_tuple(F, t) - direct) <= 1e-10


# --- Harris ------------------------------------------------------------------

@pytest.mark.parametrize("m", all_kinds(), ids=IDS)
def test_harris_certificate_contract(m, rng):
    for _ in range(15):
        t = sample_contractive_tuple(m, rng)
        cert = harris_certificate(m, t, sample_interior(m, rng))
        assert cert.residual <= 1e-9
        assert cert.min_eig >= -1e-9
        assert cert.g_norm <= 1 + 1e-9
        assert cert.holds()


def test_harris_trivial_g_zero():
    m = BallRow(2)
    w = np.array([0.3, -0.2j])
    t = make_tuple(w, w, [1, 0], [0.6, 0.8])
    cert = harris_certificate(m, t, w)
    assert cert.g_norm <= 1e-14
    assert cert.min_eig == pytest.approx(1, abs=1e-14)


def test_harris_orthonormal_blocks(rng):
    m = CartanIdentity(2, 2)
    z1, z2, w = (sample_interior(m, rng) for _ in range(3))
    t = make_tuple(z1, z2, [1, 0], [0, 1])
    gT, _, _ = harris_operator(m, t, w)
    F = extremal_function(m, z1, w)
    g1, g2 = F.g(z1), F.g(z2)
    assert np.allclose(gT[0::2, 0::2], g1, atol=1e-13)
    assert np.allclose(gT[1::2, 1::2], g2, atol=1e-13)
    cert = harris_certificate(m, t, w)
    assert cert.g_norm == pytest.approx(max(op_norm(g1), op_norm(g2)), abs=1e-12)


# --- realizations -----------------------------------------------------------

def test_transfer_eval_swap_is_coordinate():
    R = realization_from_unitary([[0, 1], [1, 0]], 1, 1, 1)
    m = parse_domain_spec('{"type":"poly_matrix","d":1,"entries":[[[{"exp":[1],"re":1}]]]}')
    for z in (0.3, -0.5j, 0.2 + 0.7j):
        assert transfer_eval(R, m, [z]) == pytest.approx(z, abs=1e-15)


def test_transfer_eval_permutation_on_polydisc():
    U = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    R = realization_from_unitary(U, 2, 2, 1)
    assert R.unitarity_residual() == 0
    z = np.array([0.4 - 0.1j, 0.7j])
    assert transfer_eval(R, PolydiscDiag(2), z) == pytest.approx(z[0], abs=1e-15)


def test_transfer_eval_at_delta_zero_is_D(rng):
    R = random_realization(1, 3, 2, rng)
    assert transfer_eval(R, BallRow(3), [0, 0, 0]) == R.D


def test_transfer_eval_constant_unimodular(rng):
    A = random_unitary(4, rng)
    U = np.zeros((5, 5), dtype=complex)
    U[:4, :4] = A
    U[4, 4] = np.exp(0.3j)
    R = realization_from_unitary(U, 2, 2, 2)
    for _ in range(5):
        z = sample_interior(PolydiscDiag(2), rng)
        assert transfer_eval(R, PolydiscDiag(2), z) == pytest.approx(np.exp(0.3j), abs=1e-15)


@pytest.mark.parametrize("s, r, e", [(1, 1, 1), (2, 2, 3), (1, 3, 2), (3, 2, 1)])
def test_random_realization_unitary(rng, s, r, e):
    R = random_realization(s, r, e, rng)
    k = max(s, r)
    assert R.U.shape == (e * k + 1, e * k + 1)
    assert R.unitarity_residual() <= 1e-12
    assert (R.pad_from is not None) == (s != r)


def test_random_realization_policy(rng):
    with pytest.raises(DimPolicyError):
        random_realization(1, 2, 1, rng, pad=False)
    with pytest.raises(DimPolicyError):
        random_realization(1, 1, 0, rng)
    R = random_realization(2, 2, 1, rng)
    with pytest.raises(ShapeMismatch):
        transfer_eval(R, BallRow(2), [0.1, 0.1])


def test_realization_dict_round_trip(rng):
    R = random_realization(1, 2, 2, rng)
    back = TransferRealization.from_dict(R.to_dict())
    assert np.array_equal(back.U, R.U) and back.pad_from == R.pad_from


def test_padding_preserves_norm_and_distance(rng):
    for s, r in [(1, 3), (3, 1), (2, 4)]:
        for _ in range(20):
            A = rng.standard_normal((s, r)) + 1j * rng.standard_normal((s, r))
            B = rng.standard_normal((s, r)) + 1j * rng.standard_normal((s, r))
            A *= rng.uniform(0, 0.99) / op_norm(A)
            B *= rng.uniform(0, 0.99) / op_norm(B)
            k = max(s, r)
            assert op_norm(pad_square(A, k)) == pytest.approx(op_norm(A), abs=1e-14)
            assert d_cartan(pad_square(A, k), pad_square(B, k)) == pytest.approx(d_cartan(A, B), abs=1e-12)


@pytest.mark.parametrize("m", all_kinds(), ids=IDS)
def test_realization_von_neumann(m, rng):
    for _ in range(15):
        s, r = m.shape
        R = random_realization(s, r, int(rng.integers(1, 3)), rng)
        f = BoundRealization(R, m)
        t = sample_contractive_tuple(m, rng)
        assert von_neumann_norm(f, t) <= 1 + 1e-9


@pytest.mark.parametrize("m", all_kinds(), ids=IDS)
def test_transfer_tuple_route_matches_calculus(m, rng):
    s, r = m.shape
    R = random_realization(s, r, 2, rng)
    t = sample_contractive_tuple(m, rng)
    direct = apply_scalar(t, transfer_eval(R, m, t.z1), transfer_eval(R, m, t.z2))
    assert op_norm(transfer_eval_tuple(R, m, t) - direct) <= 1e-10


def test_maximum_modulus_interior(rng):
    for m in all_kinds():
        s, r = m.shape
        R = random_realization(s, r, 2, rng)
        vals = [abs(transfer_eval(R, m, sample_interior(m, rng))) for _ in range(40)]
        assert max(vals) < 1 - 1e-12
        assert max(vals) - min(vals) > 1e-6   # non-constant


def test_cartan_subordination(rng):
    m = CartanIdentity(2, 2)
    for _ in range(60):
        f = BoundRealization(random_realization(2, 2, 2, rng), m)
        z, w = sample_interior(m, rng), sample_interior(m, rng)
        res = schwarz_pick_residual(f, m, z, w)
        assert res >= -1e-9
        direct = d_cartan(delta_eval(m, z), delta_eval(m, w)) - d_disk(f(z), f(w))
        assert res == pytest.approx(direct, abs=1e-15)


# --- kernels -----------------------------------------------------------------

def test_kernel_tuple_gram():
    k = np.array([[1, 0.3 - 0.4j], [0.3 + 0.4j, 2]])
    t = kernel_tuple(KernelData([0.1], [0.2], k))
    # columns are unit-normalized and re-phased, so the normalized kernel
    # is reproduced up to a diagonal unitary: compare the modulus
    assert abs(np.vdot(t.v1, t.v2)) == pytest.approx(abs(k[0, 1]) / np.sqrt(2), abs=1e-14)
    assert np.linalg.norm(t.v1) == pytest.approx(1) and np.linalg.norm(t.v2) == pytest.approx(1)


def test_admissible_min_eig_identity_kernel():
    m = CartanIdentity(1, 2)
    z1, z2 = np.array([0.3, 0.4j]), np.array([-0.5, 0.1])
    got = admissible_min_eig(m, KernelData(z1, z2, np.eye(2)))
    assert got == pytest.approx(1 - max(np.linalg.norm(z1), np.linalg.norm(z2)) ** 2, abs=1e-14)
    got = admissible_min_eig(m, KernelData(z1, z1, np.eye(2)))
    assert got == pytest.approx(1 - np.linalg.norm(z1) ** 2, abs=1e-14)


def test_admissible_min_eig_negative_witness():
    m = PolydiscDiag(1)
    k = np.array([[1, 0.99], [0.99, 1]])
    assert admissible_min_eig(m, KernelData([0.9], [-0.9], k)) < 0


def test_kernel_errors():
    with pytest.raises(NotPSD):
        KernelData([0.1], [0.2], [[1, 2], [2, 1]])
    with pytest.raises(ShapeMismatch):
        KernelData([0.1], [0.2], np.eye(3))
    with pytest.raises(RankDeficient):
        kernel_tuple(KernelData([0.1], [0.2], np.ones((2, 2))), regularize=False)


def test_kernel_gram_psd_matches_von_neumann(rng):
    m = PolydiscDiag(1)
    for _ in range(40):
        f = BoundRealization(random_realization(1, 1, 2, rng), m)
        z1, z2 = sample_interior(m, rng), sample_interior(m, rng)
        c = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.random())
        k = np.array([[1, c], [np.conj(c), 1]])
        t = kernel_tuple(KernelData(z1, z2, k))
        gram_min = np.linalg.eigvalsh(kernel_gram(k, f(z1), f(z2)))[0]
        norm = von_neumann_norm(f, t)
        if gram_min > 1e-9:
            assert norm <= 1 + 1e-9
        if norm > 1 + 1e-9:
            assert gram_min < 0


# --- Schwarz-Pick residual -----------------------------------------------------

def test_schwarz_pick_residual_examples(rng):
    m = BallRow(2)
    z, w = sample_interior(m, rng), sample_interior(m, rng)
    assert abs(schwarz_pick_residual(extremal_function(m, z, w), m, z, w)) <= 1e-12
    assert schwarz_pick_residual(lambda _: 0.3j, m, z, w) == pytest.approx(d_delta(m, z, w), abs=0)

    p = PolydiscDiag(2)
    coord = lambda zz: zz[0]  # noqa: E731
    assert schwarz_pick_residual(coord, p, [0.5, 0.1], [-0.5, 0.1]) == pytest.approx(0, abs=1e-15)
    assert schwarz_pick_residual(coord, p, [0.1, 0.5], [0.1, -0.5]) > 0.5
    assert schwarz_pick_residual(coord, p, [0.2, 0.5], [-0.2, -0.5]) > 0


def test_schwarz_pick_modulus_violation():
    with pytest.raises(ModulusViolation):
        schwarz_pick_residual(lambda _: 1.0, PolydiscDiag(1), [0.1], [0.2])

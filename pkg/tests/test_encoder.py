from math import sqrt

import numpy as np
import pytest

from complex_ipea import circuit as qc
from complex_ipea import encoder as enc_mod
from complex_ipea import linalg, resonance
from complex_ipea.encoder import (ElementTooLargeError, Scaling, build_combination,
                                  build_formation, build_input_mod, build_ipea_iteration,
                                  build_universal, element_angles, scale_matrix)
from conftest import random_complex

s2 = 1 / sqrt(2)

# the explicit 8x8 combination and input-modification blocks for a 2x2 matrix
C_EXPECTED = s2 * np.array([
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0],
    [1, 0, -1, 0, 0, 0, 0, 0],
    [0, 1, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, -1, 0],
    [0, 0, 0, 0, 0, 1, 0, -1],
])
M_EXPECTED = s2 * np.array([
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1],
    [1, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, -1, 0],
    [0, 1, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, -1],
])


def formation_expected(u):
    f = np.zeros((8, 8))
    for ell, x in enumerate(np.asarray(u).reshape(-1)):
        c = sqrt(1 - x ** 2)
        f[2 * ell:2 * ell + 2, 2 * ell:2 * ell + 2] = [[x, c], [-c, x]]
    return f


def output_expected(u, a):
    (u11, u12), (u21, u22) = u
    a1, a2 = a
    c = lambda x: sqrt(1 - x ** 2)  # noqa: E731
    return 0.5 * np.array([
        a1 * u11 + a2 * u12, -a1 * c(u11) - a2 * c(u12),
        a1 * u11 - a2 * u12, -a1 * c(u11) + a2 * c(u12),
        a1 * u21 + a2 * u22, -a1 * c(u21) - a2 * c(u22),
        a1 * u21 - a2 * u22, -a1 * c(u21) + a2 * c(u22),
    ])


def formation_dense(scaled):
    ry, rz = build_formation(scaled)
    q = ry.target + 1
    return qc.expand(rz, q) @ qc.expand(ry, q)


def test_scale_identity_one_norm():
    scaled, mu = scale_matrix(np.eye(2), Scaling.ONE_NORM)
    assert mu == 1.0
    np.testing.assert_array_equal(scaled, np.eye(2))


def test_scale_reference_element(resonance_u):
    scaled, mu = scale_matrix(resonance_u, Scaling.ONE_NORM)
    assert scaled[0, 0] == pytest.approx(0.1469 + 0.6364j, abs=1e-4)
    assert mu == pytest.approx(1.7621, abs=5e-4)


def test_scale_max_abs(rng):
    for _ in range(20):
        u = random_complex(rng, 4, 4) * rng.uniform(0.01, 100)
        scaled, mu = scale_matrix(u, Scaling.MAX_ABS)
        big = np.abs(scaled).max()
        assert big <= 1.0 and big == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("kind", [Scaling.ONE_NORM, Scaling.INF_NORM, Scaling.MAX_ABS])
def test_scaled_elements_bounded(rng, kind):
    u = random_complex(rng, 4, 4) * 10
    scaled, mu = scale_matrix(u, kind)
    assert np.abs(scaled).max() <= 1
    np.testing.assert_allclose(scaled * mu, u)


def test_scale_none_rejects_large(resonance_u):
    with pytest.raises(ElementTooLargeError):
        scale_matrix(resonance_u, Scaling.NONE)


def test_element_angles_trivial():
    assert element_angles(1) == (0.0, 0.0)
    ty, tz = element_angles(0)
    assert ty == pytest.approx(np.pi) and tz == 0.0
    with pytest.raises(ElementTooLargeError):
        element_angles(1.1j)


def test_element_angles_reference(resonance_u):
    scaled, _ = scale_matrix(resonance_u, Scaling.ONE_NORM)
    ty, tz = element_angles(scaled[0, 0])
    # 2*acos(|0.14686 + 0.63641i|) and 2*arg(...) computed directly
    assert ty == pytest.approx(1.7182, abs=1e-3)
    assert tz == pytest.approx(2.6876, abs=1e-3)
    # averaging the raw per-pattern angles (identity on the phase-0 half) gives the
    # first decomposed Ry / Rz angles
    raw = [element_angles(u) for u in scaled.reshape(-1)]
    ys = [0.0] * 4 + [t[0] for t in raw]
    zs = [0.0] * 4 + [t[1] for t in raw]
    assert np.mean(ys) == pytest.approx(1.0521, abs=1e-3)
    assert np.mean(zs) == pytest.approx(-0.9634, abs=1e-3)


def test_element_angles_roundtrip(rng):
    for _ in range(200):
        u = complex(*rng.uniform(-1, 1, 2)) * rng.uniform(0, 1) / sqrt(2)
        if rng.uniform() < 0.2:
            u = u.real
        ty, tz = element_angles(u)
        m = qc.rz_matrix(tz) @ qc.ry_matrix(ty)
        assert abs(m[0, 0] - u) <= 1e-14


def test_formation_identity():
    np.testing.assert_allclose(formation_dense(np.ones((2, 2))), np.eye(8), atol=1e-15)


def test_formation_real_matches_expected(rng):
    for _ in range(20):
        u = rng.uniform(-1, 1, (2, 2))
        np.testing.assert_allclose(formation_dense(u), formation_expected(u), atol=1e-12)


def test_formation_leading_entries(rng):
    for n in (1, 2):
        u = random_complex(rng, 2 ** n, 2 ** n)
        u /= np.abs(u).max()
        f = formation_dense(u)
        for ell, x in enumerate(u.reshape(-1)):
            assert abs(f[2 * ell, 2 * ell] - x) <= 1e-12


def test_combination():
    np.testing.assert_allclose(qc.circuit_matrix(build_combination(1)), C_EXPECTED, atol=1e-15)
    c2 = qc.circuit_matrix(build_combination(2))
    h = np.array([[1, 1], [1, -1]]) / sqrt(2)
    expected = np.kron(np.kron(np.eye(4), np.kron(h, h)), np.eye(2))
    np.testing.assert_allclose(c2, expected, atol=1e-15)
    assert c2[0, 0] == pytest.approx(0.5)
    np.testing.assert_allclose(c2 @ c2.conj().T, np.eye(32), atol=1e-12)


def test_input_mod():
    m = qc.circuit_matrix(build_input_mod(1))
    np.testing.assert_allclose(m, M_EXPECTED, atol=1e-15)
    out = qc.run(build_input_mod(1), qc.embed([1, 0], 3))
    expected = np.zeros(8)
    expected[[0, 4]] = s2
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_input_mod_replicates(rng):
    n = 2
    alpha = random_complex(rng, 4)
    out = qc.run(build_input_mod(n), qc.embed(alpha, 2 * n + 1))
    # replica r, extra ancilla + main shifted up one bit: index r*8 + 2*i
    expected = np.zeros(32, dtype=complex)
    for r in range(4):
        for i in range(4):
            expected[r * 8 + 2 * i] = alpha[i] / 2
    np.testing.assert_allclose(out, expected, atol=1e-15)
    e1 = qc.run(build_input_mod(n), qc.embed([1, 0, 0, 0], 5))
    assert np.count_nonzero(np.abs(e1) > 1e-12) == 4
    np.testing.assert_allclose(e1[np.abs(e1) > 1e-12], 0.5)


def test_small_case_output_vector(rng):
    for _ in range(20):
        u = rng.uniform(-1, 1, (2, 2))
        a = rng.normal(size=2)
        a /= np.linalg.norm(a)
        enc = build_universal(u, Scaling.NONE)
        without_final_swap = qc.Circuit(3, enc.circuit.gates[:-1])
        out = qc.run(without_final_swap, qc.embed(a, 3))
        np.testing.assert_allclose(out, output_expected(u, a), atol=1e-12)


def test_universal_identity():
    enc = build_universal(np.eye(2), Scaling.ONE_NORM)
    out = qc.run(enc.circuit, qc.embed([1, 0], 3))
    np.testing.assert_allclose(out[:2], [0.5, 0], atol=1e-15)
    assert enc.kappa == 0.5 and enc.circuit.qubits == 3


def test_universal_embedding_random(rng):
    u = random_complex(rng, 4, 4)
    enc = build_universal(u, Scaling.ONE_NORM)
    a = random_complex(rng, 4)
    a /= np.linalg.norm(a)
    out = qc.run(enc.circuit, qc.embed(a, 5))
    np.testing.assert_allclose(out[:4], 0.25 * linalg.mat_vec(u / enc.mu, a), atol=1e-10)


@pytest.mark.parametrize("n", [1, 2])
def test_universal_circuit_unitary(rng, n):
    u = random_complex(rng, 2 ** n, 2 ** n)
    enc = build_universal(u, Scaling.MAX_ABS)
    g = qc.circuit_matrix(enc.circuit)
    np.testing.assert_allclose(g.conj().T @ g, np.eye(g.shape[0]), atol=1e-10)


def test_postselection_mass_unitary(rng):
    from conftest import random_unitary
    for n in (1, 2):
        u = random_unitary(rng, 2 ** n)
        lam, vecs = np.linalg.eig(u)
        enc = build_universal(u, Scaling.NONE)
        out = qc.run(enc.circuit, qc.embed(vecs[:, 0], 2 * n + 1))
        mass = qc.probabilities(out, tuple(range(n + 1, 2 * n + 1)),
                                {a: 0 for a in range(n + 1)}).mass
        assert mass == pytest.approx(enc.kappa ** 2, abs=1e-12)


def _iteration_masses(enc, psi, w):
    n = enc.n
    state = qc.run(build_ipea_iteration(enc, w), qc.embed(psi, 2 * n + 2))
    return qc.probabilities(state, (0,), {a: 0 for a in range(1, n + 2)})


def test_iteration_identity_bit_zero():
    enc = build_universal(np.eye(2), Scaling.NONE)
    for idx in range(2):
        marg = _iteration_masses(enc, np.eye(2)[idx], 0.0)
        np.testing.assert_allclose(marg.masses, [enc.kappa ** 2, 0], atol=1e-15)


def test_iteration_last_round_reference(resonance_u, resonance_pair):
    enc = build_universal(resonance_u, Scaling.ONE_NORM)
    w = -2 * np.pi * int("1100110100", 2) / 2 ** 11
    assert w == pytest.approx(-2.51572849, abs=1e-8)
    marg = _iteration_masses(enc, resonance_pair.vector, w)
    np.testing.assert_allclose(marg.probs, [0.0058, 0.9942], atol=2e-3)


def test_iteration_closed_form(rng):
    for n in (1, 2):
        dim = 2 ** n
        for _ in range(10):
            lam = rng.uniform(0, 1, dim) * np.exp(1j * rng.uniform(-np.pi, np.pi, dim))
            enc = build_universal(np.diag(lam), Scaling.NONE)
            w = rng.uniform(-np.pi, np.pi)
            i = int(rng.integers(dim))
            marg = _iteration_masses(enc, np.eye(dim)[i], w)
            z = np.exp(-1j * w) * lam[i]
            expected = [abs(enc.kappa / 2 * (1 + z)) ** 2, abs(enc.kappa / 2 * (1 - z)) ** 2]
            np.testing.assert_allclose(marg.masses, expected, atol=1e-10)


def test_iteration_width():
    enc = build_universal(np.eye(4), Scaling.NONE)
    assert build_ipea_iteration(enc, 0.3).qubits == 6
    assert enc_mod.ancilla_qubits(2, offset=1) == (1, 2, 3)


def test_dimension_validation():
    with pytest.raises(ValueError):
        build_universal(np.eye(3), Scaling.ONE_NORM)
    with pytest.raises(ValueError):
        build_universal(np.eye(1), Scaling.ONE_NORM)

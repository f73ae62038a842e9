import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from complex_ipea import linalg, resonance
from conftest import random_complex


def naive_matvec(m, v):
    out = [0j] * len(m)
    for i in range(len(m)):
        for j in range(len(v)):
            out[i] += m[i][j] * v[j]
    return np.array(out)


def test_mat_vec_identity():
    assert np.array_equal(linalg.mat_vec(np.eye(2), [1, 0]), [1, 0])


def test_mat_vec_against_naive(rng):
    m = random_complex(rng, 4, 4)
    v = random_complex(rng, 4)
    np.testing.assert_allclose(linalg.mat_vec(m, v), naive_matvec(m, v), atol=1e-14)


def test_mat_vec_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.mat_vec(np.eye(2), [1, 0, 0])


def test_reference_propagator_eigenvector():
    u = resonance.PROPAGATOR
    psi = resonance.EIGENVECTOR
    # given to four digits, so the residual is only small at that level
    assert np.linalg.norm(linalg.mat_vec(u, psi) - resonance.EIGENVALUE * psi) <= 1e-3


def test_norms():
    assert linalg.one_norm(np.eye(2)) == 1.0
    u = resonance.PROPAGATOR
    assert linalg.one_norm(u) == pytest.approx(1.7621, abs=5e-4)
    assert linalg.one_norm(u) == pytest.approx(
        max(abs(u[0, j]) + abs(u[1, j]) for j in range(2)))
    assert linalg.max_abs(u) == pytest.approx(abs(1.0594 + 0.7394j), abs=1e-12)
    assert linalg.max_abs(u) == pytest.approx(1.2919, abs=1e-3)
    m = np.array([[1, -2], [3j, 4]])
    assert linalg.inf_norm(m) == 7.0
    assert linalg.one_norm(m) == 6.0


def test_norms_reject_empty():
    with pytest.raises(ValueError):
        linalg.one_norm(np.zeros((0, 0)))


def test_mat_power_small_cases(rng):
    m = random_complex(rng, 2, 2)
    np.testing.assert_array_equal(linalg.mat_power(m, 1), m)
    expected = m.copy()
    for _ in range(7):
        expected = expected @ m
    np.testing.assert_allclose(linalg.mat_power(m, 8), expected, rtol=1e-12, atol=1e-12)


def test_mat_power_of_scaled_propagator_decays(resonance_u):
    s = resonance_u / linalg.one_norm(resonance_u)
    assert np.all(np.abs(linalg.mat_power(s, 2 ** 10)) < 1)


def test_mat_power_equals_squaring_chain_bitwise(rng):
    m = random_complex(rng, 3, 3) / 3
    chain = m
    for j in range(1, 8):
        chain = chain @ chain
        assert np.array_equal(linalg.mat_power(m, 2 ** j), chain)


def test_mat_power_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.mat_power(np.ones((2, 3)), 2)
    with pytest.raises(ValueError):
        linalg.mat_power(np.eye(2), 0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), p=st.integers(1, 20))
def test_one_norm_submultiplicative(seed, p):
    m = random_complex(np.random.default_rng(seed), 3, 3)
    assert linalg.one_norm(linalg.mat_power(m, p)) <= linalg.one_norm(m) ** p * (1 + 1e-12)


def test_expm_zero_is_identity():
    np.testing.assert_array_equal(linalg.expm(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal():
    a, b = 0.3 - 1.2j, -2.5 + 0.4j
    np.testing.assert_allclose(linalg.expm(np.diag([a, b])), np.diag(np.exp([a, b])),
                               rtol=1e-12, atol=1e-12)


def test_expm_reproduces_reference_propagator():
    u = linalg.expm(1j * resonance.HAMILTONIAN)
    np.testing.assert_allclose(u, resonance.PROPAGATOR, atol=1e-3)


def test_expm_against_scipy(rng):
    for scale in (0.1, 1.0, 5.0, 10.0):
        m = random_complex(rng, 4, 4)
        m *= scale / linalg.one_norm(m)
        expected = scipy.linalg.expm(m)
        got = linalg.expm(m)
        assert np.linalg.norm(got - expected) <= 1e-12 * np.linalg.norm(expected) * 10


def test_expm_inverse(rng):
    for _ in range(20):
        a = random_complex(rng, 4, 4)
        a *= 2 / linalg.one_norm(a)
        np.testing.assert_allclose(linalg.expm(a) @ linalg.expm(-a), np.eye(4), atol=1e-10)


def test_eig_dominant_diagonal():
    pair = linalg.eig_dominant(np.diag([2.0, 1.0]))
    assert pair.value == pytest.approx(2.0, abs=1e-10)
    assert abs(abs(pair.vector[0]) - 1) < 1e-9
    assert pair.residual <= 1e-10


def test_eig_dominant_resonance(resonance_pair):
    assert resonance_pair.value == pytest.approx(resonance.EIGENVALUE, abs=1e-3)
    v = resonance_pair.vector
    ref = resonance.EIGENVECTOR / np.linalg.norm(resonance.EIGENVECTOR)
    # equal up to a global phase
    assert abs(abs(np.vdot(ref, v)) - 1) < 1e-6
    assert np.linalg.norm(v) == pytest.approx(1, abs=1e-12)


def test_eig_dominant_triangular(rng):
    t = np.triu(random_complex(rng, 3, 3))
    np.fill_diagonal(t, [3.0 + 1j, 0.5, -1.0])
    pair = linalg.eig_dominant(t, seed=1)
    assert pair.value == pytest.approx(3.0 + 1j, abs=1e-8)


def test_eig_dominant_nonconvergence_reports_residual():
    # equal-magnitude eigenvalues 1 and -1: power iteration oscillates
    with pytest.raises(linalg.ConvergenceError) as info:
        linalg.eig_dominant(np.diag([1.0, -1.0]), max_iter=50)
    assert info.value.residual > 1e-10


def test_charpoly_matches_numpy(rng):
    m = random_complex(rng, 5, 5)
    np.testing.assert_allclose(linalg.charpoly(m), np.poly(m), rtol=1e-10, atol=1e-10)


def test_eig_all_small_diagonal():
    values = sorted(p.value.real for p in linalg.eig_all_small(np.diag([1.0, 2, 3, 4])))
    np.testing.assert_allclose(values, [1, 2, 3, 4], atol=1e-10)


def test_eig_all_small_hamiltonian():
    values = [p.value for p in linalg.eig_all_small(resonance.HAMILTONIAN)]
    assert min(abs(v - resonance.ENERGY) for v in values) <= 1e-3


def test_eig_all_small_companion():
    companion = np.array([[0, 1], [1, 0]], dtype=complex)  # z**2 - 1
    values = sorted(p.value.real for p in linalg.eig_all_small(companion))
    np.testing.assert_allclose(values, [-1, 1], atol=1e-12)


def test_eig_all_small_against_numpy(rng):
    for n in range(1, 9):
        m = random_complex(rng, n, n)
        got = sorted((p.value for p in linalg.eig_all_small(m)), key=lambda z: (z.real, z.imag))
        want = sorted(np.linalg.eigvals(m), key=lambda z: (z.real, z.imag))
        np.testing.assert_allclose(got, want, atol=1e-8)


def test_eig_all_small_pairs_invariants(rng):
    for _ in range(30):
        m = random_complex(rng, 4, 4)
        for p in linalg.eig_all_small(m):
            assert p.converged
            assert np.linalg.norm(m @ p.vector - p.value * p.vector) <= 1e-8
            assert np.linalg.norm(p.vector) == pytest.approx(1, abs=1e-12)


def test_eig_all_small_size_limit():
    with pytest.raises(ValueError):
        linalg.eig_all_small(np.eye(9))


def test_durand_kerner_nonconvergence():
    with pytest.raises(linalg.ConvergenceError):
        linalg.durand_kerner([1, 0, 0, -1], max_sweeps=1)

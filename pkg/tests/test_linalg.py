import numpy as np
import pytest

from ddbtomo.linalg import (
    eigh,
    frobenius_distance,
    haar_state,
    is_density,
    project_density,
    random_rank_r_dm,
    random_unitary,
    rng_from,
    simplex_project,
    uhlmann_fidelity,
)


def test_eigh_orders_ascending():
    a = np.diag([3.0, 1.0, 2.0]).astype(complex)
    w, v = eigh(a)
    assert np.allclose(w, [1.0, 2.0, 3.0])
    assert np.allclose(a @ v, v @ np.diag(w))


def test_eigh_rejects_non_hermitian():
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        eigh(a)


def test_simplex_project_known_case():
    got = simplex_project(np.array([0.7, 0.5, -0.2]))
    assert np.allclose(got, [0.6, 0.4, 0.0])
    assert got.sum() == pytest.approx(1.0)


def test_simplex_project_properties():
    rng = rng_from(0, "simplex")
    for _ in range(200):
        v = rng.normal(size=6)
        p = simplex_project(v)
        assert (p >= 0).all()
        assert p.sum() == pytest.approx(1.0)
        # projection: no feasible point is closer
        q = simplex_project(rng.normal(size=6))
        assert np.linalg.norm(v - p) <= np.linalg.norm(v - q) + 1e-12


def test_project_density_fixed_point():
    rho = random_rank_r_dm(5, 3, rng_from(1, "fix"))
    assert np.allclose(project_density(rho), rho, atol=1e-12)


def test_project_density_idempotent_and_optimal():
    rng = rng_from(2, "opt")
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = (g + g.conj().T) / 2
    p = project_density(a)
    assert is_density(p)
    assert np.allclose(project_density(p), p, atol=1e-12)
    # closer than 1000 random feasible candidates
    dist = np.linalg.norm(a - p)
    for i in range(1000):
        cand = random_rank_r_dm(4, 4, rng_from(2, "cand", i))
        assert dist <= np.linalg.norm(a - cand) + 1e-12


def test_frobenius_distance_known_value():
    a = np.eye(2, dtype=complex) / 2
    b = np.diag([1.0, 0.0]).astype(complex)
    assert frobenius_distance(a, b) == pytest.approx(1 / np.sqrt(2))


def test_uhlmann_fidelity_pure_states():
    rng = rng_from(3, "fid")
    for _ in range(20):
        psi = haar_state(4, rng)
        phi = haar_state(4, rng)
        rho = np.outer(psi, psi.conj())
        sig = np.outer(phi, phi.conj())
        want = abs(np.vdot(psi, phi)) ** 2
        # sqrt is not Lipschitz at 0, so rank-deficient inputs cost digits
        assert uhlmann_fidelity(rho, sig) == pytest.approx(want, abs=1e-6)
    assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-6)


def test_random_rank_r_dm_properties():
    for i in range(100):
        rho = random_rank_r_dm(8, 2, rng_from(4, "rank", i))
        w = np.linalg.eigvalsh(rho)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert (w > -1e-12).all()
        assert (w > 1e-9).sum() == 2


def test_random_unitary_is_unitary():
    for i in range(10):
        u = random_unitary(6, rng_from(5, "u", i))
        assert np.allclose(u.conj().T @ u, np.eye(6), atol=1e-10)


def test_haar_state_normalized():
    psi = haar_state(9, rng_from(6, "haar"))
    assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_rng_from_deterministic():
    a = rng_from(42, "x", 1).normal(size=3)
    b = rng_from(42, "x", 1).normal(size=3)
    c = rng_from(42, "x", 2).normal(size=3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    # passthrough for an existing generator
    g = rng_from(0)
    assert rng_from(g) is g
    with pytest.raises(ValueError):
        rng_from(g, "extra")


def test_is_density_flags_bad_matrices():
    assert is_density(np.eye(3, dtype=complex) / 3)
    assert not is_density(np.eye(3, dtype=complex))
    bad = np.diag([1.5, -0.5]).astype(complex)
    assert not is_density(bad)

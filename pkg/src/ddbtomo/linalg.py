"""Hermitian linear algebra and seeded randomness.

Eigensolves delegate to LAPACK through numpy after a Hermiticity check
and explicit symmetrization, so callers can rely on real ascending
eigenvalues.  All random objects draw from the counter-based Philox
generator seeded through ``rng_from``; the (seed, *path) derivation keeps
every stream independent and reproducible across platforms.
"""

from __future__ import annotations

import hashlib

import numpy as np

HERM_TOL = 1e-10


class NumericalError(RuntimeError):
    """Raised when a numeric routine cannot produce a trustworthy result."""


def _token_to_int(token) -> int:
    if isinstance(token, (int, np.integer)):
        return int(token) & 0xFFFFFFFFFFFFFFFF
    digest = hashlib.blake2b(str(token).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def rng_from(seed, *path) -> np.random.Generator:
    """Philox stream for a 64-bit seed plus a derivation path of ints or
    strings.  Same arguments, same stream, on every platform."""
    if isinstance(seed, np.random.Generator):
        if path:
            raise ValueError("derivation path needs an integer seed")
        return seed
    entropy = [_token_to_int(seed)] + [_token_to_int(t) for t in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T)) > HERM_TOL:
        raise ValueError("matrix is not Hermitian within tolerance 1e-10")
    return (a + a.conj().T) / 2


def eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector columns of a
    Hermitian matrix."""
    h = _check_hermitian(a)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolve failed: {exc}") from exc
    return w, v


def simplex_project(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def project_density(a: np.ndarray) -> np.ndarray:
    """Nearest density matrix in Frobenius norm: project the eigenvalues
    onto the simplex and recompose."""
    w, v = eigh(a)
    w = simplex_project(w)
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b), "fro"))


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, eigenvalues clipped at 0."""
    w, v = eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_rho @ np.asarray(sigma, dtype=complex) @ sqrt_rho
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return float(np.sum(np.sqrt(np.clip(ev, 0.0, None))) ** 2)


def is_density(rho: np.ndarray, atol: float = 1e-9) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        return False
    if abs(np.trace(rho).real - 1.0) > atol:
        return False
    return float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]) >= -atol


def haar_state(d: int, seed) -> np.ndarray:
    """Haar-random pure state vector of dimension d."""
    rng = rng_from(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_rank_r_dm(d: int, r: int, seed) -> np.ndarray:
    """Random rank-r density matrix G G^dagger / tr, G complex Gaussian d x r."""
    if not 1 <= r <= d:
        raise ValueError(f"rank must be in 1..{d}, got {r}")
    rng = rng_from(seed)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase convention fixed."""
    rng = rng_from(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))

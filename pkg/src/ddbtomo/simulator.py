"""Measurement simulation: Born probabilities, shot sampling, and the
reference states used by the six-dimensional benchmark."""

from __future__ import annotations

import json

import numpy as np

from .bases import DdbBasis
from .linalg import random_unitary, rng_from

NEG_CLAMP = 1e-12


def born_probs(rho: np.ndarray, basis: DdbBasis) -> np.ndarray:
    """Outcome probabilities <v|rho|v> for one basis.

    The kets have at most two components, so each probability costs four
    matrix lookups.  Tiny negative values from round-off are clamped.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(f"state shape {rho.shape} does not match dim {basis.dim}")
    p = np.empty(len(basis.vectors))
    for m, ket in enumerate(basis.vectors):
        items = ket.amplitude_items()
        acc = 0.0 + 0.0j
        for a, alpha in items:
            for b, beta in items:
                acc += np.conj(alpha) * beta * rho[a, b]
        val = acc.real
        if val < 0.0:
            if val < -NEG_CLAMP:
                raise ValueError(f"probability {val} below clamp; state is not physical")
            val = 0.0
        p[m] = val
    return p


def sample_counts(probs: np.ndarray, shots: int, seed) -> np.ndarray:
    """Multinomial counts drawn by inverse transform from a seeded Philox
    stream; identical arguments reproduce identical counts."""
    probs = np.asarray(probs, dtype=float)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if np.any(probs < 0.0):
        raise ValueError("negative probability")
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = rng_from(seed).random(shots)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=len(probs)).astype(np.int64)


def estimate_probs(counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(counts)
    shots = counts.sum()
    if shots < 1:
        raise ValueError("no shots recorded")
    return counts / float(shots)


def perturbed_probs(
    rho: np.ndarray,
    basis: DdbBasis,
    eps: float,
    mode: str = "averaged",
    seed=None,
) -> np.ndarray:
    """Probabilities under measurement vectors misaligned by strength eps.

    Each ideal ket |v> is replaced by |v> + eps|e> with |e> Haar random.
    The default "averaged" mode returns the closed-form mean over |e>,
        p / (1 + eps^2) + (eps^2 / (1 + eps^2)) / d,
    which is what the error-sweep analysis uses.  Mode "sampled" draws
    one concrete |e> per outcome and renormalizes; it exists only for
    illustration.
    """
    if eps < 0:
        raise ValueError(f"perturbation strength must be >= 0, got {eps}")
    p = born_probs(rho, basis)
    w = eps * eps / (1.0 + eps * eps)
    if mode == "averaged":
        return (1.0 - w) * p + w / basis.dim
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng_from(0 if seed is None else seed, "perturb", basis.label)
    rho = np.asarray(rho, dtype=complex)
    out = np.empty_like(p)
    for m, ket in enumerate(basis.vectors):
        e = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        e /= np.linalg.norm(e)
        v = ket.dense() + eps * e
        out[m] = max((v.conj() @ rho @ v).real / (1.0 + eps * eps), 0.0)
    return out / out.sum()


def benchmark_state(kind: str, seed=0) -> np.ndarray:
    """The four six-dimensional reference states of the qubit-qutrit
    benchmark; index convention l = 3a + b for qubit a, qutrit b.

    "mixed" is I/6, "balanced" the uniform all-ones projector-like state
    with every entry 1/6, "separable" a random local rotation of |0>, and
    "entangled" a random local rotation of (|1>+|2>+|3>+|5>)/2, whose
    qubit-qutrit coefficient matrix has rank 2.
    """
    if kind == "mixed":
        return np.eye(6, dtype=complex) / 6.0
    if kind == "balanced":
        return np.full((6, 6), 1.0 / 6.0, dtype=complex)
    if kind not in ("separable", "entangled"):
        raise ValueError(f"unknown benchmark state {kind!r}")
    u = np.kron(random_unitary(2, rng_from(seed, "u2")), random_unitary(3, rng_from(seed, "u3")))
    psi = np.zeros(6, dtype=complex)
    if kind == "separable":
        psi[0] = 1.0
    else:
        psi[[1, 2, 3, 5]] = 0.5
    psi = u @ psi
    return np.outer(psi, psi.conj())


def counts_to_dict(dim: int, shots: int, records: list[tuple[str, np.ndarray]]) -> dict:
    return {
        "dim": dim,
        "shots": shots,
        "records": [
            {"basis": label, "counts": [int(c) for c in counts]}
            for label, counts in records
        ],
    }


def counts_from_dict(obj: dict) -> tuple[int, int, list[tuple[str, np.ndarray]]]:
    records = [
        (rec["basis"], np.asarray(rec["counts"], dtype=np.int64))
        for rec in obj["records"]
    ]
    return int(obj["dim"]), int(obj["shots"]), records


def write_counts(path: str, dim: int, shots: int, records) -> None:
    with open(path, "w") as fh:
        json.dump(counts_to_dict(dim, shots, records), fh)


def read_counts(path: str):
    with open(path) as fh:
        return counts_from_dict(json.load(fh))

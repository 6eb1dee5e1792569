"""State reconstruction from dense-dual-basis probabilities.

With s = rho_jj + rho_kk, the two pair probabilities invert in closed
form:

    p(phi+) = s/2 + Re rho_jk      p(psi+) = s/2 - Im rho_jk

so rho_jk = (p_phi - i p_psi) - (1 - i)/2 * s.  ``direct_full`` applies
this to a complete family, ``band_from_family`` restricts it to entries
|j - k| <= r, and ``rank_r_reconstruct`` completes a band to a density
matrix by alternating projections.  ``refine_sdp`` solves the physical
least-squares fit by projected gradient descent, and
``pauli_cs_baseline`` is the nuclear-norm compressed-sensing comparison
point over random Pauli expectations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bases import basis_unitary, family
from .linalg import project_density, rng_from
from .partitions import construct_partitions, select_band_partitions
from .simulator import sample_counts

ZERO_DIAG_TOL = 1e-10
SINGULAR_TOL = 1e-8


@dataclass
class ReconstructionReport:
    estimate: np.ndarray
    method: str
    iterations: int = 0
    residual: float = 0.0
    singular_flags: tuple[int, ...] = ()
    adaptive_removed: tuple[int, ...] = ()


@dataclass
class BandData:
    """Estimated entries rho_jk for |j - k| <= r, stored with j <= k."""

    dim: int
    r: int
    entries: dict[tuple[int, int], complex]

    def __post_init__(self):
        for (j, k) in self.entries:
            if not (0 <= j <= k < self.dim and k - j <= self.r):
                raise ValueError(f"entry ({j}, {k}) outside band {self.r}")

    def diagonal(self) -> np.ndarray:
        return np.array([self.entries[(l, l)].real for l in range(self.dim)])


def element_direct(
    p_phi: float,
    p_psi: float,
    rho_jj: float,
    rho_kk: float,
    phi_sign: int = 1,
    psi_sign: int = 1,
) -> complex:
    """Off-diagonal entry from one pair probability of each flavor.

    Defaults take the phi+ and psi+ outcomes; pass sign -1 to use the
    minus outcome of either flavor instead.
    """
    s = rho_jj + rho_kk
    re = phi_sign * (p_phi - 0.5 * s)
    im = -psi_sign * (p_psi - 0.5 * s)
    return complex(re, im)


def _get_probs(probs: Mapping[str, np.ndarray], label: str, d: int) -> np.ndarray:
    try:
        p = np.asarray(probs[label], dtype=float)
    except KeyError:
        raise ValueError(f"missing probabilities for basis {label}") from None
    if p.shape != (d,):
        raise ValueError(f"basis {label}: expected {d} outcomes, got shape {p.shape}")
    return p


def _diagonal_from_probs(probs: Mapping[str, np.ndarray], d: int) -> np.ndarray:
    ps = construct_partitions(d)
    if d % 2 == 0:
        return _get_probs(probs, "B0", d)
    diag = np.empty(d)
    for t, part in enumerate(ps.partitions, start=1):
        c = part.singletons[0]
        diag[c] = _get_probs(probs, f"B{t}", d)[2 * len(part.pairs)]
    return diag


def direct_full(
    probs: Mapping[str, np.ndarray], d: int, project: bool = False
) -> ReconstructionReport:
    """Closed-form reconstruction from a complete family of outcome
    probabilities; exact when the probabilities are exact."""
    ps = construct_partitions(d)
    diag = _diagonal_from_probs(probs, d)
    rho = np.zeros((d, d), dtype=complex)
    rho[np.diag_indices(d)] = diag
    for t, part in enumerate(ps.partitions, start=1):
        pb = _get_probs(probs, f"B{t}", d)
        pc = _get_probs(probs, f"C{t}", d)
        for pos, (j, k) in enumerate(part.pairs):
            val = element_direct(pb[2 * pos], pc[2 * pos], diag[j], diag[k])
            rho[j, k] = val
            rho[k, j] = val.conjugate()
    if project:
        rho = project_density(rho)
    return ReconstructionReport(estimate=rho, method="direct")


def refine_sdp(
    probs: Mapping[str, np.ndarray],
    d: int,
    x0: np.ndarray | None = None,
    step: float | None = None,
    tol: float = 1e-16,
    max_iter: int = 2000,
) -> ReconstructionReport:
    """Physical least-squares fit by projected gradient descent.

    Minimizes the squared residual over all provided bases (any subset
    of the family works) with a density-matrix projection after every
    step.  Stops when the residual change drops below tol.
    """
    fam = family(d)
    known = set(fam.labels())
    for label in probs:
        if label not in known:
            raise ValueError(f"unknown basis label {label!r} for dimension {d}")
    pairs = [
        (basis_unitary(b), _get_probs(probs, b.label, d))
        for b in fam.bases
        if b.label in probs
    ]
    if not pairs:
        raise ValueError("no basis probabilities supplied")
    if step is None:
        step = 1.0 / (2.0 * len(pairs))
    x = np.eye(d, dtype=complex) / d if x0 is None else np.asarray(x0, dtype=complex)
    f_prev = np.inf
    it = 0
    f = 0.0
    for it in range(1, max_iter + 1):
        grad = np.zeros((d, d), dtype=complex)
        f = 0.0
        for u, p in pairs:
            outcome = np.einsum("im,ij,jm->m", u.conj(), x, u).real
            err = outcome - p
            f += float(err @ err)
            grad += (u * (2.0 * err)) @ u.conj().T
        if abs(f_prev - f) < tol:
            break
        f_prev = f
        x = project_density(x - step * grad)
    return ReconstructionReport(estimate=x, method="sdp", iterations=it, residual=f)


def band_from_family(
    probs: Mapping[str, np.ndarray], d: int, r: int
) -> BandData:
    """Band entries |j - k| <= r extracted from the band-selected bases.

    Needs B{t}/C{t} for every selected partition, plus the diagonal data
    (B0 for even d; for odd d the plus-type basis of every partition,
    since each index reads out as a singleton exactly once).
    """
    ps = construct_partitions(d)
    selected = select_band_partitions(ps, r)
    diag = _diagonal_from_probs(probs, d)
    entries: dict[tuple[int, int], complex] = {
        (l, l): complex(diag[l]) for l in range(d)
    }
    for t in selected:
        part = ps.partitions[t - 1]
        pb = _get_probs(probs, f"B{t}", d)
        pc = _get_probs(probs, f"C{t}", d)
        for pos, (j, k) in enumerate(part.pairs):
            if k - j <= r:
                entries[(j, k)] = element_direct(
                    pb[2 * pos], pc[2 * pos], diag[j], diag[k]
                )
    return BandData(dim=d, r=r, entries=entries)


def singular_flags(band: BandData) -> tuple[int, ...]:
    """Indices k whose r x r principal submatrix of the band data is
    numerically singular; these mark states near the failure set of
    band-limited reconstruction."""
    d, r = band.dim, band.r
    flags = []
    for k in range(d - r + 1):
        a = np.zeros((r, r), dtype=complex)
        for i in range(r):
            for j in range(i, r):
                v = band.entries.get((k + i, k + j), 0.0)
                a[i, j] = v
                a[j, i] = np.conjugate(v)
        if min(abs(np.linalg.eigvalsh(a))) < SINGULAR_TOL:
            flags.append(k)
    return tuple(flags)


def _complete_band(
    d: int, r: int, entries: Mapping[tuple[int, int], complex]
) -> np.ndarray:
    """Algebraic completion of band data under the rank-r hypothesis.

    Every (r+1) x (r+1) minor of a rank-r matrix vanishes, so with
    S = {j+1, ..., j+r} the entry at distance k - j > r satisfies
    rho_jk = rho_jS (rho_SS)^-1 rho_Sk; filling by increasing distance
    keeps the right side known.  Least-squares solves keep degenerate
    windows (the flagged failure set) from blowing up.
    """
    x = np.zeros((d, d), dtype=complex)
    for (j, k), v in entries.items():
        x[j, k] = v
        x[k, j] = np.conjugate(v)
    for dist in range(r + 1, d):
        for j in range(d - dist):
            k = j + dist
            s = slice(j + 1, j + 1 + r)
            z = np.linalg.lstsq(x[s, s], x[s, k], rcond=None)[0]
            x[j, k] = x[j, s] @ z
            x[k, j] = np.conjugate(x[j, k])
    return x


def _pocs(
    d: int,
    entries: dict[tuple[int, int], complex],
    tol: float,
    max_iter: int,
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, int, float]:
    rows = np.array([j for (j, _) in entries], dtype=int)
    cols = np.array([k for (_, k) in entries], dtype=int)
    vals = np.array([entries[(j, k)] for (j, k) in zip(rows, cols)], dtype=complex)

    def overwrite(m: np.ndarray) -> np.ndarray:
        m[rows, cols] = vals
        m[cols, rows] = vals.conj()
        return m

    x = overwrite(np.zeros((d, d), dtype=complex)) if start is None else start
    x = project_density(x)
    it = 0
    for it in range(1, max_iter + 1):
        y = overwrite(x.copy())
        x_next = project_density(y)
        delta = np.linalg.norm(x_next - x, "fro")
        x = x_next
        if delta < tol:
            break
    gap = float(np.linalg.norm(overwrite(x.copy()) - x, "fro"))
    return x, it, gap


def rank_r_reconstruct(
    band: BandData, tol: float = 1e-9, max_iter: int = 5000
) -> ReconstructionReport:
    """Complete band data to a density matrix by alternating projections
    between the data-consistent affine set and the density-matrix set,
    warm-started at the algebraic rank-r completion of the band (plain
    alternating projections stall for thousands of iterations because
    the two sets meet tangentially at the unique solution).

    Diagonal entries below 1e-10 trigger the adaptive path: those rows
    and columns are erased, the reduced problem is solved on the rest,
    and the estimate is embedded back.  Near-singular principal
    submatrices are flagged, not repaired; flags mean the band may not
    determine the state.
    """
    d = band.dim
    flags = singular_flags(band)
    diag = band.diagonal()
    warm = _complete_band(d, band.r, band.entries)
    removed = tuple(int(l) for l in range(d) if diag[l] < ZERO_DIAG_TOL)
    if removed and len(removed) < d:
        keep = [l for l in range(d) if l not in removed]
        pos = {l: i for i, l in enumerate(keep)}
        reduced = {
            (pos[j], pos[k]): v
            for (j, k), v in band.entries.items()
            if j in pos and k in pos
        }
        est_small, it, gap = _pocs(
            len(keep), reduced, tol, max_iter, start=warm[np.ix_(keep, keep)]
        )
        est = np.zeros((d, d), dtype=complex)
        est[np.ix_(keep, keep)] = est_small
    else:
        est, it, gap = _pocs(d, band.entries, tol, max_iter, start=warm)
    return ReconstructionReport(
        estimate=est,
        method="rankr",
        iterations=it,
        residual=gap,
        singular_flags=flags,
        adaptive_removed=removed,
    )


_PAULI_1Q = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli_string(label: int, n: int) -> np.ndarray:
    """Tensor product of single-qubit Paulis from the base-4 digits of
    label (most significant digit acts on qubit 0)."""
    mat = np.ones((1, 1), dtype=complex)
    for pos in reversed(range(n)):
        mat = np.kron(mat, _PAULI_1Q[(label >> (2 * pos)) & 3])
    return mat


def pauli_cs_baseline(
    rho: np.ndarray,
    m: int,
    seed,
    shots: int | None = None,
    max_iter: int = 1500,
    tol: float = 1e-14,
) -> ReconstructionReport:
    """Compressed-sensing comparison point: m random non-identity Pauli
    expectations, nuclear-norm proximal gradient with a geometrically
    decaying threshold, final density projection.

    Expectations are exact traces by default; with ``shots`` they are
    estimated from sampled two-outcome counts.  m >= 4^n - 1 uses every
    non-identity string.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    n = d.bit_length() - 1
    if 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    if m < 1:
        raise ValueError(f"need at least one Pauli string, got m={m}")
    rng = rng_from(seed, "pauli-cs")
    m_eff = min(m, 4**n - 1)
    labels = np.sort(rng.choice(4**n - 1, size=m_eff, replace=False) + 1)
    mats = np.stack([pauli_string(int(l), n) for l in labels])
    e = np.einsum("ij,kji->k", rho, mats).real
    if shots is not None:
        sampled = np.empty_like(e)
        for i, label in enumerate(labels):
            p_plus = min(max((1.0 + e[i]) / 2.0, 0.0), 1.0)
            counts = sample_counts(
                np.array([p_plus, 1.0 - p_plus]), shots, rng_from(seed, "pauli-cs", int(label))
            )
            sampled[i] = (counts[0] - counts[1]) / shots
        e = sampled

    step = 1.0 / (2.0 * d)
    lam = 0.1 * float(np.max(np.abs(e))) if np.any(e) else 1e-3
    lam_floor = 1e-12
    x = np.eye(d, dtype=complex) / d
    f_prev = np.inf
    it = 0
    f = 0.0
    for it in range(1, max_iter + 1):
        vals = np.einsum("ij,kji->k", x, mats).real
        err = vals - e
        f = float(err @ err)
        if lam <= lam_floor and abs(f_prev - f) < tol:
            break
        f_prev = f
        grad = np.einsum("k,kij->ij", 2.0 * err, mats)
        y = x - step * grad
        w, v = np.linalg.eigh((y + y.conj().T) / 2)
        if lam > lam_floor:
            w = np.sign(w) * np.maximum(np.abs(w) - step * lam, 0.0)
        x = (v * w) @ v.conj().T
        lam = max(lam * 0.95, lam_floor)
    x = project_density(x)
    return ReconstructionReport(estimate=x, method="paulics", iterations=it, residual=f)


def report_to_dict(report: ReconstructionReport) -> dict:
    est = report.estimate
    return {
        "schema": 1,
        "method": report.method,
        "dim": int(est.shape[0]),
        "iterations": int(report.iterations),
        "residual": float(report.residual),
        "singular_flags": [int(k) for k in report.singular_flags],
        "adaptive_removed": [int(l) for l in report.adaptive_removed],
        "estimate": [
            [[float(v.real), float(v.imag)] for v in row] for row in est
        ],
    }


def report_from_dict(obj: dict) -> ReconstructionReport:
    est = np.array(
        [[complex(re, im) for re, im in row] for row in obj["estimate"]]
    )
    return ReconstructionReport(
        estimate=est,
        method=obj["method"],
        iterations=int(obj["iterations"]),
        residual=float(obj["residual"]),
        singular_flags=tuple(obj["singular_flags"]),
        adaptive_removed=tuple(obj["adaptive_removed"]),
    )


def write_report(report: ReconstructionReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh)

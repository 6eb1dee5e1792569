"""Sweep drivers shared by the command line and the acceptance suite.

Every driver returns plain row dictionaries with the fixed CSV column
set, so a run is fully described by its delimited output.  All
randomness derives from one master seed through ``rng_from`` paths;
repeating a driver call with the same arguments reproduces every byte.
Shot sampling derives its stream from (seed, "counts", state tag,
trial, basis label) and not from the shot count, so sweep points share
underlying randomness (common random numbers).
"""

from __future__ import annotations

import numpy as np

from .bases import family
from .linalg import (
    frobenius_distance,
    random_rank_r_dm,
    rng_from,
    uhlmann_fidelity,
)
from .partitions import construct_partitions, select_band_partitions
from .reconstruct import (
    ReconstructionReport,
    band_from_family,
    direct_full,
    pauli_cs_baseline,
    rank_r_reconstruct,
    refine_sdp,
)
from .simulator import (
    benchmark_state,
    born_probs,
    estimate_probs,
    perturbed_probs,
    sample_counts,
)

COLUMNS = (
    "d",
    "r",
    "method",
    "shots",
    "trial",
    "frobenius",
    "fidelity",
    "iters",
    "flags",
    "settings",
    "projectors",
    "state",
)

SUMMARY_COLUMNS = (
    "d",
    "r",
    "method",
    "shots",
    "settings",
    "projectors",
    "state",
    "trials",
    "frobenius_mean",
    "frobenius_std",
    "fidelity_mean",
    "fidelity_std",
)

BENCHMARK_STATES = ("mixed", "balanced", "separable", "entangled")


def family_probs(rho: np.ndarray, fam) -> dict[str, np.ndarray]:
    return {b.label: born_probs(rho, b) for b in fam.bases}


def sampled_probs(rho, fam, shots: int, seed, *path) -> dict[str, np.ndarray]:
    out = {}
    for b in fam.bases:
        counts = sample_counts(
            born_probs(rho, b), shots, rng_from(seed, "counts", *path, b.label)
        )
        out[b.label] = estimate_probs(counts)
    return out


def band_subset_labels(d: int, level: int | None) -> list[str]:
    """Basis labels of the band-level subset: the diagonal data plus
    both flavors of every partition selected for band width ``level``
    (None or 0 selects the full family)."""
    ps = construct_partitions(d)
    if level:
        selected = select_band_partitions(ps, level)
    else:
        selected = list(range(1, len(ps.partitions) + 1))
    labels = ["B0"] if d % 2 == 0 else []
    for t in selected:
        labels += [f"B{t}", f"C{t}"]
    return labels


def _row(d, r, method, shots, trial, truth, report: ReconstructionReport,
         settings, projectors, state=""):
    return {
        "d": d,
        "r": r,
        "method": method,
        "shots": 0 if shots is None else shots,
        "trial": trial,
        "frobenius": frobenius_distance(report.estimate, truth),
        "fidelity": uhlmann_fidelity(truth, report.estimate),
        "iters": report.iterations,
        "flags": ";".join(str(k) for k in report.singular_flags),
        "settings": settings,
        "projectors": projectors,
        "state": state,
    }


def run_settings_sweep(
    d: int,
    ranks=(2, 4, 8, 16),
    trials: int = 20,
    seed: int = 0,
    levels=(1, 2, 4, 8, 0),
    max_iter: int = 1200,
) -> list[dict]:
    """Physical least-squares reconstruction from nested band-level
    subsets of the family, exact probabilities; the settings column
    counts the bases used."""
    fam = family(d)
    rows = []
    for r in ranks:
        for trial in range(trials):
            rho = random_rank_r_dm(d, r, rng_from(seed, "state", r, trial))
            probs = family_probs(rho, fam)
            for level in levels:
                labels = band_subset_labels(d, level)
                sub = {lab: probs[lab] for lab in labels}
                rep = refine_sdp(sub, d, max_iter=max_iter)
                rows.append(
                    _row(d, r, "sdp", None, trial, rho, rep,
                         settings=len(labels), projectors=len(labels) * d)
                )
    return rows


def run_method_comparison(
    dims=(4, 8, 16),
    rank: int = 2,
    trials: int = 20,
    seed: int = 0,
) -> list[dict]:
    """Band reconstruction against the Pauli compressed-sensing baseline
    at m = rank * n strings, exact expectation values."""
    rows = []
    for d in dims:
        n = d.bit_length() - 1
        fam = family(d)
        n_band = len(band_subset_labels(d, rank))
        for trial in range(trials):
            rho = random_rank_r_dm(d, rank, rng_from(seed, "cmp-state", d, trial))
            probs = family_probs(rho, fam)
            band = band_from_family(probs, d, rank)
            rep = rank_r_reconstruct(band)
            rows.append(
                _row(d, rank, "rankr", None, trial, rho, rep,
                     settings=n_band, projectors=n_band * d)
            )
            m = rank * n
            rep = pauli_cs_baseline(rho, m, (seed, "cmp-pauli", d, trial))
            rows.append(
                _row(d, rank, "paulics", None, trial, rho, rep,
                     settings=m, projectors=2 * m)
            )
    return rows


def run_shots_sweep(
    d: int,
    states=("mixed",),
    methods=("direct", "sdp"),
    shots_list=(100, 800, 6400),
    trials: int = 20,
    seed: int = 0,
    rank: int | None = None,
    band_r: int | None = None,
    cs_m: int | None = None,
    sdp_max_iter: int = 2000,
) -> list[dict]:
    """Reconstruction error versus shot budget.

    states are benchmark names for d = 6 or "random" (rank ``rank``,
    drawn per trial).  A shots entry of 0 or None means exact
    probabilities.  Methods at one sweep point share the same counts.
    """
    fam = family(d)
    rows = []
    for kind in states:
        for trial in range(trials):
            if kind == "random":
                r = rank if rank is not None else d
                rho = random_rank_r_dm(d, r, rng_from(seed, "state", trial))
            else:
                r = 0
                rho = benchmark_state(kind, seed)
            for shots in shots_list:
                if shots:
                    probs = sampled_probs(rho, fam, shots, seed, kind, trial)
                else:
                    probs = family_probs(rho, fam)
                for method in methods:
                    settings = len(fam.bases)
                    projectors = sum(len(b.vectors) for b in fam.bases)
                    if method == "direct":
                        rep = direct_full(probs, d)
                    elif method == "sdp":
                        rep = refine_sdp(probs, d, max_iter=sdp_max_iter)
                    elif method == "rankr":
                        rb = band_r if band_r is not None else (rank or d - 1)
                        labels = band_subset_labels(d, rb)
                        rep = rank_r_reconstruct(band_from_family(probs, d, rb))
                        settings = len(labels)
                        projectors = settings * d
                    elif method == "paulics":
                        n = d.bit_length() - 1
                        if 2**n != d:
                            raise ValueError("paulics needs a power-of-two dimension")
                        m = cs_m if cs_m is not None else max(2 * n, 1)
                        rep = pauli_cs_baseline(
                            rho, m, (seed, "pauli", kind, trial),
                            shots=shots if shots else None,
                        )
                        settings = m
                        projectors = 2 * m
                    else:
                        raise ValueError(f"unknown method {method!r}")
                    rows.append(
                        _row(d, r, method, shots, trial, rho, rep,
                             settings=settings, projectors=projectors, state=kind)
                    )
    return rows


def run_band_trials(
    d: int, r: int, n_states: int, seed: int = 0,
    tol: float = 1e-9, max_iter: int = 5000,
) -> list[tuple[float, ReconstructionReport]]:
    """Band reconstruction of random rank-r states from exact band data;
    returns (frobenius error, report) per state."""
    fam = family(d)
    out = []
    for i in range(n_states):
        rho = random_rank_r_dm(d, r, rng_from(seed, "band", d, r, i))
        band = band_from_family(family_probs(rho, fam), d, r)
        rep = rank_r_reconstruct(band, tol=tol, max_iter=max_iter)
        out.append((frobenius_distance(rep.estimate, rho), rep))
    return out


def run_error_sweep(
    d: int, eps_list, seed: int = 0, state: np.ndarray | None = None
) -> tuple[list[dict], float | None]:
    """Squared Frobenius error of direct reconstruction under averaged
    measurement misalignment, plus the fitted log-log slope."""
    fam = family(d)
    rho = state if state is not None else random_rank_r_dm(d, d, rng_from(seed, "error-state"))
    rows = []
    for eps in eps_list:
        probs = {b.label: perturbed_probs(rho, b, float(eps)) for b in fam.bases}
        est = direct_full(probs, d).estimate
        rows.append({"eps": float(eps), "frobenius_sq": frobenius_distance(est, rho) ** 2})
    slope = None
    if len(rows) >= 2 and all(r["frobenius_sq"] > 0 for r in rows):
        x = np.log([r["eps"] for r in rows])
        y = np.log([r["frobenius_sq"] for r in rows])
        slope = float(np.polyfit(x, y, 1)[0])
    return rows, slope


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, columns=COLUMNS) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def summarize(rows, keys=("d", "r", "method", "shots", "settings", "projectors", "state")):
    """Mean and population standard deviation per group, in first-seen
    group order."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault(tuple(row[k] for k in keys), []).append(row)
    out = []
    for key, members in groups.items():
        fro = np.array([m["frobenius"] for m in members])
        fid = np.array([m["fidelity"] for m in members])
        rec = dict(zip(keys, key))
        rec.update(
            trials=len(members),
            frobenius_mean=float(fro.mean()),
            frobenius_std=float(fro.std()),
            fidelity_mean=float(fid.mean()),
            fidelity_std=float(fid.std()),
        )
        out.append(rec)
    return out


def write_csv(rows, path, columns=COLUMNS) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows, columns))

"""Measurement eigenbases assembled from pair partitions.

For every pair (j, k) of a partition the plus-type basis holds the two
superpositions (|j> +- |k>)/sqrt(2) and the i-type basis holds
(|j> +- i|k>)/sqrt(2); an unpaired index contributes the computational
ket |c> itself.  Even dimensions additionally use the computational
basis, labeled B0.  Every amplitude is one of {1, -1, i, -i}/sqrt(2)
(or exactly 1 for computational kets), so the kets store the exact unit
factor and scale by a shared 1/sqrt(2) only when rendered dense.  That
keeps equality checks against synthesized circuits bitwise exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .partitions import Partition, PartitionSet, construct_partitions

INV_SQRT2 = 1.0 / math.sqrt(2.0)

_UNITS = (1, -1, 1j, -1j)


@dataclass(frozen=True)
class SparseKet:
    """One or two computational components with exact unit amplitudes.

    ``terms`` holds (index, unit) with unit in {1, -1, i, -i}; a single
    term means amplitude exactly 1, two terms mean unit/sqrt(2) each.
    """

    dim: int
    terms: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        if len(self.terms) not in (1, 2):
            raise ValueError("a sparse ket carries one or two terms")
        for idx, unit in self.terms:
            if not 0 <= idx < self.dim:
                raise ValueError(f"index {idx} outside dimension {self.dim}")
            if unit not in _UNITS:
                raise ValueError(f"amplitude unit {unit!r} not in {{1,-1,i,-i}}")

    @property
    def scale(self) -> float:
        return 1.0 if len(self.terms) == 1 else INV_SQRT2

    def amplitude_items(self) -> list[tuple[int, complex]]:
        s = self.scale
        return [(idx, unit * s) for idx, unit in self.terms]

    def dense(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        for idx, amp in self.amplitude_items():
            vec[idx] = amp
        return vec


@dataclass(frozen=True)
class DdbBasis:
    dim: int
    label: str
    vectors: tuple[SparseKet, ...]


@dataclass(frozen=True)
class DdbFamily:
    dim: int
    bases: tuple[DdbBasis, ...]
    partition_set: PartitionSet

    def __getitem__(self, label: str) -> DdbBasis:
        for b in self.bases:
            if b.label == label:
                return b
        raise KeyError(f"no basis {label!r} in the d={self.dim} family")

    def labels(self) -> list[str]:
        return [b.label for b in self.bases]


def basis_from_partition(
    dim: int, part: Partition, flavor: str, label: str
) -> DdbBasis:
    """Orthonormal basis of one partition.  flavor "plus" pairs with unit
    +-1, flavor "i" with +-i; singletons come after all pairs."""
    if flavor not in ("plus", "i"):
        raise ValueError(f"flavor must be 'plus' or 'i', got {flavor!r}")
    unit = 1 if flavor == "plus" else 1j
    vecs = []
    for (j, k) in part.pairs:
        vecs.append(SparseKet(dim, ((j, 1), (k, unit))))
        vecs.append(SparseKet(dim, ((j, 1), (k, -unit))))
    for c in sorted(part.singletons):
        vecs.append(SparseKet(dim, ((c, 1),)))
    return DdbBasis(dim, label, tuple(vecs))


def computational_basis(dim: int, label: str = "B0") -> DdbBasis:
    vecs = tuple(SparseKet(dim, ((l, 1),)) for l in range(dim))
    return DdbBasis(dim, label, vecs)


def family(d: int) -> DdbFamily:
    """The full measurement family: 2d-1 bases for even d (B0 plus both
    flavors per partition), 2d bases for odd d (no B0)."""
    ps = construct_partitions(d)
    bases = []
    if d % 2 == 0:
        bases.append(computational_basis(d))
    for t, part in enumerate(ps.partitions, start=1):
        bases.append(basis_from_partition(d, part, "plus", f"B{t}"))
        bases.append(basis_from_partition(d, part, "i", f"C{t}"))
    return DdbFamily(dim=d, bases=tuple(bases), partition_set=ps)


def locate(fam: DdbFamily, kind: str, j: int, k: int | None = None):
    """(label, outcome index) of one target vector in the family.

    kind "diag" finds |j> (B0 for even d, the singleton slot of the
    matching plus-type basis otherwise); "phi+"/"phi-" find
    (|j> +- |k>)/sqrt(2), "psi+"/"psi-" find (|j> +- i|k>)/sqrt(2).
    """
    d = fam.dim
    if kind == "diag":
        if not 0 <= j < d:
            raise ValueError(f"index {j} outside dimension {d}")
        if d % 2 == 0:
            return "B0", j
        for t, part in enumerate(fam.partition_set.partitions, start=1):
            if j in part.singletons:
                return f"B{t}", 2 * len(part.pairs) + sorted(part.singletons).index(j)
        raise ValueError(f"index {j} is never a singleton")  # unreachable after verify_cover
    if kind not in ("phi+", "phi-", "psi+", "psi-"):
        raise ValueError(f"unknown vector kind {kind!r}")
    if k is None:
        raise ValueError("pair vectors need both indices")
    if not 0 <= j < k < d:
        raise ValueError(f"need 0 <= j < k < d, got ({j}, {k})")
    for t, part in enumerate(fam.partition_set.partitions, start=1):
        for pos, pair in enumerate(part.pairs):
            if pair == (j, k):
                label = ("B" if kind.startswith("phi") else "C") + str(t)
                return label, 2 * pos + (0 if kind.endswith("+") else 1)
    raise ValueError(f"pair ({j}, {k}) not found")  # unreachable after verify_cover


def basis_unitary(basis: DdbBasis) -> np.ndarray:
    """d x d unitary whose column m is the m-th basis vector."""
    u = np.zeros((basis.dim, len(basis.vectors)), dtype=complex)
    for m, ket in enumerate(basis.vectors):
        u[:, m] = ket.dense()
    return u


def basis_to_dict(basis: DdbBasis) -> dict:
    """JSON form with amplitudes rendered as exact decimal strings."""
    return {
        "dim": basis.dim,
        "label": basis.label,
        "vectors": [
            [[idx, repr(amp.real), repr(amp.imag)] for idx, amp in ket.amplitude_items()]
            for ket in basis.vectors
        ],
    }


def basis_to_json(basis: DdbBasis, indent: int | None = None) -> str:
    return json.dumps(basis_to_dict(basis), indent=indent)

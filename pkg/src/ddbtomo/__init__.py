"""Tomography with dense dual bases: a family of 2d-1 (even d) or 2d
(odd d) product-free measurement bases that pins down every density
matrix entry, plus simulation, reconstruction, and circuit synthesis."""

from .bases import DdbBasis, DdbFamily, SparseKet, basis_unitary, family, locate
from .circuits import (
    Circuit,
    Gate,
    element_circuits,
    gate_count,
    power_shift_circuit,
    shift_circuit,
    synth_basis_circuit,
)
from .linalg import NumericalError, project_density, rng_from, uhlmann_fidelity
from .partitions import Partition, PartitionSet, construct_partitions, verify_cover
from .reconstruct import (
    BandData,
    ReconstructionReport,
    band_from_family,
    direct_full,
    rank_r_reconstruct,
    refine_sdp,
)
from .simulator import born_probs, perturbed_probs, sample_counts

__all__ = [
    "BandData",
    "Circuit",
    "DdbBasis",
    "DdbFamily",
    "Gate",
    "NumericalError",
    "Partition",
    "PartitionSet",
    "ReconstructionReport",
    "SparseKet",
    "band_from_family",
    "basis_unitary",
    "born_probs",
    "construct_partitions",
    "direct_full",
    "element_circuits",
    "family",
    "gate_count",
    "locate",
    "perturbed_probs",
    "power_shift_circuit",
    "project_density",
    "rank_r_reconstruct",
    "refine_sdp",
    "rng_from",
    "sample_counts",
    "shift_circuit",
    "synth_basis_circuit",
    "uhlmann_fidelity",
    "verify_cover",
]

__version__ = "0.1.0"

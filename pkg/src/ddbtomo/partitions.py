"""Pair partitions of the index set {0..d-1}.

A partition here is a perfect matching on the indices (plus one unpaired
index when d is odd).  ``construct_partitions`` builds d-1 matchings for
even d and d near-matchings for odd d such that every unordered pair
{j, k} appears in exactly one partition, i.e. the partitions form a
one-factorization of the complete graph K_d.  Each partition later turns
into two orthonormal measurement bases, so the family size directly
bounds the number of measurement settings.

The construction doubles up from dimension 2.  For even b with even half
h = b/2 the partitions of h are merged with a shifted copy of themselves
and complemented by h "crossed" matchings that pair the lower half with
a cyclically shifted upper half.  When h is odd the merge instead starts
from the partitions of h+1: the pair that holds the top element h is
dropped from both copies and glued back together with a single bridging
pair (c, h+c), where c is the partner of the top element.  Odd d reuses
the construction for d+1 and keeps the partner of the dropped element as
an explicit singleton.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Partition:
    """One near-perfect matching: ordered pairs (j < k) plus unpaired indices."""

    pairs: tuple[tuple[int, int], ...]
    singletons: tuple[int, ...] = ()

    def __post_init__(self):
        for (j, k) in self.pairs:
            if not 0 <= j < k:
                raise ValueError(f"pair ({j}, {k}) is not ordered")


@dataclass(frozen=True)
class PartitionSet:
    dim: int
    partitions: tuple[Partition, ...]

    def __post_init__(self):
        for part in self.partitions:
            top = max((k for (_, k) in part.pairs), default=0)
            if part.singletons:
                top = max(top, max(part.singletons))
            if top >= self.dim:
                raise ValueError(f"index {top} outside dimension {self.dim}")


@dataclass
class CoverReport:
    ok: bool
    missing: list[tuple[int, int]] = field(default_factory=list)
    duplicated: list[tuple[int, int]] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)


def _even_pair_partitions(b: int) -> list[list[tuple[int, int]]]:
    """Perfect matchings T_1..T_{b-1} of {0..b-1} for even b >= 2."""
    if b == 2:
        return [[(0, 1)]]
    h = b // 2
    merged: list[list[tuple[int, int]]] = []
    if h % 2 == 0:
        for p in _even_pair_partitions(h):
            merged.append(sorted(p + [(j + h, k + h) for (j, k) in p]))
    else:
        # h odd: borrow the h matchings of dimension h+1 and rewire the
        # pair that contains the top element h in each copy.
        for p in _even_pair_partitions(h + 1):
            c = next(j for (j, k) in p if k == h)
            kept = [(j, k) for (j, k) in p if k != h]
            pairs = kept + [(j + h, k + h) for (j, k) in kept] + [(c, c + h)]
            merged.append(sorted(pairs))
    crossed = [
        [(j, h + (t + j) % h) for j in range(h)]
        for t in range(len(merged) + 1, b)
    ]
    return merged + crossed


def construct_partitions(d: int) -> PartitionSet:
    """Deterministic partition family for dimension d (d-1 members when d
    is even, d members when d is odd)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    parts = []
    if d % 2 == 0:
        for p in _even_pair_partitions(d):
            parts.append(Partition(pairs=tuple(p)))
    else:
        # Build for d+1, then drop the virtual element d from every
        # partition; its partner stays behind as the singleton.
        for p in _even_pair_partitions(d + 1):
            c = next(j for (j, k) in p if k == d)
            pairs = tuple((j, k) for (j, k) in p if k != d)
            parts.append(Partition(pairs=pairs, singletons=(c,)))
    return PartitionSet(dim=d, partitions=tuple(parts))


def verify_cover(ps: PartitionSet) -> CoverReport:
    """Check the exact-cover property and the per-partition shape rules."""
    d = ps.dim
    report = CoverReport(ok=True)
    expected = d - 1 if d % 2 == 0 else d
    if len(ps.partitions) != expected:
        report.problems.append(
            f"expected {expected} partitions for d={d}, found {len(ps.partitions)}"
        )
    seen: dict[tuple[int, int], int] = {}
    for t, part in enumerate(ps.partitions, start=1):
        used = list(part.singletons)
        for (j, k) in part.pairs:
            if not (0 <= j < k < d):
                report.problems.append(f"partition {t}: bad pair ({j}, {k})")
            seen[(j, k)] = seen.get((j, k), 0) + 1
            used += [j, k]
        if sorted(used) != sorted(set(used)):
            report.problems.append(f"partition {t}: repeated index")
        if len(used) != d:
            report.problems.append(f"partition {t}: covers {len(used)} of {d} indices")
        if list(part.pairs) != sorted(part.pairs):
            report.problems.append(f"partition {t}: pairs not in canonical order")
        if len(part.singletons) != (d % 2):
            report.problems.append(f"partition {t}: wrong singleton count")
    for j in range(d):
        for k in range(j + 1, d):
            n = seen.get((j, k), 0)
            if n == 0:
                report.missing.append((j, k))
            elif n > 1:
                report.duplicated.append((j, k))
    report.ok = not (report.missing or report.duplicated or report.problems)
    return report


def select_band_partitions(ps: PartitionSet, r: int) -> list[int]:
    """1-based labels of the partitions holding at least one pair with
    k - j <= r.  Together they cover every band entry |j - k| <= r."""
    if not 1 <= r <= ps.dim - 1:
        raise ValueError(f"band width must be in 1..{ps.dim - 1}, got {r}")
    return [
        t
        for t, part in enumerate(ps.partitions, start=1)
        if any(k - j <= r for (j, k) in part.pairs)
    ]


def to_dict(ps: PartitionSet) -> dict:
    return {
        "dim": ps.dim,
        "partitions": [
            {
                "pairs": [[j, k] for (j, k) in part.pairs],
                "singletons": list(part.singletons),
            }
            for part in ps.partitions
        ],
    }


def from_dict(obj: dict) -> PartitionSet:
    parts = tuple(
        Partition(
            pairs=tuple((int(j), int(k)) for j, k in entry["pairs"]),
            singletons=tuple(int(c) for c in entry.get("singletons", [])),
        )
        for entry in obj["partitions"]
    )
    return PartitionSet(dim=int(obj["dim"]), partitions=parts)


def to_json(ps: PartitionSet, indent: int | None = None) -> str:
    return json.dumps(to_dict(ps), indent=indent)


def from_json(text: str) -> PartitionSet:
    return from_dict(json.loads(text))

import json

import numpy as np
import pytest

from ddbtomo.partitions import (
    Partition,
    PartitionSet,
    construct_partitions,
    from_json,
    select_band_partitions,
    to_json,
    verify_cover,
)

# reference tables, frozen
TABLE_2 = [([(0, 1)], ())]
TABLE_4 = [
    ([(0, 1), (2, 3)], ()),
    ([(0, 2), (1, 3)], ()),
    ([(0, 3), (1, 2)], ()),
]
TABLE_6 = [
    ([(0, 1), (2, 5), (3, 4)], ()),
    ([(0, 2), (1, 4), (3, 5)], ()),
    ([(0, 3), (1, 2), (4, 5)], ()),
    ([(0, 4), (1, 5), (2, 3)], ()),
    ([(0, 5), (1, 3), (2, 4)], ()),
]
TABLE_7 = [
    ([(0, 1), (2, 3), (4, 5)], (6,)),
    ([(0, 2), (1, 3), (4, 6)], (5,)),
    ([(0, 3), (1, 2), (5, 6)], (4,)),
    ([(0, 4), (1, 5), (2, 6)], (3,)),
    ([(0, 5), (1, 6), (3, 4)], (2,)),
    ([(0, 6), (2, 4), (3, 5)], (1,)),
    ([(1, 4), (2, 5), (3, 6)], (0,)),
]
TABLE_8 = [
    ([(0, 1), (2, 3), (4, 5), (6, 7)], ()),
    ([(0, 2), (1, 3), (4, 6), (5, 7)], ()),
    ([(0, 3), (1, 2), (4, 7), (5, 6)], ()),
    ([(0, 4), (1, 5), (2, 6), (3, 7)], ()),
    ([(0, 5), (1, 6), (2, 7), (3, 4)], ()),
    ([(0, 6), (1, 7), (2, 4), (3, 5)], ()),
    ([(0, 7), (1, 4), (2, 5), (3, 6)], ()),
]


@pytest.mark.parametrize(
    "d,table",
    [(2, TABLE_2), (4, TABLE_4), (6, TABLE_6), (7, TABLE_7), (8, TABLE_8)],
)
def test_reference_tables(d, table):
    ps = construct_partitions(d)
    got = [(list(p.pairs), p.singletons) for p in ps.partitions]
    want = [(pairs, singles) for pairs, singles in table]
    assert got == want


@pytest.mark.parametrize("d", list(range(2, 65)))
def test_cover_properties(d):
    ps = construct_partitions(d)
    expected = d - 1 if d % 2 == 0 else d
    assert len(ps.partitions) == expected
    rep = verify_cover(ps)
    assert rep.ok, rep.problems
    # every unordered pair exactly once
    seen = {}
    for part in ps.partitions:
        labels = []
        for (j, k) in part.pairs:
            assert 0 <= j < k < d
            seen[(j, k)] = seen.get((j, k), 0) + 1
            labels += [j, k]
        labels += list(part.singletons)
        assert sorted(labels) == list(range(d))
    assert sorted(seen) == [(j, k) for j in range(d) for k in range(j + 1, d)]
    assert set(seen.values()) == {1}


def test_odd_singletons_cover_every_index():
    for d in (3, 5, 7, 9, 15, 33):
        ps = construct_partitions(d)
        singles = [c for p in ps.partitions for c in p.singletons]
        assert sorted(singles) == list(range(d))


def test_rejects_tiny_dimension():
    with pytest.raises(ValueError):
        construct_partitions(1)
    with pytest.raises(ValueError):
        construct_partitions(0)


def test_band_selection_d8_r1():
    ps = construct_partitions(8)
    assert list(select_band_partitions(ps, 1)) == [1, 3, 5]


def test_band_selection_covers_band():
    for d in (6, 8, 16, 31):
        ps = construct_partitions(d)
        for r in (1, 2, 3):
            chosen = select_band_partitions(ps, r)
            covered = set()
            for t in chosen:
                for (j, k) in ps.partitions[t - 1].pairs:
                    if k - j <= r:
                        covered.add((j, k))
            want = {(j, j + s) for s in range(1, r + 1) for j in range(d - s)}
            assert covered == want


@pytest.mark.parametrize("n", list(range(2, 11)))
def test_band_selection_logarithmic_count(n):
    # O(r log(d/r)) scaling with an explicit constant
    d = 2**n
    ps = construct_partitions(d)
    for r in (1, 2, 4):
        if r >= d:
            continue
        count = len(select_band_partitions(ps, r))
        assert count < r * np.log2(4 * d / r)


def test_band_selection_validates_r():
    ps = construct_partitions(8)
    with pytest.raises(ValueError):
        select_band_partitions(ps, 0)
    with pytest.raises(ValueError):
        select_band_partitions(ps, 8)


def test_json_round_trip():
    ps = construct_partitions(7)
    text = to_json(ps)
    back = from_json(text)
    assert back == ps
    payload = json.loads(text)
    assert payload["dim"] == 7
    assert len(payload["partitions"]) == 7


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(pairs=((1, 0),))
    with pytest.raises(ValueError):
        PartitionSet(dim=4, partitions=(Partition(pairs=((0, 5),)),))

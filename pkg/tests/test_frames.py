from __future__ import annotations

import itertools

import pytest

from e8nine.frames import (
    frame_from_3space,
    frame_reps,
    orthogonal_pair_census,
    three_spaces,
    verify_frame_array,
)
from e8nine.gf2 import nonzero_elements, reduce_mod2, subspace_from
from e8nine.lattice import inner, norm, root_pairs


def test_three_spaces_count_and_membership(spread):
    v = spread.spaces[0]
    subs = three_spaces(v)
    assert len(subs) == 15
    v_points = set(nonzero_elements(v))
    for w in subs:
        pts = nonzero_elements(w)
        assert len(pts) == 7
        assert set(pts) <= v_points


def test_every_point_lies_in_seven_3spaces(spread):
    v = spread.spaces[0]
    subs = three_spaces(v)
    for p in nonzero_elements(v):
        hits = sum(1 for w in subs if p in nonzero_elements(w))
        assert hits == 7


def test_three_spaces_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        three_spaces(subspace_from([1, 2, 4]))


def test_frame_construction_invariants(lat, ft, census, spread):
    pairs = root_pairs(lat)
    v = spread.spaces[0]
    for j, w in enumerate(three_spaces(v)):
        f = frame_from_3space(lat, ft, census, v, w, source=(0, j))
        assert len(f.roots) == 8
        reps = [pairs[i].rep for i in f.roots]
        for a, b in itertools.combinations(reps, 2):
            assert inner(lat, a, b) == 0
            s = tuple(x + y for x, y in zip(a, b))
            assert norm(lat, s) == 4
            assert reduce_mod2(s) in nonzero_elements(w)


def test_exactly_one_anisotropic_coset_for_all_135(lat, ft, census, spread):
    # frame_from_3space raises unless the anisotropic coset is unique,
    # so building every (V, W) frame is itself the check.
    count = 0
    for i, v in enumerate(spread.spaces):
        for j, w in enumerate(three_spaces(v)):
            frame_from_3space(lat, ft, census, v, w, source=(i, j))
            count += 1
    assert count == 135


def test_frame_array_row_property(frame_array):
    assert len(frame_array.rows) == 9
    for row in frame_array.rows:
        assert len(row) == 15
        ids = sorted(pid for f in row for pid in f.roots)
        assert ids == list(range(120))


def test_frame_array_pair_property(frame_array):
    seen = {}
    for i, row in enumerate(frame_array.rows):
        for j, f in enumerate(row):
            for a, b in itertools.combinations(f.roots, 2):
                assert (a, b) not in seen, "pair repeated across frames"
                seen[(a, b)] = (i, j)
    assert len(seen) == 3780


def test_frame_sources_are_injective(frame_array):
    eight_sets = [f.roots for row in frame_array.rows for f in row]
    assert len(set(eight_sets)) == 135
    sources = [f.source for row in frame_array.rows for f in row]
    assert sorted(sources) == [(i, j) for i in range(9) for j in range(15)]


def test_orthogonal_pair_census(lat, frame_array):
    census = orthogonal_pair_census(lat, frame_array)
    assert census.orthogonal_pair_count == 3780
    assert set(census.per_pair_orthogonal_counts) == {63}
    assert len(census.norm4_multiplicities) == 2160
    assert set(census.norm4_multiplicities.values()) == {7}


def test_both_signs_reduce_to_same_class(lat):
    for p in root_pairs(lat)[:20]:
        assert reduce_mod2(p.rep) == reduce_mod2(tuple(-x for x in p.rep))


def test_verify_frame_array(lat, ft, frame_array):
    assert verify_frame_array(lat, ft, frame_array).passed


def test_frame_reps_are_orthogonal(lat, frame_array):
    reps = frame_reps(lat, frame_array.rows[0][0])
    for a, b in itertools.combinations(reps, 2):
        assert inner(lat, a, b) == 0
    assert all(inner(lat, r, r) == 2 for r in reps)

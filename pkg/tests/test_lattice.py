from __future__ import annotations

import itertools
import random

import pytest

from e8nine.intmat import det, is_symmetric
from e8nine.lattice import (
    E8_GRAM,
    build_lattice,
    enumerate_shell,
    inner,
    neg,
    norm,
    recognize_d8,
    recognize_even_unimodular_e8,
    root_pairs,
    shell_of_gram,
)

# D8 simple-root Gram: chain of seven nodes with the eighth attached to node 6.
D8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, -1),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, 0, -1, 0, 2),
)

D4_GRAM = (
    (2, -1, 0, 0),
    (-1, 2, -1, -1),
    (0, -1, 2, 0),
    (0, -1, 0, 2),
)

A2_GRAM = ((2, -1), (-1, 2))


def brute_force_shell(gram, target, bound):
    """Box-search oracle, independent of the recursive enumerator."""
    n = len(gram)
    hits = []
    for coords in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(coords):
            continue
        val = sum(
            coords[i] * gram[i][j] * coords[j] for i in range(n) for j in range(n)
        )
        if val == target:
            hits.append(coords)
    return sorted(hits)


def test_build_lattice_gram_properties():
    lat = build_lattice()
    assert det(lat.gram) == 1
    assert all(lat.gram[i][i] == 2 for i in range(8))
    assert is_symmetric(lat.gram)
    assert build_lattice() == build_lattice()


def test_inner_basics(lat):
    e0 = (1, 0, 0, 0, 0, 0, 0, 0)
    zero = (0,) * 8
    assert inner(lat, e0, e0) == 2
    assert inner(lat, e0, zero) == 0
    rng = random.Random(5)
    for _ in range(40):
        u = tuple(rng.randint(-3, 3) for _ in range(8))
        v = tuple(rng.randint(-3, 3) for _ in range(8))
        w = tuple(rng.randint(-3, 3) for _ in range(8))
        assert inner(lat, u, v) == inner(lat, v, u)
        uv = tuple(a + b for a, b in zip(u, v))
        assert inner(lat, uv, w) == inner(lat, u, w) + inner(lat, v, w)


def test_shell_counts(lat):
    assert len(enumerate_shell(lat, 2)) == 240
    assert len(enumerate_shell(lat, 4)) == 2160


def test_shell_rejects_other_norms(lat):
    with pytest.raises(ValueError):
        enumerate_shell(lat, 6)
    with pytest.raises(ValueError):
        enumerate_shell(lat, 3)


def test_shell_negation_closure_and_order(lat):
    for n in (2, 4):
        shell = enumerate_shell(lat, n)
        as_set = set(shell)
        assert all(neg(v) in as_set for v in shell)
        assert shell == sorted(shell)
        assert shell == enumerate_shell(lat, n)


def test_shell_enumerator_against_box_oracle():
    assert shell_of_gram(A2_GRAM, 2) == brute_force_shell(A2_GRAM, 2, 3)
    assert shell_of_gram(D4_GRAM, 2) == brute_force_shell(D4_GRAM, 2, 4)
    assert shell_of_gram(D4_GRAM, 4) == brute_force_shell(D4_GRAM, 4, 4)
    assert len(shell_of_gram(D4_GRAM, 2)) == 24


def test_root_pairs(lat):
    pairs = root_pairs(lat)
    assert len(pairs) == 120
    assert [p.id for p in pairs] == list(range(120))
    shell = set(enumerate_shell(lat, 2))
    covered = set()
    for p in pairs:
        assert p.rep in shell
        assert inner(lat, p.rep, neg(p.rep)) == -2
        assert p.rep > neg(p.rep)
        covered.add(p.rep)
        covered.add(neg(p.rep))
    assert covered == shell


def test_root_inner_product_range_exhaustive(lat):
    roots = enumerate_shell(lat, 2)
    gram = lat.gram
    for i, r in enumerate(roots):
        gr = tuple(sum(gram[a][b] * r[a] for a in range(8)) for b in range(8))
        for s in roots[i + 1 :]:
            if s == neg(r):
                continue
            val = sum(x * y for x, y in zip(gr, s))
            assert val in (-1, 0, 1)


def test_orthogonal_roots_sum_to_norm4(lat):
    roots = enumerate_shell(lat, 2)
    rng = random.Random(17)
    found = 0
    while found < 50:
        r = rng.choice(roots)
        s = rng.choice(roots)
        if inner(lat, r, s) == 0:
            found += 1
            assert norm(lat, tuple(a + b for a, b in zip(r, s))) == 4


def d8_standard_model_minimal_count():
    """Count norm-2 vectors of {x in Z^8 : sum even} directly."""
    count = 0
    for i in range(8):
        for j in range(i + 1, 8):
            count += 4  # (+-1, +-1) in coordinates i, j
    return count


def test_recognize_e8():
    assert recognize_even_unimodular_e8(E8_GRAM)
    identity8 = tuple(tuple(int(i == j) for j in range(8)) for i in range(8))
    assert not recognize_even_unimodular_e8(identity8)
    assert not recognize_even_unimodular_e8(D8_GRAM)
    with pytest.raises(ValueError):
        recognize_even_unimodular_e8(
            tuple(
                tuple(1 if (i, j) == (0, 1) else (2 if i == j else 0) for j in range(8))
                for i in range(8)
            )
        )


def test_recognize_d8():
    from test_intmat import leibniz_det

    assert det(D8_GRAM) == 4
    assert leibniz_det(D8_GRAM) == 4
    assert d8_standard_model_minimal_count() == 112
    assert len(shell_of_gram(D8_GRAM, 2)) == 112
    assert recognize_d8(D8_GRAM)
    assert not recognize_d8(E8_GRAM)


def test_recognize_not_positive_definite():
    indefinite = tuple(
        tuple(-2 if i == j == 7 else (2 if i == j else 0) for j in range(8))
        for i in range(8)
    )
    assert not recognize_even_unimodular_e8(indefinite)

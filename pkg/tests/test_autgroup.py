from __future__ import annotations

import random

from e8nine.autgroup import (
    BLOCK_IMAGE_ORDER,
    ONE_BLOCK_IMAGE_ORDER,
    STABILIZER_ORDER,
    block_action,
    extended_perm,
    is_gram_isometry,
    isometries_between_frames,
    matrix_mod2_rows,
    negation_isometry,
    one_block_stabilizer_analysis,
    shell4_perm,
    spread_block_perm,
    stabilizer_generators,
)
from e8nine.blocks import block_of_vector_table
from e8nine.frames import frame_reps
from e8nine.intmat import Mat, identity as identity_matrix, mat_mul
from e8nine.lattice import enumerate_shell
from e8nine.permgroup import identity_perm, mult, schreier_sims


def test_negation_is_a_verified_generator(lat, stab_result):
    neg = negation_isometry()
    assert is_gram_isometry(lat, neg.matrix)
    assert neg in stab_result.isometries
    idx = stab_result.isometries.index(neg)
    assert stab_result.block_perms[idx] == identity_perm(9)


def test_every_generator_preserves_gram_and_blocks(lat, stab_result, spread, partition):
    spread_index = {s: i for i, s in enumerate(spread.spaces)}
    table = block_of_vector_table(partition)
    for iso, bp in zip(stab_result.isometries, stab_result.block_perms):
        assert is_gram_isometry(lat, iso.matrix)
        assert spread_block_perm(spread_index, iso.matrix) == bp
        # Spot-check actual vectors follow the block permutation.
        for v in list(table)[:40]:
            w = tuple(
                sum(v[a] * iso.matrix[a][b] for a in range(8)) for b in range(8)
            )
            assert table[w] == bp[table[v]]


def test_group_order(stab_result):
    assert stab_result.group.order() == STABILIZER_ORDER


def test_stabilizer_generators_wrapper(lat, spread, frame_array, partition):
    gens = stabilizer_generators(lat, spread, frame_array, partition)
    assert negation_isometry() in gens
    assert all(is_gram_isometry(lat, g.matrix) for g in gens)


def test_chain_on_shell_perms_confirms_order(lat, stab_result):
    # The chain certifies the order as the product of its orbit lengths.
    chain = stab_result.group.chain
    prod = 1
    for n in chain.fundamental_orbit_lengths():
        prod *= n
    assert prod == STABILIZER_ORDER
    assert chain.base[:9] == list(range(9))


def test_generic_schreier_sims_on_stabilizer_generators(stab_result):
    ext_gens = [
        extended_perm(bp, vp)
        for bp, vp in zip(stab_result.block_perms, stab_result.group.generators)
    ]
    order, chain = schreier_sims(ext_gens, base_prefix=tuple(range(9)))
    assert order == STABILIZER_ORDER
    assert chain.contains(ext_gens[0])


def test_block_action_numbers(lat, stab_result, partition):
    action = block_action(lat, stab_result, partition)
    assert action.image_order == BLOCK_IMAGE_ORDER
    assert action.kernel_order == 2
    assert action.all_even
    assert action.image_order * action.kernel_order == stab_result.group.order()
    image_order, _ = schreier_sims(list(action.generator_images))
    assert image_order == BLOCK_IMAGE_ORDER


def test_block_action_rejects_inconsistent_generator(lat, stab_result, partition):
    import pytest
    from dataclasses import replace

    bad_perms = list(stab_result.block_perms)
    idx = stab_result.isometries.index(negation_isometry())
    bad_perms[idx] = (1, 0, 2, 3, 4, 5, 6, 7, 8)
    broken = replace(stab_result, block_perms=tuple(bad_perms))
    with pytest.raises(ValueError):
        block_action(lat, broken, partition)


def test_one_block_stabilizer(lat, stab_result, spread):
    report = one_block_stabilizer_analysis(lat, stab_result, spread)
    assert report.stabilizer_order == 40320
    assert report.other_blocks_image_order == ONE_BLOCK_IMAGE_ORDER
    assert report.points_image_order == ONE_BLOCK_IMAGE_ORDER
    assert report.other_blocks_transitive
    assert report.points_transitive
    assert report.kernel_order_blocks == 2
    assert report.kernel_order_points == 2
    assert report.kernels_contain_negation
    # |L4(2)| from its order formula equals |A8| = 8!/2.
    l42 = (2**4 - 1) * (2**4 - 2) * (2**4 - 4) * (2**4 - 8)
    fact8 = 1
    for k in range(2, 9):
        fact8 *= k
    assert l42 == fact8 // 2 == ONE_BLOCK_IMAGE_ORDER


def test_random_words_preserve_gram_and_partition(lat, stab_result, partition):
    rng = random.Random(99)
    table = block_of_vector_table(partition)
    mats = [iso.matrix for iso in stab_result.isometries]
    sample_vectors = list(table)[::97]
    for _ in range(12):
        length = rng.randint(1, 20)
        word: Mat = identity_matrix(8)
        for _ in range(length):
            word = mat_mul(word, rng.choice(mats))
        assert is_gram_isometry(lat, word)
        images = set()
        for v in sample_vectors:
            w = tuple(sum(v[a] * word[a][b] for a in range(8)) for b in range(8))
            images.add((table[v], table[w]))
        # Consistent block-to-block correspondence on every sampled vector.
        assert len({src for src, _ in images}) == len(images)


def test_action_on_shell_is_faithful(lat, stab_result):
    # The norm-4 shell spans the space, so the matrix is recoverable from its
    # shell permutation and distinct generators induce distinct permutations.
    from e8nine.intmat import adjugate, det, hnf

    shell = enumerate_shell(lat, 4)
    index = {v: i for i, v in enumerate(shell)}
    perms = [shell4_perm(lat, iso.matrix, index) for iso in stab_result.isometries]
    assert len(set(perms)) == len(perms)

    basis_idx: list[int] = []
    for i in range(len(shell)):
        candidate = [shell[j] for j in basis_idx] + [shell[i]]
        if len(hnf(candidate)) == len(candidate):
            basis_idx.append(i)
        if len(basis_idx) == 8:
            break
    basis = tuple(shell[j] for j in basis_idx)
    d = det(basis)
    adj = adjugate(basis)
    for iso, perm in zip(stab_result.isometries, perms):
        image_rows = tuple(shell[perm[j]] for j in basis_idx)
        num = mat_mul(adj, image_rows)
        recovered = tuple(tuple(x // d for x in row) for row in num)
        assert recovered == iso.matrix


def test_membership_of_generator_products(stab_result):
    chain = stab_result.group.chain
    gens = list(stab_result.group.generators)
    bps = list(stab_result.block_perms)
    rng = random.Random(5)
    for _ in range(10):
        i, j = rng.randrange(len(gens)), rng.randrange(len(gens))
        ext = extended_perm(mult(bps[i], bps[j]), mult(gens[i], gens[j]))
        assert chain.contains(ext)


def test_frame_search_finds_identity_first(lat, frame_array, spread, partition):
    table = block_of_vector_table(partition)
    spread_index = {s: i for i, s in enumerate(spread.spaces)}
    reps = frame_reps(lat, frame_array.rows[0][0])
    found = isometries_between_frames(lat, reps, reps, table, spread_index, cap=1)
    assert found[0][0] == identity_matrix(8)
    assert found[0][1] == tuple(range(9))


def test_frame_search_is_deterministic(lat, frame_array, spread, partition):
    table = block_of_vector_table(partition)
    spread_index = {s: i for i, s in enumerate(spread.spaces)}
    src = frame_reps(lat, frame_array.rows[0][0])
    tgt = frame_reps(lat, frame_array.rows[2][5])
    first = isometries_between_frames(lat, src, tgt, table, spread_index, cap=8)
    second = isometries_between_frames(lat, src, tgt, table, spread_index, cap=8)
    assert first == second
    assert len(first) == 8
    for m, bp in first:
        assert is_gram_isometry(lat, m)
        assert bp[0] == 2


def test_matrix_mod2_rows():
    m = tuple(tuple(2 if i == j else 0 for j in range(8)) for i in range(8))
    assert matrix_mod2_rows(m) == [0] * 8
    assert matrix_mod2_rows(identity_matrix(8)) == [1 << i for i in range(8)]

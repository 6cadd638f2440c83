"""Generators and order of the isometry group stabilizing the nine blocks.

Isometry candidates are built as signed frame-to-frame maps: a bijection with
signs between the eight root pairs of a source and a target frame determines
a unique linear map, which is an isometry of the rational space by
orthogonality. The search prunes on two exact conditions long before the map
is complete: a root supported on four frame members must land on a root
(equivalently, supported 4-subsets map to supported 4-subsets), and every
determined norm-4 vector must stay inside a consistent matching of the nine
blocks. Survivors are tested for integrality on the lattice and for mapping
the spread onto itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import Norm4Partition, block_of_vector_table
from .frames import FrameArray, frame_reps
from .gf2 import F2Subspace, rref
from .intmat import Mat, Vec, adjugate, det, mat_mul, transpose
from .lattice import Lattice, enumerate_shell, inner
from .permgroup import (
    Perm,
    StabChain,
    identity_perm,
    inverse,
    mult,
    orbit_of,
    perm_parity,
    schreier_sims,
)
from .spreadsearch import Spread

# 2 * |A9|: the certified order of the full block stabilizer.
STABILIZER_ORDER = 362880
BLOCK_IMAGE_ORDER = 181440  # |A9|
ONE_BLOCK_IMAGE_ORDER = 20160  # |A8| = |L4(2)|


@dataclass(frozen=True)
class Isometry:
    """Integer matrix acting on row coordinate vectors, preserving the Gram."""

    matrix: Mat


@dataclass(frozen=True)
class BlockAction:
    """The induced action of the stabilizer on the nine blocks."""

    generator_images: tuple[Perm, ...]  # 9-point permutations, one per generator
    image_order: int
    kernel_order: int
    all_even: bool


class GenerationIncomplete(RuntimeError):
    pass


def negation_isometry() -> Isometry:
    return Isometry(matrix=tuple(tuple(-1 if i == j else 0 for j in range(8)) for i in range(8)))


def is_gram_isometry(lat: Lattice, m: Mat) -> bool:
    return mat_mul(mat_mul(m, lat.gram), transpose(m)) == lat.gram


def matrix_mod2_rows(m: Mat) -> list[int]:
    """Row bitmasks of the matrix reduced mod 2 (bit j of row i is m[i][j])."""
    return [sum((row[j] & 1) << j for j in range(8)) for row in m]


def _apply_mod2(rows_mod2: list[int], bits: int) -> int:
    out = 0
    for i in range(8):
        if (bits >> i) & 1:
            out ^= rows_mod2[i]
    return out


def spread_block_perm(spread_index: dict[F2Subspace, int], m: Mat) -> Perm | None:
    """The block permutation induced mod 2, or None if the spread moves."""
    rows2 = matrix_mod2_rows(m)
    images = []
    for space, _ in sorted(spread_index.items(), key=lambda kv: kv[1]):
        img = F2Subspace(rows=rref([_apply_mod2(rows2, r) for r in space.rows]))
        idx = spread_index.get(img)
        if idx is None:
            return None
        images.append(idx)
    if len(set(images)) != 9:
        return None
    return tuple(images)


def shell4_perm(lat: Lattice, m: Mat, shell4_index: dict[Vec, int]) -> Perm:
    """The permutation the matrix induces on the canonical norm-4 shell."""
    shell = enumerate_shell(lat, 4)
    img = [0] * len(shell)
    for i, v in enumerate(shell):
        w = tuple(sum(v[a] * m[a][b] for a in range(8)) for b in range(8))
        img[i] = shell4_index[w]
    return tuple(img)


def extended_perm(block_perm: Perm, vec_perm: Perm) -> Perm:
    """One permutation of blocks (points 0..8) followed by shell-4 points."""
    return tuple(block_perm) + tuple(9 + x for x in vec_perm)


class _Done(Exception):
    pass


def _frame_supports(lat: Lattice, reps: list[Vec]):
    """Root expansion data over one frame's eight representatives.

    Every root outside the frame decomposes as (sum of 4 signed members)/2;
    the 14 possible supports each carry all 16 sign patterns.
    """
    supports: dict[frozenset[int], list[tuple[int, ...]]] = {}
    for rho in enumerate_shell(lat, 2):
        cs = tuple(inner(lat, rho, r) for r in reps)
        if any(abs(c) == 2 for c in cs):
            continue  # the frame's own pair
        supp = frozenset(i for i, c in enumerate(cs) if c)
        if len(supp) != 4:
            raise AssertionError("root support of size %d over a frame" % len(supp))
        supports.setdefault(supp, []).append(cs)
    if len(supports) != 14 or any(len(v) != 16 for v in supports.values()):
        raise AssertionError("frame support structure is not 14 x 16")
    return supports


def _greedy_slot_order(supports) -> list[int]:
    """Order frame slots so supported 4-subsets complete as early as possible."""
    subsets = sorted(supports, key=lambda s: tuple(sorted(s)))
    order = sorted(subsets[0])
    while len(order) < 8:
        placed = set(order)
        best = None
        for cand in range(8):
            if cand in placed:
                continue
            gain = sum(1 for s in subsets if s <= placed | {cand} and cand in s)
            key = (-gain, cand)
            if best is None or key < best:
                best = key
        order.append(best[1])
    return order


def isometries_between_frames(
    lat: Lattice,
    src_reps: list[Vec],
    tgt_reps: list[Vec],
    block_of: dict[Vec, int],
    spread_index: dict[F2Subspace, int],
    cap: int,
) -> list[tuple[Mat, Perm]]:
    """Up to cap isometries mapping one frame onto another, found by DFS.

    Deterministic: slots are assigned in a fixed greedy order and target
    options are explored in (pair index, sign) order.
    """
    src_supports = _frame_supports(lat, src_reps)
    order = _greedy_slot_order(src_supports)
    reps = [src_reps[i] for i in order]
    pos_of = {slot: p for p, slot in enumerate(order)}

    new_subsets: list[list[frozenset[int]]] = [[] for _ in range(8)]
    for supp in src_supports:
        positions = frozenset(pos_of[i] for i in supp)
        new_subsets[max(positions)].append(positions)

    # Probe templates: the norm-4 vector w = rep_k + (signed half sum over T)
    # lies in a known block; its image is determined once slot k and the
    # support positions are assigned, pinning the block matching.
    probes: list[list[tuple[int, tuple[int, ...], list[tuple[tuple[int, ...], int]]]]] = [
        [] for _ in range(8)
    ]
    for supp, coeff_lists in src_supports.items():
        positions = tuple(sorted(pos_of[i] for i in supp))
        for k in range(8):
            if k in positions:
                continue
            depth = max(max(positions), k)
            entries = []
            for cs in coeff_lists:
                rho = tuple(
                    sum(cs[i] * src_reps[i][x] for i in range(8)) // 2 for x in range(8)
                )
                w = tuple(reps[k][x] + rho[x] for x in range(8))
                coeffs_by_pos = tuple(cs[order[p]] for p in positions)
                entries.append((coeffs_by_pos, block_of[w]))
            probes[depth].append((k, positions, entries))

    tgt_supports = _frame_supports(lat, tgt_reps)
    tgt_supported = set(tgt_supports)

    r_mat: Mat = tuple(reps)
    r_adj = adjugate(r_mat)
    r_det = det(r_mat)
    gram = lat.gram

    # Seed the block matching with the two frames' own rows.
    w_src = tuple(src_reps[0][x] + src_reps[1][x] for x in range(8))
    w_tgt = tuple(tgt_reps[0][x] + tgt_reps[1][x] for x in range(8))
    tau = [-1] * 9
    tau_used = [False] * 9
    tau[block_of[w_src]] = block_of[w_tgt]
    tau_used[block_of[w_tgt]] = True

    pi = [-1] * 8
    images: list[Vec] = [()] * 8
    used = [False] * 8
    found: list[tuple[Mat, Perm]] = []

    def finalize() -> None:
        u_mat = tuple(images)
        num = mat_mul(r_adj, u_mat)
        if any(x % r_det for row in num for x in row):
            return
        m = tuple(tuple(x // r_det for x in row) for row in num)
        if mat_mul(mat_mul(m, gram), transpose(m)) != gram:
            return
        bp = spread_block_perm(spread_index, m)
        if bp is None:
            return
        found.append((m, bp))
        if len(found) >= cap:
            raise _Done

    def rec(t: int) -> None:
        for q in range(8):
            if used[q]:
                continue
            used[q] = True
            for e in (1, -1):
                pi[t] = q
                images[t] = tuple(e * x for x in tgt_reps[q])
                ok = True
                for s in new_subsets[t]:
                    if frozenset(pi[i] for i in s) not in tgt_supported:
                        ok = False
                        break
                trail: list[int] = []
                if ok:
                    for k, positions, entries in probes[t]:
                        uk = images[k]
                        for coeffs, b_src in entries:
                            msum = [0] * 8
                            for c, p in zip(coeffs, positions):
                                up = images[p]
                                for x in range(8):
                                    msum[x] += c * up[x]
                            mvec = tuple(uk[x] + (msum[x] >> 1) for x in range(8))
                            b_img = block_of[mvec]
                            cur = tau[b_src]
                            if cur == -1:
                                if tau_used[b_img]:
                                    ok = False
                                    break
                                tau[b_src] = b_img
                                tau_used[b_img] = True
                                trail.append(b_src)
                            elif cur != b_img:
                                ok = False
                                break
                        if not ok:
                            break
                if ok:
                    if t == 7:
                        finalize()
                    else:
                        rec(t + 1)
                for b_src in trail:
                    tau_used[tau[b_src]] = False
                    tau[b_src] = -1
            used[q] = False
            pi[t] = -1

    try:
        rec(0)
    except _Done:
        pass
    return found


@dataclass
class PermutationGroup:
    """The stabilizer as a permutation group on the 2160 norm-4 vectors.

    The stabilizer chain runs over an extended domain whose first nine points
    are the blocks; starting the base there keeps every fundamental orbit
    tiny (at most nine points) while representing exactly the same group.
    """

    generators: tuple[Perm, ...]  # degree-2160 permutations, canonical order
    chain: StabChain  # over blocks (0..8) + shell-4 points (9..2168)

    def order(self) -> int:
        return self.chain.order()


@dataclass
class StabilizerResult:
    isometries: tuple[Isometry, ...]
    block_perms: tuple[Perm, ...]  # 9-point permutation per generator
    group: PermutationGroup


def _negation_shell_perm(lat: Lattice) -> Perm:
    shell = enumerate_shell(lat, 4)
    index = {v: i for i, v in enumerate(shell)}
    return tuple(index[tuple(-x for x in v)] for v in shell)


def _target_schedule(arr: FrameArray) -> list[tuple[int, int]]:
    """Frame coordinates to aim the search at, most informative first."""
    first = [(j, 0) for j in range(9)] + [(0, k) for k in range(1, 15)]
    rest = [
        (j, k)
        for j in range(9)
        for k in range(15)
        if (j, k) not in set(first)
    ]
    return first + rest


def compute_stabilizer(
    lat: Lattice,
    spread: Spread,
    arr: FrameArray,
    partition: Norm4Partition,
) -> StabilizerResult:
    """Search frame-to-frame maps until the generated group has the full order.

    Negation is always included (it fixes every block). Targets and per-target
    caps escalate until the stabilizer chain certifies order 362880; running
    out of targets raises GenerationIncomplete.
    """
    block_of = block_of_vector_table(partition)
    spread_index = {s: i for i, s in enumerate(spread.spaces)}
    shell = enumerate_shell(lat, 4)
    shell_index = {v: i for i, v in enumerate(shell)}
    src_reps = frame_reps(lat, arr.rows[0][0])

    chain = StabChain(degree=9 + len(shell), base_prefix=tuple(range(9)))
    isometries: list[Isometry] = []
    block_perms: list[Perm] = []
    gen_perms: list[Perm] = []

    def admit(m: Mat, bp: Perm) -> None:
        if not is_gram_isometry(lat, m):
            raise AssertionError("candidate is not a Gram isometry")
        vec_perm = shell4_perm(lat, m, shell_index)
        ext = extended_perm(bp, vec_perm)
        if chain.add_generator(ext):
            isometries.append(Isometry(matrix=m))
            block_perms.append(bp)
            gen_perms.append(vec_perm)

    neg = negation_isometry()
    admit(neg.matrix, identity_perm(9))

    for cap in (12, 48, 2688):
        for (j, k) in _target_schedule(arr):
            if chain.order() == STABILIZER_ORDER:
                break
            tgt_reps = frame_reps(lat, arr.rows[j][k])
            for m, bp in isometries_between_frames(
                lat, src_reps, tgt_reps, block_of, spread_index, cap
            ):
                admit(m, bp)
                if chain.order() == STABILIZER_ORDER:
                    break
        if chain.order() == STABILIZER_ORDER:
            break
    if chain.order() != STABILIZER_ORDER:
        raise GenerationIncomplete(
            "generation incomplete: reached order %d" % chain.order()
        )
    group = PermutationGroup(generators=tuple(gen_perms), chain=chain)
    return StabilizerResult(
        isometries=tuple(isometries),
        block_perms=tuple(block_perms),
        group=group,
    )


def stabilizer_generators(
    lat: Lattice, spread: Spread, arr: FrameArray, partition: Norm4Partition
) -> list[Isometry]:
    """Verified isometries generating the full block stabilizer."""
    return list(compute_stabilizer(lat, spread, arr, partition).isometries)


def block_action(
    lat: Lattice,
    result: StabilizerResult,
    partition: Norm4Partition | None = None,
) -> BlockAction:
    """Induced 9-point action: image A9 (order, evenness), kernel {+-1}.

    When the partition is supplied, every generator is re-checked to map each
    block onto the block its 9-point permutation claims. The kernel order
    comes from the stabilizer chain itself: base points 0..8 are the blocks,
    so the product of the orbit lengths at deeper levels is the order of the
    pointwise block stabilizer. Its strong generators must be the identity or
    global negation on the shell.
    """
    if partition is not None:
        shell = enumerate_shell(lat, 4)
        index_of = {v: i for i, v in enumerate(shell)}
        block_indices = [
            frozenset(index_of[v] for v in b.vectors) for b in partition.blocks
        ]
        for vec_perm, bp in zip(result.group.generators, result.block_perms):
            for b, indices in enumerate(block_indices):
                if frozenset(vec_perm[i] for i in indices) != block_indices[bp[b]]:
                    raise ValueError(
                        "generator does not map block %d onto block %d" % (b, bp[b])
                    )
    image_order, _ = schreier_sims(list(result.block_perms), base_hint=tuple(range(9)))
    all_even = all(perm_parity(p) == 0 for p in result.block_perms)

    chain = result.group.chain
    if [lv.beta for lv in chain.levels[:9]] != list(range(9)):
        raise AssertionError("stabilizer chain does not start at the nine blocks")
    kernel_order = chain.stabilizer_order_below(9)
    neg_ext = extended_perm(identity_perm(9), _negation_shell_perm(lat))
    kernel_gens = set(chain.strong_generators(from_level=9))
    ident = identity_perm(len(neg_ext))
    if not kernel_gens <= {ident, neg_ext}:
        raise AssertionError("block-action kernel contains more than +-identity")
    if image_order * kernel_order != chain.order():
        raise AssertionError("image order times kernel order misses group order")
    return BlockAction(
        generator_images=tuple(result.block_perms),
        image_order=image_order,
        kernel_order=kernel_order,
        all_even=all_even,
    )


@dataclass(frozen=True)
class OneBlockReport:
    """Stabilizer of block 0: its two order-20160 transitive quotients."""

    stabilizer_order: int
    other_blocks_image_order: int
    other_blocks_transitive: bool
    points_image_order: int
    points_transitive: bool
    kernel_order_blocks: int
    kernel_order_points: int
    kernels_contain_negation: bool


def _matrix_inverse_unimodular(m: Mat) -> Mat:
    d = det(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = adjugate(m)
    return tuple(tuple(x * d for x in row) for row in adj)


def one_block_stabilizer_analysis(
    lat: Lattice,
    result: StabilizerResult,
    spread: Spread,
) -> OneBlockReport:
    """Analyze the subgroup fixing block 0 setwise.

    Its generators come from Schreier's lemma applied to the block-0 orbit:
    with transversal t_b mapping block 0 to b, each (generator g, point b)
    contributes t_b g t_{g(b)}^-1. The action on the other eight blocks and
    the action on the 15 nonzero points of the fixed 4-space must both have
    image order 20160 and be transitive, with kernels of order 2.
    """
    gens = [iso.matrix for iso in result.isometries]
    bps = list(result.block_perms)

    transversal: dict[int, Mat] = {0: tuple(tuple(int(i == j) for j in range(8)) for i in range(8))}
    t_perm: dict[int, Perm] = {0: identity_perm(9)}
    frontier = [0]
    while frontier:
        nxt = []
        for b in frontier:
            for m, bp in zip(gens, bps):
                img = bp[b]
                if img not in transversal:
                    transversal[img] = mat_mul(transversal[b], m)
                    t_perm[img] = mult(t_perm[b], bp)
                    nxt.append(img)
        frontier = nxt
    if len(transversal) != 9:
        raise AssertionError("block-0 orbit is not all nine blocks")

    stab_matrices: list[Mat] = []
    seen: set[Mat] = set()
    for m, bp in zip(gens, bps):
        for b in sorted(transversal):
            img = bp[b]
            s = mat_mul(mat_mul(transversal[b], m), _matrix_inverse_unimodular(transversal[img]))
            s_perm = mult(mult(t_perm[b], bp), inverse(t_perm[img]))
            if s_perm[0] != 0:
                raise AssertionError("Schreier element moves block 0")
            if s not in seen:
                seen.add(s)
                stab_matrices.append(s)

    stabilizer_order = result.group.order() // 9

    # Action on the other eight blocks (relabeled 0..7).
    spread_index = {s: i for i, s in enumerate(spread.spaces)}
    eight_perms = []
    for s in stab_matrices:
        bp = spread_block_perm(spread_index, s)
        if bp is None or bp[0] != 0:
            raise AssertionError("stabilizer element does not fix block 0")
        eight_perms.append(tuple(x - 1 for x in bp[1:]))
    other_order, _ = schreier_sims(eight_perms)
    other_transitive = len(orbit_of(0, eight_perms)) == 8

    # Action on the 15 nonzero points of the fixed 4-space.
    from .gf2 import nonzero_elements

    points = nonzero_elements(spread.spaces[0])
    point_index = {p: i for i, p in enumerate(points)}
    point_perms = []
    for s in stab_matrices:
        rows2 = matrix_mod2_rows(s)
        img = tuple(point_index[_apply_mod2(rows2, p)] for p in points)
        point_perms.append(img)
    points_order, _ = schreier_sims(point_perms)
    points_transitive = len(orbit_of(0, point_perms)) == 15

    neg = negation_isometry().matrix
    kernels_contain_negation = neg in seen or any(
        m == neg for m in stab_matrices
    )

    return OneBlockReport(
        stabilizer_order=stabilizer_order,
        other_blocks_image_order=other_order,
        other_blocks_transitive=other_transitive,
        points_image_order=points_order,
        points_transitive=points_transitive,
        kernel_order_blocks=stabilizer_order // other_order,
        kernel_order_points=stabilizer_order // points_order,
        kernels_contain_negation=kernels_contain_negation,
    )

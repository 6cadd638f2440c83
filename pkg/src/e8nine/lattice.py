"""Exact E8 lattice arithmetic: fixed basis, shells, and lattice recognition.

Every vector is a tuple of 8 integer coordinates in one fixed basis, so all
inner products are exact integers computed through the Gram matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .intmat import Mat, Vec, det, is_symmetric

# Gram matrix of the fixed E8 basis (simple-root basis, Bourbaki ordering:
# node 2 is the branch node attached to node 4). Even, determinant 1.
E8_GRAM: Mat = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)

ROOT_NORM = 2
LONG_NORM = 4


@dataclass(frozen=True)
class Lattice:
    """Rank-8 lattice described by the Gram matrix of its fixed basis."""

    gram: Mat
    rank: int = 8


@dataclass(frozen=True)
class RootPair:
    """Antipodal pair {r, -r} of norm-2 vectors, keyed by a canonical rep."""

    id: int
    rep: Vec


def build_lattice() -> Lattice:
    """Return the fixed E8 lattice. Deterministic across runs."""
    return Lattice(gram=E8_GRAM)


def inner(lat: Lattice, u: Vec, v: Vec) -> int:
    g = lat.gram
    return sum(u[i] * sum(g[i][j] * v[j] for j in range(8)) for i in range(8))


def norm(lat: Lattice, v: Vec) -> int:
    return inner(lat, v, v)


def neg(v: Vec) -> Vec:
    return tuple(-x for x in v)


class NotPositiveDefinite(ValueError):
    pass


def _ldl(gram: Mat) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Rational LDL data: Q(x) = sum_i d[i] * (x[i] + sum_{j>i} u[i][j] x[j])^2."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise NotPositiveDefinite("leading minor ratio %s <= 0" % d[i])
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                a[k][l] -= d[i] * u[i][k] * u[i][l]
                a[l][k] = a[k][l]
    return d, u


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


@lru_cache(maxsize=None)
def _int_ldl(gram: Mat):
    """Integer-scaled LDL: D * Q(x) = sum_i k[i] * (q[i]*x[i] + c_i(x))^2.

    c_i(x) = sum_{j>i} w[i][j] * x[j] with integer w, so the enumeration
    recursion below runs entirely in integer arithmetic.
    """
    n = len(gram)
    d, u = _ldl(gram)
    q = []
    w = []
    for i in range(n):
        qi = 1
        for j in range(i + 1, n):
            qi = _lcm(qi, u[i][j].denominator)
        q.append(qi)
        w.append([int(u[i][j] * qi) for j in range(n)])
    scale = 1
    for i in range(n):
        scale = _lcm(scale, d[i].denominator * q[i] * q[i])
    k = [
        d[i].numerator * (scale // (d[i].denominator * q[i] * q[i]))
        for i in range(n)
    ]
    return scale, k, q, w


def shell_of_gram(gram: Mat, target_norm: int) -> list[Vec]:
    """All nonzero integer vectors of the exact given norm under the form.

    Fincke-Pohst style recursion with exact integer bounds; the output is
    the full shell sorted by coordinate tuple, which is the determinism
    contract. Raises NotPositiveDefinite on indefinite input.
    """
    n = len(gram)
    scale, k, q, w = _int_ldl(gram)
    budget_total = target_norm * scale
    found: list[Vec] = []
    x = [0] * n

    def descend(level: int, budget: int) -> None:
        if level < 0:
            if budget == 0 and any(x):
                found.append(tuple(x))
            return
        ki = k[level]
        qi = q[level]
        wrow = w[level]
        c = sum(wrow[j] * x[j] for j in range(level + 1, n))
        # |qi*x + c| <= sqrt(budget/ki); over-approximate then filter exactly.
        s = math.isqrt(budget * ki) // ki + 1
        lo = -(s + c) // qi - 1
        hi = (s - c) // qi + 1
        for xi in range(lo, hi + 1):
            t = qi * xi + c
            term = ki * t * t
            if term <= budget:
                x[level] = xi
                descend(level - 1, budget - term)
        x[level] = 0

    descend(n - 1, budget_total)
    found.sort()
    return found


@lru_cache(maxsize=None)
def _shell_cached(gram: Mat, target_norm: int) -> tuple[Vec, ...]:
    return tuple(shell_of_gram(gram, target_norm))


def enumerate_shell(lat: Lattice, target_norm: int) -> list[Vec]:
    """The norm-2 or norm-4 shell of the lattice, in sorted coordinate order."""
    if target_norm not in (ROOT_NORM, LONG_NORM):
        raise ValueError("unsupported shell norm %r" % (target_norm,))
    return list(_shell_cached(lat.gram, target_norm))


@lru_cache(maxsize=None)
def _root_pairs_cached(gram: Mat) -> tuple[RootPair, ...]:
    lat = Lattice(gram=gram)
    roots = enumerate_shell(lat, ROOT_NORM)
    reps = sorted({max(v, neg(v)) for v in roots})
    if 2 * len(reps) != len(roots):
        raise AssertionError("roots do not split into antipodal pairs")
    return tuple(RootPair(id=i, rep=r) for i, r in enumerate(reps))


def root_pairs(lat: Lattice) -> list[RootPair]:
    """The 120 antipodal root pairs, ids fixed by sorted canonical reps.

    The canonical representative is the lexicographically larger of {r, -r}.
    """
    return list(_root_pairs_cached(lat.gram))


def _recognize(gram: Mat, want_det: int, want_min_count: int) -> bool:
    if not is_symmetric(gram):
        raise ValueError("Gram matrix is not symmetric")
    if any(gram[i][i] % 2 for i in range(len(gram))):
        return False
    try:
        minimal = _shell_cached(gram, 2)
    except NotPositiveDefinite:
        return False
    if det(gram) != want_det:
        return False
    return len(minimal) == want_min_count


@lru_cache(maxsize=None)
def recognize_even_unimodular_e8(gram: Mat) -> bool:
    """True iff gram presents E8: even, positive definite, det 1, 240 minimal.

    Rank-8 even unimodular lattices are unique, so the minimal-vector count
    is only a cross-check; det 1 plus evenness already pins the isometry type.
    """
    return _recognize(gram, want_det=1, want_min_count=240)


@lru_cache(maxsize=None)
def recognize_d8(gram: Mat) -> bool:
    """True iff gram presents D8: even, positive definite, det 4, 112 minimal."""
    return _recognize(gram, want_det=4, want_min_count=112)

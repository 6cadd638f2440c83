"""Exact integer and rational matrix helpers (no floating point anywhere)."""

from __future__ import annotations

from fractions import Fraction

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_neg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in a)


def row_times_mat(v: Vec, m: Mat) -> Vec:
    """Row vector times matrix: (v M)_j = sum_i v_i M_ij."""
    n = len(m[0])
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(n))


def is_symmetric(m: Mat) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def det(m: Mat) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _fraction_inverse(m: Mat) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def adjugate(m: Mat) -> Mat:
    """Adjugate matrix: m @ adjugate(m) == det(m) * I, all entries integer."""
    d = det(m)
    if d == 0:
        raise ZeroDivisionError("adjugate of singular matrix")
    inv = _fraction_inverse(m)
    adj = []
    for row in inv:
        out = []
        for x in row:
            y = x * d
            if y.denominator != 1:
                raise ArithmeticError("adjugate entry is not integral")
            out.append(y.numerator)
        adj.append(tuple(out))
    return tuple(adj)


def hnf(rows: list[Vec]) -> Mat:
    """Row-style Hermite normal form of the lattice spanned by integer rows.

    Returns the canonical upper-echelon basis: positive pivots, entries above
    each pivot reduced into [0, pivot). Zero rows are dropped, so two row sets
    span the same integer lattice iff their HNFs are equal.
    """
    if not rows:
        return ()
    ncols = len(rows[0])
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(ncols):
        live = [r for r in work if r[col] != 0]
        if not live:
            continue
        # Euclidean reduction on the current column.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            r0 = live[0]
            for r in live[1:]:
                q = r[col] // r0[col]
                for j in range(ncols):
                    r[j] -= q * r0[j]
            live = [r for r in live if r[col] != 0]
            work = [r for r in work if any(r)]
        pivot_row = live[0]
        if pivot_row[col] < 0:
            for j in range(ncols):
                pivot_row[j] = -pivot_row[j]
        work.remove(pivot_row)
        # Reduce entries above the new pivot.
        for r in basis:
            q = r[col] // pivot_row[col]
            if q:
                for j in range(ncols):
                    r[j] -= q * pivot_row[j]
        basis.append(pivot_row)
    if any(any(r) for r in work):
        raise AssertionError("HNF elimination left nonzero residue")
    return tuple(tuple(r) for r in basis)


class BasisSolver:
    """Exact membership/coordinate queries for the lattice spanned by 8 rows."""

    def __init__(self, rows: list[Vec]):
        self.rows = tuple(rows)
        self.mat: Mat = tuple(rows)
        self.det = det(self.mat)
        if self.det == 0:
            raise ZeroDivisionError("basis rows are dependent")
        self.adj = adjugate(self.mat)

    def rational_coords(self, v: Vec) -> tuple[tuple[int, int], ...]:
        """Coordinates of v in the basis, as (numerator, denominator) pairs."""
        num = row_times_mat(v, self.adj)
        return tuple((x, self.det) for x in num)

    def integer_coords(self, v: Vec) -> Vec | None:
        """Integer coordinates of v in the basis, or None if v is outside."""
        num = row_times_mat(v, self.adj)
        if any(x % self.det for x in num):
            return None
        return tuple(x // self.det for x in num)

    def contains(self, v: Vec) -> bool:
        return self.integer_coords(v) is not None


def gram_of_rows(gram: Mat, rows: list[Vec]) -> Mat:
    """Gram matrix of the given vectors under x^T gram y."""
    gy = [row_times_mat(r, gram) for r in rows]
    return tuple(
        tuple(sum(a * b for a, b in zip(r, g)) for g in gy) for r in rows
    )


def halve_matrix(m: Mat) -> Mat:
    """Divide every entry by 2, insisting on exact evenness."""
    for row in m:
        for x in row:
            if x % 2:
                raise ArithmeticError("matrix entry %d is odd" % x)
    return tuple(tuple(x // 2 for x in row) for row in m)

"""Small exact linear algebra over the rationals (lists of RAT)."""

from __future__ import annotations

from ayrel.field import RAT

_R0 = RAT(0)
_R1 = RAT(1)


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(map(RAT, r)) for r in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != _R0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = _R1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != _R0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def solve(matrix, rhs):
    """One solution x of matrix @ x = rhs, or None if inconsistent."""
    m = len(matrix)
    if m == 0:
        return [] if all(b == 0 for b in rhs) else None
    n = len(matrix[0])
    aug = [list(map(RAT, row)) + [RAT(rhs[i])] for i, row in
           enumerate(matrix)]
    rows, pivots = rref(aug)
    for row in rows:
        if all(x == _R0 for x in row[:-1]) and row[-1] != _R0:
            return None
    x = [_R0] * n
    for r, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = rows[r][-1]
    return x


def kernel_basis(matrix):
    """Basis of the right kernel of matrix."""
    if not matrix:
        return []
    n = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [_R0] * n
        v[fc] = _R1
        for r, c in enumerate(pivots):
            v[c] = -rows[r][fc]
        basis.append(v)
    return basis


def mat_vec(matrix, vec):
    return [sum((RAT(a) * RAT(b) for a, b in zip(row, vec)), _R0)
            for row in matrix]


def invert(matrix):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(matrix)
    aug = [list(map(RAT, row)) + [_R1 if i == j else _R0
                                  for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rows]


def is_integral(vec):
    return all(RAT(x).denominator == 1 for x in vec)


def integer_solve(matrix, rhs):
    """One integer solution x of matrix @ x = rhs, or None.

    matrix entries and rhs must be integers; uses a column Hermite-style
    reduction with unimodular column tracking.
    """
    m = len(matrix)
    if m == 0:
        return []
    n = len(matrix[0])
    a = [[int(x) for x in row] for row in matrix]
    b = [int(x) for x in rhs]
    # u tracks column operations: columns of the working matrix are
    # a_orig @ u_cols
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    def col_addmul(j, k, q):
        # col_j += q * col_k
        for row in a:
            row[j] += q * row[k]
        for row in u:
            row[j] += q * row[k]

    def col_neg(j):
        for row in a:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    r = 0
    pivots = []
    for i in range(m):
        # find a nonzero entry in row i among columns >= r and reduce the
        # whole row to a single pivot by gcd column operations
        while True:
            cols = [j for j in range(r, n) if a[i][j] != 0]
            if not cols:
                break
            j0 = min(cols, key=lambda j: abs(a[i][j]))
            if a[i][j0] < 0:
                col_neg(j0)
            done = True
            for j in cols:
                if j == j0:
                    continue
                q = a[i][j] // a[i][j0]
                col_addmul(j, j0, -q)
                if a[i][j] != 0:
                    done = False
            if done:
                col_swap(r, j0)
                pivots.append((i, r))
                r += 1
                break
    # back-substitute on the staircase
    x = [0] * n
    resid = list(b)
    for (i, j) in pivots:
        # residual row i must be divisible by the pivot
        val = resid[i]
        piv = a[i][j]
        if val % piv != 0:
            return None
        q = val // piv
        x[j] = q
        for i2 in range(m):
            resid[i2] -= q * a[i2][j]
    if any(v != 0 for v in resid):
        return None
    # x is in working coordinates; translate through u
    out = [0] * n
    for i in range(n):
        out[i] = sum(u[i][j] * x[j] for j in range(n))
    return out

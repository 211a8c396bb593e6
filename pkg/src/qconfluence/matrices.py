"""Small dense matrices over rings with +, -, *: p-adic scalars, disk series,
or analytic elements.  Plain list-of-lists, duck-typed entries."""

from __future__ import annotations

from .padic import PAdicElement, PrecisionError, POS_INF


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A):
    return [[-a for a in row] for row in A]


def mat_scalar(A, x):
    return [[a * x for a in row] for row in A]


def mat_map(A, f):
    return [[f(a) for a in row] for row in A]


def mat_identity(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_min_valuation(A):
    best = POS_INF
    for row in A:
        for a in row:
            v = a.min_valuation() if isinstance(a, PAdicElement) else a.min_coeff_valuation()
            if v < best:
                best = v
    return best


def mat_min_diff_valuation(A, B):
    return mat_min_valuation(mat_sub(A, B))


def kron(A, B):
    """Kronecker product, lexicographic basis e_i (x) f_j."""
    out = []
    for ra in A:
        for rb in B:
            out.append([a * b for a in ra for b in rb])
    return out


def scalar_mat_inverse(A: list[list[PAdicElement]]) -> list[list[PAdicElement]]:
    """Inverse of a p-adic scalar matrix by Gaussian elimination with
    largest-norm pivoting."""
    n = len(A)
    fd = A[0][0].fd
    work = [list(row) for row in A]
    inv = mat_identity(n, fd.one(), fd.zero())
    for col in range(n):
        piv, best = None, None
        for r in range(col, n):
            ln = work[r][col].lognorm()
            if best is None or ln > best:
                best, piv = ln, r
        if piv is None or work[piv][col].is_zero():
            raise PrecisionError("matrix not invertible at working precision")
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        d = work[col][col].inverse()
        work[col] = [x * d for x in work[col]]
        inv[col] = [x * d for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            factor = work[r][col]
            if factor.is_zero():
                continue
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return inv


def series_mat_inverse(A, M: int | None = None):
    """Inverse of a matrix of DiskSeries whose constant-term matrix is
    invertible, by the coefficient recurrence B_k = -A0inv sum_{j<k} A_{k-j} B_j."""
    from .series import DiskSeries
    n = len(A)
    fd = A[0][0].fd
    center = A[0][0].center
    if M is None:
        M = max(max(e.M for e in row) for row in A)
    coeffs = [[[e.truncate(M).coeffs[k] for e in row] for row in A] for k in range(M + 1)]
    A0inv = scalar_mat_inverse(coeffs[0])
    B = [A0inv]
    zero_mat = [[fd.zero()] * n for _ in range(n)]
    for k in range(1, M + 1):
        acc = zero_mat
        for j in range(k):
            acc = mat_add(acc, mat_mul(coeffs[k - j], B[j]))
        B.append(mat_neg(mat_mul(A0inv, acc)))
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(DiskSeries(center, [B[k][i][j] for k in range(M + 1)]))
        out.append(row)
    return out

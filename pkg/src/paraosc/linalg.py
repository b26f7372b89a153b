"""Small dense linear algebra that works for both coefficient rings.

Exact matrices are numpy object arrays of :class:`QScalar`; float matrices
are ordinary complex arrays.  Only what the frame and weight solvers need.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SingularMatrixError",
    "InconsistentSystemError",
    "zeros",
    "eye",
    "diag",
    "as_matrix",
    "dagger",
    "inverse",
    "kron",
    "max_abs",
    "is_zero_matrix",
    "solve_linear",
    "rank",
]


class SingularMatrixError(ValueError):
    pass


class InconsistentSystemError(ValueError):
    pass


def zeros(ring, n, m=None):
    m = n if m is None else m
    if not ring.exact:
        return np.zeros((n, m), dtype=complex)
    out = np.empty((n, m), dtype=object)
    z = ring.zero()
    for i in range(n):
        for j in range(m):
            out[i, j] = z
    return out


def eye(ring, n):
    out = zeros(ring, n)
    for i in range(n):
        out[i, i] = ring.one()
    return out


def diag(ring, values):
    out = zeros(ring, len(values))
    for i, v in enumerate(values):
        out[i, i] = ring.scalar(v)
    return out


def as_matrix(ring, rows):
    """Lift a nested list of numbers (ints, Fractions, Gaussian complexes)."""
    rows = [list(r) for r in rows]
    out = zeros(ring, len(rows), len(rows[0]))
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = ring.scalar(v)
    return out


def dagger(ring, a):
    if not ring.exact:
        return a.conj().T
    out = np.empty((a.shape[1], a.shape[0]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[j, i] = ring.conj(a[i, j])
    return out


def inverse(ring, a):
    """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
    n = a.shape[0]
    if not ring.exact:
        if np.linalg.cond(a) > 1e12:
            raise SingularMatrixError("matrix not invertible")
        return np.linalg.inv(a)
    work = [[a[i, j] for j in range(n)] + [ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not ring.is_zero(work[r][col])), None)
        if piv is None:
            raise SingularMatrixError("matrix not invertible")
        work[col], work[piv] = work[piv], work[col]
        inv_p = ring.inv(work[col][col])
        work[col] = [x * inv_p for x in work[col]]
        for r in range(n):
            if r != col and not ring.is_zero(work[r][col]):
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = work[i][n + j]
    return out


def kron(ring, a, b):
    if not ring.exact:
        return np.kron(a, b)
    n1, m1 = a.shape
    n2, m2 = b.shape
    out = np.empty((n1 * n2, m1 * m2), dtype=object)
    for i in range(n1):
        for j in range(m1):
            for k in range(n2):
                for l in range(m2):
                    out[i * n2 + k, j * m2 + l] = a[i, j] * b[k, l]
    return out


def max_abs(ring, a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if not ring.exact:
        return float(np.max(np.abs(a)))
    return max(abs(ring.to_complex(x)) for x in a.flat)


def is_zero_matrix(ring, a) -> bool:
    if not ring.exact:
        return max_abs(ring, a) <= 1e-10
    return all(ring.is_zero(x) for x in np.asarray(a).flat)


def solve_linear(ring, rows, rhs):
    """Solve ``rows @ x = rhs`` by Gaussian elimination.

    Returns ``(x, rank)`` where free unknowns are set to zero.  Raises
    :class:`InconsistentSystemError` when no solution exists.  The float
    ring uses partial pivoting by magnitude.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        if ring.exact:
            piv = next((i for i in range(r, m) if not ring.is_zero(work[i][col])), None)
        else:
            best = max(range(r, m), key=lambda i: abs(work[i][col]))
            piv = best if abs(work[best][col]) > 1e-10 else None
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv_p = ring.inv(work[r][col])
        work[r] = [x * inv_p for x in work[r]]
        for i in range(m):
            if i != r and not ring.is_zero(work[i][col]):
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
    for i in range(r, m):
        if not ring.is_zero(work[i][n]):
            raise InconsistentSystemError("linear system has no solution")
    x = [ring.zero() for _ in range(n)]
    for i, col in enumerate(pivots):
        x[col] = work[i][n]
    return x, len(pivots)


def rank(ring, a) -> int:
    """Rank by elimination (exact for the exact ring)."""
    a = np.asarray(a)
    rows = [list(r) for r in a]
    _, r = solve_linear(ring, rows, [ring.zero()] * len(rows))
    return r

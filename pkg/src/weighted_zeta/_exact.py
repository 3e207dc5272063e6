"""Helpers for the exact (rational) arithmetic mode."""

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

# Largest dimension for which exact matrix arithmetic is attempted.
EXACT_DIM_CAP = 64


def to_fraction(x):
    """Convert a weight to a Fraction, reading floats by their shortest decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"non-finite value {x!r} has no rational form")
        return Fraction(repr(float(x)))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def fraction_array(M):
    """Object-dtype copy of ``M`` with Fraction entries."""
    M = np.asarray(M, dtype=object)
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        out[idx] = to_fraction(x)
    return out


def common_denominator(values) -> int:
    d = 1
    for x in values:
        d = math.lcm(d, to_fraction(x).denominator)
    return d


def integer_scaled(M):
    """``(D * M, D)`` with ``D`` the least common denominator; entries are Python ints."""
    F = fraction_array(M)
    D = common_denominator(F.ravel())
    out = np.empty(F.shape, dtype=object)
    for idx, x in np.ndenumerate(F):
        out[idx] = int(x * D)
    return out, D


def fraction_identity(n):
    out = np.empty((n, n), dtype=object)
    out[...] = Fraction(0)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def exact_trace(M):
    total = Fraction(0)
    for i in range(M.shape[0]):
        total += M[i, i]
    return total


def solve_rational(A, b):
    """Solve the square system ``A x = b`` exactly; returns None when singular."""
    n = len(A)
    aug = [[to_fraction(A[i][j]) for j in range(n)] + [to_fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def column_space(M):
    """Exact basis (as a list of column vectors) of the column space of ``M``."""
    rows, cols = M.shape
    work = [[to_fraction(M[i, j]) for i in range(rows)] for j in range(cols)]
    # Gaussian elimination on the transposed matrix: row space of M^T.
    basis = []
    pivots = []
    for vec in work:
        v = list(vec)
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((i for i, x in enumerate(v) if x != 0), None)
        if nz is not None:
            basis.append(v)
            pivots.append(nz)
    return basis


def null_space(M):
    """Exact basis of the right null space of the matrix ``M`` (list of rows)."""
    rows = [[to_fraction(x) for x in r] for r in M]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivot_cols):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis

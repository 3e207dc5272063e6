"""The Bass transfer operator on the edge basis.

Orientation convention: ``A[f, e] = w(e, f)``, i.e. column ``e`` holds the
coordinates of ``T(e) = sum_f w(e, f) f``.  Traces and spectra do not see
the transposition, but applying ``T`` to a vector does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ._exact import EXACT_DIM_CAP, integer_scaled, to_fraction
from .errors import InvalidGraphError
from .graph import WeightedGraph, validate


@dataclass(frozen=True, eq=False)
class BassMatrix:
    A: sp.csr_array
    graph: WeightedGraph | None = None

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def dense(self) -> np.ndarray:
        return self.A.toarray()

    @cached_property
    def exact(self) -> np.ndarray:
        """Object-dtype matrix of Fractions; requires rational weights."""
        n = self.dim
        M = np.empty((n, n), dtype=object)
        M[...] = Fraction(0)
        if self.graph is not None:
            for (e, f), w in self.graph.weights.items():
                if w != 0:
                    M[f, e] = to_fraction(w)
        else:
            coo = self.A.tocoo()
            for i, j, x in zip(coo.row, coo.col, coo.data):
                M[i, j] = to_fraction(x)
        return M

    def supports_exact(self) -> bool:
        if self.dim > EXACT_DIM_CAP:
            return False
        if self.graph is not None:
            return self.graph.is_rational()
        return bool(np.all(np.isfinite(self.A.data)))


def build_bass(g: WeightedGraph) -> BassMatrix:
    report = validate(g)
    if not report.ok:
        kinds = sorted({v.kind for v in report.violations})
        raise InvalidGraphError(f"graph failed validation: {', '.join(kinds)}")
    n = g.num_edges
    rows, cols, vals = [], [], []
    for (e, f), w in sorted(g.weights.items()):
        if w != 0:
            rows.append(f)
            cols.append(e)
            vals.append(float(w))
    A = sp.csr_array((vals, (rows, cols)), shape=(n, n), dtype=float)
    return BassMatrix(A, g)


def from_matrix(M) -> BassMatrix:
    """Wrap an arbitrary nonnegative square matrix (no source graph)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expected a square matrix")
    if np.any(M < 0):
        raise ValueError("matrix has negative entries")
    return BassMatrix(sp.csr_array(M))


def apply(T: BassMatrix, v) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (T.dim,):
        raise ValueError(f"dimension mismatch: vector of shape {v.shape}, operator of dim {T.dim}")
    return T.A @ v


def _check_exact(T: BassMatrix):
    if not T.supports_exact():
        raise ValueError(
            f"exact mode needs rational weights and dim <= {EXACT_DIM_CAP} (dim = {T.dim})"
        )


def power_traces(T: BassMatrix, n: int, exact: bool = False) -> list:
    """``[tr A, tr A^2, ..., tr A^n]`` by repeated multiplication."""
    if exact:
        _check_exact(T)
        return matrix_power_traces(T.exact, n, exact=True)
    return matrix_power_traces(T.A, n)


def matrix_power_traces(M, n: int, exact: bool = False) -> list:
    """Power traces of a sparse, dense float, or object (Fraction) matrix."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    if exact:
        # integer arithmetic on D*M, rescaled once per trace
        Z, D = integer_scaled(M)
        P = Z
        for m in range(1, n + 1):
            if m > 1:
                P = P @ Z
            out.append(Fraction(sum(P[i, i] for i in range(P.shape[0])), D**m))
        return out
    P = M
    for m in range(1, n + 1):
        if m > 1:
            P = P @ M
        out.append(math.fsum(P.diagonal()))
    return out


def trace_power(T: BassMatrix, n: int, exact: bool = False):
    """Trace of the ``n``-th power; ``n >= 1``."""
    if n < 1:
        raise ValueError("trace_power needs n >= 1")
    return power_traces(T, n, exact)[-1]


def newton_coefficients(traces, exact: bool = False) -> list:
    """Coefficients of ``det(1 - uA)`` from the power traces of ``A``.

    ``c_0 = 1`` and ``c_n = -(1/n) sum_{m=1..n} tr(A^m) c_{n-m}``.
    """
    one = Fraction(1) if exact else 1.0
    c = [one]
    for n in range(1, len(traces) + 1):
        if exact:
            s = sum((traces[m - 1] * c[n - m] for m in range(1, n + 1)), Fraction(0))
            c.append(-s / n)
        else:
            s = math.fsum(traces[m - 1] * c[n - m] for m in range(1, n + 1))
            c.append(-s / n)
    return c


def fredholm_coeffs(T: BassMatrix, deg: int | None = None, exact: bool = False) -> list:
    """Coefficients ``c_0..c_deg`` of the polynomial ``det(1 - uT)``.

    ``deg`` defaults to ``dim``; higher coefficients vanish and may be
    requested as a self-check.
    """
    if deg is None:
        deg = T.dim
    if deg < 0:
        raise ValueError("deg must be nonnegative")
    return newton_coefficients(power_traces(T, deg, exact), exact)


def matrix_fredholm(M, deg: int | None = None, exact: bool = False) -> list:
    """``det(1 - uM)`` coefficients for a bare square matrix."""
    if deg is None:
        deg = M.shape[0]
    return newton_coefficients(matrix_power_traces(M, deg, exact), exact)

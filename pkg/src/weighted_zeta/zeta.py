"""The weighted Ihara zeta function, stored through its reciprocal polynomial."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bass import build_bass, fredholm_coeffs
from .cycles import CycleClass, count_table, enumerate_cycles
from .errors import DegenerateRadiusError, SingularPointError
from .graph import WeightedGraph
from .spectral import poly_mul, spectral_radius

POLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ZetaFunction:
    """``Z(u)`` held as ``inverse_poly``, the coefficients of ``Z(u)^-1 = det(1 - uT)``."""

    inverse_poly: tuple
    dim: int
    graph: WeightedGraph | None = None
    exact: bool = False

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.inverse_poly) if c != 0]
        return max(nz) if nz else -1

    def inverse(self, u: complex) -> complex:
        acc = 0j
        for c in reversed(self.inverse_poly):
            acc = acc * u + complex(c)
        return acc

    def __call__(self, u: complex) -> complex:
        d = self.inverse(u)
        if abs(d) < POLE_TOL:
            raise SingularPointError([("u", u)], f"u = {u} is a pole of Z (|Z(u)^-1| = {abs(d):.3g})")
        return 1 / d


def zeta(g: WeightedGraph, exact: bool = False) -> ZetaFunction:
    T = build_bass(g)
    coeffs = fredholm_coeffs(T, exact=exact)
    return ZetaFunction(tuple(coeffs), T.dim, g, exact)


def log_derivative_series(z: ZetaFunction, M: int) -> list:
    """``[N_1, ..., N_M]`` with ``u Z'(u)/Z(u) = sum_m N_m u^m``.

    Newton recursion on ``P = Z^-1 = 1 + c_1 u + ...``:
    ``N_m = -m c_m - sum_{k=1}^{m-1} c_k N_{m-k}``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    c = list(z.inverse_poly)
    if c[0] != 1:
        raise ValueError("inverse polynomial must have constant term 1")
    zero = Fraction(0) if z.exact else 0.0
    c += [zero] * max(0, M + 1 - len(c))
    N = [zero]
    for m in range(1, M + 1):
        terms = [c[k] * N[m - k] for k in range(1, m)]
        s = sum(terms, zero) if z.exact else math.fsum(terms)
        N.append(-m * c[m] - s)
    return N[1:]


@dataclass(frozen=True)
class IdentityReport:
    series: tuple
    census: tuple
    max_deviation: float
    tolerance: float
    passed: bool


def verify_determinant_identity(g: WeightedGraph, M: int, exact: bool = False,
                                classes: list[CycleClass] | None = None) -> IdentityReport:
    """Compare the determinant-side series with brute-force cycle counts up to ``M``."""
    series = log_derivative_series(zeta(g, exact), M)
    table = count_table(g, M, exact=exact, classes=classes)
    census = table.N[1:]
    devs = [abs(a - b) for a, b in zip(series, census)]
    dev = max(devs) if devs else 0
    scale = max((abs(x) for x in census), default=0)
    tol = 0.0 if exact else 1e-8 * (1 + float(scale))
    return IdentityReport(tuple(series), tuple(census), float(dev), tol, dev <= tol)


def euler_product(g: WeightedGraph, degree: int, exact: bool = False,
                  classes: list[CycleClass] | None = None) -> list:
    """``prod_{c0} (1 - w(c0) u^l(c0))`` over primitive classes, truncated at ``degree``."""
    if classes is None:
        classes = enumerate_cycles(g, max(degree, 1), exact=exact)
    one = Fraction(1) if exact else 1.0
    poly = [one] + [one * 0] * degree
    for c in classes:
        if not c.is_primitive or c.length > degree:
            continue
        factor = [one] + [one * 0] * (c.length - 1) + [-c.weight]
        poly = poly_mul(poly, factor)[: degree + 1]
    return poly


@dataclass(frozen=True)
class RadiusReport:
    estimate: float
    weight_series_estimate: float | None
    last_index: int
    spectral_radius: float
    relative_gap: float


def radius_characterization(g: WeightedGraph, M: int) -> RadiusReport:
    """Root-test estimate of ``r`` from the census versus the spectral radius.

    ``estimate`` is ``N_m^(1/m)`` at the largest ``m <= M`` with ``N_m > 0``;
    ``weight_series_estimate`` is the same for ``a_m = sum_{l(c)=m} w(c)``,
    the series whose radius of convergence is ``1/r``.
    """
    classes = enumerate_cycles(g, M)
    table = count_table(g, M, classes=classes)
    a = [0.0] * (M + 1)
    for c in classes:
        a[c.length] += float(c.weight)
    pos = [m for m in range(1, M + 1) if table.N[m] > 0]
    if not pos:
        raise DegenerateRadiusError(f"all N_m vanish for m <= {M}; the radius is undefined")
    m_star = pos[-1]
    est = float(table.N[m_star]) ** (1.0 / m_star)
    a_pos = [m for m in range(1, M + 1) if a[m] > 0]
    west = a[a_pos[-1]] ** (1.0 / a_pos[-1]) if a_pos else None
    r = spectral_radius(build_bass(g))
    gap = abs(est - r) / r if r > 0 else math.inf
    return RadiusReport(est, west, m_star, r, gap)

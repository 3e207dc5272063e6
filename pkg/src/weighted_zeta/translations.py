"""Commuting translation families and their multivariate zeta functions.

A translation family is a set of ``d`` pairwise commuting nonnegative
matrices ``G_1..G_d`` together with a finite-index sublattice ``L0`` of
``Z^d``.  For ``k`` in the monoid ``N^d(L0)`` the translation operator is
``T_k = G_1^{k_1} ... G_d^{k_d}``; the semigroup law ``T_k T_l = T_{k+l}``
is exactly commutativity.  The family stands in for the chamber-shift
operators on a weighted building quotient; the tensor-product generator
``product_family`` realizes quotients of products of trees.

Family JSON format::

    {"d": 2, "dim": 10,
     "generators": [[...row-major...], [...]],
     "lattice": {"gens": [[1, 0], [0, 1]]}}

``lattice.gens`` is a d x d integer matrix given as a list of rows; its
*columns* generate ``L0``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.linalg as sla
from scipy.cluster.hierarchy import fcluster, linkage

from ._exact import (
    column_space,
    exact_trace,
    fraction_array,
    fraction_identity,
    null_space,
    solve_rational,
)
from .bass import BassMatrix, build_bass
from .errors import (
    GraphFormatError,
    LatticeMembershipError,
    NonCommutingError,
    NumericalError,
    SingularPointError,
)
from .graph import fixture

EXACT_SPECTRUM_DIM = 32
TAU_SING = 1e-9


# --- lattices --------------------------------------------------------------

def _int_det(M) -> int:
    n = len(M)
    A = [[Fraction(int(x)) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return int(det)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^d`` spanned by the columns of ``gens``."""

    gens: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in row) for row in self.gens)
        object.__setattr__(self, "gens", gens)
        d = len(gens)
        if d == 0 or any(len(row) != d for row in gens):
            raise ValueError("lattice generator matrix must be square and nonempty")
        if self.index == 0:
            raise ValueError("lattice generators are linearly dependent (zero determinant)")

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.gens)

    @cached_property
    def index(self) -> int:
        return abs(_int_det(self.gens))

    def contains(self, k) -> bool:
        x = solve_rational(self.gens, list(k))
        return x is not None and all(v.denominator == 1 for v in x)

    @cached_property
    def periods(self) -> tuple[int, ...]:
        """Smallest ``m_j >= 1`` with ``m_j e_j`` in the lattice."""
        out = []
        for j in range(self.d):
            for m in range(1, self.index + 1):
                k = [0] * self.d
                k[j] = m
                if self.contains(k):
                    out.append(m)
                    break
        return tuple(out)

    def residues(self) -> list[tuple[int, ...]]:
        """Lattice points in the box ``prod_j [1, m_j]``."""
        box = [range(1, m + 1) for m in self.periods]
        return [k for k in itertools.product(*box) if self.contains(k)]

    def points(self, upper, lower: int = 1):
        """Lattice points ``k`` with ``lower <= k_j <= upper_j``."""
        if isinstance(upper, int):
            upper = (upper,) * self.d
        box = [range(lower, u + 1) for u in upper]
        return [k for k in itertools.product(*box) if self.contains(k)]


# --- families --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TranslationFamily:
    generators: tuple[np.ndarray, ...]
    lattice: Lattice

    @property
    def d(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return self.generators[0].shape[0]

    @cached_property
    def scale(self) -> float:
        return max(1.0, max(float(np.max(np.abs(G))) for G in self.generators))

    @cached_property
    def exact_generators(self) -> tuple[np.ndarray, ...]:
        return tuple(fraction_array(G) for G in self.generators)

    @cached_property
    def radii(self) -> tuple[float, ...]:
        return tuple(float(np.max(np.abs(np.linalg.eigvals(G)))) if G.size else 0.0
                     for G in self.generators)


def _as_matrix(G) -> np.ndarray:
    if isinstance(G, BassMatrix):
        return G.dense()
    return np.array(G, dtype=float)


def build_family(generators, lattice: Lattice | None = None, tol: float = 1e-10,
                 exact: bool = False) -> TranslationFamily:
    """Validate and wrap commuting nonnegative generators.

    Commutation is certified to ``tol`` relative to the size of the
    products, or exactly with ``exact=True``.
    """
    gens = tuple(_as_matrix(G) for G in generators)
    if not gens:
        raise ValueError("a family needs at least one generator")
    n = gens[0].shape[0]
    for j, G in enumerate(gens):
        if G.ndim != 2 or G.shape != (n, n):
            raise ValueError(f"generator {j} has shape {G.shape}, expected ({n}, {n})")
        if not np.all(np.isfinite(G)):
            raise ValueError(f"generator {j} has non-finite entries")
        if np.any(G < 0):
            raise ValueError(f"generator {j} has negative entries")
    if lattice is None:
        lattice = Lattice.standard(len(gens))
    if lattice.d != len(gens):
        raise ValueError(f"lattice rank {lattice.d} does not match {len(gens)} generators")
    fam = TranslationFamily(gens, lattice)
    for i, j in itertools.combinations(range(len(gens)), 2):
        if exact:
            Gi, Gj = fam.exact_generators[i], fam.exact_generators[j]
            diff = Gi @ Gj - Gj @ Gi
            dev = max((abs(x) for x in diff.flat), default=Fraction(0))
            if dev != 0:
                raise NonCommutingError((i, j), float(dev))
        else:
            P, Q = gens[i] @ gens[j], gens[j] @ gens[i]
            dev = float(np.max(np.abs(P - Q))) if n else 0.0
            if dev > tol * max(1.0, float(np.max(np.abs(P))) if n else 1.0):
                raise NonCommutingError((i, j), dev)
    return fam


def product_family(factors, lattice: Lattice | None = None) -> TranslationFamily:
    """Tensor-product family ``G_j = I x ... x A_j x ... x I`` from square factors."""
    mats = [_as_matrix(A) for A in factors]
    dims = [A.shape[0] for A in mats]
    gens = []
    for j, A in enumerate(mats):
        G = np.ones((1, 1))
        for i, n in enumerate(dims):
            G = np.kron(G, A if i == j else np.eye(n))
        gens.append(G)
    return build_family(gens, lattice)


def f1_family(even_sublattice: bool = False) -> TranslationFamily:
    """Bass(G3) x Bass(G2(1,1)), optionally over ``{k : k_1 + k_2 even}``."""
    lattice = Lattice(((1, 1), (1, -1))) if even_sublattice else None
    return product_family([build_bass(fixture("G3")), build_bass(fixture("G2", 1, 1))], lattice)


def _check_index(fam: TranslationFamily, k) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if len(k) != fam.d:
        raise ValueError(f"index {k} has length {len(k)}, expected {fam.d}")
    if any(x < 0 for x in k):
        raise LatticeMembershipError(f"index {k} has negative entries")
    if any(k) and not fam.lattice.contains(k):
        raise LatticeMembershipError(f"index {k} is not in the sublattice")
    return k


def _exact_power(M, k: int):
    result = fraction_identity(M.shape[0])
    base = M
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def translation_op(fam: TranslationFamily, k, exact: bool = False) -> np.ndarray:
    """``T_k = prod_j G_j^{k_j}``; ``T_0`` is the identity."""
    k = _check_index(fam, k)
    if exact:
        out = fraction_identity(fam.dim)
        for G, kj in zip(fam.exact_generators, k):
            if kj:
                out = out @ _exact_power(G, kj)
        return out
    out = np.eye(fam.dim)
    for G, kj in zip(fam.generators, k):
        if kj:
            out = out @ np.linalg.matrix_power(G, kj)
    return out


def N_of_k(fam: TranslationFamily, k, exact: bool = False):
    """Weighted count of closed geodesics in position ``k``: ``tr T_k``."""
    k = _check_index(fam, k)
    if min(k) < 1:
        raise LatticeMembershipError(f"N(k) needs every k_j >= 1, got {k}")
    T = translation_op(fam, k, exact)
    return exact_trace(T) if exact else math.fsum(np.diag(T))


# --- rationality -----------------------------------------------------------

def _upow(u, k):
    out = 1
    for uj, kj in zip(u, k):
        out = out * uj**kj
    return out


@dataclass(frozen=True, eq=False)
class RationalOperatorFunction:
    """``T(u) = (sum_r u^r T_r) prod_j (1 - u_j^{m_j} T_{m_j e_j})^-1``."""

    periods: tuple[int, ...]
    residues: tuple[tuple[tuple[int, ...], np.ndarray], ...]
    denominators: tuple[np.ndarray, ...]
    family: TranslationFamily = field(repr=False)

    def numerator(self, u) -> np.ndarray:
        n = self.family.dim
        out = np.zeros((n, n), dtype=complex)
        for r, Tr in self.residues:
            out += _upow(u, r) * Tr
        return out

    def __call__(self, u) -> np.ndarray:
        u = tuple(complex(x) for x in u)
        out = self.numerator(u)
        eye = np.eye(self.family.dim)
        for uj, mj, D in zip(u, self.periods, self.denominators):
            out = out @ np.linalg.inv(eye - uj**mj * D)
        return out

    def trace(self, u) -> complex:
        return complex(np.trace(self(u)))

    def series(self, u, order: int | None = None) -> np.ndarray:
        """Truncated sum of ``u^k T_k`` over ``k`` in ``N^d(L0)`` with ``k_j <= order``."""
        fam = self.family
        u = tuple(complex(x) for x in u)
        if order is None:
            order = series_order(fam, u)
        powers = []
        for uj, G in zip(u, fam.generators):
            P = [np.eye(fam.dim, dtype=complex)]
            for _ in range(order):
                P.append(uj * (P[-1] @ G))
            powers.append(P)
        out = np.zeros((fam.dim, fam.dim), dtype=complex)
        for k in fam.lattice.points(order):
            term = powers[0][k[0]]
            for j in range(1, fam.d):
                term = term @ powers[j][k[j]]
            out += term
        return out


def series_order(fam: TranslationFamily, u, tol: float = 1e-14) -> int:
    """Truncation order making the geometric tail of the series negligible."""
    rho = max(abs(complex(uj)) * rj for uj, rj in zip(u, fam.radii))
    if rho >= 1:
        raise ValueError(f"series diverges: max |u_j| r(G_j) = {rho:.3g} >= 1")
    if rho == 0:
        return 1
    # Margin covers polynomial growth from nontrivial Jordan blocks.
    return int(math.ceil(1.25 * math.log(tol) / math.log(rho))) + 10


def rational_T(fam: TranslationFamily) -> RationalOperatorFunction:
    """Closed form of ``T(u)`` via ``k_j = r_j + q_j m_j`` with ``r_j`` in ``[1, m_j]``."""
    periods = fam.lattice.periods
    residues = tuple((r, translation_op(fam, r)) for r in fam.lattice.residues())
    dens = []
    for j, m in enumerate(periods):
        k = [0] * fam.d
        k[j] = m
        dens.append(translation_op(fam, k))
    return RationalOperatorFunction(periods, residues, tuple(dens), fam)


# --- joint spectrum --------------------------------------------------------

@dataclass(frozen=True)
class Quasicharacter:
    z: tuple[complex, ...]
    mult: int

    def __call__(self, k) -> complex:
        return complex(_upow(self.z, k))


def _exact_invertible_part(fam):
    """Exact basis of the joint subspace where every generator is invertible."""
    n = fam.dim
    basis = None  # list of column vectors
    for G in fam.exact_generators:
        img = column_space(_exact_power(G, n))
        if basis is None:
            basis = img
        else:
            if not basis or not img:
                return []
            # Solve U a = V b for the intersection of the two spans.
            rows = [[u[i] for u in basis] + [-v[i] for v in img] for i in range(n)]
            kernel = null_space(rows)
            basis = column_space(_columns_to_array(
                [[sum((a[t] * basis[t][i] for t in range(len(basis))), Fraction(0))
                  for i in range(n)] for a in kernel], n))
        if not basis:
            return []
    return basis


def _columns_to_array(cols, n):
    M = np.empty((n, len(cols)), dtype=object)
    M[...] = Fraction(0)
    for j, c in enumerate(cols):
        for i in range(n):
            M[i, j] = c[i]
    return M


def _float_invertible_part(fam):
    n = fam.dim
    B = None
    for G in fam.generators:
        P = np.linalg.matrix_power(G, n)
        U, s, _ = np.linalg.svd(P)
        rank = int(np.sum(s > 1e-9 * (s[0] if s.size and s[0] > 0 else 1)))
        img = U[:, :rank]
        if B is None:
            B = img
        else:
            K = sla.null_space(np.hstack([B, -img]), rcond=1e-9)
            B = sla.orth(B @ K[: B.shape[1]]) if K.size else np.zeros((n, 0))
        if B.shape[1] == 0:
            break
    return B


def _restrict(fam, exact):
    if exact:
        cols = _exact_invertible_part(fam)
        if not cols:
            return []
        B = _columns_to_array(cols, fam.dim)
        Bt = B.T
        gram_inv = _exact_inverse(Bt @ B)
        return [(gram_inv @ (Bt @ G @ B)).astype(float) for G in fam.exact_generators]
    B = _float_invertible_part(fam)
    if B.shape[1] == 0:
        return []
    Bp = np.linalg.pinv(B)
    return [Bp @ G @ B for G in fam.generators]


def _exact_inverse(M):
    n = M.shape[0]
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve_rational([list(row) for row in M], e))
    return _columns_to_array(cols, n)


def _sample_indices(fam, count=10):
    pts = []
    bound = 1
    while len(pts) < count:
        pts = fam.lattice.points(bound)
        bound += 1
    pts.sort(key=lambda k: (sum(k), k))
    return pts[:count]


def joint_spectrum(fam: TranslationFamily, seed: int = 0, exact: bool | None = None,
                   cap: int = 2000, rtol: float = 1e-6) -> list[Quasicharacter]:
    """Quasicharacters ``z`` with multiplicities such that ``tr T_k = sum m z^k``.

    The generators are restricted to the joint subspace where all of them
    are invertible (exactly, for ``dim <= 32``), then triangularized
    together through the Schur form of a seeded random combination.  The
    result is checked against ``tr T_k`` on ten lattice points.
    """
    if fam.dim > cap:
        raise ValueError(f"dimension {fam.dim} exceeds cap {cap}")
    if exact is None:
        exact = fam.dim <= EXACT_SPECTRUM_DIM
    H = _restrict(fam, exact)
    if not H:
        qchars = []
    else:
        rng = np.random.default_rng(seed)
        c = rng.uniform(0.5, 1.5, size=len(H))
        L = sum(cj * Hj for cj, Hj in zip(c, H))
        _, Q = sla.schur(L.astype(complex), output="complex")
        diag = np.array([np.diag(Q.conj().T @ Hj @ Q) for Hj in H]).T  # (w, d)
        qchars = _merge_tuples(diag, 1e-6 * (1 + max(fam.radii)))
        tau_zero = 1e-9 * fam.scale
        qchars = [q for q in qchars if min(abs(x) for x in q.z) > tau_zero]
    for k in _sample_indices(fam):
        lhs = N_of_k(fam, k)
        rhs = sum(q.mult * q(k) for q in qchars)
        if abs(lhs - rhs) > rtol * (1 + abs(lhs)):
            raise NumericalError(
                f"quasicharacter expansion misses tr T_{k}: {lhs} vs {rhs}; "
                "retry with exact=True or another seed"
            )
    return qchars


def _merge_tuples(diag, tol):
    w = diag.shape[0]
    if w == 1:
        return [Quasicharacter(tuple(complex(x) for x in diag[0]), 1)]
    pts = np.hstack([diag.real, diag.imag])
    labels = fcluster(linkage(pts, method="single", metric="chebyshev"), t=tol, criterion="distance")
    out = []
    for lab in np.unique(labels):
        members = diag[labels == lab]
        z = tuple(_tidy(complex(x)) for x in members.mean(axis=0))
        out.append(Quasicharacter(z, len(members)))
    out.sort(key=lambda q: (-round(float(np.prod([abs(x) for x in q.z])), 9),
                            tuple(round(np.angle(x) % (2 * np.pi), 9) % round(2 * np.pi, 9)
                                  for x in q.z)))
    return out


def _tidy(z: complex, eps: float = 1e-13) -> complex:
    re = 0.0 if abs(z.real) < eps * (1 + abs(z)) else z.real
    im = 0.0 if abs(z.imag) < eps * (1 + abs(z)) else z.imag
    return complex(re, im)


# --- prime geodesic counts -------------------------------------------------

@dataclass(frozen=True)
class BuildingPGTReport:
    rows: tuple  # (k, N(k), sum m z^k)
    max_deviation: float
    passed: bool
    leading_k: tuple | None
    leading_sum: complex | None
    leading_rel_error: float | None


def verify_building_pgt(fam: TranslationFamily, k_max, qchars=None,
                        rtol: float = 1e-6) -> BuildingPGTReport:
    """Check ``N(k) = sum_chi m(chi) z_chi^k`` on all lattice points with ``1 <= k_j <= k_max``.

    Also reports, at the largest grid point, how far ``N(k)`` is from the
    sum over the quasicharacters of maximal ``|z^k|`` alone.
    """
    if qchars is None:
        qchars = joint_spectrum(fam)
    rows = []
    worst = 0.0
    ok = True
    for k in fam.lattice.points(k_max):
        N = N_of_k(fam, k)
        q = complex(sum(c.mult * c(k) for c in qchars))
        dev = abs(N - q)
        worst = max(worst, dev)
        if dev > rtol * (1 + abs(N)):
            ok = False
        rows.append((k, N, q))
    lead_k = lead = lead_err = None
    if rows and qchars:
        lead_k = max((r[0] for r in rows), key=lambda k: (sum(k), k))
        mods = [abs(c(lead_k)) for c in qchars]
        top = max(mods)
        lead = complex(sum(c.mult * c(lead_k) for c, m in zip(qchars, mods) if m >= top * (1 - 1e-9)))
        N = N_of_k(fam, lead_k)
        lead_err = abs(N - lead) / abs(N) if N != 0 else abs(lead)
    return BuildingPGTReport(tuple(rows), worst, ok, lead_k, lead, lead_err)


@dataclass(frozen=True)
class ZetaEvaluation:
    rational: complex
    quasicharacter: complex
    series: complex | None
    deviation: float


def singular_components(fam, u, qchars, tol: float = TAU_SING):
    out = []
    for j, (uj, mj) in enumerate(zip(u, fam.lattice.periods)):
        for q in qchars:
            if abs(1 - (uj * q.z[j]) ** mj) < tol:
                out.append((j, q.z))
    return out


def zeta_multivariate(fam: TranslationFamily, u, qchars=None, series_radius: float = 0.7,
                      order: int | None = None) -> ZetaEvaluation:
    """``Z(u) = tr T(u)`` three ways: closed form, quasicharacter sum, truncated series.

    The series is evaluated only when ``max_j |u_j| r(G_j) <= series_radius``.
    """
    u = tuple(complex(x) for x in u)
    if len(u) != fam.d:
        raise ValueError(f"u has {len(u)} coordinates, expected {fam.d}")
    if qchars is None:
        qchars = joint_spectrum(fam)
    bad = singular_components(fam, u, qchars)
    if bad:
        raise SingularPointError(bad)
    R = rational_T(fam)
    rational = R.trace(u)
    qsum = 0j
    for q in qchars:
        num = sum(_upow(u, r) * q(r) for r, _ in R.residues)
        den = 1
        for uj, zj, mj in zip(u, q.z, R.periods):
            den *= 1 - (uj * zj) ** mj
        qsum += q.mult * num / den
    series = None
    devs = [abs(rational - qsum)]
    rho = max(abs(uj) * rj for uj, rj in zip(u, fam.radii))
    if rho <= series_radius:
        series = complex(np.trace(R.series(u, order)))
        devs.append(abs(series - rational))
    return ZetaEvaluation(rational, qsum, series, max(devs))


# --- JSON ------------------------------------------------------------------

def parse_family(text: str, exact: bool = False) -> TranslationFamily:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise GraphFormatError("family document must be an object")
    extra = set(doc) - {"d", "dim", "generators", "lattice"}
    if extra:
        raise GraphFormatError(f"unknown field(s) in family document: {sorted(extra)}")
    try:
        d, dim, raw = int(doc["d"]), int(doc["dim"]), doc["generators"]
    except (KeyError, TypeError, ValueError):
        raise GraphFormatError("family document needs integer 'd', 'dim' and a 'generators' list") from None
    if not isinstance(raw, list) or len(raw) != d:
        raise GraphFormatError(f"expected {d} generators")
    gens = []
    for j, G in enumerate(raw):
        arr = np.array(G, dtype=float)
        if arr.ndim == 1 and arr.size == dim * dim:
            arr = arr.reshape(dim, dim)
        if arr.shape != (dim, dim):
            raise GraphFormatError(f"generator {j} does not have {dim}x{dim} entries")
        gens.append(arr)
    lattice = None
    if "lattice" in doc:
        lat = doc["lattice"]
        if not isinstance(lat, dict) or set(lat) != {"gens"}:
            raise GraphFormatError("'lattice' must be an object with exactly the field 'gens'")
        try:
            lattice = Lattice(tuple(tuple(row) for row in lat["gens"]))
        except (TypeError, ValueError) as exc:
            raise GraphFormatError(f"bad lattice: {exc}") from None
    try:
        return build_family(gens, lattice, exact=exact)
    except NonCommutingError:
        raise
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def dump_family(fam: TranslationFamily) -> str:
    return json.dumps({
        "d": fam.d,
        "dim": fam.dim,
        "generators": [[float(x) for x in G.ravel()] for G in fam.generators],
        "lattice": {"gens": [list(row) for row in fam.lattice.gens]},
    })

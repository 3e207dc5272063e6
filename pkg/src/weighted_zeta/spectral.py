"""Irreducibility, block decomposition and Perron-Frobenius checks.

For a nonnegative matrix, invariance of a coordinate subspace is a purely
combinatorial property of the *support digraph* (arc ``e -> f`` whenever
``A[f, e] != 0``).  The block decomposition uses its strongly connected
components, ordered so that every prefix of blocks spans a ``T``-stable
subspace.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.cluster.hierarchy import fcluster, linkage

from .bass import BassMatrix, matrix_fredholm
from .errors import HypothesisError, NumericalError

SPECTRUM_CAP = 2000
TAU_POS = 1e-9


def _as_dense(T) -> np.ndarray:
    if isinstance(T, BassMatrix):
        return T.dense()
    if sp.issparse(T):
        return T.toarray()
    return np.asarray(T, dtype=float)


def support_digraph(T) -> list[list[int]]:
    """Adjacency lists with an arc ``e -> f`` whenever ``A[f, e] != 0``."""
    if isinstance(T, BassMatrix):
        coo = T.A.tocoo()
        n = T.dim
    else:
        M = np.asarray(T.toarray() if sp.issparse(T) else T)
        n = M.shape[0]
        coo = sp.coo_array(M != 0)
    adj = [set() for _ in range(n)]
    for f, e, x in zip(coo.row, coo.col, coo.data):
        if x != 0:
            adj[int(e)].add(int(f))
    return [sorted(a) for a in adj]


def strongly_connected_components(adj) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  Components come out sinks first."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_irreducible(T) -> bool:
    """True iff the support digraph is strongly connected (vacuously for dim 1)."""
    adj = support_digraph(T)
    return len(strongly_connected_components(adj)) <= 1


def combinatorial_period(adj, vertices=None) -> int:
    """gcd of the lengths of all cycles in the strongly connected set ``vertices``.

    Uses BFS levels: the period is the gcd of ``level[u] + 1 - level[v]``
    over arcs ``u -> v`` inside the component.  Returns 0 if there is no
    cycle at all.
    """
    if vertices is None:
        vertices = range(len(adj))
    vs = set(vertices)
    start = min(vs)
    level = {start: 0}
    order = [start]
    for u in order:
        for v in adj[u]:
            if v in vs and v not in level:
                level[v] = level[u] + 1
                order.append(v)
    g = 0
    for u in vs:
        for v in adj[u]:
            if v in vs and u in level and v in level:
                g = math.gcd(g, abs(level[u] + 1 - level[v]))
    return g


# --- spectra ---------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[tuple[complex, int], ...]
    radius: float
    peripheral: tuple[tuple[complex, int], ...]

    @property
    def multiset(self) -> list[complex]:
        return [lam for lam, m in self.eigenvalues for _ in range(m)]


def cluster_eigenvalues(values, tol) -> list[tuple[complex, int]]:
    """Single-linkage clusters at distance ``tol``; returns (mean, size) pairs."""
    values = np.asarray(values, dtype=complex)
    if len(values) == 0:
        return []
    if len(values) == 1:
        return [(complex(values[0]), 1)]
    pts = np.column_stack([values.real, values.imag])
    labels = fcluster(linkage(pts, method="single"), t=tol, criterion="distance")
    out = []
    for lab in np.unique(labels):
        members = values[labels == lab]
        out.append((complex(members.mean()), len(members)))
    out.sort(key=lambda p: (-round(abs(p[0]), 12), round(np.angle(p[0]) % (2 * np.pi), 12)))
    return out


def spectrum(M, cap: int = SPECTRUM_CAP, tau_cluster: float | None = None,
             tau_eig: float | None = None) -> Spectrum:
    """All eigenvalues with algebraic multiplicities (by clustering)."""
    A = _as_dense(M)
    n = A.shape[0]
    if n > cap:
        raise ValueError(f"dimension {n} exceeds the dense spectrum cap {cap}")
    if n == 0:
        return Spectrum((), 0.0, ())
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed on a {n}x{n} matrix: {exc}") from exc
    r = float(np.max(np.abs(vals)))
    if tau_cluster is None:
        tau_cluster = 1e-6 * (1 + r)
    clusters = cluster_eigenvalues(vals, tau_cluster)
    # Exact zero for clusters straddling the origin keeps nilpotent parts tidy.
    clusters = [(0j if abs(lam) <= tau_cluster else lam, m) for lam, m in clusters]
    r = max(abs(lam) for lam, _ in clusters)
    if tau_eig is None:
        tau_eig = 1e-6 * r
    peripheral = tuple(p for p in clusters if r > 0 and abs(p[0]) >= r - tau_eig)
    return Spectrum(tuple(clusters), r, peripheral)


def spectral_radius(M) -> float:
    return spectrum(M).radius


# --- decomposition ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Block:
    indices: tuple[int, ...]
    matrix: np.ndarray
    radius: float
    irreducible: bool
    sub_radius: bool


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    blocks: tuple[Block, ...]
    radius: float
    source: object = field(repr=False, default=None)

    def prefix_invariant(self) -> bool:
        """Scan every nonzero entry: nothing may leave a prefix union of blocks."""
        position = {}
        for k, b in enumerate(self.blocks):
            for e in b.indices:
                position[e] = k
        for e, targets in enumerate(support_digraph(self.source)):
            for f in targets:
                if position[f] > position[e]:
                    return False
        return True

    def block_polynomials(self, exact: bool = False) -> list[list]:
        out = []
        for b in self.blocks:
            if exact:
                full = self.source.exact
                M = full[np.ix_(b.indices, b.indices)]
            else:
                M = b.matrix
            out.append(matrix_fredholm(M, exact=exact))
        return out


def poly_mul(p, q):
    zero = p[0] * 0
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_product(polys, exact: bool = False):
    out = [Fraction(1) if exact else 1.0]
    for p in polys:
        out = poly_mul(out, p)
    return out


def condensation_order(adj, comps) -> list[int]:
    """Order components so that arcs only point to earlier ones.

    Among components whose successors are all placed, the one with the
    smallest contained index goes first.
    """
    where = {}
    for k, c in enumerate(comps):
        for v in c:
            where[v] = k
    succ = [set() for _ in comps]
    pred = [set() for _ in comps]
    for u, targets in enumerate(adj):
        for v in targets:
            a, b = where[u], where[v]
            if a != b:
                succ[a].add(b)
                pred[b].add(a)
    remaining = [len(s) for s in succ]
    heap = [(min(c), k) for k, c in enumerate(comps) if remaining[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, k = heapq.heappop(heap)
        order.append(k)
        for p in pred[k]:
            remaining[p] -= 1
            if remaining[p] == 0:
                heapq.heappush(heap, (min(comps[p]), p))
    return order


def decompose(T) -> BlockDecomposition:
    """Strongly connected components in an order making prefixes invariant."""
    if not isinstance(T, BassMatrix):
        from .bass import from_matrix

        T = from_matrix(_as_dense(T))
    A = T.dense()
    adj = support_digraph(T)
    comps = strongly_connected_components(adj)
    order = condensation_order(adj, comps)
    r = spectral_radius(A) if T.dim else 0.0
    blocks = []
    for k in order:
        ix = comps[k]
        sub = A[np.ix_(ix, ix)]
        rb = spectral_radius(sub)
        blocks.append(
            Block(
                indices=tuple(ix),
                matrix=sub,
                radius=rb,
                irreducible=is_irreducible(sub),
                sub_radius=rb < r - 1e-6 * (1 + r),
            )
        )
    return BlockDecomposition(tuple(blocks), r, T)


# --- Perron-Frobenius ------------------------------------------------------

@dataclass(frozen=True)
class PFReport:
    radius: float
    n: int
    peripheral: tuple[complex, ...]
    evenly_distributed: bool
    simple: bool
    positive_vector: bool
    vector: np.ndarray = field(repr=False)
    combinatorial_period: int
    period_matches: bool

    @property
    def ok(self) -> bool:
        return (
            self.evenly_distributed and self.simple and self.positive_vector and self.period_matches
        )

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "n": self.n,
            "peripheral": [[z.real, z.imag] for z in self.peripheral],
            "evenly_distributed": self.evenly_distributed,
            "simple": self.simple,
            "positive_vector": self.positive_vector,
            "combinatorial_period": self.combinatorial_period,
            "period_matches": self.period_matches,
        }


def perron_vector(A, r, tol=1e-14, maxiter=200_000):
    """Power iteration on ``A / r + I`` from the uniform vector.

    The shift makes ``r`` strictly dominant even when the block is
    periodic; the eigenvector is unchanged.  Returns the vector normalized
    to max-norm 1.
    """
    n = A.shape[0]
    B = A / r + np.eye(n)
    v = np.full(n, 1.0 / n)
    for _ in range(maxiter):
        w = B @ v
        w /= np.abs(w).sum()
        if np.max(np.abs(w - v)) < tol:
            v = w
            break
        v = w
    else:
        raise NumericalError("power iteration for the Perron vector did not converge")
    return v / np.max(np.abs(v))


def verify_pf(block, tau_eig: float | None = None, tau_pos: float = TAU_POS) -> PFReport:
    """Check the Perron-Frobenius conclusions on an irreducible nonnegative block."""
    A = _as_dense(block)
    if not is_irreducible(A):
        raise HypothesisError("verify_pf needs an irreducible matrix")
    eig = spectrum(A, tau_eig=tau_eig)
    r = eig.radius
    if r <= 0:
        raise HypothesisError("verify_pf needs a positive spectral radius")
    if tau_eig is None:
        tau_eig = 1e-6 * r
    per = [lam for lam, m in eig.peripheral for _ in range(m)]
    n = len(per)
    targets = [r * np.exp(2j * np.pi * j / n) for j in range(n)]
    unused = list(per)
    even = True
    for t in targets:
        hit = next((k for k, lam in enumerate(unused) if abs(lam - t) <= tau_eig), None)
        if hit is None:
            even = False
            break
        unused.pop(hit)
    simple = all(m == 1 for _, m in eig.peripheral)
    v = perron_vector(A, r)
    positive = bool(np.all(v > tau_pos)) and np.linalg.norm(A @ v - r * v) <= 1e-8 * (1 + r)
    adj = support_digraph(A)
    period = combinatorial_period(adj)
    return PFReport(
        radius=r,
        n=n,
        peripheral=tuple(per),
        evenly_distributed=even,
        simple=simple,
        positive_vector=bool(positive),
        vector=v,
        combinatorial_period=period,
        period_matches=period == n,
    )

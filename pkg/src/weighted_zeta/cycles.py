"""Brute-force enumeration of closed paths and cycle classes.

This module never touches matrices: it walks the transition digraph
directly, so it serves as an independent check on every trace and
determinant identity computed elsewhere.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from ._exact import common_denominator, to_fraction
from .errors import CensusLimitError
from .graph import WeightedGraph

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class ClosedPath:
    edges: tuple[int, ...]
    weight: object

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class CycleClass:
    canonical: tuple[int, ...]
    weight: object
    primitive_root: tuple[int, ...]
    root_weight: object
    multiplicity: int

    @property
    def length(self) -> int:
        return len(self.canonical)

    @property
    def root_length(self) -> int:
        return len(self.primitive_root)

    @property
    def is_primitive(self) -> bool:
        return self.multiplicity == 1


def min_rotation(seq) -> tuple:
    seq = tuple(seq)
    if not seq:
        return seq
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


def smallest_period(seq) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq[p:] + seq[:p] == seq:
            return p
    return n


def primitive_root(seq) -> tuple:
    seq = tuple(seq)
    return min_rotation(seq[: smallest_period(seq)])


def _weight_lookup(g: WeightedGraph, exact: bool):
    conv = to_fraction if exact else float
    return {k: conv(w) for k, w in g.weights.items() if w != 0}


def path_weight(g: WeightedGraph, seq, exact: bool = False):
    """Weight of the closed path ``seq`` (zero if some transition is missing)."""
    w = _weight_lookup(g, exact)
    out = Fraction(1) if exact else 1.0
    for a, b in zip(seq, seq[1:] + seq[:1]):
        out *= w.get((a, b), 0)
    return out


def closed_paths(g: WeightedGraph, n: int, exact: bool = False):
    """Yield every closed path of length exactly ``n`` with nonzero weight.

    No rotation dedup; this is the most naive enumerator available.
    """
    w = _weight_lookup(g, exact)
    succ = _successors(w, g.num_edges)
    one = Fraction(1) if exact else 1.0
    for s in range(g.num_edges):
        stack = [((s,), one)]
        while stack:
            path, pw = stack.pop()
            last = path[-1]
            if len(path) == n:
                close = w.get((last, s), 0)
                if close:
                    yield ClosedPath(path, pw * close)
                continue
            for f, wf in succ[last]:
                stack.append((path + (f,), pw * wf))


def _successors(w, n):
    succ = [[] for _ in range(n)]
    for (e, f), x in sorted(w.items()):
        succ[e].append((f, x))
    return succ


def _classes_from_start(s, n, w, succ, pred, one, counter):
    # h[e]: fewest further edges after e before a transition back into s,
    # restricted to edges >= s.
    inf = n + 1
    h = {}
    queue = deque()
    for e, x in pred[s]:
        if e >= s:
            h[e] = 0
            queue.append(e)
    while queue:
        e = queue.popleft()
        for p, _ in pred[e]:
            if p >= s and p not in h:
                h[p] = h[e] + 1
                queue.append(p)
    if s not in h or h[s] + 1 > n:
        return []

    found = []
    path = [s]

    def walk(pw):
        last = path[-1]
        depth = len(path)
        close = w.get((last, s), 0)
        if close:
            seq = tuple(path)
            if min_rotation(seq) == seq:
                found.append((seq, pw * close))
                counter.add()
        for f, wf in succ[last]:
            if f < s:
                continue
            if depth + 1 + h.get(f, inf) > n:
                continue
            path.append(f)
            walk(pw * wf)
            path.pop()

    walk(one)
    return found


class _Counter:
    def __init__(self, cap):
        self.cap = cap
        self.count = 0

    def add(self):
        self.count += 1
        if self.count > self.cap:
            raise CensusLimitError(f"more than {self.cap} cycle classes; raise the cap or lower n")


def enumerate_cycles(
    g: WeightedGraph,
    n: int,
    exact: bool = False,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> list[CycleClass]:
    """All cycle classes of length ``<= n`` with nonzero weight.

    Depth-first search from each starting edge ``s`` over edges ``>= s``;
    a closed path is kept only if it is its own lexicographically minimal
    rotation, which picks exactly one representative per class.  Output is
    sorted by ``(length, canonical)`` regardless of ``workers``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    w = _weight_lookup(g, exact)
    D = 1
    if exact:
        # walk with integer numerators over a common denominator D
        D = common_denominator(w.values())
        w = {k: int(x * D) for k, x in w.items()}
    m = g.num_edges
    succ = _successors(w, m)
    pred = [[] for _ in range(m)]
    for (e, f), x in sorted(w.items()):
        pred[f].append((e, x))
    one = 1 if exact else 1.0
    counter = _Counter(cap)

    def job(s):
        return _classes_from_start(s, n, w, succ, pred, one, counter)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(job, range(m)))
    else:
        chunks = [job(s) for s in range(m)]

    classes = []
    for chunk in chunks:
        for seq, weight in chunk:
            p = smallest_period(seq)
            root = seq[:p]
            mu = len(seq) // p
            root_w = path_weight_from(w, root, one)
            if exact:
                weight = Fraction(weight, D**len(seq))
                root_w = Fraction(root_w, D**p)
            classes.append(CycleClass(seq, weight, root, root_w, mu))
    classes.sort(key=lambda c: (c.length, c.canonical))
    return classes


def path_weight_from(w, seq, one):
    out = one
    for a, b in zip(seq, seq[1:] + seq[:1]):
        out *= w.get((a, b), 0)
    return out


@dataclass(frozen=True)
class CountTable:
    """Counting functions for ``m = 1..max_len``; index ``[m]``, slot 0 unused."""

    max_len: int
    N: tuple
    theta: tuple
    psi: tuple
    pi: tuple

    def rows(self):
        for m in range(1, self.max_len + 1):
            yield m, self.N[m], self.theta[m], self.psi[m], self.pi[m]


def count_table(
    g: WeightedGraph,
    n: int,
    exact: bool = False,
    classes: list[CycleClass] | None = None,
    **kwargs,
) -> CountTable:
    """``N_m``, theta, psi and pi up to ``n`` from the census.

    ``N_m`` sums ``w(c) * l(c_0)`` over classes of length ``m``; theta and
    pi sum ``w(c_0) l(c_0)`` and ``w(c_0)`` over primitive classes of length
    ``<= m``; ``psi(m) = N_1 + ... + N_m``.
    """
    if classes is None:
        classes = enumerate_cycles(g, n, exact=exact, **kwargs)
    zero = Fraction(0) if exact else 0.0
    N = [[] for _ in range(n + 1)]
    th = [[] for _ in range(n + 1)]
    pr = [[] for _ in range(n + 1)]
    for c in classes:
        if c.length > n:
            continue
        N[c.length].append(c.weight * c.root_length)
        if c.is_primitive:
            th[c.length].append(c.weight * c.length)
            pr[c.length].append(c.weight)

    def total(xs):
        return sum(xs, zero) if exact else math.fsum(xs)

    N_m = [zero] + [total(N[m]) for m in range(1, n + 1)]
    theta, psi, pi = [zero], [zero], [zero]
    for m in range(1, n + 1):
        theta.append(theta[-1] + total(th[m]))
        psi.append(psi[-1] + N_m[m])
        pi.append(pi[-1] + total(pr[m]))
    return CountTable(n, tuple(N_m), tuple(theta), tuple(psi), tuple(pi))

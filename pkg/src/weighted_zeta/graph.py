"""Finite weighted oriented graphs: data model, JSON I/O, validation, fixtures.

A graph carries a *transition weight* ``w(e, f) >= 0`` on ordered pairs of
oriented edges, which may be nonzero only when the target of ``e`` is the
source of ``f``.  Edge ids are dense integers ``0..|E|-1`` because edges
index the coordinate basis of the transfer operator; node ids are opaque
strings.

Graph JSON format::

    {"nodes": ["a", "b"],
     "edges": [{"id": 0, "src": "a", "dst": "b"}, ...],
     "weights": [{"from": 0, "to": 1, "w": 2.0}, ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from types import MappingProxyType
from typing import Mapping

import numpy as np

from ._exact import to_fraction
from .errors import GraphFormatError


@dataclass(frozen=True)
class OrientedEdge:
    id: int
    src: str
    dst: str


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted oriented graph.

    ``weights`` maps ``(e_id, f_id)`` to a nonnegative real; pairs that are
    absent have weight zero.  Weights may be ints, floats or Fractions.
    """

    nodes: tuple[str, ...]
    edges: tuple[OrientedEdge, ...]
    weights: Mapping[tuple[int, int], Real] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.edges == other.edges
            and _nonzero(self.weights) == _nonzero(other.weights)
        )

    __hash__ = None

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def weight(self, e: int, f: int):
        return self.weights.get((e, f), 0)

    def successors(self, e: int) -> list[tuple[int, Real]]:
        """Edges ``f`` with ``w(e, f) > 0``, sorted by id, with their weights."""
        return sorted((f, w) for (a, f), w in self.weights.items() if a == e and w > 0)

    def is_rational(self) -> bool:
        """True when every weight has an exact rational reading."""
        try:
            for w in self.weights.values():
                to_fraction(w)
        except (TypeError, ValueError):
            return False
        return True

    def with_exact_weights(self) -> "WeightedGraph":
        """Copy with all weights converted to Fractions."""
        return WeightedGraph(
            self.nodes, self.edges, {k: to_fraction(w) for k, w in self.weights.items()}
        )


def _nonzero(weights):
    return {k: w for k, w in weights.items() if w != 0}


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]
    stats: dict

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "where": list(v.where), "message": v.message}
                for v in self.violations
            ],
            "stats": dict(self.stats),
        }


def validate(g: WeightedGraph) -> ValidationReport:
    """Check composability of every nonzero weight and collect statistics.

    Problems are reported, never raised.  The valency bound is informational.
    """
    violations = []
    ids = [e.id for e in g.edges]
    if ids != list(range(len(ids))):
        violations.append(
            Violation("edge-ids", tuple(ids), "edge ids must be exactly 0..|E|-1 in order")
        )
    nodes = set(g.nodes)
    for e in g.edges:
        for end in (e.src, e.dst):
            if end not in nodes:
                violations.append(Violation("unknown-node", (e.id, end), f"edge {e.id} uses unknown node {end!r}"))

    nnz = 0
    total = 0
    n = len(g.edges)
    for (e, f), w in sorted(g.weights.items()):
        if not (0 <= e < n and 0 <= f < n):
            violations.append(Violation("unknown-edge", (e, f), f"weight refers to missing edge in ({e}, {f})"))
            continue
        if isinstance(w, float) and not math.isfinite(w):
            violations.append(Violation("non-finite", (e, f), f"w({e},{f}) is not finite"))
            continue
        if w < 0:
            violations.append(Violation("negative-weight", (e, f), f"w({e},{f}) = {w} < 0"))
            continue
        if w == 0:
            continue
        nnz += 1
        total += w
        if g.edges[e].dst != g.edges[f].src:
            violations.append(
                Violation(
                    "incompatible-pair",
                    (e, f),
                    f"w({e},{f}) = {w} but dst({e}) = {g.edges[e].dst!r} != src({f}) = {g.edges[f].src!r}",
                )
            )

    valency = {x: 0 for x in g.nodes}
    for e in g.edges:
        for x in {e.src, e.dst}:
            if x in valency:
                valency[x] += 1
    stats = {
        "nodes": len(g.nodes),
        "edges": n,
        "nnz": nnz,
        "max_valency": max(valency.values(), default=0),
        "total_weight": float(total),
    }
    return ValidationReport(not violations, tuple(violations), stats)


# --- JSON ------------------------------------------------------------------

def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _check_keys(obj, allowed, what):
    if not isinstance(obj, dict):
        raise GraphFormatError(f"{what} must be an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise GraphFormatError(f"unknown field(s) in {what}: {sorted(extra)}")
    missing = set(allowed) - set(obj)
    if missing:
        raise GraphFormatError(f"missing field(s) in {what}: {sorted(missing)}")


def parse_graph(text: str) -> WeightedGraph:
    """Parse a graph JSON document.

    Raises GraphFormatError for malformed JSON (with line/column), unknown
    fields, duplicate ids, dangling references and negative weights.
    Incompatible-but-positive weight pairs are accepted here and left to
    :func:`validate`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None

    _check_keys(doc, ("nodes", "edges", "weights"), "graph document")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(x, str) for x in nodes):
        raise GraphFormatError("'nodes' must be a list of strings")
    if len(set(nodes)) != len(nodes):
        raise GraphFormatError("duplicate node id")
    node_set = set(nodes)

    if not isinstance(doc["edges"], list):
        raise GraphFormatError("'edges' must be a list")
    by_id = {}
    for item in doc["edges"]:
        _check_keys(item, ("id", "src", "dst"), "edge")
        eid = item["id"]
        if not isinstance(eid, int) or isinstance(eid, bool):
            raise GraphFormatError(f"edge id {eid!r} is not an integer")
        if eid in by_id:
            raise GraphFormatError(f"duplicate edge id {eid}")
        for end in ("src", "dst"):
            if item[end] not in node_set:
                raise GraphFormatError(f"edge {eid} refers to unknown node {item[end]!r}")
        by_id[eid] = OrientedEdge(eid, item["src"], item["dst"])
    if sorted(by_id) != list(range(len(by_id))):
        raise GraphFormatError("edge ids must form the contiguous range 0..|E|-1")
    edges = [by_id[i] for i in range(len(by_id))]

    if not isinstance(doc["weights"], list):
        raise GraphFormatError("'weights' must be a list")
    weights = {}
    for item in doc["weights"]:
        _check_keys(item, ("from", "to", "w"), "weight entry")
        e, f, w = item["from"], item["to"], item["w"]
        if e not in by_id or f not in by_id:
            raise GraphFormatError(f"weight entry ({e}, {f}) refers to an unknown edge")
        if not _is_number(w) or not math.isfinite(w):
            raise GraphFormatError(f"weight for ({e}, {f}) is not a finite number")
        if w < 0:
            raise GraphFormatError(f"negative weight {w} for ({e}, {f})")
        if (e, f) in weights:
            raise GraphFormatError(f"duplicate weight entry ({e}, {f})")
        weights[(e, f)] = w
    return WeightedGraph(tuple(nodes), tuple(edges), weights)


def _json_number(w):
    if isinstance(w, Fraction):
        return int(w) if w.denominator == 1 else float(w)
    if isinstance(w, (np.integer, int)):
        return int(w)
    return float(w)


def graph_to_dict(g: WeightedGraph) -> dict:
    return {
        "nodes": list(g.nodes),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in g.edges],
        "weights": [
            {"from": e, "to": f, "w": _json_number(w)} for (e, f), w in sorted(g.weights.items())
        ],
    }


def dump_graph(g: WeightedGraph, indent=None) -> str:
    return json.dumps(graph_to_dict(g), indent=indent)


def load_graph(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# --- fixtures --------------------------------------------------------------

G3_EDGES = ("f", "g", "h", "i", "j")


def fixture(name: str, *params) -> WeightedGraph:
    """Canonical test graphs.

    ``G1(c)``
        one node ``v``, loop edge 0, ``w(0,0) = c``.
    ``G2(p, q)``
        nodes a, b; edge 0 = (a,b), edge 1 = (b,a); ``w(0,1) = p``, ``w(1,0) = q``.
    ``G3``
        two triangles sharing edge f: nodes A..D, edges f,g,h,i,j = 0..4 with
        f=(A,B), g=(B,C), h=(B,D), i=(C,A), j=(D,A); all six transitions
        f->g, f->h, g->i, h->j, i->f, j->f have weight 1.
    ``G4``
        G3 plus a loop edge a = (A,A) with id 5, ``w(a,a) = 1`` and a bridge
        transition ``w(a,f) = 1/2``.

    Names may be given as ``fixture("G2", 2, 3)`` or ``fixture("G2(2,3)")``.
    """
    if "(" in name:
        head, _, rest = name.partition("(")
        args = [a.strip() for a in rest.rstrip(")").split(",") if a.strip()]
        name = head
        params = tuple(args) + tuple(params)
    params = tuple(_parse_param(p) if isinstance(p, str) else p for p in params)
    name = name.strip().upper()

    if name == "G1":
        (c,) = params or (1,)
        return WeightedGraph(("v",), (OrientedEdge(0, "v", "v"),), {(0, 0): c})
    if name == "G2":
        p, q = params or (1, 1)
        return WeightedGraph(
            ("a", "b"),
            (OrientedEdge(0, "a", "b"), OrientedEdge(1, "b", "a")),
            {(0, 1): p, (1, 0): q},
        )
    if name == "G3":
        return _g3()
    if name == "G4":
        g3 = _g3()
        w = dict(g3.weights)
        w[(5, 5)] = 1
        w[(5, 0)] = Fraction(1, 2)
        return WeightedGraph(g3.nodes, g3.edges + (OrientedEdge(5, "A", "A"),), w)
    raise ValueError(f"unknown fixture {name!r}; expected one of G1, G2, G3, G4")


def _parse_param(s):
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return Fraction(s)
    except ValueError:
        raise ValueError(f"fixture parameter {s!r} is not a number") from None


def _g3() -> WeightedGraph:
    f, g, h, i, j = range(5)
    edges = (
        OrientedEdge(f, "A", "B"),
        OrientedEdge(g, "B", "C"),
        OrientedEdge(h, "B", "D"),
        OrientedEdge(i, "C", "A"),
        OrientedEdge(j, "D", "A"),
    )
    weights = {(f, g): 1, (f, h): 1, (g, i): 1, (h, j): 1, (i, f): 1, (j, f): 1}
    return WeightedGraph(("A", "B", "C", "D"), edges, weights)


WEIGHT_LEVELS = tuple(Fraction(k, 4) for k in range(9))  # 0, 1/4, ..., 2


def random_graph(
    seed,
    max_edges: int = 12,
    n_nodes: int | None = None,
    levels=WEIGHT_LEVELS,
    zero_prob: float = 0.35,
) -> WeightedGraph:
    """Seeded random weighted graph with at most ``max_edges`` edges.

    Every composable pair receives a weight drawn from ``levels`` (or zero
    with extra probability ``zero_prob``).  Weights are Fractions so the
    exact mode applies.
    """
    rng = np.random.default_rng(seed)
    if n_nodes is None:
        n_nodes = int(rng.integers(2, 6))
    nodes = tuple(f"x{k}" for k in range(n_nodes))
    n_edges = int(rng.integers(max(1, min(3, max_edges)), max_edges + 1))
    edges = []
    for k in range(n_edges):
        s, t = rng.integers(0, n_nodes, size=2)
        edges.append(OrientedEdge(k, nodes[s], nodes[t]))
    weights = {}
    for e in edges:
        for f in edges:
            if e.dst != f.src or rng.random() < zero_prob:
                continue
            w = levels[int(rng.integers(0, len(levels)))]
            if w != 0:
                weights[(e.id, f.id)] = w
    return WeightedGraph(nodes, tuple(edges), weights)

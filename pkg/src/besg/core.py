"""Labeled directed graphs, string graphs and wire-homeomorphism.

The graph model is deliberately restrictive: no self-loops and no two edges
sharing (source, label, target).  Edges are therefore plain triples and a
graph is fully described by its vertex labeling plus an edge set.

A *string graph* refines this: vertices are split into node-vertices and
wire-vertices, node-vertices are never adjacent to each other, and every
wire-vertex has in-degree and out-degree at most one.  Maximal chains of
wire-vertices form *wires* (circles, attached wires, bare wires).  Two string
graphs that differ only in the lengths of their wires are *wire-homeomorphic*;
each homeomorphism class has a minimal representative which we compute by
merging adjacent wire-vertices as long as the wire count is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    NotEncodedStringGraphError,
    NotStringGraphError,
    SelfLoopError,
    UnknownLabelError,
)

Edge = tuple[str, str, str]  # (source id, edge label, target id)

IN = "in"
OUT = "out"


@dataclass(frozen=True)
class LabelAlphabets:
    """The five label classes every object in the engine is typed against.

    ``vertex_labels`` is the full vertex alphabet; ``terminal_labels`` its
    terminal part, split into ``node_labels`` and the derived wire labels.
    Vertex labels outside ``terminal_labels`` are nonterminals.  Encoding
    labels are a proper subset of the edge labels; all edge labels are final.
    """

    vertex_labels: frozenset[str]
    terminal_labels: frozenset[str]
    node_labels: frozenset[str]
    edge_labels: frozenset[str]
    encoding_labels: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.terminal_labels <= self.vertex_labels:
            raise UnknownLabelError("terminal labels must be vertex labels",
                                    self.terminal_labels - self.vertex_labels)
        if not self.node_labels <= self.terminal_labels:
            raise UnknownLabelError("node labels must be terminal labels",
                                    self.node_labels - self.terminal_labels)
        if not self.encoding_labels < self.edge_labels:
            raise UnknownLabelError(
                "encoding labels must be a proper subset of the edge labels",
                self.encoding_labels)

    @staticmethod
    def make(vertex_labels: Iterable[str], terminal_labels: Iterable[str],
             node_labels: Iterable[str], edge_labels: Iterable[str],
             encoding_labels: Iterable[str] = ()) -> "LabelAlphabets":
        return LabelAlphabets(frozenset(vertex_labels), frozenset(terminal_labels),
                              frozenset(node_labels), frozenset(edge_labels),
                              frozenset(encoding_labels))

    @property
    def wire_labels(self) -> frozenset[str]:
        return self.terminal_labels - self.node_labels

    @property
    def nonterminal_labels(self) -> frozenset[str]:
        return self.vertex_labels - self.terminal_labels

    def is_node(self, label: str) -> bool:
        return label in self.node_labels

    def is_wire(self, label: str) -> bool:
        return label in self.terminal_labels and label not in self.node_labels

    def is_nonterminal(self, label: str) -> bool:
        return label in self.vertex_labels and label not in self.terminal_labels

    def extend(self, vertex_labels=(), edge_labels=(), encoding_labels=(),
               node_labels=(), terminal_labels=()) -> "LabelAlphabets":
        """A copy with extra labels; used by converters for private names."""
        return LabelAlphabets(
            self.vertex_labels | frozenset(vertex_labels) | frozenset(terminal_labels) | frozenset(node_labels),
            self.terminal_labels | frozenset(terminal_labels) | frozenset(node_labels),
            self.node_labels | frozenset(node_labels),
            self.edge_labels | frozenset(edge_labels) | frozenset(encoding_labels),
            self.encoding_labels | frozenset(encoding_labels),
        )


class Graph:
    """Immutable vertex- and edge-labeled directed graph.

    Vertex ids are opaque strings; all cross-graph comparison is up to
    isomorphism (see :mod:`besg.iso`).  Instances precompute adjacency and
    must not be mutated after construction.
    """

    __slots__ = ("alphabets", "_labels", "_edges", "_out", "_in")

    def __init__(self, alphabets: LabelAlphabets, labels: dict[str, str],
                 edges: Iterable[Edge], _checked: bool = False):
        self.alphabets = alphabets
        self._labels = dict(labels)
        self._edges = frozenset(edges)
        if not _checked:
            self._validate()
        out: dict[str, list[Edge]] = {v: [] for v in self._labels}
        inc: dict[str, list[Edge]] = {v: [] for v in self._labels}
        for e in sorted(self._edges):
            out[e[0]].append(e)
            inc[e[2]].append(e)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}

    def _validate(self):
        for v, lab in self._labels.items():
            if lab not in self.alphabets.vertex_labels:
                raise UnknownLabelError("unknown vertex label", v, lab)
        for e in self._edges:
            s, lab, t = e
            if s == t:
                raise SelfLoopError("self-loop", e)
            if lab not in self.alphabets.edge_labels:
                raise UnknownLabelError("unknown edge label", e)
            if s not in self._labels or t not in self._labels:
                raise DanglingEndpointError("edge endpoint not a vertex", e)

    # -- accessors ------------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._labels))

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def label(self, v: str) -> str:
        return self._labels[v]

    @property
    def labels(self) -> dict[str, str]:
        return dict(self._labels)

    def __contains__(self, v: str) -> bool:
        return v in self._labels

    def __len__(self) -> int:
        return len(self._labels)

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[v]

    def in_degree(self, v: str) -> int:
        return len(self._in[v])

    def out_degree(self, v: str) -> int:
        return len(self._out[v])

    def neighbors(self, v: str) -> set[str]:
        return {e[2] for e in self._out[v]} | {e[0] for e in self._in[v]}

    def is_node_vertex(self, v: str) -> bool:
        return self.alphabets.is_node(self._labels[v])

    def is_wire_vertex(self, v: str) -> bool:
        return self.alphabets.is_wire(self._labels[v])

    def is_nonterminal_vertex(self, v: str) -> bool:
        return self.alphabets.is_nonterminal(self._labels[v])

    def node_vertices(self) -> list[str]:
        return [v for v in self.vertex_ids if self.is_node_vertex(v)]

    def wire_vertices(self) -> list[str]:
        return [v for v in self.vertex_ids if self.is_wire_vertex(v)]

    def nonterminal_vertices(self) -> list[str]:
        return [v for v in self.vertex_ids if self.is_nonterminal_vertex(v)]

    # -- derived graphs ---------------------------------------------------

    def with_elements(self, add_vertices: dict[str, str] = None,
                      add_edges: Iterable[Edge] = (),
                      drop_vertices: Iterable[str] = (),
                      drop_edges: Iterable[Edge] = ()) -> "Graph":
        labels = dict(self._labels)
        for v in drop_vertices:
            labels.pop(v)
        for v, lab in (add_vertices or {}).items():
            labels[v] = lab
        dropped = set(drop_vertices)
        edges = {e for e in self._edges
                 if e not in set(drop_edges) and e[0] not in dropped and e[2] not in dropped}
        edges.update(add_edges)
        return Graph(self.alphabets, labels, edges)

    def induced(self, vertices: Iterable[str]) -> "Graph":
        keep = set(vertices)
        return Graph(self.alphabets, {v: l for v, l in self._labels.items() if v in keep},
                     {e for e in self._edges if e[0] in keep and e[2] in keep},
                     _checked=True)

    def subgraph(self, vertices: Iterable[str], edges: Iterable[Edge]) -> "Graph":
        return Graph(self.alphabets, {v: self._labels[v] for v in vertices}, edges)

    def relabel_vertices(self, mapping: dict[str, str]) -> "Graph":
        """Rename vertex ids via an injective mapping (ids not in it are kept)."""
        ren = lambda v: mapping.get(v, v)
        labels = {ren(v): l for v, l in self._labels.items()}
        if len(labels) != len(self._labels):
            raise DuplicateEdgeError("vertex renaming is not injective", mapping)
        return Graph(self.alphabets, labels,
                     {(ren(s), l, ren(t)) for s, l, t in self._edges}, _checked=True)

    def __repr__(self):
        return f"Graph({len(self._labels)} vertices, {len(self._edges)} edges)"


def validate_graph(vertices: Iterable[tuple[str, str]], edges: Iterable[Edge],
                   alphabets: LabelAlphabets) -> Graph:
    """Build a graph from raw vertex/edge lists, rejecting invalid input.

    Rejects self-loops, duplicate (source, label, target) triples, labels
    outside the alphabets and edges with missing endpoints.
    """
    labels: dict[str, str] = {}
    for v, lab in vertices:
        if v in labels and labels[v] != lab:
            raise DuplicateEdgeError("vertex id declared twice with different labels", v)
        labels[v] = lab
    edge_list = list(edges)
    seen = set()
    for e in edge_list:
        e = (e[0], e[1], e[2])
        if e in seen:
            raise DuplicateEdgeError("duplicate edge", e)
        seen.add(e)
    return Graph(alphabets, labels, seen)


# --- classification ----------------------------------------------------------

STRING = "string"
ENCODED_STRING = "encoded_string"
NOT_STRING = "not_string"

CIRCLE = "circle"
ATTACHED = "attached"
BARE = "bare"


@dataclass(frozen=True)
class Wire:
    """A maximal chain or cycle of wire-vertices together with its endpoints.

    ``chain`` lists the wire-vertices in edge order (for a circle, starting
    from the least id).  ``endpoints`` holds the adjacent node-vertices: none
    for circles and bare wires, one or two for attached wires.
    """

    kind: str
    chain: tuple[str, ...]
    endpoints: tuple[str, ...] = ()


@dataclass
class StringGraphReport:
    """Result of classifying a graph against the string-graph conditions."""

    kind: str
    inputs: frozenset[str] = frozenset()
    outputs: frozenset[str] = frozenset()
    isolated: frozenset[str] = frozenset()
    wires: tuple[Wire, ...] = ()
    violations: list[str] = field(default_factory=list)

    @property
    def is_string(self) -> bool:
        return self.kind == STRING

    @property
    def is_encoded(self) -> bool:
        return self.kind in (STRING, ENCODED_STRING)


def _trace_wires(g: Graph) -> tuple[Wire, ...]:
    """Partition the wire-vertices with at least one incident edge into wires.

    Only meaningful once the degree conditions hold (each wire-vertex has
    in/out-degree at most one), which the caller has established.
    """
    wires = []
    unseen = {v for v in g.vertex_ids if g.is_wire_vertex(v)
              and (g.in_degree(v) or g.out_degree(v))}

    def wire_pred(v):
        es = [e for e in g.in_edges(v) if g.is_wire_vertex(e[0])]
        return es[0][0] if es else None

    def wire_succ(v):
        es = [e for e in g.out_edges(v) if g.is_wire_vertex(e[2])]
        return es[0][2] if es else None

    while unseen:
        start = min(unseen)
        # walk backwards to the head of the chain, watching for a circle
        head = start
        seen_back = {start}
        while True:
            p = wire_pred(head)
            if p is None or p not in unseen:
                break
            if p in seen_back:  # closed a cycle
                head = None
                break
            head = p
            seen_back.add(p)
        if head is None:
            # circle: collect the cycle starting from its least vertex
            cyc = [start]
            v = wire_succ(start)
            while v != start:
                cyc.append(v)
                v = wire_succ(v)
            lo = cyc.index(min(cyc))
            chain = tuple(cyc[lo:] + cyc[:lo])
            wires.append(Wire(CIRCLE, chain))
        else:
            chain = [head]
            v = wire_succ(head)
            while v is not None and v in unseen and v not in chain:
                chain.append(v)
                v = wire_succ(v)
            ends = []
            first_in = [e for e in g.in_edges(chain[0]) if g.is_node_vertex(e[0])]
            last_out = [e for e in g.out_edges(chain[-1]) if g.is_node_vertex(e[2])]
            if first_in:
                ends.append(first_in[0][0])
            if last_out:
                ends.append(last_out[0][2])
            kind = ATTACHED if ends else BARE
            wires.append(Wire(kind, tuple(chain), tuple(ends)))
        unseen -= set(wires[-1].chain)
    return tuple(sorted(wires, key=lambda w: w.chain))


def classify(g: Graph) -> StringGraphReport:
    """Classify a graph as string, encoded-string or neither.

    A string graph has only terminal vertices, no edges between
    node-vertices and wire-vertices of in/out-degree at most one.  An
    encoded string graph additionally admits node-to-node edges carrying
    encoding labels.  The report carries the inputs, outputs, isolated
    wire-vertices and the wire partition whenever the degree conditions hold.
    """
    violations = []
    encoded_only = False
    for v in g.vertex_ids:
        if g.is_nonterminal_vertex(v):
            violations.append(f"vertex {v} has nonterminal label {g.label(v)}")
    for e in sorted(g.edges):
        s, lab, t = e
        if g.is_node_vertex(s) and g.is_node_vertex(t):
            if lab in g.alphabets.encoding_labels:
                encoded_only = True
            else:
                violations.append(f"edge {e} directly connects two node-vertices")
    degrees_ok = True
    for v in g.vertex_ids:
        if not g.is_wire_vertex(v):
            continue
        if g.in_degree(v) > 1:
            violations.append(f"wire-vertex {v} has in-degree {g.in_degree(v)}")
            degrees_ok = False
        if g.out_degree(v) > 1:
            violations.append(f"wire-vertex {v} has out-degree {g.out_degree(v)}")
            degrees_ok = False

    if violations:
        return StringGraphReport(NOT_STRING, violations=violations)

    inputs = frozenset(v for v in g.vertex_ids if g.is_wire_vertex(v) and g.in_degree(v) == 0)
    outputs = frozenset(v for v in g.vertex_ids if g.is_wire_vertex(v) and g.out_degree(v) == 0)
    isolated = inputs & outputs
    wires = _trace_wires(g) if degrees_ok else ()
    kind = ENCODED_STRING if encoded_only else STRING
    return StringGraphReport(kind, inputs, outputs, isolated, wires)


# --- wire-homeomorphism --------------------------------------------------------


@dataclass(frozen=True)
class WSize:
    """Wire-homeomorphic size: (node-vertices, wires, isolated wire-vertices).

    Invariant under wire-homeomorphism; ``fits_in`` is the componentwise
    partial order.
    """

    n: int
    w: int
    i: int

    def fits_in(self, other: "WSize") -> bool:
        return self.n <= other.n and self.w <= other.w and self.i <= other.i


def measures(g: Graph) -> tuple[int, Optional[WSize]]:
    """Graph size |V|+|E| and, for (encoded) string graphs, the wsize."""
    size = len(g) + len(g.edges)
    report = classify(g)
    if not report.is_encoded:
        return size, None
    return size, WSize(len(g.node_vertices()), len(report.wires), len(report.isolated))


def wsize(g: Graph) -> WSize:
    size, ws = measures(g)
    if ws is None:
        raise NotEncodedStringGraphError("wsize is only defined on encoded string graphs")
    return ws


def _mergeable_pairs(g: Graph, report: StringGraphReport):
    """Adjacent wire-vertex pairs (a, b) whose merge preserves the wires.

    Merging is refused across distinct wire-vertex labels, on two-vertex
    circles (the result would be a self-loop) and on two-vertex bare wires
    (the result would be an isolated wire-vertex, destroying the wire).
    """
    for wire in report.wires:
        if len(wire.chain) < 2:
            continue
        if wire.kind in (CIRCLE, BARE) and len(wire.chain) == 2:
            continue
        chain = wire.chain + (wire.chain[0],) if wire.kind == CIRCLE else wire.chain
        for a, b in zip(chain, chain[1:]):
            if g.label(a) == g.label(b):
                yield a, b


def minimal_representative(g: Graph) -> Graph:
    """The minimal representative of the wire-homeomorphism class of ``g``.

    Repeatedly merges adjacent equal-labeled wire-vertices while the wire
    count is preserved: attached wires shrink to a single wire-vertex,
    circles and bare wires to two.  Idempotent, and the result is
    wire-homeomorphic to the input.
    """
    report = classify(g)
    if report.kind == NOT_STRING:
        raise NotStringGraphError(report.violations)
    while True:
        pair = next(iter(_mergeable_pairs(g, report)), None)
        if pair is None:
            return g
        a, b = pair
        # contract the edge a -> b: b's out-edge is re-sourced at a
        new_edges = [(a, e[1], e[2]) for e in g.out_edges(b)]
        g = g.with_elements(add_edges=new_edges, drop_vertices=[b])
        report = classify(g)


def elongate_edge(g: Graph, edge: Edge, fresh_id: str, wire_label: str = None) -> Graph:
    """Split an edge by inserting a fresh wire-vertex, duplicating the label.

    At least one endpoint must be a wire-vertex; the new vertex copies that
    endpoint's label unless one is given explicitly.
    """
    s, lab, t = edge
    if wire_label is None:
        if g.is_wire_vertex(s):
            wire_label = g.label(s)
        elif g.is_wire_vertex(t):
            wire_label = g.label(t)
        else:
            raise NotStringGraphError("cannot elongate an edge between node-vertices", edge)
    return g.with_elements(add_vertices={fresh_id: wire_label},
                           add_edges=[(s, lab, fresh_id), (fresh_id, lab, t)],
                           drop_edges=[edge])


def wire_homeomorphic(g: Graph, h: Graph) -> Optional[dict[str, str]]:
    """Decide g ~ h; on success return a vertex bijection between the
    minimal representatives (an isomorphism witness), else None."""
    from . import iso

    gm = minimal_representative(g)
    hm = minimal_representative(h)
    return iso.isomorphism(gm, hm)

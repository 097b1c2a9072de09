"""!-graphs: boxed string graphs, KILL/EXPAND, and conversion to grammars.

A !-graph is stored as its string-graph part plus a box table: each
!-vertex id maps to the set of vertices (and nested !-vertex ids) it
contains.  KILL removes a box with its contents; EXPAND splices in a fresh
copy of the contents, preserving all connections to the rest of the graph
and the box memberships of every copied vertex — overlapping boxes therefore
multiply, which is what separates balanced from unbalanced tree families.

Conversion to a grammar handles !-graphs whose non-nested boxes overlap at
most trivially (on interiors of closed wires between nodes of the two
boxes).  The construction is a linear chain of productions: one base
production per concrete fragment, a loop wrapper per box, bookkeeping edges
from every node-vertex to the chain nonterminal under private per-vertex
edge labels, connection instructions re-attaching cut cross-edges, and one
encoding edge label per shared wire whose decoding rule restores the wire.
A box's bookkeeping labels are dropped at its loop seam so one iteration's
copies never leak into the next; the labels keying shared-wire connections
persist across iterations, which realizes the n-times-m copy semantics of
trivially overlapping boxes.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from . import core, iso
from .core import Graph, LabelAlphabets
from .ednce import CI, EdnceGrammar, ExtendedGraph, Production
from .errors import (
    InvalidBangGraphError,
    NontrivialOverlapError,
    UnknownBangVertexError,
)
from .esg import BesgGrammar, DecodingRule, DecodingSystem, validate_besg

NO_OVERLAP = "no_overlap"
TRIVIAL_OVERLAP = "trivial_overlap"
NONTRIVIAL = "nontrivial"


@dataclass(frozen=True)
class BangGraph:
    """A string graph with !-boxes; ``boxes`` maps each !-vertex id to its
    contents (vertex ids plus nested !-vertex ids, the !-vertex excluded)."""

    graph: Graph
    boxes: dict[str, frozenset[str]]

    def box_ids(self) -> list[str]:
        return sorted(self.boxes)

    def terminal_contents(self, b: str) -> set[str]:
        return {v for v in self.boxes[b] if v in self.graph}

    def nested_in(self, b: str) -> set[str]:
        return {v for v in self.boxes[b] if v in self.boxes}

    def is_concrete(self) -> bool:
        return not self.boxes


def validate_bang_graph(graph: Graph, boxes: dict[str, Iterable[str]]) -> BangGraph:
    """Check the !-graph conditions, naming the broken one on failure.

    The bang-free part must be a string graph; box containment must be a
    partial order closed under nesting; and every box's string-graph part
    must be open (cross edges only ever connect a box wire-vertex with an
    outside node-vertex).
    """
    table = {b: frozenset(set(contents) - {b}) for b, contents in boxes.items()}
    for b, contents in table.items():
        if b in graph:
            raise InvalidBangGraphError("!-vertex id collides with a graph vertex", b)
        for m in contents:
            if m not in graph and m not in table:
                raise UnknownBangVertexError("box member is not a vertex or a box", b, m)
    report = core.classify(graph)
    if report.kind != core.STRING:
        raise InvalidBangGraphError("bang-free part is not a string graph",
                                    report.violations)
    for b, contents in table.items():
        for b2 in contents:
            if b2 in table and b in table[b2]:
                raise InvalidBangGraphError(
                    "box containment is not antisymmetric", b, b2)
            if b2 in table and not table[b2] <= contents:
                raise InvalidBangGraphError(
                    "nested box contents must be contained in the outer box", b, b2)
    bg = BangGraph(graph, table)
    for b in table:
        _check_open(bg, b)
    return bg


def _check_open(bg: BangGraph, b: str):
    inside = bg.terminal_contents(b)
    g = bg.graph
    for s, lab, t in g.edges:
        for inner, outer in ((s, t), (t, s)):
            if inner in inside and outer not in inside and not g.is_node_vertex(outer):
                raise InvalidBangGraphError(
                    "box is not open: cross edge reaches an outside wire-vertex",
                    b, (s, lab, t))


# --- KILL and EXPAND -----------------------------------------------------------------


def kill(bg: BangGraph, b: str) -> BangGraph:
    """Remove the box and everything it contains."""
    if b not in bg.boxes:
        raise UnknownBangVertexError(b)
    doomed = set(bg.boxes[b]) | {b}
    graph = bg.graph.induced(v for v in bg.graph.vertex_ids if v not in doomed)
    boxes = {b2: frozenset(v for v in contents if v not in doomed)
             for b2, contents in bg.boxes.items() if b2 not in doomed}
    return BangGraph(graph, boxes)


def expand(bg: BangGraph, b: str, tag: Optional[str] = None) -> BangGraph:
    """Splice in a fresh copy of the box contents.

    Copied vertices keep their cross connections to everything outside the
    box and join every other box their originals belonged to; nested boxes
    are copied with fresh !-vertex ids.
    """
    if b not in bg.boxes:
        raise UnknownBangVertexError(b)
    members = set(bg.boxes[b])
    tag = tag or _fresh_tag(bg)
    copy = {m: f"{m}{tag}" for m in members}

    g = bg.graph
    add_vertices = {copy[m]: g.label(m) for m in members if m in g}
    add_edges = set()
    for s, lab, t in g.edges:
        s_in, t_in = s in copy, t in copy
        if s_in and t_in:
            add_edges.add((copy[s], lab, copy[t]))
        elif s_in and not t_in:
            add_edges.add((copy[s], lab, t))
        elif t_in and not s_in:
            add_edges.add((s, lab, copy[t]))
    graph = g.with_elements(add_vertices=add_vertices, add_edges=add_edges)

    boxes = {}
    for b2, contents in bg.boxes.items():
        new = set(contents)
        if b2 != b and b2 not in members:
            # boxes outside the expanded one keep membership of the copies;
            # boxes nested inside it are themselves copied below
            new |= {copy[m] for m in contents & members}
        boxes[b2] = frozenset(new)
    for b2 in bg.nested_in(b):
        boxes[copy[b2]] = frozenset(copy[m] for m in bg.boxes[b2])
    return BangGraph(graph, boxes)


def _fresh_tag(bg: BangGraph) -> str:
    n = 0
    ids = set(bg.graph.vertex_ids) | set(bg.boxes)
    while any(v.endswith(f"~c{n}") for v in ids):
        n += 1
    return f"~c{n}"


def _bang_key(bg: BangGraph):
    g = bg.graph
    box_sigs = []
    for b, contents in bg.boxes.items():
        box_sigs.append((
            tuple(sorted(g.label(v) for v in contents if v in g)),
            sum(1 for v in contents if v in bg.boxes)))
    return (iso.invariant_key(g), tuple(sorted(box_sigs)))


def bang_isomorphic(a: BangGraph, b: BangGraph) -> bool:
    return iso.is_isomorphic(_encode_boxes(a), _encode_boxes(b))


def _encode_boxes(bg: BangGraph) -> Graph:
    alphabets = bg.graph.alphabets.extend(vertex_labels={"!"},
                                          edge_labels={"~in"})
    labels = dict(bg.graph.labels)
    labels.update({b: "!" for b in bg.boxes})
    edges = set(bg.graph.edges)
    for b, contents in bg.boxes.items():
        edges |= {(b, "~in", m) for m in contents}
    return Graph(alphabets, labels, edges)


def _permanent_nodes(bg: BangGraph) -> int:
    boxed = set().union(*bg.boxes.values()) if bg.boxes else set()
    return sum(1 for v in bg.graph.node_vertices() if v not in boxed)


def enumerate_bang(bg: BangGraph, max_expansions: int,
                   max_nodes: Optional[int] = None) -> iso.IsoSet:
    """All concrete string graphs reachable with at most ``max_expansions``
    EXPAND operations (KILLs are unrestricted), up to isomorphism.

    ``max_nodes`` prunes states whose un-boxed node-vertices — which survive
    every later operation — already exceed the bound.
    """
    # 0-1 breadth-first search: kills are free, expands cost one; states are
    # settled at dequeue time so the first visit uses the fewest expansions
    processed = iso.IsoSet(key=_bang_key, same=bang_isomorphic)
    frontier = deque([(bg, 0)])
    results = iso.IsoSet()
    while frontier:
        state, expansions = frontier.popleft()
        if not processed.add(state):
            continue
        if state.is_concrete():
            if max_nodes is None or len(state.graph.node_vertices()) <= max_nodes:
                results.add(state.graph)
            continue
        if max_nodes is not None and _permanent_nodes(state) > max_nodes:
            continue
        for b in state.box_ids():
            frontier.appendleft((kill(state, b), expansions))
            if expansions < max_expansions:
                frontier.append((expand(state, b), expansions + 1))
    return results


# --- overlap classification -------------------------------------------------------


@dataclass
class OverlapClass:
    classification: str
    witnesses: list[tuple[str, str, str]]  # (box, box, verdict) per pair
    shared_wires: list[tuple[str, str, core.Wire]]  # (in-side box, out-side box, wire)


def classify_overlap(bg: BangGraph) -> OverlapClass:
    """Per-pair analysis of the non-nested boxes.

    A pair overlaps trivially when the intersection consists solely of the
    interiors of closed wires whose endpoints are node-vertices lying in
    exactly one of the two boxes each; any node-vertex, stray wire-vertex or
    nested !-vertex in the intersection makes the overlap essential.
    """
    report = core.classify(bg.graph)
    wire_of = {}
    for wire in report.wires:
        for v in wire.chain:
            wire_of[v] = wire
    witnesses = []
    shared = []
    for b1, b2 in itertools.combinations(bg.box_ids(), 2):
        if b1 in bg.boxes[b2] or b2 in bg.boxes[b1]:
            continue  # nested, not overlapping
        inter = set(bg.boxes[b1]) & set(bg.boxes[b2])
        if not inter:
            witnesses.append((b1, b2, NO_OVERLAP))
            continue
        verdict = TRIVIAL_OVERLAP
        checked = set()
        for v in sorted(inter):
            if v in checked:
                continue
            wire = wire_of.get(v)
            if v in bg.boxes or bg.graph.is_node_vertex(v) or wire is None \
                    or wire.kind != core.ATTACHED or len(wire.endpoints) != 2:
                verdict = NONTRIVIAL
                break
            u1, u2 = wire.endpoints
            fwd = (u1 in bg.boxes[b1] and u1 not in bg.boxes[b2]
                   and u2 in bg.boxes[b2] and u2 not in bg.boxes[b1])
            rev = (u1 in bg.boxes[b2] and u1 not in bg.boxes[b1]
                   and u2 in bg.boxes[b1] and u2 not in bg.boxes[b2])
            if not (set(wire.chain) <= inter and (fwd or rev)):
                verdict = NONTRIVIAL
                break
            checked |= set(wire.chain)
            shared.append((b1, b2, wire) if fwd else (b2, b1, wire))
        witnesses.append((b1, b2, verdict))
    if any(v == NONTRIVIAL for *_, v in witnesses):
        classification = NONTRIVIAL
    elif any(v == TRIVIAL_OVERLAP for *_, v in witnesses):
        classification = TRIVIAL_OVERLAP
    else:
        classification = NO_OVERLAP
    return OverlapClass(classification, witnesses,
                        shared if classification != NONTRIVIAL else [])


# --- conversion to grammars ----------------------------------------------------------


@dataclass
class _Pending:
    """A production collected during conversion, materialized once the full
    label alphabet is known."""

    lhs: str
    labels: dict[str, str]
    edges: set
    connections: list


@dataclass
class BangConversion:
    grammar: EdnceGrammar
    decoding: DecodingSystem
    besg: BesgGrammar
    encoded: bool  # True when shared wires were turned into encoding edges


class _Builder:
    """Conversion state: private labels, pending productions, and where and
    when each original vertex gets generated."""

    def __init__(self, bg: BangGraph):
        self.bg = bg
        self.node_ids = [v for v in bg.graph.vertex_ids
                         if bg.graph.is_node_vertex(v)]
        self.alpha = {v: f"~a{v}" for v in self.node_ids}
        self.persist: dict[str, str] = {}
        self.counter = 0
        self.pending: list[_Pending] = []
        self.production_of_vertex: dict[str, int] = {}

    def fresh_label(self, stem: str) -> str:
        self.counter += 1
        return f"~{stem}{self.counter}"

    def pass_instructions(self, nt: str, cut_nodes: set[str],
                          own_nodes: set[str]) -> list:
        """Bookkeeping pass-through for the chain nonterminal.

        A node's own production skips its plain label (the body edges carry
        it) and a box seam cuts its contents' plain labels; persistent labels
        are always passed so every copy stays reachable.
        """
        out = []
        g = self.bg.graph
        for v in self.node_ids:
            if v not in cut_nodes and v not in own_nodes:
                lab = self.alpha[v]
                out.append(CI(g.label(v), lab, lab, nt, "in"))
                out.append(CI(g.label(v), lab, lab, nt, "out"))
            if v in self.persist:
                lab = self.persist[v]
                out.append(CI(g.label(v), lab, lab, nt, "in"))
                out.append(CI(g.label(v), lab, lab, nt, "out"))
        return out

    def emit(self, lhs: str, labels: dict[str, str], edges: set,
             connections: list) -> int:
        self.pending.append(_Pending(lhs, labels, set(edges), list(connections)))
        return len(self.pending) - 1

    def chain(self, lhs: str, target: str, cut_nodes: set[str]) -> _Pending:
        return _Pending(lhs, {"~x": target}, set(),
                        self.pass_instructions("~x", cut_nodes, set()))

    def index_of_label(self, lhs: str) -> int:
        return next(i for i, p in enumerate(self.pending) if p.lhs == lhs)


def _sub_bang(bg: BangGraph, vertices: set[str], boxes: Iterable[str]) -> BangGraph:
    graph = bg.graph.induced(v for v in vertices if v in bg.graph)
    return BangGraph(graph, {b: bg.boxes[b] for b in boxes})


def _convert(builder: _Builder, bg: BangGraph) -> tuple[str, str]:
    """Emit the chain of productions for one sub-!-graph; returns its
    initial and final nonterminal labels."""
    g = builder.bg.graph
    if bg.is_concrete():
        s_label = builder.fresh_label("S")
        f_label = builder.fresh_label("F")
        vertices = set(bg.graph.vertex_ids)
        labels = {v: g.label(v) for v in vertices}
        labels["~x"] = f_label
        edges = {e for e in g.edges if e[0] in vertices and e[2] in vertices}
        for v in sorted(vertices):
            if g.is_node_vertex(v):
                edges |= {(v, builder.alpha[v], "~x"), ("~x", builder.alpha[v], v)}
                if v in builder.persist:
                    edges |= {(v, builder.persist[v], "~x"),
                              ("~x", builder.persist[v], v)}
        idx = builder.emit(s_label, labels, edges,
                           builder.pass_instructions("~x", set(), vertices))
        for v in vertices:
            builder.production_of_vertex[v] = idx
        builder.emit(f_label, {}, set(), [])
        return s_label, f_label

    top = sorted(b for b in bg.boxes
                 if not any(b in bg.boxes[b2] for b2 in bg.boxes if b2 != b))
    b = top[0]
    inside = set(bg.boxes[b]) | {b}
    rest_vertices = {v for v in bg.graph.vertex_ids if v not in inside}
    rest_boxes = [b2 for b2 in bg.boxes if b2 not in inside]
    cross = [(s, lab, t) for (s, lab, t) in sorted(bg.graph.edges)
             if (s in rest_vertices) != (t in rest_vertices)]

    s_rest, f_rest = _convert(builder, _sub_bang(bg, rest_vertices, rest_boxes))
    content = _sub_bang(bg, bg.terminal_contents(b), bg.nested_in(b))
    s_box, f_box = _convert(builder, content)

    content_nodes = {v for v in content.graph.vertex_ids if g.is_node_vertex(v)}
    s_loop = builder.fresh_label("S")
    f_done = builder.fresh_label("F")

    # the box grammar's final production loops back, dropping this box's
    # bookkeeping labels so the finished iteration is sealed off
    builder.pending[builder.index_of_label(f_box)] = \
        builder.chain(f_box, s_loop, content_nodes)
    builder.pending.append(builder.chain(s_loop, s_box, set()))   # iterate
    builder.pending.append(builder.chain(s_loop, f_done, set()))  # stop
    builder.emit(f_done, {}, set(), [])
    # the surrounding grammar chains into the box loop
    builder.pending[builder.index_of_label(f_rest)] = \
        builder.chain(f_rest, s_loop, set())

    # reattach the cut cross edges: by openness the outside endpoint is a
    # node-vertex and the inside endpoint a wire-vertex of the box
    for (s, lab, t) in cross:
        if s in rest_vertices:
            node, wire, direction = s, t, "in"
        else:
            node, wire, direction = t, s, "out"
        if not g.is_node_vertex(node) or not g.is_wire_vertex(wire):
            raise InvalidBangGraphError(
                "cross edge is not node-to-wire; box is not open", (s, lab, t))
        builder.pending[builder.production_of_vertex[wire]].connections.append(
            CI(g.label(node), builder.alpha[node], lab, wire, direction))
    return s_rest, f_done


def bang_to_grammar(bg: BangGraph) -> BangConversion:
    """Convert a !-graph with at most trivial overlaps into a grammar whose
    bounded language equals the KILL/EXPAND language.

    Shared closed wires between trivially overlapping boxes become encoding
    edges: every copy of the later-generated endpoint is connected to every
    copy of the earlier one under a fresh encoding label whose decoding rule
    restores the removed wire.
    """
    overlap = classify_overlap(bg)
    if overlap.classification == NONTRIVIAL:
        raise NontrivialOverlapError(overlap.witnesses)

    g = bg.graph
    pending_wires = []
    removed: set[str] = set()
    for (_, _, wire) in overlap.shared_wires:
        if set(wire.chain) & removed:
            continue  # a wire shared by several box pairs is cut only once
        u_in, u_out = wire.endpoints
        pending_wires.append({"src": u_in, "tgt": u_out, "wire": wire})
        removed |= set(wire.chain)
    stripped = Graph(g.alphabets,
                     {v: lab for v, lab in g.labels.items() if v not in removed},
                     {e for e in g.edges
                      if e[0] not in removed and e[2] not in removed})
    boxes = {b: frozenset(v for v in contents if v not in removed)
             for b, contents in bg.boxes.items()}
    core_bg = BangGraph(stripped, boxes)

    builder = _Builder(core_bg)
    for k, item in enumerate(pending_wires):
        item["label"] = f"~b{k}"
        for endpoint in (item["src"], item["tgt"]):
            builder.persist.setdefault(endpoint, f"~p{endpoint}")

    initial, _ = _convert(builder, core_bg)

    # shared-wire instructions: attach to the later-generated endpoint,
    # keyed on the persistent label of the earlier one
    for item in pending_wires:
        src, tgt = item["src"], item["tgt"]
        if builder.production_of_vertex[tgt] >= builder.production_of_vertex[src]:
            prod, keyed, attach, direction = \
                (builder.production_of_vertex[tgt], src, tgt, "in")
        else:
            prod, keyed, attach, direction = \
                (builder.production_of_vertex[src], tgt, src, "out")
        builder.pending[prod].connections.append(
            CI(g.label(keyed), builder.persist[keyed], item["label"],
               attach, direction))

    encodings = ({item["label"] for item in pending_wires}
                 | set(g.alphabets.encoding_labels))
    nonterminals = {p.lhs for p in builder.pending}
    alphabets = g.alphabets.extend(
        vertex_labels=nonterminals,
        edge_labels=set(builder.alpha.values()) | set(builder.persist.values()),
        encoding_labels=encodings)
    productions = [Production(p.lhs,
                              ExtendedGraph(Graph(alphabets, p.labels, p.edges),
                                            p.connections))
                   for p in builder.pending]
    grammar = EdnceGrammar(alphabets, productions, initial)

    decoding = DecodingSystem(alphabets, _decoding_rules(bg, alphabets, pending_wires))
    besg = validate_besg(grammar, decoding)
    return BangConversion(grammar, decoding, besg, encoded=bool(pending_wires))


def _decoding_rules(bg: BangGraph, alphabets: LabelAlphabets,
                    pending_wires: list[dict]) -> list[DecodingRule]:
    g = bg.graph
    rules = {}
    for item in pending_wires:
        src, tgt, wire = item["src"], item["tgt"], item["wire"]
        ren = {src: "~anchor1", tgt: "~anchor2"}
        labels = {"~anchor1": g.label(src), "~anchor2": g.label(tgt)}
        labels.update({v: g.label(v) for v in wire.chain})
        edges = set()
        for v in wire.chain:
            for e in g.edges:
                if v in (e[0], e[2]):
                    edges.add((ren.get(e[0], e[0]), e[1], ren.get(e[2], e[2])))
        replacement = Graph(alphabets, labels, edges)
        rules[(item["label"], g.label(src), g.label(tgt))] = DecodingRule(
            item["label"], g.label(src), g.label(tgt), replacement,
            ("~anchor1", "~anchor2"))
    # fill the remaining triples so the system is total
    if alphabets.encoding_labels:
        wire_labels = sorted(alphabets.wire_labels)
        plain = sorted(lab for lab in alphabets.edge_labels
                       if lab not in alphabets.encoding_labels
                       and not lab.startswith("~"))
        if not plain:
            plain = sorted(alphabets.edge_labels - alphabets.encoding_labels)
        for key in itertools.product(sorted(alphabets.encoding_labels),
                                     sorted(alphabets.node_labels),
                                     sorted(alphabets.node_labels)):
            if key in rules:
                continue
            if not wire_labels:
                raise InvalidBangGraphError(
                    "cannot build a total decoding system without a "
                    "wire-vertex label")
            enc, s_lab, t_lab = key
            replacement = Graph(alphabets,
                                {"~anchor1": s_lab, "~anchor2": t_lab,
                                 "~t": wire_labels[0]},
                                {("~anchor1", plain[0], "~t"),
                                 ("~t", plain[0], "~anchor2")})
            rules[key] = DecodingRule(enc, s_lab, t_lab, replacement,
                                      ("~anchor1", "~anchor2"))
    return list(rules.values())

"""Double-pushout rewriting on graphs and string graphs.

The pushout complement is computed by the componentwise deletion formula
X_K = X_H - m(X_L - l(X_I)) after checking the no-dangling-edges condition;
the pushout glues along the interface after checking the ParEdges condition
(never merging parallel same-label edges silently).  String-graph rewriting
additionally matches up to wire-homeomorphism by growing host wires, and the
combined Edges condition guarantees the rewrite exists and is unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from . import core, iso
from .core import Edge, Graph
from .errors import (
    BadMorphismError,
    DanglingEdgeError,
    EdgesConditionViolationError,
    InputOutputMismatchError,
    InterfaceNotBoundaryError,
    InternalAssertion,
    IsolatedWireVertexInSideError,
    NoMatchError,
    ParEdgesViolationError,
)


@dataclass(frozen=True)
class GraphMorphism:
    """A label- and edge-preserving vertex map between graphs."""

    source: Graph
    target: Graph
    vertex_map: dict[str, str]

    def __post_init__(self):
        vm = self.vertex_map
        for v in self.source.vertex_ids:
            if v not in vm:
                raise BadMorphismError("vertex map is not total", v)
            if vm[v] not in self.target:
                raise BadMorphismError("vertex map leaves the target", v, vm[v])
            if self.source.label(v) != self.target.label(vm[v]):
                raise BadMorphismError("labels not preserved", v, vm[v])
        for s, lab, t in self.source.edges:
            if (vm[s], lab, vm[t]) not in self.target.edges:
                raise BadMorphismError("edges not preserved", (s, lab, t))

    @property
    def is_mono(self) -> bool:
        values = list(self.vertex_map.values())
        return len(values) == len(set(values))

    def __call__(self, v: str) -> str:
        return self.vertex_map[v]

    def edge_image(self, e: Edge) -> Edge:
        return (self.vertex_map[e[0]], e[1], self.vertex_map[e[2]])

    def image_vertices(self, vertices: Iterable[str] = None) -> set[str]:
        vs = self.source.vertex_ids if vertices is None else vertices
        return {self.vertex_map[v] for v in vs}

    def image_edges(self, edges: Iterable[Edge] = None) -> set[Edge]:
        es = self.source.edges if edges is None else edges
        return {self.edge_image(e) for e in es}

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        return GraphMorphism(self.source, other.target,
                             {v: other.vertex_map[w] for v, w in self.vertex_map.items()})

    @staticmethod
    def identity(g: Graph) -> "GraphMorphism":
        return GraphMorphism(g, g, {v: v for v in g.vertex_ids})


def find_monomorphisms(pattern: Graph, host: Graph,
                       limit: Optional[int] = None) -> list[GraphMorphism]:
    """All injective matches of the pattern in the host, in a deterministic
    order (lexicographic over sorted host ids per pattern vertex)."""
    maps = iso.monomorphisms(pattern, host, limit)
    order = sorted(pattern.vertex_ids)
    maps.sort(key=lambda m: tuple(m[v] for v in order))
    return [GraphMorphism(pattern, host, m) for m in maps]


def pushout_complement(l: GraphMorphism, m: GraphMorphism
                       ) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """The pushout complement K of monos I -l-> L -m-> H with k: I->K and the
    inclusion s: K->H; fails on dangling edges."""
    if not l.is_mono or not m.is_mono:
        raise BadMorphismError("pushout complement requires monos")
    L, H, I = l.target, m.target, l.source
    interface_img = {m(l(v)) for v in I.vertex_ids}
    deleted_v = m.image_vertices() - interface_img
    matched_edges = m.image_edges()
    for e in sorted(H.edges):
        if e in matched_edges:
            continue
        for end in (e[0], e[2]):
            if end in deleted_v:
                raise DanglingEdgeError("edge outside the match touches a deleted vertex",
                                        e, end)
    kept_edges = set(H.edges) - {m.edge_image(e) for e in L.edges
                                 if e not in l.image_edges()}
    K = Graph(H.alphabets,
              {v: H.label(v) for v in H.vertex_ids if v not in deleted_v},
              kept_edges)
    k = GraphMorphism(I, K, {v: m(l(v)) for v in I.vertex_ids})
    s = GraphMorphism(K, H, {v: v for v in K.vertex_ids})
    return K, k, s


def pushout(k: GraphMorphism, r: GraphMorphism
            ) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """The pushout M of monos K <-k- I -r-> R with f: R->M and g: K->M.

    The ParEdges condition is checked first; a violating span is an error,
    never a silent merge of parallel edges.
    """
    if not k.is_mono or not r.is_mono:
        raise BadMorphismError("pushout requires monos")
    I, K, R = k.source, k.target, r.target
    for v, w in itertools.product(I.vertex_ids, I.vertex_ids):
        for lab in I.alphabets.edge_labels:
            if (k(v), lab, k(w)) in K.edges and (r(v), lab, r(w)) in R.edges \
                    and (v, lab, w) not in I.edges:
                raise ParEdgesViolationError("span would merge parallel edges", v, w, lab)

    r_inverse = {r(v): v for v in I.vertex_ids}
    used = set(K.vertex_ids)
    f_map: dict[str, str] = {}
    for x in R.vertex_ids:
        if x in r_inverse:
            f_map[x] = k(r_inverse[x])
        else:
            new = x
            n = 0
            while new in used:
                n += 1
                new = f"{x}~r{n}"
            f_map[x] = new
            used.add(new)
    labels = {v: K.label(v) for v in K.vertex_ids}
    labels.update({f_map[x]: R.label(x) for x in R.vertex_ids})
    edges = set(K.edges) | {(f_map[s], lab, f_map[t]) for s, lab, t in R.edges}
    M = Graph(K.alphabets, labels, edges)
    f = GraphMorphism(R, M, f_map)
    g = GraphMorphism(K, M, {v: v for v in K.vertex_ids})
    return M, f, g


# --- string graph rewrite rules -------------------------------------------------


@dataclass(frozen=True)
class GraphRewriteRule:
    """A span of monos L <-l- I -r-> R; ``string_rule`` marks that the
    string-graph conditions P1-P4 were verified and the input/output
    bijections (as maps L vid -> R vid) extracted."""

    L: Graph
    I: Graph
    R: Graph
    l: GraphMorphism
    r: GraphMorphism
    string_rule: bool = False
    input_bijection: Optional[dict[str, str]] = None
    output_bijection: Optional[dict[str, str]] = None

    def reversed(self) -> "GraphRewriteRule":
        return GraphRewriteRule(self.R, self.I, self.L, self.r, self.l,
                                self.string_rule,
                                _invert(self.input_bijection),
                                _invert(self.output_bijection))


def _invert(d):
    return None if d is None else {v: k for k, v in d.items()}


def make_rule(L: Graph, I: Graph, R: Graph, l_map: dict[str, str],
              r_map: dict[str, str]) -> GraphRewriteRule:
    l = GraphMorphism(I, L, l_map)
    r = GraphMorphism(I, R, r_map)
    if not l.is_mono or not r.is_mono:
        raise BadMorphismError("rule legs must be monos")
    return GraphRewriteRule(L, I, R, l, r)


def validate_string_rewrite_rule(rule: GraphRewriteRule) -> GraphRewriteRule:
    """Verify the string-graph rewrite rule conditions.

    P1: L and R have no isolated wire-vertices.  P2/P3: the interface
    consists exactly of L's inputs and outputs as isolated wire-vertices,
    and likewise for R.  P4: the bijections induced by l and r send inputs
    to inputs and outputs to outputs.
    """
    L, I, R = rule.L, rule.I, rule.R
    rep_l, rep_r = core.classify(L), core.classify(R)
    for side, rep in (("L", rep_l), ("R", rep_r)):
        if rep.kind != core.STRING:
            raise InterfaceNotBoundaryError(f"{side} is not a string graph", rep.violations)
        if rep.isolated:
            raise IsolatedWireVertexInSideError(side, sorted(rep.isolated))
    for v in I.vertex_ids:
        if not I.is_wire_vertex(v):
            raise InterfaceNotBoundaryError("interface vertex is not a wire-vertex", v)
        if I.in_degree(v) or I.out_degree(v):
            raise InterfaceNotBoundaryError("interface vertex is not isolated", v)
    boundary_l = rep_l.inputs | rep_l.outputs
    if rule.l.image_vertices() != boundary_l:
        raise InterfaceNotBoundaryError(
            "interface must map exactly onto L's inputs and outputs",
            sorted(rule.l.image_vertices() ^ boundary_l))
    if rule.r.image_vertices() != (rep_r.inputs | rep_r.outputs):
        raise InputOutputMismatchError(
            "interface must map exactly onto R's inputs and outputs",
            sorted(rule.r.image_vertices() ^ (rep_r.inputs | rep_r.outputs)))
    inputs, outputs = {}, {}
    for v in I.vertex_ids:
        lv, rv = rule.l(v), rule.r(v)
        if (lv in rep_l.inputs) != (rv in rep_r.inputs) or \
                (lv in rep_l.outputs) != (rv in rep_r.outputs):
            raise InputOutputMismatchError("l and r disagree on input/output roles", v)
        if lv in rep_l.inputs:
            inputs[lv] = rv
        else:
            outputs[lv] = rv
    return GraphRewriteRule(L, I, R, rule.l, rule.r, True, inputs, outputs)


# --- matching and rewriting up to wire-homeomorphism ------------------------------


@dataclass(frozen=True)
class StringMatching:
    """A matching of a rule's LHS into a wire-homeomorphic variant of the
    host (the variant differs from the host only by grown wires)."""

    host_variant: Graph
    morphism: GraphMorphism
    growth: tuple[int, ...] = ()


@dataclass(frozen=True)
class DpoResult:
    """The full double square of a DPO rewrite."""

    rule: GraphRewriteRule
    host: Graph
    matching: GraphMorphism
    complement: Graph
    k: GraphMorphism
    s: GraphMorphism
    result: Graph
    f: GraphMorphism
    g: GraphMorphism


def _grow_wire(g: Graph, wire: core.Wire, extra: int) -> Graph:
    v0 = wire.chain[0]
    n = 0
    for _ in range(extra):
        while f"{v0}~g{n}" in g:
            n += 1
        edge = g.in_edges(v0)[0] if g.in_edges(v0) else g.out_edges(v0)[0]
        g = core.elongate_edge(g, edge, f"{v0}~g{n}")
    return g


def find_string_matchings(rule_or_lhs, host: Graph,
                          max_growth: Optional[int] = None,
                          require_dangling_free: bool = True) -> list[StringMatching]:
    """Matchings of L into hosts wire-homeomorphic to ``host``.

    Every host wire is grown by up to ``max_growth`` extra wire-vertices
    (default: the number of wire-vertices of L, which no single match can
    exceed); all growth profiles are searched in lexicographic order, the
    ungrown host first.
    """
    if isinstance(rule_or_lhs, GraphRewriteRule):
        rule = rule_or_lhs
        L = rule.L
    else:
        rule, L = None, rule_or_lhs
    report = core.classify(host)
    if report.kind == core.NOT_STRING:
        raise NoMatchError("host is not a string graph", report.violations)
    if max_growth is None:
        max_growth = len(L.wire_vertices())
    wires = report.wires
    matchings: list[StringMatching] = []
    for profile in itertools.product(range(max_growth + 1), repeat=len(wires)):
        variant = host
        for wire, extra in zip(wires, profile):
            variant = _grow_wire(variant, wire, extra)
        for mono in find_monomorphisms(L, variant):
            if rule is not None and require_dangling_free and \
                    not _dangling_free(rule, mono):
                continue
            matchings.append(StringMatching(variant, mono, profile))
    return matchings


def _dangling_free(rule: GraphRewriteRule, m: GraphMorphism) -> bool:
    H = m.target
    interface_img = {m(rule.l(v)) for v in rule.I.vertex_ids}
    deleted = m.image_vertices() - interface_img
    matched = m.image_edges()
    return not any((e[0] in deleted or e[2] in deleted) and e not in matched
                   for e in H.edges)


def _check_edges_condition(rule: GraphRewriteRule, m: GraphMorphism):
    H = m.target
    for v, w in itertools.product(rule.I.vertex_ids, rule.I.vertex_ids):
        for lab in H.alphabets.edge_labels:
            if (m(rule.l(v)), lab, m(rule.l(w))) in H.edges \
                    and (rule.r(v), lab, rule.r(w)) in rule.R.edges \
                    and (rule.l(v), lab, rule.l(w)) not in rule.L.edges:
                raise EdgesConditionViolationError(
                    "rewrite would merge parallel edges in the result", v, w, lab)


def dpo_rewrite(host: Graph, rule: GraphRewriteRule, m: GraphMorphism) -> DpoResult:
    """One DPO step at an explicit matching (host must be m's target)."""
    if not m.is_mono:
        raise BadMorphismError("matching must be a mono")
    _check_edges_condition(rule, m)
    K, k, s = pushout_complement(rule.l, m)
    M, f, g = pushout(k, rule.r)
    return DpoResult(rule, host, m, K, k, s, M, f, g)


def rewrite_string_graph(host: Graph, rule: GraphRewriteRule,
                         matching: Optional[GraphMorphism] = None
                         ) -> tuple[DpoResult, Graph]:
    """Rewrite a string graph, matching up to wire-homeomorphism when no
    matching is given.  The result is again a string graph."""
    if not rule.string_rule:
        rule = validate_string_rewrite_rule(rule)
    if matching is not None:
        result = dpo_rewrite(matching.target, rule, matching)
    else:
        found = find_string_matchings(rule, host)
        if not found:
            raise NoMatchError("no matching up to wire-homeomorphism")
        first = found[0]
        result = dpo_rewrite(first.host_variant, rule, first.morphism)
    out_report = core.classify(result.result)
    if out_report.kind != core.STRING:
        raise InternalAssertion("string rewrite produced a non-string graph",
                                out_report.violations)
    return result, result.result

"""edNCE graph grammars: extended graphs, substitution, derivations.

An extended graph is a graph plus a set of connection instructions
(sigma, beta, gamma, x, d).  When a daughter graph replaces a nonterminal
vertex v of a mother graph, each instruction creates *bridges*: for every
sigma-labeled neighbor w of v reached by a beta-labeled edge in direction d,
a gamma-labeled edge is created between w and the daughter vertex x.

Grammars here are always over final edge labels only; inputs that declare
non-final labels are rejected at load time.  Derivations, derivation trees
with yields, the standard subclass checks (boundary, confluent, linear, apex,
neighbourhood-deterministic), context-consistency and the normal forms
(no empty productions, no chain productions, reduced, no useless connection
instructions) are all provided, together with bounded language enumeration
used by the tests to certify language preservation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import iso
from .core import IN, OUT, Edge, Graph, LabelAlphabets
from .errors import (
    BadGrammarError,
    LabelMismatchError,
    MalformedTreeError,
    NotBoundaryError,
    ParallelBridgeError,
    UnknownVertexError,
)


@dataclass(frozen=True, order=True)
class ConnectionInstruction:
    """(sigma, beta, gamma, x, d): connect the daughter vertex x with a
    gamma-edge to every sigma-labeled vertex that reached the replaced
    nonterminal through a beta-edge in direction d."""

    sigma: str
    match: str
    relabel: str
    vertex: str
    direction: str

    def as_tuple(self):
        return (self.sigma, self.match, self.relabel, self.vertex, self.direction)


CI = ConnectionInstruction


class ExtendedGraph:
    """A graph together with its connection instructions."""

    __slots__ = ("graph", "connections", "_at")

    def __init__(self, graph: Graph, connections: Iterable[ConnectionInstruction] = ()):
        self.graph = graph
        self.connections = frozenset(connections)
        at: dict[str, list[ConnectionInstruction]] = {}
        for c in self.connections:
            if c.vertex not in graph:
                raise UnknownVertexError("connection instruction attached to missing vertex", c)
            if c.direction not in (IN, OUT):
                raise BadGrammarError("bad instruction direction", c)
            at.setdefault(c.vertex, []).append(c)
        self._at = {v: tuple(sorted(cs)) for v, cs in at.items()}

    def instructions_at(self, v: str) -> tuple[ConnectionInstruction, ...]:
        return self._at.get(v, ())

    @property
    def alphabets(self) -> LabelAlphabets:
        return self.graph.alphabets

    def is_boundary(self) -> bool:
        g = self.graph
        for s, _, t in g.edges:
            if g.is_nonterminal_vertex(s) and g.is_nonterminal_vertex(t):
                return False
        return not any(g.alphabets.is_nonterminal(c.sigma) for c in self.connections)

    def relabel_vertices(self, mapping: dict[str, str]) -> "ExtendedGraph":
        ren = lambda v: mapping.get(v, v)
        return ExtendedGraph(
            self.graph.relabel_vertices(mapping),
            (CI(c.sigma, c.match, c.relabel, ren(c.vertex), c.direction)
             for c in self.connections))

    def terminal_part(self) -> Graph:
        g = self.graph
        return g.induced(v for v in g.vertex_ids if not g.is_nonterminal_vertex(v))

    def __repr__(self):
        return (f"ExtendedGraph({len(self.graph)} vertices, "
                f"{len(self.graph.edges)} edges, {len(self.connections)} instructions)")


def substitute_traced(mother: ExtendedGraph, v: str, daughter: ExtendedGraph,
                      fresh: Optional[Iterator[str]] = None
                      ) -> tuple[ExtendedGraph, dict[str, str]]:
    """Replace vertex v of the mother by the daughter graph.

    Returns the result together with the renaming applied to the daughter's
    vertices (daughter ids colliding with surviving mother ids are freshened;
    with a ``fresh`` id source every daughter vertex is renamed, which keeps
    derivations replayable).  Raises ParallelBridgeError when two bridges
    would coincide in the same (source, label, target) triple.
    """
    mg, dg = mother.graph, daughter.graph
    if v not in mg:
        raise UnknownVertexError("no such vertex in mother graph", v)

    kept = set(mg.vertex_ids) - {v}
    renaming: dict[str, str] = {}
    if fresh is not None:
        for dv in dg.vertex_ids:
            renaming[dv] = next(fresh)
    else:
        used = set(kept)
        for dv in dg.vertex_ids:
            new = dv
            k = 0
            while new in used:
                k += 1
                new = f"{dv}~{k}"
            renaming[dv] = new
            used.add(new)
    dgr = daughter.relabel_vertices(renaming)
    if kept & set(dgr.graph.vertex_ids):
        raise UnknownVertexError("daughter ids collide with mother ids after renaming",
                                 sorted(kept & set(dgr.graph.vertex_ids)))

    labels = {u: mg.label(u) for u in kept}
    labels.update(dgr.graph.labels)
    edges = {e for e in mg.edges if e[0] != v and e[2] != v}
    edges |= dgr.graph.edges

    bridges: dict[Edge, tuple] = {}
    for (w, beta, _) in mg.in_edges(v):
        for c in dgr.connections:
            if c.direction == IN and c.sigma == mg.label(w) and c.match == beta:
                _add_bridge(bridges, (w, c.relabel, c.vertex), (w, beta, c))
    for (_, beta, w) in mg.out_edges(v):
        for c in dgr.connections:
            if c.direction == OUT and c.sigma == mg.label(w) and c.match == beta:
                _add_bridge(bridges, (c.vertex, c.relabel, w), (w, beta, c))
    edges |= bridges.keys()

    connections = {c for c in mother.connections if c.vertex != v}
    for cm in mother.connections:
        if cm.vertex != v:
            continue
        for cd in dgr.connections:
            if cd.sigma == cm.sigma and cd.match == cm.relabel and cd.direction == cm.direction:
                connections.add(CI(cm.sigma, cm.match, cd.relabel, cd.vertex, cm.direction))

    result = ExtendedGraph(Graph(mg.alphabets, labels, edges), connections)
    return result, renaming


def _add_bridge(bridges: dict, edge: Edge, provenance: tuple):
    if edge in bridges and bridges[edge] != provenance:
        raise ParallelBridgeError("two bridges coincide on the same edge", edge,
                                  bridges[edge], provenance)
    bridges[edge] = provenance


def substitute(mother: ExtendedGraph, v: str, daughter: ExtendedGraph) -> ExtendedGraph:
    return substitute_traced(mother, v, daughter)[0]


# --- grammars ------------------------------------------------------------------


@dataclass(frozen=True)
class Production:
    """lhs -> body, with the body's nonterminal vertices in a fixed order."""

    lhs: str
    body: ExtendedGraph
    nt_order: tuple[str, ...] = ()

    def __post_init__(self):
        nts = set(self.body.graph.nonterminal_vertices())
        order = self.nt_order or tuple(sorted(nts))
        if self.nt_order == ():
            object.__setattr__(self, "nt_order", order)
        if set(order) != nts or len(order) != len(nts):
            raise BadGrammarError("nt_order must list the body's nonterminal vertices exactly",
                                  self.lhs, order, sorted(nts))

    def is_chain(self) -> bool:
        g = self.body.graph
        return len(g) == 1 and g.is_nonterminal_vertex(g.vertex_ids[0])

    def is_empty(self) -> bool:
        return len(self.body.graph) == 0


class EdnceGrammar:
    """A finite production set with an initial nonterminal label."""

    def __init__(self, alphabets: LabelAlphabets, productions: Sequence[Production],
                 initial: str):
        if not alphabets.is_nonterminal(initial):
            raise BadGrammarError("initial label must be nonterminal", initial)
        for p in productions:
            if not alphabets.is_nonterminal(p.lhs):
                raise BadGrammarError("production label must be nonterminal", p.lhs)
            if p.body.alphabets is not alphabets and p.body.alphabets != alphabets:
                raise BadGrammarError("production body uses foreign alphabets", p.lhs)
        self.alphabets = alphabets
        self.productions = tuple(productions)
        self.initial = initial

    def production_indices_for(self, label: str) -> list[int]:
        return [i for i, p in enumerate(self.productions) if p.lhs == label]

    def labels_used(self) -> set[str]:
        used = set()
        for p in self.productions:
            used.update(p.body.graph.labels.values())
        return used

    def is_boundary(self) -> bool:
        return all(p.body.is_boundary() for p in self.productions)

    def require_boundary(self):
        for i, p in enumerate(self.productions):
            if not p.body.is_boundary():
                raise NotBoundaryError("production body violates the boundary conditions", i, p.lhs)

    def start_graph(self, vertex: str = "n0") -> ExtendedGraph:
        g = Graph(self.alphabets, {vertex: self.initial}, ())
        return ExtendedGraph(g)

    def __repr__(self):
        return f"EdnceGrammar({len(self.productions)} productions, initial {self.initial!r})"


@dataclass
class GrammarClassification:
    boundary: bool
    confluent: bool
    linear: bool
    apex: bool
    nnd: bool


def classify_grammar(grammar: EdnceGrammar) -> GrammarClassification:
    """Static subclass checks: boundary / confluent / linear / apex /
    nonterminal-neighbourhood-deterministic."""
    boundary = grammar.is_boundary()
    linear = all(len(p.body.graph.nonterminal_vertices()) <= 1 for p in grammar.productions)
    apex = all(
        not grammar.alphabets.is_nonterminal(c.sigma)
        and not p.body.graph.is_nonterminal_vertex(c.vertex)
        for p in grammar.productions for c in p.body.connections)
    return GrammarClassification(
        boundary=boundary,
        confluent=_is_confluent(grammar),
        linear=linear,
        apex=apex,
        nnd=boundary and _is_nnd(grammar),
    )


def _is_confluent(grammar: EdnceGrammar) -> bool:
    edge_labels = sorted(grammar.alphabets.edge_labels)
    prods = grammar.productions
    for p1, p2 in itertools.product(prods, prods):
        c1, c2 = p1.body.connections, p2.body.connections
        for x1 in p1.body.graph.vertex_ids:
            lam1 = p1.body.graph.label(x1)
            for x2 in p2.body.graph.vertex_ids:
                lam2 = p2.body.graph.label(x2)
                for alpha, delta in itertools.product(edge_labels, edge_labels):
                    lhs = any(
                        CI(p2.lhs, alpha, beta, x1, OUT) in c1
                        and CI(lam1, beta, delta, x2, IN) in c2
                        for beta in edge_labels)
                    rhs = any(
                        CI(p1.lhs, alpha, gamma, x2, IN) in c2
                        and CI(lam2, gamma, delta, x1, OUT) in c1
                        for gamma in edge_labels)
                    if lhs != rhs:
                        return False
    return True


def _is_nnd(grammar: EdnceGrammar) -> bool:
    for p in grammar.productions:
        g = p.body.graph
        for x in g.nonterminal_vertices():
            for gamma in grammar.alphabets.edge_labels:
                for sigma in grammar.alphabets.terminal_labels:
                    for d in (IN, OUT):
                        edges = g.in_edges(x) if d == IN else g.out_edges(x)
                        neigh = {("v", e[0] if d == IN else e[2]) for e in edges
                                 if e[1] == gamma
                                 and g.label(e[0] if d == IN else e[2]) == sigma}
                        insts = {("b", c.match) for c in p.body.instructions_at(x)
                                 if c.sigma == sigma and c.relabel == gamma and c.direction == d}
                        if len(neigh | insts) > 1:
                            return False
    return True


# --- derivations -----------------------------------------------------------------


class Derivation:
    """A replayable derivation: explicit value-to-value steps with fresh,
    monotone vertex ids (n0, n1, ...)."""

    def __init__(self, grammar: EdnceGrammar, start_vertex: str = "n0"):
        self.grammar = grammar
        self.current = grammar.start_graph(start_vertex)
        self.steps: list[tuple[str, int]] = []
        self._counter = 1
        self._renamings: list[dict[str, str]] = []

    def expandable(self) -> list[tuple[str, int]]:
        """All (vertex, production index) choices, deterministically ordered."""
        g = self.current.graph
        return [(v, i)
                for v in g.nonterminal_vertices()
                for i in self.grammar.production_indices_for(g.label(v))]

    def apply(self, vertex: str, production: int) -> "Derivation":
        g = self.current.graph
        if vertex not in g:
            raise UnknownVertexError("no such vertex in sentential form", vertex)
        if not (0 <= production < len(self.grammar.productions)):
            raise UnknownVertexError("no such production", production)
        prod = self.grammar.productions[production]
        if g.label(vertex) != prod.lhs:
            raise LabelMismatchError("production label does not match vertex label",
                                     vertex, g.label(vertex), prod.lhs)

        def fresh():
            while True:
                v = f"n{self._counter}"
                self._counter += 1
                yield v

        self.current, ren = substitute_traced(self.current, vertex, prod.body, fresh())
        self.steps.append((vertex, production))
        self._renamings.append(ren)
        return self

    def is_terminal(self) -> bool:
        return not self.current.graph.nonterminal_vertices()


def derive(grammar: EdnceGrammar, script: Iterable[tuple[str, int]],
           start_vertex: str = "n0") -> ExtendedGraph:
    """Run a derivation script (list of (vertex id, production index)) from
    the starting graph; returns the resulting sentential form."""
    d = Derivation(grammar, start_vertex)
    for vertex, production in script:
        d.apply(vertex, production)
    return d.current


# --- derivation trees ---------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    """A derivation-tree node: a production index plus one child slot per
    nonterminal of that production (None = not yet expanded)."""

    production: int
    children: tuple[Optional["TreeNode"], ...] = ()

    def is_concrete(self) -> bool:
        return all(c is not None and c.is_concrete() for c in self.children)


def tree(production: int, *children: Optional[TreeNode]) -> TreeNode:
    return TreeNode(production, tuple(children))


def validate_tree(grammar: EdnceGrammar, node: TreeNode, expect_label: Optional[str] = None):
    if not (0 <= node.production < len(grammar.productions)):
        raise MalformedTreeError("no such production", node.production)
    prod = grammar.productions[node.production]
    if expect_label is not None and prod.lhs != expect_label:
        raise MalformedTreeError("child production label mismatch", node.production,
                                 prod.lhs, expect_label)
    if len(node.children) > len(prod.nt_order):
        raise MalformedTreeError("more children than nonterminals", node.production)
    for i, child in enumerate(node.children):
        if child is not None:
            label = prod.body.graph.label(prod.nt_order[i])
            validate_tree(grammar, child, label)


def _pad(node: TreeNode, prod: Production) -> tuple[Optional[TreeNode], ...]:
    return node.children + (None,) * (len(prod.nt_order) - len(node.children))


def yield_with_provenance(grammar: EdnceGrammar, root: TreeNode,
                          start_vertex: str = "n0"
                          ) -> tuple[ExtendedGraph, dict[str, tuple]]:
    """Yield of a derivation tree, expanding nodes in preorder.

    Also returns, for every vertex of the yield, the provenance
    (tree path, vertex id in the production body) of the step that created
    it;  the start vertex has provenance ((), start_vertex).
    """
    validate_tree(grammar, root, grammar.initial)
    d = Derivation(grammar, start_vertex)
    prov: dict[str, tuple] = {start_vertex: ((), start_vertex)}
    pending: list[tuple[tuple, str, TreeNode]] = [((), start_vertex, root)]
    while pending:
        path, vertex, node = pending.pop()
        prod = grammar.productions[node.production]
        d.apply(vertex, node.production)
        ren = d._renamings[-1]
        for body_vid, new_vid in ren.items():
            prov[new_vid] = (path, body_vid)
        children = _pad(node, prod)
        # push in reverse so expansion happens in preorder (leftmost first)
        for i in reversed(range(len(children))):
            if children[i] is not None:
                pending.append((path + (i,), ren[prod.nt_order[i]], children[i]))
    return d.current, prov


def yield_of_tree(grammar: EdnceGrammar, root: TreeNode) -> ExtendedGraph:
    """Recursive substitution along the tree; for boundary (hence confluent)
    grammars this equals the result of any tree-respecting derivation."""
    return yield_with_provenance(grammar, root)[0]


def tree_from_script(grammar: EdnceGrammar, script: Sequence[tuple[str, int]],
                     start_vertex: str = "n0") -> TreeNode:
    """Reconstruct the derivation tree of a script."""
    d = Derivation(grammar, start_vertex)
    owner: dict[str, tuple] = {}  # vertex -> (path, child slot)
    nodes: dict[tuple, dict] = {}
    for vertex, production in script:
        prod = grammar.productions[production]
        if vertex == start_vertex and not nodes:
            path = ()
        else:
            if vertex not in owner:
                raise MalformedTreeError("script expands an unknown vertex", vertex)
            path = owner[vertex]
        nodes[path] = {"production": production, "slots": len(prod.nt_order)}
        d.apply(vertex, production)
        ren = d._renamings[-1]
        for i, nt in enumerate(prod.nt_order):
            owner[ren[nt]] = path + (i,)

    def build(path: tuple) -> Optional[TreeNode]:
        info = nodes.get(path)
        if info is None:
            return None
        kids = tuple(build(path + (i,)) for i in range(info["slots"]))
        return TreeNode(info["production"], kids)

    if () not in nodes:
        raise MalformedTreeError("empty script has no tree")
    return build(())


def script_of_tree(grammar: EdnceGrammar, root: TreeNode,
                   order: str = "first", rng=None) -> list[tuple[str, int]]:
    """A derivation script realizing the tree under the chosen traversal
    ('first', 'last' or 'random'); any traversal respects the
    parent-before-child constraint."""
    validate_tree(grammar, root, grammar.initial)
    if order == "first":
        return _script_by_choice(grammar, root, lambda ready: ready[0])
    if order == "last":
        return _script_by_choice(grammar, root, lambda ready: ready[-1])
    if order == "random":
        return _script_by_choice(grammar, root, lambda ready: rng.choice(ready))
    raise ValueError(order)


def _script_by_choice(grammar: EdnceGrammar, root: TreeNode, pick) -> list:
    d = Derivation(grammar)
    script = []
    ready: list[tuple[str, TreeNode]] = [("n0", root)]
    while ready:
        ready.sort(key=lambda item: item[0])
        vertex, node = pick(ready)
        ready.remove((vertex, node))
        prod = grammar.productions[node.production]
        d.apply(vertex, node.production)
        script.append((vertex, node.production))
        ren = d._renamings[-1]
        for i, child in enumerate(_pad(node, prod)):
            if child is not None:
                ready.append((ren[prod.nt_order[i]], child))
    return script


# --- context consistency ---------------------------------------------------------

ContextTriple = tuple[str, str, str]  # (sigma, gamma, direction)


@dataclass
class ContextMapResult:
    """Fixpoint of the per-label context computation.

    ``eta`` maps each reachable nonterminal label to its unique context, or
    is None when two distinct contexts were derived (``conflict`` then holds
    the witness).  ``useless`` lists (production index, instruction) pairs
    whose key can never fire.
    """

    eta: Optional[dict[str, frozenset[ContextTriple]]]
    conflict: Optional[tuple[str, frozenset, frozenset]]
    neighbourhood_preserving: bool
    useless: list[tuple[int, ConnectionInstruction]]

    @property
    def consistent(self) -> bool:
        return self.eta is not None


def _local_context(body: ExtendedGraph, y: str) -> set[ContextTriple]:
    g = body.graph
    ctx = {(g.label(w), gamma, OUT) for (_, gamma, w) in g.out_edges(y)}
    ctx |= {(g.label(w), gamma, IN) for (w, gamma, _) in g.in_edges(y)}
    return ctx


def compute_context_map(grammar: EdnceGrammar) -> ContextMapResult:
    """Decide context-consistency over the reachable labels.

    Propagates candidate contexts from the initial label: a nonterminal y in
    the body of an X-production with parent context c receives y's local edge
    context plus every (sigma, gamma, d) produced by an instruction
    (sigma, beta, gamma, y, d) whose key (sigma, beta, d) lies in c.
    """
    grammar.require_boundary()
    candidates: dict[str, frozenset] = {grammar.initial: frozenset()}
    work = [(grammar.initial, frozenset())]
    while work:
        label, ctx = work.pop()
        for i in grammar.production_indices_for(label):
            body = grammar.productions[i].body
            for y in body.graph.nonterminal_vertices():
                induced = set(_local_context(body, y))
                for c in body.instructions_at(y):
                    if (c.sigma, c.match, c.direction) in ctx:
                        induced.add((c.sigma, c.relabel, c.direction))
                induced = frozenset(induced)
                y_label = body.graph.label(y)
                known = candidates.get(y_label)
                if known is None:
                    candidates[y_label] = induced
                    work.append((y_label, induced))
                elif known != induced:
                    return ContextMapResult(None, (y_label, known, induced), False, [])

    eta = dict(candidates)
    useless = []
    for i, p in enumerate(grammar.productions):
        ctx = eta.get(p.lhs)
        if ctx is None:
            continue  # unreachable production: not analyzed
        for c in sorted(p.body.connections):
            if (c.sigma, c.match, c.direction) not in ctx:
                useless.append((i, c))
    np = True
    for label, ctx in eta.items():
        for i in grammar.production_indices_for(label):
            body = grammar.productions[i].body
            for (sigma, beta, d) in ctx:
                if not any(c.sigma == sigma and c.match == beta and c.direction == d
                           for c in body.connections):
                    np = False
    return ContextMapResult(eta, None, np, useless)


# --- normal forms -----------------------------------------------------------------


def _nullable_labels(grammar: EdnceGrammar) -> set[str]:
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if p.lhs in nullable:
                continue
            g = p.body.graph
            if all(g.is_nonterminal_vertex(v) and g.label(v) in nullable
                   for v in g.vertex_ids):
                nullable.add(p.lhs)
                changed = True
    return nullable


def _drop_vertices(body: ExtendedGraph, drop: set[str]) -> ExtendedGraph:
    g = body.graph
    return ExtendedGraph(
        g.with_elements(drop_vertices=drop),
        (c for c in body.connections if c.vertex not in drop))


def _production_key(p: Production):
    g = p.body.graph
    return (p.lhs, tuple(sorted(g.labels.items())), tuple(sorted(g.edges)),
            tuple(sorted(c.as_tuple() for c in p.body.connections)), p.nt_order)


def _eliminate_empty(grammar: EdnceGrammar) -> EdnceGrammar:
    nullable = _nullable_labels(grammar)
    produces_empty = grammar.initial in nullable
    out: list[Production] = []
    seen = set()
    for p in grammar.productions:
        nts = [v for v in p.body.graph.nonterminal_vertices()
               if p.body.graph.label(v) in nullable]
        for r in range(len(nts) + 1):
            for combo in itertools.combinations(nts, r):
                body = _drop_vertices(p.body, set(combo))
                if len(body.graph) == 0:
                    continue
                cand = Production(p.lhs, body,
                                  tuple(v for v in p.nt_order if v not in combo))
                key = _production_key(cand)
                if key not in seen:
                    seen.add(key)
                    out.append(cand)
    initial = grammar.initial
    alphabets = grammar.alphabets
    if produces_empty:
        used_in_bodies = initial in {lab for p in out
                                     for lab in p.body.graph.labels.values()}
        if used_in_bodies:
            fresh = initial
            while not alphabets.is_nonterminal(fresh) or \
                    fresh in {p.lhs for p in out} or fresh in grammar.labels_used():
                fresh += "'"
            alphabets = alphabets.extend(vertex_labels={fresh})
            rebuilt = []
            for p in out:
                body = ExtendedGraph(Graph(alphabets, p.body.graph.labels,
                                           p.body.graph.edges),
                                     p.body.connections)
                rebuilt.append(Production(p.lhs, body, p.nt_order))
                if p.lhs == initial:
                    rebuilt.append(Production(fresh, body, p.nt_order))
            out = rebuilt
            empty_body = ExtendedGraph(Graph(alphabets, {}, ()))
            out.append(Production(fresh, empty_body))
            initial = fresh
        else:
            out.append(Production(initial, ExtendedGraph(Graph(alphabets, {}, ()))))
    return EdnceGrammar(alphabets, out, initial)


def _compose_chain(transformer: frozenset, target: ExtendedGraph) -> ExtendedGraph:
    """Substitute ``target`` for the single vertex of a chain body whose
    instructions were abstracted to (sigma, beta, gamma, d) tuples."""
    connections = set()
    for (sigma, beta, gamma, d) in transformer:
        for c in target.connections:
            if c.sigma == sigma and c.match == gamma and c.direction == d:
                connections.add(CI(sigma, beta, c.relabel, c.vertex, d))
    return ExtendedGraph(target.graph, connections)


def _eliminate_chains(grammar: EdnceGrammar) -> EdnceGrammar:
    out = [p for p in grammar.productions if not p.is_chain()]
    seen = {_production_key(p) for p in out}
    transformers: set[tuple[str, str, frozenset]] = set()
    work = []
    for p in grammar.productions:
        if p.is_chain():
            y = p.body.graph.vertex_ids[0]
            t = (p.lhs, p.body.graph.label(y),
                 frozenset((c.sigma, c.match, c.relabel, c.direction)
                           for c in p.body.connections))
            if t not in transformers:
                transformers.add(t)
                work.append(t)
    while work:
        lhs, target_label, tset = work.pop()
        for q in grammar.productions:
            if q.lhs != target_label:
                continue
            if q.is_chain():
                z = q.body.graph.vertex_ids[0]
                composed = frozenset(
                    (sigma, beta, c.relabel, d)
                    for (sigma, beta, gamma, d) in tset
                    for c in q.body.connections
                    if c.sigma == sigma and c.match == gamma and c.direction == d)
                t = (lhs, q.body.graph.label(z), composed)
                if t not in transformers:
                    transformers.add(t)
                    work.append(t)
            else:
                body = _compose_chain(tset, q.body)
                cand = Production(lhs, body, q.nt_order)
                key = _production_key(cand)
                if key not in seen:
                    seen.add(key)
                    out.append(cand)
    return EdnceGrammar(grammar.alphabets, out, grammar.initial)


def _productive_labels(grammar: EdnceGrammar) -> set[str]:
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if p.lhs in productive:
                continue
            g = p.body.graph
            if all(g.label(v) in productive for v in g.nonterminal_vertices()):
                productive.add(p.lhs)
                changed = True
    return productive


def _reduce(grammar: EdnceGrammar) -> EdnceGrammar:
    productive = _productive_labels(grammar)
    reachable = {grammar.initial}
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if p.lhs not in reachable:
                continue
            g = p.body.graph
            if not all(g.label(v) in productive for v in g.nonterminal_vertices()):
                continue
            for v in g.nonterminal_vertices():
                if g.label(v) not in reachable:
                    reachable.add(g.label(v))
                    changed = True
    keep = [p for p in grammar.productions
            if p.lhs in reachable
            and all(p.body.graph.label(v) in productive
                    for v in p.body.graph.nonterminal_vertices())]
    return EdnceGrammar(grammar.alphabets, keep, grammar.initial)


def _strip_useless(grammar: EdnceGrammar) -> EdnceGrammar:
    result = compute_context_map(grammar)
    if not result.consistent:
        return grammar
    bad = {(i, c) for i, c in result.useless}
    out = []
    for i, p in enumerate(grammar.productions):
        keep = frozenset(c for c in p.body.connections if (i, c) not in bad)
        out.append(Production(p.lhs, ExtendedGraph(p.body.graph, keep), p.nt_order))
    return EdnceGrammar(grammar.alphabets, out, grammar.initial)


NORMAL_GOALS = ("no_empty", "no_chain", "reduced", "no_useless")


def normalize(grammar: EdnceGrammar, goals: Iterable[str] = NORMAL_GOALS) -> EdnceGrammar:
    """Construct an equivalent boundary grammar meeting the requested normal
    forms.  Goals are applied in the fixed order no_empty, no_chain, reduced,
    no_useless; the generated language is preserved (empty-graph membership
    included, via a fresh initial label when needed)."""
    grammar.require_boundary()
    goals = set(goals)
    unknown = goals - set(NORMAL_GOALS)
    if unknown:
        raise BadGrammarError("unknown normalization goals", sorted(unknown))
    g = grammar
    if "no_empty" in goals:
        g = _eliminate_empty(g)
    if "no_chain" in goals:
        g = _eliminate_chains(g)
    if "reduced" in goals:
        g = _reduce(g)
    if "no_useless" in goals:
        g = _strip_useless(g)
    return g


# --- bounded language enumeration ---------------------------------------------


def min_terminal_yield(grammar: EdnceGrammar, count=None) -> dict[str, int]:
    """Least number of counted terminal vertices derivable from each label.

    ``count`` filters which terminal vertices contribute (default: all).
    Labels that cannot terminate get a large sentinel so callers prune them.
    """
    count = count or (lambda label: True)
    big = 10 ** 9
    mu = {p.lhs: big for p in grammar.productions}
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            g = p.body.graph
            total = 0
            for v in g.vertex_ids:
                lab = g.label(v)
                if grammar.alphabets.is_nonterminal(lab):
                    total += mu.get(lab, big)
                elif count(lab):
                    total += 1
            total = min(total, big)
            if total < mu[p.lhs]:
                mu[p.lhs] = total
                changed = True
    return mu


def _ext_iso_key(eg: ExtendedGraph):
    base = iso.invariant_key(eg.graph)
    cis = tuple(sorted((c.sigma, c.match, c.relabel, c.direction,
                        eg.graph.label(c.vertex)) for c in eg.connections))
    return base + (cis,)


def ext_isomorphism(a: ExtendedGraph, b: ExtendedGraph) -> Optional[dict[str, str]]:
    if len(a.connections) != len(b.connections):
        return None
    for m in iso.iter_isomorphisms(a.graph, b.graph):
        mapped = {CI(c.sigma, c.match, c.relabel, m[c.vertex], c.direction)
                  for c in a.connections}
        if mapped == set(b.connections):
            return m
    return None


def ext_is_isomorphic(a: ExtendedGraph, b: ExtendedGraph) -> bool:
    return ext_isomorphism(a, b) is not None


def sentential_iso_set() -> iso.IsoSet:
    return iso.IsoSet(key=_ext_iso_key, same=ext_is_isomorphic)


def iter_sentential_forms(grammar: EdnceGrammar, max_vertices: int,
                          nonterminal_cap: Optional[int] = None) -> Iterator[ExtendedGraph]:
    """All sentential forms reachable within the terminal-vertex bound, each
    yielded once up to isomorphism.

    Terminal vertices only accumulate during a derivation, so branches whose
    per-label minimum-yield lower bound exceeds the cap are pruned soundly.
    ``nonterminal_cap`` guards against grammars that can grow unboundedly
    many nonterminals with no terminal progress.
    """
    if nonterminal_cap is None:
        nonterminal_cap = max_vertices + 8
    mu = min_terminal_yield(grammar)
    seen = sentential_iso_set()
    start = grammar.start_graph()
    seen.add(start)
    frontier = [start]
    while frontier:
        form = frontier.pop()
        g = form.graph
        yield form
        nts = g.nonterminal_vertices()
        if not nts or len(nts) > nonterminal_cap:
            continue
        terminals = len(g) - len(nts)
        if terminals + sum(mu.get(g.label(v), 10 ** 9) for v in nts) > max_vertices:
            continue
        for v in nts:
            for i in grammar.production_indices_for(g.label(v)):
                nxt = substitute(form, v, grammar.productions[i].body)
                if seen.add(nxt):
                    frontier.append(nxt)


def enumerate_graphs(grammar: EdnceGrammar, max_vertices: int,
                     nonterminal_cap: Optional[int] = None) -> iso.IsoSet:
    """All terminal graphs with at most ``max_vertices`` vertices, up to iso."""
    results = iso.IsoSet()
    for form in iter_sentential_forms(grammar, max_vertices, nonterminal_cap):
        g = form.graph
        if not g.nonterminal_vertices() and len(g) <= max_vertices:
            results.add(g)
    return results

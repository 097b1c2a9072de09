"""B-ESG grammars: encoded B-edNCE grammars generating string graphs.

A decoding system assigns to every (encoding label, node label, node label)
triple a replacement string graph glued over two anchor node-vertices;
decoding replaces every node-to-node encoding edge by its replacement and is
confluent and terminating.  A boundary grammar paired with a decoding system
is a B-ESG grammar when the static conditions N1/N2/W1/W2 hold and the
grammar is wire-consistent, which is decided through the single-step and
multi-step context-passing relations.  Every graph such a grammar generates
(derive, then decode) is a string graph.

Bounded language enumeration, the membership decision up to
wire-homeomorphism and mono-enumeration against match-exhaustive grammars
all run over one pruned derivation search whose lower bounds (node count,
frozen wires, isolated wire-vertices) only ever grow along a derivation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import core, dpo, iso
from .core import IN, OUT, Edge, Graph, LabelAlphabets, WSize
from .ednce import (
    Derivation,
    EdnceGrammar,
    ExtendedGraph,
    min_terminal_yield,
    normalize,
    sentential_iso_set,
)
from .errors import (
    AnchorMismatchError,
    BoundTooLargeForBudgetError,
    InvalidBesgError,
    MissingTripleError,
    NotEncodedStringGraphError,
    NotMatchExhaustiveError,
    RhsHasBoundaryError,
    RhsHasEncodingError,
    RhsTooSmallError,
)


@dataclass(frozen=True)
class DecodingRule:
    """One DPO decoding rule: an encoding edge between two anchor
    node-vertices rewrites to the replacement graph."""

    edge_label: str
    src_label: str
    tgt_label: str
    replacement: Graph
    anchors: tuple[str, str]

    @property
    def key(self):
        return (self.edge_label, self.src_label, self.tgt_label)


class DecodingSystem:
    """A total map from encoding triples to decoding rules."""

    def __init__(self, alphabets: LabelAlphabets, rules: Iterable[DecodingRule]):
        self.alphabets = alphabets
        self.rules: dict[tuple, DecodingRule] = {}
        for rule in rules:
            self.rules[rule.key] = rule

    def rule_for(self, edge_label: str, src_label: str, tgt_label: str) -> DecodingRule:
        return self.rules[(edge_label, src_label, tgt_label)]

    def __len__(self):
        return len(self.rules)


def _check_rule(rule: DecodingRule, alphabets: LabelAlphabets):
    a1, a2 = rule.anchors
    rep = rule.replacement
    if rule.edge_label not in alphabets.encoding_labels:
        raise AnchorMismatchError("rule edge label is not an encoding label", rule.key)
    for anchor, want in ((a1, rule.src_label), (a2, rule.tgt_label)):
        if anchor not in rep or rep.label(anchor) != want or not rep.is_node_vertex(anchor):
            raise AnchorMismatchError("anchor missing or mislabeled", rule.key, anchor)
    if len(rep) < 3:
        raise RhsTooSmallError("replacement needs a vertex beyond the anchors", rule.key)
    report = core.classify(rep)
    if report.kind != core.STRING:
        raise RhsHasEncodingError("replacement must be a plain string graph",
                                  rule.key, report.violations)
    if any(lab in alphabets.encoding_labels for (_, lab, _) in rep.edges):
        raise RhsHasEncodingError("replacement carries an encoding label", rule.key)
    if report.inputs or report.outputs:
        raise RhsHasBoundaryError("replacement must have no inputs or outputs",
                                  rule.key, sorted(report.inputs | report.outputs))


def validate_decoding_system(rules: Iterable[DecodingRule],
                             alphabets: LabelAlphabets) -> DecodingSystem:
    """Check per-rule invariants and totality over the encoding triples."""
    system = DecodingSystem(alphabets, rules)
    for rule in system.rules.values():
        _check_rule(rule, alphabets)
    for triple in itertools.product(sorted(alphabets.encoding_labels),
                                    sorted(alphabets.node_labels),
                                    sorted(alphabets.node_labels)):
        if triple not in system.rules:
            raise MissingTripleError("decoding system is not total", triple)
    return system


def encoding_edges(g: Graph) -> list[Edge]:
    return [e for e in sorted(g.edges)
            if e[1] in g.alphabets.encoding_labels
            and g.is_node_vertex(e[0]) and g.is_node_vertex(e[2])]


def decode_traced(g: Graph, system: DecodingSystem,
                  order: Optional[list[Edge]] = None
                  ) -> tuple[Graph, dict[Edge, dict[str, str]]]:
    """Decode all encoding edges; returns the result and, per decoded edge,
    the map from replacement vertex ids to the ids spliced into the result."""
    report = core.classify(g)
    if not report.is_encoded:
        raise NotEncodedStringGraphError(report.violations)
    todo = order if order is not None else encoding_edges(g)
    traces: dict[Edge, dict[str, str]] = {}
    counter = 0
    for edge in todo:
        src, lab, tgt = edge
        rule = system.rule_for(lab, g.label(src), g.label(tgt))
        a1, a2 = rule.anchors
        mapping = {a1: src, a2: tgt}
        add = {}
        for v in rule.replacement.vertex_ids:
            if v in (a1, a2):
                continue
            new = f"d{counter}"
            counter += 1
            while new in g:
                new = f"d{counter}"
                counter += 1
            mapping[v] = new
            add[new] = rule.replacement.label(v)
        new_edges = {(mapping[s], l, mapping[t]) for s, l, t in rule.replacement.edges}
        g = g.with_elements(add_vertices=add, add_edges=new_edges, drop_edges=[edge])
        traces[edge] = mapping
    return g, traces


def decode(g: Graph, system: DecodingSystem) -> Graph:
    """Replace every encoding edge by its rule's replacement; confluent, so
    the application order does not matter up to isomorphism."""
    return decode_traced(g, system)[0]


def esg_form(g: Graph) -> bool:
    """The invariant every sentential form of a B-ESG derivation satisfies:
    an encoded string graph possibly containing nonterminal vertices, with
    all wire-vertex degrees at most one."""
    for s, lab, t in g.edges:
        if g.is_node_vertex(s) and g.is_node_vertex(t) \
                and lab not in g.alphabets.encoding_labels:
            return False
    return all(g.in_degree(v) <= 1 and g.out_degree(v) <= 1
               for v in g.vertex_ids if g.is_wire_vertex(v))


def production_in_degree(body: ExtendedGraph, v: str) -> int:
    return body.graph.in_degree(v) + sum(1 for c in body.instructions_at(v)
                                         if c.direction == IN)


def production_out_degree(body: ExtendedGraph, v: str) -> int:
    return body.graph.out_degree(v) + sum(1 for c in body.instructions_at(v)
                                          if c.direction == OUT)


def production_inputs(body: ExtendedGraph) -> set[str]:
    """Wire-vertices whose production in-degree is zero."""
    return {v for v in body.graph.wire_vertices()
            if production_in_degree(body, v) == 0}


def production_outputs(body: ExtendedGraph) -> set[str]:
    return {v for v in body.graph.wire_vertices()
            if production_out_degree(body, v) == 0}


def production_isolated(body: ExtendedGraph) -> set[str]:
    return production_inputs(body) & production_outputs(body)


@dataclass
class NormalFormReport:
    """Which B-ESG normal-form clauses a grammar satisfies."""

    reduced: bool
    context_consistent: bool
    neighbourhood_preserving: bool
    no_useless: bool
    no_production_isolated: bool
    problems: list[str]

    @property
    def normal(self) -> bool:
        return (self.reduced and self.context_consistent
                and self.neighbourhood_preserving and self.no_useless)

    @property
    def proper(self) -> bool:
        return self.normal and self.no_production_isolated


def normal_form_report(grammar: EdnceGrammar) -> NormalFormReport:
    from .ednce import _reduce, compute_context_map

    problems = []
    reduced = len(_reduce(grammar).productions) == len(grammar.productions)
    if not reduced:
        problems.append("grammar is not reduced")
    ctx = compute_context_map(grammar)
    if not ctx.consistent:
        problems.append(f"not context consistent: {ctx.conflict}")
    if ctx.consistent and not ctx.neighbourhood_preserving:
        problems.append("not neighbourhood preserving")
    if ctx.consistent and ctx.useless:
        problems.append(f"useless connection instructions: {ctx.useless}")
    isolated = [(i, sorted(production_isolated(p.body)))
                for i, p in enumerate(grammar.productions)
                if production_isolated(p.body)]
    if isolated:
        problems.append(f"production isolated wire-vertices: {isolated}")
    return NormalFormReport(
        reduced=reduced,
        context_consistent=ctx.consistent,
        neighbourhood_preserving=ctx.consistent and ctx.neighbourhood_preserving,
        no_useless=ctx.consistent and not ctx.useless,
        no_production_isolated=not isolated,
        problems=problems,
    )


# --- context passing and wire-consistency ------------------------------------------

Occurrence = tuple[int, str]  # (production index, nonterminal vertex id)


def context_cardinality(grammar: EdnceGrammar, prod_idx: int, x: str,
                        sigma: str, beta: str, d: str) -> int:
    """Number of (sigma, beta, d)-edges incident to x plus the instructions
    that will produce such an edge at x."""
    body = grammar.productions[prod_idx].body
    g = body.graph
    edges = g.in_edges(x) if d == IN else g.out_edges(x)
    count = sum(1 for e in edges
                if e[1] == beta and g.label(e[0] if d == IN else e[2]) == sigma)
    count += sum(1 for c in body.instructions_at(x)
                 if c.sigma == sigma and c.relabel == beta and c.direction == d)
    return count


@dataclass
class ContextPassing:
    """Single-step (P) and multi-step (Q) context-passing relations, stored
    as tuples (sigma, d, alpha, beta, source occurrence, target occurrence)."""

    single: frozenset[tuple]
    multi: frozenset[tuple]

    def multi_reflexive(self, sigma: str, d: str, alpha: str,
                        occ: Occurrence) -> set[tuple[str, Occurrence]]:
        """(beta, target) pairs reachable from occ, including the zero-step
        (alpha, occ) itself: the wire-consistency check needs the reflexive
        closure so a cardinality-two vertex also constrains its own label."""
        out = {(alpha, occ)}
        out.update((beta, tgt) for (s, dd, a, beta, src, tgt) in self.multi
                   if (s, dd, a, src) == (sigma, d, alpha, occ))
        return out


def context_passing(grammar: EdnceGrammar) -> ContextPassing:
    """Compute P directly and Q as the fixpoint of relational composition."""
    grammar.require_boundary()
    occurrences: list[Occurrence] = [
        (i, x) for i, p in enumerate(grammar.productions)
        for x in p.body.graph.nonterminal_vertices()]
    single = set()
    for (i, x) in occurrences:
        g = grammar.productions[i].body.graph
        x_label = g.label(x)
        for (j, y) in occurrences:
            if grammar.productions[j].lhs != x_label:
                continue
            for c in grammar.productions[j].body.instructions_at(y):
                if context_cardinality(grammar, i, x, c.sigma, c.match, c.direction) >= 1:
                    single.add((c.sigma, c.direction, c.match, c.relabel, (i, x), (j, y)))
    multi = set(single)
    changed = True
    while changed:
        changed = False
        for (s1, d1, a1, b1, src1, tgt1) in list(multi):
            for (s2, d2, a2, b2, src2, tgt2) in single:
                if (s1, d1) == (s2, d2) and tgt1 == src2 and b1 == a2:
                    item = (s1, d1, a1, b2, src1, tgt2)
                    if item not in multi:
                        multi.add(item)
                        changed = True
    return ContextPassing(frozenset(single), frozenset(multi))


def wire_consistency_violations(grammar: EdnceGrammar,
                                passing: Optional[ContextPassing] = None) -> list[str]:
    """Witnesses against wire-consistency: a nonterminal with context
    cardinality two whose (reflexively) passed context reaches a production
    holding a wire-vertex instruction on the passed key."""
    passing = passing or context_passing(grammar)
    violations = []
    labels = grammar.alphabets
    for i, p in enumerate(grammar.productions):
        for x in p.body.graph.nonterminal_vertices():
            keys = set()
            for c_sigma in sorted(labels.terminal_labels):
                for alpha in sorted(labels.edge_labels):
                    for d in (IN, OUT):
                        if context_cardinality(grammar, i, x, c_sigma, alpha, d) >= 2:
                            keys.add((c_sigma, alpha, d))
            for (sigma, alpha, d) in sorted(keys):
                for beta, (j, y) in sorted(passing.multi_reflexive(sigma, d, alpha, (i, x))):
                    y_label = grammar.productions[j].body.graph.label(y)
                    for q_idx in grammar.production_indices_for(y_label):
                        q = grammar.productions[q_idx]
                        for c in sorted(q.body.connections):
                            if c.sigma == sigma and c.match == beta and c.direction == d \
                                    and q.body.graph.is_wire_vertex(c.vertex):
                                violations.append(
                                    f"production {i} vertex {x} has (sigma={sigma}, "
                                    f"edge={alpha}, {d}) context cardinality >= 2 and "
                                    f"passes it to production {q_idx} instruction "
                                    f"{c.as_tuple()} on a wire-vertex")
    return violations


# --- B-ESG validation ----------------------------------------------------------------


@dataclass
class BesgGrammar:
    """A validated encoded B-edNCE grammar: derivations followed by decoding
    generate string graphs only."""

    grammar: EdnceGrammar
    decoding: DecodingSystem
    certificate: dict = field(default_factory=dict)

    @property
    def alphabets(self) -> LabelAlphabets:
        return self.grammar.alphabets


def besg_violations(grammar: EdnceGrammar,
                    passing: Optional[ContextPassing] = None) -> list[str]:
    violations = []
    alphabets = grammar.alphabets
    for i, p in enumerate(grammar.productions):
        if not p.body.is_boundary():
            violations.append(f"production {i} violates the boundary conditions")
    if violations:
        return violations
    for i, p in enumerate(grammar.productions):
        g = p.body.graph
        for e in sorted(g.edges):
            s, lab, t = e
            if g.is_node_vertex(s) and g.is_node_vertex(t) \
                    and lab not in alphabets.encoding_labels:
                violations.append(f"N1: production {i} edge {e} joins node-vertices "
                                  f"with a non-encoding label")
        for c in sorted(p.body.connections):
            if c.sigma in alphabets.node_labels and g.is_node_vertex(c.vertex) \
                    and c.relabel not in alphabets.encoding_labels:
                violations.append(f"N2: production {i} instruction {c.as_tuple()} joins "
                                  f"node-vertices with a non-encoding label")
        for v in g.wire_vertices():
            pin = g.in_degree(v) + sum(1 for c in p.body.instructions_at(v)
                                       if c.direction == IN)
            pout = g.out_degree(v) + sum(1 for c in p.body.instructions_at(v)
                                         if c.direction == OUT)
            if pin > 1:
                violations.append(f"W1: production {i} wire-vertex {v} has "
                                  f"production in-degree {pin}")
            if pout > 1:
                violations.append(f"W1: production {i} wire-vertex {v} has "
                                  f"production out-degree {pout}")
        for sigma in sorted(alphabets.wire_labels):
            for gamma in sorted(alphabets.edge_labels):
                for d in (IN, OUT):
                    hits = [c for c in sorted(p.body.connections)
                            if c.sigma == sigma and c.match == gamma and c.direction == d]
                    if len(hits) > 1:
                        violations.append(
                            f"W2: production {i} has {len(hits)} instructions keyed "
                            f"on wire label ({sigma}, {gamma}, {d})")
    violations.extend(wire_consistency_violations(grammar, passing))
    return violations


def validate_besg(grammar: EdnceGrammar, decoding: DecodingSystem) -> BesgGrammar:
    """Check N1/N2/W1/W2 plus wire-consistency; raises InvalidBesgError with
    the full violation list, or returns the grammar with its certificate."""
    validate_decoding_system(decoding.rules.values(), grammar.alphabets)
    grammar.require_boundary()
    passing = context_passing(grammar)
    violations = besg_violations(grammar, passing)
    if violations:
        raise InvalidBesgError(violations)
    certificate = {
        "checks": ["boundary", "N1", "N2", "W1", "W2", "wire-consistency"],
        "context_passing_single": len(passing.single),
        "context_passing_multi": len(passing.multi),
    }
    return BesgGrammar(grammar, decoding, certificate)


# --- bounded derivation search -------------------------------------------------------


def _frozen_wire_counts(form: ExtendedGraph) -> tuple[int, int]:
    """(complete wires, isolated wire-vertices) already frozen in a
    sentential form: wire chains none of whose vertices touch a nonterminal
    can never change again in a boundary grammar."""
    g = form.graph
    terminal = form.terminal_part()
    report = core.classify(terminal)
    if not report.is_encoded:
        return 0, 0
    nt_adjacent = set()
    for v in g.nonterminal_vertices():
        nt_adjacent |= g.neighbors(v)
    frozen = sum(1 for w in report.wires if not (set(w.chain) & nt_adjacent))
    return frozen, len(report.isolated)


@dataclass
class _SearchCaps:
    max_nodes: Optional[int] = None
    max_wires: Optional[int] = None
    max_isolated: Optional[int] = None
    vertex_budget: int = 64


@dataclass
class _SearchOutcome:
    members: list  # (script, encoded terminal Graph)
    budget_hit: bool


def _wires_in_replacement(system: DecodingSystem, key) -> int:
    rule = system.rules[key]
    return len(core.classify(rule.replacement).wires)


def _nodes_in_replacement(system: DecodingSystem, key) -> int:
    rule = system.rules[key]
    return len(rule.replacement.node_vertices()) - 2


def _search_members(grammar: EdnceGrammar, system: DecodingSystem,
                    caps: _SearchCaps) -> _SearchOutcome:
    """Enumerate terminal encoded graphs by pruned breadth-first derivation,
    one representative (and script) per isomorphism class."""
    mu_nodes = min_terminal_yield(grammar, grammar.alphabets.is_node)
    mu_total = min_terminal_yield(grammar)
    seen = sentential_iso_set()
    start = Derivation(grammar)
    seen.add(start.current)
    frontier: list[Derivation] = [start]
    members = []
    member_set = iso.IsoSet()
    budget_hit = False
    while frontier:
        d = frontier.pop()
        form = d.current
        g = form.graph
        nts = g.nonterminal_vertices()
        if not nts:
            if member_set.add(g):
                members.append((list(d.steps), g))
            continue
        if len(g) > caps.vertex_budget:
            budget_hit = True
            continue
        if caps.max_nodes is not None:
            lower = len(g.node_vertices()) \
                + sum(mu_nodes.get(g.label(v), 10 ** 9) for v in nts) \
                + sum(_nodes_in_replacement(system,
                                            (lab, g.label(s), g.label(t)))
                      for (s, lab, t) in encoding_edges(g))
            if lower > caps.max_nodes:
                continue
        frozen_wires, isolated = _frozen_wire_counts(form)
        if caps.max_wires is not None:
            lower_w = frozen_wires + sum(
                _wires_in_replacement(system, (lab, g.label(s), g.label(t)))
                for (s, lab, t) in encoding_edges(g))
            if lower_w > caps.max_wires:
                continue
        if caps.max_isolated is not None and isolated > caps.max_isolated:
            continue
        if sum(mu_total.get(g.label(v), 10 ** 9) for v in nts) + len(g) \
                > caps.vertex_budget:
            budget_hit = True
            continue
        for v, i in d.expandable():
            branch = Derivation(grammar)
            for (bv, bp) in d.steps:
                branch.apply(bv, bp)
            branch.apply(v, i)
            if seen.add(branch.current):
                frontier.append(branch)
    return _SearchOutcome(members, budget_hit)


def _auto_normalize(besg: BesgGrammar) -> EdnceGrammar:
    """Remove empty and chain productions before enumeration (the language is
    unchanged, so soundness of the original validation carries over; the
    rewritten productions are not re-checked against the static conditions)."""
    grammar = besg.grammar
    if any(p.is_empty() or p.is_chain() for p in grammar.productions):
        grammar = normalize(grammar, ["no_empty", "no_chain", "reduced"])
    return grammar


def enumerate_language(besg: BesgGrammar, max_nodes: Optional[int] = None,
                       max_wsize: Optional[WSize] = None,
                       vertex_budget: Optional[int] = None) -> iso.IsoSet:
    """All decoded members within the bound, up to isomorphism.

    The bound is a node-vertex count or a wsize triple; enumeration is
    exhaustive within it because node counts, frozen wires and isolated
    wire-vertices only grow along derivations and through decoding.  Raises
    when the vertex budget cuts a live branch.
    """
    grammar = _auto_normalize(besg)
    caps = _SearchCaps(max_nodes=max_nodes, vertex_budget=vertex_budget or 64)
    if max_wsize is not None:
        caps.max_nodes = max_wsize.n if caps.max_nodes is None \
            else min(caps.max_nodes, max_wsize.n)
        caps.max_wires = max_wsize.w
        caps.max_isolated = max_wsize.i
    outcome = _search_members(grammar, besg.decoding, caps)
    if outcome.budget_hit:
        raise BoundTooLargeForBudgetError(
            "enumeration exceeded the vertex budget", caps.vertex_budget)
    out = iso.IsoSet()
    for _, encoded in outcome.members:
        decoded = decode(encoded, besg.decoding)
        if max_nodes is not None and len(decoded.node_vertices()) > max_nodes:
            continue
        if max_wsize is not None and not core.wsize(decoded).fits_in(max_wsize):
            continue
        out.add(decoded)
    return out


@dataclass
class MembershipWitness:
    script: list[tuple[str, int]]
    encoded: Graph
    decoded: Graph


@dataclass
class MembershipResult:
    member: bool
    witnesses: list[MembershipWitness]
    finite_within_bound: bool
    grammar: EdnceGrammar  # the normalized grammar the scripts replay against


def decide_membership(besg: BesgGrammar, h: Graph,
                      vertex_budget: Optional[int] = None) -> MembershipResult:
    """Decide whether some wire-homeomorphic variant of ``h`` lies in the
    language; on success return replayable witness scripts, one per distinct
    member found, plus whether the member set is finite within the bound.

    Search space: derivations whose decoded wsize can still fit wsize(h),
    pruned by the monotone lower bounds; the budget caps total vertices, and
    a budget-cut live branch is reported through ``finite_within_bound``.
    """
    report = core.classify(h)
    if report.kind != core.STRING:
        return MembershipResult(False, [], True, besg.grammar)
    grammar = _auto_normalize(besg)
    target = core.wsize(h)
    h_min = core.minimal_representative(h)
    if vertex_budget is None:
        vertex_budget = 2 * len(h_min) + 8
    caps = _SearchCaps(max_nodes=target.n, max_wires=target.w,
                       max_isolated=target.i, vertex_budget=vertex_budget)
    outcome = _search_members(grammar, besg.decoding, caps)
    witnesses = []
    for script, encoded in outcome.members:
        decoded = decode(encoded, besg.decoding)
        if core.wire_homeomorphic(decoded, h) is not None:
            witnesses.append(MembershipWitness(script, encoded, decoded))
    return MembershipResult(bool(witnesses), witnesses,
                            not outcome.budget_hit, grammar)


# --- match exhaustiveness and mono enumeration ----------------------------------------


def _production_transitions(grammar: EdnceGrammar) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {}
    for i, p in enumerate(grammar.productions):
        targets = set()
        for v in p.body.graph.nonterminal_vertices():
            targets.update(grammar.production_indices_for(p.body.graph.label(v)))
        out[i] = targets
    return out


def _reachable_productions(grammar: EdnceGrammar) -> set[int]:
    trans = _production_transitions(grammar)
    reach = set(grammar.production_indices_for(grammar.initial))
    work = list(reach)
    while work:
        i = work.pop()
        for j in trans[i]:
            if j not in reach:
                reach.add(j)
                work.append(j)
    return reach


def iterable_productions(grammar: EdnceGrammar) -> set[int]:
    """Productions applicable unboundedly often: reachable productions on a
    transition cycle, plus anything reachable from a cycle production whose
    body branches into two or more nonterminals (each extra pump of such a
    cycle spawns a fresh copy of everything downstream)."""
    trans = _production_transitions(grammar)
    reachable = _reachable_productions(grammar)

    def reaches(src: int) -> set[int]:
        seen = {src}
        work = [src]
        while work:
            i = work.pop()
            for j in trans[i]:
                if j not in seen:
                    seen.add(j)
                    work.append(j)
        return seen

    on_cycle = {i for i in reachable
                if any(i in reaches(j) for j in trans[i])}
    iterable = set(on_cycle)
    for i in on_cycle:
        if len(grammar.productions[i].body.graph.nonterminal_vertices()) >= 2:
            iterable |= (reaches(i) & reachable)
    return iterable & reachable


def _bare_wire_stats(body: ExtendedGraph) -> tuple[int, int]:
    report = core.classify(body.terminal_part())
    bare = sum(1 for w in report.wires if w.kind == core.BARE)
    return bare, len(report.isolated)


def check_match_exhaustive(besg: BesgGrammar) -> tuple[int, int]:
    """Verify the static sufficient conditions and return (bare-wire bound,
    isolated-vertex bound) over the whole language.

    No empty or chain productions; iterable productions must be unable to
    contribute bare wires or isolated wire-vertices, which we ensure by
    requiring their wire-vertices to be instruction-free, not adjacent to
    nonterminals, and to form no bare wires.  Non-iterable productions in a
    recursive region are rejected conservatively when they carry bare parts.
    """
    grammar = besg.grammar
    for i, p in enumerate(grammar.productions):
        if p.is_empty():
            raise NotMatchExhaustiveError("grammar has an empty production", i)
        if p.is_chain():
            raise NotMatchExhaustiveError("grammar has a chain production", i)
    iterable = iterable_productions(grammar)
    for i in sorted(iterable):
        p = grammar.productions[i]
        g = p.body.graph
        bare, isolated = _bare_wire_stats(p.body)
        if bare or isolated:
            raise NotMatchExhaustiveError(
                "iterable production contains a bare wire or isolated wire-vertex", i)
        for v in g.wire_vertices():
            if p.body.instructions_at(v):
                raise NotMatchExhaustiveError(
                    "iterable production has an instruction on a wire-vertex", i)
            if any(g.is_nonterminal_vertex(u) for u in g.neighbors(v)):
                raise NotMatchExhaustiveError(
                    "iterable production has a wire-vertex adjacent to a nonterminal", i)
    # non-iterable productions fire boundedly often; a fixpoint over the
    # transition graph (stable because iterable contributions are zero)
    # yields concrete bounds on bare wires and isolated wire-vertices
    per_prod = {i: _bare_wire_stats(p.body) for i, p in enumerate(grammar.productions)}
    for i in iterable:
        per_prod[i] = (0, 0)
    reachable = _reachable_productions(grammar)
    labels = {p.lhs for p in grammar.productions}
    bound = {lab: (0, 0) for lab in labels}
    for _ in range(len(grammar.productions) + 1):
        for lab in labels:
            best = (0, 0)
            for i in grammar.production_indices_for(lab):
                if i not in reachable:
                    continue
                g = grammar.productions[i].body.graph
                b, s = per_prod[i]
                for v in g.nonterminal_vertices():
                    nb, ns = bound.get(g.label(v), (0, 0))
                    b, s = b + nb, s + ns
                best = (max(best[0], b), max(best[1], s))
            bound[lab] = best
    return bound.get(besg.grammar.initial, (0, 0))


@dataclass
class MonoWitness:
    script: list[tuple[str, int]]
    encoded: Graph
    decoded: Graph
    host_variant: Graph
    morphism: dpo.GraphMorphism


def enumerate_monos(besg: BesgGrammar, h: Graph,
                    vertex_budget: Optional[int] = None) -> list[MonoWitness]:
    """All members of the language admitting a monomorphism into some
    wire-homeomorphic variant of ``h``, with their embeddings.

    Requires a match-exhaustive grammar; the search bound follows the
    mono-enumeration decidability argument: a member can place at most two
    non-bare wires on a host wire, so its wsize is at most
    (nodes, 2 * wires + bare bound, isolated bound).
    """
    bare_bound, iso_bound = check_match_exhaustive(besg)
    report = core.classify(h)
    if report.kind != core.STRING:
        raise NotEncodedStringGraphError(report.violations)
    grammar = _auto_normalize(besg)
    target = core.wsize(h)
    if vertex_budget is None:
        vertex_budget = 2 * len(core.minimal_representative(h)) + 2 * bare_bound + 8
    caps = _SearchCaps(max_nodes=target.n,
                       max_wires=2 * target.w + bare_bound,
                       max_isolated=iso_bound,
                       vertex_budget=vertex_budget)
    outcome = _search_members(grammar, besg.decoding, caps)
    witnesses = []
    for script, encoded in outcome.members:
        decoded = decode(encoded, besg.decoding)
        if not core.wsize(decoded).fits_in(
                WSize(target.n, 2 * target.w + bare_bound, iso_bound)):
            continue
        for matching in dpo.find_string_matchings(decoded, h):
            witnesses.append(MonoWitness(script, encoded, decoded,
                                         matching.host_variant, matching.morphism))
    return witnesses

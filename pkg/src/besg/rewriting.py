"""DPO rewriting of B-ESG grammars with admissibility certificates.

A rewrite rule here is a span of B-ESG grammars whose legs are production
bijections; the interface grammar carries only nonterminals and isolated
wire-vertices representing the per-production inputs and outputs.  Matching a
rule's left grammar into a host grammar requires a *saturated* matching:
per-production extended-graph saturation (no dangling edges, no edges at
interface nonterminals, a bijection on connection instructions) together
with production branching, initiality and nonterminal covering.  Rewriting
is then componentwise deletion and gluing, production by production; the
result is again a B-ESG grammar forming a rewrite pattern with the host.

Instantiating a rule — parallel derivations in the three grammars followed
by decoding — yields a concrete string-graph rewrite rule.  The
admissibility certificate replays those concrete rules on the decoded yield
of any derivation tree of the host, transforming it into the decoded yield
of the corresponding tree of the result; the replay is machine-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import core, dpo, iso
from .core import Graph
from .ednce import (
    CI,
    Derivation,
    EdnceGrammar,
    ExtendedGraph,
    Production,
    TreeNode,
    validate_tree,
    yield_with_provenance,
)
from .errors import (
    BadMorphismError,
    BijectionMismatchError,
    BoundaryViolationError,
    CIConditionViolationError,
    DanglingEdgeError,
    DanglingInstructionError,
    DanglingVertexError,
    EdgesConditionViolationError,
    IO1ViolationError,
    IO2ViolationError,
    NonDisjointMatchesError,
    NotProperNormalFormError,
    ReplayMismatchError,
    ResultNotBesgError,
    ScriptNotConcreteError,
)
from .esg import (
    BesgGrammar,
    DecodingSystem,
    decode_traced,
    normal_form_report,
    production_inputs,
    production_outputs,
    validate_besg,
)


@dataclass(frozen=True)
class GrammarMorphism:
    """A production map plus one extended-graph homomorphism per production."""

    source: EdnceGrammar
    target: EdnceGrammar
    production_map: tuple[int, ...]
    vertex_maps: tuple[dict[str, str], ...]

    def __post_init__(self):
        if len(self.production_map) != len(self.source.productions) or \
                len(self.vertex_maps) != len(self.source.productions):
            raise BadMorphismError("morphism must cover every source production")
        for i, p in enumerate(self.source.productions):
            j = self.production_map[i]
            q = self.target.productions[j]
            if p.lhs != q.lhs:
                raise BadMorphismError("production labels not preserved", i, j)
            _check_ext_hom(p.body, q.body, self.vertex_maps[i], (i, j))

    @property
    def is_mono(self) -> bool:
        if len(set(self.production_map)) != len(self.production_map):
            return False
        return all(len(set(vm.values())) == len(vm) for vm in self.vertex_maps)

    def vertex(self, prod: int, v: str) -> str:
        return self.vertex_maps[prod][v]

    def production(self, prod: int) -> int:
        return self.production_map[prod]


def _check_ext_hom(src: ExtendedGraph, tgt: ExtendedGraph,
                   vm: dict[str, str], where):
    sg, tg = src.graph, tgt.graph
    for v in sg.vertex_ids:
        if v not in vm or vm[v] not in tg:
            raise BadMorphismError("vertex map not total into target", where, v)
        if sg.label(v) != tg.label(vm[v]):
            raise BadMorphismError("vertex labels not preserved", where, v)
    for s, lab, t in sg.edges:
        if (vm[s], lab, vm[t]) not in tg.edges:
            raise BadMorphismError("edges not preserved", where, (s, lab, t))
    for c in src.connections:
        if CI(c.sigma, c.match, c.relabel, vm[c.vertex], c.direction) not in tgt.connections:
            raise BadMorphismError("connection instructions not preserved", where, c)


@dataclass
class BedncePattern:
    """Three grammars whose legs are production bijections that also restrict
    to label-preserving bijections on the nonterminals of each production."""

    L: EdnceGrammar
    I: EdnceGrammar
    R: EdnceGrammar
    l: GrammarMorphism
    r: GrammarMorphism

    def corresponding(self, i_prod: int) -> tuple[Production, Production, Production]:
        return (self.L.productions[self.l.production(i_prod)],
                self.I.productions[i_prod],
                self.R.productions[self.r.production(i_prod)])


def _check_nt_bijection(morphism: GrammarMorphism):
    for i, p in enumerate(morphism.source.productions):
        q = morphism.target.productions[morphism.production(i)]
        vm = morphism.vertex_maps[i]
        src_nts = set(p.body.graph.nonterminal_vertices())
        image = {vm[v] for v in src_nts}
        if image != set(q.body.graph.nonterminal_vertices()):
            raise BijectionMismatchError(
                "legs must map nonterminals bijectively per production", i)


def validate_pattern(L: EdnceGrammar, I: EdnceGrammar, R: EdnceGrammar,
                     l: GrammarMorphism, r: GrammarMorphism) -> BedncePattern:
    for g in (L, I, R):
        g.require_boundary()
    if not (L.initial == I.initial == R.initial):
        raise BijectionMismatchError("pattern grammars must share the initial label")
    for morphism, target in ((l, L), (r, R)):
        if morphism.source is not I and morphism.source != I:
            raise BadMorphismError("pattern legs must start at the interface grammar")
        if not morphism.is_mono:
            raise BadMorphismError("pattern legs must be monos")
        if sorted(morphism.production_map) != list(range(len(target.productions))):
            raise BijectionMismatchError(
                "pattern legs must be bijections on productions")
        _check_nt_bijection(morphism)
    return BedncePattern(L, I, R, l, r)


@dataclass
class BesgRewriteRule:
    """A validated span of B-ESG grammars over one decoding system."""

    pattern: BedncePattern
    decoding: DecodingSystem

    @property
    def L(self) -> EdnceGrammar:
        return self.pattern.L

    @property
    def I(self) -> EdnceGrammar:
        return self.pattern.I

    @property
    def R(self) -> EdnceGrammar:
        return self.pattern.R

    def reversed(self) -> "BesgRewriteRule":
        p = self.pattern
        return BesgRewriteRule(BedncePattern(p.R, p.I, p.L, p.r, p.l), self.decoding)


def validate_rule(L: EdnceGrammar, I: EdnceGrammar, R: EdnceGrammar,
                  l: GrammarMorphism, r: GrammarMorphism,
                  decoding: DecodingSystem) -> BesgRewriteRule:
    """Check the rewrite-rule clauses on top of the pattern structure.

    Boundary: interface productions carry only nonterminals and isolated
    wire-vertices.  IO1: the legs are surjections onto the production inputs
    and outputs of each side.  IO2: every interface wire-vertex lands on a
    production input on both sides, or on a production output on both.
    The interface grammar must be in B-ESG normal form and the two sides in
    proper B-ESG normal form, and all three must validate as B-ESG grammars.
    """
    pattern = validate_pattern(L, I, R, l, r)
    for i, p_i in enumerate(I.productions):
        p_l, _, p_r = pattern.corresponding(i)
        g = p_i.body.graph
        if p_i.body.connections or g.edges:
            raise BoundaryViolationError(
                "interface production carries edges or instructions", i)
        if any(g.is_node_vertex(v) for v in g.vertex_ids):
            raise BoundaryViolationError("interface production has a node-vertex", i)
        wire_vs = [v for v in g.vertex_ids if g.is_wire_vertex(v)]
        for side, leg, p_side in (("L", l, p_l), ("R", r, p_r)):
            vm = leg.vertex_maps[i]
            ins, outs = production_inputs(p_side.body), production_outputs(p_side.body)
            covered = {vm[v] for v in wire_vs}
            if not (ins | outs) <= covered:
                raise IO1ViolationError(
                    f"leg {side} misses production inputs/outputs", i,
                    sorted((ins | outs) - covered))
            for v in wire_vs:
                if vm[v] not in ins and vm[v] not in outs:
                    raise IO2ViolationError(
                        f"interface wire-vertex is interior on side {side}", i, v)
        vml, vmr = l.vertex_maps[i], r.vertex_maps[i]
        ins_l, outs_l = production_inputs(p_l.body), production_outputs(p_l.body)
        ins_r, outs_r = production_inputs(p_r.body), production_outputs(p_r.body)
        for v in wire_vs:
            if (vml[v] in ins_l) != (vmr[v] in ins_r) or \
                    (vml[v] in outs_l) != (vmr[v] in outs_r):
                raise IO2ViolationError(
                    "interface wire-vertex changes input/output role", i, v)
    for name, g in (("I", I),):
        report = normal_form_report(g)
        if not report.normal:
            raise NotProperNormalFormError(name, report.problems)
    for name, g in (("L", L), ("R", R)):
        report = normal_form_report(g)
        if not report.proper:
            raise NotProperNormalFormError(name, report.problems)
    for g in (L, I, R):
        validate_besg(g, decoding)
    return BesgRewriteRule(pattern, decoding)


def rule_from_pattern(L: EdnceGrammar, R: EdnceGrammar,
                      production_map: Sequence[int],
                      vertex_maps: Sequence[dict[str, str]],
                      decoding: DecodingSystem) -> BesgRewriteRule:
    """Construct the canonical interface grammar of a rewrite pattern by
    stripping each production of L to its nonterminals plus production
    inputs and outputs; ``vertex_maps`` carries the pattern bijection from
    those vertices of L to their counterparts in R."""
    productions = []
    l_maps = []
    r_maps = []
    for i, p_l in enumerate(L.productions):
        g = p_l.body.graph
        keep = set(g.nonterminal_vertices()) \
            | production_inputs(p_l.body) | production_outputs(p_l.body)
        body = ExtendedGraph(Graph(L.alphabets,
                                   {v: g.label(v) for v in keep}, ()))
        productions.append(Production(p_l.lhs, body, p_l.nt_order))
        l_maps.append({v: v for v in keep})
        r_maps.append({v: vertex_maps[i][v] for v in keep})
    I = EdnceGrammar(L.alphabets, productions, L.initial)
    l = GrammarMorphism(I, L, tuple(range(len(productions))), tuple(l_maps))
    r = GrammarMorphism(I, R, tuple(production_map), tuple(r_maps))
    return validate_rule(L, I, R, l, r, decoding)


def pattern_from_rule(rule: BesgRewriteRule) -> "Correspondence":
    """The rewrite pattern (pair plus bijections) a rule induces."""
    p = rule.pattern
    prod_map = [0] * len(p.L.productions)
    nt_maps: list[dict[str, str]] = [dict() for _ in p.L.productions]
    for i in range(len(p.I.productions)):
        li, ri = p.l.production(i), p.r.production(i)
        prod_map[li] = ri
        inv = {v: k for k, v in p.l.vertex_maps[i].items()}
        nt_maps[li] = {lv: p.r.vertex_maps[i][iv] for lv, iv in inv.items()}
    return Correspondence(p.L, p.R, tuple(prod_map), tuple(nt_maps))


# --- saturated matchings ------------------------------------------------------------


@dataclass
class SaturatedMatching:
    """A grammar monomorphism passing the five saturation clauses."""

    morphism: GrammarMorphism
    evidence: dict = field(default_factory=dict)


def _ext_saturated(p_l: Production, p_h: Production, vm: dict[str, str],
                   interface_vs: set[str], interface_nts: set[str]) -> bool:
    """The extended-graph saturation clauses for one production pair."""
    gl, gh = p_l.body.graph, p_h.body.graph
    image_v = {vm[v] for v in gl.vertex_ids}
    image_e = {(vm[s], lab, vm[t]) for s, lab, t in gl.edges}
    deleted = {vm[v] for v in gl.vertex_ids if v not in interface_vs}
    nts_img = {vm[v] for v in interface_nts}
    for e in gh.edges:
        if e in image_e:
            continue
        if e[0] in deleted or e[2] in deleted:
            return False
        if e[0] in nts_img or e[2] in nts_img:
            return False
    mapped_cis = {CI(c.sigma, c.match, c.relabel, vm[c.vertex], c.direction)
                  for c in p_l.body.connections}
    return mapped_cis == set(p_h.body.connections)


def _ext_matchings(p_l: Production, p_h: Production, interface_vs: set[str],
                   interface_nts: set[str]) -> list[dict[str, str]]:
    if len(p_l.body.connections) != len(p_h.body.connections):
        return []
    out = []
    for vm in iso.monomorphisms(p_l.body.graph, p_h.body.graph):
        if _ext_saturated(p_l, p_h, vm, interface_vs, interface_nts):
            out.append(vm)
    return out


def find_saturated_matchings(rule: BesgRewriteRule,
                             host: EdnceGrammar) -> list[SaturatedMatching]:
    """All saturated matchings of the rule's left grammar into the host, in
    a deterministic order.

    Production branching forces the production map to restrict to bijections
    on every left-hand-side label class, so candidates are assembled class
    by class and filtered through per-production saturation and the global
    initiality and nonterminal-covering clauses.
    """
    pattern = rule.pattern
    L = pattern.L
    labels = sorted({p.lhs for p in L.productions})
    class_maps = []
    for label in labels:
        l_idx = L.production_indices_for(label)
        h_idx = host.production_indices_for(label)
        if len(l_idx) != len(h_idx):
            return []
        class_maps.append((l_idx, [list(perm) for perm in
                                   itertools.permutations(h_idx)]))
    interface_data = {}
    for i in range(len(pattern.I.productions)):
        li = pattern.l.production(i)
        vm = pattern.l.vertex_maps[i]
        gi = pattern.I.productions[i].body.graph
        interface_data[li] = (
            {vm[v] for v in gi.vertex_ids},
            {vm[v] for v in gi.nonterminal_vertices()})

    used_labels = {lab for p in L.productions
                   for lab in p.body.graph.labels.values()}
    matchings = []
    for combo in itertools.product(*(perms for _, perms in class_maps)):
        production_map = [0] * len(L.productions)
        for (l_idx, _), perm in zip(class_maps, combo):
            for src, dst in zip(l_idx, perm):
                production_map[src] = dst
        per_prod_choices = []
        ok = True
        for i, p_l in enumerate(L.productions):
            ivs, ints = interface_data[i]
            choices = _ext_matchings(p_l, host.productions[production_map[i]],
                                     ivs, ints)
            if not choices:
                ok = False
                break
            per_prod_choices.append(choices)
        if not ok:
            continue
        if not (host.initial == L.initial or host.initial not in used_labels):
            continue
        for vms in itertools.product(*per_prod_choices):
            if _nonterminal_covering(L, host, production_map, vms, used_labels):
                morphism = GrammarMorphism(L, host, tuple(production_map),
                                           tuple(dict(vm) for vm in vms))
                if morphism.is_mono:
                    matchings.append(SaturatedMatching(
                        morphism, {"production_map": tuple(production_map)}))
    return matchings


def _nonterminal_covering(L, host, production_map, vms, used_labels) -> bool:
    covered: dict[int, set[str]] = {}
    for i, vm in enumerate(vms):
        j = production_map[i]
        covered.setdefault(j, set()).update(
            vm[v] for v in L.productions[i].body.graph.nonterminal_vertices())
    for j, q in enumerate(host.productions):
        g = q.body.graph
        for x in g.nonterminal_vertices():
            if g.label(x) in used_labels and x not in covered.get(j, set()) \
                    and g.label(x) != L.initial:
                return False
    return True


# --- applying a rewrite --------------------------------------------------------------


@dataclass
class Correspondence:
    """A pair of grammars with production and nonterminal bijections, the
    structure along which parallel derivations run."""

    first: EdnceGrammar
    second: EdnceGrammar
    production_map: tuple[int, ...]
    nt_maps: tuple[dict[str, str], ...]


@dataclass
class GrammarRewriteOutcome:
    host: BesgGrammar
    rule: BesgRewriteRule
    matching: GrammarMorphism
    result: BesgGrammar
    comatch: GrammarMorphism
    correspondence: Correspondence
    io_bijections: tuple[dict[str, str], ...]


def apply_rewrite(host: BesgGrammar, rule: BesgRewriteRule,
                  matching) -> GrammarRewriteOutcome:
    """Rewrite a host B-ESG grammar at a saturated matching.

    Checks the no-dangling clauses (edges, connection instructions,
    vertices) and the partial-adhesive Edges/CI conditions, then deletes and
    glues componentwise production by production.  The result is re-validated
    as a B-ESG grammar in proper normal form and returned together with the
    comatch and the correspondence bijections.
    """
    if isinstance(matching, SaturatedMatching):
        matching = matching.morphism
    if matching.target is not host.grammar:
        raise BadMorphismError("matching does not target the host grammar")
    pattern = rule.pattern
    G_H = host.grammar
    l_inv_prod = {pattern.l.production(i): i
                  for i in range(len(pattern.I.productions))}
    assert len(l_inv_prod) == len(pattern.L.productions), \
        "rule legs must be production bijections"

    matched_host = {}
    for i in range(len(pattern.L.productions)):
        matched_host[matching.production(i)] = i

    def production_data(h_idx, l_idx):
        i_prod = l_inv_prod[l_idx]
        p_l, p_i, p_r = pattern.corresponding(i_prod)
        vm = matching.vertex_maps[l_idx]
        return (i_prod, p_l, p_i, p_r, vm,
                pattern.l.vertex_maps[i_prod], pattern.r.vertex_maps[i_prod])

    # precondition pass: the no-dangling clauses and the partial-adhesive
    # Edges/CI conditions for every matched production
    for h_idx, l_idx in sorted(matched_host.items()):
        i_prod, p_l, p_i, p_r, vm, vml, vmr = production_data(h_idx, l_idx)
        p_h = G_H.productions[h_idx]
        gh, gl, gr, gi = (p_h.body.graph, p_l.body.graph,
                          p_r.body.graph, p_i.body.graph)
        interface_img = {vm[vml[v]]: v for v in gi.vertex_ids}
        deleted_v = {vm[v] for v in gl.vertex_ids} - set(interface_img)
        image_e = {(vm[s], lab, vm[t]) for s, lab, t in gl.edges}
        for e in sorted(gh.edges):
            if e not in image_e and (e[0] in deleted_v or e[2] in deleted_v):
                raise DanglingEdgeError("host edge dangles at a deleted vertex",
                                        h_idx, e)
        image_c = {CI(c.sigma, c.match, c.relabel, vm[c.vertex], c.direction)
                   for c in p_l.body.connections}
        for c in sorted(p_h.body.connections):
            if c not in image_c and c.vertex in deleted_v:
                raise DanglingInstructionError(
                    "host instruction dangles at a deleted vertex", h_idx, c)
        for v, w in itertools.product(gi.vertex_ids, gi.vertex_ids):
            for lab in G_H.alphabets.edge_labels:
                if (vm[vml[v]], lab, vm[vml[w]]) in gh.edges \
                        and (vmr[v], lab, vmr[w]) in gr.edges \
                        and (vml[v], lab, vml[w]) not in gl.edges:
                    raise EdgesConditionViolationError(h_idx, v, w, lab)
        for v in gi.vertex_ids:
            for c in p_h.body.instructions_at(vm[vml[v]]):
                key = (c.sigma, c.match, c.relabel, c.direction)
                in_r = any((c2.sigma, c2.match, c2.relabel, c2.direction) == key
                           and c2.vertex == vmr[v] for c2 in p_r.body.connections)
                in_l = any((c2.sigma, c2.match, c2.relabel, c2.direction) == key
                           and c2.vertex == vml[v] for c2 in p_l.body.connections)
                if in_r and not in_l:
                    raise CIConditionViolationError(h_idx, v, key)

    host_report = normal_form_report(G_H)
    if not host_report.proper:
        raise NotProperNormalFormError("host", host_report.problems)

    new_productions = list(G_H.productions)
    comatch_vms: list[dict[str, str]] = []
    comatch_pm: list[int] = []
    io_bijections: list[dict[str, str]] = [dict() for _ in G_H.productions]

    for i_r in range(len(pattern.R.productions)):
        comatch_pm.append(0)
        comatch_vms.append({})

    for h_idx, l_idx in sorted(matched_host.items()):
        i_prod, p_l, p_i, p_r, vm, vml, vmr = production_data(h_idx, l_idx)
        p_h = G_H.productions[h_idx]
        gh, gl, gr, gi = (p_h.body.graph, p_l.body.graph,
                          p_r.body.graph, p_i.body.graph)
        interface_img = {vm[vml[v]]: v for v in gi.vertex_ids}
        deleted_v = {vm[v] for v in gl.vertex_ids} - set(interface_img)
        image_e = {(vm[s], lab, vm[t]) for s, lab, t in gl.edges}
        image_c = {CI(c.sigma, c.match, c.relabel, vm[c.vertex], c.direction)
                   for c in p_l.body.connections}

        # pushout complement: delete matched interior vertices, all matched
        # edges and all matched instructions
        kept_v = {v: gh.label(v) for v in gh.vertex_ids if v not in deleted_v}
        kept_e = {e for e in gh.edges if e not in image_e}
        kept_c = {c for c in p_h.body.connections if c not in image_c}
        # pushout with the right-hand side
        f_map = {}
        used = set(kept_v)
        for x in gr.vertex_ids:
            pre = [v for v in gi.vertex_ids if vmr[v] == x]
            if pre:
                f_map[x] = vm[vml[pre[0]]]
            else:
                new = x
                n = 0
                while new in used:
                    n += 1
                    new = f"{x}~m{n}"
                f_map[x] = new
                used.add(new)
        labels = dict(kept_v)
        labels.update({f_map[x]: gr.label(x) for x in gr.vertex_ids})
        edges = set(kept_e) | {(f_map[s], lab, f_map[t]) for s, lab, t in gr.edges}
        connections = set(kept_c) | {
            CI(c.sigma, c.match, c.relabel, f_map[c.vertex], c.direction)
            for c in p_r.body.connections}
        body = ExtendedGraph(Graph(G_H.alphabets, labels, edges), connections)
        nt_order = tuple(p_h.nt_order)
        if set(nt_order) != set(body.graph.nonterminal_vertices()):
            raise DanglingVertexError(
                "rewrite changed the nonterminals of a production", h_idx)
        new_productions[h_idx] = Production(p_h.lhs, body, nt_order)
        comatch_pm[pattern.r.production(i_prod)] = h_idx
        comatch_vms[pattern.r.production(i_prod)] = dict(f_map)
        io_bijections[h_idx] = _io_bijection(p_h, new_productions[h_idx],
                                             interface_img, vm, vml, vmr, f_map)

    G_M = EdnceGrammar(G_H.alphabets, new_productions, G_H.initial)
    try:
        result = validate_besg(G_M, rule.decoding)
    except Exception as exc:  # noqa: BLE001 - converted into the bug trap
        raise ResultNotBesgError("rewrite produced a non-B-ESG grammar", exc) from exc
    result_report = normal_form_report(G_M)
    if not result_report.proper:
        raise ResultNotBesgError("rewrite left proper normal form",
                                 result_report.problems)
    for h_idx in range(len(G_H.productions)):
        if h_idx not in matched_host:
            io_bijections[h_idx] = {
                v: v for v in (production_inputs(G_H.productions[h_idx].body)
                               | production_outputs(G_H.productions[h_idx].body))}
        _check_io_bijection(G_H.productions[h_idx], G_M.productions[h_idx],
                            io_bijections[h_idx], h_idx)

    comatch = GrammarMorphism(pattern.R, G_M, tuple(comatch_pm), tuple(comatch_vms))
    correspondence = Correspondence(
        G_H, G_M, tuple(range(len(G_H.productions))),
        tuple({x: x for x in p.nt_order} for p in G_H.productions))
    return GrammarRewriteOutcome(host, rule, matching,
                                 result, comatch, correspondence,
                                 tuple(io_bijections))


def _io_bijection(p_h, p_m, interface_img, vm, vml, vmr, f_map) -> dict[str, str]:
    out = {}
    ins_h = production_inputs(p_h.body) | production_outputs(p_h.body)
    for v in ins_h:
        if v in interface_img:
            out[v] = f_map[vmr[interface_img[v]]]
        else:
            out[v] = v
    return out


def _check_io_bijection(p_h, p_m, bijection, where):
    ins_h, outs_h = production_inputs(p_h.body), production_outputs(p_h.body)
    ins_m, outs_m = production_inputs(p_m.body), production_outputs(p_m.body)
    gh, gm = p_h.body.graph, p_m.body.graph
    if set(bijection) != (ins_h | outs_h) or set(bijection.values()) != (ins_m | outs_m):
        raise ResultNotBesgError("production inputs/outputs not in bijection", where)
    for v, w in bijection.items():
        if gh.label(v) != gm.label(w) or (v in ins_h) != (w in ins_m) \
                or (v in outs_h) != (w in outs_m):
            raise ResultNotBesgError("io bijection breaks labels or roles", where, v)


# --- instantiation -------------------------------------------------------------------


@dataclass
class ParallelYield:
    graph: Graph
    provenance: dict[str, tuple]


def _concrete_scripts_of_length(grammar: EdnceGrammar, length: int
                                ) -> Optional[list[tuple[str, int]]]:
    """A deterministic concrete derivation script with exactly ``length``
    steps, or None."""

    def search(d: Derivation, steps: int):
        if steps == length:
            return list(d.steps) if d.is_terminal() else None
        choices = d.expandable()
        if not choices:
            return None
        for v, i in choices:
            branch = Derivation(grammar)
            for (bv, bp) in d.steps:
                branch.apply(bv, bp)
            branch.apply(v, i)
            found = search(branch, steps + 1)
            if found is not None:
                return found
        return None

    return search(Derivation(grammar), 0)


def instantiate_rule(rule: BesgRewriteRule, script: Sequence[tuple[str, int]]
                     ) -> dpo.GraphRewriteRule:
    """Run the script in the interface grammar and in parallel through both
    legs, decode, and return the resulting string-graph rewrite rule."""
    pattern = rule.pattern
    d_i = Derivation(pattern.I)
    d_l = Derivation(pattern.L)
    d_r = Derivation(pattern.R)
    lmap = {"n0": "n0"}
    rmap = {"n0": "n0"}
    for vertex, prod in script:
        if vertex not in d_i.current.graph:
            raise ScriptNotConcreteError("script expands a missing vertex", vertex)
        d_i.apply(vertex, prod)
        ren_i = d_i._renamings[-1]
        d_l.apply(lmap[vertex], pattern.l.production(prod))
        ren_l = d_l._renamings[-1]
        d_r.apply(rmap[vertex], pattern.r.production(prod))
        ren_r = d_r._renamings[-1]
        vml = pattern.l.vertex_maps[prod]
        vmr = pattern.r.vertex_maps[prod]
        for b, fresh in ren_i.items():
            lmap[fresh] = ren_l[vml[b]]
            rmap[fresh] = ren_r[vmr[b]]
    if not d_i.is_terminal() or not d_l.is_terminal() or not d_r.is_terminal():
        raise ScriptNotConcreteError("instantiation script must be concrete")
    interface = d_i.current.graph
    left, _ = decode_traced(d_l.current.graph, rule.decoding)
    right, _ = decode_traced(d_r.current.graph, rule.decoding)
    l_map = {v: lmap[v] for v in interface.vertex_ids}
    r_map = {v: rmap[v] for v in interface.vertex_ids}
    made = dpo.make_rule(left, interface, right, l_map, r_map)
    return dpo.validate_string_rewrite_rule(made)


def instantiate_rule_of_length(rule: BesgRewriteRule, length: int
                               ) -> dpo.GraphRewriteRule:
    script = _concrete_scripts_of_length(rule.pattern.I, length)
    if script is None:
        raise ScriptNotConcreteError(
            "no concrete derivation of the requested length", length)
    return instantiate_rule(rule, script)


def instantiate_correspondence(corr: Correspondence,
                               decoding: DecodingSystem,
                               script: Sequence[tuple[str, int]]
                               ) -> tuple[Graph, Graph]:
    """Parallel instantiation of a correspondence: the same derivation run
    through both grammars, decoded on both sides."""
    d_1 = Derivation(corr.first)
    d_2 = Derivation(corr.second)
    vmap = {"n0": "n0"}
    for vertex, prod in script:
        d_1.apply(vertex, prod)
        ren_1 = d_1._renamings[-1]
        d_2.apply(vmap[vertex], corr.production_map[prod])
        ren_2 = d_2._renamings[-1]
        p_1 = corr.first.productions[prod]
        p_2 = corr.second.productions[corr.production_map[prod]]
        nt_map = corr.nt_maps[prod]
        for slot, nt in enumerate(p_1.nt_order):
            vmap[ren_1[nt]] = ren_2[nt_map.get(nt, p_2.nt_order[slot])]
    if not d_1.is_terminal() or not d_2.is_terminal():
        raise ScriptNotConcreteError("correspondence instantiation must be concrete")
    first, _ = decode_traced(d_1.current.graph, decoding)
    second, _ = decode_traced(d_2.current.graph, decoding)
    return first, second


# --- admissibility certificates --------------------------------------------------------


@dataclass
class SubtreeReplay:
    paths: list[tuple]
    script: list[tuple[str, int]]
    rule: dpo.GraphRewriteRule
    match: dict[str, str]


@dataclass
class AdmissibilityCertificate:
    tree: TreeNode
    host_graph: Graph
    result_graph: Graph
    replays: list[SubtreeReplay]
    transcript: list[str]
    verified: bool


def _tree_paths(node: TreeNode, path=()) -> dict[tuple, TreeNode]:
    out = {path: node}
    for i, child in enumerate(node.children):
        if child is not None:
            out.update(_tree_paths(child, path + (i,)))
    return out


def certify_admissibility(outcome: GrammarRewriteOutcome,
                          tree: TreeNode) -> AdmissibilityCertificate:
    """Build and machine-check the admissibility witness for one tree.

    The corresponding tree of the rewritten grammar is the same tree (the
    correspondence preserves production indices and nonterminal orders).
    Every maximal matched subtree induces a concrete instantiation of the
    rule; replaying the decoded instantiations at their induced matches must
    transform the decoded yield of the host tree into the decoded yield of
    the result tree.
    """
    G_H = outcome.host.grammar
    G_M = outcome.result.grammar
    pattern = outcome.rule.pattern
    matching = outcome.matching
    validate_tree(G_H, tree, G_H.initial)
    if not tree.is_concrete():
        raise ScriptNotConcreteError("certification needs a concrete tree")

    host_enc, prov_h = yield_with_provenance(G_H, tree)
    result_enc, prov_m = yield_with_provenance(G_M, tree)
    host_dec, host_traces = decode_traced(host_enc.graph, outcome.rule.decoding)
    result_dec, _ = decode_traced(result_enc.graph, outcome.rule.decoding)

    prod_image = {matching.production(i): i
                  for i in range(len(pattern.L.productions))}
    nodes = _tree_paths(tree)
    host_rev = {prov: v for v, prov in prov_h.items()}

    def edge_matched(parent_path, slot) -> bool:
        host_prod = G_H.productions[nodes[parent_path].production]
        l_idx = prod_image.get(nodes[parent_path].production)
        if l_idx is None:
            return False
        nt = host_prod.nt_order[slot]
        return nt in set(matching.vertex_maps[l_idx].values())

    matched_nodes = {p for p, n in nodes.items() if n.production in prod_image}
    roots = []
    for path in sorted(matched_nodes):
        if path == ():
            roots.append(path)
        elif path[:-1] not in matched_nodes or not edge_matched(path[:-1], path[-1]):
            roots.append(path)

    l_of_host = {matching.production(i): i for i in range(len(pattern.L.productions))}
    i_of_l = {pattern.l.production(i): i for i in range(len(pattern.I.productions))}

    replays: list[SubtreeReplay] = []
    transcript: list[str] = []
    current = host_dec
    all_images: list[set[str]] = []

    for root in roots:
        # rebuild the subtree as a tree over the interface grammar, keeping
        # the map from interface-tree paths back to host-tree paths
        def build(path):
            node = nodes[path]
            l_idx = l_of_host[node.production]
            i_idx = i_of_l[l_idx]
            p_h = G_H.productions[node.production]
            vm = matching.vertex_maps[l_idx]
            children_i = []
            pathmap = {(): path}
            p_i = pattern.I.productions[i_idx]
            for slot_i, nt_i in enumerate(p_i.nt_order):
                nt_l = pattern.l.vertex_maps[i_idx][nt_i]
                host_slot = p_h.nt_order.index(vm[nt_l])
                child = nodes.get(path + (host_slot,))
                if child is None or path + (host_slot,) not in matched_nodes:
                    raise ReplayMismatchError(
                        "matched subtree is not concrete over the rule", path)
                sub_tree, sub_map = build(path + (host_slot,))
                children_i.append(sub_tree)
                for local, hp in sub_map.items():
                    pathmap[(slot_i,) + local] = hp
            return TreeNode(i_idx, tuple(children_i)), pathmap

        i_tree, pathmap = build(root)
        i_script = _script_of_tree_indices(pattern.I, i_tree)
        (l_yield, prov_l), (i_yield, _), (r_yield, _), l_emb, r_emb = \
            _instantiate_with_provenance(pattern, i_tree)

        # encoded match of the L-yield into the host yield via provenance
        m_enc = {}
        for v, (lp, b_l) in prov_l.items():
            if v not in l_yield.graph:
                continue
            host_path = pathmap[lp]
            vm = matching.vertex_maps[l_of_host[nodes[host_path].production]]
            m_enc[v] = host_rev[(host_path, vm[b_l])]

        # decode the rule sides and extend the match over decoded vertices
        l_dec, l_traces = decode_traced(l_yield.graph, outcome.rule.decoding)
        r_dec, _ = decode_traced(r_yield.graph, outcome.rule.decoding)
        m_dec = dict(m_enc)
        for edge, trace in l_traces.items():
            host_edge = (m_enc[edge[0]], edge[1], m_enc[edge[2]])
            host_trace = host_traces[host_edge]
            for rv in trace:
                m_dec[trace[rv]] = host_trace[rv]

        l_map = {v: l_emb[v] for v in i_yield.graph.vertex_ids}
        r_map = {v: r_emb[v] for v in i_yield.graph.vertex_ids}
        concrete = dpo.validate_string_rewrite_rule(
            dpo.make_rule(l_dec, i_yield.graph, r_dec, l_map, r_map))

        image = {m_dec[v] for v in l_dec.vertex_ids}
        for previous in all_images:
            if previous & image:
                raise NonDisjointMatchesError(root)
        all_images.append(image)

        morphism = dpo.GraphMorphism(l_dec, current, m_dec)
        step = dpo.dpo_rewrite(current, concrete, morphism)
        transcript.append(
            f"subtree at {root}: rewrote a {len(l_dec)}-vertex instance; "
            f"host now has {len(step.result)} vertices")
        current = step.result
        replays.append(SubtreeReplay(sorted(pathmap.values()), i_script,
                                     concrete, m_dec))

    verified = iso.is_isomorphic(current, result_dec)
    if not verified:
        raise ReplayMismatchError("replayed host does not match the result yield")
    return AdmissibilityCertificate(tree, host_dec, result_dec,
                                    replays, transcript, True)


def _script_of_tree_indices(grammar: EdnceGrammar, root: TreeNode):
    from .ednce import script_of_tree
    return script_of_tree(grammar, root)


def _instantiate_with_provenance(pattern: BedncePattern, i_tree: TreeNode):
    """Yields of the I/L/R trees with provenance, plus the interface
    embeddings into both sides (as vertex maps)."""
    l_tree = _map_tree(pattern, i_tree, pattern.l)
    r_tree = _map_tree(pattern, i_tree, pattern.r)
    i_yield, prov_i = yield_with_provenance(pattern.I, i_tree)
    l_yield, prov_l = yield_with_provenance(pattern.L, l_tree)
    r_yield, prov_r = yield_with_provenance(pattern.R, r_tree)
    rev_l = {prov: v for v, prov in prov_l.items()}
    rev_r = {prov: v for v, prov in prov_r.items()}
    l_emb = {}
    r_emb = {}
    for v, (path, b_i) in prov_i.items():
        if v not in i_yield.graph:
            continue
        i_idx = _node_at(i_tree, path).production
        l_emb[v] = rev_l[(path, pattern.l.vertex_maps[i_idx][b_i])]
        r_emb[v] = rev_r[(path, pattern.r.vertex_maps[i_idx][b_i])]
    return (l_yield, prov_l), (i_yield, prov_i), (r_yield, prov_r), l_emb, r_emb


def _node_at(root: TreeNode, path: tuple) -> TreeNode:
    node = root
    for i in path:
        node = node.children[i]
    return node


def _map_tree(pattern: BedncePattern, i_tree: TreeNode,
              leg: GrammarMorphism) -> TreeNode:
    """The I-tree reinterpreted over a leg's target grammar; child slots are
    re-indexed through the leg's nonterminal bijection."""
    p_i = pattern.I.productions[i_tree.production]
    target_prod = leg.target.productions[leg.production(i_tree.production)]
    vm = leg.vertex_maps[i_tree.production]
    children: list[Optional[TreeNode]] = [None] * len(target_prod.nt_order)
    for slot, child in enumerate(i_tree.children):
        if child is None:
            continue
        nt_i = p_i.nt_order[slot]
        target_slot = target_prod.nt_order.index(vm[nt_i])
        children[target_slot] = _map_tree(pattern, child, leg)
    return TreeNode(leg.production(i_tree.production), tuple(children))

"""Independent brute-force oracles.

Everything here recomputes results from first principles (permutation
enumeration, subset search, union-find quotients) without touching the
engine's search or formula code, so the tests can cross-check the two
routes against each other.
"""

import itertools

from besg.core import Graph


def brute_monomorphisms(pattern, host):
    """All injective label/edge-preserving maps, by trying every injection."""
    pvs = list(pattern.vertex_ids)
    found = []
    for image in itertools.permutations(host.vertex_ids, len(pvs)):
        m = dict(zip(pvs, image))
        if any(pattern.label(v) != host.label(m[v]) for v in pvs):
            continue
        if all((m[s], lab, m[t]) in host.edges for s, lab, t in pattern.edges):
            found.append(m)
    return found


def brute_isomorphisms(g, h):
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return []
    return [m for m in brute_monomorphisms(g, h)
            if all((m[s], lab, m[t]) in h.edges for s, lab, t in g.edges)]


def brute_wire_stats(g):
    """(wire count, isolated wire-vertex count) via union-find over the
    wire-vertex adjacency, independent of the engine's wire tracing."""
    wvs = [v for v in g.vertex_ids if g.is_wire_vertex(v)]
    parent = {v: v for v in wvs}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s, _, t in g.edges:
        if s in parent and t in parent:
            parent[find(s)] = find(t)
    components = {}
    for v in wvs:
        components.setdefault(find(v), []).append(v)
    wires = 0
    isolated = 0
    for comp in components.values():
        has_edge = any((s in comp or t in comp) for s, _, t in g.edges)
        if has_edge:
            wires += 1
        else:
            isolated += 1
    return wires, isolated


def is_set_pushout_square(I, L, K, H, l_map, k_map, m_map, s_map):
    """Check that a commuting square of monos is a pushout, componentwise in
    Set on vertices and on edge triples (the multigraph-embedded pushout)."""
    def edge_image(m, e):
        return (m[e[0]], e[1], m[e[2]])

    for v in I.vertex_ids:
        if m_map[l_map[v]] != s_map[k_map[v]]:
            return False
    mv = {m_map[v] for v in L.vertex_ids}
    sv = {s_map[v] for v in K.vertex_ids}
    if mv | sv != set(H.vertex_ids):
        return False
    glued_v = {m_map[l_map[v]] for v in I.vertex_ids}
    if mv & sv != glued_v:
        return False
    me = {edge_image(m_map, e) for e in L.edges}
    se = {edge_image(s_map, e) for e in K.edges}
    if me | se != set(H.edges):
        return False
    glued_e = {edge_image(m_map, edge_image(l_map, e)) for e in I.edges}
    if me & se != glued_e:
        return False
    return True


def exhaustive_pushout_complements(I, L, H, l_map, m_map):
    """All subgraphs K of H completing the square to a pushout.

    Any complement with monos is isomorphic to one where K -> H is a
    subgraph inclusion, so searching vertex and edge subsets of H is
    exhaustive up to isomorphism.
    """
    k_map = {v: m_map[l_map[v]] for v in I.vertex_ids}
    complements = []
    vertex_ids = list(H.vertex_ids)
    all_edges = sorted(H.edges)
    for r in range(len(vertex_ids) + 1):
        for vsub in itertools.combinations(vertex_ids, r):
            vset = set(vsub)
            if not set(k_map.values()) <= vset:
                continue
            inner = [e for e in all_edges if e[0] in vset and e[2] in vset]
            for er in range(len(inner) + 1):
                for esub in itertools.combinations(inner, er):
                    K = Graph(H.alphabets, {v: H.label(v) for v in vset}, esub)
                    s_map = {v: v for v in vset}
                    if is_set_pushout_square(I, L, K, H, l_map, k_map, m_map, s_map):
                        complements.append(K)
    return complements


def exhaustive_grammar_complements(rule, host, matching):
    """All subgrammar complements of a grammar-level matching, checked by the
    componentwise set-pushout conditions per production.

    Productions are in bijection along the legs, so the complement keeps
    every production and only the per-production vertex/edge/instruction
    subsets vary; each matched production is searched independently and the
    per-production complement sets are combined.
    """
    pattern = rule.pattern
    host_grammar = matching.target
    per_production = []
    for i_prod in range(len(pattern.I.productions)):
        l_idx = pattern.l.production(i_prod)
        h_idx = matching.production(l_idx)
        p_l = pattern.L.productions[l_idx]
        p_i = pattern.I.productions[i_prod]
        p_h = host_grammar.productions[h_idx]
        vm = matching.vertex_maps[l_idx]
        vml = pattern.l.vertex_maps[i_prod]
        gl, gh, gi = p_l.body.graph, p_h.body.graph, p_i.body.graph

        l_map = {v: vml[v] for v in gi.vertex_ids}
        m_map = dict(vm)
        k_fixed = {m_map[l_map[v]] for v in gi.vertex_ids}
        candidates = []
        vertex_ids = list(gh.vertex_ids)
        cis = sorted(p_h.body.connections)
        for r in range(len(vertex_ids) + 1):
            for vsub in itertools.combinations(vertex_ids, r):
                vset = set(vsub)
                if not k_fixed <= vset:
                    continue
                inner = [e for e in sorted(gh.edges)
                         if e[0] in vset and e[2] in vset]
                inner_cis = [c for c in cis if c.vertex in vset]
                for er in range(len(inner) + 1):
                    for esub in itertools.combinations(inner, er):
                        for cr in range(len(inner_cis) + 1):
                            for csub in itertools.combinations(inner_cis, cr):
                                if _is_ext_pushout(gi, p_l, p_h, l_map, m_map,
                                                   vset, set(esub), set(csub)):
                                    candidates.append((vset, frozenset(esub),
                                                       frozenset(csub)))
        per_production.append((h_idx, candidates))
    return per_production


def _is_ext_pushout(gi, p_l, p_h, l_map, m_map, k_vs, k_es, k_cs):
    """Componentwise Set-pushout conditions over vertices, edges and
    connection instructions of one production square."""
    from besg.ednce import CI

    gl, gh = p_l.body.graph, p_h.body.graph
    mv = {m_map[v] for v in gl.vertex_ids}
    glued_v = {m_map[l_map[v]] for v in gi.vertex_ids}
    if mv | k_vs != set(gh.vertex_ids) or mv & k_vs != glued_v:
        return False
    me = {(m_map[s], lab, m_map[t]) for s, lab, t in gl.edges}
    glued_e = set()  # interface productions carry no edges
    if me | k_es != set(gh.edges) or me & k_es != glued_e:
        return False
    mc = {CI(c.sigma, c.match, c.relabel, m_map[c.vertex], c.direction)
          for c in p_l.body.connections}
    if mc | k_cs != set(p_h.body.connections) or mc & k_cs != set():
        return False
    return True


def brute_pushout(I, K, R, k_map, r_map):
    """Pushout by tagged disjoint union and union-find quotient; returns
    (vertex labels, edge set) over canonical representative names."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        parent[find(a)] = find(b)

    for v in K.vertex_ids:
        find(("K", v))
    for v in R.vertex_ids:
        find(("R", v))
    for v in I.vertex_ids:
        union(("K", k_map[v]), ("R", r_map[v]))

    labels = {}
    for v in K.vertex_ids:
        labels[find(("K", v))] = K.label(v)
    for v in R.vertex_ids:
        labels[find(("R", v))] = R.label(v)
    edges = set()
    for s, lab, t in K.edges:
        edges.add((find(("K", s)), lab, find(("K", t))))
    for s, lab, t in R.edges:
        edges.add((find(("R", s)), lab, find(("R", t))))
    return labels, edges

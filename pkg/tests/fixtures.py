"""Shared alphabets, graphs, grammars and rules used across the test suite.

Everything is built programmatically so a single definition serves the unit
tests, the acceptance suite and the CLI round-trip tests.
"""

import random

from besg.core import Graph, LabelAlphabets, elongate_edge
from besg.ednce import CI, EdnceGrammar, ExtendedGraph, Production

# one nonterminal-rich alphabet covers most grammar tests
ALPH = LabelAlphabets.make(
    vertex_labels={"n", "w", "S", "X", "Y", "Z"},
    terminal_labels={"n", "w"},
    node_labels={"n"},
    edge_labels={"e", "E"},
    encoding_labels={"E"},
)

# plain-graph alphabet (no wire-vertices) for generic DPO tests
PLAIN = LabelAlphabets.make(
    vertex_labels={"a", "b", "c", "S", "X"},
    terminal_labels={"a", "b", "c"},
    node_labels={"a", "b", "c"},
    edge_labels={"x", "y", "z"},
)

# monoid-flavoured alphabet for the unitality example
MONOID = LabelAlphabets.make(
    vertex_labels={"m", "u", "f", "g", "w", "S"},
    terminal_labels={"m", "u", "f", "g", "w"},
    node_labels={"m", "u", "f", "g"},
    edge_labels={"e"},
)


def graph(alphabets, vertices, edges=()):
    """vertices: dict id -> label; edges: iterable of triples."""
    return Graph(alphabets, dict(vertices), set(edges))


def sk_n(n, alphabets=ALPH):
    """Complete string graph: n node-vertices, one single-wire-vertex wire
    per pair, oriented from the lower to the higher index."""
    vertices = {f"N{i}": "n" for i in range(1, n + 1)}
    edges = set()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            w = f"w{i}_{j}"
            vertices[w] = "w"
            edges.add((f"N{i}", "e", w))
            edges.add((w, "e", f"N{j}"))
    return Graph(alphabets, vertices, edges)


def sk_mn(m, n, alphabets=ALPH):
    """Complete bipartite string graph with parts of size m and n."""
    vertices = {f"A{i}": "n" for i in range(1, m + 1)}
    vertices.update({f"B{j}": "n" for j in range(1, n + 1)})
    edges = set()
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            w = f"w{i}_{j}"
            vertices[w] = "w"
            edges.add((f"A{i}", "e", w))
            edges.add((w, "e", f"B{j}"))
    return Graph(alphabets, vertices, edges)


def encoded_k_n(n, alphabets=ALPH):
    """n node-vertices completely connected by encoding edges."""
    vertices = {f"N{i}": "n" for i in range(1, n + 1)}
    edges = {(f"N{i}", "E", f"N{j}")
             for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    return Graph(alphabets, vertices, edges)


def random_elongation(g, steps, seed=0):
    """Apply `steps` random wire elongations (each a ~-preserving move)."""
    rng = random.Random(seed)
    for k in range(steps):
        candidates = [e for e in sorted(g.edges)
                      if g.is_wire_vertex(e[0]) or g.is_wire_vertex(e[2])]
        if not candidates:
            return g
        edge = rng.choice(candidates)
        g = elongate_edge(g, edge, f"el{k}")
    return g


def ext(g, *cis):
    return ExtendedGraph(g, cis)


def kn_grammar():
    """Complete graphs K_n (n >= 2), all vertices labeled n, edges oriented
    from older to newer vertices."""
    p0 = Production("S", ext(
        graph(ALPH, {"v": "n", "x": "X"}, {("v", "e", "x")})))
    p1 = Production("X", ext(
        graph(ALPH, {"v": "n", "x": "X"}, {("v", "e", "x")}),
        CI("n", "e", "e", "v", "in"),
        CI("n", "e", "e", "x", "in")))
    p2 = Production("X", ext(
        graph(ALPH, {"v": "n"}),
        CI("n", "e", "e", "v", "in")))
    return EdnceGrammar(ALPH, [p0, p1, p2], "S")


def star_xy_grammar():
    """Star graphs K_{1,k} generated with two nonterminal kinds; apex and
    boundary but not linear."""
    p0 = Production("S", ext(
        graph(ALPH, {"c": "n", "x": "X", "y": "Y"},
              {("c", "e", "x"), ("c", "e", "y")})),
        nt_order=("x", "y"))
    leaf_x = Production("X", ext(
        graph(ALPH, {"v": "n"}), CI("n", "e", "e", "v", "in")))
    more_x = Production("X", ext(
        graph(ALPH, {"v": "n", "x": "X"}),
        CI("n", "e", "e", "v", "in"),
        CI("n", "e", "e", "x", "in")))
    leaf_y = Production("Y", ext(
        graph(ALPH, {"v": "n"}), CI("n", "e", "e", "v", "in")))
    more_y = Production("Y", ext(
        graph(ALPH, {"v": "n", "y": "Y"}),
        CI("n", "e", "e", "v", "in"),
        CI("n", "e", "e", "y", "in")))
    return EdnceGrammar(ALPH, [p0, leaf_x, more_x, leaf_y, more_y], "S")


def k_1n(k, alphabets=ALPH):
    """Star graph K_{1,k}: edges oriented center -> leaf."""
    vertices = {"c": "n"}
    edges = set()
    for i in range(k):
        vertices[f"l{i}"] = "n"
        edges.add(("c", "e", f"l{i}"))
    return Graph(alphabets, vertices, edges)


def complete_graph(n, alphabets=ALPH):
    """K_n over the node label with edges oriented from lower to higher id."""
    vertices = {f"v{i}": "n" for i in range(n)}
    edges = {(f"v{i}", "e", f"v{j}") for i in range(n) for j in range(i + 1, n)}
    return Graph(alphabets, vertices, edges)


# --- B-ESG bundles ---------------------------------------------------------------

def sk_decoding(alphabets=ALPH):
    """The one decoding rule of the SK grammars: an encoding edge becomes a
    wire with a single wire-vertex."""
    from besg.esg import DecodingRule, DecodingSystem
    replacement = graph(alphabets, {"a": "n", "b": "n", "t": "w"},
                        {("a", "e", "t"), ("t", "e", "b")})
    rule = DecodingRule("E", "n", "n", replacement, ("a", "b"))
    return DecodingSystem(alphabets, [rule])


def skn_besg():
    """Encoded grammar for the complete string graphs SK_n, n >= 2."""
    from besg.esg import validate_besg
    p0 = Production("S", ext(
        graph(ALPH, {"v": "n", "x": "X"}, {("v", "E", "x")})))
    p1 = Production("X", ext(
        graph(ALPH, {"v": "n", "x": "X"}, {("v", "E", "x")}),
        CI("n", "E", "E", "v", "in"),
        CI("n", "E", "E", "x", "in")))
    p2 = Production("X", ext(
        graph(ALPH, {"v": "n"}),
        CI("n", "E", "E", "v", "in")))
    grammar = EdnceGrammar(ALPH, [p0, p1, p2], "S")
    return validate_besg(grammar, sk_decoding())


def skmn_besg():
    """Encoded grammar for the complete bipartite string graphs SK_{m,n}."""
    from besg.esg import validate_besg
    p0 = Production("S", ext(
        graph(ALPH, {"a": "n", "x": "X"}, {("a", "E", "x")})))
    p1 = Production("X", ext(
        graph(ALPH, {"a": "n", "x": "X"}, {("a", "E", "x")}),
        CI("n", "E", "E", "x", "in")))
    p2 = Production("X", ext(
        graph(ALPH, {"y": "Y"}),
        CI("n", "E", "E", "y", "in")))
    p3 = Production("Y", ext(
        graph(ALPH, {"b": "n", "y": "Y"}),
        CI("n", "E", "E", "b", "in"),
        CI("n", "E", "E", "y", "in")))
    p4 = Production("Y", ext(
        graph(ALPH, {"b": "n"}),
        CI("n", "E", "E", "b", "in")))
    grammar = EdnceGrammar(ALPH, [p0, p1, p2, p3, p4], "S")
    return validate_besg(grammar, sk_decoding())


XYZ_ALPH = LabelAlphabets.make(
    vertex_labels={"n", "w", "S", "X", "Y", "Z"},
    terminal_labels={"n", "w"},
    node_labels={"n"},
    edge_labels={"ea", "eb", "ec", "ed", "E"},
    encoding_labels={"E"},
)


def xyz_grammar():
    """The wire-inconsistent example: context cardinality two at the top is
    passed down three productions onto a wire-vertex."""
    p0 = Production("S", ext(
        graph(XYZ_ALPH, {"v1": "n", "v2": "n", "x": "X"},
              {("v1", "ea", "x"), ("v2", "ea", "x")})))
    p1 = Production("X", ext(
        graph(XYZ_ALPH, {"y": "Y"}), CI("n", "ea", "eb", "y", "in")))
    p2 = Production("Y", ext(
        graph(XYZ_ALPH, {"z": "Z"}), CI("n", "eb", "ec", "z", "in")))
    p3 = Production("Z", ext(
        graph(XYZ_ALPH, {"t": "w"}), CI("n", "ec", "ed", "t", "in")))
    return EdnceGrammar(XYZ_ALPH, [p0, p1, p2, p3], "S")


def xyz_decoding():
    from besg.esg import DecodingRule, DecodingSystem
    replacement = graph(XYZ_ALPH, {"a": "n", "b": "n", "t": "w"},
                        {("a", "ea", "t"), ("t", "ea", "b")})
    return DecodingSystem(XYZ_ALPH, [DecodingRule("E", "n", "n", replacement, ("a", "b"))])


# --- the worked grammar-rewrite example ----------------------------------------------

GRAY_ALPH = LabelAlphabets.make(
    vertex_labels={"n", "g", "w", "S", "X", "Y", "T"},
    terminal_labels={"n", "g", "w"},
    node_labels={"n", "g"},
    edge_labels={"e", "E"},
    encoding_labels={"E"},
)


def gray_decoding():
    from besg.esg import DecodingRule, DecodingSystem
    rules = []
    for src in ("n", "g"):
        for tgt in ("n", "g"):
            replacement = graph(GRAY_ALPH, {"a": src, "b": tgt, "t": "w"},
                                {("a", "e", "t"), ("t", "e", "b")})
            rules.append(DecodingRule("E", src, tgt, replacement, ("a", "b")))
    return DecodingSystem(GRAY_ALPH, rules)


def complete_outputs_grammar():
    """Complete string graphs where every node-vertex has one output wire."""
    p0 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X"},
              {("v", "e", "o"), ("v", "E", "x")})))
    p1 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X"},
              {("v", "e", "o"), ("v", "E", "x")}),
        CI("n", "E", "E", "v", "in"),
        CI("n", "E", "E", "x", "in")))
    p2 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w"}, {("v", "e", "o")}),
        CI("n", "E", "E", "v", "in")))
    p3 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w"}, {("v", "e", "o")})))
    return EdnceGrammar(GRAY_ALPH, [p0, p1, p2, p3], "S")


def star_outputs_grammar():
    """Star string graphs where every node-vertex has one output wire."""
    p0 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X"},
              {("v", "e", "o"), ("v", "E", "x")})))
    p1 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X"}, {("v", "e", "o")}),
        CI("n", "E", "E", "v", "in"),
        CI("n", "E", "E", "x", "in")))
    p2 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w"}, {("v", "e", "o")}),
        CI("n", "E", "E", "v", "in")))
    p3 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w"}, {("v", "e", "o")})))
    return EdnceGrammar(GRAY_ALPH, [p0, p1, p2, p3], "S")


def complete_star_rule():
    """The worked rewrite rule: complete string graphs with one output per
    node-vertex rewrite to star string graphs with one output per node."""
    from besg.rewriting import rule_from_pattern
    L = complete_outputs_grammar()
    R = star_outputs_grammar()
    vertex_maps = [{"v": "v", "o": "o", "x": "x"},
                   {"v": "v", "o": "o", "x": "x"},
                   {"v": "v", "o": "o"},
                   {"v": "v", "o": "o"}]
    return rule_from_pattern(L, R, [0, 1, 2, 3], vertex_maps, gray_decoding())


def _gray_tail_productions():
    q3 = Production("Y", ext(
        graph(GRAY_ALPH, {"g": "g", "u": "w", "y": "Y"},
              {("g", "e", "u"), ("u", "e", "y")}),
        CI("w", "e", "e", "g", "in")))
    q4 = Production("Y", ext(
        graph(GRAY_ALPH, {"g": "g"}),
        CI("w", "e", "e", "g", "in")))
    return q3, q4


def gray_tails_besg():
    """The worked host: complete string graphs whose output wires continue
    into gray line graphs of arbitrary length."""
    from besg.esg import validate_besg
    q0 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X", "t": "w", "y": "Y"},
              {("v", "e", "o"), ("v", "E", "x"), ("o", "e", "t"), ("t", "e", "y")})))
    q1 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "x": "X", "t": "w", "y": "Y"},
              {("v", "e", "o"), ("v", "E", "x"), ("o", "e", "t"), ("t", "e", "y")}),
        CI("n", "E", "E", "v", "in"),
        CI("n", "E", "E", "x", "in")))
    q2 = Production("X", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "t": "w", "y": "Y"},
              {("v", "e", "o"), ("o", "e", "t"), ("t", "e", "y")}),
        CI("n", "E", "E", "v", "in")))
    q3, q4 = _gray_tail_productions()
    q5 = Production("S", ext(
        graph(GRAY_ALPH, {"v": "n", "o": "w", "t": "w", "y": "Y"},
              {("v", "e", "o"), ("o", "e", "t"), ("t", "e", "y")})))
    grammar = EdnceGrammar(GRAY_ALPH, [q0, q1, q2, q3, q4, q5], "S")
    return validate_besg(grammar, gray_decoding())


def two_region_host_besg():
    """A host whose initial production spawns two independent matched
    regions, with an alternative spawning none (for disjoint-replay tests).

    Production indices: 0 = two regions, 1 = gray node only, 2.. = the
    gray-tails productions shifted by two.
    """
    from besg.esg import validate_besg
    t0 = Production("T", ext(graph(GRAY_ALPH, {"a": "S", "b": "S"})),
                    nt_order=("a", "b"))
    t1 = Production("T", ext(graph(GRAY_ALPH, {"c": "g", "o": "w"},
                                   {("c", "e", "o")})))
    base = gray_tails_besg().grammar
    grammar = EdnceGrammar(GRAY_ALPH, [t0, t1] + list(base.productions), "T")
    return validate_besg(grammar, gray_decoding())


def wire_pair_besg():
    """Tiny family: a node with one outgoing wire, and one with an incoming
    wire (two members, used for mono enumeration)."""
    from besg.esg import validate_besg
    p_out = Production("S", ext(graph(ALPH, {"a": "n", "t": "w"}, {("a", "e", "t")})))
    p_in = Production("S", ext(graph(ALPH, {"a": "n", "t": "w"}, {("t", "e", "a")})))
    grammar = EdnceGrammar(ALPH, [p_out, p_in], "S")
    return validate_besg(grammar, sk_decoding())


def unitality_fixture():
    """The monoid-unit rule and its host, shared with the DPO tests."""
    from .test_dpo import unitality_host, unitality_rule
    return unitality_rule(), unitality_host()


def skmn_bang_fixture():
    from besg.bang import validate_bang_graph
    g = graph(ALPH, {"a": "n", "t": "w", "b": "n"},
              {("a", "e", "t"), ("t", "e", "b")})
    return validate_bang_graph(g, {"b1": ["a", "t"], "b2": ["t", "b"]})


def write_fixture_files(directory):
    """Write the shared corpus as canonical JSON files; returns name->path."""
    import pathlib

    from besg import jsonio
    from besg.dpo import validate_string_rewrite_rule
    from besg.ednce import tree

    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rule, host = unitality_fixture()
    objects = {
        "sk3.graph": sk_n(3),
        "sk4.graph": sk_n(4),
        "sk12.graph": sk_mn(1, 2),
        "skn.besg": skn_besg(),
        "skmn.besg": skmn_besg(),
        "unitality.rule": validate_string_rewrite_rule(rule),
        "unitality-host.graph": host,
        "graytails.besg": gray_tails_besg(),
        "complete-star.grammar_rule": complete_star_rule(),
        "skmn.bang": skmn_bang_fixture(),
        "spine.tree": tree(0, tree(1, tree(2, tree(4)), tree(4)), tree(4)),
    }
    paths = {}
    for name, obj in objects.items():
        path = directory / f"{name}.json"
        jsonio.write_file(str(path), obj)
        paths[name] = str(path)
    empty = directory / "empty.graph.json"
    empty.write_text(jsonio.canonical_json(
        jsonio.graph_to_data(graph(ALPH, {}))))
    paths["empty.graph"] = str(empty)
    return paths

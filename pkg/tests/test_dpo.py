import pytest

from besg import core, iso
from besg.core import Graph
from besg.dpo import (
    GraphMorphism,
    dpo_rewrite,
    find_monomorphisms,
    find_string_matchings,
    make_rule,
    pushout,
    pushout_complement,
    rewrite_string_graph,
    validate_string_rewrite_rule,
)
from besg.errors import (
    DanglingEdgeError,
    InterfaceNotBoundaryError,
    IsolatedWireVertexInSideError,
    NoMatchError,
    ParEdgesViolationError,
)

from .fixtures import ALPH, MONOID, PLAIN, graph, sk_n
from .oracles import brute_monomorphisms, brute_pushout, exhaustive_pushout_complements


def morphism(src, tgt, **mapping):
    return GraphMorphism(src, tgt, mapping)


class TestFindMonomorphisms:
    def test_counting_single_vertex(self):
        pattern = graph(PLAIN, {"p": "a"})
        host = graph(PLAIN, {"u": "a", "v": "a", "w": "a", "z": "b"})
        assert len(find_monomorphisms(pattern, host)) == 3

    def test_identity_included(self):
        g = graph(PLAIN, {"u": "a", "v": "b"}, {("u", "x", "v")})
        monos = find_monomorphisms(g, g)
        assert {"u": "u", "v": "v"} in [m.vertex_map for m in monos]

    def test_edge_pattern_into_sk3_digraph(self):
        # underlying digraph of SK_3: forget the node/wire distinction
        sk3 = sk_n(3)
        host = graph(PLAIN, {v: "a" for v in sk3.vertex_ids},
                     {(s, "x", t) for s, _, t in sk3.edges})
        pattern = graph(PLAIN, {"p": "a", "q": "a"}, {("p", "x", "q")})
        monos = find_monomorphisms(pattern, host)
        expected = brute_monomorphisms(pattern, host)
        assert len(monos) == len(expected) == 6

    def test_deterministic_order(self):
        pattern = graph(PLAIN, {"p": "a"})
        host = graph(PLAIN, {"u": "a", "v": "a"})
        assert [m.vertex_map["p"] for m in find_monomorphisms(pattern, host)] == ["u", "v"]

    def test_matches_brute_force_on_small_instances(self):
        pattern = graph(PLAIN, {"p": "a", "q": "b", "r": "a"},
                        {("p", "x", "q"), ("q", "y", "r")})
        host = graph(PLAIN,
                     {"1": "a", "2": "b", "3": "a", "4": "b", "5": "a", "6": "c"},
                     {("1", "x", "2"), ("2", "y", "3"), ("3", "x", "4"),
                      ("4", "y", "5"), ("5", "z", "6"), ("1", "x", "4")})
        got = sorted(tuple(sorted(m.vertex_map.items())) for m in find_monomorphisms(pattern, host))
        want = sorted(tuple(sorted(m.items())) for m in brute_monomorphisms(pattern, host))
        assert got == want


class TestPushoutComplement:
    def _example(self, extra_edges=()):
        # rule deletes v3 with its incident edge and reverses another edge
        I = graph(PLAIN, {"v1": "a", "v2": "a"})
        L = graph(PLAIN, {"v1": "a", "v2": "a", "v3": "b"},
                  {("v2", "x", "v3"), ("v1", "y", "v2")})
        H = graph(PLAIN, {"v1": "a", "v2": "a", "v3": "b", "v4": "c"},
                  {("v2", "x", "v3"), ("v1", "y", "v2"), ("v4", "z", "v1"),
                   *extra_edges})
        l = morphism(I, L, v1="v1", v2="v2")
        m = morphism(L, H, v1="v1", v2="v2", v3="v3")
        return I, L, H, l, m

    def test_identity_interface(self):
        H = graph(PLAIN, {"u": "a", "v": "b"}, {("u", "x", "v")})
        ident = GraphMorphism.identity(H)
        K, k, s = pushout_complement(ident, ident)
        assert iso.is_isomorphic(K, H)

    def test_delete_vertex_and_edge(self):
        I, L, H, l, m = self._example()
        K, k, s = pushout_complement(l, m)
        # both L-edges are outside the interface image, so both are removed
        want = graph(PLAIN, {"v1": "a", "v2": "a", "v4": "c"},
                     {("v4", "z", "v1")})
        assert iso.is_isomorphic(K, want)

    def test_full_dpo_reverses_edge(self):
        I, L, H, l, m = self._example()
        R = graph(PLAIN, {"v1": "a", "v2": "a"}, {("v2", "y", "v1")})
        rule = make_rule(L, I, R, l.vertex_map, {"v1": "v1", "v2": "v2"})
        result = dpo_rewrite(H, rule, m)
        want = graph(PLAIN, {"v1": "a", "v2": "a", "v4": "c"},
                     {("v2", "y", "v1"), ("v4", "z", "v1")})
        assert iso.is_isomorphic(result.result, want)

    def test_dangling_edge_rejected(self):
        I, L, H, l, m = self._example(extra_edges=[("v3", "z", "v4")])
        with pytest.raises(DanglingEdgeError):
            pushout_complement(l, m)

    def test_formula_equals_exhaustive_search(self):
        I, L, H, l, m = self._example()
        K, _, _ = pushout_complement(l, m)
        found = exhaustive_pushout_complements(I, L, H, l.vertex_map, m.vertex_map)
        assert found and all(iso.is_isomorphic(K, other) for other in found)


class TestPushout:
    def test_r_equals_i(self):
        I = graph(PLAIN, {"v": "a"})
        K = graph(PLAIN, {"v": "a", "u": "b"}, {("v", "x", "u")})
        k = morphism(I, K, v="v")
        r = GraphMorphism.identity(I)
        M, f, g = pushout(k, r)
        assert iso.is_isomorphic(M, K)

    def test_glue_two_edges_into_path(self):
        I = graph(PLAIN, {"v": "a"})
        K = graph(PLAIN, {"u": "b", "v": "a"}, {("u", "x", "v")})
        R = graph(PLAIN, {"v": "a", "w": "b"}, {("v", "x", "w")})
        M, f, g = pushout(morphism(I, K, v="v"), morphism(I, R, v="v"))
        labels, edges = brute_pushout(I, K, R, {"v": "v"}, {"v": "v"})
        assert len(M) == len(labels) == 3
        assert len(M.edges) == len(edges) == 2
        want = graph(PLAIN, {"1": "b", "2": "a", "3": "b"},
                     {("1", "x", "2"), ("2", "x", "3")})
        assert iso.is_isomorphic(M, want)

    def test_par_edges_violation(self):
        I = graph(PLAIN, {"v": "a", "w": "b"})
        K = graph(PLAIN, {"v": "a", "w": "b"}, {("v", "x", "w")})
        R = graph(PLAIN, {"v": "a", "w": "b"}, {("v", "x", "w")})
        with pytest.raises(ParEdgesViolationError):
            pushout(morphism(I, K, v="v", w="w"), morphism(I, R, v="v", w="w"))


def unitality_rule(long_unit_wire=False):
    """The monoid-unit absorption rule: (unit -> m) rewrites to a plain wire."""
    lv = {"u": "u", "m": "m", "a": "w", "i": "w", "o": "w"}
    le = {("u", "e", "a"), ("a", "e", "m"), ("i", "e", "m"), ("m", "e", "o")}
    L = Graph(MONOID, lv, le)
    if long_unit_wire:
        L = core.elongate_edge(L, ("i", "e", "m"), "i2")
    R = graph(MONOID, {"i": "w", "o": "w"}, {("i", "e", "o")})
    I = graph(MONOID, {"i": "w", "o": "w"})
    return make_rule(L, I, R, {"i": "i", "o": "o"}, {"i": "i", "o": "o"})


def unitality_host():
    vertices = {"f": "f", "g": "g", "m": "m", "u": "u",
                "iw": "w", "a1": "w", "a2": "w", "a3": "w", "ow": "w"}
    edges = {("iw", "e", "f"), ("f", "e", "a1"), ("a1", "e", "m"),
             ("u", "e", "a2"), ("a2", "e", "m"),
             ("m", "e", "a3"), ("a3", "e", "g"), ("g", "e", "ow")}
    return Graph(MONOID, vertices, edges)


class TestStringRules:
    def test_unitality_valid(self):
        rule = validate_string_rewrite_rule(unitality_rule())
        assert rule.string_rule
        assert rule.input_bijection == {"i": "i"}
        assert rule.output_bijection == {"o": "o"}

    def test_interface_with_node_vertex(self):
        L = graph(MONOID, {"v": "m", "o": "w"}, {("v", "e", "o")})
        I = graph(MONOID, {"v": "m", "o": "w"})
        with pytest.raises(InterfaceNotBoundaryError):
            validate_string_rewrite_rule(
                make_rule(L, I, L, {"v": "v", "o": "o"}, {"v": "v", "o": "o"}))

    def test_isolated_wire_vertex_in_lhs(self):
        L = graph(MONOID, {"x": "w"})
        I = graph(MONOID, {"x": "w"})
        with pytest.raises(IsolatedWireVertexInSideError):
            validate_string_rewrite_rule(make_rule(L, I, L, {"x": "x"}, {"x": "x"}))


class TestStringRewriting:
    def test_unitality_rewrite(self):
        result, rewritten = rewrite_string_graph(unitality_host(), unitality_rule())
        want = Graph(MONOID,
                     {"f": "f", "g": "g", "iw": "w", "a1": "w", "a3": "w", "ow": "w"},
                     {("iw", "e", "f"), ("f", "e", "a1"), ("a1", "e", "a3"),
                      ("a3", "e", "g"), ("g", "e", "ow")})
        assert core.wire_homeomorphic(rewritten, want) is not None

    def test_identity_rule(self):
        host = sk_n(2)
        I = graph(ALPH, {"p": "w"})
        rule = make_rule(I, I, I, {"p": "p"}, {"p": "p"})
        # all-interface rules are not string rules (isolated wire-vertices in
        # L), but plain DPO still applies and leaves the host unchanged
        m = morphism(I, host, p="w1_2")
        result = dpo_rewrite(host, rule, m)
        assert iso.is_isomorphic(result.result, host)

    def test_match_needs_elongation(self):
        rule = unitality_rule(long_unit_wire=True)
        host = unitality_host()
        validated = validate_string_rewrite_rule(rule)
        # no matching on the host itself: the input wire of L is too long
        plain = [m for m in find_string_matchings(validated, host) if m.growth == (0,) * 5]
        assert not plain
        matchings = find_string_matchings(validated, host)
        assert matchings
        result, rewritten = rewrite_string_graph(host, rule)
        assert core.wire_homeomorphic(
            rewritten,
            Graph(MONOID,
                  {"f": "f", "g": "g", "iw": "w", "a1": "w", "a3": "w", "ow": "w"},
                  {("iw", "e", "f"), ("f", "e", "a1"), ("a1", "e", "a3"),
                   ("a3", "e", "g"), ("g", "e", "ow")})) is not None

    def test_no_match(self):
        host = graph(MONOID, {"x": "w"})
        with pytest.raises(NoMatchError):
            rewrite_string_graph(host, unitality_rule())

    def test_rewrite_then_reverse_restores(self):
        rule = validate_string_rewrite_rule(unitality_rule())
        host = unitality_host()
        result, rewritten = rewrite_string_graph(host, rule)
        back = dpo_rewrite(rewritten, rule.reversed(), result.f)
        assert iso.is_isomorphic(back.result, result.host)

    def test_output_always_string(self):
        rule = unitality_rule()
        for matching in find_string_matchings(validate_string_rewrite_rule(rule),
                                              unitality_host())[:8]:
            result = dpo_rewrite(matching.host_variant,
                                 validate_string_rewrite_rule(rule),
                                 matching.morphism)
            assert core.classify(result.result).kind == core.STRING


class TestComplementUniqueness:
    def test_exhaustive_small_instances(self):
        """Formula output is the unique complement on a family of small
        rule/host pairs (pattern <= 3 vertices, hosts <= 5)."""
        cases = []
        I0 = graph(PLAIN, {"i": "a"})
        L0 = graph(PLAIN, {"i": "a", "d": "b"}, {("i", "x", "d")})
        H0 = graph(PLAIN, {"1": "a", "2": "b", "3": "c"},
                   {("1", "x", "2"), ("3", "z", "1")})
        cases.append((I0, L0, H0, {"i": "i"}, {"i": "1", "d": "2"}))
        I1 = graph(PLAIN, {"i": "a", "j": "b"})
        L1 = graph(PLAIN, {"i": "a", "j": "b", "d": "c"},
                   {("i", "x", "d"), ("d", "y", "j")})
        H1 = graph(PLAIN, {"1": "a", "2": "b", "3": "c", "4": "a", "5": "b"},
                   {("1", "x", "3"), ("3", "y", "2"), ("4", "z", "5"),
                    ("1", "y", "5")})
        cases.append((I1, L1, H1, {"i": "i", "j": "j"}, {"i": "1", "j": "2", "d": "3"}))
        for I, L, H, l_map, m_map in cases:
            K, _, _ = pushout_complement(GraphMorphism(I, L, l_map),
                                         GraphMorphism(L, H, m_map))
            found = exhaustive_pushout_complements(I, L, H, l_map, m_map)
            assert found
            for other in found:
                assert iso.is_isomorphic(K, other)

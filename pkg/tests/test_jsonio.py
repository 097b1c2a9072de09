import json

from besg import iso, jsonio
from besg.ednce import tree

from .fixtures import (
    complete_star_rule,
    gray_tails_besg,
    sk_n,
    skmn_bang_fixture,
    skn_besg,
    unitality_fixture,
)
from .test_rewriting import grammar_isomorphic


def reload(obj):
    kind, loaded = jsonio.load_object(json.loads(jsonio.canonical_json(
        jsonio.dump_object(obj))))
    return loaded


class TestRoundTrips:
    def test_graph(self):
        g = sk_n(3)
        assert iso.is_isomorphic(reload(g), g)

    def test_grammar(self):
        g = skn_besg().grammar
        assert grammar_isomorphic(reload(g), g)

    def test_besg(self):
        b = skn_besg()
        again = reload(b)
        assert grammar_isomorphic(again.grammar, b.grammar)
        assert len(again.decoding) == len(b.decoding)

    def test_rule(self):
        from besg.dpo import validate_string_rewrite_rule

        rule, _ = unitality_fixture()
        rule = validate_string_rewrite_rule(rule)
        again = reload(rule)
        assert iso.is_isomorphic(again.L, rule.L)
        assert iso.is_isomorphic(again.R, rule.R)
        assert again.string_rule

    def test_grammar_rule(self):
        rule = complete_star_rule()
        again = reload(rule)
        assert grammar_isomorphic(again.L, rule.L)
        assert grammar_isomorphic(again.I, rule.I)
        assert grammar_isomorphic(again.R, rule.R)

    def test_bang(self):
        bg = skmn_bang_fixture()
        again = reload(bg)
        assert iso.is_isomorphic(again.graph, bg.graph)
        assert again.boxes == bg.boxes

    def test_tree_and_script(self):
        t = tree(0, tree(1, tree(2, tree(4)), tree(4)), tree(4))
        assert reload(t) == t
        steps = [("n0", 0), ("n2", 1)]
        data = jsonio.script_to_data(steps)
        assert jsonio.script_from_data(json.loads(jsonio.canonical_json(data))) == steps

    def test_canonical_bytes_stable(self):
        b = gray_tails_besg()
        once = jsonio.canonical_json(jsonio.besg_to_data(b))
        again = jsonio.canonical_json(jsonio.besg_to_data(reload(b)))
        assert once == again

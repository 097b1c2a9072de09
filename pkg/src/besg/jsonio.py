"""JSON wire formats for every object kind, with canonical serialization.

Canonical form sorts object keys and all vertex/edge lists, so equal objects
serialize to identical bytes; golden tests and the studio's replay check
depend on that.  Every file is self-contained: the label alphabets ride
along with the object.
"""

from __future__ import annotations

import json
from typing import Any

from . import bang as bang_mod
from . import dpo, esg, rewriting
from .core import Graph, LabelAlphabets
from .ednce import CI, EdnceGrammar, ExtendedGraph, Production, TreeNode
from .errors import BadGrammarError


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


# --- alphabets -----------------------------------------------------------------------


def alphabets_to_data(a: LabelAlphabets) -> dict:
    return {
        "vertex_labels": sorted(a.vertex_labels),
        "terminal_labels": sorted(a.terminal_labels),
        "node_labels": sorted(a.node_labels),
        "edge_labels": sorted(a.edge_labels),
        "encoding_labels": sorted(a.encoding_labels),
    }


def alphabets_from_data(data: dict) -> LabelAlphabets:
    return LabelAlphabets.make(
        data["vertex_labels"], data["terminal_labels"], data["node_labels"],
        data["edge_labels"], data.get("encoding_labels", ()))


# --- graphs --------------------------------------------------------------------------


def _graph_body(g: Graph) -> dict:
    return {
        "vertices": [{"id": v, "label": g.label(v)} for v in g.vertex_ids],
        "edges": [list(e) for e in sorted(g.edges)],
    }


def graph_to_data(g: Graph) -> dict:
    data = {"kind": "graph", "alphabets": alphabets_to_data(g.alphabets)}
    data.update(_graph_body(g))
    return data


def _graph_from_body(data: dict, alphabets: LabelAlphabets) -> Graph:
    from .core import validate_graph

    vertices = [(v["id"], v["label"]) for v in data.get("vertices", [])]
    edges = [tuple(e) for e in data.get("edges", [])]
    return validate_graph(vertices, edges, alphabets)


def graph_from_data(data: dict, alphabets: LabelAlphabets = None) -> Graph:
    alphabets = alphabets or alphabets_from_data(data["alphabets"])
    return _graph_from_body(data, alphabets)


# --- grammars ------------------------------------------------------------------------


def _production_to_data(p: Production) -> dict:
    return {
        "label": p.lhs,
        "graph": _graph_body(p.body.graph),
        "connections": sorted([c.sigma, c.match, c.relabel, c.vertex, c.direction]
                              for c in p.body.connections),
        "nt_order": list(p.nt_order),
    }


def _production_from_data(data: dict, alphabets: LabelAlphabets) -> Production:
    body = ExtendedGraph(
        _graph_from_body(data["graph"], alphabets),
        (CI(*c) for c in data.get("connections", [])))
    return Production(data["label"], body, tuple(data.get("nt_order", ())))


def _grammar_body(g: EdnceGrammar) -> dict:
    return {
        "initial": g.initial,
        "productions": [_production_to_data(p) for p in g.productions],
    }


def grammar_to_data(g: EdnceGrammar) -> dict:
    data = {"kind": "grammar", "alphabets": alphabets_to_data(g.alphabets)}
    data.update(_grammar_body(g))
    return data


def _grammar_from_body(data: dict, alphabets: LabelAlphabets) -> EdnceGrammar:
    if "omega" in data and set(data["omega"]) != set(alphabets.edge_labels):
        from .errors import NonFinalEdgesError
        raise NonFinalEdgesError(
            "grammars with non-final edge labels are not accepted",
            sorted(set(alphabets.edge_labels) - set(data["omega"])))
    productions = [_production_from_data(p, alphabets)
                   for p in data.get("productions", [])]
    return EdnceGrammar(alphabets, productions, data["initial"])


def grammar_from_data(data: dict, alphabets: LabelAlphabets = None) -> EdnceGrammar:
    alphabets = alphabets or alphabets_from_data(data["alphabets"])
    return _grammar_from_body(data, alphabets)


# --- decoding systems ----------------------------------------------------------------


def _decoding_body(d: esg.DecodingSystem) -> dict:
    rules = []
    for key in sorted(d.rules):
        rule = d.rules[key]
        rules.append({
            "edge": rule.edge_label,
            "src": rule.src_label,
            "tgt": rule.tgt_label,
            "replacement": _graph_body(rule.replacement),
            "anchors": list(rule.anchors),
        })
    return {"rules": rules}


def decoding_to_data(d: esg.DecodingSystem) -> dict:
    data = {"kind": "decoding", "alphabets": alphabets_to_data(d.alphabets)}
    data.update(_decoding_body(d))
    return data


def _decoding_from_body(data: dict, alphabets: LabelAlphabets) -> esg.DecodingSystem:
    rules = [esg.DecodingRule(r["edge"], r["src"], r["tgt"],
                              _graph_from_body(r["replacement"], alphabets),
                              tuple(r["anchors"]))
             for r in data.get("rules", [])]
    return esg.DecodingSystem(alphabets, rules)


def decoding_from_data(data: dict, alphabets: LabelAlphabets = None) -> esg.DecodingSystem:
    alphabets = alphabets or alphabets_from_data(data["alphabets"])
    return _decoding_from_body(data, alphabets)


# --- B-ESG bundles -------------------------------------------------------------------


def besg_to_data(b: esg.BesgGrammar) -> dict:
    return {
        "kind": "besg",
        "alphabets": alphabets_to_data(b.alphabets),
        "grammar": _grammar_body(b.grammar),
        "decoding": _decoding_body(b.decoding),
    }


def besg_from_data(data: dict) -> esg.BesgGrammar:
    alphabets = alphabets_from_data(data["alphabets"])
    grammar = _grammar_from_body(data["grammar"], alphabets)
    decoding = _decoding_from_body(data["decoding"], alphabets)
    return esg.validate_besg(grammar, decoding)


# --- string-graph rewrite rules ------------------------------------------------------


def rule_to_data(rule: dpo.GraphRewriteRule) -> dict:
    return {
        "kind": "rule",
        "alphabets": alphabets_to_data(rule.L.alphabets),
        "L": _graph_body(rule.L),
        "I": _graph_body(rule.I),
        "R": _graph_body(rule.R),
        "l": dict(sorted(rule.l.vertex_map.items())),
        "r": dict(sorted(rule.r.vertex_map.items())),
    }


def rule_from_data(data: dict) -> dpo.GraphRewriteRule:
    alphabets = alphabets_from_data(data["alphabets"])
    L = _graph_from_body(data["L"], alphabets)
    I = _graph_from_body(data["I"], alphabets)
    R = _graph_from_body(data["R"], alphabets)
    made = dpo.make_rule(L, I, R, data["l"], data["r"])
    return dpo.validate_string_rewrite_rule(made)


# --- grammar-level rewrite rules -----------------------------------------------------


def grammar_rule_to_data(rule: rewriting.BesgRewriteRule) -> dict:
    p = rule.pattern
    return {
        "kind": "grammar_rule",
        "alphabets": alphabets_to_data(p.L.alphabets),
        "decoding": _decoding_body(rule.decoding),
        "L": _grammar_body(p.L),
        "I": _grammar_body(p.I),
        "R": _grammar_body(p.R),
        "l": {"productions": list(p.l.production_map),
              "vertex_maps": [dict(sorted(vm.items())) for vm in p.l.vertex_maps]},
        "r": {"productions": list(p.r.production_map),
              "vertex_maps": [dict(sorted(vm.items())) for vm in p.r.vertex_maps]},
    }


def grammar_rule_from_data(data: dict) -> rewriting.BesgRewriteRule:
    alphabets = alphabets_from_data(data["alphabets"])
    L = _grammar_from_body(data["L"], alphabets)
    I = _grammar_from_body(data["I"], alphabets)
    R = _grammar_from_body(data["R"], alphabets)
    decoding = _decoding_from_body(data["decoding"], alphabets)
    l = rewriting.GrammarMorphism(I, L, tuple(data["l"]["productions"]),
                                  tuple(data["l"]["vertex_maps"]))
    r = rewriting.GrammarMorphism(I, R, tuple(data["r"]["productions"]),
                                  tuple(data["r"]["vertex_maps"]))
    return rewriting.validate_rule(L, I, R, l, r, decoding)


# --- bang graphs ---------------------------------------------------------------------


def bang_to_data(bg: bang_mod.BangGraph) -> dict:
    return {
        "kind": "bang",
        "alphabets": alphabets_to_data(bg.graph.alphabets),
        "graph": _graph_body(bg.graph),
        "boxes": [{"bang_vertex": b, "contents": sorted(bg.boxes[b])}
                  for b in bg.box_ids()],
    }


def bang_from_data(data: dict) -> bang_mod.BangGraph:
    alphabets = alphabets_from_data(data["alphabets"])
    graph = _graph_from_body(data["graph"], alphabets)
    boxes = {b["bang_vertex"]: b["contents"] for b in data.get("boxes", [])}
    return bang_mod.validate_bang_graph(graph, boxes)


# --- scripts and trees ---------------------------------------------------------------


def script_to_data(steps) -> dict:
    return {"kind": "script", "steps": [[v, p] for v, p in steps]}


def script_from_data(data: dict) -> list[tuple[str, int]]:
    return [(v, int(p)) for v, p in data.get("steps", [])]


def tree_to_data(root: TreeNode) -> dict:
    def node(n):
        return None if n is None else {
            "production": n.production,
            "children": [node(c) for c in n.children]}

    return {"kind": "tree", "root": node(root)}


def tree_from_data(data: dict) -> TreeNode:
    def node(d):
        if d is None:
            return None
        return TreeNode(int(d["production"]),
                        tuple(node(c) for c in d.get("children", [])))

    return node(data["root"])


# --- kind dispatch ------------------------------------------------------------------

LOADERS = {
    "graph": graph_from_data,
    "grammar": grammar_from_data,
    "decoding": decoding_from_data,
    "besg": besg_from_data,
    "rule": rule_from_data,
    "grammar_rule": grammar_rule_from_data,
    "bang": bang_from_data,
    "script": script_from_data,
    "tree": tree_from_data,
}


def load_object(data: dict):
    kind = data.get("kind")
    if kind not in LOADERS:
        raise BadGrammarError("unknown or missing object kind", kind)
    return kind, LOADERS[kind](data)


def dump_object(obj) -> dict:
    if isinstance(obj, Graph):
        return graph_to_data(obj)
    if isinstance(obj, EdnceGrammar):
        return grammar_to_data(obj)
    if isinstance(obj, esg.DecodingSystem):
        return decoding_to_data(obj)
    if isinstance(obj, esg.BesgGrammar):
        return besg_to_data(obj)
    if isinstance(obj, dpo.GraphRewriteRule):
        return rule_to_data(obj)
    if isinstance(obj, rewriting.BesgRewriteRule):
        return grammar_rule_to_data(obj)
    if isinstance(obj, bang_mod.BangGraph):
        return bang_to_data(obj)
    if isinstance(obj, TreeNode):
        return tree_to_data(obj)
    raise BadGrammarError("cannot serialize object", type(obj).__name__)


def read_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_object(json.load(fh))


def write_file(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(dump_object(obj)))

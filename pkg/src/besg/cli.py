"""Command-line entry point.

Subcommands mirror the engine's operations one-to-one; all outputs are
canonical JSON (or a short summary with ``--format summary``).  Exit codes:
0 success, 1 a sound negative decision (non-member, no match), 2 input
validation failure, 3 an internal assertion — the engine caught itself
violating one of its own guarantees.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bang as bang_mod
from . import core, dpo, esg, jsonio, rewriting
from .core import WSize
from .ednce import derive as run_script
from .ednce import tree_from_script
from .errors import BesgError, DecisionNegative, InternalAssertion, ValidationError

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _budget(args) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("BESG_BUDGET")
    return int(env) if env else None


def emit(args, payload: dict, summary: str) -> None:
    if args.format == "summary":
        print(summary)
    else:
        sys.stdout.write(jsonio.canonical_json(payload))


def _read(path: str, expect: str = None):
    kind, obj = jsonio.read_file(path)
    if expect is not None and kind != expect:
        raise ValidationError(f"{path} holds a {kind}, expected {expect}")
    return obj


def _read_besg(path: str) -> esg.BesgGrammar:
    return _read(path, "besg")


def cmd_validate(args) -> int:
    targets = [("graph", args.graph), ("grammar", args.grammar),
               ("besg", args.besg), ("bang", args.bang), ("rule", args.rule),
               ("grammar_rule", args.grammar_rule)]
    chosen = [(kind, path) for kind, path in targets if path]
    if not chosen:
        raise ValidationError("nothing to validate: pass one of the object flags")
    reports = []
    for kind, path in chosen:
        obj = _read(path, kind)
        entry = {"path": path, "kind": kind, "valid": True}
        if kind == "graph":
            report = core.classify(obj)
            entry["classification"] = report.kind
            entry["violations"] = report.violations
        reports.append(entry)
    emit(args, {"validated": reports},
         "; ".join(f"{r['path']}: ok ({r.get('classification', r['kind'])})"
                   for r in reports))
    return EXIT_OK


def cmd_derive(args) -> int:
    obj = jsonio.read_file(args.grammar)
    kind, loaded = obj
    grammar = loaded.grammar if kind == "besg" else loaded
    script = _read(args.script, "script")
    form = run_script(grammar, script)
    graph = form.graph
    payload = {"sentential": jsonio.graph_to_data(graph),
               "terminal": not graph.nonterminal_vertices()}
    if args.decode:
        if kind != "besg":
            raise ValidationError("--decode needs a besg bundle")
        decoded = esg.decode(graph, loaded.decoding)
        payload["decoded"] = jsonio.graph_to_data(decoded)
    emit(args, payload,
         f"derived {len(graph)} vertices, terminal={payload['terminal']}")
    return EXIT_OK


def cmd_decode(args) -> int:
    graph = _read(args.graph, "graph")
    if args.besg:
        system = _read_besg(args.besg).decoding
    elif args.decoding:
        system = _read(args.decoding, "decoding")
    else:
        if esg.encoding_edges(graph):
            raise ValidationError(
                "graph has encoding edges: pass --besg or --decoding")
        system = esg.DecodingSystem(graph.alphabets, [])
    decoded = esg.decode(graph, system)
    emit(args, jsonio.graph_to_data(decoded), f"decoded to {len(decoded)} vertices")
    return EXIT_OK


def cmd_member(args) -> int:
    bundle = _read_besg(args.grammar)
    graph = _read(args.graph, "graph")
    result = esg.decide_membership(bundle, graph, vertex_budget=_budget(args))
    payload = {
        "member": result.member,
        "finite_within_bound": result.finite_within_bound,
        "witnesses": [{"script": jsonio.script_to_data(w.script),
                       "decoded": jsonio.graph_to_data(w.decoded)}
                      for w in result.witnesses],
    }
    emit(args, payload,
         f"member={result.member} with {len(result.witnesses)} witness(es)")
    return EXIT_OK if result.member else EXIT_NEGATIVE


def cmd_monos(args) -> int:
    bundle = _read_besg(args.besg)
    graph = _read(args.graph, "graph")
    witnesses = esg.enumerate_monos(bundle, graph, vertex_budget=_budget(args))
    payload = {"count": len(witnesses),
               "embeddings": [{"script": jsonio.script_to_data(w.script),
                               "member": jsonio.graph_to_data(w.decoded),
                               "vertex_map": dict(sorted(
                                   w.morphism.vertex_map.items())),
                               "host_variant": jsonio.graph_to_data(w.host_variant)}
                              for w in witnesses]}
    emit(args, payload, f"{len(witnesses)} embedding(s)")
    return EXIT_OK if witnesses else EXIT_NEGATIVE


def cmd_rewrite_graph(args) -> int:
    host = _read(args.host, "graph")
    rule = _read(args.rule, "rule")
    matchings = dpo.find_string_matchings(rule, host)
    if not matchings:
        emit(args, {"matchings": 0}, "no matching")
        return EXIT_NEGATIVE
    index = args.match
    result = dpo.dpo_rewrite(matchings[index].host_variant, rule,
                             matchings[index].morphism)
    payload = {"matchings": len(matchings), "applied": index,
               "result": jsonio.graph_to_data(result.result)}
    emit(args, payload,
         f"{len(matchings)} matching(s); applied #{index}")
    return EXIT_OK


def cmd_rewrite_grammar(args) -> int:
    host = _read_besg(args.host)
    rule = _read(args.rule, "grammar_rule")
    matchings = rewriting.find_saturated_matchings(rule, host.grammar)
    if not matchings:
        emit(args, {"matchings": 0}, "no saturated matching")
        return EXIT_NEGATIVE
    outcome = rewriting.apply_rewrite(host, rule, matchings[args.match])
    payload = {"matchings": len(matchings), "applied": args.match,
               "result": jsonio.besg_to_data(outcome.result)}
    emit(args, payload,
         f"{len(matchings)} saturated matching(s); applied #{args.match}")
    return EXIT_OK


def cmd_instantiate(args) -> int:
    rule = _read(args.rule, "grammar_rule")
    if args.script:
        script = _read(args.script, "script")
        concrete = rewriting.instantiate_rule(rule, script)
    else:
        concrete = rewriting.instantiate_rule_of_length(rule, args.length)
    emit(args, jsonio.rule_to_data(concrete),
         f"instantiated rule with |L|={len(concrete.L)}, |R|={len(concrete.R)}")
    return EXIT_OK


def cmd_certify(args) -> int:
    host = _read_besg(args.host)
    rule = _read(args.rule, "grammar_rule")
    matchings = rewriting.find_saturated_matchings(rule, host.grammar)
    if not matchings:
        emit(args, {"matchings": 0}, "no saturated matching")
        return EXIT_NEGATIVE
    outcome = rewriting.apply_rewrite(host, rule, matchings[args.match])
    if args.tree:
        tree = _read(args.tree, "tree")
    else:
        script = _read(args.script, "script")
        tree = tree_from_script(host.grammar, script)
    certificate = rewriting.certify_admissibility(outcome, tree)
    payload = {
        "verified": certificate.verified,
        "tree": jsonio.tree_to_data(tree),
        "host_instance": jsonio.graph_to_data(certificate.host_graph),
        "result_instance": jsonio.graph_to_data(certificate.result_graph),
        "result_grammar": jsonio.besg_to_data(outcome.result),
        "replays": [{
            "paths": [list(p) for p in replay.paths],
            "script": jsonio.script_to_data(replay.script),
            "rule": jsonio.rule_to_data(replay.rule),
            "match": dict(sorted(replay.match.items())),
        } for replay in certificate.replays],
        "transcript": certificate.transcript,
    }
    emit(args, payload,
         f"verified={certificate.verified} with {len(certificate.replays)} "
         f"concrete rewrite(s)")
    return EXIT_OK


def cmd_convert_bang(args) -> int:
    bg = _read(args.bang, "bang")
    conversion = bang_mod.bang_to_grammar(bg)
    payload = jsonio.besg_to_data(conversion.besg)
    payload["encoded"] = conversion.encoded
    emit(args, payload,
         f"converted to {len(conversion.grammar.productions)} productions "
         f"(encoded={conversion.encoded})")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    bundle = _read_besg(args.besg)
    max_wsize = None
    if args.wsize:
        n, w, i = (int(x) for x in args.wsize.split(","))
        max_wsize = WSize(n, w, i)
    members = esg.enumerate_language(bundle, max_nodes=args.bound,
                                     max_wsize=max_wsize,
                                     vertex_budget=_budget(args))
    payload = {"count": len(members),
               "members": [jsonio.graph_to_data(m) for m in members]}
    emit(args, payload, f"{len(members)} member(s)")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve
    from .workspace import Workspace

    workspace = Workspace()
    for path in args.load or []:
        name = os.path.splitext(os.path.basename(path))[0]
        with open(path, "r", encoding="utf-8") as fh:
            workspace.load(name, json.load(fh))
    print(f"serving on http://127.0.0.1:{args.port}")
    serve(args.port, workspace)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besg",
        description="String-graph and B-ESG graph-grammar engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=["json", "summary"], default="json")
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kwargs)
        return p

    add("validate", cmd_validate,
        graph={"default": None}, grammar={"default": None},
        besg={"default": None}, bang={"default": None},
        rule={"default": None}, grammar_rule={"default": None})
    add("derive", cmd_derive,
        grammar={"required": True}, script={"required": True},
        decode={"action": "store_true"})
    add("decode", cmd_decode,
        graph={"required": True}, besg={"default": None},
        decoding={"default": None})
    add("member", cmd_member,
        grammar={"required": True}, graph={"required": True},
        budget={"type": int, "default": None})
    add("monos", cmd_monos,
        besg={"required": True}, graph={"required": True},
        budget={"type": int, "default": None})
    add("rewrite-graph", cmd_rewrite_graph,
        host={"required": True}, rule={"required": True},
        match={"type": int, "default": 0})
    add("rewrite-grammar", cmd_rewrite_grammar,
        host={"required": True}, rule={"required": True},
        match={"type": int, "default": 0})
    add("instantiate", cmd_instantiate,
        rule={"required": True}, length={"type": int, "default": None},
        script={"default": None})
    add("certify", cmd_certify,
        host={"required": True}, rule={"required": True},
        match={"type": int, "default": 0},
        tree={"default": None}, script={"default": None})
    add("convert-bang", cmd_convert_bang, bang={"required": True})
    add("enumerate", cmd_enumerate,
        besg={"required": True}, bound={"type": int, "default": None},
        wsize={"default": None}, budget={"type": int, "default": None})
    add("serve", cmd_serve,
        port={"type": int, "default": 8750},
        load={"nargs": "*", "default": []})
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InternalAssertion as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DecisionNegative as exc:
        print(f"negative: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (ValidationError, BesgError, FileNotFoundError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"invalid input: {exc!r}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Named object store and interactive sessions shared by serve mode.

Objects are validated at load and kept immutable; sessions hold a bounded
history of canonical snapshots so undo restores the prior state exactly.
Each session is advanced under its own lock with a version counter; a stale
apply (the session moved on since choices were fetched) is refused.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

from . import dpo, esg, jsonio, layout, rewriting
from .core import Graph
from .ednce import Derivation, EdnceGrammar
from .errors import BesgError, ValidationError

HISTORY_LIMIT = 256


class WorkspaceError(BesgError):
    pass


class StaleSessionError(BesgError):
    pass


class UnknownNameError(BesgError):
    pass


@dataclass
class StoredObject:
    name: str
    kind: str
    obj: object


class Workspace:
    def __init__(self):
        self._objects: dict[str, StoredObject] = {}
        self._sessions: dict[str, "Session"] = {}
        self._lock = threading.Lock()
        self._session_counter = 0

    # -- objects ---------------------------------------------------------

    def load(self, name: str, payload: dict) -> StoredObject:
        kind, obj = jsonio.load_object(payload)
        with self._lock:
            if name in self._objects:
                raise WorkspaceError(f"name already in use: {name}")
            stored = StoredObject(name, kind, obj)
            self._objects[name] = stored
            return stored

    def get(self, name: str, kind: Optional[str] = None) -> StoredObject:
        with self._lock:
            stored = self._objects.get(name)
        if stored is None:
            raise UnknownNameError(name)
        if kind is not None and stored.kind != kind:
            raise WorkspaceError(f"{name} is a {stored.kind}, expected {kind}")
        return stored

    def names(self) -> list[dict]:
        with self._lock:
            return [{"name": s.name, "kind": s.kind}
                    for s in self._objects.values()]

    # -- sessions ---------------------------------------------------------

    def start_session(self, spec: dict) -> "Session":
        kind = spec.get("kind", "derivation")
        if kind == "derivation":
            stored = self.get(spec["grammar"])
            if stored.kind == "besg":
                session = DerivationSession(stored.obj.grammar, stored.obj)
            elif stored.kind == "grammar":
                session = DerivationSession(stored.obj, None)
            else:
                raise WorkspaceError("derivation sessions need a grammar or besg")
        elif kind == "graph-rewrite":
            host = self.get(spec["graph"], "graph").obj
            rule = self.get(spec["rule"], "rule").obj
            session = GraphRewriteSession(host, rule)
        else:
            raise WorkspaceError(f"unknown session kind: {kind}")
        with self._lock:
            self._session_counter += 1
            session.id = f"s{self._session_counter}"
            self._sessions[session.id] = session
        return session

    def session(self, session_id: str) -> "Session":
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownNameError(session_id)
        return session


class Session:
    id: str

    def __init__(self):
        self.lock = threading.Lock()
        self.version = 0
        self.history: list[str] = []

    def _snapshot(self) -> str:
        raise NotImplementedError

    def _restore(self, snapshot: str) -> None:
        raise NotImplementedError

    def push_history(self):
        self.history.append(self._snapshot())
        if len(self.history) > HISTORY_LIMIT:
            self.history.pop(0)

    def check_version(self, version):
        if version is not None and int(version) != self.version:
            raise StaleSessionError(
                f"session moved to version {self.version}, request used {version}")

    def undo(self):
        with self.lock:
            if not self.history:
                raise WorkspaceError("nothing to undo")
            snapshot = self.history.pop()
            self._restore(snapshot)
            self.version += 1


class DerivationSession(Session):
    kind = "derivation"

    def __init__(self, grammar: EdnceGrammar, besg_bundle):
        super().__init__()
        self.grammar = grammar
        self.besg = besg_bundle
        self.derivation = Derivation(grammar)
        self.decoded: Optional[Graph] = None

    # snapshots replay the script: byte-identical states follow from the
    # deterministic fresh-id scheme
    def _snapshot(self) -> str:
        return jsonio.canonical_json(jsonio.script_to_data(self.derivation.steps))

    def _restore(self, snapshot: str) -> None:
        import json

        steps = jsonio.script_from_data(json.loads(snapshot))
        self.derivation = Derivation(self.grammar)
        for v, p in steps:
            self.derivation.apply(v, p)
        self.decoded = None

    def choices(self) -> list[dict]:
        g = self.derivation.current.graph
        return [{"index": i, "vertex": v, "production": p,
                 "label": g.label(v)}
                for i, (v, p) in enumerate(self.derivation.expandable())]

    def apply(self, choice: dict):
        with self.lock:
            self.check_version(choice.get("version"))
            options = self.derivation.expandable()
            if "index" in choice:
                vertex, production = options[int(choice["index"])]
            else:
                vertex, production = choice["vertex"], int(choice["production"])
                if (vertex, production) not in options:
                    raise ValidationError("choice is not applicable", vertex, production)
            self.push_history()
            self.derivation.apply(vertex, production)
            self.decoded = None
            self.version += 1

    def decode(self):
        with self.lock:
            if self.besg is None:
                raise WorkspaceError("session grammar has no decoding system")
            if not self.derivation.is_terminal():
                raise ValidationError("derivation is not terminal yet")
            self.decoded = esg.decode(self.derivation.current.graph,
                                      self.besg.decoding)

    def state(self) -> dict:
        g = self.derivation.current.graph
        payload = {
            "id": self.id,
            "kind": self.kind,
            "version": self.version,
            "terminal": self.derivation.is_terminal(),
            "steps": [[v, p] for v, p in self.derivation.steps],
            "graph": jsonio.graph_to_data(g),
            "render": layout.render_payload(g),
            "choices": self.choices(),
            "can_decode": self.besg is not None and self.derivation.is_terminal(),
        }
        if self.decoded is not None:
            payload["decoded"] = jsonio.graph_to_data(self.decoded)
            payload["decoded_render"] = layout.render_payload(self.decoded)
        return payload


class GraphRewriteSession(Session):
    kind = "graph-rewrite"

    def __init__(self, host: Graph, rule: dpo.GraphRewriteRule):
        super().__init__()
        self.rule = rule
        self.current = host
        self.trail: list[Graph] = []

    def _snapshot(self) -> str:
        return jsonio.canonical_json(jsonio.graph_to_data(self.current))

    def _restore(self, snapshot: str) -> None:
        import json

        self.current = jsonio.graph_from_data(json.loads(snapshot))

    def matchings(self) -> list[dpo.StringMatching]:
        return dpo.find_string_matchings(self.rule, self.current)

    def choices(self) -> list[dict]:
        out = []
        for i, m in enumerate(self.matchings()):
            out.append({
                "index": i,
                "vertex_map": dict(sorted(m.morphism.vertex_map.items())),
                "growth": list(m.growth),
                "host_variant": jsonio.graph_to_data(m.host_variant),
            })
        return out

    def apply(self, choice: dict):
        with self.lock:
            self.check_version(choice.get("version"))
            options = self.matchings()
            matching = options[int(choice["index"])]
            self.push_history()
            result = dpo.dpo_rewrite(matching.host_variant, self.rule,
                                     matching.morphism)
            self.current = result.result
            self.version += 1

    def state(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "version": self.version,
            "terminal": False,
            "graph": jsonio.graph_to_data(self.current),
            "render": layout.render_payload(self.current),
            "choices": self.choices(),
            "rule": jsonio.rule_to_data(self.rule),
        }


def grammar_rewrite_matchings(workspace: Workspace, host_name: str,
                              rule_name: str) -> tuple:
    host = workspace.get(host_name, "besg").obj
    rule = workspace.get(rule_name, "grammar_rule").obj
    matchings = rewriting.find_saturated_matchings(rule, host.grammar)
    return host, rule, matchings

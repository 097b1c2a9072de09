"""HTTP/JSON API backing the derivation studio.

A thin, stateless-beyond-sessions wrapper over the engine: every response
carries the full current object, so clients only hold a session id.  Serve
mode handles concurrent requests; each session is advanced under its own
lock, and an apply against an outdated version is answered with 409.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlparse

from . import jsonio, layout, rewriting
from .errors import BesgError, DecisionNegative, InternalAssertion, ValidationError
from .workspace import (
    StaleSessionError,
    UnknownNameError,
    Workspace,
    WorkspaceError,
    grammar_rewrite_matchings,
)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _route(handler: "ApiHandler", method: str):
    path = urlparse(handler.path).path.rstrip("/")
    parts = [p for p in path.split("/") if p]
    ws = handler.server.workspace

    def body() -> dict:
        length = int(handler.headers.get("Content-Length") or 0)
        if not length:
            return {}
        return json.loads(handler.rfile.read(length))

    if method == "GET" and parts == ["objects"]:
        return {"objects": ws.names()}
    if method == "GET" and len(parts) == 2 and parts[0] == "objects":
        stored = ws.get(parts[1])
        return {"name": stored.name, "kind": stored.kind,
                "payload": jsonio.dump_object(stored.obj)}
    if method == "POST" and parts == ["objects"]:
        data = body()
        stored = ws.load(data["name"], data["payload"])
        return {"name": stored.name, "kind": stored.kind}
    if method == "POST" and parts == ["sessions"]:
        session = ws.start_session(body())
        return session.state()
    if len(parts) >= 2 and parts[0] == "sessions":
        session = ws.session(parts[1])
        rest = parts[2:]
        if method == "GET" and rest == ["choices"]:
            return {"id": session.id, "version": session.version,
                    "choices": session.state()["choices"]}
        if method == "GET" and not rest:
            return session.state()
        if method == "POST" and rest == ["apply"]:
            session.apply(body())
            return session.state()
        if method == "POST" and rest == ["decode"]:
            session.decode()
            return session.state()
        if method == "POST" and rest == ["undo"]:
            session.undo()
            return session.state()
    if method == "POST" and parts == ["grammar-rewrites"]:
        data = body()
        host, rule, matchings = grammar_rewrite_matchings(
            ws, data["host"], data["rule"])
        response = {
            "host": data["host"],
            "rule": data["rule"],
            "matchings": [{"index": i,
                           "production_map": list(m.morphism.production_map),
                           "vertex_maps": [dict(sorted(vm.items()))
                                           for vm in m.morphism.vertex_maps]}
                          for i, m in enumerate(matchings)],
        }
        if "apply" in data:
            outcome = rewriting.apply_rewrite(host, rule,
                                              matchings[int(data["apply"])])
            response["result"] = jsonio.besg_to_data(outcome.result)
            if "certify_tree" in data:
                tree = jsonio.tree_from_data({"root": data["certify_tree"]})
                certificate = rewriting.certify_admissibility(outcome, tree)
                response["certificate"] = {
                    "verified": certificate.verified,
                    "host_instance": jsonio.graph_to_data(certificate.host_graph),
                    "result_instance": jsonio.graph_to_data(certificate.result_graph),
                    "transcript": certificate.transcript,
                    "replays": [{"paths": [list(p) for p in r.paths],
                                 "script": jsonio.script_to_data(r.script)}
                                for r in certificate.replays],
                }
        return response
    if method == "GET" and len(parts) == 2 and parts[0] == "render":
        stored = ws.get(parts[1])
        if stored.kind != "graph":
            raise ApiError(400, f"{parts[1]} is not a graph")
        return layout.render_payload(stored.obj)
    raise ApiError(404, f"no route for {method} {path}")


class ApiHandler(BaseHTTPRequestHandler):
    server_version = "besg-serve/0.1"

    def _respond(self, status: int, payload: dict):
        raw = jsonio.canonical_json(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(raw)

    def _handle(self, method: str):
        try:
            payload = _route(self, method)
            self._respond(200, payload)
        except ApiError as exc:
            self._respond(exc.status, {"error": str(exc)})
        except (UnknownNameError, KeyError, IndexError) as exc:
            self._respond(404, {"error": repr(exc)})
        except StaleSessionError as exc:
            self._respond(409, {"error": str(exc)})
        except (ValidationError, DecisionNegative, WorkspaceError,
                json.JSONDecodeError) as exc:
            self._respond(400, {"error": repr(exc)})
        except (InternalAssertion, BesgError) as exc:
            self._respond(500, {"error": repr(exc)})

    def do_GET(self):
        self._handle("GET")

    def do_POST(self):
        self._handle("POST")

    def do_OPTIONS(self):
        self._respond(200, {})

    def log_message(self, fmt, *args):  # quiet by default
        pass


class BesgServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, workspace: Workspace):
        super().__init__(address, ApiHandler)
        self.workspace = workspace


def serve(port: int, workspace: Workspace = None,
          in_background: bool = False) -> BesgServer:
    server = BesgServer(("127.0.0.1", port), workspace or Workspace())
    if in_background:
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
    else:
        server.serve_forever()
    return server

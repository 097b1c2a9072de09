"""Deterministic force-directed layout for display payloads.

Pure python, seeded by vertex ids, so the same graph always renders at the
same coordinates; the studio applies its own interaction on top.
"""

from __future__ import annotations

import hashlib
import math

from .core import Graph


def _initial_position(v: str) -> tuple[float, float]:
    h = hashlib.sha256(v.encode()).digest()
    angle = int.from_bytes(h[:4], "big") / 2 ** 32 * 2 * math.pi
    radius = 0.5 + int.from_bytes(h[4:8], "big") / 2 ** 32 * 0.5
    return (math.cos(angle) * radius, math.sin(angle) * radius)


def spring_layout(g: Graph, iterations: int = 60) -> dict[str, tuple[float, float]]:
    vertices = list(g.vertex_ids)
    if not vertices:
        return {}
    pos = {v: list(_initial_position(v)) for v in vertices}
    edges = [(s, t) for s, _, t in g.edges]
    k = 1.0 / math.sqrt(len(vertices))
    temperature = 0.12
    for _ in range(iterations):
        force = {v: [0.0, 0.0] for v in vertices}
        for i, v in enumerate(vertices):
            for w in vertices[i + 1:]:
                dx = pos[v][0] - pos[w][0]
                dy = pos[v][1] - pos[w][1]
                dist2 = dx * dx + dy * dy + 1e-6
                push = k * k / dist2
                force[v][0] += dx * push
                force[v][1] += dy * push
                force[w][0] -= dx * push
                force[w][1] -= dy * push
        for s, t in edges:
            dx = pos[s][0] - pos[t][0]
            dy = pos[s][1] - pos[t][1]
            dist = math.sqrt(dx * dx + dy * dy) + 1e-6
            pull = dist / k * 0.05
            force[s][0] -= dx * pull
            force[s][1] -= dy * pull
            force[t][0] += dx * pull
            force[t][1] += dy * pull
        for v in vertices:
            fx, fy = force[v]
            norm = math.sqrt(fx * fx + fy * fy) + 1e-9
            step = min(norm, temperature)
            pos[v][0] += fx / norm * step
            pos[v][1] += fy / norm * step
        temperature *= 0.95
    return {v: (round(p[0], 4), round(p[1], 4)) for v, p in pos.items()}


def render_payload(g: Graph) -> dict:
    """Graph payload annotated with coordinates and display roles."""
    from . import jsonio

    roles = {}
    for v in g.vertex_ids:
        if g.is_node_vertex(v):
            roles[v] = "node"
        elif g.is_wire_vertex(v):
            roles[v] = "wire"
        else:
            roles[v] = "nonterminal"
    return {
        "graph": jsonio.graph_to_data(g),
        "layout": {v: list(xy) for v, xy in spring_layout(g).items()},
        "roles": roles,
        "encoding_edges": [list(e) for e in sorted(g.edges)
                           if e[1] in g.alphabets.encoding_labels],
    }

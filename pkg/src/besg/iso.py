"""Monomorphism and isomorphism search for labeled graphs.

Backtracking over pattern vertices in sorted-id order with label and degree
pruning; host candidates are tried in sorted-id order so enumeration results
are deterministic and reproducible.  Pattern sizes in this engine are small
(rule sides, production bodies), so a tuned VF2 is not warranted.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .core import Graph


def _compatible(pattern: Graph, host: Graph, pv: str, hv: str, partial: dict[str, str]) -> bool:
    if pattern.label(pv) != host.label(hv):
        return False
    if pattern.in_degree(pv) > host.in_degree(hv) or pattern.out_degree(pv) > host.out_degree(hv):
        return False
    # every pattern edge between already-mapped vertices must exist in the host
    for s, lab, t in pattern.out_edges(pv):
        if t in partial and (hv, lab, partial[t]) not in host.edges:
            return False
    for s, lab, t in pattern.in_edges(pv):
        if s in partial and (partial[s], lab, hv) not in host.edges:
            return False
    return True


def monomorphisms(pattern: Graph, host: Graph, limit: Optional[int] = None) -> list[dict[str, str]]:
    """All injective label- and edge-preserving vertex maps pattern -> host.

    Exhaustive and duplicate-free when ``limit`` is None; results are ordered
    lexicographically by the tuple of host ids assigned to the sorted pattern
    vertices.
    """
    return list(iter_monomorphisms(pattern, host, limit))


def iter_monomorphisms(pattern: Graph, host: Graph,
                       limit: Optional[int] = None) -> Iterator[dict[str, str]]:
    order = _search_order(pattern)
    host_ids = host.vertex_ids
    found = 0

    def extend(i: int, partial: dict[str, str], used: set[str]) -> Iterator[dict[str, str]]:
        nonlocal found
        if limit is not None and found >= limit:
            return
        if i == len(order):
            found += 1
            yield dict(partial)
            return
        pv = order[i]
        for hv in host_ids:
            if hv in used:
                continue
            if _compatible(pattern, host, pv, hv, partial):
                partial[pv] = hv
                used.add(hv)
                yield from extend(i + 1, partial, used)
                del partial[pv]
                used.remove(hv)
                if limit is not None and found >= limit:
                    return

    yield from extend(0, {}, set())


def _search_order(pattern: Graph) -> list[str]:
    # sorted ids, but prefer to extend along already-anchored neighborhoods
    remaining = set(pattern.vertex_ids)
    order: list[str] = []
    while remaining:
        anchored = [v for v in sorted(remaining)
                    if any(n in order for n in pattern.neighbors(v))]
        pick = anchored[0] if order and anchored else min(remaining)
        order.append(pick)
        remaining.remove(pick)
    return order


def isomorphism(g: Graph, h: Graph) -> Optional[dict[str, str]]:
    """A vertex bijection witnessing g ~= h, or None."""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return None
    if sorted(g.labels.values()) != sorted(h.labels.values()):
        return None
    if _degree_signature(g) != _degree_signature(h):
        return None
    for m in iter_monomorphisms(g, h, limit=None):
        # a mono between graphs of equal vertex and edge count that also
        # reflects edges is an isomorphism
        if all((m[s], lab, m[t]) in h.edges for s, lab, t in g.edges):
            return m
    return None


def iter_isomorphisms(g: Graph, h: Graph) -> Iterator[dict[str, str]]:
    """All vertex bijections witnessing g ~= h."""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return
    if _degree_signature(g) != _degree_signature(h):
        return
    yield from iter_monomorphisms(g, h, limit=None)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return isomorphism(g, h) is not None


def _degree_signature(g: Graph):
    return sorted((g.label(v), g.in_degree(v), g.out_degree(v)) for v in g.vertex_ids)


def invariant_key(g: Graph) -> tuple:
    """A cheap isomorphism-invariant bucket key for dedup collections."""
    vert = sorted((g.label(v), g.in_degree(v), g.out_degree(v),
                   tuple(sorted(e[1] for e in g.in_edges(v))),
                   tuple(sorted(e[1] for e in g.out_edges(v))))
                  for v in g.vertex_ids)
    edge = sorted((g.label(s), lab, g.label(t)) for s, lab, t in g.edges)
    return tuple(vert), tuple(edge)


class IsoSet:
    """A collection of graphs deduplicated up to isomorphism."""

    def __init__(self, key=invariant_key, same=is_isomorphic):
        self._buckets: dict[tuple, list] = {}
        self._key = key
        self._same = same
        self._items: list = []

    def add(self, g) -> bool:
        """Insert unless an isomorphic member exists; True if inserted."""
        bucket = self._buckets.setdefault(self._key(g), [])
        for other in bucket:
            if self._same(g, other):
                return False
        bucket.append(g)
        self._items.append(g)
        return True

    def __contains__(self, g) -> bool:
        bucket = self._buckets.get(self._key(g), [])
        return any(self._same(g, other) for other in bucket)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def same_contents(self, other: "IsoSet") -> bool:
        return len(self) == len(other) and all(g in other for g in self)

"""Undirected simple networks, their components, and generalized k-stars.

Nodes are non-negative integers. A network keeps its node identities through
every operation: removing nodes never renumbers the survivors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InvalidArgument

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Network:
    nodes: frozenset[int]
    edges: frozenset[Edge]

    def __post_init__(self):
        for u, v in self.edges:
            if u >= v:
                raise InvalidArgument(f"edge {(u, v)} is not normalized (need u < v)")
            if u not in self.nodes or v not in self.nodes:
                raise InvalidArgument(f"edge {(u, v)} has an endpoint outside the node set")
        for v in self.nodes:
            if v < 0:
                raise InvalidArgument(f"negative node id {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]] = ()) -> "Network":
        """Network over nodes ``0..n-1``; rejects loops, duplicates and bad endpoints."""
        if n < 0:
            raise InvalidArgument("node count must be non-negative")
        seen: set[Edge] = set()
        for pair in edges:
            u, v = (int(x) for x in pair)
            if u == v:
                raise InvalidArgument(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"edge {(u, v)} has an endpoint outside [0, {n})")
            e = _edge(u, v)
            if e in seen:
                raise InvalidArgument(f"duplicate edge {e}")
            seen.add(e)
        return cls(frozenset(range(n)), frozenset(seen))

    @classmethod
    def on_nodes(cls, nodes: Iterable[int], edges: Iterable[Iterable[int]] = ()) -> "Network":
        nodes = frozenset(nodes)
        return cls(nodes, frozenset(_edge(*e) for e in edges))

    def __repr__(self) -> str:
        return f"Network(n={self.n}, edges={self.sorted_edges()})"

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    @cached_property
    def neighbor_masks(self) -> dict[int, int]:
        """Neighbourhood of every node as an integer bitmask (bit i = node i)."""
        return {v: sum(1 << u for u in nb) for v, nb in self.adjacency.items()}

    @cached_property
    def node_mask(self) -> int:
        return sum(1 << v for v in self.nodes)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        out: dict = {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}
        if self.nodes != frozenset(range(self.n)):
            out["nodes"] = sorted(self.nodes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Network":
        if "nodes" in data:
            net = cls.on_nodes(data["nodes"], data.get("edges", []))
            if net.n != data["n"]:
                raise InvalidArgument("'n' disagrees with the explicit node list")
            return net
        return cls.from_edges(int(data["n"]), data.get("edges", []))

    @classmethod
    def from_json(cls, text: str) -> "Network":
        return cls.from_dict(json.loads(text))


def components(g: Network) -> list[frozenset[int]]:
    """Connected components, ordered by their smallest member."""
    out = []
    for mask in component_masks(g, g.node_mask):
        out.append(frozenset(_bits(mask)))
    out.sort(key=min)
    return out


def component_masks(g: Network, alive: int) -> list[int]:
    """Components of the subgraph induced by the node bitmask ``alive``."""
    nbr = g.neighbor_masks
    comps = []
    rest = alive
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            grow = 0
            for v in _bits(frontier):
                grow |= nbr[v]
            frontier = grow & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def remove_nodes(g: Network, z: Iterable[int]) -> Network:
    """The network ``G - Z``: drop the nodes of ``z`` and every incident edge."""
    z = frozenset(z)
    unknown = z - g.nodes
    if unknown:
        raise InvalidArgument(f"unknown node ids {sorted(unknown)}")
    if not z:
        return g
    keep = g.nodes - z
    return Network(keep, frozenset(e for e in g.edges if e[0] in keep and e[1] in keep))


def induced_subgraph(g: Network, keep: Iterable[int]) -> Network:
    return remove_nodes(g, g.nodes - frozenset(keep))


def disjoint_union(*parts: Network) -> Network:
    nodes: set[int] = set()
    edges: set[Edge] = set()
    for p in parts:
        if nodes & p.nodes:
            raise InvalidArgument("parts share node ids")
        nodes |= p.nodes
        edges |= p.edges
    return Network(frozenset(nodes), frozenset(edges))


def network_value(g: Network, f) -> int:
    """Sum of ``f(|C|)`` over the components of ``g``."""
    f.require(g.n)
    return sum((f(len(c)) for c in components(g)), 0)


def clique(nodes: Iterable[int]) -> Network:
    nodes = sorted(nodes)
    return Network.on_nodes(nodes, [(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]])


def spanning_star(nodes: Iterable[int]) -> Network:
    """A star centred on the smallest node; used for unprotected components."""
    nodes = sorted(nodes)
    return Network.on_nodes(nodes, [(nodes[0], v) for v in nodes[1:]])


@dataclass(frozen=True)
class GeneralizedStar:
    network: Network
    core: frozenset[int]
    periphery: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.core)

    def loads(self) -> dict[int, int]:
        """Number of periphery nodes attached to each core node."""
        adj = self.network.adjacency
        return {c: len(adj[c] & self.periphery) for c in sorted(self.core)}


def star_loads(n: int, k: int) -> list[int]:
    """Periphery loads of the canonical star: the first ``n mod k`` cores get one extra."""
    base, extra = divmod(n - k, k)
    return [base + (1 if i < extra else 0) for i in range(k)]


def build_generalized_star(n: int, k: int, offset: int = 0) -> GeneralizedStar:
    """Canonical generalized k-star on nodes ``offset..offset+n-1``.

    Core nodes come first; periphery node ``offset + k + i`` hangs off core
    ``offset + (i mod k)``, so loads differ by at most one.
    """
    if not 1 <= k <= n:
        raise InvalidArgument(f"need 1 <= k <= n, got k={k}, n={n}")
    core = list(range(offset, offset + k))
    edges = [(core[i], core[j]) for i in range(k) for j in range(i + 1, k)]
    periphery = list(range(offset + k, offset + n))
    edges += [(core[i % k], p) for i, p in enumerate(periphery)]
    net = Network.on_nodes(range(offset, offset + n), edges)
    return GeneralizedStar(net, frozenset(core), frozenset(periphery))


def is_generalized_star(g: Network, core: Iterable[int] | None = None) -> bool:
    """Check the generalized-star definition, with the core given or inferred.

    Without an explicit core the non-leaf nodes are taken as the core (all
    nodes when every node is a leaf or the graph is a clique). That inference
    misses stars whose core has load-0 members of degree one; pass the core
    explicitly for those.
    """
    n = g.n
    if n == 0:
        return False
    if core is None:
        inner = frozenset(v for v in g.nodes if g.degree(v) >= 2)
        candidates = [inner] if inner else []
        candidates.append(g.nodes)
        return any(is_generalized_star(g, c) for c in candidates)
    core = frozenset(core)
    k = len(core)
    if k == 0 or not core <= g.nodes:
        return False
    periphery = g.nodes - core
    adj = g.adjacency
    for c in core:
        if core - {c} - adj[c]:
            return False
    for p in periphery:
        if len(adj[p]) != 1 or not adj[p] <= core:
            return False
    lo, hi = n // k - 1, -(-n // k) - 1
    return all(lo <= len(adj[c] & periphery) <= hi for c in core)

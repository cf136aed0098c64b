"""Exact semantics of one play: attack graph, residual network, payoffs.

Everything the adversary can achieve depends on the network only through
``S = Delta \\ B``, the set of genuinely protected nodes: those are the nodes
removed from the attack graph. :class:`Engine` therefore memoizes best
responses per ``S`` and lets callers sweep many ``(Delta, B)`` pairs cheaply.
Subsets are always enumerated in lexicographic order of sorted node ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .errors import InvalidArgument
from .graph import Network, _bits, component_masks, remove_nodes
from .rationals import format_rational, parse_positive
from .valuefn import ValueFunction, require_valid


@dataclass(frozen=True)
class GameConfig:
    n: int
    n_B: int
    n_A: int
    c: Fraction
    f: ValueFunction

    def __post_init__(self):
        object.__setattr__(self, "c", parse_positive(self.c))
        if self.n < 3:
            raise InvalidArgument("n must be at least 3")
        if not 1 <= self.n_B < self.n:
            raise InvalidArgument(f"need 1 <= n_B < n, got n_B={self.n_B}")
        if not 1 <= self.n_A <= self.n:
            raise InvalidArgument(f"need 1 <= n_A <= n, got n_A={self.n_A}")
        require_valid(self.f, self.n)

    def with_cost(self, c) -> "GameConfig":
        return GameConfig(self.n, self.n_B, self.n_A, c, self.f)

    def to_dict(self) -> dict:
        return {"n": self.n, "n_B": self.n_B, "n_A": self.n_A,
                "c": format_rational(self.c), "f": self.f.to_dict()}


@dataclass(frozen=True)
class ProtectedNetwork:
    g: Network
    delta: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "delta", frozenset(self.delta))
        if not self.delta <= self.g.nodes:
            raise InvalidArgument(f"protected nodes {sorted(self.delta - self.g.nodes)} not in network")

    @property
    def delta_mask(self) -> int:
        return sum(1 << v for v in self.delta)


def _check_set(name: str, s: Iterable[int], g: Network, size: int | None) -> frozenset[int]:
    s = frozenset(s)
    if not s <= g.nodes:
        raise InvalidArgument(f"{name} contains unknown nodes {sorted(s - g.nodes)}")
    if size is not None and len(s) != size:
        raise InvalidArgument(f"{name} must have exactly {size} nodes, got {len(s)}")
    return s


def _mask(s: Iterable[int]) -> int:
    return sum(1 << v for v in s)


class Engine:
    """Memoized adversary analysis for one network, value function and n_A."""

    def __init__(self, g: Network, f: ValueFunction, n_A: int):
        f.require(g.n)
        self.g, self.f, self.n_A = g, f, n_A
        self.order = sorted(g.nodes)
        self.attacks = [tuple(i) for i in combinations(self.order, n_A)]
        self._best: dict[int, tuple] = {}
        self._residual: dict[int, tuple] = {}

    def residual(self, destroyed: int) -> tuple:
        """``(Phi(G - D), {node: component size})`` for a destroyed-node mask."""
        hit = self._residual.get(destroyed)
        if hit is None:
            sizes: dict[int, int] = {}
            phi = 0
            for comp in component_masks(self.g, self.g.node_mask & ~destroyed):
                size = comp.bit_count()
                phi += self.f(size)
                for v in _bits(comp):
                    sizes[v] = size
            hit = self._residual[destroyed] = (phi, sizes)
        return hit

    def destroyed(self, shielded: int, attack: Iterable[int]) -> int:
        """Nodes infected when ``attack`` hits the attack graph ``G - shielded``."""
        comp_of = self._components(shielded)
        out = 0
        for i in attack:
            out |= comp_of.get(i, 0)
        return out

    def _components(self, shielded: int) -> dict[int, int]:
        comp_of: dict[int, int] = {}
        for comp in component_masks(self.g, self.g.node_mask & ~shielded):
            for v in _bits(comp):
                comp_of[v] = comp
        return comp_of

    def best(self, shielded: int) -> tuple:
        """``(min Phi, [(attack, destroyed mask), ...])`` over all attacks on ``G - shielded``."""
        hit = self._best.get(shielded)
        if hit is None:
            comp_of = self._components(shielded)
            scored = []
            for attack in self.attacks:
                d = 0
                for i in attack:
                    d |= comp_of.get(i, 0)
                scored.append((self.residual(d)[0], attack, d))
            low = min(s[0] for s in scored)
            hit = self._best[shielded] = (low, [(a, d) for p, a, d in scored if p == low])
        return hit

    def node_payoff(self, j: int, destroyed: int, protected: bool, c: Fraction) -> Fraction:
        if destroyed >> j & 1:
            return Fraction(0)
        size = self.residual(destroyed)[1][j]
        share = Fraction(self.f(size), size)
        return share - c if protected else share


@dataclass(frozen=True)
class PlayOutcome:
    residual: Network
    destroyed: frozenset[int]
    designer_payoff: Fraction
    adversary_payoff: Fraction
    node_payoffs: Mapping[int, Fraction]

    def to_dict(self) -> dict:
        return {
            "residual": self.residual.to_dict(),
            "destroyed": sorted(self.destroyed),
            "designer_payoff": format_rational(self.designer_payoff),
            "adversary_payoff": format_rational(self.adversary_payoff),
            "node_payoffs": {str(j): format_rational(v) for j, v in sorted(self.node_payoffs.items())},
        }


def attack_graph(pn: ProtectedNetwork, b: Iterable[int]) -> Network:
    """``G - (Delta \\ B)``: genuine protected nodes drop out, byzantine ones stay."""
    b = _check_set("byzantine set", b, pn.g, None)
    return remove_nodes(pn.g, pn.delta - b)


def residual_network(pn: ProtectedNetwork, b: Iterable[int], i: Iterable[int],
                     cfg: GameConfig) -> PlayOutcome:
    g = pn.g
    b = _check_set("byzantine set", b, g, cfg.n_B)
    i = _check_set("attack plan", i, g, cfg.n_A)
    eng = Engine(g, cfg.f, cfg.n_A)
    d = eng.destroyed(_mask(pn.delta - b), sorted(i))
    phi, _ = eng.residual(d)
    destroyed = frozenset(_bits(d))
    adversary = Fraction(-phi)
    nodes = {}
    for j in sorted(g.nodes):
        if j in b:
            nodes[j] = adversary
        else:
            nodes[j] = eng.node_payoff(j, d, j in pn.delta, cfg.c)
    return PlayOutcome(
        residual=remove_nodes(g, destroyed),
        destroyed=destroyed,
        designer_payoff=phi - len(pn.delta) * cfg.c,
        adversary_payoff=adversary,
        node_payoffs=nodes,
    )


def best_response_attacks(pn: ProtectedNetwork, b: Iterable[int],
                          cfg: GameConfig) -> list[frozenset[int]]:
    """Every attack set of size n_A minimizing the residual value, in lexicographic order."""
    b = _check_set("byzantine set", b, pn.g, cfg.n_B)
    eng = Engine(pn.g, cfg.f, cfg.n_A)
    _, plans = eng.best(_mask(pn.delta - b))
    return [frozenset(a) for a, _ in plans]


def byzantine_sets(nodes: Iterable[int], n_B: int, avoid: int | None = None):
    pool = [v for v in sorted(nodes) if v != avoid]
    return combinations(pool, n_B)


def pessimistic_designer_utility(pn: ProtectedNetwork, cfg: GameConfig,
                                 engine: Engine | None = None) -> Fraction:
    """Worst case over byzantine placements of ``Phi(residual) - |Delta| c``.

    All best responses leave the same residual value by construction, so the
    adversary's tie-break does not matter here.
    """
    eng = engine or Engine(pn.g, cfg.f, cfg.n_A)
    dm = pn.delta_mask
    worst = min(eng.best(dm & ~_mask(b))[0] for b in byzantine_sets(pn.g.nodes, cfg.n_B))
    return worst - len(pn.delta) * cfg.c


def _delta_of(g: Network, strategies: Mapping[int, int]) -> frozenset[int]:
    if set(strategies) != set(g.nodes):
        raise InvalidArgument("strategies must assign a bit to every node")
    for v, bit in strategies.items():
        if bit not in (0, 1):
            raise InvalidArgument(f"strategy of node {v} must be 0 or 1")
    return frozenset(v for v, bit in strategies.items() if bit)


def pessimistic_node_utility(g: Network, strategies: Mapping[int, int], j: int,
                             cfg: GameConfig, engine: Engine | None = None) -> Fraction:
    """Node ``j``'s payoff as a genuine node, minimized over byzantine sets not
    containing ``j`` and over the adversary's best responses."""
    if j not in g.nodes:
        raise InvalidArgument(f"unknown node {j}")
    delta = _delta_of(g, strategies)
    eng = engine or Engine(g, cfg.f, cfg.n_A)
    dm = _mask(delta)
    protected = j in delta
    worst = None
    for b in byzantine_sets(g.nodes, cfg.n_B, avoid=j):
        _, plans = eng.best(dm & ~_mask(b))
        for _, d in plans:
            u = eng.node_payoff(j, d, protected, cfg.c)
            if worst is None or u < worst:
                worst = u
    return worst


def expected_utilities(g: Network, strategies: Mapping[int, int], cfg: GameConfig,
                       engine: Engine | None = None) -> tuple[Fraction, dict[int, Fraction]]:
    """Utilities averaged uniformly over byzantine placements and adversary ties.

    The designer averages over every byzantine set; node ``j`` over the sets
    that leave it genuine.
    """
    delta = _delta_of(g, strategies)
    eng = engine or Engine(g, cfg.f, cfg.n_A)
    dm = _mask(delta)
    cost = len(delta) * cfg.c
    total, count = Fraction(0), 0
    for b in byzantine_sets(g.nodes, cfg.n_B):
        total += eng.best(dm & ~_mask(b))[0]
        count += 1
    designer = total / count - cost
    nodes = {}
    for j in sorted(g.nodes):
        acc, m = Fraction(0), 0
        for b in byzantine_sets(g.nodes, cfg.n_B, avoid=j):
            _, plans = eng.best(dm & ~_mask(b))
            acc += sum((eng.node_payoff(j, d, j in delta, cfg.c) for _, d in plans), Fraction(0)) / len(plans)
            m += 1
        nodes[j] = acc / m
    return designer, nodes

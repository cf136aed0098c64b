"""Optimal centralized defense for one byzantine node and one attack.

``w_k(n)`` is the network value the designer can secure with ``k`` protected
nodes; the optimum at cost ``c`` maximizes ``w_k(n) - k c``. Every optimum is
realized by a witness network whose payoff is recomputed by the game engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgument, UnsupportedConfiguration
from .game import GameConfig, ProtectedNetwork, pessimistic_designer_utility
from .graph import (Network, _bits, build_generalized_star, component_masks, components,
                    disjoint_union, induced_subgraph, spanning_star)
from .rationals import format_decimal, format_rational, parse_positive
from .valuefn import ValueFunction, require_valid


@dataclass(frozen=True)
class TwoCoreValue:
    value: object
    q: int
    singleton: bool


def w_two(n: int, f: ValueFunction) -> TwoCoreValue:
    """Best split into a 2-star, an unprotected part of size q and maybe a singleton.

    Ties go to the smallest q; the singleton is used only when it strictly helps.
    """
    best = None
    for q in range(n - 1):
        a = min(f(n - q), f((n - q) // 2) + f(q))
        b = min(f(n - q - 1), f((n - q - 1) // 2) + f(q)) + f(1)
        h = TwoCoreValue(b, q, True) if b > a else TwoCoreValue(a, q, False)
        if best is None or h.value > best.value:
            best = h
    return best


def _unprotected_three_way(n: int, f: ValueFunction) -> bool:
    """For n = 3 (mod 6): whether three equal parts beat two halves plus a singleton."""
    return 2 * f(n // 3) >= f((n - 1) // 2) + f(1)


def w_value(n: int, k: int, f: ValueFunction):
    if n < 3:
        raise InvalidArgument("n must be at least 3")
    if not 0 <= k <= n:
        raise InvalidArgument(f"k must lie in [0, {n}], got {k}")
    f.require(n)
    if k <= 1:
        if n % 6 == 3:
            return max(2 * f(n // 3), f((n - 1) // 2) + f(1))
        return f(n // 2) + (f(1) if n % 2 else 0)
    if k == 2:
        return w_two(n, f).value
    if n % k == 1:
        return f(n - 1 - (n - 1) // k) + f(1)
    return f(n - -(-n // k))


def w_values(n: int, f: ValueFunction) -> list:
    return [w_value(n, k, f) for k in range(n + 1)]


def _parts(sizes, start: int) -> list[Network]:
    out = []
    for s in sizes:
        out.append(spanning_star(range(start, start + s)))
        start += s
    return out


def witness(n: int, k: int, f: ValueFunction) -> tuple[Network, frozenset[int], str]:
    """Canonical network achieving ``w_k(n)``: protected core first, then the
    unprotected parts, then any isolated node."""
    if not 0 <= k <= n:
        raise InvalidArgument(f"k must lie in [0, {n}], got {k}")
    if k <= 1:
        if n % 6 == 3 and _unprotected_three_way(n, f):
            sizes, desc = [n // 3] * 3, f"no defense, three components of size {n // 3}"
        elif n % 2:
            sizes = [n // 2, n // 2, 1]
            desc = f"no defense, two components of size {n // 2} and an isolated node"
        else:
            sizes, desc = [n // 2] * 2, f"no defense, two components of size {n // 2}"
        g = disjoint_union(*_parts(sizes, 0))
        if k == 1:
            return g, frozenset({0}), "one protected node; " + desc
        return g, frozenset(), desc
    if k == 2:
        t = w_two(n, f)
        m = n - t.q - (1 if t.singleton else 0)
        star = build_generalized_star(m, 2)
        parts = [star.network] + _parts([t.q] if t.q else [], m)
        desc = f"2-star on {m} nodes"
        if t.q:
            desc += f" plus an unprotected component of size {t.q}"
        if t.singleton:
            parts += _parts([1], n - 1)
            desc += " plus an isolated node"
        return disjoint_union(*parts), star.core, desc
    if n % k == 1:
        star = build_generalized_star(n - 1, k)
        g = disjoint_union(star.network, *_parts([1], n - 1))
        return g, star.core, f"{k}-star on {n - 1} nodes plus an isolated node"
    star = build_generalized_star(n, k)
    return star.network, star.core, f"{k}-star"


def describe(n: int, k: int, f: ValueFunction) -> str:
    return witness(n, k, f)[2]


def optimal_ks(w: list, c: Fraction) -> list[int]:
    scores = [wk - k * c for k, wk in enumerate(w)]
    top = max(scores)
    return [k for k, s in enumerate(scores) if s == top]


@dataclass(frozen=True)
class DesignOutcome:
    k: int
    network: Network
    delta: frozenset[int]
    payoff: Fraction
    alternatives: tuple[int, ...]
    description: str = ""

    def to_dict(self) -> dict:
        return {"k": self.k, "payoff": format_rational(self.payoff),
                "alternatives": list(self.alternatives), "description": self.description,
                "delta": sorted(self.delta), "network": self.network.to_dict()}


def optimal_design(n: int, c, f: ValueFunction, n_B: int = 1, n_A: int = 1) -> DesignOutcome:
    if n_B != 1 or n_A != 1:
        raise UnsupportedConfiguration(
            "closed-form optimum exists only for n_B = n_A = 1; use brute_force_optimal")
    c = parse_positive(c)
    cfg = GameConfig(n, 1, 1, c, f)
    w = w_values(n, f)
    ks = optimal_ks(w, c)
    k = ks[0]
    g, delta, desc = witness(n, k, f)
    payoff = w[k] - k * c
    got = pessimistic_designer_utility(ProtectedNetwork(g, delta), cfg)
    if got != payoff:
        raise AssertionError(f"witness for k={k} yields {got}, formula gives {payoff}")
    return DesignOutcome(k, g, delta, payoff, tuple(ks), desc)


@dataclass(frozen=True)
class ThresholdRow:
    c_low: Fraction
    c_high: Fraction | None
    k: int
    w: object
    description: str

    def interval_text(self) -> str:
        lo = format_decimal(self.c_low)
        if self.c_low == 0:
            return f"c < {format_decimal(self.c_high)}"
        if self.c_high is None:
            return f"c > {lo}"
        return f"c in ({lo}, {format_decimal(self.c_high)})"


@dataclass(frozen=True)
class ThresholdTable:
    n: int
    f: ValueFunction
    rows: tuple[ThresholdRow, ...]
    w: tuple = field(default=(), repr=False)

    @property
    def breakpoints(self) -> list[Fraction]:
        return [r.c_high for r in self.rows[:-1]]

    @property
    def ks(self) -> list[int]:
        return [r.k for r in self.rows]

    def optimal_at(self, c) -> list[int]:
        return optimal_ks(list(self.w), parse_positive(c))


def threshold_table(n: int, f: ValueFunction) -> ThresholdTable:
    """Upper envelope of the lines ``c -> w_k - k c`` over ``c > 0``."""
    require_valid(f, n)
    w = w_values(n, f)
    top = max(w)
    k0 = min(k for k, v in enumerate(w) if v == top)
    rows = []
    lo = Fraction(0)
    while k0 > 0:
        cross = None
        nxt = None
        for k in range(k0):
            x = Fraction(w[k0] - w[k], k0 - k)
            if cross is None or x < cross:
                cross, nxt = x, k
        if cross <= lo:
            raise AssertionError("envelope breakpoints must increase")
        rows.append(ThresholdRow(lo, cross, k0, w[k0], describe(n, k0, f)))
        lo, k0 = cross, nxt
    rows.append(ThresholdRow(lo, None, 0, w[0], describe(n, 0, f)))
    return ThresholdTable(n, f, tuple(rows), tuple(w))


def canonicalize_to_star(pn: ProtectedNetwork, cfg: GameConfig,
                         rebalance: bool = True) -> ProtectedNetwork:
    """Rewire a protected network so its protected nodes form the core of a generalized star.

    The protected set is completed into a clique; then, protected node by
    protected node in increasing order, every unprotected node that an
    infection starting at that node would reach is rewired as a leaf of it.
    Finally leaves move from the most to the least loaded core node (largest
    leaf id first, smallest core id on ties) until loads differ by at most one.
    """
    if cfg.n_B != 1 or cfg.n_A != 1:
        raise UnsupportedConfiguration("canonicalization is defined for n_B = n_A = 1")
    delta = sorted(pn.delta)
    if len(delta) < 2:
        raise InvalidArgument("canonicalization needs at least two protected nodes")
    g = pn.g
    edges = set(g.edges)
    edges |= {(u, v) for i, u in enumerate(delta) for v in delta[i + 1:]}
    dmask = pn.delta_mask
    for i in delta:
        net = Network(g.nodes, frozenset(edges))
        alive = (net.node_mask & ~dmask) | (1 << i)
        cloud = next(m for m in component_masks(net, alive) if m >> i & 1)
        cloud &= ~(1 << i)
        if not cloud:
            continue
        edges = {e for e in edges if not (cloud >> e[0] & 1 or cloud >> e[1] & 1)}
        edges |= {(min(i, j), max(i, j)) for j in _bits(cloud)}
    if rebalance:
        leaves = {i: sorted(j for u, v in edges for j in (u, v)
                            if j != i and i in (u, v) and j not in pn.delta) for i in delta}
        while True:
            hi = max(delta, key=lambda i: (len(leaves[i]), -i))
            lo = min(delta, key=lambda i: (len(leaves[i]), i))
            if len(leaves[hi]) - len(leaves[lo]) < 2:
                break
            j = leaves[hi].pop()
            leaves[lo].append(j)
            leaves[lo].sort()
            edges.discard((min(hi, j), max(hi, j)))
            edges.add((min(lo, j), max(lo, j)))
    return ProtectedNetwork(Network(g.nodes, frozenset(edges)), pn.delta)


def protected_component(pn: ProtectedNetwork) -> Network:
    """The component containing the protected nodes (they must share one)."""
    comps = [c for c in components(pn.g) if c & pn.delta]
    if len(comps) != 1:
        raise InvalidArgument("protected nodes span several components")
    return induced_subgraph(pn.g, comps[0])


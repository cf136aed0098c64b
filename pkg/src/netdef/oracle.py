"""Brute-force optimal centralized designs, independent of the closed form.

``all-graphs`` enumerates every labelled graph on n <= 6 nodes and every
protected set. The table it builds does not depend on the cost, so one pass
answers every c. ``structured`` searches protected-core stars plus unprotected
parts and handles any (n_B, n_A) up to n = 60.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm

import numpy as np

from .centralized import DesignOutcome
from .errors import InvalidArgument, LimitExceeded
from .game import GameConfig, ProtectedNetwork, pessimistic_designer_utility
from .graph import Network, build_generalized_star, disjoint_union, spanning_star
from .valuefn import ValueFunction

ALL_GRAPHS_MAX_N = 6
STRUCTURED_MAX_N = 60
# up to this size every partition of the unprotected nodes is tried
STRUCTURED_ALL_PARTS_N = 20
_DEAD = 255


def scaled_values(f: ValueFunction, n: int) -> tuple[list[int], int]:
    """``f(0..n)`` multiplied by the least common denominator, as Python ints."""
    vals = [Fraction(f(x)) for x in range(n + 1)]
    scale = lcm(*(v.denominator for v in vals))
    return [int(v * scale) for v in vals], scale


def component_table(edge_bits: np.ndarray, pairs: list[tuple[int, int]], n: int) -> np.ndarray:
    """Component masks ``comp[g, R, i]`` of ``G_g - R`` by min-label propagation.

    ``edge_bits[g, e]`` says whether graph g has edge ``pairs[e]``; removed or
    absent nodes get an empty component.
    """
    ng = edge_bits.shape[0]
    masks = np.arange(1 << n)
    alive = np.array([(masks >> i) & 1 == 0 for i in range(n)])  # (n, R)
    label = np.empty((ng, 1 << n, n), dtype=np.uint8)
    for i in range(n):
        label[:, :, i] = np.where(alive[i], i, _DEAD)[None, :]
    for _ in range(max(n - 1, 1)):
        for e, (u, v) in enumerate(pairs):
            live = edge_bits[:, e][:, None] & (alive[u] & alive[v])[None, :]
            m = np.minimum(label[:, :, u], label[:, :, v])
            label[:, :, u] = np.where(live, m, label[:, :, u])
            label[:, :, v] = np.where(live, m, label[:, :, v])
    comp = np.zeros((ng, 1 << n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            same = (label[:, :, i] == label[:, :, j]) & alive[j][None, :]
            comp[:, :, i] |= np.where(same, np.uint8(1 << j), np.uint8(0))
        comp[:, :, i] = np.where(alive[i][None, :], comp[:, :, i], 0)
    return comp


def value_table(comp: np.ndarray, fv: list[int], n: int) -> np.ndarray:
    """``phi[g, R]``: scaled network value of ``G_g - R``."""
    pop = np.array([bin(m).count("1") for m in range(256)], dtype=np.int64)
    fvals = np.array(fv, dtype=np.int64)
    phi = np.zeros(comp.shape[:2], dtype=np.int64)
    for i in range(n):
        m = comp[:, :, i]
        # count each component once, at its smallest member
        root = (m & np.uint8((1 << i) - 1)) == 0
        root &= m != 0
        phi += np.where(root, fvals[pop[m]], 0)
    return phi


@lru_cache(maxsize=32)
def _all_graphs_table(n: int, f: ValueFunction, n_B: int, n_A: int):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    ng = 1 << len(pairs)
    codes = np.arange(ng)
    edge_bits = np.array([(codes >> e) & 1 for e in range(len(pairs))], dtype=bool).T
    comp = component_table(edge_bits, pairs, n)
    fv, scale = scaled_values(f, n)
    phi = value_table(comp, fv, n)
    rows = np.arange(ng)[:, None]
    phimin = None
    for attack in combinations(range(n), n_A):
        d = np.zeros(comp.shape[:2], dtype=np.uint8)
        for i in attack:
            d |= comp[:, :, i]
        vals = phi[rows, d.astype(np.intp)]
        phimin = vals if phimin is None else np.minimum(phimin, vals)
    masks = np.arange(1 << n)
    secured = None
    for b in combinations(range(n), n_B):
        bm = sum(1 << v for v in b)
        vals = phimin[:, masks & ~bm]
        secured = vals if secured is None else np.minimum(secured, vals)
    sizes = np.array([bin(m).count("1") for m in range(1 << n)])
    best = []
    for k in range(n + 1):
        sub = np.where(sizes[None, :] == k, secured, np.iinfo(np.int64).min)
        flat = int(np.argmax(sub))
        g, d = divmod(flat, 1 << n)
        best.append((int(sub.flat[flat]), g, d))
    return pairs, scale, best


def _all_graphs(cfg: GameConfig) -> DesignOutcome:
    n = cfg.n
    if n > ALL_GRAPHS_MAX_N:
        raise LimitExceeded(f"all-graphs search enumerates 2^(n(n-1)/2) graphs; n <= {ALL_GRAPHS_MAX_N}")
    pairs, scale, best = _all_graphs_table(n, cfg.f, cfg.n_B, cfg.n_A)
    scores = [Fraction(v, scale) - k * cfg.c for k, (v, _, _) in enumerate(best)]
    top = max(scores)
    ks = tuple(k for k, s in enumerate(scores) if s == top)
    _, g_code, d_mask = best[ks[0]]
    g = Network.from_edges(n, [p for e, p in enumerate(pairs) if g_code >> e & 1])
    delta = frozenset(i for i in range(n) if d_mask >> i & 1)
    return DesignOutcome(ks[0], g, delta, top, ks, "exhaustive over all labelled graphs")


def _partitions(total: int, parts: int, cap: int):
    """Nonincreasing tuples of positive ints summing to ``total``, at most ``parts`` long."""
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    for first in range(min(total, cap), 0, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _structured_candidates(cfg: GameConfig):
    n, f = cfg.n, cfg.f
    max_parts = n if n <= STRUCTURED_ALL_PARTS_N else cfg.n_A + cfg.n_B + 2
    for s in range(0, n + 1):
        for parts in _partitions(n - s, max_parts, n - s):
            rest = sum(f(p) for p in parts)
            plain = f(s) + rest - sum(f(p) for p in parts[:cfg.n_A])
            spared = rest - sum(f(p) for p in parts[:cfg.n_A - 1])
            if not s:
                yield plain, s, 0, parts
            for k in range(1, s + 1):
                ub = plain
                if cfg.n_B - 1 <= n - k:
                    heavy = -(-(s - k) // k)  # largest periphery load
                    ub = min(ub, f(s - 1 - heavy) + spared)
                yield ub - k * cfg.c, s, k, parts


def _build(n: int, s: int, k: int, parts) -> tuple[Network, frozenset[int]]:
    pieces = []
    delta: frozenset[int] = frozenset()
    if s:
        star = build_generalized_star(s, k)
        pieces.append(star.network)
        delta = star.core
    start = s
    for p in parts:
        pieces.append(spanning_star(range(start, start + p)))
        start += p
    return disjoint_union(*pieces), delta


def _structured(cfg: GameConfig) -> DesignOutcome:
    if cfg.n > STRUCTURED_MAX_N:
        raise LimitExceeded(f"structured search supports n <= {STRUCTURED_MAX_N}")
    cands = sorted(_structured_candidates(cfg), key=lambda t: (-t[0], t[1:]))
    best = None
    found = []
    for ub, s, k, parts in cands:
        if best is not None and ub < best:
            break
        g, delta = _build(cfg.n, s, k, parts)
        val = pessimistic_designer_utility(ProtectedNetwork(g, delta), cfg)
        if best is None or val > best:
            best, found = val, [(k, g, delta, s, parts)]
        elif val == best:
            found.append((k, g, delta, s, parts))
    k, g, delta, s, parts = found[0]
    ks = tuple(sorted({t[0] for t in found}))
    desc = (f"{k}-star on {s} nodes" if k else "no protected core")
    if parts:
        desc += " plus unprotected parts " + "+".join(map(str, parts))
    return DesignOutcome(k, g, delta, best, ks, desc)


def brute_force_optimal(cfg: GameConfig, search: str = "all-graphs") -> DesignOutcome:
    """Maximize the pessimistic designer utility over the chosen search space.

    The structured space is every protected-core generalized star together
    with unprotected components (spanning stars): any number of them up to
    n = 20, at most ``n_A + n_B + 2`` beyond. Designs
    are ranked by cheap upper bounds (two adversary replies the designer
    cannot prevent) and only promising ones are evaluated exactly.
    """
    if search == "all-graphs":
        return _all_graphs(cfg)
    if search == "structured":
        return _structured(cfg)
    raise InvalidArgument(f"unknown search mode {search!r}")

"""Pure, type-independent equilibria of the node-protection subgame.

Each node decides once whether to protect, without knowing whether it is
byzantine, and evaluates that choice as a genuine node. A profile is an
equilibrium when no single node gains strictly by flipping its bit while the
adversary re-optimizes against the new protected set.

:class:`ProfileTable` evaluates all ``2^n`` profiles at once with numpy.
Nothing in it depends on the cost, so one table answers every c;
:func:`is_equilibrium` re-checks a profile through the reference engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm

import numpy as np

from .errors import InvalidArgument, LimitExceeded
from .game import (Engine, GameConfig, ProtectedNetwork, expected_utilities,
                   pessimistic_designer_utility, pessimistic_node_utility)
from .graph import Network
from .rationals import format_rational
from .valuefn import ValueFunction

NODE_GAME_MAX_N = 20
MODES = ("pessimistic", "expected")
_CHUNK = 1 << 12
_INT64_SAFE = 1 << 62


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")


def _components_all(g: Network) -> np.ndarray:
    """``comp[R, i]``: bitmask of i's component in ``G - R`` (0 when i is in R)."""
    n = g.n
    masks = np.arange(1 << n, dtype=np.int64)
    alive = [((masks >> i) & 1) == 0 for i in range(n)]
    label = np.empty((1 << n, n), dtype=np.int8)
    for i in range(n):
        label[:, i] = np.where(alive[i], i, -1)
    pairs = g.sorted_edges()
    live = [alive[u] & alive[v] for u, v in pairs]
    for _ in range(max(n - 1, 1)):
        changed = False
        for (u, v), ok in zip(pairs, live):
            m = np.minimum(label[:, u], label[:, v])
            nu = np.where(ok, m, label[:, u])
            nv = np.where(ok, m, label[:, v])
            if not changed and (np.any(nu != label[:, u]) or np.any(nv != label[:, v])):
                changed = True
            label[:, u], label[:, v] = nu, nv
        if not changed:
            break
    comp = np.zeros((1 << n, n), dtype=np.int64)
    for j in range(n):
        bit = np.int64(1 << j)
        for i in range(n):
            comp[:, i] |= np.where((label[:, i] == label[:, j]) & alive[j], bit, 0)
    for i in range(n):
        comp[:, i] = np.where(alive[i], comp[:, i], 0)
    return comp


def _pick_dtype(bound: int):
    return np.int64 if bound < _INT64_SAFE else object


class ProfileTable:
    """Every profile of the node game on ``g`` for fixed (f, n_B, n_A).

    Arrays are indexed by node bitmasks. ``phimin[S]`` is the residual value
    the adversary reaches when exactly ``S`` is genuinely protected;
    ``worst[S, j]`` and ``mean[S, j]`` are node j's gross payoff under the
    worst and the average best response.
    """

    def __init__(self, g: Network, f: ValueFunction, n_B: int, n_A: int):
        n = g.n
        if g.nodes != frozenset(range(n)):
            raise InvalidArgument("node game needs nodes labelled 0..n-1")
        if n > NODE_GAME_MAX_N:
            raise LimitExceeded(f"node game enumerates 2^n profiles; n <= {NODE_GAME_MAX_N}")
        f.require(n)
        self.g, self.f, self.n_B, self.n_A, self.n = g, f, n_B, n_A, n
        vals = [Fraction(f(x)) for x in range(n + 1)]
        self.f_scale = lcm(*(v.denominator for v in vals))
        shares = [Fraction(0)] + [vals[s] / s for s in range(1, n + 1)]
        self.g_scale = lcm(*(s.denominator for s in shares))
        fv = np.array([int(v * self.f_scale) for v in vals], dtype=np.int64)
        gv = np.array([int(s * self.g_scale) for s in shares], dtype=np.int64)
        self.gv_max = int(gv.max())

        comp = _components_all(g)
        size = np.bitwise_count(comp.astype(np.uint64)).astype(np.int64)
        low = np.array([(1 << i) - 1 for i in range(n)], dtype=np.int64)
        root = ((comp & low) == 0) & (comp != 0)
        phi = np.where(root, fv[size], 0).sum(axis=1)

        attacks = list(combinations(range(n), n_A))
        full = 1 << n
        self.phimin = np.empty(full, dtype=np.int64)
        self.worst = np.empty((full, n), dtype=np.int64)
        self.total = np.empty((full, n), dtype=np.int64)
        self.count = np.empty(full, dtype=np.int64)
        for lo in range(0, full, _CHUNK):
            hi = min(full, lo + _CHUNK)
            blk = comp[lo:hi]
            d = np.zeros((hi - lo, len(attacks)), dtype=np.int64)
            for a, plan in enumerate(attacks):
                for i in plan:
                    d[:, a] |= blk[:, i]
            pd = phi[d]
            pmin = pd.min(axis=1)
            best = pd == pmin[:, None]
            gross = gv[size[d]]  # (block, attacks, n)
            big = np.iinfo(np.int64).max
            self.phimin[lo:hi] = pmin
            self.worst[lo:hi] = np.where(best[:, :, None], gross, big).min(axis=1)
            self.total[lo:hi] = np.where(best[:, :, None], gross, 0).sum(axis=1)
            self.count[lo:hi] = best.sum(axis=1)
        self.masks = np.arange(full, dtype=np.int64)
        self.byz = [sum(1 << v for v in b) for b in combinations(range(n), n_B)]
        self._gross: dict[str, tuple] = {}

    def gross(self, mode: str) -> tuple[np.ndarray, int]:
        """``(G, scale)``: each node's aggregated gross payoff over byzantine sets
        avoiding it, times ``scale``, for every protected set."""
        _check_mode(mode)
        if mode not in self._gross:
            n = self.n
            if mode == "pessimistic":
                out = np.full((1 << n, n), np.iinfo(np.int64).max, dtype=np.int64)
                for bm in self.byz:
                    vals = self.worst[self.masks & ~bm]
                    for j in range(n):
                        if bm >> j & 1:
                            vals[:, j] = np.iinfo(np.int64).max
                    np.minimum(out, vals, out=out)
                self._gross[mode] = (out, self.g_scale)
            else:
                counts = sorted({int(x) for x in np.unique(self.count)})
                lc = lcm(*counts)
                nb = comb(n - 1, self.n_B)
                dtype = _pick_dtype(self.gv_max * lc * nb * n)
                per = self.total.astype(dtype) * (lc // self.count.astype(dtype))[:, None]
                out = np.zeros((1 << n, n), dtype=dtype)
                for bm in self.byz:
                    vals = per[self.masks & ~bm].copy()
                    for j in range(n):
                        if bm >> j & 1:
                            vals[:, j] = 0
                    out += vals
                self._gross[mode] = (out, self.g_scale * lc * nb)
        return self._gross[mode]

    def utilities(self, c: Fraction, mode: str) -> tuple[np.ndarray, int]:
        """Scaled utilities ``u[Delta, j]`` (common positive scale, returned too)."""
        gross, scale = self.gross(mode)
        p, q = c.numerator, c.denominator
        dtype = _pick_dtype((self.gv_max * q + p) * scale)
        bits = ((self.masks[:, None] >> np.arange(self.n)[None, :]) & 1).astype(dtype)
        u = gross.astype(dtype) * q - bits * (p * scale)
        return u, scale * q

    def equilibrium_masks(self, c, mode: str = "pessimistic") -> list[int]:
        c = Fraction(c)
        u, _ = self.utilities(c, mode)
        ok = np.ones(1 << self.n, dtype=bool)
        for j in range(self.n):
            flipped = self.masks ^ (1 << j)
            ok &= u[:, j] >= u[flipped, j]
        return [int(m) for m in np.flatnonzero(ok)]

    def node_utility(self, delta: int, j: int, c, mode: str) -> Fraction:
        gross, scale = self.gross(mode)
        return Fraction(int(gross[delta, j]), scale) - (Fraction(c) if delta >> j & 1 else 0)

    def designer_value(self, delta: int, c, mode: str) -> Fraction:
        vals = [int(self.phimin[delta & ~bm]) for bm in self.byz]
        phi = min(vals) if mode == "pessimistic" else Fraction(sum(vals), len(vals))
        return Fraction(phi, self.f_scale) - bin(delta).count("1") * Fraction(c)


@lru_cache(maxsize=64)
def profile_table(g: Network, f: ValueFunction, n_B: int, n_A: int) -> ProfileTable:
    return ProfileTable(g, f, n_B, n_A)


@dataclass(frozen=True)
class EquilibriumProfile:
    strategies: tuple[int, ...]
    mode: str
    designer_value: Fraction
    utilities: tuple[Fraction, ...]

    @property
    def delta(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.strategies) if b)

    @property
    def bits(self) -> str:
        return "".join(map(str, self.strategies))

    def to_dict(self) -> dict:
        return {"strategies": self.bits, "mode": self.mode,
                "designer_value": format_rational(self.designer_value),
                "utilities": [format_rational(u) for u in self.utilities]}


@dataclass(frozen=True)
class EquilibriumSet:
    profiles: tuple[EquilibriumProfile, ...]
    mode: str
    n: int

    @property
    def exists(self) -> bool:
        """False is the "no pure equilibrium" outcome, not an error."""
        return bool(self.profiles)

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __getitem__(self, i):
        return self.profiles[i]

    def worst_designer_value(self) -> Fraction | None:
        return min((p.designer_value for p in self.profiles), default=None)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "n": self.n, "exists": self.exists,
                "profiles": [p.to_dict() for p in self.profiles]}


def node_game_equilibria(g: Network, cfg: GameConfig, mode: str = "pessimistic") -> EquilibriumSet:
    _check_mode(mode)
    if g.n != cfg.n:
        raise InvalidArgument(f"network has {g.n} nodes but the game has n = {cfg.n}")
    table = profile_table(g, cfg.f, cfg.n_B, cfg.n_A)
    out = []
    # ascending mask order is not bit-vector order; sort by the bit string
    for m in sorted(table.equilibrium_masks(cfg.c, mode),
                    key=lambda m: [(m >> j) & 1 for j in range(g.n)]):
        strat = tuple((m >> j) & 1 for j in range(g.n))
        utils = tuple(table.node_utility(m, j, cfg.c, mode) for j in range(g.n))
        out.append(EquilibriumProfile(strat, mode, table.designer_value(m, cfg.c, mode), utils))
    return EquilibriumSet(tuple(out), mode, g.n)


def _as_map(g: Network, strategies) -> dict[int, int]:
    if isinstance(strategies, dict):
        return dict(strategies)
    return {v: int(b) for v, b in zip(sorted(g.nodes), strategies)}


def profitable_deviation(g: Network, strategies, cfg: GameConfig,
                         mode: str = "pessimistic") -> int | None:
    """First node that gains strictly by flipping its bit, via the reference engine."""
    _check_mode(mode)
    base = _as_map(g, strategies)
    eng = Engine(g, cfg.f, cfg.n_A)
    for j in sorted(g.nodes):
        flip = dict(base)
        flip[j] = 1 - flip[j]
        if mode == "pessimistic":
            now = pessimistic_node_utility(g, base, j, cfg, eng)
            dev = pessimistic_node_utility(g, flip, j, cfg, eng)
        else:
            now = expected_utilities(g, base, cfg, eng)[1][j]
            dev = expected_utilities(g, flip, cfg, eng)[1][j]
        if dev > now:
            return j
    return None


def is_equilibrium(g: Network, strategies, cfg: GameConfig, mode: str = "pessimistic") -> bool:
    return profitable_deviation(g, strategies, cfg, mode) is None


def designer_value(g: Network, delta, cfg: GameConfig, mode: str = "pessimistic") -> Fraction:
    """The designer's utility once the nodes have chosen ``delta``."""
    _check_mode(mode)
    if mode == "pessimistic":
        return pessimistic_designer_utility(ProtectedNetwork(g, frozenset(delta)), cfg)
    strategies = {v: int(v in delta) for v in g.nodes}
    return expected_utilities(g, strategies, cfg)[0]

"""Decentralized defense: the star equilibrium regimes, the attack on a
byzantine core node, and the price of anarchy.

The price of anarchy divides the centralized optimum by the designer's value
in the worst equilibrium. Each network's node game selects its equilibria
independently, so the minimum over full-game equilibria collapses to: for
every network in the design family take its worst node-game equilibrium,
then let the designer keep the best network. That max-min is the denominator.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .centralized import optimal_design, witness
from .equilibria import NODE_GAME_MAX_N, node_game_equilibria
from .errors import InvalidArgument, LimitExceeded, NetdefError
from .game import Engine, GameConfig
from .graph import Network, build_generalized_star, disjoint_union, network_value, spanning_star
from .oracle import brute_force_optimal
from .rationals import format_rational
from .starspace import star_equilibria


# ---------------------------------------------------------------- star regimes

@dataclass(frozen=True)
class RegimeCheck:
    c: Fraction
    regime: str          # "all", "core", "none" or "uncharacterized"
    status: str          # "PASS", "FAIL" or "uncharacterized"
    equilibria: int
    counterexample: str | None = None

    def to_dict(self) -> dict:
        return {"c": format_rational(self.c), "regime": self.regime, "status": self.status,
                "equilibria": self.equilibria, "counterexample": self.counterexample}


@dataclass(frozen=True)
class StarCharacterizationReport:
    n: int
    k: int
    n_B: int
    n_A: int
    x: int
    y: int
    bounds: tuple[Fraction, Fraction, Fraction]  # f(1), f(x)/x, f(y)/y
    checks: tuple[RegimeCheck, ...]

    @property
    def passed(self) -> bool:
        return all(ch.status != "FAIL" for ch in self.checks)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "n_B": self.n_B, "n_A": self.n_A, "x": self.x,
                "y": self.y, "bounds": [format_rational(b) for b in self.bounds],
                "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def star_regime_parameters(n: int, k: int, n_B: int, n_A: int) -> tuple[int, int]:
    """``x = floor(n/k) - n_A + 1`` and ``y = n - n_B floor(n/k)``."""
    return n // k - n_A + 1, n - n_B * (n // k)


def default_cost_grid(bounds: Sequence[Fraction], points: int = 6) -> list[Fraction]:
    """``points`` interior costs in each characterized interval.

    Bounded intervals (a, b) get a + (b - a) i / (points + 1); the unbounded
    one starts at f(y)/y and steps by multiples of it.
    """
    one, fx, fy = bounds
    grid = []
    intervals = [(Fraction(0), one)]
    if fx > one:
        intervals.append((one, fx))
    for a, b in intervals:
        grid += [a + (b - a) * i / (points + 1) for i in range(1, points + 1)]
    grid += [fy * (points + 1 + i) / (points + 1) for i in range(1, points + 1)]
    return grid


def verify_star_characterization(n: int, k: int, cfg: GameConfig,
                                 cost_grid: Iterable | None = None,
                                 mode: str = "pessimistic") -> StarCharacterizationReport:
    """Check the three protection regimes of the generalized k-star.

    Cheap protection (c < f(1)) protects every node, moderate protection
    (f(1) < c < f(x)/x) protects exactly the core, and expensive protection
    (c > f(y)/y) protects nobody. Costs between f(x)/x and f(y)/y are
    reported as uncharacterized.
    """
    n_B, n_A, f = cfg.n_B, cfg.n_A, cfg.f
    if cfg.n != n:
        raise InvalidArgument(f"config has n = {cfg.n}, expected {n}")
    if not n >= k >= n_B + 1:
        raise InvalidArgument(f"precondition n >= k >= n_B + 1 violated (n={n}, k={k}, n_B={n_B})")
    x, y = star_regime_parameters(n, k, n_B, n_A)
    if x < 2:
        raise InvalidArgument(f"precondition x >= 2 violated (x = floor(n/k) - n_A + 1 = {x})")
    bounds = (Fraction(f(1)), Fraction(f(x), x), Fraction(f(y), y))
    grid = default_cost_grid(bounds) if cost_grid is None else [Fraction(c) for c in cost_grid]
    star = build_generalized_star(n, k)
    checks = []
    for c in grid:
        if c in bounds:
            raise InvalidArgument(f"cost {format_rational(c)} lies on a regime boundary")
        if c < bounds[0]:
            regime, want = "all", (1, 1)
        elif c < bounds[1]:
            regime, want = "core", (1, 0)
        elif c > bounds[2]:
            regime, want = "none", (0, 0)
        else:
            regime, want = "uncharacterized", None
        eqs = node_game_equilibria(star.network, cfg.with_cost(c), mode)
        if want is None:
            checks.append(RegimeCheck(c, regime, "uncharacterized", len(eqs)))
            continue
        bad = None
        for prof in eqs:
            core_ok = all(prof.strategies[v] == want[0] for v in star.core)
            peri_ok = all(prof.strategies[v] == want[1] for v in star.periphery)
            if not (core_ok and peri_ok):
                bad = prof.bits
                break
        if not eqs.exists:
            bad = "no pure equilibrium"
        checks.append(RegimeCheck(c, regime, "PASS" if bad is None else "FAIL", len(eqs), bad))
    return StarCharacterizationReport(n, k, n_B, n_A, x, y, bounds, tuple(checks))


# ------------------------------------------------------- byzantine core attack

@dataclass(frozen=True)
class CoreAttackReport:
    n: int
    k: int
    configurations: int
    failures: tuple[tuple, ...]  # (delta, byzantine set, attack) triples

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "configurations": self.configurations,
                "passed": self.passed,
                "failures": [[sorted(d), sorted(b), sorted(a)] for d, b, a in self.failures]}


def verify_byzantine_core_attack(n: int, k: int, cfg: GameConfig,
                                 delta: Iterable[Iterable[int]] | None = None,
                                 trials: int | None = None, seed: int = 0) -> CoreAttackReport:
    """Every optimal attack infects each byzantine core node.

    Covers all protected sets (or the ones given, or ``trials`` sampled ones)
    and every byzantine set that contains a core node. "Infects" means the
    node lies in the destroyed set of that attack.
    """
    if n < 3 or n // k < 2:
        raise InvalidArgument(f"precondition floor(n/k) >= 2 and n >= 3 violated (n={n}, k={k})")
    if cfg.n != n:
        raise InvalidArgument(f"config has n = {cfg.n}, expected {n}")
    star = build_generalized_star(n, k)
    eng = Engine(star.network, cfg.f, cfg.n_A)
    if delta is not None:
        deltas = [sum(1 << v for v in d) for d in delta]
    elif trials is not None:
        rng = random.Random(seed)
        deltas = [rng.getrandbits(n) for _ in range(trials)]
    else:
        deltas = range(1 << n)
    core = star.core
    byz = [b for b in combinations(range(n), cfg.n_B) if core.intersection(b)]
    failures = []
    count = 0
    for dm in deltas:
        for b in byz:
            bm = sum(1 << v for v in b)
            need = sum(1 << v for v in b if v in core)
            count += 1
            for attack, destroyed in eng.best(dm & ~bm)[1]:
                if destroyed & need != need:
                    failures.append((frozenset(v for v in range(n) if dm >> v & 1),
                                     frozenset(b), frozenset(attack)))
    return CoreAttackReport(n, k, count, tuple(failures))


# ------------------------------------------------------------ price of anarchy

@dataclass(frozen=True)
class FamilyMember:
    name: str
    worst: Fraction | None
    status: str  # "ok", "no pure equilibrium" or "pruned"


@dataclass(frozen=True)
class PoAReport:
    n: int
    c: Fraction
    numerator: Fraction
    denominator: Fraction
    ratio: Fraction | None
    family: str
    best_member: str
    members: tuple[FamilyMember, ...] = field(default=(), repr=False)
    below_regime: bool = False

    def to_dict(self) -> dict:
        return {"n": self.n, "c": format_rational(self.c),
                "numerator": format_rational(self.numerator),
                "denominator": format_rational(self.denominator),
                "ratio": None if self.ratio is None else format_rational(self.ratio),
                "ratio_minus_one": None if self.ratio is None else format_rational(self.ratio - 1),
                "family": self.family, "best_member": self.best_member,
                "below_large_n_regime": self.below_regime}


FAMILY = "generalized k-stars with k > n_B, plus the unprotected splits"


def _centralized_optimum(cfg: GameConfig) -> Fraction:
    if cfg.n_B == 1 and cfg.n_A == 1:
        return optimal_design(cfg.n, cfg.c, cfg.f).payoff
    return brute_force_optimal(cfg, "structured").payoff


def _worst_on_star(k: int, cfg: GameConfig) -> Fraction | None:
    if cfg.n_B == 1 and cfg.n_A == 1:
        return star_equilibria(cfg.n, k, cfg, worst_only=True).worst_designer_value()
    if cfg.n > NODE_GAME_MAX_N:
        raise LimitExceeded(f"node game on a {k}-star needs n <= {NODE_GAME_MAX_N} "
                            "unless n_B = n_A = 1")
    return node_game_equilibria(build_generalized_star(cfg.n, k).network, cfg).worst_designer_value()


def _splits(n: int, f) -> list[tuple[str, Network]]:
    g, _, desc = witness(n, 0, f)
    out = [(desc, g)]
    if n % 6 == 3:
        h = n // 2
        alt = disjoint_union(spanning_star(range(h)), spanning_star(range(h, 2 * h)),
                             spanning_star([n - 1]))
        if alt != g:
            out.append((f"no defense, two components of size {h} and an isolated node", alt))
        third = n // 3
        alt = disjoint_union(*(spanning_star(range(i * third, (i + 1) * third)) for i in range(3)))
        if alt != g:
            out.append((f"no defense, three components of size {third}", alt))
    return out


def price_of_anarchy(cfg: GameConfig) -> PoAReport:
    n = cfg.n
    numerator = _centralized_optimum(cfg)
    members: list[FamilyMember] = []
    best, best_name = None, ""
    for k in range(cfg.n_B + 1, n + 1):
        worst = _worst_on_star(k, cfg)
        name = f"{k}-star"
        members.append(FamilyMember(name, worst, "ok" if worst is not None else "no pure equilibrium"))
        if worst is not None and (best is None or worst > best):
            best, best_name = worst, name
    for name, g in _splits(n, cfg.f):
        # no equilibrium can beat the undamaged network value
        if best is not None and network_value(g, cfg.f) <= best:
            members.append(FamilyMember(name, None, "pruned"))
            continue
        if n > NODE_GAME_MAX_N:
            raise LimitExceeded(f"split {name!r} cannot be pruned and n > {NODE_GAME_MAX_N}")
        worst = node_game_equilibria(g, cfg).worst_designer_value()
        members.append(FamilyMember(name, worst, "ok" if worst is not None else "no pure equilibrium"))
        if worst is not None and (best is None or worst > best):
            best, best_name = worst, name
    if best is None:
        raise NetdefError("no network in the design family has a pure equilibrium")
    ratio = Fraction(numerator) / best if best > 0 else None
    return PoAReport(n, cfg.c, Fraction(numerator), best, ratio, FAMILY, best_name,
                     tuple(members), n < regime_start(cfg))


def threshold_size(cfg: GameConfig) -> int | None:
    """Smallest N >= 1 + n_A with f(x)/x > c at x = N - n_A + 1 (the ratio is nondecreasing)."""
    f = cfg.f
    limit = f.max_argument if f.max_argument is not None else 10 ** 6
    N = 1 + cfg.n_A
    while N - cfg.n_A + 1 <= limit:
        x = N - cfg.n_A + 1
        if Fraction(f(x), x) > cfg.c:
            return N
        N += 1
    return None


def regime_start(cfg: GameConfig) -> int:
    N = threshold_size(cfg)
    return (cfg.n_B + 1) * (N + 1) if N is not None else cfg.n + 1


@dataclass(frozen=True)
class PoATrend:
    c: Fraction
    reports: tuple[PoAReport, ...]
    warnings: tuple[str, ...]
    shift: int | None

    @property
    def ratios(self) -> list[Fraction | None]:
        return [r.ratio for r in self.reports]

    @property
    def decreased(self) -> bool:
        first, last = self.ratios[0], self.ratios[-1]
        return first is not None and last is not None and last < first

    def to_dict(self) -> dict:
        return {"c": format_rational(self.c), "shift": self.shift,
                "warnings": list(self.warnings), "reports": [r.to_dict() for r in self.reports]}


def growth_hypothesis(cfg: GameConfig, n_max: int) -> tuple[int | None, list[str]]:
    """Finite check that f(n)/f(n - t) tends to 1.

    With ``t = n_B (2N + 3) + n_A`` the excess f(n)/f(n - t) - 1 must shrink by
    at least a quarter when n doubles from ``n_max``. Exponential f keeps a
    constant excess and fails.
    """
    N = threshold_size(cfg)
    if N is None:
        return None, ["no N with f(x)/x > c inside the value table; growth hypothesis unchecked"]
    t = cfg.n_B * (2 * N + 3) + cfg.n_A
    f = cfg.f
    far = 2 * n_max
    if f.max_argument is not None and f.max_argument < far:
        return t, [f"value table stops before {far}; growth hypothesis unchecked"]
    if n_max - t < 1:
        return t, [f"n = {n_max} is too small for shift t = {t}; growth hypothesis unchecked"]

    def excess(m):
        return Fraction(f(m), f(m - t)) - 1

    if excess(far) > Fraction(3, 4) * excess(n_max):
        return t, [f"f(n)/f(n-{t}) does not approach 1 (hypothesis fails, e.g. exponential f); "
                   "trend computed anyway"]
    return t, []


def _poa_job(args):
    n, n_B, n_A, c, f = args
    return price_of_anarchy(GameConfig(n, n_B, n_A, c, f))


def poa_trend(c, ns: Sequence[int], n_B: int, n_A: int, f, jobs: int = 1) -> PoATrend:
    ns = list(ns)
    if not ns:
        raise InvalidArgument("empty n sequence")
    probe = GameConfig(max(ns), n_B, n_A, c, f)
    shift, warnings = growth_hypothesis(probe, max(ns))
    args = [(n, n_B, n_A, probe.c, f) for n in ns]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_poa_job, args))
    else:
        reports = [_poa_job(a) for a in args]
    for r in reports:
        if r.below_regime:
            warnings.append(f"n = {r.n} below the large-n regime (n < {regime_start(probe)})")
    return PoATrend(probe.c, tuple(reports), tuple(warnings), shift)


def trend_svg(trend: PoATrend, width: int = 480, height: int = 320) -> str:
    """Line chart of PoA against n as standalone SVG text."""
    pts = [(r.n, r.ratio) for r in trend.reports if r.ratio is not None]
    pad = 48
    xs = [p[0] for p in pts] or [0, 1]
    ys = [float(p[1]) for p in pts] or [1.0]
    x0, x1 = min(xs), max(xs) if max(xs) > min(xs) else min(xs) + 1
    y0, y1 = min(1.0, min(ys)), max(ys) if max(ys) > 1.0 else 1.0 + 1e-9
    if y1 == y0:
        y1 = y0 + 1

    def sx(v):
        return pad + (width - 2 * pad) * (v - x0) / (x1 - x0)

    def sy(v):
        return height - pad - (height - 2 * pad) * (v - y0) / (y1 - y0)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">n</text>',
           f'<text x="14" y="{height / 2:.1f}" font-size="12" '
           f'transform="rotate(-90 14 {height / 2:.1f})" text-anchor="middle">PoA(n, c)</text>']
    if pts:
        path = " ".join(f"{sx(n):.2f},{sy(float(r)):.2f}" for n, r in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="2"/>')
        for n, r in pts:
            out.append(f'<circle cx="{sx(n):.2f}" cy="{sy(float(r)):.2f}" r="3" fill="steelblue"/>')
            out.append(f'<text x="{sx(n):.2f}" y="{height - pad + 16}" text-anchor="middle" '
                       f'font-size="10">{n}</text>')
            out.append(f'<text x="{sx(n):.2f}" y="{sy(float(r)) - 8:.2f}" text-anchor="middle" '
                       f'font-size="10">{float(r):.4f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

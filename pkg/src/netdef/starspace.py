"""Node-game equilibria on generalized k-stars, one byzantine node, one attack.

Profiles are enumerated up to symmetry. Core nodes with equal periphery load
are interchangeable, and so are the periphery nodes of one core. A petal
(core node plus its periphery) is therefore described by ``(L, sigma, p)``:
its load, the core's bit, and how many periphery nodes protect. A profile is
a multiset of petals.

With S the genuinely protected set, the adversary has three kinds of move:

* hit a node of S, destroying nothing (needs S nonempty): value f(n);
* hit an unprotected leaf of a core in S, isolated in the attack graph:
  value f(n-1);
* hit the block formed by cores outside S and their unprotected leaves:
  what survives is the block of cores in S with all their leaves
  (size ``Sb``) plus ``Iso`` protected leaves of cores outside S, each
  alone.

so every quantity follows from five counts: ``D = |Delta|`` and ``Sb``,
``Iso``, ``Ex`` (unprotected leaves of cores in S), ``U`` (cores outside S).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import lcm

from .errors import InvalidArgument, UnsupportedConfiguration
from .game import GameConfig
from .graph import star_loads
from .rationals import format_rational

# node status relative to the attack graph
P, U, I, X = "P", "U", "I", "X"
CORE, PROT, UNPROT = "core", "protected-leaf", "unprotected-leaf"


def _contrib(L: int, s: int, p: int) -> tuple[int, int, int, int, int]:
    if s:
        return (1 + p, 1 + L, 0, L - p, 0)
    return (p, 0, p, 0, 1)


def _add(a, b, sign=1):
    return tuple(x + sign * y for x, y in zip(a, b))


class _Eval:
    def __init__(self, n: int, cfg: GameConfig):
        f = cfg.f
        self.n = n
        self.fv = [f(x) for x in range(n + 1)]
        shares = [Fraction(0)] + [Fraction(self.fv[s], s) for s in range(1, n + 1)]
        m = lcm(*(s.denominator for s in shares))
        p, q = cfg.c.numerator, cfg.c.denominator
        # utilities scaled by q*m; index by component-size code
        self.t0 = [int(s * m) * q for s in shares]
        self.t1 = [v - p * m for v in self.t0]
        self.c = cfg.c

    def reply(self, agg) -> tuple[object, tuple]:
        """Minimum residual value and the best moves as (kind, Sb) pairs."""
        D, Sb, Iso, Ex, Un = agg
        n, fv = self.n, self.fv
        opts = []
        if D >= 1:
            opts.append((fv[n], "a"))
        if Ex >= 1:
            opts.append((fv[n - 1], "b"))
        if Un >= 1:
            opts.append((fv[Sb] + Iso * fv[1], "c"))
        low = min(v for v, _ in opts)
        return low, tuple(k for v, k in opts if v == low), Sb

    def code(self, reply, status: str) -> int:
        _, kinds, Sb = reply
        n = self.n
        out = n
        for kind in kinds:
            if kind == "a":
                v = n
            elif kind == "b":
                v = 0 if status == X else n - 1
            else:
                v = Sb if status in (P, X) else (0 if status == U else 1)
            out = min(out, v)
        return out


def _status(role: str, s: int) -> str:
    if role == CORE:
        return P if s else U
    if role == PROT:
        return P if s else I
    return X if s else U


def _bit(role: str, s: int) -> int:
    return s if role == CORE else int(role == PROT)


class _Profile:
    """A multiset of petal states with its aggregate counts."""

    def __init__(self, mult: dict):
        self.mult = {st: m for st, m in mult.items() if m}
        agg = (0, 0, 0, 0, 0)
        for (L, s, p), m in self.mult.items():
            agg = _add(agg, tuple(m * x for x in _contrib(L, s, p)))
        self.agg = agg
        self.pp1 = sum(p * m for (L, s, p), m in self.mult.items() if s)
        self.pp0 = sum(p * m for (L, s, p), m in self.mult.items() if not s)
        self.neutral = sum(m * ((L - p) + (0 if s else 1)) for (L, s, p), m in self.mult.items())

    def btypes(self, ev: _Eval, exclude=None):
        """Byzantine placements as (reply, kind, detail, count); ``exclude``
        is ``(role, state)`` of a node that cannot be byzantine."""
        role, st = exclude if exclude else (None, None)
        out = []
        for state, m in self.mult.items():
            L, s, p = state
            if not s:
                continue
            cnt = m - (1 if st == state else 0)
            # a leaf's own core is handled separately by the caller
            if cnt > 0:
                after = _add(self.agg, (-1, -(1 + L), p, -(L - p), 1))
                out.append((ev.reply(after), "core", state, cnt))
        D, Sb, Iso, Ex, Un = self.agg
        cnt = self.pp1 - (1 if role == PROT and st[1] else 0)
        if cnt > 0:
            out.append((ev.reply((D - 1, Sb, Iso, Ex + 1, Un)), "pp1", None, cnt))
        cnt = self.pp0 - (1 if role == PROT and not st[1] else 0)
        if cnt > 0:
            out.append((ev.reply((D - 1, Sb, Iso - 1, Ex, Un)), "pp0", None, cnt))
        j_neutral = role == UNPROT or (role == CORE and not st[1])
        cnt = self.neutral - (1 if j_neutral else 0)
        if cnt > 0:
            out.append((ev.reply(self.agg), "neutral", None, cnt))
        return out

    def designer(self, ev: _Eval):
        """Pessimistic designer value of the profile."""
        low = min(r[0] for r, *_ in self.btypes(ev))
        return low - self.agg[0] * ev.c

    def utility(self, ev: _Eval, role: str, state) -> int:
        L, s, p = state
        status = _status(role, s)
        code = ev.n
        for reply, *_ in self.btypes(ev, (role, state)):
            code = min(code, ev.code(reply, status))
        if role != CORE and s:
            after = _add(self.agg, (-1, -(1 + L), p, -(L - p), 1))
            code = min(code, ev.code(ev.reply(after), I if role == PROT else U))
        table = ev.t1 if _bit(role, s) else ev.t0
        return table[code]

    def deviate(self, role: str, state) -> tuple["_Profile", str, tuple]:
        L, s, p = state
        if role == CORE:
            new, nrole = (L, 1 - s, p), CORE
        elif role == PROT:
            new, nrole = (L, s, p - 1), UNPROT
        else:
            new, nrole = (L, s, p + 1), PROT
        mult = dict(self.mult)
        mult[state] -= 1
        mult[new] = mult.get(new, 0) + 1
        return _Profile(mult), nrole, new

    def is_equilibrium(self, ev: _Eval) -> bool:
        for state in self.mult:
            L, s, p = state
            roles = [CORE]
            if p:
                roles.append(PROT)
            if L - p:
                roles.append(UNPROT)
            for role in roles:
                other, nrole, nstate = self.deviate(role, state)
                if other.utility(ev, nrole, nstate) > self.utility(ev, role, state):
                    return False
        return True


@dataclass(frozen=True)
class StarEquilibrium:
    petals: tuple  # ((L, sigma, p), ...) sorted
    designer_value: Fraction

    def to_dict(self) -> dict:
        return {"petals": [list(t) for t in self.petals],
                "designer_value": format_rational(self.designer_value)}


@dataclass(frozen=True)
class StarEquilibria:
    n: int
    k: int
    equilibria: tuple[StarEquilibrium, ...]
    profiles_checked: int

    @property
    def exists(self) -> bool:
        return bool(self.equilibria)

    def worst_designer_value(self) -> Fraction | None:
        return min((e.designer_value for e in self.equilibria), default=None)


def _allowed(L: int, k: int, ev: _Eval, cfg: GameConfig, prune: bool):
    sigmas, ps = (0, 1), range(L + 1)
    if prune:
        # a protected leaf always gets f(1) - c and an unprotected one 0
        f1 = ev.fv[1]
        if cfg.c < f1:
            ps = [L]
        elif cfg.c > f1:
            ps = [0]
        # an unprotected core gets 0; a protected one at least f(1+L)/(1+L) - c
        if k >= 2 and Fraction(ev.fv[1 + L], 1 + L) > cfg.c:
            sigmas = (1,)
    return [(L, s, p) for s in sigmas for p in ps]


def star_equilibria(n: int, k: int, cfg: GameConfig, prune: bool = True,
                    worst_only: bool = False) -> StarEquilibria:
    """All pessimistic equilibria of the node game on the canonical k-star, up to symmetry.

    With ``prune`` the leaf bits and, where forced, the core bits are fixed by
    dominance before enumeration; every remaining profile is still checked in
    full. ``worst_only`` keeps just the equilibria of lowest designer value.
    """
    if cfg.n_B != 1 or cfg.n_A != 1:
        raise UnsupportedConfiguration("the star solver handles n_B = n_A = 1 only")
    if not 1 <= k <= n or n != cfg.n:
        raise InvalidArgument(f"need 1 <= k <= n = {cfg.n}, got n={n}, k={k}")
    ev = _Eval(n, cfg)
    loads = star_loads(n, k)
    classes = sorted({L: loads.count(L) for L in loads}.items())
    per_class = [list(combinations_with_replacement(_allowed(L, k, ev, cfg, prune), cnt))
                 for L, cnt in classes]
    found: list[StarEquilibrium] = []
    checked = 0
    worst = None
    for combo in product(*per_class):
        petals = tuple(st for part in combo for st in part)
        mult: dict = {}
        for st in petals:
            mult[st] = mult.get(st, 0) + 1
        prof = _Profile(mult)
        checked += 1
        value = prof.designer(ev)
        if worst_only and worst is not None and value > worst:
            continue
        if not prof.is_equilibrium(ev):
            continue
        if worst_only:
            if worst is None or value < worst:
                worst, found = value, []
        found.append(StarEquilibrium(petals, value))
    return StarEquilibria(n, k, tuple(found), checked)

"""Component value functions ``f`` and finite-range checks of their assumptions.

Built-in families are evaluated in exact integer arithmetic. User tables may
hold integers or rationals and must cover every argument that is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, InvalidArgument
from .rationals import parse_rational, format_rational

FAMILIES = ("power", "exp", "table")


@dataclass(frozen=True)
class ValueFunction:
    family: str
    a: int | None = None
    values: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgument(f"unknown family {self.family!r}")
        if self.family == "power" and (self.a is None or self.a < 2):
            raise InvalidArgument("power family needs an integer exponent a >= 2")
        if self.family == "table" and not self.values:
            raise InvalidArgument("table family needs at least one value")

    @classmethod
    def power(cls, a: int = 2) -> "ValueFunction":
        return cls("power", a=int(a))

    @classmethod
    def exp(cls) -> "ValueFunction":
        return cls("exp")

    @classmethod
    def table(cls, values: Sequence) -> "ValueFunction":
        return cls("table", values=tuple(_exact(v) for v in values))

    @property
    def max_argument(self) -> int | None:
        return len(self.values) - 1 if self.family == "table" else None

    def require(self, x_max: int) -> None:
        """Raise DomainError unless every integer in ``[0, x_max]`` can be evaluated."""
        if self.family == "table" and x_max > self.max_argument:
            raise DomainError(
                f"value table covers [0, {self.max_argument}] but {x_max} is needed")

    def __call__(self, x: int):
        if x < 0:
            raise DomainError(f"f is defined on non-negative integers, got {x}")
        if self.family == "power":
            return x ** self.a
        if self.family == "exp":
            return 2 ** x - 1
        if x > self.max_argument:
            raise DomainError(f"value table has no entry for {x}")
        return self.values[x]

    def share(self, x: int) -> Fraction:
        """Per-node share ``f(x)/x`` of a component of size ``x`` (0 for x = 0)."""
        return Fraction(0) if x == 0 else Fraction(self(x), x)

    @property
    def label(self) -> str:
        if self.family == "power":
            return f"x^{self.a}"
        if self.family == "exp":
            return "2^x-1"
        return f"table[{len(self.values)}]"

    def to_dict(self) -> dict:
        if self.family == "power":
            return {"family": "power", "a": self.a}
        if self.family == "exp":
            return {"family": "exp"}
        return {"family": "table", "values": [_plain(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: dict) -> "ValueFunction":
        fam = data.get("family")
        if fam == "power":
            return cls.power(data.get("a", 2))
        if fam == "exp":
            return cls.exp()
        if fam == "table":
            return cls.table(data["values"])
        raise InvalidArgument(f"unknown family {fam!r}")


def _exact(v):
    if isinstance(v, bool):
        raise InvalidArgument("boolean is not a table value")
    if isinstance(v, int):
        return v
    q = parse_rational(v)
    return q.numerator if q.denominator == 1 else q


def _plain(v):
    return v if isinstance(v, int) else format_rational(v)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"passed": self.passed, "witness": list(self.witness) if self.witness else None,
                "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    x_max: int
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> dict[str, CheckResult]:
        return {k: c for k, c in self.checks.items() if not c.passed}

    def to_dict(self) -> dict:
        return {"range": [0, self.x_max], "ok": self.ok,
                "checks": {k: c.to_dict() for k, c in self.checks.items()}}


def _first(pred, points, detail):
    for pt in points:
        if not pred(*pt):
            return CheckResult(False, pt, detail)
    return CheckResult(True)


def validate_value_function(f: ValueFunction, x_max: int) -> ValidationReport:
    """Check every modelling assumption on f at the integers of ``[0, x_max]``.

    Failures are reported with the first counterexample, never raised.
    """
    if x_max < 3:
        raise InvalidArgument("x_max must be at least 3")
    f.require(x_max)
    v = [f(x) for x in range(x_max + 1)]
    checks = {
        "zero_at_origin": CheckResult(v[0] == 0, None if v[0] == 0 else (0,), "f(0) = 0"),
        "strictly_increasing": _first(
            lambda x: v[x + 1] > v[x], ((x,) for x in range(x_max)), "f(x+1) > f(x)"),
        "strictly_convex": _first(
            lambda x: v[x + 1] - v[x] > v[x] - v[x - 1], ((x,) for x in range(1, x_max)),
            "f(x+1) - f(x) > f(x) - f(x-1)"),
        "move_half_even": _first(
            lambda x: v[3 * x] >= 2 * v[2 * x],
            ((x,) for x in range(1, x_max // 3 + 1)), "f(3x) >= 2 f(2x)"),
        "move_half_odd": _first(
            lambda x: v[3 * x + 2] >= v[2 * x + 2] + v[2 * x + 1],
            ((x,) for x in range(1, (x_max - 2) // 3 + 1)), "f(3x+2) >= f(2x+2) + f(2x+1)"),
        "superadditive": _first(
            lambda x, y: v[x + y] > v[x] + v[y],
            ((x, y) for x in range(1, x_max) for y in range(x, x_max - x + 1)),
            "f(x+y) > f(x) + f(y)"),
        "ratio_nondecreasing": _first(
            lambda x: v[x + 1] * x >= v[x] * (x + 1), ((x,) for x in range(1, x_max)),
            "f(x)/x nondecreasing"),
        "gap_increasing": _first(
            lambda t, x: v[x + 1 + t] - v[x + 1] > v[x + t] - v[x],
            ((t, x) for t in range(1, x_max) for x in range(0, x_max - t)),
            "x -> f(x+t) - f(x) strictly increasing"),
        "moving_half": _first(
            lambda x, y, odd: v[x + y] >= v[x] + v[2 * y + odd],
            ((x, y, odd) for y in range(1, x_max) for odd in (0, 1)
             for x in range(2 * y + 2 * odd, x_max - y + 1)),
            "f(x+y) >= f(x) + f(2y) for x >= 2y, and f(x) + f(2y+1) for x >= 2y+2"),
    }
    return ValidationReport(x_max, checks)


@lru_cache(maxsize=256)
def cached_report(f: ValueFunction, x_max: int) -> ValidationReport:
    return validate_value_function(f, max(x_max, 3))


def require_valid(f: ValueFunction, n: int) -> None:
    """Refuse to play a game on ``n`` nodes unless f passes every check on ``[0, n]``."""
    report = cached_report(f, n)
    if not report.ok:
        name, res = next(iter(report.failures().items()))
        raise DomainError(f"value function {f.label} fails {name} on [0, {report.x_max}]"
                          f" (witness {res.witness})")

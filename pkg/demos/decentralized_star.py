"""Who protects themselves on a 12-node star with 4 core nodes.

At each cost the nodes' pure equilibria are enumerated; cheap protection is
bought by everyone, moderate protection only by the core, and expensive
protection by nobody.
"""

from fractions import Fraction

from netdef import GameConfig, ValueFunction, build_generalized_star, node_game_equilibria
from netdef.rationals import format_rational

f = ValueFunction.power(2)
star = build_generalized_star(12, 4)
core = sorted(star.core)

for c in (Fraction(1, 2), Fraction(2), Fraction(5), Fraction(10)):
    eqs = node_game_equilibria(star.network, GameConfig(12, 1, 1, c, f))
    print(f"c = {format_rational(c)}")
    for p in eqs:
        cb = "".join(str(p.strategies[v]) for v in core)
        pb = "".join(str(p.strategies[v]) for v in range(4, 12))
        print(f"  core {cb} periphery {pb} designer {format_rational(p.designer_value)}")
    if not eqs.exists:
        print("  no pure equilibrium")

"""Where protection stops paying off when one designer decides everything.

Prints the cost thresholds for f(x) = x^2 on 12, 30 and 50 nodes, then
checks one optimum against exhaustive search over every graph on 5 nodes.
"""

from netdef import GameConfig, ValueFunction, brute_force_optimal, optimal_design, threshold_table
from netdef.rationals import format_rational

f = ValueFunction.power(2)

for n in (12, 30, 50):
    print(f"n = {n}")
    for row in threshold_table(n, f).rows:
        print(f"  {row.interval_text():<22} {row.description}")

# the closed form against a search that knows nothing about stars
for c in ("1/4", "1", "4", "16"):
    closed = optimal_design(5, c, f)
    found = brute_force_optimal(GameConfig(5, 1, 1, c, f))
    print(f"n=5 c={c}: closed form {format_rational(closed.payoff)}, "
          f"exhaustive {format_rational(found.payoff)}")

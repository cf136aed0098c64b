"""Price of anarchy for f(x) = x^2 at cost 1 as the network grows.

Writes poa_trend.svg next to the working directory. Takes about half a minute.
"""

from netdef import ValueFunction, poa_trend
from netdef.analysis import trend_svg

trend = poa_trend(1, [12, 24, 36, 48, 60], 1, 1, ValueFunction.power(2))
for r in trend.reports:
    print(f"n={r.n:>3}  PoA={r.ratio} ({float(r.ratio):.4f})  best design: {r.best_member}")
for w in trend.warnings:
    print("warning:", w)

with open("poa_trend.svg", "w", encoding="utf-8") as fh:
    fh.write(trend_svg(trend))

"""Acceptance criteria, one test each; verdicts are listed in the terminal summary."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import ACCEPTANCE, CUBE, EXP, SQUARE
from netdef import (GameConfig, InvalidArgument, Network, ProtectedNetwork, ValueFunction,
                    brute_force_optimal, canonicalize_to_star, components, is_generalized_star,
                    optimal_design, pessimistic_designer_utility, poa_trend, threshold_table,
                    validate_value_function, verify_byzantine_core_attack,
                    verify_star_characterization)
from netdef.centralized import protected_component
from netdef.cli import main

# desk-scale stand-in for the large-n limit of the price of anarchy; the
# computed value at n = 60 is 3421/3305 (about 1.035)
POA_60_BOUND = Fraction(5, 4)


@contextmanager
def criterion(num, title, limit):
    start = time.perf_counter()
    verdict = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        verdict = "PASS"
    finally:
        ACCEPTANCE[num] = (verdict, title, time.perf_counter() - start)
        print(f"{verdict} criterion {num}: {title}")


def test_criterion_1_threshold_table_reproduction(capsys):
    with criterion(1, "threshold tables for n = 12, 30, 50 match the embedded fixture", 1.0):
        for n in (12, 30, 50):
            assert main(["thresholds", "--n", str(n), "--expect", "table2"]) == 0
        assert threshold_table(12, SQUARE).breakpoints == [Fraction(7, 2), Fraction(19, 2),
                                                          Fraction(45, 4)]
        assert threshold_table(30, SQUARE).breakpoints == [Fraction(19, 5), 11, 26, 49,
                                                          Fraction(351, 5)]
        fifty = threshold_table(50, SQUARE).breakpoints
        assert fifty[-1] == 195 and Fraction(91, 3) in fifty
    assert "MISMATCH" not in capsys.readouterr().err


def test_criterion_2_nine_nodes_split_in_three():
    with criterion(2, "n = 9 optimum is three parts of size 3 exactly when c > 31/5", 1.0):
        edge = Fraction(31, 5)
        for c in (edge + Fraction(1, 10 ** 6), 7, 50, 10 ** 4):
            out = optimal_design(9, c, SQUARE)
            assert out.k == 0 and out.alternatives == (0,)
            assert sorted(len(p) for p in components(out.network)) == [3, 3, 3]
        for c in (edge - Fraction(1, 10 ** 6), 6, 1):
            assert 0 not in optimal_design(9, c, SQUARE).alternatives
        assert 0 in optimal_design(9, edge, SQUARE).alternatives


def test_criterion_3_oracle_equivalence():
    with criterion(3, "exhaustive search over all graphs equals the closed form, n = 3..6", 300):
        for n in (3, 4, 5, 6):
            for c in (Fraction(1, 4), 1, 4, 16, 64):
                cfg = GameConfig(n, 1, 1, c, SQUARE)
                assert brute_force_optimal(cfg, "all-graphs").payoff == \
                    optimal_design(n, c, SQUARE).payoff, (n, c)


def test_criterion_4_star_characterization():
    with criterion(4, "equilibrium regimes on generalized stars", 120):
        ran, skipped = [], []
        for n, k in [(12, 4), (12, 6), (15, 3), (16, 4)]:
            for n_B, n_A in [(1, 1), (2, 1), (1, 2)]:
                cfg = GameConfig(n, n_B, n_A, 1, SQUARE)
                try:
                    rep = verify_star_characterization(n, k, cfg)
                except InvalidArgument:
                    skipped.append((n, k, n_B, n_A))
                    continue
                assert rep.passed, rep.to_dict()
                # six costs in each of the three characterized intervals
                assert sum(ch.regime != "uncharacterized" for ch in rep.checks) == 18
                ran.append((n, k, n_B, n_A))
        # only (12, 6) with two attacks has x = floor(n/k) - n_A + 1 < 2
        assert skipped == [(12, 6, 1, 2)]
        assert len(ran) == 11


def test_criterion_5_byzantine_core_attack():
    with criterion(5, "optimal attacks infect byzantine core nodes, all protected sets", 120):
        for n in range(3, 11):
            for k in range(2, 6):
                if n // k < 2:
                    continue
                for n_B in (1, 2):
                    if n_B >= n:
                        continue
                    rep = verify_byzantine_core_attack(n, k, GameConfig(n, n_B, 1, 1, SQUARE))
                    assert rep.passed, rep.to_dict()
                    assert rep.configurations > 0


def test_criterion_6_canonicalization_monotone():
    with criterion(6, "rewiring into a star never lowers the designer's utility", 120):
        rng = random.Random(20240611)
        for _ in range(200):
            n = rng.randint(4, 10)
            p = rng.choice([0.2, 0.35, 0.5])
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
            g = Network.from_edges(n, edges)
            delta = frozenset(rng.sample(range(n), rng.choice([2, 3, 4])))
            cfg = GameConfig(n, 1, 1, rng.choice([Fraction(1, 2), 1, 2, 5, 20]), SQUARE)
            pn = ProtectedNetwork(g, delta)
            out = canonicalize_to_star(pn, cfg)
            assert pessimistic_designer_utility(out, cfg) >= pessimistic_designer_utility(pn, cfg)
            assert is_generalized_star(protected_component(out), delta)


def test_criterion_7_poa_trend():
    with criterion(7, "price of anarchy falls from n = 12 to n = 60 and ends below 5/4", 600):
        trend = poa_trend(1, [12, 24, 36, 48, 60], 1, 1, SQUARE)
        first, last = trend.ratios[0], trend.ratios[-1]
        assert last < first
        assert last < POA_60_BOUND
        assert not trend.warnings


def test_criterion_8_value_function_suite():
    with criterion(8, "assumption checks pass for x^2, x^3, 2^x-1 and fail for x", 1.0):
        for f, x_max in [(SQUARE, 100), (CUBE, 100), (EXP, 100), (EXP, 40)]:
            assert validate_value_function(f, x_max).ok, f.label
        report = validate_value_function(ValueFunction.table(range(101)), 100)
        assert not report.ok
        assert all(r.witness is not None for r in report.failures().values())
        assert report.failures()["strictly_convex"].witness == (1,)


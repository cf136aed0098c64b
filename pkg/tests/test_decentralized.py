import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import EXP, SQUARE, networks
from netdef import (GameConfig, InvalidArgument, LimitExceeded, Network, ProtectedNetwork,
                    UnsupportedConfiguration, best_response_attacks, build_generalized_star,
                    is_equilibrium, node_game_equilibria, optimal_design, poa_trend,
                    price_of_anarchy, residual_network, star_equilibria,
                    verify_byzantine_core_attack, verify_star_characterization)
from netdef.analysis import growth_hypothesis, regime_start, threshold_size, trend_svg
from netdef.equilibria import designer_value, profile_table


def cfg(n, c, n_B=1, n_A=1, f=SQUARE):
    return GameConfig(n, n_B, n_A, c, f)


STAR_12_4 = build_generalized_star(12, 4)


def _uniform(eqs, star, core_bit, periphery_bit):
    return eqs.exists and all(
        all(p.strategies[v] == core_bit for v in star.core)
        and all(p.strategies[v] == periphery_bit for v in star.periphery) for p in eqs)


def test_moderate_cost_protects_core_only():
    eqs = node_game_equilibria(STAR_12_4.network, cfg(12, 2))
    assert _uniform(eqs, STAR_12_4, 1, 0)
    assert eqs[0].bits == "111100000000"
    assert eqs[0].designer_value == 73


def test_cheap_protection_protects_everyone():
    assert _uniform(node_game_equilibria(STAR_12_4.network, cfg(12, Fraction(1, 2))), STAR_12_4, 1, 1)


def test_expensive_protection_protects_nobody():
    assert _uniform(node_game_equilibria(STAR_12_4.network, cfg(12, 10)), STAR_12_4, 0, 0)


def test_equilibria_sorted_by_bit_vector():
    g = Network.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    eqs = node_game_equilibria(g, cfg(5, Fraction(3, 2)))
    keys = [p.strategies for p in eqs]
    assert keys == sorted(keys)


def test_node_game_size_limit():
    with pytest.raises(LimitExceeded):
        node_game_equilibria(build_generalized_star(21, 3).network, cfg(21, 1))


def test_node_game_network_must_match_config():
    with pytest.raises(InvalidArgument):
        node_game_equilibria(STAR_12_4.network, cfg(11, 1))


@given(networks(min_n=3, max_n=6), st.sampled_from([Fraction(1, 2), 1, Fraction(3, 2), 3, 7]),
       st.sampled_from(["pessimistic", "expected"]), st.integers(1, 2), st.integers(1, 2))
def test_vectorized_equilibria_match_reference_route(g, c, mode, n_B, n_A):
    game = cfg(g.n, c, n_B, n_A)
    found = {p.strategies for p in node_game_equilibria(g, game, mode)}
    want = {bits for bits in product((0, 1), repeat=g.n) if is_equilibrium(g, bits, game, mode)}
    assert found == want


@given(networks(min_n=3, max_n=6), st.sampled_from(["pessimistic", "expected"]), st.data())
def test_profile_values_match_reference_route(g, mode, data):
    game = cfg(g.n, Fraction(5, 4), data.draw(st.integers(1, 2)))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    table = profile_table(g, game.f, game.n_B, game.n_A)
    mask = sum(b << j for j, b in enumerate(bits))
    assert table.designer_value(mask, game.c, mode) == designer_value(
        g, {j for j, b in enumerate(bits) if b}, game, mode)


def test_byzantine_bit_never_matters_to_the_adversary():
    rng = random.Random(7)
    game = cfg(8, 2)
    g = build_generalized_star(8, 3).network
    for _ in range(100):
        delta = {v for v in range(8) if rng.random() < 0.5}
        b = rng.randrange(8)
        attack = {rng.randrange(8)}
        x = residual_network(ProtectedNetwork(g, delta), {b}, attack, game)
        y = residual_network(ProtectedNetwork(g, delta ^ {b}), {b}, attack, game)
        assert x.adversary_payoff == y.adversary_payoff and x.destroyed == y.destroyed


@pytest.mark.parametrize("n", range(4, 12))
def test_star_solver_matches_full_enumeration(n):
    for k in range(2, n + 1):
        for c in [Fraction(1, 3), 1, Fraction(3, 2), 2, 3, 5, Fraction(21, 2), 40]:
            game = cfg(n, c)
            eqs = node_game_equilibria(build_generalized_star(n, k).network, game)
            for prune in (True, False):
                sol = star_equilibria(n, k, game, prune=prune)
                assert sol.exists == eqs.exists
                assert sol.worst_designer_value() == eqs.worst_designer_value()
                assert star_equilibria(n, k, game, worst_only=True).worst_designer_value() == \
                    eqs.worst_designer_value()


def test_star_solver_handles_exponential_values():
    for n, k in [(7, 2), (9, 3), (10, 5)]:
        for c in [Fraction(1, 2), 2, 9, 100]:
            game = cfg(n, c, f=EXP)
            eqs = node_game_equilibria(build_generalized_star(n, k).network, game)
            assert star_equilibria(n, k, game).worst_designer_value() == eqs.worst_designer_value()


def test_star_solver_scope():
    with pytest.raises(UnsupportedConfiguration):
        star_equilibria(12, 4, cfg(12, 1, n_B=2))
    with pytest.raises(InvalidArgument):
        star_equilibria(12, 13, cfg(12, 1))


# ---------------------------------------------------------- star regimes

def test_characterization_twelve_four():
    rep = verify_star_characterization(12, 4, cfg(12, 1))
    assert (rep.x, rep.y) == (3, 9)
    assert rep.bounds == (1, 3, 9)
    assert rep.passed
    assert {ch.regime for ch in rep.checks} == {"all", "core", "none"}
    assert all(ch.status == "PASS" for ch in rep.checks)


def test_characterization_fifteen_three_two_byzantine():
    rep = verify_star_characterization(15, 3, cfg(15, 1, n_B=2), cost_grid=["1/2", 3, 7])
    assert (rep.x, rep.y) == (5, 5)
    assert [ch.status for ch in rep.checks] == ["PASS", "PASS", "PASS"]


def test_characterization_silent_between_bounds():
    rep = verify_star_characterization(12, 4, cfg(12, 1), cost_grid=[5])
    assert rep.checks[0].regime == "uncharacterized"
    assert rep.checks[0].status == "uncharacterized"
    assert rep.passed


@pytest.mark.parametrize("n,k", [(12, 4), (12, 3), (10, 2), (9, 3)])
def test_expected_mode_protects_core_in_middle_regime(n, k):
    star = build_generalized_star(n, k)
    x = n // k
    lo, hi = Fraction(SQUARE(1)), Fraction(SQUARE(x), x)
    for i in range(1, 5):
        eqs = node_game_equilibria(star.network, cfg(n, lo + (hi - lo) * i / 5), "expected")
        assert eqs.exists
        assert all(p.strategies[v] == 1 for p in eqs for v in star.core)


@pytest.mark.parametrize("n,k,n_B,n_A,grid", [
    (12, 1, 1, 1, [2]),      # k < n_B + 1
    (12, 6, 1, 2, [2]),      # x = 1
    (12, 4, 1, 1, [3]),      # on the boundary f(x)/x
    (12, 4, 1, 1, [1]),      # on the boundary f(1)
])
def test_characterization_preconditions(n, k, n_B, n_A, grid):
    with pytest.raises(InvalidArgument):
        verify_star_characterization(n, k, cfg(n, 1, n_B, n_A), cost_grid=grid)


# ---------------------------------------------------- byzantine core attack

def test_core_attack_with_protected_core():
    star = STAR_12_4
    plans = best_response_attacks(ProtectedNetwork(star.network, star.core), {0}, cfg(12, 1))
    # the byzantine core node or one of its leaves: every one destroys the same petal
    assert plans == [frozenset({0}), frozenset({4}), frozenset({8})]
    rep = verify_byzantine_core_attack(12, 4, cfg(12, 1), delta=[star.core])
    assert rep.passed and rep.configurations == 4


def test_core_attack_without_protection():
    plans = best_response_attacks(ProtectedNetwork(STAR_12_4.network, set()), {0}, cfg(12, 1))
    assert frozenset({0}) in plans and len(plans) == 12


def test_core_attack_two_byzantine():
    star = build_generalized_star(8, 4)
    game = cfg(8, 1, n_B=2)
    for p in star.periphery:
        for plan in best_response_attacks(ProtectedNetwork(star.network, star.core), {0, p}, game):
            assert 0 in residual_network(ProtectedNetwork(star.network, star.core), {0, p},
                                         plan, game).destroyed
    assert verify_byzantine_core_attack(8, 4, game).passed


def test_core_attack_sampled_and_precondition():
    assert verify_byzantine_core_attack(10, 3, cfg(10, 1), trials=50, seed=3).passed
    with pytest.raises(InvalidArgument):
        verify_byzantine_core_attack(10, 6, cfg(10, 1))


# ------------------------------------------------------------ price of anarchy

def test_poa_equal_when_split_is_optimal_everywhere():
    rep = price_of_anarchy(cfg(9, 10))
    assert rep.ratio == 1
    assert rep.best_member == "no defense, three components of size 3"


def test_poa_twelve_cost_two():
    rep = price_of_anarchy(cfg(12, 2))
    assert rep.numerator == optimal_design(12, 2, SQUARE).payoff == 97
    assert rep.denominator == 73 and rep.best_member == "4-star"
    assert rep.ratio == Fraction(97, 73)


@pytest.mark.parametrize("n", [6, 9, 10])
@pytest.mark.parametrize("c", [Fraction(1, 2), 2, 5, 30])
def test_poa_at_least_one(n, c):
    rep = price_of_anarchy(cfg(n, c))
    if rep.denominator > 0:
        assert rep.ratio >= 1


def test_poa_general_byzantine_counts():
    rep = price_of_anarchy(cfg(8, 2, n_B=2))
    assert rep.ratio is None or rep.ratio >= 1
    assert rep.numerator > 0


def test_regime_flags():
    game = cfg(12, 10)
    assert threshold_size(game) == 11
    assert regime_start(game) == 24
    assert price_of_anarchy(game).below_regime


def test_growth_hypothesis():
    t, warnings = growth_hypothesis(cfg(60, 1), 60)
    assert t == 8 and not warnings
    _, warnings = growth_hypothesis(cfg(30, 1, f=EXP), 30)
    assert warnings and "does not approach 1" in warnings[0]


def test_small_trend_and_svg():
    trend = poa_trend(1, [6, 9, 12], 1, 1, SQUARE)
    assert [r.n for r in trend.reports] == [6, 9, 12]
    assert trend.ratios[-1] == Fraction(109, 89)
    svg = trend_svg(trend)
    assert svg.startswith("<svg") and svg.count("<circle") == 3


def test_exponential_trend_warns():
    trend = poa_trend(1, [6, 12], 1, 1, EXP)
    assert any("does not approach 1" in w for w in trend.warnings)

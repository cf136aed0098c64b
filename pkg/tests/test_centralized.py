import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import CUBE, EXP, SQUARE, random_connected
from netdef import (GameConfig, InvalidArgument, LimitExceeded, Network, ProtectedNetwork,
                    UnsupportedConfiguration, brute_force_optimal, build_generalized_star,
                    canonicalize_to_star, components, is_generalized_star, optimal_design,
                    pessimistic_designer_utility, threshold_table, w_two, w_value)
from netdef.centralized import protected_component, w_values, witness
from netdef.graph import induced_subgraph


def cfg(n, c=1, n_B=1, n_A=1, f=SQUARE):
    return GameConfig(n, n_B, n_A, c, f)


@pytest.mark.parametrize("n,k,want", [(12, 6, 100), (12, 0, 36), (9, 0, 18), (6, 2, 9)])
def test_w_examples(n, k, want):
    assert w_value(n, k, SQUARE) == want


def test_w_two_prefers_smallest_maximizing_q():
    res = w_two(6, SQUARE)
    assert (res.value, res.q, res.singleton) == (9, 0, False)


def test_w_two_h_values_on_six():
    f = SQUARE

    def h(q):
        a = min(f(6 - q), f((6 - q) // 2) + f(q))
        b = min(f(5 - q), f((5 - q) // 2) + f(q)) + f(1)
        return max(a, b)

    assert [h(q) for q in range(5)] == [9, 6, 8, 9, 4]


@pytest.mark.parametrize("k", [-1, 13])
def test_w_rejects_k_out_of_range(k):
    with pytest.raises(InvalidArgument):
        w_value(12, k, SQUARE)


@pytest.mark.parametrize("f", [SQUARE, CUBE, EXP])
def test_one_protected_node_is_worth_nothing(f):
    for n in range(3, 41):
        assert w_value(n, 1, f) == w_value(n, 0, f)


def test_witnesses_achieve_formula_for_square_up_to_forty():
    for n in range(3, 41):
        w = w_values(n, SQUARE)
        game = cfg(n, c=Fraction(7, 3))
        for k in range(n + 1):
            g, delta, _ = witness(n, k, SQUARE)
            assert g.nodes == frozenset(range(n)) and len(delta) == k
            got = pessimistic_designer_utility(ProtectedNetwork(g, delta), game)
            assert got == w[k] - k * game.c, (n, k)


@pytest.mark.parametrize("f", [CUBE, EXP])
def test_witnesses_achieve_formula_for_other_families(f):
    for n in range(3, 21):
        w = w_values(n, f)
        for k in range(n + 1):
            g, delta, _ = witness(n, k, f)
            assert pessimistic_designer_utility(ProtectedNetwork(g, delta), cfg(n, f=f)) == w[k] - k


def test_optimal_design_six_star():
    out = optimal_design(12, 5, SQUARE)
    assert (out.k, out.payoff, out.description) == (6, 70, "6-star")
    assert is_generalized_star(out.network, out.delta)


def test_optimal_design_five_star_on_fifty():
    out = optimal_design(50, 100, SQUARE)
    assert (out.k, out.payoff) == (5, 1100)


def test_optimal_design_nine_nodes_high_cost():
    out = optimal_design(9, 7, SQUARE)
    assert out.k == 0 and out.alternatives == (0,)
    assert sorted(len(c) for c in components(out.network)) == [3, 3, 3]


def test_optimal_design_needs_single_byzantine_and_attack():
    with pytest.raises(UnsupportedConfiguration):
        optimal_design(9, 1, SQUARE, n_B=2)


def test_optimal_design_payoff_recomputed_by_engine():
    for c in ["1/4", "3.5", "10", "100"]:
        out = optimal_design(20, c, SQUARE)
        got = pessimistic_designer_utility(ProtectedNetwork(out.network, out.delta), cfg(20, c))
        assert got == out.payoff and 1 not in out.alternatives


def test_threshold_table_twelve():
    t = threshold_table(12, SQUARE)
    assert t.breakpoints == [Fraction(7, 2), Fraction(19, 2), Fraction(45, 4)]
    assert t.ks == [12, 6, 4, 0]
    assert t.rows[-1].description == "no defense, two components of size 6"


def test_threshold_table_thirty_and_fifty():
    t = threshold_table(30, SQUARE)
    assert t.breakpoints == [Fraction(19, 5), 11, 26, 49, Fraction(351, 5)]
    assert t.ks == [30, 15, 10, 6, 5, 0]
    t = threshold_table(50, SQUARE)
    assert t.ks == [50, 25, 17, 13, 10, 5, 0]
    assert t.breakpoints[-1] == 195 and Fraction(91, 3) in t.breakpoints
    assert t.rows[4].interval_text() == "c in (30.(3), 85)"


def test_threshold_table_nine_ends_with_three_parts():
    last = threshold_table(9, SQUARE).rows[-1]
    assert last.c_low == Fraction(31, 5)
    assert last.description == "no defense, three components of size 3"


def test_threshold_table_three_starts_fully_protected():
    t = threshold_table(3, SQUARE)
    assert t.ks[0] == 3 and t.ks[-1] == 0
    assert t.breakpoints == [Fraction(2, 3)]


@pytest.mark.parametrize("n", [5, 9, 12, 17, 30])
def test_envelope_consistency(n):
    t = threshold_table(n, SQUARE)
    for row in t.rows:
        hi = row.c_high if row.c_high is not None else row.c_low + 10
        for c in (row.c_low + (hi - row.c_low) / 3, row.c_low + 2 * (hi - row.c_low) / 3):
            assert optimal_design(n, c, SQUARE).alternatives == (row.k,)
    for left, right in zip(t.rows, t.rows[1:]):
        alts = optimal_design(n, left.c_high, SQUARE).alternatives
        assert left.k in alts and right.k in alts


def test_oracle_matches_closed_form_on_five():
    out = brute_force_optimal(cfg(5, 1), "all-graphs")
    assert out.payoff == optimal_design(5, 1, SQUARE).payoff
    assert pessimistic_designer_utility(ProtectedNetwork(out.network, out.delta), cfg(5, 1)) == out.payoff


def test_oracle_unprotected_pairs_at_huge_cost():
    out = brute_force_optimal(cfg(4, 1000), "all-graphs")
    assert out.payoff == 4 and out.k == 0


def test_oracle_two_byzantine_snapshot():
    out = brute_force_optimal(cfg(5, 1, n_B=2), "all-graphs")
    assert out.payoff == 5


@pytest.mark.parametrize("n_B,n_A", [(1, 1), (1, 2), (2, 1), (2, 2)])
@pytest.mark.parametrize("c", [Fraction(1, 4), 1, 4, 64])
def test_structured_search_agrees_with_all_graphs(n_B, n_A, c):
    for n in (4, 5):
        game = cfg(n, c, n_B, n_A)
        assert brute_force_optimal(game, "structured").payoff == brute_force_optimal(game).payoff


def test_structured_matches_closed_form_beyond_all_graphs():
    for n in (9, 12, 15):
        for c in (1, 5, 12):
            assert brute_force_optimal(cfg(n, c), "structured").payoff == optimal_design(n, c, SQUARE).payoff


def test_oracle_limits():
    with pytest.raises(LimitExceeded):
        brute_force_optimal(cfg(7))
    with pytest.raises(InvalidArgument):
        brute_force_optimal(cfg(5), "everything")


# ------------------------------------------------------------ canonicalization

def test_canonical_star_is_a_fixed_point():
    star = build_generalized_star(11, 3)
    pn = ProtectedNetwork(star.network, star.core)
    assert canonicalize_to_star(pn, cfg(11)) == pn


def _cloud_example():
    # protected 1, 3, 5; the unprotected chain 7..12 hangs off 1 and also touches 3
    edges = [(1, 3), (3, 5), (1, 7), (7, 8), (8, 9), (9, 10), (10, 11), (11, 12), (3, 12),
             (2, 3), (3, 4), (3, 6)]
    return ProtectedNetwork(Network.on_nodes(range(1, 13), edges), {1, 3, 5})


def test_cloud_is_rewired_as_leaves_of_first_protected_node():
    pn = _cloud_example()
    out = canonicalize_to_star(pn, cfg(12), rebalance=False)
    adj = out.g.adjacency
    for v in range(7, 13):
        assert adj[v] == {1}
    assert {(1, 3), (1, 5), (3, 5)} <= out.g.edges
    assert adj[3] - {1, 5} == {2, 4, 6}


def test_cloud_example_ends_as_balanced_star():
    pn = _cloud_example()
    game = cfg(12, Fraction(5, 2))
    out = canonicalize_to_star(pn, game)
    assert is_generalized_star(protected_component(out), out.delta)
    assert pessimistic_designer_utility(out, game) >= pessimistic_designer_utility(pn, game)


def test_canonicalize_preconditions():
    star = build_generalized_star(6, 2)
    with pytest.raises(InvalidArgument):
        canonicalize_to_star(ProtectedNetwork(star.network, {0}), cfg(6))
    with pytest.raises(UnsupportedConfiguration):
        canonicalize_to_star(ProtectedNetwork(star.network, star.core), cfg(6, n_A=2))


@given(st.integers(0, 10 ** 6), st.integers(4, 9), st.integers(2, 4), st.sampled_from([1, 3, 9]))
def test_canonicalize_never_hurts_designer(seed, n, k, c):
    rng = random.Random(seed)
    g = random_connected(rng, n)
    delta = frozenset(rng.sample(range(n), min(k, n)))
    game = cfg(n, c)
    pn = ProtectedNetwork(g, delta)
    out = canonicalize_to_star(pn, game)
    assert pessimistic_designer_utility(out, game) >= pessimistic_designer_utility(pn, game)
    comp = protected_component(out)
    assert is_generalized_star(comp, delta)
    # nodes outside the protected component keep their induced edges
    rest = g.nodes - comp.nodes
    assert induced_subgraph(out.g, rest) == induced_subgraph(g, rest)

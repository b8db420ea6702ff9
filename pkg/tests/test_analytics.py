import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from multideal import (
    CapacityError,
    ContractError,
    nash_distance,
    nash_point,
    pareto_frontier,
)
from multideal.analytics import BilateralPoint, bilateral_points

from helpers import make_space, table_utility


def points_from_pairs(pairs):
    return [BilateralPoint(i, (i,), a, b) for i, (a, b) in enumerate(pairs)]


def brute_force_nash(space, u_a, u_b):
    """Independent oracle: literal product argmax over the enumeration."""
    best_i, best_product = 0, -1.0
    for i, o in enumerate(itertools.product(*(range(c) for c in space.cardinalities))):
        product = u_a.evaluate(o) * u_b.evaluate(o)
        if product > best_product:
            best_i, best_product = i, product
    return best_i, best_product


def test_pareto_keeps_incomparable_points():
    pts = points_from_pairs([(1.0, 0.2), (0.6, 0.6), (0.2, 1.0)])
    assert pareto_frontier(pts) == pts


def test_pareto_drops_dominated():
    pts = points_from_pairs([(0.5, 0.5), (0.6, 0.6)])
    assert pareto_frontier(pts) == [pts[1]]


def test_pareto_single_point():
    pts = points_from_pairs([(0.4, 0.4)])
    assert pareto_frontier(pts) == pts


def test_pareto_requires_points():
    with pytest.raises(ContractError):
        pareto_frontier([])


def test_pareto_keeps_weakly_equal_duplicates():
    pts = points_from_pairs([(0.5, 0.5), (0.5, 0.5)])
    assert pareto_frontier(pts) == pts


def test_nash_point_three_outcomes():
    space = make_space(3)
    u_a = table_utility([1.0, 0.6, 0.2])
    u_b = table_utility([0.2, 0.6, 1.0])
    best = nash_point(space, u_a, u_b)
    assert best.outcome == (1,)
    assert best.u_a * best.u_b == pytest.approx(0.36)


def test_nash_point_all_zero_products_tie_breaks_to_index_zero():
    space = make_space(4)
    u_a = table_utility([0.0, 0.0, 0.0, 0.0])
    u_b = table_utility([0.3, 0.9, 0.1, 0.5])
    assert nash_point(space, u_a, u_b).index == 0


def test_nash_point_matches_brute_force_on_random_spaces():
    rng = random.Random(7)
    for _ in range(50):
        cards = [rng.randint(1, 12) for _ in range(rng.randint(1, 3))]
        space = make_space(*cards)
        u_a = _random_linear(rng, cards)
        u_b = _random_linear(rng, cards)
        got = nash_point(space, u_a, u_b)
        oracle_i, oracle_product = brute_force_nash(space, u_a, u_b)
        assert got.index == oracle_i
        assert got.u_a * got.u_b == pytest.approx(oracle_product, abs=1e-12)


def _random_linear(rng, cards):
    from multideal import LinearAdditive

    raw = [rng.random() for _ in cards]
    total = sum(raw)
    weights = [w / total for w in raw]
    weights[-1] = 1.0 - sum(weights[:-1])
    return LinearAdditive(
        weights=weights,
        valuations=tuple(tuple(rng.random() for _ in range(c)) for c in cards),
    )


def test_nash_member_of_pareto_frontier_when_positive():
    rng = random.Random(11)
    for _ in range(25):
        cards = [rng.randint(2, 6) for _ in range(rng.randint(1, 2))]
        space = make_space(*cards)
        u_a = _random_linear(rng, cards)
        u_b = _random_linear(rng, cards)
        best = nash_point(space, u_a, u_b)
        if best.u_a > 0 and best.u_b > 0:
            frontier = pareto_frontier(bilateral_points(space, u_a, u_b))
            assert best in frontier


def test_nash_point_capacity_error():
    space = make_space(101, 101, 101)  # > 1e6 outcomes
    u = _random_linear(random.Random(0), [101, 101, 101])
    with pytest.raises(CapacityError):
        nash_point(space, u, u)


def test_nash_distance_examples():
    assert nash_distance((0.6, 0.6), (0.6, 0.6)) == 0.0
    assert nash_distance((0.0, 0.0), (0.6, 0.6)) == pytest.approx(0.8485, abs=1e-4)
    assert nash_distance((1.0, 0.0), (0.0, 1.0)) == pytest.approx(math.sqrt(2), abs=1e-9)


def test_nash_distance_rejects_out_of_range():
    with pytest.raises(ContractError):
        nash_distance((1.2, 0.0), (0.0, 0.0))


@given(
    st.tuples(st.floats(0, 1), st.floats(0, 1)),
    st.tuples(st.floats(0, 1), st.floats(0, 1)),
)
@settings(max_examples=200)
def test_nash_distance_nonnegative_and_zero_iff_equal(a, b):
    d = nash_distance(a, b)
    assert d >= 0.0
    assert (d == 0.0) == (a == b)

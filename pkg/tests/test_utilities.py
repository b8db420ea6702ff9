import random

import pytest
from hypothesis import given, settings, strategies as st

from multideal import (
    CapacityError,
    ContractError,
    Issue,
    LinearAdditive,
    MalformedUtilityError,
    MaxOfDeals,
    OutcomeSpace,
    QuantityTable,
    TargetQuantity,
    eval_center,
    eval_side,
    optimistic_view,
    pessimistic_view,
)
from multideal.utilities import NO_DEAL, brute_force_optimistic_view

from helpers import make_space, table_utility


def qty_space(q_max):
    return OutcomeSpace((Issue("quantity", tuple(range(q_max + 1))),))


def qty_utility(q_max, fn):
    return QuantityTable(
        table={q: fn(q) for q in range(q_max + 1)}, quantities=tuple(range(q_max + 1))
    )


def test_eval_side_single_issue():
    u = LinearAdditive(weights=(1.0,), valuations=((0.2,),))
    assert eval_side(u, (0,)) == pytest.approx(0.2)


def test_eval_side_weighted_sum():
    u = LinearAdditive(weights=(0.5, 0.5), valuations=((1.0,), (0.0,)))
    assert eval_side(u, (0, 0)) == pytest.approx(0.5)


def test_eval_side_all_zero():
    u = LinearAdditive(weights=(0.3, 0.7), valuations=((0.0, 0.0), (0.0,)))
    assert eval_side(u, (1, 0)) == 0.0


def test_linear_additive_validation():
    with pytest.raises(MalformedUtilityError):
        LinearAdditive(weights=(0.5, 0.4), valuations=((1.0,), (1.0,)))
    with pytest.raises(MalformedUtilityError):
        LinearAdditive(weights=(1.0,), valuations=((1.5,),))


def test_quantity_table_missing_entry():
    u = QuantityTable(table={0: 0.0, 1: 0.5}, quantities=(0, 1, 2))
    with pytest.raises(MalformedUtilityError):
        eval_side(u, (2,))


def test_eval_center_max_no_deals_is_zero():
    space = make_space(3)
    sides = (table_utility([0.1, 0.2, 0.3]),)
    assert eval_center(MaxOfDeals(), sides, (NO_DEAL,), (space,)) == 0.0


def test_eval_center_max_takes_maximum():
    spaces = (make_space(2), make_space(2))
    sides = (table_utility([0.3, 0.3]), table_utility([0.7, 0.7]))
    assert eval_center(MaxOfDeals(), sides, ((0,), (1,)), spaces) == pytest.approx(0.7)


def test_eval_center_target_quantity_peak_and_half():
    combiner = TargetQuantity(target=10, slope=10.0)
    space = qty_space(10)
    sides = (qty_utility(10, lambda q: q / 10),)
    assert eval_center(combiner, sides, ((10,),), (space,)) == pytest.approx(1.0)
    assert eval_center(combiner, sides, ((5,),), (space,)) == pytest.approx(0.5)


def test_eval_center_length_mismatch():
    space = make_space(2)
    with pytest.raises(ContractError):
        eval_center(MaxOfDeals(), (table_utility([0, 1]),), ((0,), (1,)), (space,))


def test_target_quantity_validation():
    with pytest.raises(ContractError):
        TargetQuantity(target=0, slope=1.0)
    with pytest.raises(ContractError):
        TargetQuantity(target=5, slope=0.0)


def test_target_quantity_curve_properties():
    c = TargetQuantity(target=10, slope=10.0)
    assert c.curve(10) == 1.0
    for d in range(11):
        assert c.curve(10 - d) == pytest.approx(c.curve(10 + d))
    values = [c.curve(10 + d) for d in range(15)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert c.curve(0) == 0.0
    assert c.curve(20) == 0.0


def test_pessimistic_view_max_combiner():
    spaces = (make_space(2), make_space(2), make_space(2))
    sides = (
        table_utility([0.6, 0.0]),
        table_utility([0.4, 0.4]),
        table_utility([0.9, 0.9]),
    )
    partial = ((0,), NO_DEAL, NO_DEAL)
    # prior deal 0.6 beats candidate 0.4; future 0.9 ignored
    assert pessimistic_view(MaxOfDeals(), sides, spaces, partial, 1, (0,)) == pytest.approx(0.6)


def test_pessimistic_view_no_prior():
    spaces = (make_space(2),)
    sides = (table_utility([0.5, 0.1]),)
    assert pessimistic_view(MaxOfDeals(), sides, spaces, (NO_DEAL,), 0, (0,)) == pytest.approx(0.5)


def test_pessimistic_view_target_quantity_peak():
    c = TargetQuantity(target=10, slope=10.0)
    spaces = (qty_space(10), qty_space(10))
    sides = (qty_utility(10, lambda q: 1.0), qty_utility(10, lambda q: 1.0))
    partial = ((4,), NO_DEAL)
    assert pessimistic_view(c, sides, spaces, partial, 1, (6,)) == pytest.approx(1.0)


def test_view_preconditions():
    spaces = (make_space(2), make_space(2))
    sides = (table_utility([0, 1]), table_utility([0, 1]))
    with pytest.raises(ContractError):
        pessimistic_view(MaxOfDeals(), sides, spaces, ((0,), NO_DEAL), 0, (0,))
    with pytest.raises(ContractError):
        pessimistic_view(MaxOfDeals(), sides, spaces, (NO_DEAL, (0,)), 0, (0,))


def test_optimistic_view_no_future_equals_pessimistic():
    spaces = (make_space(3),)
    sides = (table_utility([0.2, 0.5, 0.8]),)
    for i in range(3):
        o = (i,)
        assert optimistic_view(MaxOfDeals(), sides, spaces, (NO_DEAL,), 0, o) == pytest.approx(
            pessimistic_view(MaxOfDeals(), sides, spaces, (NO_DEAL,), 0, o)
        )


def test_optimistic_view_max_future_best():
    spaces = (make_space(2), make_space(2))
    sides = (table_utility([0.4, 0.4]), table_utility([0.9, 0.1]))
    assert optimistic_view(
        MaxOfDeals(), sides, spaces, (NO_DEAL, NO_DEAL), 0, (0,)
    ) == pytest.approx(0.9)


def test_optimistic_view_target_quantity_completion():
    c = TargetQuantity(target=10, slope=10.0)
    spaces = (qty_space(10), qty_space(10))
    sides = (qty_utility(10, lambda q: 1.0), qty_utility(10, lambda q: 1.0))
    # candidate q=4, future slot can contribute 6 to hit the peak
    assert optimistic_view(c, sides, spaces, (NO_DEAL, NO_DEAL), 0, (4,)) == pytest.approx(1.0)


def test_optimistic_view_capacity_error():
    spaces = tuple(make_space(10, 10) for _ in range(4))
    sides = tuple(
        LinearAdditive(weights=(0.5, 0.5), valuations=(tuple([0.1] * 10), tuple([0.2] * 10)))
        for _ in range(4)
    )
    # future completions: 101^3 > 1e6
    with pytest.raises(CapacityError):
        optimistic_view(MaxOfDeals(), sides, spaces, (NO_DEAL,) * 4, 0, (0, 0))


def _random_max_setup(rng, n_slots):
    spaces, sides = [], []
    for _ in range(n_slots):
        card = rng.randint(1, 4)
        spaces.append(make_space(card))
        sides.append(table_utility([round(rng.random(), 3) for _ in range(card)]))
    return tuple(spaces), tuple(sides)


def test_optimistic_view_matches_brute_force_max():
    rng = random.Random(0)
    for _ in range(60):
        n = rng.randint(1, 4)
        spaces, sides = _random_max_setup(rng, n)
        slot = rng.randrange(n)
        partial = [NO_DEAL] * n
        for k in range(slot):
            if rng.random() < 0.5:
                partial[k] = (rng.randrange(spaces[k].n_outcomes),)
        candidate = (rng.randrange(spaces[slot].n_outcomes),)
        fast = optimistic_view(MaxOfDeals(), sides, spaces, tuple(partial), slot, candidate)
        slow = brute_force_optimistic_view(
            MaxOfDeals(), sides, spaces, tuple(partial), slot, candidate
        )
        assert fast == pytest.approx(slow, abs=1e-12)


def test_optimistic_view_matches_brute_force_target_quantity():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(1, 3)
        q_max = rng.randint(1, 5)
        target = rng.randint(1, 8)
        combiner = TargetQuantity(target=target, slope=float(target))
        spaces = tuple(qty_space(q_max) for _ in range(n))
        sides = tuple(qty_utility(q_max, lambda q: q / max(q_max, 1)) for _ in range(n))
        slot = rng.randrange(n)
        partial = [NO_DEAL] * n
        for k in range(slot):
            if rng.random() < 0.5:
                partial[k] = (rng.randrange(q_max + 1),)
        candidate = (rng.randrange(q_max + 1),)
        fast = optimistic_view(combiner, sides, spaces, tuple(partial), slot, candidate)
        slow = brute_force_optimistic_view(
            combiner, sides, spaces, tuple(partial), slot, candidate
        )
        assert fast == pytest.approx(slow, abs=1e-12)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_eval_bounds_and_max_monotonicity(data):
    n = data.draw(st.integers(1, 3))
    spaces, sides = [], []
    for k in range(n):
        card = data.draw(st.integers(1, 4))
        spaces.append(make_space(card))
        values = data.draw(
            st.lists(
                st.floats(0, 1, allow_nan=False), min_size=card, max_size=card
            )
        )
        sides.append(table_utility(values))
    agreements = tuple(
        (data.draw(st.integers(0, spaces[k].n_outcomes - 1)),)
        if data.draw(st.booleans())
        else NO_DEAL
        for k in range(n)
    )
    u = eval_center(MaxOfDeals(), tuple(sides), agreements, tuple(spaces))
    assert 0.0 <= u <= 1.0
    for k in range(n):
        if agreements[k] is NO_DEAL:
            for idx in range(spaces[k].n_outcomes):
                filled = agreements[:k] + ((idx,),) + agreements[k + 1 :]
                assert eval_center(MaxOfDeals(), tuple(sides), filled, tuple(spaces)) >= u


def test_pessimistic_le_optimistic_for_max():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(1, 4)
        spaces, sides = _random_max_setup(rng, n)
        slot = rng.randrange(n)
        partial = tuple(
            ((rng.randrange(spaces[k].n_outcomes),) if rng.random() < 0.5 and k < slot else NO_DEAL)
            for k in range(n)
        )
        candidate = (rng.randrange(spaces[slot].n_outcomes),)
        p = pessimistic_view(MaxOfDeals(), sides, spaces, partial, slot, candidate)
        o = optimistic_view(MaxOfDeals(), sides, spaces, partial, slot, candidate)
        assert p <= o + 1e-12

"""Shared test fixtures: tiny spaces, table utilities, scripted agents."""

from __future__ import annotations

from multideal import (
    Accept,
    EndNegotiation,
    Issue,
    LinearAdditive,
    MaxOfDeals,
    Offer,
    OutcomeSpace,
    Scenario,
    Subnegotiation,
)


def int_issue(name: str, cardinality: int) -> Issue:
    return Issue(name, tuple(range(cardinality)))


def make_space(*cardinalities: int) -> OutcomeSpace:
    return OutcomeSpace(tuple(int_issue(f"i{k}", c) for k, c in enumerate(cardinalities)))


def table_utility(values) -> LinearAdditive:
    """Single-issue utility assigning values[k] to level k."""
    return LinearAdditive(weights=(1.0,), valuations=(tuple(values),))


def bilateral_scenario(space, center_utility, edge_utility, scenario_id="test") -> Scenario:
    return Scenario(
        id=scenario_id,
        subnegotiations=(Subnegotiation(space, center_utility, edge_utility),),
        combiner=MaxOfDeals(),
    )


class ScriptedAgent:
    """Plays a fixed list of actions, then repeats the last one."""

    def __init__(self, actions):
        self.actions = list(actions)
        self.cursor = 0

    def act(self, ctx, rng):
        action = self.actions[min(self.cursor, len(self.actions) - 1)]
        self.cursor += 1
        return action


class AcceptAnything:
    def act(self, ctx, rng):
        if ctx.standing_offer is not None and not ctx.standing_offer_mine:
            return Accept()
        return Offer(ctx.space.outcome_at(0))


class AlwaysWalk:
    def act(self, ctx, rng):
        return EndNegotiation()


class OfferThenAccept:
    """Offers a fixed outcome until a given round, then accepts."""

    def __init__(self, offer_outcome, accept_from_round):
        self.offer_outcome = offer_outcome
        self.accept_from_round = accept_from_round

    def act(self, ctx, rng):
        can_accept = ctx.standing_offer is not None and not ctx.standing_offer_mine
        if ctx.round >= self.accept_from_round and can_accept:
            return Accept()
        return Offer(self.offer_outcome)


class HardballThenConcede:
    """Never accepts; offers junk until a round, then a concession outcome."""

    def __init__(self, junk_outcome, concession_outcome, concede_from_round):
        self.junk_outcome = junk_outcome
        self.concession_outcome = concession_outcome
        self.concede_from_round = concede_from_round

    def act(self, ctx, rng):
        if ctx.round >= self.concede_from_round:
            return Offer(self.concession_outcome)
        return Offer(self.junk_outcome)


class CrashingAgent:
    def act(self, ctx, rng):
        raise RuntimeError("deliberate crash")

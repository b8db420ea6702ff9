"""Alternating-offers protocol for one subnegotiation.

The state machine is driven by :func:`step`, a pure function from a state
and an action to a successor state. A *round* is one full exchange pair:
the counter increments each time the turn returns to the starting side.
Once ``round == deadline_rounds`` any further action attempt terminates
the negotiation with a deadline failure.
"""

from __future__ import annotations

import enum
import hashlib
import random
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .errors import ContractError, IllegalActionError
from .outcomes import Outcome, OutcomeSpace


class Side(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Side":
        return Side.B if self is Side.A else Side.A


@dataclass(frozen=True)
class Offer:
    outcome: Outcome


@dataclass(frozen=True)
class Accept:
    pass


@dataclass(frozen=True)
class EndNegotiation:
    pass


Action = object  # Offer | Accept | EndNegotiation


class Status(str, enum.Enum):
    RUNNING = "running"
    AGREED = "agreed"
    NO_AGREEMENT = "no_agreement"


class FailureReason(str, enum.Enum):
    WALK_AWAY = "walk_away"
    DEADLINE = "deadline"


@dataclass(frozen=True)
class NegotiationState:
    space: OutcomeSpace
    deadline_rounds: int
    starting_side: Side
    round: int = 0
    turn: Optional[Side] = None
    standing_offer: Optional[Outcome] = None
    history: tuple = ()  # tuple of (Side, Action, round-at-action)
    status: Status = Status.RUNNING
    agreement: Optional[Outcome] = None
    failure_reason: Optional[FailureReason] = None
    fault: Optional[Side] = None  # side that forfeited, if any

    @property
    def running(self) -> bool:
        return self.status is Status.RUNNING

    @property
    def relative_time(self) -> float:
        return self.round / self.deadline_rounds


def new_subnegotiation(
    space: OutcomeSpace, deadline_rounds: int, starting_side: Side = Side.A
) -> NegotiationState:
    if deadline_rounds < 1:
        raise ContractError("deadline_rounds must be >= 1")
    return NegotiationState(
        space=space,
        deadline_rounds=deadline_rounds,
        starting_side=starting_side,
        turn=starting_side,
    )


def step(state: NegotiationState, action: Action) -> NegotiationState:
    """Apply one action of the side whose turn it is."""
    if not state.running:
        raise IllegalActionError("negotiation already terminal")
    side = state.turn
    if state.round >= state.deadline_rounds:
        # The deadline consumed all exchange pairs; any further attempt fails.
        return replace(
            state,
            status=Status.NO_AGREEMENT,
            failure_reason=FailureReason.DEADLINE,
            turn=None,
        )
    history = state.history + ((side, action, state.round),)
    if isinstance(action, Offer):
        if not state.space.contains(action.outcome):
            raise IllegalActionError(f"offer {action.outcome!r} not in space")
        next_turn = side.other
        next_round = state.round + (1 if next_turn is state.starting_side else 0)
        return replace(
            state,
            history=history,
            standing_offer=action.outcome,
            turn=next_turn,
            round=next_round,
        )
    if isinstance(action, Accept):
        if state.standing_offer is None:
            raise IllegalActionError("nothing to accept")
        return replace(
            state,
            history=history,
            status=Status.AGREED,
            agreement=state.standing_offer,
            turn=None,
        )
    if isinstance(action, EndNegotiation):
        return replace(
            state,
            history=history,
            status=Status.NO_AGREEMENT,
            failure_reason=FailureReason.WALK_AWAY,
            turn=None,
        )
    raise IllegalActionError(f"unknown action {action!r}")


def forfeit(state: NegotiationState, side: Side) -> NegotiationState:
    """Terminate with a walk-away charged to ``side`` (illegal agent move)."""
    if not state.running:
        raise IllegalActionError("negotiation already terminal")
    return replace(
        state,
        status=Status.NO_AGREEMENT,
        failure_reason=FailureReason.WALK_AWAY,
        fault=side,
        turn=None,
    )


def derive_seed(master_seed: int, *parts) -> int:
    """Stable, platform-independent child seed."""
    text = ":".join([str(master_seed)] + [str(p) for p in parts])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def run_subnegotiation(
    agent_a,
    agent_b,
    space: OutcomeSpace,
    deadline_rounds: int,
    rng_seed: int,
    context_a: Callable[[NegotiationState], object],
    context_b: Callable[[NegotiationState], object],
    starting_side: Side = Side.A,
) -> NegotiationState:
    """Drive two agents through one subnegotiation until terminal.

    ``context_a``/``context_b`` project the current state into each
    agent's view (see :mod:`multideal.session`). An agent raising or
    returning an illegal action forfeits: the result is a walk-away with
    that side recorded as at fault.
    """
    state = new_subnegotiation(space, deadline_rounds, starting_side)
    rngs = {
        Side.A: random.Random(derive_seed(rng_seed, "A")),
        Side.B: random.Random(derive_seed(rng_seed, "B")),
    }
    agents = {Side.A: agent_a, Side.B: agent_b}
    contexts = {Side.A: context_a, Side.B: context_b}
    while state.running:
        side = state.turn
        if state.round >= state.deadline_rounds:
            state = step(state, EndNegotiation())  # any attempt hits the deadline
            break
        try:
            action = agents[side].act(contexts[side](state), rngs[side])
            state = step(state, action)
        except IllegalActionError:
            state = forfeit(state, side)
        except Exception:
            state = forfeit(state, side)
    return state

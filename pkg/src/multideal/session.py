"""Sequential multi-deal session orchestration.

The center agent runs through the scenario's subnegotiations in order,
opening each one; edge agents see only their own slot. Slot results feed
the center's context for later slots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import ContractError
from .outcomes import Outcome, OutcomeSpace
from .protocol import (
    Accept,
    EndNegotiation,
    FailureReason,
    NegotiationState,
    Offer,
    Side,
    Status,
    derive_seed,
    run_subnegotiation,
)
from .utilities import NO_DEAL, CenterCombiner, SideUtility, eval_center, eval_side


@dataclass(frozen=True)
class AgentContext:
    """Everything an agent may see when asked to act.

    Edge agents get only the protocol view and their own side utility; the
    combiner, prior agreements and future slot data are center-only and
    ``None`` for edges.
    """

    role: str  # "center" | "edge"
    my_side: Side
    side_utility: SideUtility
    space: OutcomeSpace
    round: int
    deadline_rounds: int
    relative_time: float
    standing_offer: Optional[Outcome]
    standing_offer_mine: bool
    # center-only fields
    combiner: Optional[CenterCombiner] = None
    slot: Optional[int] = None
    n_slots: Optional[int] = None
    agreements: Optional[tuple] = None  # full-length vector, future slots NO_DEAL
    all_spaces: Optional[tuple] = None
    all_side_utilities: Optional[tuple] = None


@dataclass(frozen=True)
class SessionResult:
    agreements: tuple  # tuple[Outcome | None, ...]
    transcripts: tuple  # tuple[NegotiationState, ...] (terminal per slot)
    center_utility: float
    edge_utilities: tuple
    faults: tuple  # per slot: None | "center" | "edge"


def _protocol_view(state: NegotiationState, my_side: Side) -> dict:
    last_offer_side = None
    for side, action, _ in reversed(state.history):
        if isinstance(action, Offer):
            last_offer_side = side
            break
    return dict(
        space=state.space,
        round=state.round,
        deadline_rounds=state.deadline_rounds,
        relative_time=state.relative_time,
        standing_offer=state.standing_offer,
        standing_offer_mine=last_offer_side is my_side,
        my_side=my_side,
    )


def run_session(
    center_agent,
    edge_agents: Sequence,
    scenario,
    deadline_rounds: int,
    master_seed: int,
) -> SessionResult:
    """Run every subnegotiation of the scenario in order.

    The center always opens (side A). Per-slot RNG seeds are derived from
    the master seed, so identical inputs reproduce identical transcripts.
    """
    n = len(scenario.subnegotiations)
    if len(edge_agents) != n:
        raise ContractError(f"need {n} edge agents, got {len(edge_agents)}")
    spaces = tuple(sub.space for sub in scenario.subnegotiations)
    center_utils = tuple(sub.center_utility for sub in scenario.subnegotiations)
    edge_utils = tuple(sub.edge_utility for sub in scenario.subnegotiations)

    agreements: List[Optional[Outcome]] = [NO_DEAL] * n
    transcripts = []
    faults = []
    for slot in range(n):
        frozen = tuple(agreements)

        def center_context(state: NegotiationState, slot=slot, frozen=frozen) -> AgentContext:
            return AgentContext(
                role="center",
                side_utility=center_utils[slot],
                combiner=scenario.combiner,
                slot=slot,
                n_slots=n,
                agreements=frozen,
                all_spaces=spaces,
                all_side_utilities=center_utils,
                **_protocol_view(state, Side.A),
            )

        def edge_context(state: NegotiationState, slot=slot) -> AgentContext:
            return AgentContext(
                role="edge",
                side_utility=edge_utils[slot],
                **_protocol_view(state, Side.B),
            )

        final = run_subnegotiation(
            center_agent,
            edge_agents[slot],
            spaces[slot],
            deadline_rounds,
            derive_seed(master_seed, "slot", slot),
            center_context,
            edge_context,
            starting_side=Side.A,
        )
        transcripts.append(final)
        if final.status is Status.AGREED:
            agreements[slot] = final.agreement
        if final.fault is None:
            faults.append(None)
        else:
            faults.append("center" if final.fault is Side.A else "edge")

    agreement_vector = tuple(agreements)
    center_utility = eval_center(scenario.combiner, center_utils, agreement_vector, spaces)
    edge_utilities = tuple(
        0.0 if a is NO_DEAL else eval_side(u, a) for u, a in zip(edge_utils, agreement_vector)
    )
    return SessionResult(
        agreements=agreement_vector,
        transcripts=tuple(transcripts),
        center_utility=center_utility,
        edge_utilities=edge_utilities,
        faults=tuple(faults),
    )


def transcript_record(state: NegotiationState) -> dict:
    """Serializable per-slot transcript in the shared match format."""
    actions = []
    for side, action, round_index in state.history:
        if isinstance(action, Offer):
            entry = {"side": side.value, "kind": "offer", "levels": list(action.outcome)}
        elif isinstance(action, Accept):
            entry = {"side": side.value, "kind": "accept"}
        else:
            entry = {"side": side.value, "kind": "end"}
        entry["round"] = round_index
        actions.append(entry)
    return {
        "actions": actions,
        "status": state.status.value,
        "agreement": list(state.agreement) if state.agreement is not None else None,
        "failure_reason": state.failure_reason.value if state.failure_reason else None,
        "fault": state.fault.value if state.fault else None,
        "rounds": state.round,
        "deadline_rounds": state.deadline_rounds,
    }

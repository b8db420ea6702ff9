"""Baseline negotiating agents.

Three archetypes of reasoning about future deals sit on one shared
conceder skeleton: the pessimistic agent values candidates as if no
further deals happen, the optimistic one as if the best completion is
guaranteed, and the contingent one by a depth-limited expected-utility
tree whose branch probabilities come from a softmax over child values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapacityError, ContractError
from .outcomes import Outcome
from .protocol import Accept, Action, EndNegotiation, Offer
from .session import AgentContext
from .utilities import (
    NO_DEAL,
    eval_center,
    eval_side,
    optimistic_view,
    pessimistic_view,
)

log = logging.getLogger(__name__)

TREE_NODE_BUDGET = 100_000


@dataclass(frozen=True)
class ConcessionSchedule:
    """Target utility decaying from u_max at t=0 to u_min at t=1."""

    u_min: float = 0.3
    u_max: float = 1.0
    exponent: float = 0.2  # < 1 is boulware-leaning

    def __post_init__(self):
        if not 0.0 <= self.u_min <= self.u_max <= 1.0:
            raise ContractError("need 0 <= u_min <= u_max <= 1")
        if self.exponent <= 0:
            raise ContractError("exponent must be > 0")


def concession_target(t: float, sched: ConcessionSchedule) -> float:
    """Polynomial time-dependent target, monotone non-increasing in t."""
    if not 0.0 <= t <= 1.0:
        raise ContractError("t must be in [0, 1]")
    return sched.u_min + (sched.u_max - sched.u_min) * (1.0 - t ** (1.0 / sched.exponent))


def softmax(values: Sequence[float], temperature: float) -> np.ndarray:
    """Temperature softmax with max-subtraction for overflow safety."""
    if len(values) == 0:
        raise ContractError("softmax needs at least one value")
    if temperature <= 0:
        raise ContractError("temperature must be > 0")
    v = np.asarray(values, dtype=float) / temperature
    v -= v.max()
    e = np.exp(v)
    return e / e.sum()


@dataclass(frozen=True)
class TreeSearchConfig:
    depth_limit: int = 2  # future slots expanded before the pessimistic closure
    temperature: float = 0.2
    branching_cap: int = 16  # children kept per future slot, best own value first
    deal_prior: float = 0.5  # probability a future slot produces any deal
    node_budget: int = TREE_NODE_BUDGET

    def __post_init__(self):
        if self.depth_limit < 1 or self.branching_cap < 1:
            raise ContractError("depth_limit and branching_cap must be >= 1")
        if self.temperature <= 0:
            raise ContractError("temperature must be > 0")
        if not 0.0 <= self.deal_prior <= 1.0:
            raise ContractError("deal_prior must be in [0, 1]")


def expected_utility_tree(ctx: AgentContext, candidate: Outcome, cfg: TreeSearchConfig) -> float:
    """Expected center utility of fixing ``candidate`` at the active slot.

    Future slots are expanded in order up to the depth limit; at each one
    the top-K outcomes by the center's own side utility become children,
    mixed by a softmax over their subtree values, with probability
    ``deal_prior`` of any deal at all. Slots beyond the depth limit are
    valued pessimistically (all NoDeal).
    """
    if ctx.role != "center":
        raise ContractError("expected_utility_tree requires a center context")
    slot = ctx.slot
    spaces = ctx.all_spaces
    sides = ctx.all_side_utilities
    combiner = ctx.combiner
    n = ctx.n_slots
    future_slots = list(range(slot + 1, n))
    expand = future_slots[: cfg.depth_limit]

    # Candidate children per expanded slot: top-K by own side utility,
    # ties toward the lowest canonical index.
    children_per_slot = {}
    node_count = 0
    for j in expand:
        space = spaces[j]
        scored = [
            (eval_side(sides[j], space.outcome_at(i)), i) for i in range(space.n_outcomes)
        ]
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        children_per_slot[j] = [space.outcome_at(i) for _, i in scored[: cfg.branching_cap]]

    budget = cfg.node_budget
    counter = [0]

    def closure_value(agreed: tuple) -> float:
        # Remaining slots (beyond the expanded horizon) valued as NoDeal.
        full = agreed + (NO_DEAL,) * (n - len(agreed))
        return eval_center(combiner, sides, full, spaces)

    def value(pos: int, agreed: tuple) -> float:
        counter[0] += 1
        if counter[0] > budget:
            raise CapacityError(f"tree search exceeded node budget of {budget}")
        if pos == len(expand):
            return closure_value(agreed)
        j = expand[pos]
        no_deal_value = value(pos + 1, agreed + (NO_DEAL,))
        if cfg.deal_prior == 0.0:
            return no_deal_value
        child_values = [value(pos + 1, agreed + (child,)) for child in children_per_slot[j]]
        weights = softmax(child_values, cfg.temperature)
        deal_value = float(np.dot(weights, child_values))
        return (1.0 - cfg.deal_prior) * no_deal_value + cfg.deal_prior * deal_value

    prefix = tuple(ctx.agreements[:slot]) + (candidate,)
    return value(0, prefix)


def _conceder_decision(
    ctx: AgentContext, sched: ConcessionSchedule, valuation: Callable[[int], float]
) -> Action:
    """Shared bid/accept skeleton.

    Proposes the lowest-valued outcome still at or above the concession
    target (best outcome if none qualifies) and accepts a standing offer
    that is not worse than that next bid. Ties break toward the lowest
    canonical index.
    """
    space = ctx.space
    n = space.n_outcomes
    values = [valuation(i) for i in range(n)]
    target = concession_target(ctx.relative_time, sched)
    qualifying = [i for i in range(n) if values[i] >= target]
    if qualifying:
        proposal = min(qualifying, key=lambda i: (values[i], i))
    else:
        proposal = min(range(n), key=lambda i: (-values[i], i))
    if ctx.standing_offer is not None and not ctx.standing_offer_mine:
        standing_value = valuation(space.index_of(ctx.standing_offer))
        if standing_value >= values[proposal]:
            return Accept()
    return Offer(space.outcome_at(proposal))


def _pessimistic_valuation(ctx: AgentContext) -> Callable[[int], float]:
    if ctx.role == "center":
        return lambda i: pessimistic_view(
            ctx.combiner,
            ctx.all_side_utilities,
            ctx.all_spaces,
            ctx.agreements,
            ctx.slot,
            ctx.space.outcome_at(i),
        )
    return lambda i: eval_side(ctx.side_utility, ctx.space.outcome_at(i))


class ConcederAgent:
    """Pessimistic time-dependent conceder: ignores future slots."""

    def __init__(self, schedule: Optional[ConcessionSchedule] = None):
        self.schedule = schedule or ConcessionSchedule()

    def act(self, ctx: AgentContext, rng) -> Action:
        return _conceder_decision(ctx, self.schedule, _pessimistic_valuation(ctx))


class ContingentAgent:
    """Conceder skeleton valuing candidates by the expected-utility tree.

    Falls back to pessimistic valuation as an edge or when the tree would
    blow the node budget.
    """

    def __init__(
        self,
        schedule: Optional[ConcessionSchedule] = None,
        config: Optional[TreeSearchConfig] = None,
    ):
        self.schedule = schedule or ConcessionSchedule()
        self.config = config or TreeSearchConfig()

    def act(self, ctx: AgentContext, rng) -> Action:
        if ctx.role != "center":
            return _conceder_decision(ctx, self.schedule, _pessimistic_valuation(ctx))
        cache = {}

        def valuation(i: int) -> float:
            if i not in cache:
                try:
                    cache[i] = expected_utility_tree(ctx, ctx.space.outcome_at(i), self.config)
                except CapacityError:
                    log.warning("tree search over budget; degrading to pessimistic valuation")
                    cache[i] = _pessimistic_valuation(ctx)(i)
            return cache[i]

        return _conceder_decision(ctx, self.schedule, valuation)


class OptimisticAgent:
    """Conceder skeleton valuing candidates by the best-case completion."""

    def __init__(self, schedule: Optional[ConcessionSchedule] = None):
        self.schedule = schedule or ConcessionSchedule()

    def act(self, ctx: AgentContext, rng) -> Action:
        if ctx.role != "center":
            return _conceder_decision(ctx, self.schedule, _pessimistic_valuation(ctx))

        def valuation(i: int) -> float:
            try:
                return optimistic_view(
                    ctx.combiner,
                    ctx.all_side_utilities,
                    ctx.all_spaces,
                    ctx.agreements,
                    ctx.slot,
                    ctx.space.outcome_at(i),
                )
            except CapacityError:
                log.warning("future space over cap; degrading to pessimistic valuation")
                return _pessimistic_valuation(ctx)(i)

        return _conceder_decision(ctx, self.schedule, valuation)


class RandomAgent:
    """Offer/accept/walk-away with weights 0.8/0.15/0.05.

    An accept draw with no (opponent) standing offer degrades to a random
    offer, so the agent never emits an illegal action.
    """

    def act(self, ctx: AgentContext, rng) -> Action:
        roll = rng.random()
        can_accept = ctx.standing_offer is not None and not ctx.standing_offer_mine
        if roll >= 0.95:
            return EndNegotiation()
        if roll >= 0.8 and can_accept:
            return Accept()
        return Offer(ctx.space.outcome_at(rng.randrange(ctx.space.n_outcomes)))


def _float(params: dict, key: str, default: float) -> float:
    return float(params.get(key, default))


def _schedule_from(params: dict) -> ConcessionSchedule:
    return ConcessionSchedule(
        u_min=_float(params, "u_min", 0.3),
        u_max=_float(params, "u_max", 1.0),
        exponent=_float(params, "exponent", 0.2),
    )


def _tree_config_from(params: dict) -> TreeSearchConfig:
    return TreeSearchConfig(
        depth_limit=int(params.get("depth_limit", 2)),
        temperature=_float(params, "temperature", 0.2),
        branching_cap=int(params.get("branching_cap", 16)),
        deal_prior=_float(params, "deal_prior", 0.5),
    )


REGISTRY = {
    "conceder": lambda params: ConcederAgent(_schedule_from(params)),
    "contingent": lambda params: ContingentAgent(_schedule_from(params), _tree_config_from(params)),
    "optimistic": lambda params: OptimisticAgent(_schedule_from(params)),
    "random": lambda params: RandomAgent(),
}


def make_agent(name: str, params: Optional[dict] = None):
    """Instantiate a registered strategy by name."""
    if name not in REGISTRY:
        raise ContractError(f"unknown agent {name!r}; known: {sorted(REGISTRY)}")
    return REGISTRY[name](params or {})

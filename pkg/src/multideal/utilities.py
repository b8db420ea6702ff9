"""Side utilities, center combiners, and future-deal valuations.

The center agent's preference over one subnegotiation is a *side utility*
(linear-additive or a quantity table). Its overall reward is produced by a
*combiner* over the vector of per-slot agreements: either the maximum of
all deals, or a peaked target-quantity curve.

``pessimistic_view`` and ``optimistic_view`` value a candidate agreement
under the two extreme assumptions about future slots: no further deals at
all, or the best possible completion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import CapacityError, ContractError, MalformedUtilityError
from .outcomes import Outcome, OutcomeSpace, quantity_of

# Hard ceiling on combined-outcome enumerations (optimistic_view, nash_point).
ENUMERATION_CAP = 1_000_000

NO_DEAL = None  # slot entry for "no agreement"
AgreementVector = tuple  # tuple[Outcome | None, ...]


@dataclass(frozen=True)
class LinearAdditive:
    """Weighted sum of per-issue valuation tables, value in [0, 1].

    ``valuations[i][k]`` is the worth of issue ``i`` at level index ``k``.
    Weights must sum to one.
    """

    weights: tuple
    valuations: tuple  # tuple of per-issue tuples, index-aligned with levels

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(
            self, "valuations", tuple(tuple(float(v) for v in t) for t in self.valuations)
        )
        if len(self.weights) != len(self.valuations):
            raise MalformedUtilityError("one weight per issue required")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise MalformedUtilityError(f"weights sum to {sum(self.weights)}, expected 1")
        for w in self.weights:
            if not 0.0 <= w <= 1.0:
                raise MalformedUtilityError(f"weight {w} outside [0, 1]")
        for table in self.valuations:
            if not table:
                raise MalformedUtilityError("empty valuation table")
            for v in table:
                if not 0.0 <= v <= 1.0:
                    raise MalformedUtilityError(f"valuation {v} outside [0, 1]")

    def evaluate(self, outcome: Outcome) -> float:
        if len(outcome) != len(self.weights):
            raise ContractError("outcome arity does not match utility")
        total = 0.0
        for w, table, level in zip(self.weights, self.valuations, outcome):
            try:
                total += w * table[level]
            except IndexError:
                raise MalformedUtilityError(f"no valuation for level {level}") from None
        return total


@dataclass(frozen=True)
class QuantityTable:
    """Utility read off a quantity -> value table.

    ``quantities`` maps level indices of the quantity issue to integer
    quantities; ``table`` maps those quantities to utilities.
    """

    table: dict
    quantities: tuple
    quantity_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "table", {int(q): float(v) for q, v in self.table.items()})
        object.__setattr__(self, "quantities", tuple(int(q) for q in self.quantities))
        for q, v in self.table.items():
            if not 0.0 <= v <= 1.0:
                raise MalformedUtilityError(f"table value {v} for quantity {q} outside [0, 1]")

    def evaluate(self, outcome: Outcome) -> float:
        q = self.quantities[outcome[self.quantity_index]]
        if q not in self.table:
            raise MalformedUtilityError(f"no table entry for quantity {q}")
        return self.table[q]


SideUtility = Union[LinearAdditive, QuantityTable]


def eval_side(u: SideUtility, outcome: Outcome) -> float:
    """Value of one outcome under a side utility; always in [0, 1]."""
    return u.evaluate(outcome)


@dataclass(frozen=True)
class MaxOfDeals:
    """Center receives the maximum side utility over all agreed slots."""


@dataclass(frozen=True)
class TargetQuantity:
    """Peaked preference over the total agreed quantity.

    Utility is ``max(0, 1 - |Q - target| / slope)`` where ``Q`` sums the
    quantity issue over agreed slots. With ``slope == target`` the curve
    hits 0 at Q=0 and Q=2*target.
    """

    target: int
    slope: float
    quantity_issue: str = "quantity"

    def __post_init__(self):
        if self.target < 1:
            raise ContractError("target must be >= 1")
        if self.slope <= 0:
            raise ContractError("slope must be > 0")

    def curve(self, total_quantity: int) -> float:
        return max(0.0, 1.0 - abs(total_quantity - self.target) / self.slope)


CenterCombiner = Union[MaxOfDeals, TargetQuantity]


def eval_center(
    combiner: CenterCombiner,
    sides: Sequence[SideUtility],
    agreements: AgreementVector,
    spaces: Sequence[OutcomeSpace],
) -> float:
    """Center utility of a full agreement vector (NoDeal slots allowed)."""
    if not (len(sides) == len(agreements) == len(spaces)):
        raise ContractError("sides, agreements and spaces must have equal length")
    if isinstance(combiner, MaxOfDeals):
        best = 0.0
        for side, agreement in zip(sides, agreements):
            if agreement is not NO_DEAL:
                best = max(best, eval_side(side, agreement))
        return best
    if isinstance(combiner, TargetQuantity):
        total = 0
        for space, agreement in zip(spaces, agreements):
            if agreement is not NO_DEAL:
                total += quantity_of(space, agreement, combiner.quantity_issue)
        return combiner.curve(total)
    raise ContractError(f"unknown combiner {combiner!r}")


def _check_view_preconditions(partial: Sequence, slot: int) -> None:
    if not 0 <= slot < len(partial):
        raise ContractError(f"slot {slot} out of range")
    if partial[slot] is not NO_DEAL:
        raise ContractError(f"slot {slot} already finalized")
    for later in range(slot + 1, len(partial)):
        if partial[later] is not NO_DEAL:
            raise ContractError(f"slot {later} is set but lies after the active slot")


def pessimistic_view(
    combiner: CenterCombiner,
    sides: Sequence[SideUtility],
    spaces: Sequence[OutcomeSpace],
    partial: AgreementVector,
    slot: int,
    candidate: Optional[Outcome],
) -> float:
    """Center utility assuming every future slot ends in NoDeal."""
    _check_view_preconditions(partial, slot)
    completed = tuple(partial[:slot]) + (candidate,) + (NO_DEAL,) * (len(partial) - slot - 1)
    return eval_center(combiner, sides, completed, spaces)


def future_completion_count(spaces: Sequence[OutcomeSpace], slot: int) -> int:
    """Number of completions of the slots after ``slot`` (incl. NoDeal)."""
    n = 1
    for space in spaces[slot + 1 :]:
        n *= space.n_outcomes + 1
    return n


def optimistic_view(
    combiner: CenterCombiner,
    sides: Sequence[SideUtility],
    spaces: Sequence[OutcomeSpace],
    partial: AgreementVector,
    slot: int,
    candidate: Optional[Outcome],
) -> float:
    """Center utility under the best possible completion of future slots.

    Exhausts the combined future space (each later slot ranging over its
    outcomes plus NoDeal). Combiner-specific reductions keep this exact
    while avoiding a literal cross-product walk; equivalence to the brute
    force is enforced in the test suite.
    """
    _check_view_preconditions(partial, slot)
    if future_completion_count(spaces, slot) > ENUMERATION_CAP:
        raise CapacityError(
            f"future completion count exceeds cap of {ENUMERATION_CAP}"
        )
    base = pessimistic_view(combiner, sides, spaces, partial, slot, candidate)
    future = range(slot + 1, len(spaces))
    if isinstance(combiner, MaxOfDeals):
        best = base
        for j in future:
            side = sides[j]
            for idx in range(spaces[j].n_outcomes):
                best = max(best, eval_side(side, spaces[j].outcome_at(idx)))
        return best
    if isinstance(combiner, TargetQuantity):
        prior = 0
        for k in range(slot):
            if partial[k] is not NO_DEAL:
                prior += quantity_of(spaces[k], partial[k], combiner.quantity_issue)
        if candidate is not NO_DEAL:
            prior += quantity_of(spaces[slot], candidate, combiner.quantity_issue)
        # Reachable total quantities over future slots (NoDeal contributes 0).
        reachable = {prior}
        for j in future:
            options = {0}
            for idx in range(spaces[j].n_outcomes):
                options.add(
                    quantity_of(spaces[j], spaces[j].outcome_at(idx), combiner.quantity_issue)
                )
            reachable = {q + opt for q in reachable for opt in options}
        return max(combiner.curve(q) for q in reachable)
    raise ContractError(f"unknown combiner {combiner!r}")


def brute_force_optimistic_view(
    combiner: CenterCombiner,
    sides: Sequence[SideUtility],
    spaces: Sequence[OutcomeSpace],
    partial: AgreementVector,
    slot: int,
    candidate: Optional[Outcome],
) -> float:
    """Literal cross-product enumeration of future completions.

    Reference implementation for ``optimistic_view``; exponential, keep to
    small spaces.
    """
    _check_view_preconditions(partial, slot)
    future = range(slot + 1, len(spaces))
    choice_sets = [
        [NO_DEAL] + [spaces[j].outcome_at(i) for i in range(spaces[j].n_outcomes)]
        for j in future
    ]
    best = 0.0
    prefix = tuple(partial[:slot]) + (candidate,)
    for completion in itertools.product(*choice_sets):
        best = max(best, eval_center(combiner, sides, prefix + completion, spaces))
    return best

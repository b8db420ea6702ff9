"""Bilateral analytics: Pareto frontier, Nash point, Nash distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import CapacityError, ContractError
from .outcomes import Outcome, OutcomeSpace, enumerate_outcomes
from .utilities import ENUMERATION_CAP, SideUtility, eval_side


@dataclass(frozen=True)
class BilateralPoint:
    """One outcome together with both parties' utilities."""

    index: int  # canonical index in the space
    outcome: Outcome
    u_a: float
    u_b: float


def bilateral_points(
    space: OutcomeSpace, u_a: SideUtility, u_b: SideUtility
) -> List[BilateralPoint]:
    """All outcomes of the space as utility pairs, canonical order."""
    if space.n_outcomes > ENUMERATION_CAP:
        raise CapacityError(f"space exceeds enumeration cap of {ENUMERATION_CAP}")
    return [
        BilateralPoint(i, o, eval_side(u_a, o), eval_side(u_b, o))
        for i, o in enumerate(enumerate_outcomes(space))
    ]


def pareto_frontier(points: Sequence[BilateralPoint]) -> List[BilateralPoint]:
    """Weakly undominated subset, in canonical-index order.

    A point is dropped iff some other point is at least as good on both
    utilities and strictly better on one.
    """
    if not points:
        raise ContractError("pareto_frontier needs at least one point")
    frontier = []
    for p in points:
        dominated = any(
            q.u_a >= p.u_a and q.u_b >= p.u_b and (q.u_a > p.u_a or q.u_b > p.u_b)
            for q in points
        )
        if not dominated:
            frontier.append(p)
    return sorted(frontier, key=lambda p: p.index)


def nash_point(space: OutcomeSpace, u_a: SideUtility, u_b: SideUtility) -> BilateralPoint:
    """Outcome maximizing the utility product (disagreement point (0, 0)).

    Ties break toward the lowest canonical index.
    """
    best = None
    best_product = -1.0
    for point in bilateral_points(space, u_a, u_b):
        product = point.u_a * point.u_b
        if product > best_product:
            best, best_product = point, product
    assert best is not None
    return best


def nash_distance(achieved: Tuple[float, float], nash: Tuple[float, float]) -> float:
    """Euclidean distance between two points in bilateral utility space."""
    for v in (*achieved, *nash):
        if not 0.0 <= v <= 1.0:
            raise ContractError(f"utility {v} outside [0, 1]")
    return math.hypot(achieved[0] - nash[0], achieved[1] - nash[1])

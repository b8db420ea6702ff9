"""Discrete multi-issue outcome spaces.

An outcome is a tuple of per-issue level indices. Spaces enumerate their
outcomes in lexicographic order by issue position; the position of an
outcome in that enumeration is its *canonical index*, used everywhere a
deterministic tie-break is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .errors import ContractError

Level = Union[int, float, str]
Outcome = tuple  # tuple[int, ...] of per-issue level indices


@dataclass(frozen=True)
class Issue:
    """One negotiable issue with a finite, ordered list of levels."""

    name: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ContractError(f"issue {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ContractError(f"issue {self.name!r} has duplicate values")

    @property
    def cardinality(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class OutcomeSpace:
    """An ordered list of issues; the bid space of one subnegotiation."""

    issues: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "issues", tuple(self.issues))
        if not self.issues:
            raise ContractError("outcome space needs at least one issue")

    @property
    def cardinalities(self) -> tuple:
        return tuple(issue.cardinality for issue in self.issues)

    @property
    def n_outcomes(self) -> int:
        n = 1
        for c in self.cardinalities:
            n *= c
        return n

    def contains(self, outcome: Outcome) -> bool:
        return (
            isinstance(outcome, tuple)
            and len(outcome) == len(self.issues)
            and all(
                isinstance(level, int) and 0 <= level < issue.cardinality
                for level, issue in zip(outcome, self.issues)
            )
        )

    def outcome_at(self, index: int) -> Outcome:
        """Outcome at a canonical index (inverse of :meth:`index_of`)."""
        if not 0 <= index < self.n_outcomes:
            raise ContractError(f"canonical index {index} out of range")
        levels = []
        for c in reversed(self.cardinalities):
            levels.append(index % c)
            index //= c
        return tuple(reversed(levels))

    def index_of(self, outcome: Outcome) -> int:
        if not self.contains(outcome):
            raise ContractError(f"outcome {outcome!r} not in space")
        index = 0
        for level, c in zip(outcome, self.cardinalities):
            index = index * c + level
        return index

    def values_of(self, outcome: Outcome) -> tuple:
        """Concrete issue values of an outcome."""
        if not self.contains(outcome):
            raise ContractError(f"outcome {outcome!r} not in space")
        return tuple(issue.values[level] for issue, level in zip(self.issues, outcome))

    def issue_index(self, name: str) -> int:
        for i, issue in enumerate(self.issues):
            if issue.name == name:
                return i
        raise ContractError(f"no issue named {name!r}")


def enumerate_outcomes(space: OutcomeSpace) -> Iterator[Outcome]:
    """Yield all outcomes in canonical lexicographic order."""
    return iter(itertools.product(*(range(c) for c in space.cardinalities)))


def quantity_of(space: OutcomeSpace, outcome: Outcome, issue_name: str) -> int:
    """The integer value the outcome assigns to the named issue."""
    idx = space.issue_index(issue_name)
    value = space.issues[idx].values[outcome[idx]]
    if not isinstance(value, int):
        raise ContractError(f"issue {issue_name!r} has non-integer value {value!r}")
    return value

"""Scenario generation and the scenario file format.

Two randomized families mirror the arena's center-utility archetypes: a
job hunt (two issues per employer, max-of-deals center) and a target
quantity purchase (one quantity issue per seller, peaked center curve).
Three hand-authored bilateral pilot templates ship as package data.

Files are versioned JSON ("multideal/1"); every utility number is
serialized as a decimal string with 12 significant digits so round-trips
are drift-free.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional

from .errors import ContractError, ScenarioParseError, SchemaVersionError
from .outcomes import Issue, OutcomeSpace
from .utilities import (
    CenterCombiner,
    LinearAdditive,
    MaxOfDeals,
    QuantityTable,
    SideUtility,
    TargetQuantity,
)

SCHEMA = "multideal/1"


def _q(x: float) -> float:
    """Quantize to 12 significant digits (the serialized precision)."""
    return float(format(x, ".12g"))


@dataclass(frozen=True)
class Subnegotiation:
    space: OutcomeSpace
    center_utility: SideUtility
    edge_utility: SideUtility


@dataclass(frozen=True)
class Scenario:
    id: str
    subnegotiations: tuple
    combiner: CenterCombiner
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "subnegotiations", tuple(self.subnegotiations))
        if not self.subnegotiations:
            raise ContractError("scenario needs at least one subnegotiation")

    @property
    def n_edges(self) -> int:
        return len(self.subnegotiations)


def _strict_monotone_values(rng: random.Random, n: int, decreasing: bool) -> List[float]:
    """Endpoint-normalized strictly monotone valuation table of length n."""
    while True:
        interior = sorted((_q(rng.uniform(0.02, 0.98)) for _ in range(n - 2)), reverse=True)
        values = [1.0] + interior + [0.0]
        if all(a > b for a, b in zip(values, values[1:])):
            break
    if not decreasing:
        values = values[::-1]
    return values


def _random_weights(rng: random.Random) -> List[float]:
    w = _q(rng.uniform(0.2, 0.8))
    return [w, _q(1.0 - w)]


def gen_job_hunt(
    n_edges: int,
    seed: int,
    days_max: int = 5,
    salary_levels: int = 10,
) -> Scenario:
    """Randomized job-hunt scenario: days + salary per employer, Max combiner.

    The job hunter's valuation strictly decreases in office days and
    strictly increases in salary (endpoints pinned to 1 and 0); each
    employer's runs the other way. Salary grids are drawn independently
    per edge.
    """
    if n_edges < 1:
        raise ContractError("n_edges must be >= 1")
    rng = random.Random(seed)
    subs = []
    for _ in range(n_edges):
        days = Issue("days", tuple(range(days_max + 1)))
        start = rng.randrange(40, 81) * 1000
        step = rng.randrange(2, 9) * 1000
        salary = Issue("salary", tuple(start + step * k for k in range(salary_levels)))
        space = OutcomeSpace((days, salary))
        center = LinearAdditive(
            weights=_random_weights(rng),
            valuations=(
                _strict_monotone_values(rng, days.cardinality, decreasing=True),
                _strict_monotone_values(rng, salary.cardinality, decreasing=False),
            ),
        )
        edge = LinearAdditive(
            weights=_random_weights(rng),
            valuations=(
                _strict_monotone_values(rng, days.cardinality, decreasing=False),
                _strict_monotone_values(rng, salary.cardinality, decreasing=True),
            ),
        )
        subs.append(Subnegotiation(space, center, edge))
    return Scenario(
        id=f"jobhunt-s{seed}-e{n_edges}",
        subnegotiations=tuple(subs),
        combiner=MaxOfDeals(),
        metadata={"family": "jobhunt", "seed": seed, "independent_salary_grids": True},
    )


def gen_target_quantity(
    n_edges: int,
    seed: int,
    target: int = 10,
    q_max: int = 10,
) -> Scenario:
    """Randomized target-quantity scenario: one quantity issue per seller.

    The buyer's per-slot table rewards approach toward the full target;
    each seller's utility rises with quantity up to a random capacity and
    is flat beyond it.
    """
    if n_edges < 1:
        raise ContractError("n_edges must be >= 1")
    if target < 1:
        raise ContractError("target must be >= 1")
    if q_max < 1:
        raise ContractError("q_max must be >= 1")
    rng = random.Random(seed)
    subs = []
    for _ in range(n_edges):
        quantity = Issue("quantity", tuple(range(q_max + 1)))
        space = OutcomeSpace((quantity,))
        denom = max(target, q_max)
        center = QuantityTable(
            table={q: _q(max(0.0, 1.0 - abs(q - target) / denom)) for q in range(q_max + 1)},
            quantities=quantity.values,
        )
        capacity = rng.randint(1, q_max)
        edge = QuantityTable(
            table={q: _q(min(q, capacity) / capacity) for q in range(q_max + 1)},
            quantities=quantity.values,
        )
        subs.append(Subnegotiation(space, center, edge))
    return Scenario(
        id=f"targetqty-s{seed}-e{n_edges}",
        subnegotiations=tuple(subs),
        combiner=TargetQuantity(target=target, slope=float(target)),
        metadata={"family": "targetqty", "seed": seed, "q_max": q_max},
    )


# ---------------------------------------------------------------------------
# file format


def _encode_utility(u: SideUtility) -> dict:
    if isinstance(u, LinearAdditive):
        return {
            "kind": "linear_additive",
            "weights": [format(w, ".12g") for w in u.weights],
            "valuations": [[format(v, ".12g") for v in table] for table in u.valuations],
        }
    if isinstance(u, QuantityTable):
        return {
            "kind": "quantity_table",
            "table": {str(q): format(v, ".12g") for q, v in sorted(u.table.items())},
            "quantity_index": u.quantity_index,
        }
    raise ContractError(f"unknown utility {u!r}")


def _encode_combiner(c: CenterCombiner) -> dict:
    if isinstance(c, MaxOfDeals):
        return {"kind": "max"}
    if isinstance(c, TargetQuantity):
        return {
            "kind": "target_quantity",
            "target": c.target,
            "slope": format(c.slope, ".12g"),
            "quantity_issue": c.quantity_issue,
        }
    raise ContractError(f"unknown combiner {c!r}")


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "schema": SCHEMA,
        "id": s.id,
        "combiner": _encode_combiner(s.combiner),
        "subnegotiations": [
            {
                "issues": [
                    {"name": issue.name, "values": list(issue.values)}
                    for issue in sub.space.issues
                ],
                "center_utility": _encode_utility(sub.center_utility),
                "edge_utility": _encode_utility(sub.edge_utility),
            }
            for sub in s.subnegotiations
        ],
        "metadata": s.metadata,
    }


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ScenarioParseError(f"missing field {key!r}", where)
    return mapping[key]


def _decode_utility(data: dict, space: OutcomeSpace, where: str) -> SideUtility:
    kind = _require(data, "kind", where)
    if kind == "linear_additive":
        weights = [float(w) for w in _require(data, "weights", where)]
        total = sum(weights)
        if abs(total - 1.0) > 1e-6:
            raise ScenarioParseError(f"weights sum to {total}, expected 1", where)
        if abs(total - 1.0) > 1e-9:
            weights = [w / total for w in weights]
        valuations = [[float(v) for v in table] for table in _require(data, "valuations", where)]
        if len(valuations) != len(space.issues) or any(
            len(table) != issue.cardinality for table, issue in zip(valuations, space.issues)
        ):
            raise ScenarioParseError("valuation tables do not cover the space", where)
        return LinearAdditive(weights=weights, valuations=valuations)
    if kind == "quantity_table":
        qi = int(data.get("quantity_index", 0))
        if not 0 <= qi < len(space.issues):
            raise ScenarioParseError(f"quantity_index {qi} out of range", where)
        table = {int(q): float(v) for q, v in _require(data, "table", where).items()}
        quantities = space.issues[qi].values
        missing = [q for q in quantities if q not in table]
        if missing:
            raise ScenarioParseError(f"table missing quantities {missing}", where)
        return QuantityTable(table=table, quantities=quantities, quantity_index=qi)
    raise ScenarioParseError(f"unknown utility kind {kind!r}", where)


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioParseError("top level must be an object", "$")
    schema = _require(data, "schema", "$")
    if schema != SCHEMA:
        raise SchemaVersionError(f"unsupported schema {schema!r}, expected {SCHEMA!r}", "$.schema")
    combiner_data = _require(data, "combiner", "$")
    kind = _require(combiner_data, "kind", "$.combiner")
    if kind == "max":
        combiner: CenterCombiner = MaxOfDeals()
    elif kind == "target_quantity":
        combiner = TargetQuantity(
            target=int(_require(combiner_data, "target", "$.combiner")),
            slope=float(_require(combiner_data, "slope", "$.combiner")),
            quantity_issue=combiner_data.get("quantity_issue", "quantity"),
        )
    else:
        raise ScenarioParseError(f"unknown combiner kind {kind!r}", "$.combiner")
    subs = []
    raw_subs = _require(data, "subnegotiations", "$")
    if not raw_subs:
        raise ScenarioParseError("scenario has no subnegotiations", "$.subnegotiations")
    for k, raw in enumerate(raw_subs):
        where = f"$.subnegotiations[{k}]"
        issues = tuple(
            Issue(_require(i, "name", where), tuple(i["values"]))
            for i in _require(raw, "issues", where)
        )
        space = OutcomeSpace(issues)
        try:
            center = _decode_utility(
                _require(raw, "center_utility", where), space, where + ".center_utility"
            )
            edge = _decode_utility(
                _require(raw, "edge_utility", where), space, where + ".edge_utility"
            )
        except (ValueError, TypeError) as exc:
            raise ScenarioParseError(str(exc), where) from exc
        subs.append(Subnegotiation(space, center, edge))
    return Scenario(
        id=str(_require(data, "id", "$")),
        subnegotiations=tuple(subs),
        combiner=combiner,
        metadata=dict(data.get("metadata", {})),
    )


def save_scenario(s: Scenario, destination) -> None:
    """Write a scenario as canonical JSON (sorted keys, stable floats)."""
    text = json.dumps(scenario_to_dict(s), indent=2, sort_keys=True)
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def load_scenario(source) -> Scenario:
    with open(source, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads_scenario(text)


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"invalid JSON: {exc.msg}", f"char {exc.pos}") from exc
    return scenario_from_dict(data)


PILOT_TEMPLATE_NAMES = ("trade", "island_survival", "grocery")


def pilot_templates() -> List[Scenario]:
    """The three bilateral pilot scenarios shipped as package data."""
    scenarios = []
    for name in PILOT_TEMPLATE_NAMES:
        text = resources.files("multideal").joinpath(f"templates/{name}.json").read_text()
        scenarios.append(loads_scenario(text))
    return scenarios

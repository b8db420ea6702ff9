"""Round-robin tournaments: scheduling, execution, scoring, persistence.

Every agent is center exactly once per scenario and repetition; its edges
are a seed-determined permutation of the remaining lineup, cycled to fill
the scenario's slots. Matches are independent work units, so they may run
in a process pool; results are canonicalized by match id, which keeps all
persisted output identical at any parallelism degree.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .agents import make_agent
from .analytics import nash_distance, nash_point
from .errors import TournamentConfigError
from .outcomes import OutcomeSpace
from .protocol import derive_seed
from .scenarios import Scenario, scenario_from_dict, scenario_to_dict
from .session import SessionResult, run_session, transcript_record
from .utilities import NO_DEAL, eval_center, eval_side, pessimistic_view

MATCH_SCHEMA = "multideal-match/1"


@dataclass(frozen=True)
class AgentSpec:
    name: str
    params: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"

    def build(self):
        return make_agent(self.name, self.params)


@dataclass(frozen=True)
class TournamentConfig:
    agents: tuple  # tuple[AgentSpec, ...]
    scenarios: tuple  # tuple[Scenario, ...]
    repetitions: int = 1
    deadline_rounds: int = 100
    master_seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if len(self.agents) < 2:
            raise TournamentConfigError("need at least 2 agents")
        if len(set(a.label for a in self.agents)) != len(self.agents):
            raise TournamentConfigError("agent labels must be unique")
        if not self.scenarios:
            raise TournamentConfigError("need at least one scenario")
        if self.repetitions < 1:
            raise TournamentConfigError("repetitions must be >= 1")
        if self.deadline_rounds < 1:
            raise TournamentConfigError("deadline_rounds must be >= 1")
        if self.jobs < 1:
            raise TournamentConfigError("jobs must be >= 1")


@dataclass(frozen=True)
class MatchSpec:
    match_id: str
    scenario: Scenario
    center: AgentSpec
    edges: tuple  # tuple[AgentSpec, ...], one per slot
    seed: int
    deadline_rounds: int


def schedule_round_robin(config: TournamentConfig) -> List[MatchSpec]:
    """Deterministic schedule: pure function of the config."""
    matches = []
    for s_idx, scenario in enumerate(config.scenarios):
        for rep in range(config.repetitions):
            for c_idx, center in enumerate(config.agents):
                others = [a for i, a in enumerate(config.agents) if i != c_idx]
                rng = random.Random(
                    derive_seed(config.master_seed, "edges", s_idx, rep, center.label)
                )
                rng.shuffle(others)
                n = scenario.n_edges
                edges = tuple(others[k % len(others)] for k in range(n))
                match_id = f"m{len(matches):05d}-{scenario.id}-r{rep}-{center.label}"
                matches.append(
                    MatchSpec(
                        match_id=match_id,
                        scenario=scenario,
                        center=center,
                        edges=edges,
                        seed=derive_seed(config.master_seed, "match", len(matches)),
                        deadline_rounds=config.deadline_rounds,
                    )
                )
    return matches


class _CenterSlotUtility:
    """Center's bilateral utility at one slot: pessimistic view over it."""

    def __init__(self, scenario: Scenario, prior_agreements: tuple, slot: int):
        self._scenario = scenario
        self._slot = slot
        n = scenario.n_edges
        self._partial = tuple(prior_agreements[:slot]) + (NO_DEAL,) * (n - slot)

    def evaluate(self, outcome) -> float:
        s = self._scenario
        return pessimistic_view(
            s.combiner,
            tuple(sub.center_utility for sub in s.subnegotiations),
            tuple(sub.space for sub in s.subnegotiations),
            self._partial,
            self._slot,
            outcome,
        )


def _slot_nash(scenario: Scenario, agreements: tuple, slot: int) -> dict:
    sub = scenario.subnegotiations[slot]
    u_a = _CenterSlotUtility(scenario, agreements, slot)
    nash = nash_point(sub.space, u_a, sub.edge_utility)
    entry = {
        "nash_utilities": [nash.u_a, nash.u_b],
        "nash_outcome": list(nash.outcome),
        "achieved": None,
        "distance": None,
    }
    agreement = agreements[slot]
    if agreement is not NO_DEAL:
        achieved = (u_a.evaluate(agreement), eval_side(sub.edge_utility, agreement))
        entry["achieved"] = list(achieved)
        entry["distance"] = nash_distance(achieved, (nash.u_a, nash.u_b))
    return entry


def run_match(spec: MatchSpec) -> dict:
    """Execute one match and return its persistable record."""
    center_agent = spec.center.build()
    edge_agents = [e.build() for e in spec.edges]
    result = run_session(
        center_agent, edge_agents, spec.scenario, spec.deadline_rounds, spec.seed
    )
    nash_entries = [
        _slot_nash(spec.scenario, result.agreements, slot)
        for slot in range(spec.scenario.n_edges)
    ]
    return {
        "schema": MATCH_SCHEMA,
        "match_id": spec.match_id,
        "scenario": scenario_to_dict(spec.scenario),
        "center": {"name": spec.center.name, "params": spec.center.params},
        "edges": [{"name": e.name, "params": e.params} for e in spec.edges],
        "seed": spec.seed,
        "deadline_rounds": spec.deadline_rounds,
        "agreements": [list(a) if a is not NO_DEAL else None for a in result.agreements],
        "center_utility": result.center_utility,
        "edge_utilities": list(result.edge_utilities),
        "faults": list(result.faults),
        "nash": nash_entries,
        "transcripts": [transcript_record(t) for t in result.transcripts],
    }


def _run_match_payload(payload: dict) -> dict:
    # Process-pool entry point: everything crosses as plain dicts.
    spec = MatchSpec(
        match_id=payload["match_id"],
        scenario=scenario_from_dict(payload["scenario"]),
        center=AgentSpec(payload["center"]["name"], payload["center"]["params"]),
        edges=tuple(AgentSpec(e["name"], e["params"]) for e in payload["edges"]),
        seed=payload["seed"],
        deadline_rounds=payload["deadline_rounds"],
    )
    return run_match(spec)


def run_tournament(config: TournamentConfig) -> List[dict]:
    """Run the full schedule; returns match records in schedule order."""
    specs = schedule_round_robin(config)
    payloads = [
        {
            "match_id": s.match_id,
            "scenario": scenario_to_dict(s.scenario),
            "center": {"name": s.center.name, "params": s.center.params},
            "edges": [{"name": e.name, "params": e.params} for e in s.edges],
            "seed": s.seed,
            "deadline_rounds": s.deadline_rounds,
        }
        for s in specs
    ]
    if config.jobs == 1:
        records = [_run_match_payload(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_match_payload, payloads))
    records.sort(key=lambda r: r["match_id"])
    return records


@dataclass(frozen=True)
class ScoreRecord:
    agent: str
    center_mean: Optional[float]
    edge_mean: Optional[float]
    final: Optional[float]
    mean_nash_distance: Optional[float]
    agreement_rate: float
    n_center: int
    n_edge: int
    rank: Optional[int] = None

    @property
    def incomplete(self) -> bool:
        return self.final is None


def _agent_label(entry: dict) -> str:
    return AgentSpec(entry["name"], entry.get("params") or {}).label


def _rank_key(final: float) -> int:
    """Final in thousandths, rounded half away from zero.

    A 1e-9 tolerance absorbs binary float noise so values that are exact
    3-decimal ties in real arithmetic (e.g. means ending in ...5) rank
    together.
    """
    return math.floor(final * 1000 + 0.5 + 1e-6)


def score(matches: Sequence[dict]) -> List[ScoreRecord]:
    """Per-agent role means and final = (center_mean + edge_mean) / 2.

    Ranking uses finals rounded to 3 decimals; equal rounded finals share
    a rank and the next rank is skipped (competition style). Agents
    missing a role are flagged with no final and rank last.
    """
    if not matches:
        raise TournamentConfigError("no matches to score")
    center_u: Dict[str, List[float]] = {}
    edge_u: Dict[str, List[float]] = {}
    nash_d: Dict[str, List[float]] = {}
    slots_total: Dict[str, int] = {}
    slots_agreed: Dict[str, int] = {}

    def bump(d, key, amount=1):
        d[key] = d.get(key, 0) + amount

    for m in matches:
        center = _agent_label(m["center"])
        center_u.setdefault(center, []).append(m["center_utility"])
        for slot, (edge, utility, agreement) in enumerate(
            zip(m["edges"], m["edge_utilities"], m["agreements"])
        ):
            label = _agent_label(edge)
            edge_u.setdefault(label, []).append(utility)
            bump(slots_total, label)
            bump(slots_total, center)
            if agreement is not None:
                bump(slots_agreed, label)
                bump(slots_agreed, center)
            distance = m["nash"][slot]["distance"]
            if distance is not None:
                nash_d.setdefault(center, []).append(distance)

    records = []
    for agent in sorted(set(center_u) | set(edge_u)):
        c = center_u.get(agent, [])
        e = edge_u.get(agent, [])
        center_mean = sum(c) / len(c) if c else None
        edge_mean = sum(e) / len(e) if e else None
        final = (
            (center_mean + edge_mean) / 2
            if center_mean is not None and edge_mean is not None
            else None
        )
        nd = nash_d.get(agent, [])
        records.append(
            ScoreRecord(
                agent=agent,
                center_mean=center_mean,
                edge_mean=edge_mean,
                final=final,
                mean_nash_distance=sum(nd) / len(nd) if nd else None,
                agreement_rate=slots_agreed.get(agent, 0) / max(slots_total.get(agent, 0), 1),
                n_center=len(c),
                n_edge=len(e),
            )
        )

    complete = sorted(
        (r for r in records if not r.incomplete),
        key=lambda r: (-_rank_key(r.final), -r.final, r.agent),
    )
    ranked = []
    previous_key = None
    current_rank = 0
    for i, r in enumerate(complete):
        key = _rank_key(r.final)
        if key != previous_key:
            current_rank = i + 1
            previous_key = key
        ranked.append(
            ScoreRecord(**{**r.__dict__, "rank": current_rank})
        )
    ranked.extend(r for r in records if r.incomplete)
    return ranked


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(x)


SCORE_COLUMNS = (
    "rank",
    "agent",
    "center_mean",
    "edge_mean",
    "final",
    "mean_nash_distance",
    "agreement_rate",
    "n_center",
    "n_edge",
)


def scores_to_csv(records: Sequence[ScoreRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(SCORE_COLUMNS)
    for r in records:
        writer.writerow(
            [
                "" if r.rank is None else r.rank,
                r.agent,
                _fmt(r.center_mean),
                _fmt(r.edge_mean),
                _fmt(r.final),
                _fmt(r.mean_nash_distance),
                repr(r.agreement_rate),
                r.n_center,
                r.n_edge,
            ]
        )
    return buffer.getvalue()


def scores_from_csv(text: str) -> List[ScoreRecord]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append(
            ScoreRecord(
                agent=row["agent"],
                center_mean=float(row["center_mean"]) if row["center_mean"] else None,
                edge_mean=float(row["edge_mean"]) if row["edge_mean"] else None,
                final=float(row["final"]) if row["final"] else None,
                mean_nash_distance=(
                    float(row["mean_nash_distance"]) if row["mean_nash_distance"] else None
                ),
                agreement_rate=float(row["agreement_rate"]),
                n_center=int(row["n_center"]),
                n_edge=int(row["n_edge"]),
                rank=int(row["rank"]) if row["rank"] else None,
            )
        )
    return records


def scores_to_text(records: Sequence[ScoreRecord]) -> str:
    lines = [f"{'rank':>4}  {'agent':<32} {'center':>8} {'edge':>8} {'final':>8}"]
    for r in records:
        lines.append(
            f"{r.rank if r.rank is not None else '-':>4}  {r.agent:<32}"
            f" {r.center_mean if r.center_mean is not None else float('nan'):>8.3f}"
            f" {r.edge_mean if r.edge_mean is not None else float('nan'):>8.3f}"
            f" {r.final if r.final is not None else float('nan'):>8.3f}"
            + ("  [incomplete roles]" if r.incomplete else "")
        )
    return "\n".join(lines) + "\n"


def dumps_match(record: dict) -> str:
    """Canonical one-line JSON for a match record."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def report(records: Sequence[ScoreRecord], matches: Sequence[dict], destination) -> dict:
    """Write score table (text + CSV), per-match JSONL and summary stats."""
    os.makedirs(destination, exist_ok=True)
    if not os.access(destination, os.W_OK):
        raise IOError(f"destination {destination} is not writable")
    paths = {
        "scores_txt": os.path.join(destination, "scores.txt"),
        "scores_csv": os.path.join(destination, "scores.csv"),
        "matches_jsonl": os.path.join(destination, "matches.jsonl"),
        "summary_json": os.path.join(destination, "summary.json"),
    }
    with open(paths["matches_jsonl"], "w", encoding="utf-8") as fh:
        for m in matches:
            fh.write(dumps_match(m) + "\n")
    agreed = sum(1 for m in matches for a in m["agreements"] if a is not None)
    slots = sum(len(m["agreements"]) for m in matches)
    distances = [
        e["distance"] for m in matches for e in m["nash"] if e["distance"] is not None
    ]
    summary = {
        "matches": len(matches),
        "slots": slots,
        "agreement_rate": agreed / slots if slots else 0.0,
        "mean_nash_distance": sum(distances) / len(distances) if distances else None,
        "faults": sum(1 for m in matches for f in m["faults"] if f is not None),
        "per_agent": {
            r.agent: {
                "rank": r.rank,
                "center_mean": r.center_mean,
                "edge_mean": r.edge_mean,
                "final": r.final,
                "mean_nash_distance": r.mean_nash_distance,
                "agreement_rate": r.agreement_rate,
            }
            for r in records
        },
    }
    with open(paths["summary_json"], "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(paths["scores_csv"], "w", encoding="utf-8") as fh:
        fh.write(scores_to_csv(records))
    with open(paths["scores_txt"], "w", encoding="utf-8") as fh:
        fh.write(scores_to_text(records))
    return paths


def replay_match(record: dict) -> dict:
    """Re-run a match from its stored seed and lineup.

    Only possible when every seat is a registered strategy; the returned
    record must equal the stored one on all persisted numbers.
    """
    return _run_match_payload(record)


def audit_match(record: dict) -> dict:
    """Recompute utilities from the stored transcripts alone.

    Works for any record, including live-play exports whose center was a
    human and cannot be re-simulated.
    """
    scenario = scenario_from_dict(record["scenario"])
    agreements = tuple(
        tuple(a) if a is not None else NO_DEAL for a in record["agreements"]
    )
    for slot, transcript in enumerate(record["transcripts"]):
        stored = transcript["agreement"]
        expected = list(agreements[slot]) if agreements[slot] is not NO_DEAL else None
        if stored != expected:
            raise TournamentConfigError(
                f"slot {slot}: transcript agreement {stored} != recorded {expected}"
            )
    spaces = tuple(sub.space for sub in scenario.subnegotiations)
    center_utility = eval_center(
        scenario.combiner,
        tuple(sub.center_utility for sub in scenario.subnegotiations),
        agreements,
        spaces,
    )
    edge_utilities = [
        0.0 if a is NO_DEAL else eval_side(sub.edge_utility, a)
        for sub, a in zip(scenario.subnegotiations, agreements)
    ]
    return {"center_utility": center_utility, "edge_utilities": edge_utilities}

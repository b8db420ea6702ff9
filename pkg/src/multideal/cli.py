"""The ``arena`` command line interface.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .agents import REGISTRY
from .analytics import bilateral_points, nash_point, pareto_frontier
from .errors import ContractError, MultidealError, ScenarioParseError, TournamentConfigError
from .scenarios import (
    gen_job_hunt,
    gen_target_quantity,
    load_scenario,
    save_scenario,
    scenario_from_dict,
)
from .tournament import (
    AgentSpec,
    TournamentConfig,
    audit_match,
    dumps_match,
    replay_match,
    report,
    run_tournament,
    score,
    scores_to_text,
)

EXIT_CONFIG = 2
EXIT_IO = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_agent_spec(text: str) -> AgentSpec:
    """``name`` or ``name(key=value;key=value)``."""
    text = text.strip()
    if "(" not in text:
        return AgentSpec(text)
    if not text.endswith(")"):
        raise TournamentConfigError(f"malformed agent spec {text!r}")
    name, _, inner = text[:-1].partition("(")
    params = {}
    for pair in filter(None, inner.split(";")):
        key, sep, value = pair.partition("=")
        if not sep:
            raise TournamentConfigError(f"malformed agent param {pair!r}")
        params[key.strip()] = value.strip()
    return AgentSpec(name.strip(), params)


def _parse_agents(text: str) -> tuple:
    specs, depth, current = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            specs.append("".join(current))
            current = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        current.append(ch)
    specs.append("".join(current))
    return tuple(_parse_agent_spec(s) for s in specs if s.strip())


GENERATORS = {
    "jobhunt": gen_job_hunt,
    "targetqty": gen_target_quantity,
}


def _generate_scenarios(family: str, count: int, edges: int, seed: int) -> tuple:
    if family not in GENERATORS:
        raise TournamentConfigError(f"unknown family {family!r}; known: {sorted(GENERATORS)}")
    return tuple(GENERATORS[family](edges, seed + i) for i in range(count))


def _load_scenario_dir(path: str) -> tuple:
    files = sorted(
        os.path.join(path, f) for f in os.listdir(path) if f.endswith(".json")
    )
    if not files:
        raise TournamentConfigError(f"no scenario files in {path!r}")
    return tuple(load_scenario(f) for f in files)


@click.group()
def main():
    """Sequential multi-deal negotiation arena."""


@main.command()
@click.option("--agents", required=True, help="Comma-separated strategy names, e.g. conceder,random")
@click.option("--scenario-dir", default=None, help="Directory of scenario JSON files")
@click.option("--gen", "gen_spec", default=None, help="Generate scenarios: family:count (jobhunt|targetqty)")
@click.option("--edges", default=2, show_default=True, help="Edges per generated scenario")
@click.option("--reps", default=1, show_default=True)
@click.option("--deadline", default=100, show_default=True, help="Rounds per subnegotiation")
@click.option("--seed", default=0, show_default=True)
@click.option("--jobs", default=1, show_default=True, help="Parallel match workers")
@click.option("--out", "out_dir", required=True, help="Report output directory")
def tournament(agents, scenario_dir, gen_spec, edges, reps, deadline, seed, jobs, out_dir):
    """Run a round-robin tournament and write reports."""
    try:
        if (scenario_dir is None) == (gen_spec is None):
            raise TournamentConfigError("give exactly one of --scenario-dir or --gen")
        if scenario_dir is not None:
            scenarios = _load_scenario_dir(scenario_dir)
        else:
            family, _, count = gen_spec.partition(":")
            scenarios = _generate_scenarios(family, int(count or 1), edges, seed)
        config = TournamentConfig(
            agents=_parse_agents(agents),
            scenarios=scenarios,
            repetitions=reps,
            deadline_rounds=deadline,
            master_seed=seed,
            jobs=jobs,
        )
        matches = run_tournament(config)
        records = score(matches)
        report(records, matches, out_dir)
    except (TournamentConfigError, ContractError, ScenarioParseError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(scores_to_text(records), nl=False)
    click.echo(f"wrote reports to {out_dir}")


@main.group()
def scenario():
    """Scenario utilities."""


@scenario.command("gen")
@click.option("--family", required=True, type=click.Choice(sorted(GENERATORS)))
@click.option("--edges", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_file", required=True)
def scenario_gen(family, edges, seed, out_file):
    """Generate one randomized scenario file."""
    try:
        s = GENERATORS[family](edges, seed)
    except (ContractError, TournamentConfigError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        save_scenario(s, out_file)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(f"wrote {s.id} to {out_file}")


def _read_matches(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except json.JSONDecodeError as exc:
        _fail(EXIT_CONFIG, f"malformed match line: {exc}")


@main.command()
@click.option("--matches", "matches_path", required=True, help="matches.jsonl from a report")
@click.option("--nash", "show_nash", is_flag=True, help="Per-agent Nash-distance statistics")
@click.option("--pareto", "show_pareto", is_flag=True, help="Pareto-frontier sizes per slot")
def analyze(matches_path, show_nash, show_pareto):
    """Summarize a match log."""
    matches = _read_matches(matches_path)
    if not matches:
        _fail(EXIT_CONFIG, "empty match log")
    records = score(matches)
    click.echo(scores_to_text(records), nl=False)
    if show_nash:
        click.echo("\nper-agent mean Nash distance (as center, agreed slots):")
        for r in records:
            value = "n/a" if r.mean_nash_distance is None else f"{r.mean_nash_distance:.4f}"
            click.echo(f"  {r.agent:<32} {value}")
    if show_pareto:
        click.echo("\npareto frontier sizes (first match per scenario):")
        seen = set()
        for m in matches:
            sid = m["scenario"]["id"]
            if sid in seen:
                continue
            seen.add(sid)
            s = scenario_from_dict(m["scenario"])
            sizes = []
            for slot, sub in enumerate(s.subnegotiations):
                points = bilateral_points(sub.space, sub.center_utility, sub.edge_utility)
                sizes.append(len(pareto_frontier(points)))
            click.echo(f"  {sid}: {sizes}")


@main.command()
@click.option("--match", "match_path", required=True, help="Path to a JSONL match file")
@click.option("--index", default=0, show_default=True, help="Line index within the file")
def replay(match_path, index):
    """Re-run (or audit) one stored match and verify its numbers."""
    matches = _read_matches(match_path)
    if not 0 <= index < len(matches):
        _fail(EXIT_CONFIG, f"index {index} out of range for {len(matches)} matches")
    stored = matches[index]
    try:
        audited = audit_match(stored)
        resimulated = None
        seats = [stored["center"]["name"]] + [e["name"] for e in stored["edges"]]
        if all(name in REGISTRY for name in seats):
            resimulated = replay_match(stored)
    except MultidealError as exc:
        _fail(EXIT_CONFIG, str(exc))
    result = {
        "match_id": stored["match_id"],
        "stored_center_utility": stored["center_utility"],
        "audited_center_utility": audited["center_utility"],
        "audit_ok": audited["center_utility"] == stored["center_utility"]
        and audited["edge_utilities"] == stored["edge_utilities"],
    }
    if resimulated is not None:
        result["resimulated_center_utility"] = resimulated["center_utility"]
        result["resimulation_ok"] = dumps_match(resimulated) == dumps_match(stored)
    click.echo(json.dumps(result, indent=2, sort_keys=True))
    if not result["audit_ok"] or result.get("resimulation_ok") is False:
        sys.exit(1)


@main.command()
@click.option("--port", type=int, default=lambda: int(os.environ.get("ARENA_PORT", 8000)), show_default="8000 or $ARENA_PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ttl", type=float, default=lambda: float(os.environ.get("ARENA_TTL", 1800)), show_default="1800 or $ARENA_TTL")
@click.option("--template-dir", default=lambda: os.environ.get("ARENA_TEMPLATE_DIR"), show_default="built-in or $ARENA_TEMPLATE_DIR")
def serve(port, host, ttl, template_dir):
    """Run the live play gateway."""
    import uvicorn

    from .gateway import create_app

    try:
        app = create_app(template_dir=template_dir, ttl_seconds=ttl)
    except (ScenarioParseError, ContractError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

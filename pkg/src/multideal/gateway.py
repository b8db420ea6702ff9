"""Live play gateway: a human negotiates as the center against bot edges.

HTTP service over the documented wire protocol: every response is an
envelope ``{"v": "1", "type": ..., "body": ...}``; errors carry
``{"code", "reason"}``. Sessions are bearer-token only and expire after a
TTL of inactivity. The gateway adds no protocol semantics of its own:
every transition goes through :mod:`multideal.protocol`.
"""

from __future__ import annotations

import glob
import os
import random
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .agents import REGISTRY, make_agent
from .errors import IllegalActionError
from .outcomes import Outcome
from .protocol import (
    Accept,
    EndNegotiation,
    NegotiationState,
    Offer,
    Side,
    Status,
    derive_seed,
    forfeit,
    new_subnegotiation,
    step,
)
from .scenarios import Scenario, load_scenario, pilot_templates, scenario_to_dict
from .session import AgentContext, _protocol_view, transcript_record
from .tournament import MATCH_SCHEMA, _slot_nash, AgentSpec
from .utilities import NO_DEAL, eval_center, eval_side

DEFAULT_TTL_SECONDS = 1800.0


@dataclass
class LiveSession:
    token: str
    scenario: Scenario
    bot_specs: tuple  # tuple[AgentSpec, ...]
    bots: tuple
    deadline_rounds: int
    seed: int
    slot: int = 0
    neg: Optional[NegotiationState] = None
    agreements: list = field(default_factory=list)
    transcripts: list = field(default_factory=list)
    finished: bool = False
    state_version: int = 0
    created: float = field(default_factory=time.monotonic)
    last_activity: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)


class GatewayError(Exception):
    def __init__(self, status_code: int, code: str, reason: str):
        super().__init__(reason)
        self.status_code = status_code
        self.code = code
        self.reason = reason


def _envelope(type_: str, body) -> dict:
    return {"v": "1", "type": type_, "body": body}


def _load_templates(template_dir: Optional[str]) -> Dict[str, Scenario]:
    if template_dir:
        templates = {}
        for path in sorted(glob.glob(os.path.join(template_dir, "*.json"))):
            scenario = load_scenario(path)
            templates[scenario.id] = scenario
        return templates
    return {s.id: s for s in pilot_templates()}


def create_app(
    template_dir: Optional[str] = None, ttl_seconds: float = DEFAULT_TTL_SECONDS
) -> FastAPI:
    app = FastAPI(title="multideal play gateway")
    ttl_seconds = float(ttl_seconds)
    templates = _load_templates(template_dir)
    sessions: Dict[str, LiveSession] = {}
    store_lock = threading.Lock()

    # -- session mechanics ---------------------------------------------------

    def _purge_expired() -> None:
        now = time.monotonic()
        with store_lock:
            dead = [t for t, s in sessions.items() if now - s.last_activity > ttl_seconds]
            for t in dead:
                del sessions[t]

    def _get_session(token: str) -> LiveSession:
        _purge_expired()
        with store_lock:
            session = sessions.get(token)
        if session is None:
            raise GatewayError(404, "not_found", "unknown or expired session token")
        session.last_activity = time.monotonic()
        return session

    def _bot_context(session: LiveSession) -> AgentContext:
        sub = session.scenario.subnegotiations[session.slot]
        return AgentContext(role="edge", side_utility=sub.edge_utility,
                            **_protocol_view(session.neg, Side.B))

    def _start_slot(session: LiveSession) -> None:
        sub = session.scenario.subnegotiations[session.slot]
        session.neg = new_subnegotiation(sub.space, session.deadline_rounds, Side.A)

    def _close_slot(session: LiveSession) -> None:
        final = session.neg
        session.transcripts.append(final)
        session.agreements.append(
            final.agreement if final.status is Status.AGREED else NO_DEAL
        )
        session.slot += 1
        if session.slot >= session.scenario.n_edges:
            session.finished = True
            session.neg = None
        else:
            _start_slot(session)

    def _drive_bots(session: LiveSession) -> None:
        # Advance until the session waits for the human again or finishes.
        while not session.finished:
            state = session.neg
            if not state.running:
                _close_slot(session)
                continue
            if state.round >= state.deadline_rounds:
                session.neg = step(state, EndNegotiation())  # deadline fires
                continue
            if state.turn is Side.A:
                return  # human's move
            bot = session.bots[session.slot]
            rng_seed = derive_seed(session.seed, "slot", session.slot, "B", state.round)
            try:
                action = bot.act(_bot_context(session), random.Random(rng_seed))
                session.neg = step(state, action)
            except Exception:
                session.neg = forfeit(state, Side.B)

    def _own_utility(session: LiveSession, slot: int, agreement) -> Optional[float]:
        if agreement is NO_DEAL:
            return None
        return eval_side(session.scenario.subnegotiations[slot].center_utility, agreement)

    def _view(session: LiveSession) -> dict:
        body = {
            "token": session.token,
            "status": "finished" if session.finished else "awaiting_human",
            "state_version": session.state_version,
            "slot_count": session.scenario.n_edges,
            "active_slot": None if session.finished else session.slot,
            "finalized": [
                {
                    "slot": k,
                    "agreement": list(a) if a is not NO_DEAL else None,
                    "own_utility": _own_utility(session, k, a),
                }
                for k, a in enumerate(session.agreements)
            ],
        }
        if not session.finished:
            state = session.neg
            sub = session.scenario.subnegotiations[session.slot]
            mine = _protocol_view(state, Side.A)["standing_offer_mine"]
            standing = None
            if state.standing_offer is not None:
                standing = {
                    "levels": list(state.standing_offer),
                    "mine": mine,
                    "own_utility": eval_side(sub.center_utility, state.standing_offer),
                }
            body.update(
                {
                    "round": state.round,
                    "deadline_rounds": state.deadline_rounds,
                    "relative_time": state.relative_time,
                    "issues": [
                        {"name": issue.name, "values": list(issue.values)}
                        for issue in sub.space.issues
                    ],
                    "standing_offer": standing,
                    "can_accept": state.standing_offer is not None and not mine,
                }
            )
        return body

    def _match_record(session: LiveSession) -> dict:
        scenario = session.scenario
        agreements = tuple(session.agreements)
        spaces = tuple(sub.space for sub in scenario.subnegotiations)
        center_utility = eval_center(
            scenario.combiner,
            tuple(sub.center_utility for sub in scenario.subnegotiations),
            agreements,
            spaces,
        )
        return {
            "schema": MATCH_SCHEMA,
            "match_id": f"live-{session.token[:8]}",
            "scenario": scenario_to_dict(scenario),
            "center": {"name": "human", "params": {}},
            "edges": [{"name": b.name, "params": b.params} for b in session.bot_specs],
            "seed": session.seed,
            "deadline_rounds": session.deadline_rounds,
            "agreements": [list(a) if a is not NO_DEAL else None for a in agreements],
            "center_utility": center_utility,
            "edge_utilities": [
                0.0 if a is NO_DEAL else eval_side(sub.edge_utility, a)
                for sub, a in zip(scenario.subnegotiations, agreements)
            ],
            "faults": [
                None if t.fault is None else ("center" if t.fault is Side.A else "edge")
                for t in session.transcripts
            ],
            "nash": [
                _slot_nash(scenario, agreements, slot) for slot in range(scenario.n_edges)
            ],
            "transcripts": [transcript_record(t) for t in session.transcripts],
        }

    def _parse_action(body: dict):
        kind = body.get("kind")
        if kind == "offer":
            levels = body.get("levels")
            if not isinstance(levels, list):
                raise GatewayError(422, "rejected", "offer requires a levels array")
            return Offer(tuple(levels))
        if kind == "accept":
            return Accept()
        if kind == "end":
            return EndNegotiation()
        raise GatewayError(422, "rejected", f"unknown action kind {kind!r}")

    # -- endpoints -------------------------------------------------------------

    @app.exception_handler(GatewayError)
    async def _gateway_error(_request: Request, exc: GatewayError):
        return JSONResponse(
            status_code=exc.status_code,
            content=_envelope("error", {"code": exc.code, "reason": exc.reason}),
        )

    @app.get("/v1/templates")
    def list_templates():
        body = [
            {
                "name": s.id,
                "slots": s.n_edges,
                "briefing": s.metadata.get("briefing", ""),
                "issues": [
                    {"name": issue.name, "values": list(issue.values)}
                    for issue in s.subnegotiations[0].space.issues
                ],
            }
            for s in templates.values()
        ]
        return _envelope("templates", {"templates": body})

    @app.post("/v1/sessions", status_code=201)
    async def create_session(request: Request):
        payload = await request.json()
        name = payload.get("template")
        if name not in templates:
            raise GatewayError(404, "not_found", f"unknown template {name!r}")
        bot_names = payload.get("bots") or []
        if not bot_names:
            raise GatewayError(422, "rejected", "at least one bot edge required")
        for bot in bot_names:
            if bot not in REGISTRY:
                raise GatewayError(404, "not_found", f"unknown bot strategy {bot!r}")
        template = templates[name]
        if template.n_edges == 1 and len(bot_names) > 1:
            # Bilateral templates replicate their single slot per bot edge.
            scenario = Scenario(
                id=f"{template.id}-x{len(bot_names)}",
                subnegotiations=template.subnegotiations * len(bot_names),
                combiner=template.combiner,
                metadata=dict(template.metadata),
            )
        elif template.n_edges == len(bot_names):
            scenario = template
        else:
            raise GatewayError(
                422, "rejected", f"template has {template.n_edges} slots, got {len(bot_names)} bots"
            )
        deadline = int(payload.get("deadline_rounds", 20))
        if deadline < 1:
            raise GatewayError(422, "rejected", "deadline_rounds must be >= 1")
        seed = int(payload.get("seed", secrets.randbits(32)))
        session = LiveSession(
            token=secrets.token_urlsafe(24),
            scenario=scenario,
            bot_specs=tuple(AgentSpec(b) for b in bot_names),
            bots=tuple(make_agent(b) for b in bot_names),
            deadline_rounds=deadline,
            seed=seed,
        )
        _start_slot(session)
        with store_lock:
            sessions[session.token] = session
        return _envelope("session", _view(session))

    @app.get("/v1/sessions/{token}")
    def get_state(token: str):
        return _envelope("state", _view(_get_session(token)))

    @app.get("/v1/sessions/{token}/utility")
    def outcome_utility(token: str, levels: str):
        session = _get_session(token)
        if session.finished:
            raise GatewayError(409, "conflict", "session is finished")
        try:
            outcome: Outcome = tuple(int(x) for x in levels.split(","))
        except ValueError:
            raise GatewayError(422, "rejected", "levels must be comma-separated integers")
        sub = session.scenario.subnegotiations[session.slot]
        if not sub.space.contains(outcome):
            raise GatewayError(422, "rejected", f"outcome {list(outcome)} not in active space")
        return _envelope(
            "utility",
            {"levels": list(outcome), "utility": eval_side(sub.center_utility, outcome)},
        )

    @app.post("/v1/sessions/{token}/actions")
    async def submit_action(token: str, request: Request):
        session = _get_session(token)
        if not session.lock.acquire(blocking=False):
            raise GatewayError(409, "conflict", "another action is being processed")
        try:
            if session.finished:
                raise GatewayError(409, "conflict", "session is finished")
            if session.neg.turn is not Side.A:
                raise GatewayError(409, "conflict", "not the human's turn")
            action = _parse_action(await request.json())
            try:
                # Humans are never forfeited: illegal moves bounce with a reason.
                session.neg = step(session.neg, action)
            except IllegalActionError as exc:
                raise GatewayError(422, "rejected", str(exc))
            _drive_bots(session)
            session.state_version += 1
            return _envelope("state", _view(session))
        finally:
            session.lock.release()

    @app.get("/v1/sessions/{token}/summary")
    def get_summary(token: str):
        session = _get_session(token)
        if not session.finished:
            raise GatewayError(409, "conflict", "session is not finished")
        record = _match_record(session)
        body = {
            "center_utility": record["center_utility"],
            "per_slot": [
                {
                    "slot": k,
                    "agreement": record["agreements"][k],
                    "own_utility": _own_utility(
                        session, k,
                        tuple(record["agreements"][k]) if record["agreements"][k] else NO_DEAL,
                    ),
                    "nash_distance": record["nash"][k]["distance"],
                }
                for k in range(session.scenario.n_edges)
            ],
            "match_record": record,
        }
        return _envelope("summary", body)

    return app

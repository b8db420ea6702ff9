"""Sequential multi-deal negotiation arena.

Alternating-offers protocol engine with center/edge session orchestration,
scenario generators, baseline agents (pessimistic, contingent, optimistic,
random), round-robin tournaments with utility and Nash-distance scoring,
and a live play gateway for human-vs-bot sessions.
"""

from .analytics import BilateralPoint, nash_distance, nash_point, pareto_frontier
from .agents import (
    ConcederAgent,
    ConcessionSchedule,
    ContingentAgent,
    OptimisticAgent,
    RandomAgent,
    TreeSearchConfig,
    concession_target,
    expected_utility_tree,
    make_agent,
    softmax,
)
from .errors import (
    CapacityError,
    ContractError,
    IllegalActionError,
    MalformedUtilityError,
    MultidealError,
    ScenarioParseError,
    SchemaVersionError,
    TournamentConfigError,
)
from .outcomes import Issue, Outcome, OutcomeSpace, enumerate_outcomes
from .protocol import (
    Accept,
    EndNegotiation,
    FailureReason,
    NegotiationState,
    Offer,
    Side,
    Status,
    new_subnegotiation,
    run_subnegotiation,
    step,
)
from .scenarios import (
    Scenario,
    Subnegotiation,
    gen_job_hunt,
    gen_target_quantity,
    load_scenario,
    loads_scenario,
    pilot_templates,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .session import AgentContext, SessionResult, run_session
from .tournament import (
    AgentSpec,
    ScoreRecord,
    TournamentConfig,
    audit_match,
    replay_match,
    report,
    run_match,
    run_tournament,
    schedule_round_robin,
    score,
)
from .utilities import (
    ENUMERATION_CAP,
    NO_DEAL,
    LinearAdditive,
    MaxOfDeals,
    QuantityTable,
    TargetQuantity,
    eval_center,
    eval_side,
    optimistic_view,
    pessimistic_view,
)

__version__ = "0.1.0"

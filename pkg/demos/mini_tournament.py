"""A small round-robin tournament across both scenario families.

Every strategy takes the center seat once per scenario; the others fill
the edge slots. Scores are role means; the final is their average.

Run: python3 demos/mini_tournament.py
"""

from multideal import (
    AgentSpec,
    TournamentConfig,
    gen_job_hunt,
    gen_target_quantity,
    run_tournament,
    score,
)
from multideal.tournament import scores_to_text


def main() -> None:
    config = TournamentConfig(
        agents=(
            AgentSpec("conceder"),
            AgentSpec("contingent"),
            AgentSpec("optimistic"),
            AgentSpec("random"),
        ),
        scenarios=(
            gen_job_hunt(3, seed=1),
            gen_job_hunt(3, seed=2),
            gen_target_quantity(3, seed=3),
            gen_target_quantity(3, seed=4),
        ),
        repetitions=2,
        deadline_rounds=50,
        master_seed=7,
        jobs=4,
    )
    matches = run_tournament(config)
    print(f"ran {len(matches)} matches "
          f"({len(config.scenarios)} scenarios x {config.repetitions} reps "
          f"x {len(config.agents)} centers)\n")
    print(scores_to_text(score(matches)), end="")


if __name__ == "__main__":
    main()

"""Why looking ahead pays in sequential multi-deal sessions.

A center negotiates two deals in order under a max-of-deals utility.
Slot 1's partner concedes quickly but the best available deal is only
worth 0.5; slot 2 is worth 0.9, but its partner stonewalls until late.
A pessimistic center (values each offer as if no future deal happens)
banks the 0.5, then - already guaranteed 0.5 - settles slot 2 cheaply
before the good offer arrives. A contingent center that credits the
likely future deal accepts a throwaway slot-1 agreement and waits slot 2
out, finishing at 0.9.

Run: python3 demos/foresight.py
"""

from multideal import (
    Accept,
    ConcederAgent,
    ConcessionSchedule,
    ContingentAgent,
    Issue,
    LinearAdditive,
    MaxOfDeals,
    Offer,
    OutcomeSpace,
    Scenario,
    Subnegotiation,
    TreeSearchConfig,
    run_session,
)

DEADLINE = 10


def table(values):
    return LinearAdditive(weights=(1.0,), valuations=(tuple(values),))


def space(n):
    return OutcomeSpace((Issue("option", tuple(range(n))),))


class EarlyConceder:
    """Offers a mediocre outcome, accepts anything from round 2 on."""

    def act(self, ctx, rng):
        if ctx.round >= 2 and ctx.standing_offer is not None and not ctx.standing_offer_mine:
            return Accept()
        return Offer((1,))


class LateConceder:
    """Stonewalls with junk until round 8, then offers the good outcome."""

    def act(self, ctx, rng):
        return Offer((0,) if ctx.round >= 8 else (1,))


def scenario():
    return Scenario(
        id="foresight-demo",
        subnegotiations=(
            Subnegotiation(space(3), table([0.1, 0.2, 0.5]), table([0.5, 0.5, 0.5])),
            Subnegotiation(space(2), table([0.9, 0.1]), table([0.5, 0.5])),
        ),
        combiner=MaxOfDeals(),
    )


def show(label, result):
    deals = ["no deal" if a is None else f"option {a[0]}" for a in result.agreements]
    print(f"{label:<22} slot1: {deals[0]:<10} slot2: {deals[1]:<10} "
          f"center utility: {result.center_utility:.2f}")


def main() -> None:
    schedule = ConcessionSchedule(u_min=0.3, u_max=1.0, exponent=1.0)
    pessimistic = run_session(
        ConcederAgent(schedule), [EarlyConceder(), LateConceder()], scenario(), DEADLINE, 0
    )
    contingent = run_session(
        ContingentAgent(schedule, TreeSearchConfig(deal_prior=1.0, temperature=0.2)),
        [EarlyConceder(), LateConceder()],
        scenario(),
        DEADLINE,
        0,
    )
    show("pessimistic conceder", pessimistic)
    show("contingent (tree EV)", contingent)


if __name__ == "__main__":
    main()

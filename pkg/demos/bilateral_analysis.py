"""Analyze one bilateral negotiation space.

Loads the bundled "grocery" template, enumerates the outcome space, and
prints the Pareto frontier and the Nash bargaining point for the
center/edge utility pair.

Run: python3 demos/bilateral_analysis.py
"""

from multideal import nash_distance, nash_point, pareto_frontier, pilot_templates
from multideal.analytics import bilateral_points


def main() -> None:
    grocery = next(t for t in pilot_templates() if t.id == "grocery")
    sub = grocery.subnegotiations[0]
    print(f"template: {grocery.id}")
    print(f"issues:   {', '.join(i.name for i in sub.space.issues)}")
    print(f"outcomes: {sub.space.n_outcomes}")

    points = bilateral_points(sub.space, sub.center_utility, sub.edge_utility)
    frontier = pareto_frontier(points)
    print(f"\npareto frontier: {len(frontier)} of {len(points)} outcomes")
    for p in frontier:
        levels = sub.space.values_of(p.outcome)
        print(f"  {levels}  center={p.u_a:.3f}  edge={p.u_b:.3f}")

    nash = nash_point(sub.space, sub.center_utility, sub.edge_utility)
    print(f"\nnash point: {sub.space.values_of(nash.outcome)}")
    print(f"  utilities ({nash.u_a:.3f}, {nash.u_b:.3f}), product {nash.u_a * nash.u_b:.4f}")

    worst = min(frontier, key=lambda p: p.u_a * p.u_b)
    d = nash_distance((worst.u_a, worst.u_b), (nash.u_a, nash.u_b))
    print(f"  farthest frontier point is {d:.3f} away in utility space")


if __name__ == "__main__":
    main()

"""Compare simulated win rates of a few deviations with their exact payoffs."""

import argparse
import math

from maxgame import (
    DiscreteDistribution,
    GameConfig,
    deviation_payoff,
    empirical_deviation_payoff,
    solve,
    win_curve_vs_equilibrium,
)

CASES = [
    (2, 0.3, [(0.0, 0.7), (1.0, 0.3)]),
    (2, 0.75, [(0.0, 0.25), (1.0, 0.75)]),
    (3, 0.2, [(0.2, 1.0)]),
    (3, 0.5, [(0.0, 0.5), (1.0, 0.5)]),
    (5, 0.6, [(0.2, 0.5), (1.0, 0.5)]),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    print(f"{'n':>3} {'mu':>5} {'exact':>9} {'simulated':>10} {'z':>6}")
    for n, mu, points in CASES:
        cfg = GameConfig(n, mu)
        dev = DiscreteDistribution.from_points(points, mean=mu)
        exact = deviation_payoff(dev, win_curve_vs_equilibrium(solve(cfg)))
        sim = empirical_deviation_payoff(dev, cfg, args.trials, args.seed)
        sigma = math.sqrt(exact * (1 - exact) / args.trials)
        print(f"{n:>3} {mu:>5.2f} {exact:>9.5f} {sim:>10.5f} {(sim - exact) / sigma:>6.2f}")


if __name__ == "__main__":
    main()

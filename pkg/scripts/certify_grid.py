"""Run the best-response oracle over an (n, mu) grid and report the worst margin.

Also prints, for each grid size, how far the oracle sits above 1/n; the
margins should stay at round-off for every config.
"""

import argparse

import numpy as np

from maxgame import GameConfig, verify_equilibrium


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=12)
    parser.add_argument("--mus", type=int, default=19, help="number of mu values in (0, 1)")
    parser.add_argument("--grid", type=int, nargs="+", default=[1000, 10_000])
    parser.add_argument("--slack", type=float, default=1e-3)
    args = parser.parse_args()

    mus = np.linspace(0, 1, args.mus + 2)[1:-1]
    for m in args.grid:
        worst, failures = -np.inf, []
        for n in range(2, args.n_max + 1):
            for mu in mus:
                ok, report = verify_equilibrium(GameConfig(n, float(mu)), m, args.slack)
                worst = max(worst, report.margin)
                if not ok:
                    failures.append((n, mu, report.margin))
        print(f"m={m:6d}  configs={len(mus) * (args.n_max - 1)}  worst margin={worst:.3e}  failures={len(failures)}")
        for n, mu, margin in failures:
            print(f"    n={n} mu={mu:.3f} margin={margin:.3e}")


if __name__ == "__main__":
    main()

"""Write the a(n), s(n) sweep at mu = 1/2 (the comparative-statics figure data)."""

import argparse
import sys

from maxgame.solver import sweep, sweep_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mu", type=float, default=0.5)
    parser.add_argument("--n-min", type=int, default=2)
    parser.add_argument("--n-max", type=int, default=25)
    parser.add_argument("--out", default="figure_sweep.csv")
    args = parser.parse_args()

    rows = sweep(args.mu, args.n_min, args.n_max)
    with open(args.out, "w") as fh:
        fh.write(sweep_csv(rows))
    for r in rows:
        print(f"n={r.n:3d}  a={r.a:.6f}  s={r.s:.6f}  {r.regime}", file=sys.stderr)
    print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()

"""Random-coincidence baseline for the top-n overlap m(n).

Shuffles two rankings of M items many times and compares the mean m(n)
with n^2 / M. Output is plot-ready CSV.

    python scripts/overlap_baseline.py --items 200 --trials 1000 > baseline.csv
"""
import argparse

from lexstab.ranking import shuffle_baseline


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--items", type=int, default=200)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    base = shuffle_baseline(args.items, args.trials, args.seed)
    print("n,mean_m,stderr_m,expected_m,mean_p")
    for n, mean, se, expected in zip(base.n, base.mean_m, base.stderr_m, base.expected_m):
        print(f"{n},{mean:.4f},{se:.4f},{expected:.4f},{mean / expected:.4f}")


if __name__ == "__main__":
    main()

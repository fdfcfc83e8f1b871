"""Print the fixed-point constants over a (d, lambda) grid as CSV.

Usage:
    python scripts/constants_table.py [--d 2 3 4 5] [--lam 1.1 1.5 2 3]
"""

import argparse

from hypergiant import TheoryConstants


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--lam", type=float, nargs="+", default=[1.1, 1.5, 2.0, 3.0])
    args = ap.parse_args()

    print("d,lambda,rho2,rho_d,lambda_star,c,sigma2")
    for d in args.d:
        for lam in args.lam:
            t = TheoryConstants.from_model(d, lam)
            print(f"{d},{lam:g},{t.rho2:.17g},{t.rho_d:.17g},"
                  f"{t.lambda_star:.17g},{t.c:.17g},{t.sigma2:.17g}")


if __name__ == "__main__":
    main()

"""Run the full verification study across an N grid and write CSV + JSON
reports into an output directory.

Covers the four experiment families: CLT variance, moderate-deviation tail
rates against J(y), martingale variance at the gamma horizon, and the
largest-component vs seeded-union coupling events.  All runs are seeded;
rerunning reproduces the CSVs byte for byte.

Usage:
    python scripts/verification_study.py --out results [--scale small]

--scale small  keeps every run under a minute (default)
--scale full   reproduces the acceptance-grade replica counts
"""

import argparse
import pathlib
import warnings

from hypergiant import TheoryConstants, rate_giant
from hypergiant.montecarlo import (
    ExperimentSpec,
    clt_csv,
    coupling_check,
    coupling_csv,
    estimate_clt,
    estimate_tail,
    martingale_csv,
    martingale_mdp_check,
    tail_csv,
)

SCALES = {
    "small": dict(clt_n=10_000, clt_reps=500, tail_ns=(10_000,), tail_reps=5000,
                  mart_n=10_000, mart_reps=1000, coup_reps=2000),
    "full": dict(clt_n=100_000, clt_reps=2000, tail_ns=(10_000, 30_000, 100_000),
                 tail_reps=100_000, mart_n=100_000, mart_reps=2000, coup_reps=10_000),
}


def tail_grid(alpha: float, n_ref: int) -> tuple[float, ...]:
    """y levels bracketing J(y)*N^(2a-1) = 3 at the reference N."""
    unit = rate_giant(1.0, TheoryConstants.from_model(3, 1.5))
    y_star = (3.0 / (unit * n_ref ** (2 * alpha - 1))) ** 0.5
    return (y_star / 1.5, y_star, 1.5 * y_star)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--scale", choices=tuple(SCALES), default="small")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    cfg = SCALES[args.scale]
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def save(name: str, csv_text: str, report) -> None:
        (out / f"{name}.csv").write_text(csv_text)
        (out / f"{name}.json").write_text(report.to_json())
        print(f"wrote {out / name}.csv  (digest {report.payload_digest[:12]})")

    for d, lam in ((3, 1.5), (2, 2.0)):
        spec = ExperimentSpec(d=d, lam=lam, n=cfg["clt_n"], reps=cfg["clt_reps"],
                              mode="proxy", master_seed=args.seed,
                              threads=args.threads)
        record, report = estimate_clt(spec)
        save(f"clt_d{d}", clt_csv(record), report)

    alpha = 0.55
    grid = tail_grid(alpha, max(cfg["tail_ns"]))
    rows = []
    for n in cfg["tail_ns"]:
        spec = ExperimentSpec(d=3, lam=1.5, n=n, reps=cfg["tail_reps"],
                              mode="proxy", alpha=alpha, y_grid=grid,
                              master_seed=args.seed, threads=args.threads)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            records, report = estimate_tail(spec)
        rows.extend(records)
        (out / f"tail_n{n}.json").write_text(report.to_json())
    (out / "tail.csv").write_text(tail_csv(rows))
    print(f"wrote {out / 'tail.csv'}")

    for zeta in (-1.0, 0.0, 1.0):
        spec = ExperimentSpec(d=3, lam=1.5, n=cfg["mart_n"], reps=cfg["mart_reps"],
                              zeta=zeta, master_seed=args.seed,
                              threads=args.threads)
        record, report = martingale_mdp_check(spec)
        save(f"martingale_zeta{zeta:+g}", martingale_csv(record), report)

    spec = ExperimentSpec(d=3, lam=1.5, n=10_000, reps=cfg["coup_reps"],
                          master_seed=args.seed, threads=args.threads)
    record, report = coupling_check(spec)
    save("coupling", coupling_csv(record), report)


if __name__ == "__main__":
    main()

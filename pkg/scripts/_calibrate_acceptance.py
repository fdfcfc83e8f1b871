"""One-off calibration measurements used to pin acceptance-test tolerances.

Not part of the test suite; kept for reproducibility of the numbers cited in
tests/test_acceptance.py.
"""

import time
import warnings

import numpy as np

from hypergiant import TheoryConstants, rate_giant
from hypergiant.montecarlo import (
    ExperimentSpec,
    coupling_check,
    estimate_clt,
    estimate_tail,
    martingale_mdp_check,
)


def timed(label, fn):
    t0 = time.perf_counter()
    out = fn()
    print(f"[{time.perf_counter() - t0:7.1f}s] {label}")
    return out


def main():
    # --- criterion 6: CLT variance via proxy at N = 1e5, both configs
    for d, lam in ((3, 1.5), (2, 2.0)):
        c = TheoryConstants.from_model(d, lam)
        spec = ExperimentSpec(d=d, lam=lam, n=100_000, reps=2000, mode="proxy",
                              master_seed=606)
        rec, _ = timed(f"clt proxy d={d} lam={lam}", lambda: estimate_clt(spec))
        print(f"    var={rec.var_scaled:.4f} sigma2={c.sigma2:.4f} "
              f"ratio={rec.var_scaled / c.sigma2:.4f} mean={rec.mean_scaled:+.4f}")

    # --- criterion 6: exact-mode mean centering at N = 1e5
    spec = ExperimentSpec(d=3, lam=1.5, n=100_000, reps=2000, mode="exact",
                          master_seed=606)
    rec, _ = timed("clt exact d=3 lam=1.5", lambda: estimate_clt(spec))
    se = (rec.var_scaled / 2000) ** 0.5
    print(f"    mean={rec.mean_scaled:+.4f} se={se:.4f} mean/se={rec.mean_scaled / se:+.2f}")

    # --- criterion 7: martingale variance at N = 1e5 (reduced reps)
    base = dict(d=3, lam=1.5, n=100_000, alpha=0.6, master_seed=707)
    c = TheoryConstants.from_model(3, 1.5)
    for zeta in (-1.0, 0.0, 1.0):
        spec = ExperimentSpec(reps=1000, zeta=zeta, **base)
        rec, _ = timed(f"martingale zeta={zeta:+}", lambda: martingale_mdp_check(spec))
        print(f"    var/N={rec.var_over_n:.4f} c={rec.c_theory:.4f} "
              f"ratio={rec.var_over_n / c.c:.4f} mean={rec.mean:+.2f} "
              f"size_id={rec.size_identity_mean:.1f} rho*N={c.rho_d * 1e5:.1f}")

    # --- criterion 8: tail rates (reduced reps at two N)
    cst = TheoryConstants.from_model(3, 1.5)
    unit = rate_giant(1.0, cst)
    y_star = (3.0 / (unit * 100_000 ** 0.1)) ** 0.5
    grid = (y_star / 1.5, y_star, 1.5 * y_star)
    print(f"y* = {y_star:.4f}  grid = {tuple(round(y, 4) for y in grid)}")
    for n in (10_000, 100_000):
        spec = ExperimentSpec(d=3, lam=1.5, n=n, reps=20_000, mode="proxy",
                              alpha=0.55, y_grid=grid, master_seed=808)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            recs, _ = timed(f"tail n={n}", lambda: estimate_tail(spec))
        for r in recs:
            ratio = r.rate_hat / r.j_y if np.isfinite(r.rate_hat) else float("inf")
            print(f"    y={r.y:.3f} hits={r.hits_up + r.hits_down:6d} "
                  f"p={r.p_hat:.5f} rate={r.rate_hat:.4f} J={r.j_y:.4f} "
                  f"ratio={ratio:.3f} obs={r.observable}")

    # --- criterion 9: coupling events at N = 1e4
    spec = ExperimentSpec(d=3, lam=1.5, n=10_000, reps=5000, master_seed=909)
    rec, _ = timed("coupling n=1e4", lambda: coupling_check(spec))
    print(f"    k_n={rec.k_n} r_n={rec.r_n:.1f} freq_exceed={rec.freq_exceed:.5f} "
          f"freq_short={rec.freq_short:.5f} hits_short={rec.hits_short}")


if __name__ == "__main__":
    main()

"""Acceptance suite: ten end-to-end criteria, one test per criterion.

Each test prints one line

    ACCEPTANCE <n> <PASS|FAIL> -- <measured numbers>

before asserting, so the verdicts and the measurements survive in the run
log either way.  Criterion 9 is split into 9a and 9b: 9b asserts a bound
that is structurally unattainable at this scale (the small-component mass
collected by the seeded union is an order of magnitude above the allowed
slack; see README).  It is expected to FAIL and is kept failing on purpose
rather than weakened.

Budgets: the whole suite is about 20 minutes single-core, dominated by the
tail-rate grid (criterion 8).  Per-criterion wall-clock limits are part of
the criteria and asserted.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np

from hypergiant import (
    ExplorationConfig,
    ModelParams,
    RngStream,
    TheoryConstants,
    connected_components,
    decompose,
    explore_graph,
    explore_stream,
    rate_giant,
    sample_hypergraph,
)
from hypergiant.cli import main as cli_main
from hypergiant.montecarlo import (
    ExperimentSpec,
    coupling_check,
    estimate_clt,
    estimate_tail,
    martingale_mdp_check,
    run_giant_samples,
)
from hypergiant.theory import variance_constant_discrete

from _oracles import enumerate_union_law

SEED = 20260814  # fixed before any acceptance run; do not tune


def report(num: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'} -- {detail}")
    return ok


def test_criterion_01_fixed_point_residuals():
    t0 = time.perf_counter()
    worst = {"pair": 0.0, "duniform": 0.0, "cross": 0.0, "dual": 0.0}
    for d in (2, 3, 4, 5):
        for lam in (1.1, 1.5, 2.0, 3.0):
            t = TheoryConstants.from_model(d, lam)
            worst["pair"] = max(worst["pair"], abs(1.0 - t.rho2 - math.exp(-lam * t.rho2)))
            cover = (lam / (d - 1)) * (1.0 - (1.0 - t.rho_d) ** (d - 1))
            worst["duniform"] = max(worst["duniform"], abs(1.0 - t.rho_d - math.exp(-cover)))
            worst["cross"] = max(worst["cross"], abs((1.0 - t.rho_d) ** (d - 1) - (1.0 - t.rho2)))
            worst["dual"] = max(
                worst["dual"],
                abs(t.lambda_star * math.exp(-t.lambda_star) - lam * math.exp(-lam)),
            )
    elapsed = time.perf_counter() - t0
    ok = (worst["pair"] <= 1e-12 and worst["duniform"] <= 1e-12
          and worst["cross"] <= 1e-12 and worst["dual"] <= 1e-10
          and elapsed < 1.0)
    assert report(
        "1", ok,
        f"residuals pair={worst['pair']:.2e} d-uniform={worst['duniform']:.2e} "
        f"cross={worst['cross']:.2e} dual={worst['dual']:.2e} "
        f"(bounds 1e-12/1e-12/1e-12/1e-10), {elapsed:.2f}s < 1s",
    )


def test_criterion_02_variance_constant_convergence():
    t0 = time.perf_counter()
    details = []
    ok = True
    for d, lam in ((3, 1.5), (2, 2.0)):
        c = TheoryConstants.from_model(d, lam).c
        err4 = abs(variance_constant_discrete(ModelParams(d, lam, 10**4)) - c) / c
        err6 = abs(variance_constant_discrete(ModelParams(d, lam, 10**6)) - c) / c
        ok = ok and err6 <= 1e-2 and err6 < err4
        details.append(f"d={d}: err(1e6)={err6:.2e} <= 1e-2, err(1e4)={err4:.2e}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 30.0
    assert report("2", ok, "; ".join(details) + f", {elapsed:.1f}s < 30s")


def test_criterion_03_exactness_oracle():
    t0 = time.perf_counter()
    params = ModelParams(d=3, lam=2.5, n=5)  # p = 0.1 exactly
    law = enumerate_union_law(5, 3, params.p, 1)
    law_vec = np.array([law.get(s, 0.0) for s in range(1, 6)])
    reps = 1_000_000
    cfg = ExplorationConfig()

    tvs = {}
    hits = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        hits[r] = explore_stream(params, cfg, RngStream(SEED * 100 + 3, r)).hit_zero_time
    emp = np.bincount(hits, minlength=6)[1:6] / reps
    tvs["stream"] = 0.5 * float(np.abs(emp - law_vec).sum())

    for r in range(reps):
        h = sample_hypergraph(params, RngStream(SEED * 100 + 31, r))
        hits[r] = explore_graph(h, params, cfg).hit_zero_time
    emp = np.bincount(hits, minlength=6)[1:6] / reps
    tvs["graph"] = 0.5 * float(np.abs(emp - law_vec).sum())

    elapsed = time.perf_counter() - t0
    ok = tvs["stream"] <= 0.01 and tvs["graph"] <= 0.01 and elapsed < 300.0
    assert report(
        "3", ok,
        f"TV(stream)={tvs['stream']:.5f} TV(graph)={tvs['graph']:.5f} "
        f"(bound 0.01, 1e6 replicas each), {elapsed:.0f}s < 300s",
    )


def test_criterion_04_trace_identity_suite():
    t0 = time.perf_counter()
    lam, reps = 1.5, 100
    stats = {}
    for n in (10**3, 10**4, 10**5):
        params = ModelParams(d=3, lam=lam, n=n)
        cfg = ExplorationConfig(start_active=1, stop="run_to_horizon",
                                horizon=n, record="full_trace")
        t = np.arange(1, n + 1, dtype=np.float64)
        cover = (lam / 2.0) * (1.0 - (1.0 - t / n) ** 2)
        f_curve = n * (1.0 - t / n - np.exp(-cover))
        u_curve = n * np.exp(-cover)

        corrected = np.empty(reps)
        literal = np.empty(reps)
        for r in range(reps):
            trace = decompose(explore_stream(params, cfg, RngStream(SEED * 100 + 4, r)))
            a, eta = trace.a, trace.eta
            # exact recursions on every replica
            assert a[0] == 1
            assert np.array_equal(a[1:], a[:-1] + eta[1:].astype(np.int64) - 1)
            assert np.array_equal(trace.u, n - np.arange(n + 1) - a)
            assert np.array_equal(trace.beta[1:], trace.beta[:-1] * (1.0 - trace.alpha[1:]))
            assert np.array_equal(trace.s[1:], trace.s[:-1] + trace.delta[1:] / trace.beta[1:])
            assert np.array_equal(trace.a_tilde, trace.x + trace.beta * trace.s)

            af = a[1:].astype(np.float64)
            corrected[r] = np.max(
                np.abs(af - trace.x[1:] - trace.beta[1:] * (1.0 + trace.s[1:])) * n / t)
            literal[r] = np.max(np.abs(af - trace.a_tilde[1:]) * n / t)
        x_vs_f = float(np.max(np.abs(trace.x[1:] - f_curve)))
        beta_vs_u = n * float(np.max(np.abs(trace.beta[1:] - u_curve / n)))
        stats[n] = dict(
            corr_p99=float(np.percentile(corrected, 99)),
            corr_max=float(np.max(corrected)),
            lit_p99=float(np.percentile(literal, 99)),
            x_vs_f=x_vs_f, beta_vs_u=beta_vs_u,
        )
    elapsed = time.perf_counter() - t0

    lo, hi = stats[10**3], stats[10**5]
    ok = (
        hi["corr_p99"] <= 2.0 * lo["corr_p99"]
        and all(s["corr_max"] < 3.0 for s in stats.values())
        and hi["x_vs_f"] <= 2.0 * lo["x_vs_f"]
        and hi["beta_vs_u"] <= 2.0 * lo["beta_vs_u"]
        and all(s["beta_vs_u"] < 3.0 for s in stats.values())
        and elapsed < 300.0
    )
    assert report(
        "4", ok,
        "recursions exact on 300 replicas; seed-corrected residual p99 "
        f"{lo['corr_p99']:.4f}/{stats[10**4]['corr_p99']:.4f}/{hi['corr_p99']:.4f} "
        f"flat (<=2x, max<3); literal |A-A~| p99 {lo['lit_p99']:.3g}/"
        f"{stats[10**4]['lit_p99']:.3g}/{hi['lit_p99']:.3g} grows with N "
        "(dropped seed term; see README); "
        f"max|x-f| {lo['x_vs_f']:.3f}->{hi['x_vs_f']:.3f} (<=2x); "
        f"N*max|beta-u/N| {lo['beta_vs_u']:.3f}->{hi['beta_vs_u']:.3f} (<=2x, <3); "
        f"{elapsed:.0f}s < 300s",
    )


def test_criterion_05_law_of_large_numbers():
    t0 = time.perf_counter()
    spec = ExperimentSpec(d=3, lam=1.5, n=10**4, reps=200, mode="exact",
                          master_seed=SEED * 100 + 5)
    rho_d = TheoryConstants.from_model(3, 1.5).rho_d
    mean_frac = float(np.mean(run_giant_samples(spec))) / spec.n
    elapsed = time.perf_counter() - t0
    ok = abs(mean_frac - rho_d) <= 0.02 and elapsed < 120.0
    assert report(
        "5", ok,
        f"mean |C_max|/N = {mean_frac:.5f} vs rho_d = {rho_d:.5f} "
        f"(|diff| = {abs(mean_frac - rho_d):.5f} <= 0.02), {elapsed:.0f}s < 120s",
    )


def test_criterion_06_clt_variance():
    t0 = time.perf_counter()
    details = []
    ok = True
    for d, lam in ((3, 1.5), (2, 2.0)):
        sigma2 = TheoryConstants.from_model(d, lam).sigma2
        spec = ExperimentSpec(d=d, lam=lam, n=10**5, reps=2000, mode="proxy",
                              master_seed=SEED * 100 + 6)
        record, _ = estimate_clt(spec)
        rel = abs(record.var_scaled / sigma2 - 1.0)
        ok = ok and rel <= 0.10
        details.append(f"d={d}: var={record.var_scaled:.4f} sigma2={sigma2:.4f} "
                       f"rel={rel:.3f}")
    # mean centering needs exact mode: the proxy's swallowed small
    # components shift the scaled mean by ~5 SE at this replica count
    spec = ExperimentSpec(d=3, lam=1.5, n=10**5, reps=2000, mode="exact",
                          master_seed=SEED * 100 + 61)
    record, _ = estimate_clt(spec)
    se = math.sqrt(record.var_scaled / spec.reps)
    ok = ok and abs(record.mean_scaled) <= 3.0 * se
    details.append(f"exact mean={record.mean_scaled:+.4f} ({abs(record.mean_scaled) / se:.2f} SE)")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 900.0
    assert report("6", ok, "; ".join(details) + f" (rel<=0.10, mean<=3SE), {elapsed:.0f}s < 900s")


def test_criterion_07_martingale_variance():
    t0 = time.perf_counter()
    c = TheoryConstants.from_model(3, 1.5).c
    details = []
    ok = True
    for zeta in (-1.0, 0.0, 1.0):
        spec = ExperimentSpec(d=3, lam=1.5, n=10**5, reps=2000, alpha=0.6,
                              zeta=zeta, master_seed=SEED * 100 + 7)
        record, _ = martingale_mdp_check(spec)
        rel = abs(record.var_over_n / c - 1.0)
        se = math.sqrt(record.var_over_n * spec.n / spec.reps)
        mean_se = abs(record.mean) / se
        ok = ok and rel <= 0.10 and mean_se <= 3.0
        details.append(f"zeta={zeta:+g}: var/N={record.var_over_n:.4f} rel={rel:.3f} "
                       f"mean={record.mean:+.1f} ({mean_se:.2f} SE)")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 900.0
    assert report("7", ok,
                  f"c={c:.4f}; " + "; ".join(details)
                  + f" (rel<=0.10, mean<=3SE), {elapsed:.0f}s < 900s")


def test_criterion_08_tail_rates():
    t0 = time.perf_counter()
    constants = TheoryConstants.from_model(3, 1.5)
    alpha = 0.55
    # middle y solves J(y) * N^(2a-1) = 3 at the largest N
    y_star = math.sqrt(3.0 / (rate_giant(1.0, constants) * (10**5) ** (2 * alpha - 1)))
    grid = (y_star / 1.5, y_star, 1.5 * y_star)

    by_n = {}
    for n in (10**4, 3 * 10**4, 10**5):
        spec = ExperimentSpec(d=3, lam=1.5, n=n, reps=100_000, mode="proxy",
                              alpha=alpha, y_grid=grid,
                              master_seed=SEED * 100 + 8)
        records, _ = estimate_tail(spec)
        by_n[n] = records

    rates_big = [r.rate_hat for r in by_n[10**5]]
    ratios_big = [r.rate_hat / r.j_y for r in by_n[10**5]]
    factor2 = all(math.isfinite(x) and 0.5 <= x <= 2.0 for x in ratios_big)
    monotone = all(
        by_n[n][0].rate_hat <= by_n[n][1].rate_hat <= by_n[n][2].rate_hat
        for n in by_n
    )
    gap_small = abs(by_n[10**4][1].rate_hat - by_n[10**4][1].j_y)
    gap_big = abs(by_n[10**5][1].rate_hat - by_n[10**5][1].j_y)
    improving = gap_big <= gap_small
    elapsed = time.perf_counter() - t0
    ok = factor2 and monotone and improving and elapsed < 7200.0
    assert report(
        "8", ok,
        f"y* = {y_star:.3f}, grid rates at N=1e5 = "
        f"{', '.join(f'{x:.3f}' for x in rates_big)} vs J = "
        f"{', '.join(f'{r.j_y:.3f}' for r in by_n[10**5])} "
        f"(ratios {', '.join(f'{x:.2f}' for x in ratios_big)}, factor-2 ok={factor2}); "
        f"monotone in y at all N: {monotone}; |rate-J| at y*: "
        f"{gap_small:.3f} (N=1e4) -> {gap_big:.3f} (N=1e5), improving={improving}; "
        f"{elapsed:.0f}s < 7200s",
    )


_COUPLING = {}


def _coupling_record():
    if "rec" not in _COUPLING:
        spec = ExperimentSpec(d=3, lam=1.5, n=10**4, reps=10**4, mode="exact",
                              gamma_exp=0.35, xi_exp=0.45,
                              master_seed=SEED * 100 + 9)
        t0 = time.perf_counter()
        _COUPLING["rec"], _ = coupling_check(spec)
        _COUPLING["elapsed"] = time.perf_counter() - t0
    return _COUPLING["rec"], _COUPLING["elapsed"]


def test_criterion_09a_giant_missed_by_seeds():
    record, elapsed = _coupling_record()
    ok = record.freq_exceed <= 1e-3 and elapsed < 600.0
    assert report(
        "9a", ok,
        f"freq(|C_max| > |C_<=k|) = {record.freq_exceed:.2e} <= 1e-3 "
        f"(k_N={record.k_n}, {record.hits_exceed}/{record.reps} hits), "
        f"{elapsed:.0f}s < 600s",
    )


def test_criterion_09b_union_slack_bound():
    record, elapsed = _coupling_record()
    ok = record.freq_short <= 1e-3 and elapsed < 600.0
    assert report(
        "9b", ok,
        f"freq(|C_max| + r_N < |C_<=k|) = {record.freq_short:.4f} vs bound 1e-3 "
        f"(r_N = {record.r_n:.1f}, {record.hits_short}/{record.reps} hits). "
        "This clause is structurally unattainable at N=1e4: the union of "
        f"k_N={record.k_n} seed components swallows small components of "
        "total mean size ~29 with sd ~17, so exceeding the r_N ~ 63 slack "
        "is a ~16% event, not a <0.1% one; the bound would need r_N to "
        "dominate k_N times the mean size-biased component size. "
        "Kept failing intentionally; see README.",
    )


def test_criterion_10_determinism_across_threads():
    t0 = time.perf_counter()
    import tempfile, pathlib

    runs = {
        "clt": ["--N", "2000", "--reps", "150"],
        "tail": ["--N", "2000", "--reps", "1000", "--y", "1.0"],
        "martingale": ["--N", "2000", "--reps", "1000"],
        "coupling": ["--N", "1000", "--reps", "500"],
    }
    ok = True
    details = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        for name, extra in runs.items():
            docs = []
            for threads, tag in (("1", "a"), ("3", "b")):
                rep = tmp / f"{name}_{tag}.json"
                csv = tmp / f"{name}_{tag}.csv"
                code = cli_main([
                    "mc", name, "--d", "3", "--lambda", "1.5",
                    "--seed", str(SEED), "--threads", threads,
                    "--csv", str(csv), "--report", str(rep), *extra,
                ])
                assert code == 0
                docs.append(json.loads(rep.read_text()))
            same_payload = all(
                docs[0][k] == docs[1][k]
                for k in ("kind", "spec", "seed", "spec_hash", "records", "payload_digest")
            )
            csv_same = (tmp / f"{name}_a.csv").read_text() == (tmp / f"{name}_b.csv").read_text()
            ok = ok and same_payload and csv_same
            details.append(f"{name}: digest={docs[0]['payload_digest'][:10]} "
                           f"match={same_payload and csv_same}")
    elapsed = time.perf_counter() - t0
    assert report("10", ok, "; ".join(details) + f"; {elapsed:.0f}s")

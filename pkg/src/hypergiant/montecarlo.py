"""Seeded Monte Carlo experiments on giant-component statistics.

Four experiment families share one replication engine:

* clt        — fluctuations of the giant size on the sqrt(N) scale against
               sigma2 = c/(1-lam_star)^2;
* tail       — moderate-deviation exceedance frequencies of |size - rho_d*N|
               beyond y*N^alpha, with empirical rates compared to the
               quadratic rate J(y);
* martingale — variance of beta_g*S_g at the horizon g = floor(rho_d*N +
               zeta*N^alpha) against the constant c;
* coupling   — frequency of the events separating the largest component
               from the union of components of vertices 1..k_N.

Replica r of a run always draws from RngStream(master_seed, r), so results
are identical whatever the thread count or completion order; aggregation
uses commutative reductions over a replica-indexed array.  Reports carry a
digest over their deterministic payload; wall time and thread count live
in a separate runtime block excluded from the digest.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .components import component_of_set, connected_components
from .exploration import ExplorationConfig, _fmt, _stream_raw, deterministic_x
from .rng import RngStream
from .sampling import sample_hypergraph
from .theory import ModelParams, TheoryConstants, rate_giant

__all__ = [
    "ExperimentSpec",
    "ExperimentReport",
    "CltRecord",
    "TailRecord",
    "MartingaleRecord",
    "CouplingRecord",
    "wilson_ci",
    "resolve_threads",
    "run_giant_samples",
    "estimate_clt",
    "estimate_tail",
    "martingale_mdp_check",
    "coupling_check",
    "clt_csv",
    "tail_csv",
    "martingale_csv",
    "coupling_csv",
]

_Z95 = 1.959963984540054


def wilson_ci(hits: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= hits <= trials:
        raise ValueError("hits must lie in [0, trials]")
    phat = hits / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    # At the boundaries the interval endpoint is exactly 0 or 1; the float
    # evaluation can land one ulp inside, so pin it.
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == trials else min(1.0, center + half)
    return lo, hi


def resolve_threads(requested: int | None) -> int:
    """Thread count: explicit request, else HYPERGIANT_THREADS, else CPUs."""
    if requested is not None:
        if requested < 1:
            raise ValueError("threads must be >= 1")
        return requested
    env = os.environ.get("HYPERGIANT_THREADS")
    if env:
        val = int(env)
        if val < 1:
            raise ValueError("HYPERGIANT_THREADS must be >= 1")
        return val
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ExperimentSpec:
    """Parameters of one Monte Carlo experiment.

    alpha is the deviation exponent in (1/2, 1); gamma_exp and xi_exp set
    k_N = ceil(N^gamma) seed vertices and the coupling slack r_N = N^xi,
    constrained by 2*alpha - 1 < gamma < xi < alpha.  mode selects how the
    giant size is measured: "exact" samples the hypergraph and takes the
    largest component, "proxy" runs the streaming exploration from k_N
    seeds and takes the zero-hitting time, the size of the union of the
    components of vertices 1..k_N.  threads=None defers to the environment
    at run time; the thread count never affects results.
    """

    d: int
    lam: float
    n: int
    reps: int
    mode: str = "proxy"
    alpha: float = 0.6
    y_grid: tuple[float, ...] = ()
    zeta: float = 0.0
    gamma_exp: float = 0.35
    xi_exp: float = 0.45
    master_seed: int = 0
    threads: int | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        if self.n < 1:
            raise ValueError("N must be >= 1")
        if self.reps < 0:
            raise ValueError("reps must be >= 0")
        if self.mode not in ("exact", "proxy"):
            raise ValueError("mode must be 'exact' or 'proxy'")
        if not 0.5 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (1/2, 1)")
        if not 2.0 * self.alpha - 1.0 < self.gamma_exp:
            raise ValueError("gamma must exceed 2*alpha - 1")
        if not self.gamma_exp < self.xi_exp:
            raise ValueError("xi must exceed gamma")
        if not self.xi_exp < self.alpha:
            raise ValueError("xi must be below alpha")
        object.__setattr__(self, "y_grid", tuple(float(y) for y in self.y_grid))
        if any(y < 0.0 for y in self.y_grid):
            raise ValueError("y values must be >= 0")

    @property
    def k_n(self) -> int:
        return max(1, math.ceil(self.n ** self.gamma_exp))

    @property
    def r_n(self) -> float:
        return self.n ** self.xi_exp

    @property
    def speed(self) -> float:
        """MDP speed N^(2*alpha - 1)."""
        return self.n ** (2.0 * self.alpha - 1.0)

    def params(self) -> ModelParams:
        return ModelParams(d=self.d, lam=self.lam, n=self.n)

    def payload(self) -> dict:
        """Deterministic echo of the spec; threads intentionally absent."""
        return {
            "d": self.d,
            "lambda": self.lam,
            "N": self.n,
            "reps": self.reps,
            "mode": self.mode,
            "alpha": self.alpha,
            "y_grid": list(self.y_grid),
            "zeta": self.zeta,
            "gamma": self.gamma_exp,
            "xi": self.xi_exp,
            "master_seed": self.master_seed,
        }


# ---------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class CltRecord:
    n: int
    d: int
    lam: float
    reps: int
    mean_scaled: float
    var_scaled: float
    sigma2_theory: float


@dataclass(frozen=True)
class TailRecord:
    n: int
    d: int
    lam: float
    alpha: float
    y: float
    reps: int
    hits_up: int
    hits_down: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    rate_hat: float
    j_y: float
    rate_lo: float
    rate_hi: float
    observable: bool


@dataclass(frozen=True)
class MartingaleRecord:
    n: int
    d: int
    lam: float
    alpha: float
    zeta: float
    reps: int
    gamma_time: int
    mean: float
    var_over_n: float
    c_theory: float
    size_identity_mean: float
    rho_time: int


@dataclass(frozen=True)
class CouplingRecord:
    n: int
    d: int
    lam: float
    gamma_exp: float
    xi_exp: float
    k_n: int
    r_n: float
    reps: int
    hits_exceed: int
    hits_short: int
    freq_exceed: float
    freq_short: float


@dataclass
class ExperimentReport:
    """Sealed experiment result.

    payload_digest is a sha256 over the canonical JSON of everything except
    the runtime block, so two runs agree exactly iff their digests agree.
    """

    kind: str
    spec: dict
    seed: int
    spec_hash: str
    records: list[dict]
    payload_digest: str = ""
    runtime: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "kind": self.kind,
            "spec": self.spec,
            "seed": self.seed,
            "spec_hash": self.spec_hash,
            "records": self.records,
        }

    def to_json(self) -> str:
        doc = self.payload()
        doc["payload_digest"] = self.payload_digest
        doc["runtime"] = self.runtime
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=True)


def _seal(kind: str, spec: ExperimentSpec, records: list[dict],
          started: float, threads: int) -> ExperimentReport:
    echo = spec.payload()
    report = ExperimentReport(
        kind=kind,
        spec=echo,
        seed=spec.master_seed,
        spec_hash=hashlib.sha256(_canonical(echo).encode()).hexdigest(),
        records=records,
    )
    report.payload_digest = hashlib.sha256(_canonical(report.payload()).encode()).hexdigest()
    report.runtime = {"wall_time_s": time.perf_counter() - started, "threads": threads}
    return report


# ---------------------------------------------------------------------------
# replication engine

def _replicate(worker: Callable[[int], object], reps: int, threads: int) -> list:
    """worker(r) for r in 0..reps-1, replica-indexed regardless of threads."""
    if reps == 0:
        return []
    if threads <= 1:
        return [worker(r) for r in range(reps)]
    chunk = max(1, reps // (threads * 8))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(reps), chunksize=chunk))


def run_giant_samples(spec: ExperimentSpec) -> np.ndarray:
    """Per-replica giant-size samples under spec.mode, as int64.

    Exact mode samples the hypergraph and measures the largest component.
    Proxy mode runs the streaming exploration from k_N = ceil(N^gamma)
    seeds and returns its zero-hitting time |C_<=k_N|, which exceeds the
    giant size by the small components met on the way and misses it only
    when no seed lands in the giant.
    """
    params = spec.params()
    threads = resolve_threads(spec.threads)
    if spec.mode == "exact":
        def worker(r: int) -> int:
            h = sample_hypergraph(params, RngStream(spec.master_seed, r))
            return connected_components(h).largest
    else:
        cfg = ExplorationConfig(start_active=spec.k_n, stop="hit_zero")

        def worker(r: int) -> int:
            raw = _stream_raw(params, cfg, RngStream(spec.master_seed, r))
            return int(raw[1])
    return np.asarray(_replicate(worker, spec.reps, threads), dtype=np.int64)


# ---------------------------------------------------------------------------
# experiments

def _require_supercritical(spec: ExperimentSpec) -> TheoryConstants:
    if spec.lam <= 1.0:
        raise ValueError("experiment needs the supercritical regime lambda > 1")
    return TheoryConstants.from_model(spec.d, spec.lam)


def estimate_clt(spec: ExperimentSpec) -> tuple[CltRecord, ExperimentReport]:
    """Mean and variance of (size - rho_d*N)/sqrt(N) against sigma2."""
    if spec.reps < 100:
        raise ValueError("estimate_clt needs reps >= 100")
    constants = _require_supercritical(spec)
    started = time.perf_counter()
    threads = resolve_threads(spec.threads)
    samples = run_giant_samples(spec)
    scaled = (samples - constants.rho_d * spec.n) / math.sqrt(spec.n)
    record = CltRecord(
        n=spec.n, d=spec.d, lam=spec.lam, reps=spec.reps,
        mean_scaled=float(np.mean(scaled)),
        var_scaled=float(np.var(scaled, ddof=1)),
        sigma2_theory=constants.sigma2,
    )
    report = _seal("clt", spec, [record.__dict__.copy()], started, threads)
    return record, report


def estimate_tail(spec: ExperimentSpec) -> tuple[list[TailRecord], ExperimentReport]:
    """Exceedance frequencies of |size - rho_d*N| > y*N^alpha per y.

    Empirical rate is -log(p_hat)/N^(2*alpha-1); the Wilson interval on p
    transforms monotonically into [rate_lo, rate_hi].  Zero hits fall back
    to the rule of three (p <= 3/reps at 95%), reported as a lower rate
    bound with rate_hat infinite.  y values whose J(y)*N^(2*alpha-1) lies
    outside [1, 8] are flagged unobservable and warned about: their tails
    are either nearly certain or need infeasibly many replicas.
    """
    if spec.reps < 1000:
        raise ValueError("estimate_tail needs reps >= 1000")
    if not spec.y_grid:
        raise ValueError("estimate_tail needs a nonempty y_grid")
    constants = _require_supercritical(spec)
    started = time.perf_counter()
    threads = resolve_threads(spec.threads)
    samples = run_giant_samples(spec)
    center = constants.rho_d * spec.n
    speed = spec.speed
    records = []
    for y in spec.y_grid:
        j_y = rate_giant(y, constants)
        observable = 1.0 <= j_y * speed <= 8.0 or y == 0.0
        if not observable:
            warnings.warn(
                f"y={y:g}: J(y)*N^(2a-1)={j_y * speed:.3g} outside [1, 8]; "
                "the tail is unobservable at feasible replica counts",
                RuntimeWarning, stacklevel=2)
        margin = y * spec.n ** spec.alpha
        hits_up = int(np.count_nonzero(samples > center + margin))
        hits_down = int(np.count_nonzero(samples < center - margin))
        hits = hits_up + hits_down
        p_hat = hits / spec.reps
        ci_lo, ci_hi = wilson_ci(hits, spec.reps)
        if hits == 0:
            p_bound = 3.0 / spec.reps
            rate_hat = math.inf
            rate_lo = -math.log(p_bound) / speed
            rate_hi = math.inf
        else:
            # + 0.0 turns the -0.0 arising at p_hat == 1 into plain zero
            rate_hat = -math.log(p_hat) / speed + 0.0
            rate_lo = -math.log(ci_hi) / speed + 0.0
            rate_hi = math.inf if ci_lo == 0.0 else -math.log(ci_lo) / speed
        records.append(TailRecord(
            n=spec.n, d=spec.d, lam=spec.lam, alpha=spec.alpha, y=y,
            reps=spec.reps, hits_up=hits_up, hits_down=hits_down,
            p_hat=p_hat, ci_lo=ci_lo, ci_hi=ci_hi, rate_hat=rate_hat,
            j_y=j_y, rate_lo=rate_lo, rate_hi=rate_hi, observable=observable,
        ))
    report = _seal("tail", spec, [r.__dict__.copy() for r in records], started, threads)
    return records, report


def martingale_mdp_check(spec: ExperimentSpec) -> tuple[MartingaleRecord, ExperimentReport]:
    """Variance of beta_g*S_g at horizon g = floor(rho_d*N + zeta*N^alpha).

    The walk starts from k_N seeds and runs to the fixed horizon; the mean
    of beta_g*S_g is exactly zero and its variance grows like c*N.  When
    the horizon reaches t1 = floor(rho_d*N), each replica also evaluates
    t1 + (x_t1 + beta_t1*S_t1)/(1 - lam_star), the deterministic-plus-
    martingale reconstruction of the size of the component union; its mean
    is reported for comparison with rho_d*N (size_identity_mean is NaN
    when zeta < 0 puts the horizon before t1).
    """
    if spec.reps < 1000:
        raise ValueError("martingale_mdp_check needs reps >= 1000")
    constants = _require_supercritical(spec)
    started = time.perf_counter()
    threads = resolve_threads(spec.threads)
    params = spec.params()
    t_rho = int(constants.rho_d * spec.n)
    horizon = int(constants.rho_d * spec.n + spec.zeta * spec.n ** spec.alpha)
    if not 1 <= horizon <= spec.n:
        raise ValueError("gamma horizon falls outside [1, N]; adjust zeta")
    snap = t_rho if t_rho <= horizon else None
    cfg = ExplorationConfig(start_active=spec.k_n, stop="run_to_horizon",
                            horizon=horizon, snapshot_t=snap)

    def worker(r: int) -> tuple[float, float]:
        raw = _stream_raw(params, cfg, RngStream(spec.master_seed, r))
        return float(raw[5]) * float(raw[6]), float(raw[7])

    vals = _replicate(worker, spec.reps, threads)
    beta_s = np.array([v[0] for v in vals])
    record_size = math.nan
    if snap is not None:
        x_t1 = float(deterministic_x(params, t_rho)[-1])
        snaps = np.array([v[1] for v in vals])
        record_size = float(np.mean(t_rho + (x_t1 + snaps) / (1.0 - constants.lambda_star)))
    record = MartingaleRecord(
        n=spec.n, d=spec.d, lam=spec.lam, alpha=spec.alpha, zeta=spec.zeta,
        reps=spec.reps, gamma_time=horizon,
        mean=float(np.mean(beta_s)),
        var_over_n=float(np.var(beta_s, ddof=1)) / spec.n,
        c_theory=constants.c,
        size_identity_mean=record_size, rho_time=t_rho,
    )
    report = _seal("martingale", spec, [record.__dict__.copy()], started, threads)
    return record, report


def coupling_check(spec: ExperimentSpec) -> tuple[CouplingRecord, ExperimentReport]:
    """Frequencies separating |C_max| from |C_<=k_N| on shared samples.

    Per replica the same hypergraph yields the largest component size and
    the size of the union of components of vertices 1..k_N; the reported
    events are {|C_max| > |C_<=k_N|} (some seed set missed the giant) and
    {|C_max| + r_N < |C_<=k_N|} (small components around the seeds exceed
    the slack r_N = N^xi).  Always runs in exact mode.
    """
    if spec.reps < 1:
        raise ValueError("coupling_check needs reps >= 1")
    started = time.perf_counter()
    threads = resolve_threads(spec.threads)
    params = spec.params()
    k_n, r_n = spec.k_n, spec.r_n

    def worker(r: int) -> tuple[int, int]:
        h = sample_hypergraph(params, RngStream(spec.master_seed, r))
        return connected_components(h).largest, component_of_set(h, k_n)

    vals = _replicate(worker, spec.reps, threads)
    cmax = np.array([v[0] for v in vals], dtype=np.int64)
    cset = np.array([v[1] for v in vals], dtype=np.int64)
    hits_exceed = int(np.count_nonzero(cmax > cset))
    hits_short = int(np.count_nonzero(cmax + r_n < cset))
    record = CouplingRecord(
        n=spec.n, d=spec.d, lam=spec.lam, gamma_exp=spec.gamma_exp,
        xi_exp=spec.xi_exp, k_n=k_n, r_n=r_n, reps=spec.reps,
        hits_exceed=hits_exceed, hits_short=hits_short,
        freq_exceed=hits_exceed / spec.reps, freq_short=hits_short / spec.reps,
    )
    report = _seal("coupling", spec, [record.__dict__.copy()], started, threads)
    return record, report


# ---------------------------------------------------------------------------
# CSV serialization (17 significant digits, '.' decimal, no locale)

def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def clt_csv(records: CltRecord | list[CltRecord]) -> str:
    if isinstance(records, CltRecord):
        records = [records]
    return _csv(
        ["N", "d", "lambda", "reps", "mean_scaled", "var_scaled", "sigma2_theory"],
        [[r.n, r.d, r.lam, r.reps, r.mean_scaled, r.var_scaled, r.sigma2_theory]
         for r in records])


def tail_csv(records: list[TailRecord]) -> str:
    return _csv(
        ["N", "d", "lambda", "alpha", "y", "reps", "hits_up", "hits_down",
         "p_hat", "ci_lo", "ci_hi", "rate_hat", "J_y"],
        [[r.n, r.d, r.lam, r.alpha, r.y, r.reps, r.hits_up, r.hits_down,
          r.p_hat, r.ci_lo, r.ci_hi, r.rate_hat, r.j_y] for r in records])


def martingale_csv(records: MartingaleRecord | list[MartingaleRecord]) -> str:
    if isinstance(records, MartingaleRecord):
        records = [records]
    return _csv(
        ["N", "d", "lambda", "alpha", "zeta", "reps", "gamma_time", "mean",
         "var_over_n", "c_theory", "size_identity_mean"],
        [[r.n, r.d, r.lam, r.alpha, r.zeta, r.reps, r.gamma_time, r.mean,
          r.var_over_n, r.c_theory, r.size_identity_mean] for r in records])


def coupling_csv(records: CouplingRecord | list[CouplingRecord]) -> str:
    if isinstance(records, CouplingRecord):
        records = [records]
    return _csv(
        ["N", "d", "lambda", "gamma", "xi", "k_n", "r_n", "reps",
         "hits_exceed", "hits_short", "freq_exceed", "freq_short"],
        [[r.n, r.d, r.lam, r.gamma_exp, r.xi_exp, r.k_n, r.r_n, r.reps,
          r.hits_exceed, r.hits_short, r.freq_exceed, r.freq_short]
         for r in records])

"""Exploration walk over a random d-uniform hypergraph.

The walk explores one vertex per step.  Initially vertices 1..k are active,
the rest unseen.  Exploring an active vertex v reveals every edge containing
v and no previously explored vertex; unseen vertices covered by a revealed
edge turn active, and eta_t counts them.  The recorded walk is

    A_t = A_{t-1} + eta_t - 1,    A_0 = k,

so A first hits zero exactly when the union of the components of vertices
1..k is exhausted: the hitting time equals that union's size.  When a run
continues past the first zero (fixed horizon mode), the step finding no
active vertex restarts from the lowest indexed unseen vertex, exploring it
directly; the recursion above keeps running, which makes A the true active
count shifted down by the number of restarts so far.

Two backends produce identically distributed traces:

* the graph backend walks a realized Hypergraph, all randomness living in
  the sample;
* the streaming backend never materializes the hypergraph.  At the step
  exploring v with P non-explored vertices left besides v, the number of
  revealed edges is Binomial(C(P, d-1), p) and the edges are that many
  distinct uniform (d-1)-subsets of those P vertices.  This is the exact
  conditional law because each candidate edge is examined at exactly one
  step, the first step whose explored vertex it contains, so its presence
  is an untouched Bernoulli(p) coin; consequently duplicates only need to
  be rejected within a single step, never across steps.

The per-step drift and martingale decomposition of the walk is filled in by
decompose(): with alpha_t = p*C(n-t-1, d-2) and the exact activation
marginal pi_{t-1} = 1 - (1-p)^C(n-t-1, d-2) per unseen vertex,

    D_t     = U_{t-1} * pi_{t-1} - 1          predictable drift
    Delta_t = eta_t - U_{t-1} * pi_{t-1}      martingale increment
    beta_t  = prod_{i<=t} (1 - alpha_i)
    S_t     = sum_{i<=t} Delta_i / beta_i
    x_t     = (1-alpha_t) x_{t-1} + alpha_t (n-t+1) - 1,  x_0 = 0
    A~_t    = x_t + beta_t * S_t

together with the bookkeeping unseen count U_t = n - t - A_t, the count
C_count of steps with A-decrement -1, and X_t = A_t - C_count_t.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from ._jit import maybe_njit
from .rng import RngStream
from .sampling import Hypergraph, count_subsets, log_count_subsets
from .theory import ModelParams, _binom_float

__all__ = [
    "ExplorationConfig",
    "ExplorationTrace",
    "explore_graph",
    "explore_stream",
    "decompose",
    "deterministic_x",
    "trace_csv",
    "trace_summary",
]

_TRACE_COLUMNS = ["t", "A", "U", "eta", "D", "Delta", "alpha", "beta",
                  "S", "x", "A_tilde", "C_count", "X"]


@dataclass(frozen=True)
class ExplorationConfig:
    """How to run one exploration.

    start_active is k, the number of initially active vertices (1..k).
    stop is either "hit_zero" (stop at the first zero of the walk) or
    "run_to_horizon" with horizon <= n steps.  selection picks which active
    vertex is explored next; the law of the recorded walk does not depend
    on it.  record "summary" keeps scalars only, "full_trace" keeps the
    per-step arrays needed by decompose().  snapshot_t, when set, stores
    beta_t * S_t at that step for diagnostics.
    """

    start_active: int = 1
    stop: str = "hit_zero"
    horizon: int | None = None
    selection: str = "min_index"
    record: str = "summary"
    snapshot_t: int | None = None

    def __post_init__(self):
        if self.start_active < 1:
            raise ValueError("start_active must be >= 1")
        if self.stop not in ("hit_zero", "run_to_horizon"):
            raise ValueError("stop must be 'hit_zero' or 'run_to_horizon'")
        if self.stop == "run_to_horizon" and (self.horizon is None or self.horizon < 1):
            raise ValueError("run_to_horizon requires a positive horizon")
        if self.selection not in ("min_index", "fifo"):
            raise ValueError("selection must be 'min_index' or 'fifo'")
        if self.record not in ("summary", "full_trace"):
            raise ValueError("record must be 'summary' or 'full_trace'")


@dataclass
class ExplorationTrace:
    """Result of one exploration run.

    Summary fields are always present.  Array fields (a, eta and everything
    decompose() derives) are populated only for record="full_trace"; the
    arrays are indexed by step t = 0..steps, with index 0 holding the
    initial state and NaN in the per-step quantities that are undefined
    there.  Attribute-to-CSV-column mapping: a=A, u=U, eta=eta, drift=D,
    delta=Delta, alpha=alpha, beta=beta, s=S, x=x, a_tilde=A_tilde,
    comp_count=C_count, x_comp=X.
    """

    params: ModelParams
    config: ExplorationConfig
    backend: str
    steps: int
    hit_zero_time: int | None
    max_active: int
    argmax_active: int
    restarts: int
    beta_final: float
    final_s: float
    beta_s_snapshot: float = math.nan
    a: np.ndarray | None = None
    eta: np.ndarray | None = None
    u: np.ndarray | None = None
    drift: np.ndarray | None = None
    delta: np.ndarray | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    s: np.ndarray | None = None
    x: np.ndarray | None = None
    a_tilde: np.ndarray | None = None
    comp_count: np.ndarray | None = None
    x_comp: np.ndarray | None = None
    eps: np.ndarray | None = None

    @property
    def is_full(self) -> bool:
        return self.a is not None

    @property
    def is_decomposed(self) -> bool:
        return self.s is not None


# ---------------------------------------------------------------------------
# streaming backend kernel

@maybe_njit
def _heap_push(heap, size, val):
    i = size
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] > val:
            heap[i] = heap[parent]
            i = parent
        else:
            break
    heap[i] = val
    return size + 1


@maybe_njit
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    last = heap[size]
    i = 0
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        right = child + 1
        if right < size and heap[right] < heap[child]:
            child = right
        if heap[child] < last:
            heap[i] = heap[child]
            i = child
        else:
            break
    heap[i] = last
    return top, size


@maybe_njit
def _choose_f(nf, kk, fact):
    # float C(nf, kk) with the same operation order as theory._binom_float,
    # so streaming bookkeeping and decompose() agree bit for bit
    if kk == 0:
        return 1.0 if nf >= 0.0 else 0.0
    if nf < kk:
        return 0.0
    out = 1.0
    for i in range(kk):
        out *= nf - i
    return out / fact


@maybe_njit
def _stream_kernel(gen, n, d, k, p, log1mp, horizon, stop_at_zero, use_fifo,
                   record, snap_t, max_m, fact_dm1, fact_dm2, a_arr, eta_arr):
    status = np.zeros(n + 1, dtype=np.uint8)   # 0 unseen, 1 active, 2 explored
    pool = np.empty(n, dtype=np.int64)
    pos = np.empty(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        pool[v - 1] = v
        pos[v] = v - 1
    heap = np.empty(n + 1, dtype=np.int64)
    fifo = np.empty(n + 1, dtype=np.int64)
    heap_size = 0
    f_head = 0
    f_tail = 0
    for v in range(1, k + 1):
        status[v] = 1
        if use_fifo:
            fifo[f_tail] = v
            f_tail += 1
        else:
            heap[heap_size] = v      # ascending run is already a valid heap
            heap_size += 1
    active = k
    cursor = k + 1
    pool_size = n

    km1 = d - 1
    ranks = np.empty(km1, dtype=np.int64)
    step_edges = np.empty((max_m, km1), dtype=np.int64)
    ratio = p / (1.0 - p)

    a_mod = k
    restarts = 0
    hit0 = -1
    max_a = k
    argmax_a = 0
    beta = 1.0
    s_run = 0.0
    beta_s_snap = np.nan
    steps = 0
    if record:
        a_arr[0] = k

    for t in range(1, horizon + 1):
        steps = t
        if active > 0:
            if use_fifo:
                v = fifo[f_head]
                f_head += 1
            else:
                v, heap_size = _heap_pop(heap, heap_size)
            active -= 1
        else:
            while status[cursor] != 0:
                cursor += 1
            v = cursor
            restarts += 1
        status[v] = 2
        slot = pos[v]
        pool_size -= 1
        w = pool[pool_size]
        pool[slot] = w
        pos[w] = slot
        cand = pool_size                      # n - t

        # revealed edge count ~ Binomial(C(cand, d-1), p), inversion from 0
        nu_e = _choose_f(float(cand), km1, fact_dm1)
        u01 = gen.random()
        pmf = math.exp(nu_e * log1mp)
        cum = pmf
        m = 0
        while u01 > cum and m < max_m - 1 and pmf > 0.0:
            pmf *= (nu_e - m) / (m + 1.0) * ratio
            m += 1
            cum += pmf

        eta = 0
        for j_edge in range(m):
            ok = False
            while not ok:
                # Floyd sample of km1 distinct ranks in [0, cand)
                cnt = 0
                for jj in range(cand - km1, cand):
                    r = int(gen.integers(0, jj + 1))
                    dup = False
                    for q in range(cnt):
                        if ranks[q] == r:
                            dup = True
                            break
                    if dup:
                        r = jj
                    ranks[cnt] = r
                    cnt += 1
                for a_i in range(1, km1):
                    key = ranks[a_i]
                    b_i = a_i - 1
                    while b_i >= 0 and ranks[b_i] > key:
                        ranks[b_i + 1] = ranks[b_i]
                        b_i -= 1
                    ranks[b_i + 1] = key
                # reject duplicates of subsets already revealed this step
                ok = True
                for prev in range(j_edge):
                    same = True
                    for q in range(km1):
                        if step_edges[prev, q] != ranks[q]:
                            same = False
                            break
                    if same:
                        ok = False
                        break
            for q in range(km1):
                step_edges[j_edge, q] = ranks[q]
                uv = pool[ranks[q]]
                if status[uv] == 0:
                    status[uv] = 1
                    active += 1
                    eta += 1
                    if use_fifo:
                        fifo[f_tail] = uv
                        f_tail += 1
                    else:
                        heap_size = _heap_push(heap, heap_size, uv)

        # recorded-walk bookkeeping
        u_prev = n - (t - 1) - a_mod
        nu2 = _choose_f(float(cand - 1), d - 2, fact_dm2)
        alpha_t = p * nu2
        pi_prev = -math.expm1(nu2 * log1mp)
        delta = eta - u_prev * pi_prev
        beta *= 1.0 - alpha_t
        s_run += delta / beta
        a_mod += eta - 1
        if record:
            a_arr[t] = a_mod
            eta_arr[t] = eta
        if a_mod > max_a:
            max_a = a_mod
            argmax_a = t
        if t == snap_t:
            beta_s_snap = beta * s_run
        if hit0 < 0 and a_mod == 0:
            hit0 = t
            if stop_at_zero:
                break
    return steps, hit0, max_a, argmax_a, restarts, beta, s_run, beta_s_snap


def _stream_raw(params: ModelParams, cfg: ExplorationConfig, stream: RngStream,
                a_arr=None, eta_arr=None):
    """Run the streaming kernel, returning its raw tuple."""
    n, d, p = params.n, params.d, params.p
    k = cfg.start_active
    if k > n:
        raise ValueError("start_active cannot exceed n")
    if log_count_subsets(n - 1, d - 1) > 690.0:
        raise ValueError("C(n-1, d-1) overflows floats; streaming backend "
                         "does not support this d at this n")
    horizon = _resolve_horizon(cfg, n)
    record = a_arr is not None
    if not record:
        a_arr = np.empty(1, dtype=np.int64)
        eta_arr = np.empty(1, dtype=np.int64)
    mean0 = p * float(count_subsets(n - 1, d - 1))
    max_m = int(mean0 + 40.0 * math.sqrt(mean0 + 1.0) + 64.0)
    snap = -1 if cfg.snapshot_t is None else int(cfg.snapshot_t)
    gen = stream.generator()
    return _stream_kernel(
        gen, n, d, k, p, math.log1p(-p), horizon,
        cfg.stop == "hit_zero", cfg.selection == "fifo", record, snap,
        max_m, float(math.factorial(d - 1)), float(math.factorial(d - 2)),
        a_arr, eta_arr,
    )


def _resolve_horizon(cfg: ExplorationConfig, n: int) -> int:
    if cfg.stop == "hit_zero":
        return n
    if cfg.horizon > n:
        raise ValueError("horizon cannot exceed n")
    return cfg.horizon


def explore_stream(params: ModelParams, cfg: ExplorationConfig,
                   stream: RngStream) -> ExplorationTrace:
    """Run the streaming backend and wrap the result in a trace."""
    horizon = _resolve_horizon(cfg, params.n)
    full = cfg.record == "full_trace"
    a_arr = np.zeros(horizon + 1, dtype=np.int64) if full else None
    eta_arr = np.zeros(horizon + 1, dtype=np.int64) if full else None
    out = _stream_raw(params, cfg, stream, a_arr, eta_arr)
    return _build_trace(params, cfg, "stream", out, a_arr, eta_arr)


def _build_trace(params, cfg, backend, raw, a_arr, eta_arr) -> ExplorationTrace:
    steps, hit0, max_a, argmax_a, restarts, beta, s_run, beta_s_snap = raw
    steps = int(steps)
    trace = ExplorationTrace(
        params=params, config=cfg, backend=backend, steps=steps,
        hit_zero_time=None if hit0 < 0 else int(hit0),
        max_active=int(max_a), argmax_active=int(argmax_a),
        restarts=int(restarts), beta_final=float(beta), final_s=float(s_run),
        beta_s_snapshot=float(beta_s_snap),
    )
    if a_arr is not None:
        trace.a = a_arr[:steps + 1]
        eta = eta_arr[:steps + 1].astype(np.float64)
        eta[0] = math.nan
        trace.eta = eta
    return trace


# ---------------------------------------------------------------------------
# graph backend

def explore_graph(h: Hypergraph, params: ModelParams,
                  cfg: ExplorationConfig) -> ExplorationTrace:
    """Walk a realized hypergraph; deterministic given (h, cfg).

    params must describe the model h was drawn from (same n and d); it
    supplies the edge probability used in the per-step drift bookkeeping.
    """
    if params.n != h.n or params.d != h.d:
        raise ValueError("params do not match the hypergraph dimensions")
    n, d, p = h.n, h.d, params.p
    k = cfg.start_active
    if k > n:
        raise ValueError("start_active cannot exceed n")
    horizon = _resolve_horizon(cfg, n)
    full = cfg.record == "full_trace"
    stop_at_zero = cfg.stop == "hit_zero"
    use_fifo = cfg.selection == "fifo"
    snap = -1 if cfg.snapshot_t is None else int(cfg.snapshot_t)

    offsets, edge_ids = h.incidence()
    edges = h.edges
    log1mp = math.log1p(-p)
    fact_dm2 = float(math.factorial(d - 2))

    status = np.zeros(n + 1, dtype=np.uint8)
    status[1:k + 1] = 1
    if use_fifo:
        queue = deque(range(1, k + 1))
        pop_next = queue.popleft
        push = queue.append
    else:
        queue = list(range(1, k + 1))
        pop_next = lambda: heapq.heappop(queue)
        push = lambda vv: heapq.heappush(queue, vv)
    cursor = k + 1

    a_arr = np.zeros(horizon + 1, dtype=np.int64) if full else None
    eta_arr = np.zeros(horizon + 1, dtype=np.int64) if full else None
    if full:
        a_arr[0] = k

    a_mod = k
    restarts = 0
    hit0 = -1
    max_a = k
    argmax_a = 0
    beta = 1.0
    s_run = 0.0
    beta_s_snap = math.nan
    steps = 0

    for t in range(1, horizon + 1):
        steps = t
        if queue:
            v = pop_next()
        else:
            while status[cursor] != 0:
                cursor += 1
            v = cursor
            restarts += 1
        status[v] = 2
        eta = 0
        for e in edge_ids[offsets[v]:offsets[v + 1]]:
            for uv in edges[e]:
                if status[uv] == 0:
                    status[uv] = 1
                    eta += 1
                    push(int(uv))
        u_prev = n - (t - 1) - a_mod
        nu2 = _choose_f(float(n - t - 1), d - 2, fact_dm2)
        alpha_t = p * nu2
        pi_prev = -math.expm1(nu2 * log1mp)
        beta *= 1.0 - alpha_t
        s_run += (eta - u_prev * pi_prev) / beta
        a_mod += eta - 1
        if full:
            a_arr[t] = a_mod
            eta_arr[t] = eta
        if a_mod > max_a:
            max_a = a_mod
            argmax_a = t
        if t == snap:
            beta_s_snap = beta * s_run
        if hit0 < 0 and a_mod == 0:
            hit0 = t
            if stop_at_zero:
                break
    raw = (steps, hit0, max_a, argmax_a, restarts, beta, s_run, beta_s_snap)
    return _build_trace(params, cfg, "graph", raw, a_arr, eta_arr)


# ---------------------------------------------------------------------------
# martingale decomposition of a recorded trace

@maybe_njit
def _x_recursion(alpha, n):
    # x_t = (1 - alpha_t) x_{t-1} + alpha_t (n - t + 1) - 1, x_0 = 0,
    # evaluated exactly as recursed
    T = alpha.shape[0] - 1
    x = np.zeros(T + 1, dtype=np.float64)
    for t in range(1, T + 1):
        x[t] = (1.0 - alpha[t]) * x[t - 1] + alpha[t] * (n - t + 1) - 1.0
    return x


def deterministic_x(params: ModelParams, upto: int) -> np.ndarray:
    """The deterministic recursion x_t alone, t = 0..upto."""
    t = np.arange(upto + 1, dtype=np.float64)
    alpha = np.empty(upto + 1, dtype=np.float64)
    alpha[0] = np.nan
    alpha[1:] = params.p * _binom_float(params.n - t[1:] - 1.0, params.d - 2)
    return _x_recursion(alpha, params.n)


def decompose(trace: ExplorationTrace,
              params: ModelParams | None = None) -> ExplorationTrace:
    """Fill the drift/martingale arrays of a full trace, in place.

    Requires record="full_trace".  params defaults to the model the trace
    was produced under.  All columns follow the recursions in the module
    docstring, evaluated with plain float64 arithmetic so the exact
    per-step identities can be asserted on the result; beta in particular
    is the running product of (1 - alpha_t), satisfying its one-step
    recursion bitwise.
    """
    if not trace.is_full:
        raise ValueError("decompose needs a full trace (record='full_trace')")
    if params is None:
        params = trace.params
    elif (params.n, params.d) != (trace.params.n, trace.params.d):
        raise ValueError("params do not match the trace dimensions")
    n, d, p = params.n, params.d, params.p
    T = trace.steps
    a = trace.a
    eta = trace.eta

    t = np.arange(T + 1, dtype=np.float64)
    u = (n - np.arange(T + 1, dtype=np.int64)) - a

    nu2 = _binom_float(n - t - 1.0, d - 2)
    alpha = np.empty(T + 1, dtype=np.float64)
    alpha[0] = np.nan
    alpha[1:] = p * nu2[1:]
    pi_prev = -np.expm1(nu2 * math.log1p(-p))

    drift = np.empty(T + 1, dtype=np.float64)
    delta = np.empty(T + 1, dtype=np.float64)
    eps = np.empty(T + 1, dtype=np.float64)
    drift[0] = delta[0] = eps[0] = np.nan
    u_prev = u[:-1].astype(np.float64)
    drift[1:] = u_prev * pi_prev[1:] - 1.0
    delta[1:] = eta[1:] - u_prev * pi_prev[1:]
    eps[1:] = u_prev * (pi_prev[1:] - alpha[1:])

    one_minus = np.ones(T + 1, dtype=np.float64)
    one_minus[1:] = 1.0 - alpha[1:]
    beta = np.cumprod(one_minus)

    terms = np.zeros(T + 1, dtype=np.float64)
    terms[1:] = delta[1:] / beta[1:]
    s = np.cumsum(terms)

    x = _x_recursion(alpha, n)
    a_tilde = x + beta * s

    decrement = np.zeros(T + 1, dtype=np.int64)
    decrement[1:] = (np.diff(a) == -1).astype(np.int64)
    comp_count = np.cumsum(decrement)
    x_comp = a - comp_count

    trace.u = u
    trace.drift = drift
    trace.delta = delta
    trace.eps = eps
    trace.alpha = alpha
    trace.beta = beta
    trace.s = s
    trace.x = x
    trace.a_tilde = a_tilde
    trace.comp_count = comp_count
    trace.x_comp = x_comp
    return trace


# ---------------------------------------------------------------------------
# serialization

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def trace_csv(trace: ExplorationTrace) -> str:
    """Per-step CSV with the documented column set.

    Floats carry 17 significant digits with '.' as the decimal separator;
    quantities undefined at t = 0 are written as nan.
    """
    if not trace.is_decomposed:
        trace = decompose(trace)
    cols = [
        np.arange(trace.steps + 1), trace.a, trace.u, trace.eta, trace.drift,
        trace.delta, trace.alpha, trace.beta, trace.s, trace.x,
        trace.a_tilde, trace.comp_count, trace.x_comp,
    ]
    lines = [",".join(_TRACE_COLUMNS)]
    for i in range(trace.steps + 1):
        lines.append(",".join(_fmt(col[i]) for col in cols))
    return "\n".join(lines) + "\n"


def trace_summary(trace: ExplorationTrace) -> dict:
    """Summary dictionary with the documented key set."""
    return {
        "hit_zero_time": trace.hit_zero_time,
        "max_A": trace.max_active,
        "argmax_A": trace.argmax_active,
        "final_S": trace.final_s,
    }

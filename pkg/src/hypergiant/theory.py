"""Limit theory for the giant component of a random d-uniform hypergraph.

The model includes every d-subset of N labelled vertices as an edge
independently with probability p = lam * (d-2)! / N**(d-1).  For lam > 1 a
unique linear-size component emerges, covering an asymptotic fraction rho_d
of the vertices, where rho_d is the positive root of

    1 - rho = exp(-(lam / (d-1)) * (1 - (1-rho)**(d-1))).

This module solves that fixed point and derives the companion constants the
simulation modules compare against:

* rho_2, the same fixed point in the pair model (d=2), linked to rho_d by
  (1 - rho_d)**(d-1) = 1 - rho_2;
* the dual branching rate lam_star = lam * (1 - rho_d)**(d-1), which
  satisfies lam_star * exp(-lam_star) = lam * exp(-lam);
* the variance constant
  c = lam*(1-rho_d)**2 - lam_star*(1-rho_d) + rho_d*(1-rho_d)
  and the CLT variance c / (1 - lam_star)**2;
* quadratic rate functions for moderate deviations of the exploration
  martingale (x -> x**2 / (2c)) and of the giant component size
  (y -> y**2 * (1-lam_star)**2 / (2c));
* the deterministic drift curves of the exploration walk and a discrete
  variance sum that converges to c, used as a finite-size cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "TheoryConstants",
    "RegimeReport",
    "edge_probability",
    "pair_giant_fraction",
    "giant_fraction",
    "dual_branching_rate",
    "variance_constant",
    "clt_variance",
    "rate_gaussian",
    "rate_giant",
    "active_density",
    "expected_active",
    "expected_unseen",
    "step_variance_asymptotic",
    "variance_constant_discrete",
    "validate_regime",
]


def edge_probability(d: int, lam: float, n: int) -> float:
    """Edge probability p = lam * (d-2)! / n**(d-1).

    Uses exact integer arithmetic for the factorial and the power when d is
    small and falls back to log-gamma for d > 20 where the intermediate
    values no longer fit comfortably in floats.

    Raises ValueError if the parameters are out of range or p would
    exceed 1.
    """
    _check_model_args(d, lam, n)
    if lam == 0.0:
        return 0.0
    if d <= 20:
        p = lam * math.factorial(d - 2) / n ** (d - 1)
    else:
        log_p = math.log(lam) + math.lgamma(d - 1) - (d - 1) * math.log(n)
        p = math.exp(log_p)
    if p > 1.0:
        raise ValueError(f"edge probability {p} exceeds 1 for d={d}, lam={lam}, n={n}")
    return p


def _check_model_args(d: int, lam: float, n: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError("d must be an integer >= 2")
    if not isinstance(n, (int, np.integer)) or n < d:
        raise ValueError("n must be an integer >= d")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise ValueError("lam must be a finite float >= 0")


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the random hypergraph model.

    d is the edge size, lam the mean-degree style parameter, n the number of
    vertices.  The edge probability p is derived, never set directly.
    """

    d: int
    lam: float
    n: int
    p: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p", edge_probability(self.d, self.lam, self.n))

    @property
    def epsilon(self) -> float:
        """Distance lam - 1 from the critical point."""
        return self.lam - 1.0


def _bisect_then_newton(fun, dfun, lo: float, hi: float) -> float:
    """Root of fun on (lo, hi) with fun(lo) > 0 > fun(hi).

    Bracketed bisection down to an interval of width 1e-6 followed by Newton
    polish until the residual drops below 1e-14.  Newton steps that leave the
    bracket are replaced by bisection steps, so the iteration cannot escape.
    """
    flo, fhi = fun(lo), fun(hi)
    if not (flo > 0.0 and fhi < 0.0):
        raise ValueError("root is not bracketed")
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if fun(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(100):
        fx = fun(x)
        if abs(fx) <= 1e-14:
            break
        if fx > 0.0:
            lo = x
        else:
            hi = x
        dfx = dfun(x)
        step_ok = dfx != 0.0
        if step_ok:
            x_new = x - fx / dfx
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
    return x


def pair_giant_fraction(lam: float) -> float:
    """Positive solution rho of 1 - rho = exp(-lam * rho), for lam > 1.

    This is the classical survival probability of the pair (d=2) model; it
    is identically zero at and below the critical point lam = 1.  The
    residual is evaluated through expm1 so that the root is resolved even
    when lam is barely above 1 and rho is of order 2*(lam - 1).
    """
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise ValueError("lam must be a finite float >= 0")
    if lam <= 1.0:
        return 0.0

    def fun(r):
        return -math.expm1(-lam * r) - r

    def dfun(r):
        return lam * math.exp(-lam * r) - 1.0

    return _bisect_then_newton(fun, dfun, 1e-300, 1.0)


def _coverage_exponent(x: float, d: int, lam: float) -> float:
    """(lam / (d-1)) * (1 - (1-x)**(d-1)), computed without cancellation."""
    if x >= 1.0:
        inner = 1.0
    else:
        inner = -math.expm1((d - 1) * math.log1p(-x))
    return (lam / (d - 1)) * inner


def giant_fraction(d: int, lam: float) -> float:
    """Asymptotic fraction rho_d of vertices in the giant component.

    Positive root of 1 - rho = exp(-(lam/(d-1)) * (1 - (1-rho)**(d-1))),
    zero at and below the critical point lam = 1.  For d = 2 this coincides
    with pair_giant_fraction.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError("d must be an integer >= 2")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise ValueError("lam must be a finite float >= 0")
    if lam <= 1.0:
        return 0.0

    def fun(r):
        return -math.expm1(-_coverage_exponent(r, d, lam)) - r

    def dfun(r):
        phi = _coverage_exponent(r, d, lam)
        return lam * (1.0 - r) ** (d - 2) * math.exp(-phi) - 1.0

    return _bisect_then_newton(fun, dfun, 1e-300, 1.0)


def dual_branching_rate(d: int, lam: float) -> float:
    """Dual rate lam_star = lam * (1 - rho_d)**(d-1).

    The subcritical hypergraph with this parameter describes the complement
    of the giant component; lam_star * exp(-lam_star) = lam * exp(-lam).
    """
    rho_d = giant_fraction(d, lam)
    return lam * (1.0 - rho_d) ** (d - 1)


def variance_constant(d: int, lam: float) -> float:
    """Variance constant c of the exploration martingale at the giant scale.

    c = lam*(1-rho_d)**2 - lam_star*(1-rho_d) + rho_d*(1-rho_d).
    """
    rho_d = giant_fraction(d, lam)
    lam_star = lam * (1.0 - rho_d) ** (d - 1)
    q = 1.0 - rho_d
    return lam * q * q - lam_star * q + rho_d * q


def clt_variance(d: int, lam: float) -> float:
    """Limiting variance c / (1 - lam_star)**2 of (|C_max| - rho_d*N)/sqrt(N)."""
    rho_d = giant_fraction(d, lam)
    lam_star = lam * (1.0 - rho_d) ** (d - 1)
    q = 1.0 - rho_d
    c = lam * q * q - lam_star * q + rho_d * q
    return c / (1.0 - lam_star) ** 2


@dataclass(frozen=True)
class TheoryConstants:
    """Bundle of the limit constants for one (d, lam) pair."""

    d: int
    lam: float
    rho2: float
    rho_d: float
    lambda_star: float
    c: float
    sigma2: float

    @classmethod
    def from_model(cls, d: int, lam: float) -> "TheoryConstants":
        rho2 = pair_giant_fraction(lam)
        rho_d = giant_fraction(d, lam)
        lam_star = lam * (1.0 - rho_d) ** (d - 1)
        q = 1.0 - rho_d
        c = lam * q * q - lam_star * q + rho_d * q
        sigma2 = c / (1.0 - lam_star) ** 2
        return cls(d=d, lam=lam, rho2=rho2, rho_d=rho_d,
                   lambda_star=lam_star, c=c, sigma2=sigma2)

    def to_dict(self) -> dict:
        """Serialization with the documented key set."""
        return {
            "d": self.d,
            "lambda": self.lam,
            "rho2": self.rho2,
            "rho_d": self.rho_d,
            "lambda_star": self.lambda_star,
            "c": self.c,
            "sigma2": self.sigma2,
        }


def rate_gaussian(x: float, c: float) -> float:
    """Quadratic rate x**2 / (2c) governing martingale moderate deviations."""
    if not (c > 0.0):
        raise ValueError("variance constant c must be positive")
    return x * x / (2.0 * c)


def rate_giant(y: float, constants: TheoryConstants) -> float:
    """Rate y**2 * (1-lam_star)**2 / (2c) for giant-size moderate deviations.

    Defined as rate_gaussian evaluated at y*(1-lam_star), so the two rates
    agree exactly, not just up to rounding.
    """
    return rate_gaussian(y * (1.0 - constants.lambda_star), constants.c)


def active_density(x: float, d: int, lam: float) -> float:
    """Scaled drift curve 1 - x - exp(-(lam/(d-1))*(1 - (1-x)**(d-1))).

    Defined on [0, 1].  Vanishes at 0 and at the giant fraction rho_d, is
    positive in between for lam > 1.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    return -math.expm1(-_coverage_exponent(x, d, lam)) - x


def expected_active(t: float, params: ModelParams) -> float:
    """Deterministic active-count trajectory n * active_density(t/n, ...)."""
    if not 0.0 <= t <= params.n:
        raise ValueError("t must lie in [0, n]")
    return params.n * active_density(t / params.n, params.d, params.lam)


def expected_unseen(t: float, params: ModelParams) -> float:
    """Deterministic unseen-count trajectory.

    u(t) = n * exp(-(lam/(d-1)) * (1 - (1-t/n)**(d-1))).  Satisfies
    u(t) = n - t - expected_active(t) up to rounding.
    """
    if not 0.0 <= t <= params.n:
        raise ValueError("t must lie in [0, n]")
    return params.n * math.exp(-_coverage_exponent(t / params.n, params.d, params.lam))


def step_variance_asymptotic(t: float, unseen: float, params: ModelParams) -> float:
    """Leading-order conditional variance of one exploration increment.

    lam*(d-2)*(1-t/n)**(d-3) * unseen**2/n**2 + lam*(1-t/n)**(d-2) * unseen/n.
    For d = 2 the first term is identically zero and is short-circuited
    before the negative power could be formed.
    """
    d, lam, n = params.d, params.lam, params.n
    if not 0.0 <= t <= n:
        raise ValueError("t must lie in [0, n]")
    s = 1.0 - t / n
    pair_term = lam * s ** (d - 2) * unseen / n
    if d == 2:
        return pair_term
    return lam * (d - 2) * s ** (d - 3) * (unseen / n) ** 2 + pair_term


def _binom_float(n_arr: np.ndarray, k: int) -> np.ndarray:
    """Binomial coefficients C(n, k) as floats for integer arrays n >= 0.

    Convention C(n, k) = 0 for n < k.  Direct falling-factorial product for
    k <= 20, log-gamma otherwise.
    """
    n_arr = np.asarray(n_arr, dtype=np.float64)
    if k < 0:
        return np.zeros_like(n_arr)
    if k <= 20:
        out = np.ones_like(n_arr)
        for i in range(k):
            out *= n_arr - i
        out /= math.factorial(k)
        return np.where(n_arr >= k, out, 0.0)
    lgamma = np.vectorize(math.lgamma)
    valid = n_arr >= k
    safe = np.where(valid, n_arr, k)
    out = np.exp(lgamma(safe + 1.0) - math.lgamma(k + 1.0) - lgamma(safe - k + 1.0))
    return np.where(valid, out, 0.0)


def variance_constant_discrete(params: ModelParams) -> float:
    """Finite-n Riemann sum for the variance constant c.

    (1/n) * sum_{i=0}^{T-1} (beta_T / beta_{i+1})**2 * v_i with T the floored
    giant size, beta_t the product of (1 - alpha_j) over steps j <= t for
    alpha_j = p * C(n-j-1, d-2), and v_i the asymptotic step variance
    evaluated along the deterministic unseen trajectory.  Beta ratios are
    accumulated in log space.  Converges to variance_constant as n grows.
    """
    d, lam, n, p = params.d, params.lam, params.n, params.p
    rho_d = giant_fraction(d, lam)
    big_t = int(rho_d * n)
    if big_t < 1:
        raise ValueError("horizon floor(rho_d * n) must be at least 1")

    j = np.arange(1, big_t + 1, dtype=np.float64)
    alpha = p * _binom_float(n - j - 1.0, d - 2)
    log_beta = np.cumsum(np.log1p(-alpha))  # log_beta[t-1] = log beta_t

    i = np.arange(big_t, dtype=np.float64)
    s = 1.0 - i / n
    w = np.exp(-(lam / (d - 1)) * (1.0 - s ** (d - 1)))  # u_i / n
    if d == 2:
        v = lam * w
    else:
        v = lam * (d - 2) * s ** (d - 3) * w * w + lam * s ** (d - 2) * w
    ratio_sq = np.exp(2.0 * (log_beta[big_t - 1] - log_beta))
    return float(np.sum(ratio_sq * v) / n)


@dataclass(frozen=True)
class RegimeReport:
    """Diagnostic for whether the moderate-deviation asymptotics are usable."""

    epsilon: float
    alpha: float
    iota: float
    tau: float
    statistic: float
    threshold: float
    reliable: bool


def validate_regime(params: ModelParams, alpha: float, iota: float = 0.05) -> RegimeReport:
    """Check the strength of the supercriticality at scale exponent alpha.

    tau = min(1/2, 2 - 2*alpha - iota) and the statistic is
    (lam-1)**3 * n**tau.  Values below 10 flag the run as one where the
    asymptotic formulas should not be trusted; the check never raises for
    weak parameters, only for an alpha outside (1/2, 1).
    """
    if not 0.5 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 1/2 and 1")
    if not 0.0 <= iota < 1.0:
        raise ValueError("iota must lie in [0, 1)")
    eps = params.epsilon
    tau = min(0.5, 2.0 - 2.0 * alpha - iota)
    stat = eps ** 3 * params.n ** tau
    threshold = 10.0
    return RegimeReport(
        epsilon=eps,
        alpha=alpha,
        iota=iota,
        tau=tau,
        statistic=stat,
        threshold=threshold,
        reliable=bool(stat >= threshold),
    )

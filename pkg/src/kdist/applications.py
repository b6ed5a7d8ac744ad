"""Statistical procedures built on the K-prime and K-square CDFs.

Predictive probabilities for a future t or F statistic under a conjugate
normal prior, the replication probability ``p_rep``, and exact inference for
simple and multiple correlation coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .kprime import KPrimeParams, kprime_cdf, kprime_ncp_solve
from .ksquare import KSquareParams, ksquare_cdf
from .series_engine import EvalOptions
from .special_fn import student_t_cdf


def _positive(**values):
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be finite and positive, got {v!r}")


@dataclass(frozen=True)
class PriorSpec:
    """Conjugate prior on a two-group mean difference.

    ``m0`` and ``s0`` are the prior mean difference and scale, ``n0`` the
    prior sample size per group and ``q0`` its degrees of freedom.
    """

    m0: float
    s0: float
    n0: float
    q0: float

    def __post_init__(self):
        _positive(s0=self.s0, n0=self.n0, q0=self.q0)
        if not math.isfinite(self.m0):
            raise DomainError(f"m0 must be finite, got {self.m0!r}")

    @property
    def t0(self) -> float:
        return self.m0 / self.s0 * math.sqrt(self.n0 / 2.0)


@dataclass(frozen=True)
class PredictiveT:
    """A future t statistic is distributed as ``scale * K'(kp)``."""

    scale: float
    kp: KPrimeParams

    def cdf(self, t: float, options: EvalOptions = EvalOptions()) -> float:
        return kprime_cdf(self.kp, t / self.scale, options).value


@dataclass(frozen=True)
class PredictiveF:
    """A future F ratio is distributed as ``scale * K^2(ks)``."""

    scale: float
    ks: KSquareParams

    def cdf(self, f: float, options: EvalOptions = EvalOptions()) -> float:
        return ksquare_cdf(self.ks, f / self.scale, options).value


def predictive_t_params(T0: float, q0: float, n0: float, n: float) -> PredictiveT:
    """Predictive distribution of the t statistic for ``n`` future observations per group."""
    _positive(q0=q0, n0=n0, n=n)
    if not math.isfinite(T0):
        raise DomainError(f"T0 must be finite, got {T0!r}")
    r = 2.0 * n - 2.0
    if not r > 0:
        raise DomainError(f"n must exceed 1, got {n!r}")
    return PredictiveT(math.sqrt(1.0 + n / n0), KPrimeParams(q0, r, T0 / math.sqrt(1.0 + n0 / n)))


def prior_from(prior: PriorSpec, n: float) -> PredictiveT:
    return predictive_t_params(prior.t0, prior.q0, prior.n0, n)


def _check_size(name: str, n) -> None:
    if not n >= 2:
        raise DomainError(f"{name} must be at least 2, got {n!r}")


def p_rep(T1: float, n1: float) -> float:
    """Probability that a same-size replication shows an effect of the same sign."""
    _check_size("n1", n1)
    return student_t_cdf(T1 / math.sqrt(2.0), 2.0 * n1 - 2.0)


def prob_replication_exceeds(T1: float, n1: float, n: float, t_threshold: float,
                             tail: str = "upper", options: EvalOptions = EvalOptions()) -> float:
    """Predictive probability that a replication's t statistic falls beyond ``t_threshold``.

    The observed study (t = ``T1`` with ``n1`` per group) acts as the prior
    for a replication with ``n`` per group. ``tail="upper"`` gives
    ``Pr(t > t_threshold)``, ``tail="lower"`` gives ``Pr(t < t_threshold)``.
    """
    _check_size("n1", n1)
    _check_size("n", n)
    if tail not in ("upper", "lower"):
        raise DomainError(f"tail must be 'upper' or 'lower', got {tail!r}")
    pred = predictive_t_params(T1, 2.0 * n1 - 2.0, n1, n)
    below = pred.cdf(t_threshold, options)
    return 1.0 - below if tail == "upper" else below


def predictive_f_params(F0: float, g: int, n0: float, n: float) -> PredictiveF:
    """Predictive distribution of a one-way F ratio over ``g`` groups of ``n`` each."""
    if int(g) != g or g < 2:
        raise DomainError(f"g must be an integer >= 2, got {g!r}")
    _positive(n0=n0, n=n)
    if not (F0 >= 0 and math.isfinite(F0)):
        raise DomainError(f"F0 must be finite and nonnegative, got {F0!r}")
    ks = KSquareParams(g - 1.0, g * n0 - g, g * n - g, (g - 1.0) * F0 / (1.0 + n0 / n))
    return PredictiveF((1.0 + n / n0) / (g - 1.0), ks)


def _unit_open(name: str, v: float) -> None:
    if not -1.0 < v < 1.0:
        raise DomainError(f"{name} must lie in (-1, 1), got {v!r}")


def _corr_params(n: float, rho: float) -> KPrimeParams:
    if not n >= 3:
        raise DomainError(f"n must be at least 3, got {n!r}")
    _unit_open("rho", rho)
    return KPrimeParams(n - 1.0, n - 2.0, math.sqrt(n - 1.0) * rho / math.sqrt(1.0 - rho * rho))


def _corr_x(n: float, r_obs: float) -> float:
    _unit_open("r_obs", r_obs)
    return math.sqrt(n - 2.0) * r_obs / math.sqrt(1.0 - r_obs * r_obs)


def corr_sampling_cdf(n: float, rho: float, r_obs: float, options: EvalOptions = EvalOptions()) -> float:
    """``Pr(r < r_obs)`` for the sample correlation of ``n`` bivariate normal pairs."""
    return kprime_cdf(_corr_params(n, rho), _corr_x(n, r_obs), options).value


def corr_confidence_limits(n: float, r_obs: float, level: float,
                           options: EvalOptions = EvalOptions()) -> tuple[float, float]:
    """Exact equal-tailed confidence limits for a correlation coefficient."""
    if not n >= 3:
        raise DomainError(f"n must be at least 3, got {n!r}")
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    x = _corr_x(n, r_obs)
    alpha = 0.5 * (1.0 - level)

    def rho_of(a):
        return a / math.sqrt(n - 1.0 + a * a)

    # The CDF falls as rho rises, so the lower limit sits at the upper tail probability.
    a_lo = kprime_ncp_solve(n - 1.0, n - 2.0, x, 1.0 - alpha, options)
    a_hi = kprime_ncp_solve(n - 1.0, n - 2.0, x, alpha, options)
    return rho_of(a_lo), rho_of(a_hi)


def mcorr_sampling_cdf(n: float, m: int, rho2: float, R2_obs: float,
                       options: EvalOptions = EvalOptions()) -> float:
    """``Pr(R^2 < R2_obs)`` for the squared multiple correlation of ``m`` jointly normal variables.

    ``m`` counts all variables (the response and ``m - 1`` predictors).
    """
    if int(m) != m or m < 2 or not n > m:
        raise DomainError(f"need integer m >= 2 and n > m, got n={n!r}, m={m!r}")
    if not 0.0 <= rho2 < 1.0:
        raise DomainError(f"rho2 must lie in [0, 1), got {rho2!r}")
    if not 0.0 <= R2_obs < 1.0:
        raise DomainError(f"R2_obs must lie in [0, 1), got {R2_obs!r}")
    ks = KSquareParams(m - 1.0, n - 1.0, n - m, (n - 1.0) * rho2 / (1.0 - rho2))
    x = (n - m) / (m - 1.0) * R2_obs / (1.0 - R2_obs)
    return ksquare_cdf(ks, x, options).value

"""The K-prime distribution ``K'_{q,r}(a)``.

It reduces to Student's t with ``r`` degrees of freedom at ``a = 0`` and to
the noncentral t as ``q`` grows. For ``a > 0`` the CDF is

    Pr(K' < x) = Pr(t_q > a) +/- sum_j (+/-1)**j g_j H_j(x)

with ``H_j(x) = I_{x^2/(r+x^2)}((j+1)/2, r/2)``; the sign is negative (and the
series alternating) when ``x < 0``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, NotConverged
from .series_engine import (
    BetaTermSeries,
    EvalOptions,
    EvalReport,
    SignMode,
    Strategy,
    evaluate,
)
from .special_fn import log_negbin_pmf, student_t_cdf

LN_HALF = -math.log(2.0)
QUANTILE_PROB_TOL = 1e-10


@dataclass(frozen=True)
class KPrimeParams:
    q: float
    r: float
    a: float

    def __post_init__(self):
        if not (self.q > 0 and self.r > 0):
            raise DomainError(f"K-prime degrees of freedom must be positive, got q={self.q!r}, r={self.r!r}")
        if not math.isfinite(self.a):
            raise DomainError(f"K-prime noncentrality must be finite, got a={self.a!r}")


class KPrimeSeries(BetaTermSeries):
    """Series part of the K-prime CDF for ``a > 0`` and ``x != 0``."""

    parity_step = 2

    def __init__(self, params: KPrimeParams, x: float):
        q, r, a = params.q, params.r, params.a
        x2 = x * x
        super().__init__(x2 / (r + x2), r / (r + x2), 0.5 * r)
        a2 = a * a
        self.q = q
        self.sign_mode = SignMode.ALTERNATING if x < 0 else SignMode.ALL_POSITIVE
        self._p = q / (q + a2)
        self._pc = a2 / (q + a2)
        self._log_p = -math.log1p(a2 / q)
        self._ratio = a2 / (q + a2)
        self._inv_ratio = (q + a2) / a2
        # The weights sum to Pr(t_q < a), not to one.
        self.total_weight = student_t_cdf(a, q)

    def alpha_at(self, j):
        return 0.5 * (j + 1)

    def log_weight_at(self, j):
        return LN_HALF + log_negbin_pmf(0.5 * j, 0.5 * self.q, self._p, self._pc, self._log_p)

    def weight_ratio_fwd(self, j):
        return (self.q + j) / (j + 2) * self._ratio

    def weight_ratio_bwd(self, j):
        return j / (self.q + j - 2) * self._inv_ratio


def kprime_mode_index(params: KPrimeParams) -> int:
    """Index of the largest weight, ``floor(a^2 (q-2) / q) - 1``, clamped at 0."""
    a2 = params.a * params.a
    return max(0, math.floor(a2 * (params.q - 2.0) / params.q) - 1)


def _exact(value: float) -> EvalReport:
    return EvalReport(value=value, iterations=0, achieved_bound=0.0, start_index=0,
                      strategy_used=Strategy.METHOD1, underflow_adjusted=False, converged=True)


def kprime_cdf(params: KPrimeParams, x: float, options: EvalOptions = EvalOptions()) -> EvalReport:
    """``Pr(K'_{q,r}(a) < x)``.

    The returned report's ``value`` is the probability; its iteration
    diagnostics come from the series (zero iterations for the closed-form
    cases ``a == 0`` and ``x == 0``).
    """
    if math.isnan(x):
        raise DomainError("x is NaN")
    q, r, a = params.q, params.r, params.a
    if a < 0:
        mirrored = kprime_cdf(KPrimeParams(q, r, -a), -x, options)
        return dataclasses.replace(mirrored, value=min(1.0, max(0.0, 1.0 - mirrored.value)))
    if a == 0:
        return _exact(student_t_cdf(x, r))
    if math.isinf(x):
        return _exact(1.0 if x > 0 else 0.0)
    at_zero = 1.0 - student_t_cdf(a, q)
    if x == 0:
        return _exact(at_zero)
    series = KPrimeSeries(params, x)
    report = evaluate(series, kprime_mode_index(params), options)
    value = at_zero + report.value if x > 0 else at_zero - report.value
    return dataclasses.replace(report, value=min(1.0, max(0.0, value)))


def _strict(options: EvalOptions) -> EvalOptions:
    return dataclasses.replace(options, tolerance=min(options.tolerance, 1e-13))


def _solve_increasing(f, center: float, spread: float, what: str) -> float:
    # Root of an increasing function: expand a bracket around ``center``, then Brent.
    step = max(spread, 1e-3)
    lo, hi = center - step, center + step
    f_lo, f_hi = f(lo), f(hi)
    for _ in range(200):
        if f_lo <= 0.0 <= f_hi:
            break
        step *= 2.0
        if f_lo > 0.0:
            hi, f_hi = lo, f_lo
            lo = center - step
            f_lo = f(lo)
        else:
            lo, f_lo = hi, f_hi
            hi = center + step
            f_hi = f(hi)
    else:
        raise NotConverged(f"could not bracket the {what}")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)


def kprime_quantile(params: KPrimeParams, prob: float, options: EvalOptions = EvalOptions()) -> float:
    """The ``x`` with ``Pr(K'_{q,r}(a) < x) = prob``."""
    if not 0.0 < prob < 1.0:
        raise DomainError(f"prob must lie in (0, 1), got {prob!r}")
    opts = _strict(options)
    q, r, a = params.q, params.r, params.a
    center = a * math.sqrt(r / q)
    spread = 1.0 + abs(center)
    x = _solve_increasing(lambda t: kprime_cdf(params, t, opts).value - prob, center, spread, "K-prime quantile")
    if abs(kprime_cdf(params, x, opts).value - prob) > QUANTILE_PROB_TOL:
        raise NotConverged(f"K-prime quantile for prob={prob} missed its target")
    return x


def kprime_ncp_solve(q: float, r: float, x: float, prob: float,
                     options: EvalOptions = EvalOptions()) -> float:
    """Noncentrality ``a`` with ``Pr(K'_{q,r}(a) < x) = prob``.

    By duality ``Pr(K'_{q,r}(a) < x) = 1 - Pr(K'_{r,q}(x) < a)``, so ``a`` is
    the ``1 - prob`` quantile of ``K'_{r,q}(x)``.
    """
    if not 0.0 < prob < 1.0:
        raise DomainError(f"prob must lie in (0, 1), got {prob!r}")
    return kprime_quantile(KPrimeParams(r, q, x), 1.0 - prob, options)

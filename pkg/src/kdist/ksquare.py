"""The K-square distribution ``K^2_{p,q,r}(a^2)``.

A negative-binomial mixture of incomplete beta ratios:

    Pr(K^2 < x) = sum_j g_j I_{px/(r+px)}(p/2 + j, r/2)

with ``g_j`` the negative binomial probabilities of parameters
``q/(q+a^2)`` and ``q/2``. At ``a^2 = 0`` it is the central F distribution.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import DomainError, NotConverged
from .kprime import QUANTILE_PROB_TOL, _exact, _strict
from .series_engine import BetaTermSeries, EvalOptions, EvalReport, evaluate
from .special_fn import inc_beta, log_negbin_pmf

from scipy.optimize import brentq


@dataclass(frozen=True)
class KSquareParams:
    p: float
    q: float
    r: float
    a2: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0 and self.r > 0):
            raise DomainError(
                f"K-square degrees of freedom must be positive, got p={self.p!r}, q={self.q!r}, r={self.r!r}")
        if not (self.a2 >= 0 and math.isfinite(self.a2)):
            raise DomainError(f"K-square noncentrality must be finite and nonnegative, got a2={self.a2!r}")


class KSquareSeries(BetaTermSeries):
    parity_step = 1

    def __init__(self, params: KSquareParams, x: float):
        p, q, r, a2 = params.p, params.q, params.r, params.a2
        px = p * x
        super().__init__(px / (r + px), r / (r + px), 0.5 * r)
        self.half_p = 0.5 * p
        self.half_q = 0.5 * q
        self._p = q / (q + a2)
        self._pc = a2 / (q + a2)
        self._log_p = -math.log1p(a2 / q)
        self._ratio = a2 / (q + a2)
        self._inv_ratio = (q + a2) / a2

    def alpha_at(self, j):
        return self.half_p + j

    def log_weight_at(self, j):
        return log_negbin_pmf(j, self.half_q, self._p, self._pc, self._log_p)

    def weight_ratio_fwd(self, j):
        return (self.half_q + j) / (j + 1) * self._ratio

    def weight_ratio_bwd(self, j):
        return j / (self.half_q + j - 1) * self._inv_ratio


def ksquare_mode_index(params: KSquareParams) -> int:
    """Mode of the negative binomial weights, ``floor(a^2 (q-2) / (2q))``, clamped at 0."""
    return max(0, math.floor(params.a2 * (params.q - 2.0) / (2.0 * params.q)))


def central_f_cdf(x: float, p: float, r: float) -> float:
    """``Pr(F_{p,r} < x)``."""
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    px = p * x
    return inc_beta(px / (r + px), 0.5 * p, 0.5 * r, zc=r / (r + px))


def ksquare_cdf(params: KSquareParams, x: float, options: EvalOptions = EvalOptions()) -> EvalReport:
    """``Pr(K^2_{p,q,r}(a^2) < x)``; the report's ``value`` is the probability."""
    if math.isnan(x):
        raise DomainError("x is NaN")
    if x <= 0:
        return _exact(0.0)
    if math.isinf(x):
        return _exact(1.0)
    if params.a2 == 0:
        return _exact(central_f_cdf(x, params.p, params.r))
    report = evaluate(KSquareSeries(params, x), ksquare_mode_index(params), options)
    return dataclasses.replace(report, value=min(1.0, max(0.0, report.value)))


def ksquare_quantile(params: KSquareParams, prob: float, options: EvalOptions = EvalOptions()) -> float:
    """The ``x > 0`` with ``Pr(K^2_{p,q,r}(a^2) < x) = prob``."""
    if not 0.0 < prob < 1.0:
        raise DomainError(f"prob must lie in (0, 1), got {prob!r}")
    opts = _strict(options)

    def f(x):
        return ksquare_cdf(params, x, opts).value - prob

    # Bracket on a log scale: the support is (0, inf).
    lo = hi = max(1.0 + params.a2 / params.p, 1e-3)
    f_lo = f_hi = f(lo)
    for _ in range(400):
        if f_lo <= 0.0:
            break
        lo *= 0.5
        f_lo = f(lo)
    for _ in range(400):
        if f_hi >= 0.0:
            break
        hi *= 2.0
        f_hi = f(hi)
    if not f_lo <= 0.0 <= f_hi:
        raise NotConverged(f"could not bracket the K-square quantile for prob={prob}")
    x = hi if f_hi == 0.0 else lo if f_lo == 0.0 else brentq(f, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
    if abs(ksquare_cdf(params, x, opts).value - prob) > QUANTILE_PROB_TOL:
        raise NotConverged(f"K-square quantile for prob={prob} missed its target")
    return x

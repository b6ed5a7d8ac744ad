"""Special functions used by the K-prime and K-square series.

Everything here is a pure function of its arguments. The incomplete beta
ratio is evaluated by continued fraction; its prefactor
``z**a * (1-z)**b / B(a, b)`` goes through Stirling-error and deviance
terms so that it stays accurate when ``a`` and ``b`` are in the thousands.
"""

from __future__ import annotations

import math

from .errors import DomainError

LN_SQRT_2PI = 0.918938533204672741780329736406  # log(sqrt(2*pi))
LN_2PI = 1.837877066409345483560659472811

_CF_EPS = 1e-16
_CF_TINY = 1e-300

# Coefficients of the asymptotic expansion of the Stirling error.
_S0 = 1.0 / 12.0
_S1 = 1.0 / 360.0
_S2 = 1.0 / 1260.0
_S3 = 1.0 / 1680.0
_S4 = 1.0 / 1188.0


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0 or math.isinf(x):
        raise DomainError(f"ln_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def stirling_error(t: float) -> float:
    """``log(t!) - log(sqrt(2*pi*t) * (t/e)**t)`` for real ``t > 0``."""
    if t > 15.0:
        t2 = t * t
        return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / t2) / t2) / t2) / t2) / t
    return math.lgamma(t + 1.0) - (t + 0.5) * math.log(t) + t - LN_SQRT_2PI


def deviance_term(x: float, m: float) -> float:
    """``x*log(x/m) + m - x``, accurate when ``x`` is close to ``m``."""
    if abs(x - m) < 0.1 * (x + m):
        v = (x - m) / (x + m)
        s = (x - m) * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / m) + m - x


def log_beta_prefix(a: float, b: float, z: float, zc: float | None = None) -> float:
    """Log of ``z**a * (1-z)**b / B(a, b)``.

    ``zc`` is ``1 - z`` when the caller can supply it without cancellation.
    """
    if zc is None:
        zc = 1.0 - z
    if z <= 0.0 or zc <= 0.0:
        return -math.inf
    n = a + b
    return (
        0.5 * (math.log(a) + math.log(b) - math.log(n)) - LN_SQRT_2PI
        + stirling_error(n) - stirling_error(a) - stirling_error(b)
        - deviance_term(a, n * z) - deviance_term(b, n * zc)
    )


def _beta_cf(a: float, b: float, z: float) -> float:
    # Modified Lentz evaluation of the continued fraction for I_z(a, b).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    max_iter = 1000 + int(20.0 * math.sqrt(max(a, b)))
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * z / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, z={z})")


def inc_beta(z: float, a: float, b: float, *, zc: float | None = None) -> float:
    """Regularized incomplete beta ratio ``I_z(a, b)``.

    Parameters
    ----------
    z : float
        Upper integration limit in ``[0, 1]``.
    a, b : float
        Positive shape parameters.
    zc : float, optional
        ``1 - z`` computed by the caller. Passing it avoids the rounding of
        ``1 - z`` when ``z`` is close to one.
    """
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"inc_beta shapes must be finite and positive, got a={a!r}, b={b!r}")
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"inc_beta argument must lie in [0, 1], got z={z!r}")
    if zc is None:
        zc = 1.0 - z
    if z == 0.0:
        return 0.0
    if zc <= 0.0:
        return 1.0
    if z < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_beta_prefix(a, b, z, zc)) * _beta_cf(a, b, z) / a
    tail = math.exp(log_beta_prefix(b, a, zc, z)) * _beta_cf(b, a, zc) / b
    return 1.0 - tail


def student_t_cdf(x: float, df: float) -> float:
    """``Pr(t_df < x)`` for any real ``df > 0``."""
    if not df > 0:
        raise DomainError(f"degrees of freedom must be positive, got {df!r}")
    if math.isnan(x):
        raise DomainError("x is NaN")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x == 0.0:
        return 0.5
    x2 = x * x
    if x2 > df:
        z = df / (df + x2)
        zc = x2 / (df + x2)
    else:
        zc = x2 / (df + x2)
        z = 1.0 - zc
    tail = 0.5 * inc_beta(z, 0.5 * df, 0.5, zc=zc)
    return 1.0 - tail if x > 0 else tail


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def log_negbin_pmf(t: float, size: float, p: float, q: float, log_p: float | None = None) -> float:
    """Log of ``Gamma(size+t) / (Gamma(t+1) Gamma(size)) * p**size * q**t``.

    ``t >= 0`` need not be an integer. ``q`` is ``1 - p``, passed separately so
    that neither loses precision when the other is close to one; ``log_p``
    may be supplied for the same reason.
    """
    if t == 0.0:
        return size * (math.log(p) if log_p is None else log_p)
    if q == 0.0:
        return -math.inf
    n = size + t
    return (
        math.log(size / n)
        + stirling_error(n) - stirling_error(size) - stirling_error(t)
        - deviance_term(size, n * p) - deviance_term(t, n * q)
        + 0.5 * (math.log(n) - math.log(size) - math.log(t)) - LN_SQRT_2PI
    )

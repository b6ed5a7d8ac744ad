import math

import pytest

from kdist.errors import DomainError
from kdist.ksquare import (
    KSquareParams,
    central_f_cdf,
    ksquare_cdf,
    ksquare_mode_index,
    ksquare_quantile,
)
from kdist.series_engine import EvalOptions, Strategy
from oracles import ksquare_cdf_mp, ksquare_cdf_quad


def cdf(p, q, r, a2, x, **kw):
    return ksquare_cdf(KSquareParams(p, q, r, a2), x, EvalOptions(**kw)).value


@pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, -1)])
def test_params_validation(args):
    with pytest.raises(DomainError):
        KSquareParams(*args)


def test_mode_index():
    assert ksquare_mode_index(KSquareParams(2, 20, 18, 46.667)) == math.floor(46.667 * 18 / 40)
    assert ksquare_mode_index(KSquareParams(2, 1, 18, 46.667)) == 0


def test_support():
    assert cdf(3, 10, 10, 5.0, 0.0) == 0.0
    assert cdf(3, 10, 10, 5.0, -2.0) == 0.0
    assert cdf(3, 10, 10, 5.0, math.inf) == 1.0


def test_central_f():
    # F(2, 2) has CDF x / (1 + x).
    assert central_f_cdf(3.0, 2, 2) == pytest.approx(0.75, abs=1e-15)
    assert cdf(2, 9, 2, 0.0, 3.0) == central_f_cdf(3.0, 2, 2)


@pytest.mark.parametrize("p,q,r,a2,x", [
    (2, 20, 18, 46.667, 36),
    (4, 11, 7, 4.7143, 0.19444),
    (3, 99, 96, 891, 288),
    (5, 8, 12, 3.0, 1.4),
    (1, 30, 5, 12.0, 9.0),
])
def test_against_quadrature(p, q, r, a2, x):
    assert cdf(p, q, r, a2, x) == pytest.approx(ksquare_cdf_quad(p, q, r, a2, x), abs=1e-9)


@pytest.mark.parametrize("p,q,r,a2,x", [(10, 20, 30, 500, 0.1), (6, 40, 25, 80, 2.5)])
def test_against_extended_precision(p, q, r, a2, x):
    exact = float(ksquare_cdf_mp(p, q, r, a2, x))
    assert cdf(p, q, r, a2, x) == pytest.approx(exact, abs=1e-13)


def test_noncentral_f_limit():
    from scipy import stats
    assert cdf(4, 1e8, 20, 6.0, 2.5) == pytest.approx(stats.ncf.cdf(2.5, 4, 20, 6.0), abs=1e-6)


def test_monotone_in_x_and_noncentrality():
    xs = [0.1 * i for i in range(1, 80)]
    vals = [cdf(3, 15, 12, 7.0, x) for x in xs]
    assert all(b >= a - 1e-13 for a, b in zip(vals, vals[1:]))
    by_ncp = [cdf(3, 15, 12, a2, 2.0) for a2 in (0, 1, 5, 20, 80)]
    assert all(b <= a + 1e-13 for a, b in zip(by_ncp, by_ncp[1:]))


def test_strategies_agree():
    vals = [cdf(11, 1199, 1188, 10791, 972, tolerance=1e-12, strategy=s) for s in Strategy]
    assert max(vals) - min(vals) < 3e-12


@pytest.mark.parametrize("prob", [1e-5, 0.1, 0.5, 0.95])
def test_quantile_round_trip(prob):
    params = KSquareParams(4, 30, 20, 12.0)
    x = ksquare_quantile(params, prob)
    assert ksquare_cdf(params, x).value == pytest.approx(prob, abs=1e-10)


def test_quantile_of_central_case():
    from scipy import stats
    assert ksquare_quantile(KSquareParams(3, 10, 17, 0.0), 0.9) == pytest.approx(stats.f.ppf(0.9, 3, 17), rel=1e-9)

"""Evaluation of mixture series ``sum_j s**j * g_j * H_j(x)``.

``g_j`` are mixing weights (a probability distribution over ``j``, possibly
defective) and ``H_j(x)`` are incomplete beta ratios that decrease in ``j``.
Three summation strategies are provided:

* Method 1 sums forward from index 0, where ``H_j`` is largest.
* Method 2 seeds the terms at the mode of the weights and widens the
  summation window in both directions.
* The hybrid tactic picks between the two starting points and lowers the
  mode index by the incomplete beta argument when the seed there underflows
  or is negligible next to ``H_0``.

All strategies count one iteration per index added to the summation window.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError, NotConverged, UnderflowError
from .special_fn import inc_beta, log_beta_prefix

# ln(smallest normal double) plus a 40 nat margin.
LOG_UNDERFLOW = math.log(2.2250738585072014e-308) + 40.0
# Weights whose log lies below this are carried with an exponent offset.
_LOG_SCALE_TRIGGER = -600.0
_RESCALE_ABOVE = 1e250
_MAX_LOWERINGS = 60


class Strategy(enum.Enum):
    METHOD1 = "method1"
    METHOD2 = "method2"
    HYBRID = "hybrid"
    AUTO = "auto"


class SignMode(enum.Enum):
    ALL_POSITIVE = 1
    ALTERNATING = -1


@dataclass(frozen=True)
class EvalOptions:
    """Knobs for a series evaluation.

    ``tolerance`` is an absolute bound on the truncation error of the series.
    ``hybrid_threshold`` is the ratio ``H_k / H_0`` below which the hybrid
    tactic lowers its starting index.
    """

    tolerance: float = 1e-12
    strategy: Strategy = Strategy.AUTO
    max_iterations: int = 200_000
    hybrid_threshold: float = 0.01

    def __post_init__(self):
        if isinstance(self.strategy, str):
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise DomainError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        if not 0.0 < self.hybrid_threshold < 1.0:
            raise DomainError(f"hybrid_threshold must lie in (0, 1), got {self.hybrid_threshold!r}")


@dataclass(frozen=True)
class EvalReport:
    """Outcome of a series evaluation.

    From the engine, ``value`` is the series sum alone. The distribution
    functions return a copy whose ``value`` is the final probability.
    """

    value: float
    iterations: int
    achieved_bound: float
    start_index: int
    strategy_used: Strategy
    underflow_adjusted: bool
    converged: bool


class MixtureSeries(ABC):
    """Supplier of the weights and incomplete beta terms of one series.

    Subclasses set ``parity_step`` (the index stride of the recurrences),
    ``sign_mode``, ``beta_argument`` and ``total_weight`` (the sum of all
    ``g_j``, which is 1 unless the mixture is defective).

    The increment at ``j`` is ``H_j - H_{j+step}``.
    """

    parity_step: int = 1
    sign_mode: SignMode = SignMode.ALL_POSITIVE
    beta_argument: float = 0.0
    total_weight: float = 1.0

    @abstractmethod
    def log_weight_at(self, j: int) -> float: ...

    @abstractmethod
    def weight_ratio_fwd(self, j: int) -> float:
        """``g_{j+step} / g_j``."""

    @abstractmethod
    def weight_ratio_bwd(self, j: int) -> float:
        """``g_{j-step} / g_j``."""

    @abstractmethod
    def h_at(self, j: int) -> float: ...

    @abstractmethod
    def log_h_increment_at(self, j: int) -> float: ...

    @abstractmethod
    def increment_ratio_fwd(self, j: int) -> float:
        """``inc_{j+step} / inc_j``."""

    @abstractmethod
    def increment_ratio_bwd(self, j: int) -> float:
        """``inc_{j-step} / inc_j``."""


class BetaTermSeries(MixtureSeries):
    """Series whose terms are ``H_j = I_z(alpha_j, beta)`` with ``alpha_{j+step} = alpha_j + 1``."""

    def __init__(self, z: float, zc: float, beta_shape: float):
        self.z = z
        self.zc = zc
        self.beta_shape = beta_shape
        self.beta_argument = z

    @abstractmethod
    def alpha_at(self, j: int) -> float: ...

    def h_at(self, j):
        return inc_beta(self.z, self.alpha_at(j), self.beta_shape, zc=self.zc)

    def log_h_increment_at(self, j):
        alpha = self.alpha_at(j)
        return log_beta_prefix(alpha, self.beta_shape, self.z, self.zc) - math.log(alpha)

    def increment_ratio_fwd(self, j):
        alpha = self.alpha_at(j)
        return self.z * (alpha + self.beta_shape) / (alpha + 1.0)

    def increment_ratio_bwd(self, j):
        alpha = self.alpha_at(j)
        return alpha / (self.z * (alpha + self.beta_shape - 1.0))


@dataclass
class _Seed:
    index: int
    log_g: float
    h: float
    log_inc: float

    @property
    def usable(self) -> bool:
        return self.h > 0.0 and self.log_inc >= LOG_UNDERFLOW


def _make_seed(series: MixtureSeries, j: int) -> _Seed:
    h = series.h_at(j)
    log_inc = series.log_h_increment_at(j) if h > 0.0 else -math.inf
    return _Seed(j, series.log_weight_at(j), h, log_inc)


class _Chain:
    """Frontier state of one parity chain: index, scaled weight, H and increment at each end."""

    __slots__ = ("seed", "seed_used", "seed_w", "lo", "lo_w", "lo_h", "lo_inc",
                 "hi", "hi_w", "hi_h", "hi_inc")

    def __init__(self, seed: _Seed, shift: float, inc_shift: float):
        w = math.exp(seed.log_g + shift)
        inc = math.exp(seed.log_inc + inc_shift)
        self.seed = seed
        self.seed_used = False
        self.seed_w = w
        self.lo = self.hi = seed.index
        self.lo_w = self.hi_w = w
        self.lo_h = self.hi_h = seed.h
        self.lo_inc = self.hi_inc = inc


StepHook = Callable[[int, int, float, float, float, float], None]


def _offset_for(logs: list[float]) -> float:
    top = max(logs)
    return -top if -math.inf < top < _LOG_SCALE_TRIGGER else 0.0


def _sum_window(
    series: MixtureSeries,
    start: int,
    seeds: list[_Seed],
    h0: float,
    options: EvalOptions,
    strategy: Strategy,
    underflow_adjusted: bool,
    on_step: Optional[StepHook],
) -> EvalReport:
    step = series.parity_step
    tol = options.tolerance
    max_iter = int(options.max_iterations)
    total = series.total_weight
    alternating = series.sign_mode is SignMode.ALTERNATING

    # Quantities that would underflow are carried as value * exp(offset):
    # weights always, increments only when summing forward from index 0.
    shift = _offset_for([s.log_g for s in seeds])
    inc_shift = _offset_for([s.log_inc for s in seeds]) if start == 0 else 0.0
    chains = [_Chain(s, shift, inc_shift) for s in seeds]

    sums = [0.0, 0.0]  # scaled sum of g*H over even and odd indices
    wsum = 0.0  # scaled sum of g over the window
    lo = hi = start
    count = 0  # terms obtained by recurrence; directly seeded terms are free

    def add(j: int) -> None:
        nonlocal wsum, count
        ch = chains[(j - start) % step]
        if j == ch.seed.index and not ch.seed_used:
            ch.seed_used = True
            w, h = ch.seed_w, ch.seed.h
        elif j < ch.lo:
            prev = ch.lo
            ch.lo_inc *= series.increment_ratio_bwd(prev)
            ch.lo_h += ch.lo_inc
            ch.lo_w *= series.weight_ratio_bwd(prev)
            ch.lo = j
            w, h = ch.lo_w, ch.lo_h
            count += 1
        else:
            prev = ch.hi
            ch.hi_h -= ch.hi_inc * math.exp(-inc_shift) if inc_shift else ch.hi_inc
            if ch.hi_h < 0.0:
                ch.hi_h = 0.0
            ch.hi_inc *= series.increment_ratio_fwd(prev)
            ch.hi_w *= series.weight_ratio_fwd(prev)
            ch.hi = j
            w, h = ch.hi_w, ch.hi_h
            count += 1
        sums[j & 1 if alternating else 0] += w * h
        wsum += w

    def rescale() -> None:
        nonlocal shift, inc_shift, wsum
        if shift > 0.0:
            biggest = max(max(c.lo_w, c.hi_w) for c in chains)
            if biggest > _RESCALE_ABOVE:
                drop = min(shift, math.log(biggest))
                factor = math.exp(-drop)
                for c in chains:
                    c.lo_w *= factor
                    c.hi_w *= factor
                    c.seed_w *= factor
                sums[0] *= factor
                sums[1] *= factor
                wsum *= factor
                shift -= drop
        if inc_shift > 0.0:
            biggest = max(c.hi_inc for c in chains)
            if biggest > _RESCALE_ABOVE:
                drop = min(inc_shift, math.log(biggest))
                factor = math.exp(-drop)
                for c in chains:
                    c.hi_inc *= factor
                inc_shift -= drop

    def current_bound() -> float:
        unscale = math.exp(-shift) if shift else 1.0
        missing = total - wsum * unscale
        if missing <= 0.0:
            return 0.0
        h_ref = h0 if lo > 0 else chains[(hi - start) % step].hi_h
        return h_ref * missing

    add(start)
    bound = current_bound()
    while True:
        if on_step is not None:
            unscale = math.exp(-shift) if shift else 1.0
            on_step(lo, hi, sums[0] * unscale, sums[1] * unscale, wsum * unscale, bound)
        if bound <= tol:
            converged = True
            break
        if count >= max_iter:
            converged = False
            break
        if lo > 0:
            lo -= 1
            add(lo)
        if count < max_iter:
            hi += 1
            add(hi)
        if shift or inc_shift:
            rescale()
        bound = current_bound()

    unscale = math.exp(-shift) if shift else 1.0
    value = (sums[0] - sums[1]) * unscale
    report = EvalReport(
        value=value,
        iterations=count,
        achieved_bound=bound,
        start_index=start,
        strategy_used=strategy,
        underflow_adjusted=underflow_adjusted,
        converged=converged,
    )
    if not converged:
        raise NotConverged(
            f"series not converged after {count} iterations (bound {bound:.3g} > {tol:.3g})",
            report,
        )
    return report


def _seeds_at(series: MixtureSeries, start: int, cache: dict[int, _Seed]) -> list[_Seed]:
    seeds = []
    for j in range(start, start + series.parity_step):
        if j not in cache:
            cache[j] = _make_seed(series, j)
        seeds.append(cache[j])
    return seeds


def _h0(series: MixtureSeries, cache: dict[int, _Seed]) -> float:
    if 0 in cache:
        return cache[0].h
    return series.h_at(0)


def _recurrence_possible(seeds: list[_Seed], start: int) -> bool:
    # Summing forward from 0 carries tiny increments with an exponent offset.
    return start == 0 or all(s.usable for s in seeds)


def _run_from(series, start, options, strategy, cache, underflow_adjusted=False, on_step=None):
    seeds = _seeds_at(series, start, cache)
    h0 = seeds[0].h if start == 0 else _h0(series, cache)
    if not _recurrence_possible(seeds, start):
        bad = next(s for s in seeds if not s.usable)
        raise UnderflowError(
            f"recurrence cannot start at index {bad.index}: "
            f"log increment {bad.log_inc:.1f} is below {LOG_UNDERFLOW:.1f}"
        )
    return _sum_window(series, start, seeds, h0, options, strategy, underflow_adjusted, on_step)


def evaluate_method1(series: MixtureSeries, options: EvalOptions = EvalOptions(), *,
                     on_step: Optional[StepHook] = None) -> EvalReport:
    """Sum forward from index 0 until the truncation bound drops below the tolerance."""
    return _run_from(series, 0, options, Strategy.METHOD1, {}, on_step=on_step)


def evaluate_method2(series: MixtureSeries, mode_index: int, options: EvalOptions = EvalOptions(), *,
                     on_step: Optional[StepHook] = None) -> EvalReport:
    """Seed at ``mode_index`` and widen the window both ways.

    Raises :class:`UnderflowError` when the seed term or its increment is too
    small to start the recurrence.
    """
    if mode_index < 0:
        raise DomainError(f"mode_index must be nonnegative, got {mode_index}")
    return _run_from(series, int(mode_index), options, Strategy.METHOD2, {}, on_step=on_step)


def evaluate_hybrid(series: MixtureSeries, mode_index: int, options: EvalOptions = EvalOptions(), *,
                    on_step: Optional[StepHook] = None) -> EvalReport:
    """Start at 0 or at the (possibly lowered) mode, whichever suits the terms.

    The larger of ``g_0 H_0`` and ``g_k H_k`` decides the start. A start at
    ``k`` whose seed underflows, or whose ``H_k / H_0`` falls below the
    threshold, is replaced by ``floor(k * z)`` with ``z`` the incomplete beta
    argument, repeatedly.
    """
    if mode_index < 0:
        raise DomainError(f"mode_index must be nonnegative, got {mode_index}")
    k = int(mode_index)
    cache: dict[int, _Seed] = {}
    if k == 0:
        return _run_from(series, 0, options, Strategy.HYBRID, cache, on_step=on_step)

    zero_seeds = _seeds_at(series, 0, cache)
    h0 = zero_seeds[0].h
    mode_seeds = _seeds_at(series, k, cache)
    mode_ok = all(s.usable for s in mode_seeds)

    def log_product(seed: _Seed) -> float:
        return seed.log_g + math.log(seed.h) if seed.h > 0.0 else -math.inf

    if log_product(zero_seeds[0]) >= log_product(mode_seeds[0]):
        try:
            return _run_from(series, 0, options, Strategy.HYBRID, cache,
                             underflow_adjusted=not mode_ok, on_step=on_step)
        except UnderflowError:
            pass

    z = series.beta_argument
    threshold = options.hybrid_threshold
    lowerings = 0
    while k > 0:
        seeds = _seeds_at(series, k, cache)
        if all(s.usable for s in seeds) and seeds[0].h >= threshold * h0:
            break
        if lowerings >= _MAX_LOWERINGS:
            raise UnderflowError(f"no usable starting index after {lowerings} lowerings")
        k = int(math.floor(k * z))
        lowerings += 1
    return _run_from(series, k, options, Strategy.HYBRID, cache,
                     underflow_adjusted=not mode_ok, on_step=on_step)


def evaluate(series: MixtureSeries, mode_index: int, options: EvalOptions = EvalOptions(), *,
             on_step: Optional[StepHook] = None) -> EvalReport:
    """Dispatch on ``options.strategy``; ``AUTO`` runs the hybrid tactic."""
    strategy = options.strategy
    if strategy is Strategy.METHOD1:
        return evaluate_method1(series, options, on_step=on_step)
    if strategy is Strategy.METHOD2:
        return evaluate_method2(series, mode_index, options, on_step=on_step)
    return evaluate_hybrid(series, mode_index, options, on_step=on_step)

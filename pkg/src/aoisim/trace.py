"""Sample-path generation for the queue simulator.

A sample path (:class:`Trace`) is a fixed sequence of arrival times and
update sizes.  The same trace is replayed under every scheduling policy so
that policy comparisons are coupled (common random numbers).

Distributions are parameterized by their mean and squared coefficient of
variation C^2 = Var/Mean^2, matching how simulation sweeps are specified:
the mean sets the time scale, C^2 sets the variability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

FAMILIES = ("exponential", "weibull", "gamma", "lognormal", "pareto", "deterministic")

# Sub-stream indices split from a trace seed (see split_streams).
ARRIVAL_STREAM = 0
SIZE_STREAM = 1
DECISION_STREAM = 2


class ParameterizationError(ValueError):
    """Raised for an unsupported (family, mean, scv) combination."""


@dataclass(frozen=True)
class DistributionSpec:
    """A distribution request: family name, mean, and scv (C^2)."""

    family: str
    mean: float
    scv: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterizationError(f"unknown family {self.family!r}")
        if not self.mean > 0:
            raise ParameterizationError(f"mean must be positive, got {self.mean}")
        if self.family == "deterministic":
            if self.scv != 0:
                raise ParameterizationError("deterministic requires scv = 0")
        elif not self.scv > 0:
            raise ParameterizationError(f"scv must be positive, got {self.scv}")
        if self.family == "exponential" and abs(self.scv - 1.0) > 1e-12:
            raise ParameterizationError("exponential requires scv = 1")


@dataclass(frozen=True)
class ParamSet:
    """Solved natural parameters for one family.

    Meaning of (a, b) per family:
      exponential   a = mean (scale)
      weibull       a = shape, b = scale
      gamma         a = shape, b = scale
      lognormal     a = mu, b = sigma (log-space)
      pareto        a = alpha (tail index), b = x_m (scale, standard Pareto)
      deterministic a = value
    """

    family: str
    a: float
    b: float = 0.0

    def analytic_mean(self) -> float:
        f, a, b = self.family, self.a, self.b
        if f == "exponential":
            return a
        if f == "weibull":
            return b * math.gamma(1.0 + 1.0 / a)
        if f == "gamma":
            return a * b
        if f == "lognormal":
            return math.exp(a + 0.5 * b * b)
        if f == "pareto":
            return a * b / (a - 1.0)
        return a

    def analytic_var(self) -> float:
        f, a, b = self.family, self.a, self.b
        if f == "exponential":
            return a * a
        if f == "weibull":
            g1 = math.gamma(1.0 + 1.0 / a)
            g2 = math.gamma(1.0 + 2.0 / a)
            return b * b * (g2 - g1 * g1)
        if f == "gamma":
            return a * b * b
        if f == "lognormal":
            m = math.exp(a + 0.5 * b * b)
            return m * m * (math.exp(b * b) - 1.0)
        if f == "pareto":
            return b * b * a / ((a - 1.0) ** 2 * (a - 2.0))
        return 0.0


def _weibull_scv(shape: float) -> float:
    # C^2 + 1 = Gamma(1+2/a) / Gamma(1+1/a)^2, via gammaln for stability.
    return math.exp(gammaln(1.0 + 2.0 / shape) - 2.0 * gammaln(1.0 + 1.0 / shape)) - 1.0


def _solve_weibull_shape(scv: float, lo: float = 0.05, hi: float = 50.0) -> float:
    """Bisection on the Gamma-ratio; the scv is strictly decreasing in shape."""
    if _weibull_scv(lo) < scv or _weibull_scv(hi) > scv:
        raise ParameterizationError(
            f"weibull scv {scv} outside solvable range for shape in [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _weibull_scv(mid) > scv:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 or abs(_weibull_scv(mid) - scv) < 1e-12:
            break
    return 0.5 * (lo + hi)


def solve_params(spec: DistributionSpec) -> ParamSet:
    """Moment-match a family to (mean, scv).

    Closed form everywhere except Weibull, where the shape is found by
    bisection on Gamma(1+2/a)/Gamma(1+1/a)^2 = 1 + scv.
    """
    f, m, c2 = spec.family, spec.mean, spec.scv
    if f == "exponential":
        return ParamSet("exponential", m)
    if f == "deterministic":
        return ParamSet("deterministic", m)
    if f == "gamma":
        return ParamSet("gamma", 1.0 / c2, m * c2)
    if f == "lognormal":
        sigma2 = math.log1p(c2)
        return ParamSet("lognormal", math.log(m) - 0.5 * sigma2, math.sqrt(sigma2))
    if f == "pareto":
        # C^2 = 1/(alpha(alpha-2))  =>  alpha = 1 + sqrt(1 + 1/C^2) > 2.
        alpha = 1.0 + math.sqrt(1.0 + 1.0 / c2)
        return ParamSet("pareto", alpha, m * (alpha - 1.0) / alpha)
    shape = _solve_weibull_shape(c2)
    scale = m / math.gamma(1.0 + 1.0 / shape)
    return ParamSet("weibull", shape, scale)


def sample_many(params: ParamSet, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n variates.

    Exponential, Weibull, and Pareto use the inverse CDF on rng.random(), so
    identical uniforms give coupled draws across those families.  Gamma and
    lognormal use the generator's native transforms.
    """
    f, a, b = params.family, params.a, params.b
    if f == "exponential":
        return -a * np.log1p(-rng.random(n))
    if f == "weibull":
        return b * (-np.log1p(-rng.random(n))) ** (1.0 / a)
    if f == "pareto":
        return b * (1.0 - rng.random(n)) ** (-1.0 / a)
    if f == "gamma":
        return rng.gamma(a, b, n)
    if f == "lognormal":
        return rng.lognormal(a, b, n)
    return np.full(n, a)


def sample(params: ParamSet, rng: np.random.Generator) -> float:
    """Draw one variate, advancing the stream deterministically."""
    return float(sample_many(params, rng, 1)[0])


@dataclass(frozen=True, eq=False)
class Trace:
    """One sample path: strictly increasing arrival times and positive sizes.

    Generation time equals arrival time (exogenous arrivals), so
    ``arrivals[i]`` is both t_i and the freshness stamp of update i.
    """

    arrivals: np.ndarray
    sizes: np.ndarray
    seed: int

    def __post_init__(self):
        if len(self.arrivals) != len(self.sizes):
            raise ValueError("arrivals and sizes must have equal length")
        if len(self.arrivals) == 0:
            raise ValueError("empty trace")
        if not (self.arrivals[0] > 0 and np.all(np.diff(self.arrivals) > 0)):
            raise ValueError("arrivals must be strictly increasing and positive")
        if not np.all(self.sizes > 0):
            raise ValueError("sizes must be positive")

    @property
    def n(self) -> int:
        return len(self.arrivals)


def split_streams(seed: int) -> list[np.random.Generator]:
    """Documented stream-splitting rule: one seed, three independent streams.

    Children of ``SeedSequence(seed)`` in order: arrivals, sizes, scheduler
    decisions (used only by the RANDOM policy).  Changing how one stream is
    consumed never perturbs the others.
    """
    children = np.random.SeedSequence(seed).spawn(3)
    return [np.random.default_rng(c) for c in children]


def decision_rng(seed: int) -> np.random.Generator:
    """The scheduler-decision stream for a trace seed (RANDOM policy only)."""
    return split_streams(seed)[DECISION_STREAM]


def derive_seed(master: int, point: int, replication: int) -> int:
    """Map (master seed, sweep point, replication) to one 64-bit trace seed."""
    ss = np.random.SeedSequence((master, point, replication))
    return int(ss.generate_state(1, np.uint64)[0])


def generate_trace(arrival: DistributionSpec, size: DistributionSpec,
                   n: int, seed: int) -> Trace:
    """Generate n updates: arrivals are a cumulative sum of interarrival draws.

    Arrival and size draws come from independent sub-streams of ``seed``, so
    regenerating with a different size family leaves arrivals bit-identical.
    """
    if n < 1:
        raise ValueError("trace needs at least one update")
    streams = split_streams(seed)
    interarrivals = sample_many(solve_params(arrival), streams[ARRIVAL_STREAM], n)
    sizes = sample_many(solve_params(size), streams[SIZE_STREAM], n)
    arrivals = np.cumsum(interarrivals)
    # Heavy-tailed interarrivals can vanish to float absorption (t + x == t);
    # nudge such arrivals up an ulp each to keep them strictly increasing.
    if not np.all(np.diff(arrivals) > 0):
        for i in range(1, n):
            if arrivals[i] <= arrivals[i - 1]:
                arrivals[i] = np.nextafter(arrivals[i - 1], np.inf)
    return Trace(arrivals=arrivals, sizes=sizes, seed=seed)

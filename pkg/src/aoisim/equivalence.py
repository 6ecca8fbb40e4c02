"""Verifiers for structural claims about policies, by coupled replay.

Two kinds of checks, both over batches of shared traces:

* sample-path equivalence - two policies serve the same update at the same
  time on every trace (compared on the start/resume/deliver projection of
  the decision logs, since equivalent policies may do discard bookkeeping
  at different instants);
* informative-dominance - the informative variant's mean age sits at or
  below the base policy's, with confidence-interval separation deciding
  between "dominates", "inconclusive", and "violated".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import EngineOptions, run
from .metrics import aggregate
from .policies import PolicyId, parse_policy
from .trace import DistributionSpec, Trace, derive_seed, generate_trace


@dataclass(frozen=True)
class TraceBatch:
    """A reproducible batch of traces: count, size, distributions, seed base."""

    count: int
    updates: int
    arrival: DistributionSpec
    service: DistributionSpec
    seed: int = 0

    def trace(self, index: int) -> Trace:
        return generate_trace(self.arrival, self.service, self.updates,
                              derive_seed(self.seed, 0, index))


def _iter_traces(batch):
    """A TraceBatch or any sequence of Trace objects."""
    if isinstance(batch, TraceBatch):
        return batch.count, batch.trace
    traces = list(batch)
    return len(traces), lambda i: traces[i]


@dataclass(frozen=True)
class Divergence:
    trace_seed: int
    event_index: int
    time: float
    id_a: int
    id_b: int


@dataclass(frozen=True)
class EquivalenceReport:
    policy_a: str
    policy_b: str
    traces_checked: int
    first_divergence: Optional[Divergence]

    @property
    def verdict(self) -> str:
        return "equivalent" if self.first_divergence is None else "diverged"

    @property
    def equivalent(self) -> bool:
        return self.first_divergence is None


def _as_policy(p) -> PolicyId:
    return parse_policy(p) if isinstance(p, str) else p


def _require_deterministic(*policies: PolicyId):
    for p in policies:
        if p.base == "random":
            raise ValueError("random policy is not supported by equivalence checks")
        if p.base == "ps":
            raise ValueError("processor sharing is not supported by equivalence checks")


def _first_mismatch(ta, ia, aa, tb, ib, ab) -> Optional[tuple[int, float, int, int]]:
    """Index and details of the first differing event, or None."""
    m = min(len(ta), len(tb))
    same = (ta[:m] == tb[:m]) & (ia[:m] == ib[:m]) & (aa[:m] == ab[:m])
    if np.all(same):
        if len(ta) == len(tb):
            return None
        k = m
        time = float(ta[k]) if k < len(ta) else float(tb[k])
        return (k, time,
                int(ia[k]) if k < len(ta) else -1,
                int(ib[k]) if k < len(tb) else -1)
    k = int(np.argmin(same))
    return k, float(min(ta[k], tb[k])), int(ia[k]), int(ib[k])


def verify_sample_path_equivalence(policy_a, policy_b,
                                   batch) -> EquivalenceReport:
    """Check that both policies serve the same updates at the same times.

    Replays every trace in the batch (a TraceBatch or a sequence of Trace
    objects) under both policies and compares the
    (time, id, action) sequence of start/resume/deliver events; discard
    instants are projected out.  On equivalence both runs must also agree
    bit-for-bit on the age averages, which is asserted here.
    """
    pa, pb = _as_policy(policy_a), _as_policy(policy_b)
    _require_deterministic(pa, pb)
    count, trace_at = _iter_traces(batch)
    for i in range(count):
        t = trace_at(i)
        ra = run(t, pa)
        rb = run(t, pb)
        mism = _first_mismatch(*ra.decision_log.served_projection(),
                               *rb.decision_log.served_projection())
        if mism is not None:
            k, time, ida, idb = mism
            return EquivalenceReport(pa.name, pb.name, i + 1,
                                     Divergence(t.seed, k, time, ida, idb))
        assert ra.avg_aoi == rb.avg_aoi and ra.avg_paoi == rb.avg_paoi
    return EquivalenceReport(pa.name, pb.name, count, None)


def verify_trajectory_identity(policy_a, policy_b, batch,
                               compare: str = "deliveries") -> EquivalenceReport:
    """Check matching age trajectories (or full decision agreement).

    ``compare="deliveries"`` matches the informative delivery logs only, so
    two policies count as identical when their age processes coincide even
    if one of them additionally serves obsolete updates.
    ``compare="decisions"`` delegates to the stricter sample-path check.
    """
    if compare == "decisions":
        return verify_sample_path_equivalence(policy_a, policy_b, batch)
    if compare != "deliveries":
        raise ValueError(f"unknown comparison {compare!r}")
    pa, pb = _as_policy(policy_a), _as_policy(policy_b)
    _require_deterministic(pa, pb)
    opts = EngineOptions(decision_log=False)
    count, trace_at = _iter_traces(batch)
    for i in range(count):
        t = trace_at(i)
        la = run(t, pa, opts).delivery_log
        lb = run(t, pb, opts).delivery_log
        mism = _first_mismatch(la.d, la.g, np.zeros(len(la.d), dtype=np.int8),
                               lb.d, lb.g, np.zeros(len(lb.d), dtype=np.int8))
        if mism is not None:
            k, time, _, _ = mism
            return EquivalenceReport(pa.name, pb.name, i + 1,
                                     Divergence(t.seed, k, time, -1, -1))
    return EquivalenceReport(pa.name, pb.name, count, None)


@dataclass(frozen=True)
class DominancePoint:
    rho: float
    mean_base: float
    ci_base: float
    mean_informative: float
    ci_informative: float

    @property
    def verdict(self) -> str:
        if self.mean_informative + self.ci_informative <= self.mean_base - self.ci_base:
            return "dominates"
        if self.mean_informative - self.ci_informative > self.mean_base + self.ci_base:
            return "violated"
        return "inconclusive"


@dataclass(frozen=True)
class DominanceReport:
    policy_base: str
    policy_informative: str
    arrival_family: str
    arrival_scv: float
    runs: int
    updates: int
    points: tuple[DominancePoint, ...]

    @property
    def any_violated(self) -> bool:
        return any(p.verdict == "violated" for p in self.points)


def check_dominance(base, informative, rhos, arrival_family: str = "exponential",
                    arrival_scv: float = 1.0,
                    service: DistributionSpec = DistributionSpec("exponential", 1.0),
                    runs: int = 50, updates: int = 10_000,
                    seed: int = 0) -> DominanceReport:
    """Mean-age ordering of an informative variant against its base policy.

    Exponential service only (the claim is about G/M/1); arrivals may use
    any family, with the arrival mean set per grid point so the load is rho.
    Both policies replay the identical trace in every replication.
    """
    pb, pi = _as_policy(base), _as_policy(informative)
    if service.family != "exponential":
        raise ValueError("dominance check is scoped to exponential service")
    opts = EngineOptions(decision_log=False)
    points = []
    for p_idx, rho in enumerate(rhos):
        if not 0.0 < rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {rho}")
        arr = DistributionSpec(arrival_family, service.mean / rho, arrival_scv)
        a_base = np.empty(runs)
        a_inf = np.empty(runs)
        for r in range(runs):
            t = generate_trace(arr, service, updates, derive_seed(seed, p_idx, r))
            a_base[r] = run(t, pb, opts).avg_aoi
            a_inf[r] = run(t, pi, opts).avg_aoi
        sb = aggregate(a_base, "aoi")
        si = aggregate(a_inf, "aoi")
        points.append(DominancePoint(rho, sb.mean, sb.ci_halfwidth,
                                     si.mean, si.ci_halfwidth))
    return DominanceReport(pb.name, pi.name, arrival_family, arrival_scv,
                           runs, updates, tuple(points))

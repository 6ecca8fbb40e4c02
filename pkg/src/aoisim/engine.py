"""Replay a trace under one policy: event loop, logs, and run averages.

The inner loop lives in a kernel module.  At import time the compiled
Cython kernel (aoisim._kernel_cy) is preferred; the pure-Python twin
(aoisim._kernel_py) is the fallback and the reference.  Both implement the
same algorithm and produce bit-identical results; set AOISIM_PURE_PYTHON=1
or pass ``backend="python"`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernel_py
from ._codes import (ACTION_NAME, BASE_CODE, DELIVER, DELIVERED, DISCARDED,
                     RESUME, START)
from .metrics import DeliveryLog, average_aoi, average_paoi
from .policies import PolicyId, parse_policy
from .trace import Trace, decision_rng

try:
    from . import _kernel_cy
except ImportError:
    _kernel_cy = None

if _kernel_cy is not None and not os.environ.get("AOISIM_PURE_PYTHON"):
    DEFAULT_BACKEND = "cython"
else:
    DEFAULT_BACKEND = "python"


def get_kernel(backend: Optional[str] = None):
    """Resolve a kernel module by name ("cython" | "python" | None=default)."""
    name = backend or DEFAULT_BACKEND
    if name == "python":
        return _kernel_py
    if name == "cython":
        if _kernel_cy is None:
            raise RuntimeError("compiled kernel is not available; "
                               "build with `python setup.py build_ext --inplace`")
        return _kernel_cy
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class EngineOptions:
    """Engine knobs: informative mode (also implied by the policy name),
    whether to record the decision log, and which kernel to use."""

    informative: bool = False
    decision_log: bool = True
    backend: Optional[str] = None


@dataclass(frozen=True, eq=False)
class DecisionLog:
    """Scheduler actions in event order: (time, update id, action)."""

    t: np.ndarray
    ids: np.ndarray
    actions: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def entries(self):
        for k in range(len(self.t)):
            yield float(self.t[k]), int(self.ids[k]), ACTION_NAME[self.actions[k]]

    def served_projection(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(time, id, action) restricted to start/resume/deliver events.

        This is the comparison surface for sample-path equivalence checks;
        discard bookkeeping instants are projected out.
        """
        mask = ((self.actions == START) | (self.actions == RESUME)
                | (self.actions == DELIVER))
        return self.t[mask], self.ids[mask], self.actions[mask]


@dataclass(frozen=True, eq=False)
class RunResult:
    """Outcome of one replay: run averages plus the full logs.

    ``avg_aoi``/``avg_paoi`` are computed over the informative delivery log;
    ``avg_delay`` averages over delivered (never discarded) updates.
    ``horizon`` is the time of the last delivery of any kind.
    """

    policy: PolicyId
    avg_aoi: float
    avg_paoi: float
    avg_delay: float
    delivery_log: DeliveryLog
    decision_log: Optional[DecisionLog]
    horizon: float
    n_delivered: int
    n_discarded: int
    deliver_times: np.ndarray = field(repr=False)
    first_starts: np.ndarray = field(repr=False)
    statuses: np.ndarray = field(repr=False)


def _package(trace: Trace, policy: PolicyId, raw, with_decisions: bool) -> RunResult:
    (deliver_time, first_start, status, log_d, log_g,
     dec_t, dec_id, dec_act, horizon) = raw
    dlog = DeliveryLog(np.concatenate(([0.0], log_d)),
                       np.concatenate(([0.0], log_g)))
    delivered = status == DELIVERED
    n_delivered = int(np.sum(delivered))
    n_discarded = int(np.sum(status == DISCARDED))
    delays = deliver_time[delivered] - trace.arrivals[delivered]
    decision_log = (DecisionLog(dec_t, dec_id, dec_act)
                    if with_decisions else None)
    return RunResult(
        policy=policy,
        avg_aoi=average_aoi(dlog, float(dlog.d[-1])),
        avg_paoi=average_paoi(dlog),
        avg_delay=float(np.mean(delays)),
        delivery_log=dlog,
        decision_log=decision_log,
        horizon=horizon,
        n_delivered=n_delivered,
        n_discarded=n_discarded,
        deliver_times=deliver_time,
        first_starts=first_start,
        statuses=status,
    )


def run(trace: Trace, policy: PolicyId | str,
        opts: EngineOptions = EngineOptions()) -> RunResult:
    """Replay ``trace`` under ``policy`` (anything except processor sharing).

    Deterministic: the same (trace, policy, options) always produces a
    bit-identical result, on either kernel backend.
    """
    if isinstance(policy, str):
        policy = parse_policy(policy)
    if policy.base == "ps":
        raise ValueError("processor sharing is replayed by run_ps")
    if trace.n == 0:
        raise ValueError("empty trace")
    informative = policy.informative or opts.informative
    rng = decision_rng(trace.seed) if policy.base == "random" else None
    kernel = get_kernel(opts.backend)
    raw = kernel.simulate(
        np.ascontiguousarray(trace.arrivals, dtype=np.float64),
        np.ascontiguousarray(trace.sizes, dtype=np.float64),
        BASE_CODE[policy.base], policy.preemptive_aoi, informative, rng,
        opts.decision_log,
    )
    return _package(trace, policy, raw, opts.decision_log)


def run_ps(trace: Trace, opts: EngineOptions = EngineOptions()) -> RunResult:
    """Replay ``trace`` under processor sharing (equal simultaneous service)."""
    if trace.n == 0:
        raise ValueError("empty trace")
    kernel = get_kernel(opts.backend)
    raw = kernel.simulate_ps(
        np.ascontiguousarray(trace.arrivals, dtype=np.float64),
        np.ascontiguousarray(trace.sizes, dtype=np.float64),
        opts.decision_log,
    )
    return _package(trace, PolicyId("ps"), raw, opts.decision_log)


def run_policy(trace: Trace, policy: PolicyId | str,
               opts: EngineOptions = EngineOptions()) -> RunResult:
    """Dispatch to run or run_ps based on the policy."""
    if isinstance(policy, str):
        policy = parse_policy(policy)
    if policy.base == "ps":
        return run_ps(trace, opts)
    return run(trace, policy, opts)

"""Scheduling policies as pure decision functions.

Every policy is two functions over a read-only queue view:

* :func:`select_next` - which waiting update to serve when the server frees
  up (returns ``None`` if nothing is eligible);
* :func:`should_preempt` - whether a just-arrived update preempts the one in
  service.

The event loop queries these at completion/idle and arrival instants; the
functions themselves never mutate state.  The engine kernels reimplement the
same rules with efficient structures, and the test suite checks both routes
decide identically.

Tie-breaking everywhere: the smallest key wins, ties broken by earliest
arrival, then by update id.  Preemption predicates use strict inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

# Bases whose select/preempt keys are AoI-driven (support the _p flag).
AOI_BASES = ("ade", "ads", "adm")
BASES = ("fcfs", "lcfs", "random", "sjf", "ps", "lcfs_p", "sjf_p", "srpt") + AOI_BASES

# Bases that preempt on (some) arrivals.
PREEMPTIVE_BASES = ("lcfs_p", "sjf_p", "srpt")


class PolicyError(ValueError):
    """Invalid policy name or flag combination."""


@dataclass(frozen=True)
class PolicyId:
    """A policy: base discipline plus preemption/informative flags.

    ``preemptive_aoi`` is only meaningful for the AoI-driven bases (ade, ads,
    adm); ``informative`` marks the variant that discards updates which can
    no longer reduce the age once delivered.
    """

    base: str
    preemptive_aoi: bool = False
    informative: bool = False

    def __post_init__(self):
        if self.base not in BASES:
            raise PolicyError(f"unknown policy base {self.base!r}")
        if self.preemptive_aoi and self.base not in AOI_BASES:
            raise PolicyError(f"{self.base} does not take the preemptive flag")
        if self.informative and self.base == "ps":
            raise PolicyError("ps has no informative variant")

    @property
    def preemptive(self) -> bool:
        return self.base in PREEMPTIVE_BASES or self.preemptive_aoi

    @property
    def name(self) -> str:
        s = self.base
        if self.preemptive_aoi:
            s += "_p"
        if self.informative:
            s += "i" if s.endswith("_p") else "_i"
        return s

    def __str__(self) -> str:
        return self.name


def parse_policy(name: str) -> PolicyId:
    """Parse a policy name such as ``srpt``, ``ade_pi``, or ``lcfs_pi``.

    Suffix ``_p`` adds AoI-base preemption, ``_i`` the informative variant;
    a trailing ``i`` after ``_p`` combines both (``sjf_pi``, ``adm_pi``).
    """
    s = name.strip().lower()
    if s in BASES:
        return PolicyId(s)
    if s.endswith("_i") and s[:-2] in BASES:
        return PolicyId(s[:-2], informative=True)
    if s.endswith("_pi"):
        head = s[:-1]  # e.g. lcfs_pi -> lcfs_p, ade_pi -> ade_p
        if head in BASES:
            return PolicyId(head, informative=True)
        if head[:-2] in AOI_BASES:
            return PolicyId(head[:-2], preemptive_aoi=True, informative=True)
    if s.endswith("_p") and s[:-2] in AOI_BASES:
        return PolicyId(s[:-2], preemptive_aoi=True)
    raise PolicyError(f"unknown policy name {name!r}")


def informative_twin(policy: PolicyId | str) -> PolicyId:
    """The informative variant of a policy (e.g. srpt -> srpt_i)."""
    p = parse_policy(policy) if isinstance(policy, str) else policy
    return PolicyId(p.base, p.preemptive_aoi, informative=True)


@dataclass(frozen=True)
class WaitingUpdate:
    """One update visible to the scheduler: id, generation time, size, remaining."""

    id: int
    gen_time: float
    size: float
    remaining: float


@dataclass(frozen=True)
class QueueView:
    """Read-only scheduler input at a decision instant.

    ``freshest_delivered`` is the generation time of the freshest update
    delivered so far (U(t)); an update is informative iff its generation time
    exceeds it.  ``rng`` is consulted only by the RANDOM policy.
    """

    now: float
    waiting: tuple[WaitingUpdate, ...]
    in_service: Optional[WaitingUpdate] = None
    freshest_delivered: float = 0.0
    rng: Optional[np.random.Generator] = None


def informative_set(view: QueueView) -> tuple[WaitingUpdate, ...]:
    """Waiting updates whose delivery would drop the age (gen time > U)."""
    u = view.freshest_delivered
    return tuple(w for w in view.waiting if w.gen_time > u)


def _pick(candidates, key) -> int:
    return min(candidates, key=lambda w: (key(w), w.gen_time, w.id)).id


def select_next(policy: PolicyId, view: QueueView) -> Optional[int]:
    """Choose the next update to serve, or ``None`` if nothing is eligible.

    Informative variants consider only the informative set (the engine
    discards the rest).  The AoI-driven bases fall back to smallest size over
    all waiting updates when every waiting update is obsolete.
    """
    base = policy.base
    if base == "ps":
        raise PolicyError("ps is served by the sharing engine, not selection")
    pool = informative_set(view) if policy.informative else view.waiting
    if not pool:
        return None

    if base == "fcfs":
        return _pick(pool, lambda w: w.gen_time)
    if base == "lcfs" or base == "lcfs_p":
        return _pick(pool, lambda w: -w.gen_time)
    if base == "random":
        ordered = sorted(pool, key=lambda w: w.id)
        return ordered[int(view.rng.integers(len(ordered)))].id
    if base == "sjf" or base == "sjf_p":
        return _pick(pool, lambda w: w.size)
    if base == "srpt":
        return _pick(pool, lambda w: w.remaining)

    # AoI-driven bases: key over the informative candidates, smallest size
    # over everything waiting when none are informative.
    inf = pool if policy.informative else informative_set(view)
    if not inf:
        return _pick(pool, lambda w: w.size)
    if base == "ade":
        return _pick(inf, lambda w: w.remaining)
    if base == "ads":
        return _pick(inf, lambda w: w.remaining - w.gen_time)
    return _pick(inf, lambda w: -w.gen_time)  # adm: freshest informative


def should_preempt(policy: PolicyId, view: QueueView, new: WaitingUpdate) -> bool:
    """Does a fresh arrival preempt the update in service?

    The arrival is always the freshest update in the system, so it is always
    informative.  Non-preemptive bases never preempt.
    """
    if policy.base == "ps":
        raise PolicyError("ps is served by the sharing engine, not preemption")
    cur = view.in_service
    if cur is None:
        raise PolicyError("should_preempt requires a busy server")
    base = policy.base
    if base == "lcfs_p":
        return True
    if base == "sjf_p":
        return new.size < cur.size and all(new.size < w.size for w in view.waiting)
    if base == "srpt":
        return new.size < cur.remaining
    if policy.preemptive_aoi:
        if base == "ade":
            return new.size < cur.remaining
        if base == "ads":
            return new.size - new.gen_time < cur.remaining - cur.gen_time
        return True  # adm: the arrival is always the freshest
    return False

"""aoisim: age-of-information scheduling in single-server queues.

Discrete-event replay of a fixed sample path (arrivals + update sizes)
under pluggable scheduling policies, exact age/peak-age metrics, verifiers
for policy-equivalence and dominance claims, and a sweep runner that writes
CSV tables.
"""

from .engine import (DEFAULT_BACKEND, DecisionLog, EngineOptions, RunResult,
                     run, run_policy, run_ps)
from .metrics import (DeliveryLog, SummaryRow, aggregate, average_aoi,
                      average_paoi, window_average_aoi, window_average_paoi)
from .policies import (PolicyId, QueueView, WaitingUpdate, informative_set,
                       parse_policy, select_next, should_preempt)
from .trace import (DistributionSpec, ParamSet, Trace, generate_trace, sample,
                    sample_many, solve_params)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BACKEND", "DecisionLog", "DeliveryLog", "DistributionSpec",
    "EngineOptions", "ParamSet", "PolicyId", "QueueView", "RunResult",
    "SummaryRow", "Trace", "WaitingUpdate", "aggregate", "average_aoi",
    "average_paoi", "generate_trace", "informative_set", "parse_policy",
    "run", "run_policy", "run_ps", "sample", "sample_many", "select_next",
    "should_preempt", "solve_params", "window_average_aoi",
    "window_average_paoi",
]

"""Config-driven sweeps that reproduce the reference tables as CSV.

A sweep varies either the load (rho) or the service-size variability (scv)
and replays every policy on the identical trace per replication (common
random numbers).  The service mean stays fixed (mu = 1 by default) and the
arrival mean is derived per point as service_mean / rho.

Output is one CSV row per (policy, sweep point, metric) with a mean and a
95% confidence halfwidth.  Same config + seed = byte-identical CSV.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import EngineOptions, run_policy
from .metrics import aggregate
from .policies import informative_twin, parse_policy
from .trace import (FAMILIES, DistributionSpec, ParameterizationError,
                    derive_seed, generate_trace)

RHO_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
SCV_GRID = tuple(float(k) for k in range(1, 11))

CSV_COLUMNS = ("policy", "rho", "arrival_family", "arrival_scv",
               "service_family", "service_scv", "metric", "mean",
               "ci_halfwidth", "runs", "updates", "seed")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: policies, distributions, sweep axis, replication counts.

    Exactly one of ``rho_values`` (load sweep) or ``scv_values`` (service
    variability sweep at fixed ``rho``) must be set.
    """

    policies: tuple[str, ...]
    arrival_family: str = "exponential"
    arrival_scv: float = 1.0
    service_family: str = "exponential"
    service_scv: float = 1.0
    service_mean: float = 1.0
    rho_values: Optional[tuple[float, ...]] = None
    scv_values: Optional[tuple[float, ...]] = None
    rho: Optional[float] = None
    runs: int = 50
    updates: int = 100_000
    seed: int = 1

    def __post_init__(self):
        if not self.policies:
            raise ConfigError("no policies given")
        for p in self.policies:
            parse_policy(p)  # raises PolicyError on bad names
        if self.arrival_family not in FAMILIES or self.service_family not in FAMILIES:
            raise ConfigError("unknown distribution family")
        if (self.rho_values is None) == (self.scv_values is None):
            raise ConfigError("exactly one sweep axis: rho_values or scv_values")
        if self.scv_values is not None and self.rho is None:
            raise ConfigError("scv sweep needs a fixed rho")
        loads = self.rho_values if self.rho_values is not None else (self.rho,)
        if len(loads) == 0 or len(self.sweep_values) == 0:
            raise ConfigError("empty sweep")
        for r in loads:
            if not 0.0 < r < 1.0:
                raise ConfigError(f"rho must be in (0, 1), got {r}")
        if self.runs < 1 or self.updates < 1:
            raise ConfigError("runs and updates must be positive")
        try:
            for k in range(len(self.sweep_values)):
                self.point(k)
        except ParameterizationError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def sweep_axis(self) -> str:
        return "rho" if self.rho_values is not None else "scv"

    @property
    def sweep_values(self) -> tuple[float, ...]:
        return self.rho_values if self.rho_values is not None else self.scv_values

    def point(self, k: int) -> tuple[float, DistributionSpec, DistributionSpec]:
        """(rho, arrival spec, service spec) at sweep index k."""
        if self.sweep_axis == "rho":
            rho = self.rho_values[k]
            svc_scv = self.service_scv
        else:
            rho = self.rho
            svc_scv = self.scv_values[k]
        arrival = DistributionSpec(self.arrival_family, self.service_mean / rho,
                                   self.arrival_scv)
        service = DistributionSpec(self.service_family, self.service_mean, svc_scv)
        return rho, arrival, service

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        """Load the documented JSON schema (see README for the key list)."""
        try:
            with open(path) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = {"policies", "arrival", "service", "sweep",
                 "runs", "updates", "seed", "out"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = {}
        kw["policies"] = tuple(doc.get("policies", ()))
        arr = doc.get("arrival", {})
        kw["arrival_family"] = arr.get("family", "exponential")
        kw["arrival_scv"] = float(arr.get("scv", 1.0))
        svc = doc.get("service", {})
        kw["service_family"] = svc.get("family", "exponential")
        kw["service_scv"] = float(svc.get("scv", 1.0))
        kw["service_mean"] = float(svc.get("mean", 1.0))
        sweep = doc.get("sweep", {})
        if "rho" in sweep and isinstance(sweep["rho"], list):
            kw["rho_values"] = tuple(float(x) for x in sweep["rho"])
        elif "scv" in sweep:
            kw["scv_values"] = tuple(float(x) for x in sweep["scv"])
            kw["rho"] = float(sweep.get("rho", 0.7))
        for key in ("runs", "updates", "seed"):
            if key in doc:
                kw[key] = int(doc[key])
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class ResultRow:
    policy: str
    rho: float
    arrival_family: str
    arrival_scv: float
    service_family: str
    service_scv: float
    metric: str
    mean: float
    ci_halfwidth: float
    runs: int
    updates: int
    seed: int
    trace_hash: str = ""


METRICS = ("aoi", "paoi", "delay")


def _replicate(args):
    """Worker task: one (point, replication) - every policy on one trace."""
    config, k, r, want_hash = args
    rho, arrival, service = config.point(k)
    trace = generate_trace(arrival, service, config.updates,
                           derive_seed(config.seed, k, r))
    opts = EngineOptions(decision_log=False)
    out = {}
    for name in config.policies:
        res = run_policy(trace, name, opts)
        out[name] = (res.avg_aoi, res.avg_paoi, res.avg_delay)
    digest = ""
    if want_hash:
        h = hashlib.sha256()
        h.update(trace.arrivals.tobytes())
        h.update(trace.sizes.tobytes())
        digest = h.hexdigest()
    return k, r, out, digest


def collect_samples(config: ExperimentConfig, workers: int = 1,
                    want_hash: bool = False):
    """Per-policy per-point replication averages (and optional trace hashes).

    Returns (samples, hashes): samples[policy][metric] is an array of shape
    (points, runs); hashes[k] fingerprints the common trace set at point k.
    """
    npoints = len(config.sweep_values)
    tasks = [(config, k, r, want_hash)
             for k in range(npoints) for r in range(config.runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate, tasks, chunksize=4))
    else:
        results = [_replicate(t) for t in tasks]
    results.sort(key=lambda x: (x[0], x[1]))
    samples = {name: {m: np.empty((npoints, config.runs)) for m in METRICS}
               for name in config.policies}
    digests: list[list[str]] = [[] for _ in range(npoints)]
    for k, r, out, digest in results:
        for name, vals in out.items():
            for m, v in zip(METRICS, vals):
                samples[name][m][k, r] = v
        digests[k].append(digest)
    hashes = []
    for k in range(npoints):
        if want_hash:
            h = hashlib.sha256("".join(digests[k]).encode())
            hashes.append(h.hexdigest()[:16])
        else:
            hashes.append("")
    return samples, hashes


def _point_fields(config: ExperimentConfig, k: int):
    rho, arrival, service = config.point(k)
    return dict(rho=rho, arrival_family=arrival.family, arrival_scv=arrival.scv,
                service_family=service.family, service_scv=service.scv,
                runs=config.runs, updates=config.updates, seed=config.seed)


def run_experiment(config: ExperimentConfig, workers: int = 1,
                   metrics: tuple[str, ...] = METRICS,
                   verbose: bool = False) -> list[ResultRow]:
    """Run the sweep and summarize into rows, sorted by (policy, point, metric)."""
    samples, hashes = collect_samples(config, workers, want_hash=verbose)
    rows = []
    for name in config.policies:
        for k in range(len(config.sweep_values)):
            for metric in metrics:
                summ = aggregate(samples[name][metric][k], metric)
                rows.append(ResultRow(policy=name, metric=metric,
                                      mean=summ.mean,
                                      ci_halfwidth=summ.ci_halfwidth,
                                      trace_hash=hashes[k],
                                      **_point_fields(config, k)))
    rows.sort(key=lambda r: (r.policy, r.rho, r.service_scv, r.metric))
    return rows


def write_csv(rows: list[ResultRow], path: str, verbose: bool = False):
    """Write rows with the documented header; '.' decimals, no locale."""
    columns = CSV_COLUMNS + (("trace_hash",) if verbose else ())
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([getattr(r, c) for c in columns])


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------

COMMON8 = ("fcfs", "random", "lcfs", "sjf", "ps", "lcfs_p", "srpt", "sjf_p")
AOI_BASED = ("lcfs", "sjf", "ade", "ads", "adm")
GAIN_BASES = ("random", "lcfs", "sjf", "sjf_p", "srpt")


@dataclass(frozen=True)
class FigurePreset:
    """One reproducible figure panel: policies, distributions, sweep, metric."""

    figure: str
    policies: tuple[str, ...]
    metric: str  # aoi | paoi; gain figures add derived gain rows
    arrival_family: str = "exponential"
    arrival_scv: float = 1.0
    service_family: str = "exponential"
    service_scv: float = 1.0
    sweep: str = "rho"  # rho | scv
    rho: float = 0.7  # fixed load for scv sweeps
    gain: bool = False
    note: str = ""

    def config(self, runs: int, updates: int, seed: int) -> ExperimentConfig:
        policies = self.policies
        if self.gain:
            policies = self.policies + tuple(informative_twin(p).name
                                             for p in self.policies)
        kw = dict(policies=policies,
                  arrival_family=self.arrival_family, arrival_scv=self.arrival_scv,
                  service_family=self.service_family, service_scv=self.service_scv,
                  runs=runs, updates=updates, seed=seed)
        if self.sweep == "rho":
            return ExperimentConfig(rho_values=RHO_GRID, **kw)
        return ExperimentConfig(scv_values=SCV_GRID, rho=self.rho, **kw)


def _panel_presets(fig: str, policies, metric, gain=False) -> dict[str, FigurePreset]:
    """The (a)/(b)/(c) panel family: M arrivals; exp, Weibull, Weibull-sweep sizes."""
    return {
        f"{fig}a": FigurePreset(f"{fig}a", policies, metric, gain=gain),
        f"{fig}b": FigurePreset(f"{fig}b", policies, metric, gain=gain,
                                service_family="weibull", service_scv=10.0),
        f"{fig}c": FigurePreset(f"{fig}c", policies, metric, gain=gain,
                                service_family="weibull", sweep="scv", rho=0.7),
    }


def _gg1_presets(fig: str, policies, metric, gain=False) -> dict[str, FigurePreset]:
    """The G/G/1 panel family (a)-(f): Weibull arrivals, then matched pairs."""
    unstated = "arrival/service scv not stated for this setting; default 10"
    out = {
        f"{fig}a": FigurePreset(f"{fig}a", policies, metric, gain=gain,
                                arrival_family="weibull", arrival_scv=10.0),
        f"{fig}b": FigurePreset(f"{fig}b", policies, metric, gain=gain,
                                arrival_family="weibull", arrival_scv=10.0,
                                service_family="weibull", service_scv=10.0),
        f"{fig}c": FigurePreset(f"{fig}c", policies, metric, gain=gain,
                                arrival_family="weibull", arrival_scv=10.0,
                                service_family="weibull", sweep="scv", rho=0.7),
    }
    for letter, fam in zip("def", ("gamma", "lognormal", "pareto")):
        out[f"{fig}{letter}"] = FigurePreset(
            f"{fig}{letter}", policies, metric, gain=gain,
            arrival_family=fam, arrival_scv=10.0,
            service_family=fam, service_scv=10.0, note=unstated)
    return out


PRESETS: dict[str, FigurePreset] = {}
PRESETS.update(_panel_presets("3", COMMON8, "aoi"))
PRESETS.update(_panel_presets("4", COMMON8, "paoi"))
PRESETS.update(_panel_presets("9", GAIN_BASES, "aoi", gain=True))
PRESETS.update(_panel_presets("10", GAIN_BASES, "paoi", gain=True))
PRESETS.update(_panel_presets("11", AOI_BASED, "aoi"))
PRESETS.update(_panel_presets("12", AOI_BASED, "paoi"))
PRESETS.update(_gg1_presets("a10", COMMON8, "aoi"))
PRESETS.update(_gg1_presets("a11", COMMON8, "paoi"))
PRESETS.update(_gg1_presets("a12", AOI_BASED, "aoi"))
PRESETS.update(_gg1_presets("a13", AOI_BASED, "paoi"))
PRESETS.update(_gg1_presets("a14", GAIN_BASES, "aoi", gain=True))
PRESETS.update(_gg1_presets("a15", GAIN_BASES, "paoi", gain=True))


class UnknownFigureError(ValueError):
    def __init__(self, figure_id: str):
        ids = ", ".join(sorted(PRESETS))
        super().__init__(f"unknown figure id {figure_id!r}; valid ids: {ids}")


def reproduce(figure_id: str, out_dir: str, fast: bool = False,
              workers: int = 1, seed: int = 1, verbose: bool = False,
              runs: Optional[int] = None, updates: Optional[int] = None) -> str:
    """Write the CSV for one figure panel; returns the file path.

    The full profile is 50 runs x 1e5 updates; ``fast`` drops to 10 runs
    (expect roughly 3% spread instead of 1%).  ``runs``/``updates`` override
    both profiles.  Gain panels add rows with metric ``gain``: the
    per-replication relative age reduction (base - informative) / base,
    aggregated like any other metric.
    """
    if figure_id not in PRESETS:
        raise UnknownFigureError(figure_id)
    preset = PRESETS[figure_id]
    runs = runs if runs is not None else (10 if fast else 50)
    config = preset.config(runs=runs, updates=updates or 100_000, seed=seed)
    samples, hashes = collect_samples(config, workers, want_hash=verbose)
    rows = []
    npoints = len(config.sweep_values)
    for name in config.policies:
        for k in range(npoints):
            summ = aggregate(samples[name][preset.metric][k], preset.metric)
            rows.append(ResultRow(policy=name, metric=preset.metric,
                                  mean=summ.mean, ci_halfwidth=summ.ci_halfwidth,
                                  trace_hash=hashes[k],
                                  **_point_fields(config, k)))
    if preset.gain:
        for name in preset.policies:
            informative = informative_twin(name).name
            for k in range(npoints):
                base_s = samples[name][preset.metric][k]
                inf_s = samples[informative][preset.metric][k]
                summ = aggregate((base_s - inf_s) / base_s, "gain")
                rows.append(ResultRow(policy=name, metric="gain",
                                      mean=summ.mean, ci_halfwidth=summ.ci_halfwidth,
                                      trace_hash=hashes[k],
                                      **_point_fields(config, k)))
    rows.sort(key=lambda r: (r.policy, r.rho, r.service_scv, r.metric))
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"fig_{figure_id}.csv")
    write_csv(rows, path, verbose=verbose)
    return path

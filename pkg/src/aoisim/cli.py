"""Command-line interface: simulate, reproduce, verify.

Exit codes: 0 success, 1 configuration/usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .equivalence import TraceBatch, check_dominance, verify_sample_path_equivalence
from .experiments import (ExperimentConfig, PRESETS, UnknownFigureError,
                          reproduce, run_experiment, write_csv)
from .policies import PolicyError
from .trace import DistributionSpec, ParameterizationError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aoisim",
                                 description="Age-of-information queue simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one policy at one sweep point")
    sim.add_argument("--config", help="JSON experiment config (overrides the flags)")
    sim.add_argument("--policy", default="fcfs")
    sim.add_argument("--arrival", default="exponential", metavar="FAM")
    sim.add_argument("--arrival-scv", type=float, default=1.0)
    sim.add_argument("--service", default="exponential", metavar="FAM")
    sim.add_argument("--scv", type=float, default=1.0, help="service scv")
    sim.add_argument("--rho", type=float, default=0.5)
    sim.add_argument("--updates", type=int, default=100_000)
    sim.add_argument("--runs", type=int, default=50)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--verbose", action="store_true",
                     help="add the common-trace hash column")
    sim.add_argument("--out", default="results.csv", metavar="F.csv")

    rep = sub.add_parser("reproduce", help="reproduce a figure panel as CSV")
    rep.add_argument("--figure", required=True, metavar="ID")
    rep.add_argument("--out", default=".", metavar="DIR")
    rep.add_argument("--fast", action="store_true",
                     help="10 runs instead of 50 (about 3%% spread)")
    rep.add_argument("--seed", type=int, default=1)
    rep.add_argument("--workers", type=int, default=1)
    rep.add_argument("--verbose", action="store_true")

    ver = sub.add_parser("verify", help="check an equivalence/dominance claim")
    ver.add_argument("--proposition", required=True, type=int, choices=(1, 2, 3))
    ver.add_argument("--traces", type=int, default=1008,
                     help="total traces for propositions 2/3")
    ver.add_argument("--updates", type=int, default=None)
    ver.add_argument("--rho", type=float, default=None,
                     help="restrict the load grid to one value")
    ver.add_argument("--runs", type=int, default=50,
                     help="replications per point for proposition 1")
    ver.add_argument("--seed", type=int, default=0)
    return ap


def _cmd_simulate(ns) -> int:
    if ns.config:
        config = ExperimentConfig.from_json(ns.config)
    else:
        config = ExperimentConfig(
            policies=(ns.policy,),
            arrival_family=ns.arrival, arrival_scv=ns.arrival_scv,
            service_family=ns.service, service_scv=ns.scv,
            rho_values=(ns.rho,), runs=ns.runs, updates=ns.updates,
            seed=ns.seed)
    rows = run_experiment(config, workers=ns.workers, verbose=ns.verbose)
    write_csv(rows, ns.out, verbose=ns.verbose)
    print(f"wrote {len(rows)} rows to {ns.out}")
    return EXIT_OK


def _cmd_reproduce(ns) -> int:
    path = reproduce(ns.figure, ns.out, fast=ns.fast, workers=ns.workers,
                     seed=ns.seed, verbose=ns.verbose)
    preset = PRESETS[ns.figure]
    if preset.note:
        print(f"note: {preset.note}")
    print(f"wrote {path}")
    return EXIT_OK


# service families for the equivalence checks; arrival families for dominance
VARIANT_FAMILIES = (("exponential", 1.0), ("weibull", 10.0))
EQUIVALENCE_RHOS = (0.3, 0.7, 0.9)
DOMINANCE_RHOS = (0.5, 0.7, 0.9)


def _cmd_verify(ns) -> int:
    if ns.proposition == 1:
        rhos = (ns.rho,) if ns.rho else DOMINANCE_RHOS
        updates = ns.updates or 10_000
        failed = False
        for fam, scv in VARIANT_FAMILIES:
            report = check_dominance("lcfs", "lcfs_i", rhos,
                                     arrival_family=fam, arrival_scv=scv,
                                     runs=ns.runs, updates=updates, seed=ns.seed)
            for pt in report.points:
                print(f"arrival={fam}(scv={scv}) rho={pt.rho}: "
                      f"lcfs={pt.mean_base:.4f}±{pt.ci_base:.4f} "
                      f"lcfs_i={pt.mean_informative:.4f}±{pt.ci_informative:.4f} "
                      f"-> {pt.verdict}")
                failed |= pt.verdict == "violated"
        return EXIT_VERIFY if failed else EXIT_OK

    pair = ("ade_pi", "srpt_i") if ns.proposition == 2 else ("ade_i", "sjf_i")
    rhos = (ns.rho,) if ns.rho else EQUIVALENCE_RHOS
    updates = ns.updates or 1000
    settings = [(fam, scv, rho) for fam, scv in VARIANT_FAMILIES for rho in rhos]
    per_setting = max(1, ns.traces // len(settings))
    checked = 0
    for i, (fam, scv, rho) in enumerate(settings):
        batch = TraceBatch(
            count=per_setting, updates=updates,
            arrival=DistributionSpec("exponential", 1.0 / rho),
            service=DistributionSpec(fam, 1.0, scv),
            seed=ns.seed + i)
        report = verify_sample_path_equivalence(pair[0], pair[1], batch)
        checked += report.traces_checked
        if not report.equivalent:
            d = report.first_divergence
            print(f"DIVERGED ({pair[0]} vs {pair[1]}): seed={d.trace_seed} "
                  f"time={d.time:.6f} idA={d.id_a} idB={d.id_b}")
            return EXIT_VERIFY
    print(f"equivalent ({pair[0]} vs {pair[1]}): {checked} traces, 0 divergences")
    return EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the config exit code
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if ns.command == "simulate":
            return _cmd_simulate(ns)
        if ns.command == "reproduce":
            return _cmd_reproduce(ns)
        return _cmd_verify(ns)
    except (PolicyError, ParameterizationError, UnknownFigureError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion with the measured values and runtime.  The whole suite is
headless and deterministic (fixed seeds throughout).
"""

import time

import numpy as np
import pytest

from aoisim import (DistributionSpec, EngineOptions, Trace, aggregate,
                    generate_trace, run, run_ps, solve_params,
                    window_average_aoi, window_average_paoi)
from aoisim.equivalence import (TraceBatch, check_dominance,
                                verify_sample_path_equivalence,
                                verify_trajectory_identity)
from aoisim.experiments import ExperimentConfig, collect_samples, write_csv
from aoisim.metrics import DeliveryLog, average_aoi
from aoisim.trace import derive_seed
from test_metrics import numeric_average_aoi, random_log

WORKERS = 2
OPTS = EngineOptions(decision_log=False)


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def report(name, detail, watch):
    print(f"PASS {name}: {detail} [{watch.seconds:.3f}s]")


def mm1_average(policy, rho, runs, updates, seed, metric="aoi",
                arrival_family="exponential", arrival_scv=1.0):
    arr = DistributionSpec(arrival_family, 1.0 / rho, arrival_scv)
    svc = DistributionSpec("exponential", 1.0)
    vals = []
    for r in range(runs):
        t = generate_trace(arr, svc, updates, derive_seed(seed, 0, r))
        res = run(t, policy, OPTS)
        vals.append(res.avg_aoi if metric == "aoi" else res.avg_paoi)
    return aggregate(vals, metric)


def test_c01_burst_window_worked_example():
    # Four unit updates, 30-long gap then a burst; the spec values are exact.
    with Stopwatch() as w:
        t = Trace(np.array([1.0, 31.0, 32.0, 33.0]), np.full(4, 1.0), seed=0)
        r = run(t, "fcfs")
        aoi = window_average_aoi(r.delivery_log, 2.0, 34.0)
        paoi = window_average_paoi(r.delivery_log, 2.0, 34.0)
    assert aoi == pytest.approx(966.0 / 64.0, rel=1e-9)
    assert paoi == pytest.approx(35.0 / 3.0, rel=1e-9)
    report("C1 burst-window example",
           f"window AoI={aoi:.6f} (966/64), PAoI={paoi:.6f} (35/3)", w)


def cyclic_log(n, cycles=3):
    """The big-update/small-updates sawtooth: per cycle of length 2n-1, one
    ramp from age 1 to n and n ramps from 1 to 2 (every delivery lands one
    time unit after its generation)."""
    L = 2 * n - 1
    d = [c * L + o for c in range(cycles) for o in range(n - 1, 2 * n)]
    d = np.asarray(d, float)
    return DeliveryLog(np.concatenate(([0.0], d)),
                       np.concatenate(([0.0], d - 1.0)))


@pytest.mark.parametrize("n", [3, 10])
def test_c02_cyclic_pattern_formulas(n):
    with Stopwatch() as w:
        log = cyclic_log(n)
        L = 2 * n - 1
        t0 = float(L + n - 1)  # middle cycle, delivery-aligned
        aoi = window_average_aoi(log, t0, t0 + L)
        paoi = window_average_paoi(log, t0, t0 + L)
    want_aoi = (n * n + 3 * n - 1) / (4 * n - 2)
    want_paoi = 3 * n / (n + 1)
    assert aoi == pytest.approx(want_aoi, rel=1e-9)
    assert paoi == pytest.approx(want_paoi, rel=1e-9)
    report(f"C2 cyclic pattern n={n}",
           f"cycle AoI={aoi:.6f} ({want_aoi:.6f}), "
           f"PAoI={paoi:.6f} ({want_paoi:.6f})", w)


def test_c03_mm1_analytic_oracles():
    # Closed-form M/M/1 values, independent of any simulated table.
    with Stopwatch() as w:
        checks = []
        s = mm1_average("fcfs", 0.5, 10, 100_000, seed=101)
        expect = 1.0 + 1.0 / 0.5 + 0.5 ** 2 / (1 - 0.5)  # 3.5
        checks.append(("fcfs aoi rho=0.5", s.mean, expect))
        for rho in (0.2, 0.5, 0.9):
            s = mm1_average("lcfs_p", rho, 10, 100_000, seed=102)
            checks.append((f"lcfs_p aoi rho={rho}", s.mean, 1.0 / rho + 1.0))
        s = mm1_average("fcfs", 0.5, 10, 100_000, seed=103, metric="paoi")
        checks.append(("fcfs paoi rho=0.5", s.mean, 1.0 / 0.5 + 1.0 / 0.5))
    for name, got, expect in checks:
        assert got == pytest.approx(expect, rel=0.02), name
    detail = "; ".join(f"{n}: {g:.3f}~{e:.3f}" for n, g, e in checks)
    report("C3 M/M/1 analytic oracles", detail, w)


TABLE_RHO09 = {  # reference means and 95% halfwidths at rho = 0.9
    "fcfs": (10.12, 0.24), "random": (4.65, 0.04), "lcfs": (2.91, 0.01),
    "sjf": (2.80, 0.01), "ps": (4.05, 0.04), "lcfs_p": (2.11, 0.01),
    "srpt": (1.93, 0.01), "sjf_p": (1.90, 0.01),
}


def _table_row(runs, seed):
    cfg = ExperimentConfig(policies=tuple(TABLE_RHO09), rho_values=(0.9,),
                           runs=runs, updates=100_000, seed=seed)
    samples, _ = collect_samples(cfg, workers=WORKERS)
    return {p: aggregate(samples[p]["aoi"][0], "aoi") for p in TABLE_RHO09}


def test_c04_table_row_fast_profile():
    with Stopwatch() as w:
        got = _table_row(runs=10, seed=2024)
    for policy, (mean, _) in TABLE_RHO09.items():
        assert got[policy].mean == pytest.approx(mean, rel=0.03), policy
    detail = ", ".join(f"{p}={got[p].mean:.2f}~{m}"
                       for p, (m, _) in TABLE_RHO09.items())
    report("C4a table row rho=0.9 (fast, 3%)", detail, w)


def test_c04_table_row_full_profile():
    with Stopwatch() as w:
        got = _table_row(runs=50, seed=2024)
    for policy, (mean, hw) in TABLE_RHO09.items():
        s = got[policy]
        assert abs(s.mean - mean) <= s.ci_halfwidth + hw, \
            f"{policy}: {s.mean}±{s.ci_halfwidth} vs {mean}±{hw}"
    detail = ", ".join(f"{p}={got[p].mean:.2f}±{got[p].ci_halfwidth:.2f}"
                       for p in TABLE_RHO09)
    report("C4b table row rho=0.9 (full, CI overlap)", detail, w)


# Poisson arrivals with exponential or heavy-tailed Weibull service.
TABLE_4A_RHO05 = {  # peak-age panel at rho = 0.5, reference means
    "fcfs": 4.00, "random": 3.76, "lcfs": 3.67, "sjf": 3.58,
    "ps": 3.76, "lcfs_p": 3.67, "srpt": 3.32, "sjf_p": 3.39,
}


def test_c04_peak_age_row_fast_profile():
    # Bonus check: the peak-age metric across every policy, fast profile.
    with Stopwatch() as w:
        cfg = ExperimentConfig(policies=tuple(TABLE_4A_RHO05),
                               rho_values=(0.5,), runs=10, updates=100_000,
                               seed=41)
        samples, _ = collect_samples(cfg, workers=WORKERS)
    details = []
    for policy, mean in TABLE_4A_RHO05.items():
        s = aggregate(samples[policy]["paoi"][0], "paoi")
        assert s.mean == pytest.approx(mean, rel=0.02), policy
        details.append(f"{policy}={s.mean:.2f}")
    report("C4d peak-age row rho=0.5 (fast, 2%)", ", ".join(details), w)


TABLE_3B_RHO09 = {  # heavy-tailed service panel, reference means/halfwidths
    "fcfs": (46.96, 2.62), "random": (11.68, 0.22), "lcfs": (6.92, 0.08),
    "sjf": (6.40, 0.08), "ps": (2.06, 0.02), "lcfs_p": (1.54, 0.04),
    "srpt": (1.49, 0.01), "sjf_p": (1.48, 0.01),
}


def test_c04_heavy_tail_row_full_profile():
    # Bonus regression guard beyond the required row: the Weibull scv=10
    # service panel at rho = 0.9, full profile, CI overlap per policy.
    with Stopwatch() as w:
        cfg = ExperimentConfig(policies=tuple(TABLE_3B_RHO09),
                               service_family="weibull", service_scv=10.0,
                               rho_values=(0.9,), runs=50, updates=100_000,
                               seed=31)
        samples, _ = collect_samples(cfg, workers=WORKERS)
    details = []
    for policy, (mean, hw) in TABLE_3B_RHO09.items():
        s = aggregate(samples[policy]["aoi"][0], "aoi")
        assert abs(s.mean - mean) <= s.ci_halfwidth + hw, \
            f"{policy}: {s.mean}±{s.ci_halfwidth} vs {mean}±{hw}"
        details.append(f"{policy}={s.mean:.2f}")
    report("C4c heavy-tail row rho=0.9 (full, CI overlap)",
           ", ".join(details), w)


EQUIV_SETTINGS = [(fam, scv, rho)
                  for fam, scv in (("exponential", 1.0), ("weibull", 10.0))
                  for rho in (0.3, 0.7, 0.9)]


def _equivalence_batchset(seed0):
    per = 168  # 6 settings x 168 = 1008 traces
    for i, (fam, scv, rho) in enumerate(EQUIV_SETTINGS):
        yield TraceBatch(count=per, updates=1000,
                         arrival=DistributionSpec("exponential", 1.0 / rho),
                         service=DistributionSpec(fam, 1.0, scv),
                         seed=seed0 + i)


@pytest.mark.parametrize("pair,tag,seed0", [
    (("ade_pi", "srpt_i"), "C5 preemptive earliest-drop == informative SRPT", 300),
    (("ade_i", "sjf_i"), "C6 earliest-drop == informative SJF", 400),
])
def test_c05_c06_sample_path_equivalence(pair, tag, seed0):
    with Stopwatch() as w:
        total = 0
        for batch in _equivalence_batchset(seed0):
            rep = verify_sample_path_equivalence(pair[0], pair[1], batch)
            assert rep.equivalent, rep.first_divergence
            total += rep.traces_checked
    assert total == 1008
    report(tag, f"{total} traces, 0 divergences", w)


def test_c07_informative_lcfs_dominance():
    with Stopwatch() as w:
        details = []
        for fam, scv in (("exponential", 1.0), ("weibull", 10.0)):
            rep = check_dominance("lcfs", "lcfs_i", (0.5, 0.7, 0.9),
                                  arrival_family=fam, arrival_scv=scv,
                                  runs=50, updates=10_000, seed=500)
            assert not rep.any_violated
            last = rep.points[-1]
            assert last.verdict == "dominates", last
            details.append(f"{fam}: rho=0.9 {last.mean_base:.3f} -> "
                           f"{last.mean_informative:.3f} {last.verdict}")
    report("C7 informative LCFS mean dominance", "; ".join(details), w)


def test_c08_identity_checks():
    with Stopwatch() as w:
        batch = TraceBatch(count=100, updates=2000,
                           arrival=DistributionSpec("exponential", 1.0 / 0.8),
                           service=DistributionSpec("exponential", 1.0),
                           seed=600)
        rep1 = verify_trajectory_identity("fcfs", "fcfs_i", batch,
                                          compare="decisions")
        assert rep1.equivalent
        rep2 = verify_trajectory_identity("lcfs_p", "lcfs_pi", batch)
        assert rep2.equivalent
    report("C8 informative identities",
           "fcfs==fcfs_i (decisions), lcfs_p==lcfs_pi (deliveries), "
           "100 traces each", w)


def test_c09_peak_age_below_age_under_bursty_arrivals():
    # Heavy-tailed interarrivals: the peak average sits clearly below the
    # time average for FCFS.
    with Stopwatch() as w:
        arr = DistributionSpec("weibull", 1.0 / 0.7, 10.0)
        svc = DistributionSpec("exponential", 1.0)
        aoi, paoi = [], []
        for r in range(10):
            t = generate_trace(arr, svc, 100_000, derive_seed(700, 0, r))
            res = run(t, "fcfs", OPTS)
            aoi.append(res.avg_aoi)
            paoi.append(res.avg_paoi)
        sa, sp = aggregate(aoi, "aoi"), aggregate(paoi, "paoi")
    assert sp.mean + sp.ci_halfwidth < sa.mean - sa.ci_halfwidth
    report("C9 bursty-arrival regime",
           f"FCFS PAoI {sp.mean:.2f}±{sp.ci_halfwidth:.2f} < "
           f"AoI {sa.mean:.2f}±{sa.ci_halfwidth:.2f}", w)


def test_c10_property_suites():
    with Stopwatch() as w:
        # distribution moment matching at 1e-9 relative
        for fam in ("weibull", "gamma", "lognormal", "pareto"):
            for scv in (0.5, 1.0, 2.0, 10.0):
                p = solve_params(DistributionSpec(fam, 1.0, scv))
                assert abs(p.analytic_mean() - 1.0) <= 1e-9
                assert abs(p.analytic_var() - scv) <= 1e-9 * scv

        # exact sawtooth integration vs numeric oracle at 1e-6 relative
        rng = np.random.default_rng(800)
        for n in (10, 500):
            log = random_log(rng, n)
            h = float(log.d[-1])
            assert average_aoi(log, h) == pytest.approx(
                numeric_average_aoi(log, h), rel=1e-6)

        # preempt-resume work conservation at 1e-9
        t = generate_trace(DistributionSpec("exponential", 1.0 / 0.9),
                           DistributionSpec("weibull", 1.0, 10.0), 2000, 801)
        for policy in ("srpt", "ade_pi"):
            r = run(t, policy)
            seg, acc = {}, {}
            for time_, uid, action in r.decision_log.entries():
                if action in ("start", "resume"):
                    seg[uid] = time_
                elif action in ("preempt", "deliver"):
                    acc[uid] = acc.get(uid, 0.0) + time_ - seg.pop(uid)
            for uid in range(t.n):
                if r.statuses[uid] == 2:
                    assert abs(acc[uid] - t.sizes[uid]) <= 1e-9

        # processor sharing vs brute-force fluid oracle at 1e-3
        from test_engine import fluid_ps
        tps = generate_trace(DistributionSpec("exponential", 0.8),
                             DistributionSpec("exponential", 0.7), 15, 802)
        np.testing.assert_allclose(run_ps(tps).deliver_times, fluid_ps(tps),
                                   atol=1e-3)

        # end-to-end CSV byte determinism
        cfg = ExperimentConfig(policies=("fcfs", "srpt_i"), rho_values=(0.7,),
                               runs=3, updates=500, seed=803)
        import tempfile
        with tempfile.TemporaryDirectory() as tmp:
            pa, pb = f"{tmp}/a.csv", f"{tmp}/b.csv"
            from aoisim.experiments import run_experiment
            write_csv(run_experiment(cfg), pa)
            write_csv(run_experiment(cfg), pb)
            assert open(pa, "rb").read() == open(pb, "rb").read()
    report("C10 property suites",
           "moments@1e-9, sawtooth@1e-6, work-conservation@1e-9, "
           "ps-fluid@1e-3, csv-bytes", w)

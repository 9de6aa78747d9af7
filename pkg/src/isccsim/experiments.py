"""Experiment drivers: convergence, trade-off frontier, payload and orbit sweeps.

Every run writes a ``manifest.json`` (spec, seed, config hash, scenario hash,
package version) from which an identical re-run reproduces byte-identical
CSV content.  Fixed-objective curves (achievable MI at a delay budget,
achievable delay at an MI floor) are obtained by bisecting the trade-off
weight until the constrained objective lands within 1 % of its target;
targets that no allocation can meet are reported as off-frontier points.

Sweep points run in a process pool when the ISCC_WORKERS environment
variable asks for more than one worker; results are written in sweep order
either way.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .baselines import STRATEGIES, solve_strategy
from .evaluation import ScenarioCache
from .generator import ScenarioParams, generate_scenario
from .model import NetworkScenario, SubframeAllocation
from .optimizer import PsoConfig, pso_optimize
from .scenario_io import load_pso_config, load_scenario, write_trace_csv

EXPERIMENT_KINDS = ("convergence", "pareto", "data-amount", "orbit-altitude",
                    "single-eval")

BISECTION_TOL = 0.01
BISECTION_MAX_ITER = 40


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    out_dir: str
    seed: int = 1
    scenario_path: str | None = None
    generator_overrides: dict = field(default_factory=dict)
    etas: tuple[float, ...] = tuple(round(0.1 * i, 1) for i in range(11))
    strategies: tuple[str, ...] = ("jsatps",)
    sweep: tuple[float, ...] = ()
    delay_target_s: float = 20.0
    mi_target_bits: float = 6.0e7
    fixed_metric: str = "both"              # data-amount: delay | mi | both
    scales: tuple[tuple[int, int], ...] = ((5, 10), (10, 30))
    seeds: tuple[int, ...] = (1, 2, 3)      # convergence repetitions
    eta: float = 0.5                        # convergence / single-eval weight
    strategy: str = "jsatps"                # single-eval
    pso: PsoConfig = PsoConfig()

    def validate(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        for s in self.strategies + (self.strategy,):
            if s not in STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")
        if self.kind in ("data-amount", "orbit-altitude"):
            if self.scenario_path is not None:
                raise ValueError(f"{self.kind} regenerates scenarios per sweep "
                                 "point; pass generator overrides, not a file")
            if not self.sweep:
                raise ValueError(f"{self.kind} requires sweep values")
        if self.kind == "pareto" and not self.etas:
            raise ValueError("pareto requires a list of trade-off weights")
        if self.kind == "convergence" and self.scenario_path is None and not self.scales:
            raise ValueError("convergence requires scales or a scenario file")
        if self.fixed_metric not in ("delay", "mi", "both"):
            raise ValueError("fixed_metric must be delay, mi, or both")


def default_sweep(kind: str) -> tuple[float, ...]:
    if kind == "data-amount":
        return (200.0, 300.0, 400.0, 500.0, 600.0)
    if kind == "orbit-altitude":
        return (1000.0, 4000.0, 8000.0, 10000.0, 36000.0)
    return ()


def _spec_dict(spec: ExperimentSpec) -> dict:
    doc = dataclasses.asdict(spec)
    doc["pso"] = dataclasses.asdict(spec.pso)
    return doc


def _config_hash(spec: ExperimentSpec) -> str:
    blob = json.dumps(_spec_dict(spec), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _scenario_for(spec: ExperimentSpec, **extra_overrides) -> NetworkScenario:
    if spec.scenario_path is not None:
        return load_scenario(spec.scenario_path)
    params = ScenarioParams(**{**spec.generator_overrides, **extra_overrides})
    return generate_scenario(params, seed=spec.seed)


def _pso_for(spec: ExperimentSpec) -> PsoConfig:
    if spec.scenario_path is not None:
        from_file = load_pso_config(spec.scenario_path)
        if from_file is not None:
            return from_file
    return spec.pso


@dataclass(frozen=True)
class BisectionOutcome:
    reachable: bool
    landed: bool            # constrained objective within 1 % of the target
    eta: float
    iterations: int
    mi_total_bits: float
    delay_total_s: float
    utility: float
    allocation: SubframeAllocation


def _solve(scenario, cache, eta, strategy, pso):
    alloc, result = solve_strategy(scenario, eta, strategy, pso_config=pso,
                                   cache=cache)
    return alloc, result


def bisect_eta_fixed_delay(scenario: NetworkScenario, target_s: float,
                           strategy: str = "jsatps",
                           pso: PsoConfig = PsoConfig(),
                           cache: ScenarioCache | None = None,
                           tol: float = BISECTION_TOL,
                           max_iter: int = BISECTION_MAX_ITER) -> BisectionOutcome:
    """Largest-MI point whose total delay stays within the target budget."""
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    alloc, res = _solve(scenario, cache, 0.0, strategy, pso)
    if res.total_delay_s > target_s * (1.0 + tol):
        return BisectionOutcome(False, False, 0.0, 0, res.total_mi_bits,
                                res.total_delay_s, res.utility, alloc)
    best = (0.0, alloc, res)
    hi_alloc, hi_res = _solve(scenario, cache, 1.0, strategy, pso)
    if hi_res.total_delay_s <= target_s:
        return BisectionOutcome(True, False, 1.0, 0, hi_res.total_mi_bits,
                                hi_res.total_delay_s, hi_res.utility, hi_alloc)
    lo, hi = 0.0, 1.0
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        alloc, res = _solve(scenario, cache, mid, strategy, pso)
        if res.total_delay_s <= target_s:
            lo, best = mid, (mid, alloc, res)
        else:
            hi = mid
        if abs(best[2].total_delay_s - target_s) <= tol * target_s:
            break
    eta, alloc, res = best
    landed = abs(res.total_delay_s - target_s) <= tol * target_s
    return BisectionOutcome(True, landed, eta, iterations, res.total_mi_bits,
                            res.total_delay_s, res.utility, alloc)


def bisect_eta_fixed_mi(scenario: NetworkScenario, target_bits: float,
                        strategy: str = "jsatps",
                        pso: PsoConfig = PsoConfig(),
                        cache: ScenarioCache | None = None,
                        tol: float = BISECTION_TOL,
                        max_iter: int = BISECTION_MAX_ITER) -> BisectionOutcome:
    """Smallest-delay point whose total MI stays at or above the target."""
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    alloc, res = _solve(scenario, cache, 1.0, strategy, pso)
    if res.total_mi_bits < target_bits * (1.0 - tol):
        return BisectionOutcome(False, False, 1.0, 0, res.total_mi_bits,
                                res.total_delay_s, res.utility, alloc)
    best = (1.0, alloc, res)
    lo_alloc, lo_res = _solve(scenario, cache, 0.0, strategy, pso)
    if lo_res.total_mi_bits >= target_bits:
        return BisectionOutcome(True, False, 0.0, 0, lo_res.total_mi_bits,
                                lo_res.total_delay_s, lo_res.utility, lo_alloc)
    lo, hi = 0.0, 1.0
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        alloc, res = _solve(scenario, cache, mid, strategy, pso)
        if res.total_mi_bits >= target_bits:
            hi, best = mid, (mid, alloc, res)
        else:
            lo = mid
        if abs(best[2].total_mi_bits - target_bits) <= tol * target_bits:
            break
    eta, alloc, res = best
    landed = abs(res.total_mi_bits - target_bits) <= tol * target_bits
    return BisectionOutcome(True, landed, eta, iterations, res.total_mi_bits,
                            res.total_delay_s, res.utility, alloc)


def _alloc_summary(alloc: SubframeAllocation) -> dict:
    n = max(len(alloc.tau_ub), 1)
    return {"tau_ub_mean": sum(alloc.tau_ub) / n,
            "theta_ub_mean": sum(alloc.theta_ub) / n,
            "tau_b": alloc.tau_b, "tau_us": alloc.tau_us,
            "theta_us": alloc.theta_us}


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ISCC_WORKERS", "1")))
    except ValueError:
        return 1


def _map_sweep(fn, jobs: list):
    workers = _worker_count()
    if workers == 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


# --- per-kind drivers ----------------------------------------------------------

def _run_convergence(spec: ExperimentSpec, out: Path) -> list[str]:
    rows = []
    if spec.scenario_path is not None:
        scenarios = [(None, load_scenario(spec.scenario_path))]
    else:
        scenarios = [((n_bs, n_sues),
                      _scenario_for(spec, n_bs=n_bs, n_sues=n_sues))
                     for n_bs, n_sues in spec.scales]
    pso = _pso_for(spec)
    for scale, scenario in scenarios:
        n_bs, n_sues = scale if scale else (scenario.n_bs, scenario.n_sues)
        cache = ScenarioCache.from_scenario(scenario)
        for run_seed in spec.seeds:
            cfg = dataclasses.replace(pso, seed=run_seed)
            _, _, trace = pso_optimize(scenario, spec.eta, cfg, cache=cache)
            rows += [[n_bs, n_sues, run_seed, i, u]
                     for i, u in enumerate(trace.gbest_utility)]
    _write_csv(out / "convergence.csv",
               ["n_bs", "n_sues", "seed", "iteration", "gbest_utility"], rows)
    return ["convergence.csv"]


def _run_pareto(spec: ExperimentSpec, out: Path) -> list[str]:
    scenario = _scenario_for(spec)
    cache = ScenarioCache.from_scenario(scenario)
    pso = _pso_for(spec)
    rows = []
    for strategy in spec.strategies:
        for eta in spec.etas:
            _, result = _solve(scenario, cache, eta, strategy, pso)
            rows.append([strategy, eta, result.total_mi_bits,
                         result.total_delay_s, result.utility])
    _write_csv(out / "pareto.csv",
               ["strategy", "eta", "mi_total_bits", "delay_total_s", "utility"],
               rows)
    return ["pareto.csv"]


def _data_amount_point(job) -> list[list]:
    spec, mean_kb = job
    params = ScenarioParams(**spec.generator_overrides).with_mean_data_kb(mean_kb)
    scenario = generate_scenario(params, seed=spec.seed)
    cache = ScenarioCache.from_scenario(scenario)
    pso = _pso_for(spec)
    rows = []
    for strategy in spec.strategies:
        if spec.fixed_metric in ("delay", "both"):
            o = bisect_eta_fixed_delay(scenario, spec.delay_target_s, strategy,
                                       pso, cache)
            rows.append([strategy, mean_kb, "delay_total_s", spec.delay_target_s,
                         int(o.reachable), o.eta, o.iterations,
                         o.mi_total_bits, o.delay_total_s, o.utility])
        if spec.fixed_metric in ("mi", "both"):
            o = bisect_eta_fixed_mi(scenario, spec.mi_target_bits, strategy,
                                    pso, cache)
            rows.append([strategy, mean_kb, "mi_total_bits", spec.mi_target_bits,
                         int(o.reachable), o.eta, o.iterations,
                         o.mi_total_bits, o.delay_total_s, o.utility])
    return rows


def _run_data_amount(spec: ExperimentSpec, out: Path) -> list[str]:
    jobs = [(spec, mean_kb) for mean_kb in spec.sweep]
    rows = [row for block in _map_sweep(_data_amount_point, jobs) for row in block]
    _write_csv(out / "data_amount.csv",
               ["strategy", "mean_data_kb", "fixed_metric", "target", "reachable",
                "eta", "bisection_iterations", "mi_total_bits", "delay_total_s",
                "utility"], rows)
    return ["data_amount.csv"]


def _orbit_point(job) -> list[list]:
    spec, altitude_km = job
    scenario = _scenario_for(spec, orbit_altitude_km=altitude_km)
    cache = ScenarioCache.from_scenario(scenario)
    pso = _pso_for(spec)
    rows = []
    for strategy in spec.strategies:
        for metric, bisect, target in (
                ("delay_total_s", bisect_eta_fixed_delay, spec.delay_target_s),
                ("mi_total_bits", bisect_eta_fixed_mi, spec.mi_target_bits)):
            o = bisect(scenario, target, strategy, pso, cache)
            a = _alloc_summary(o.allocation)
            rows.append([strategy, altitude_km, metric, target, int(o.reachable),
                         o.eta, o.iterations, o.mi_total_bits, o.delay_total_s,
                         o.utility, a["tau_ub_mean"], a["theta_ub_mean"],
                         a["tau_b"], a["tau_us"], a["theta_us"]])
    return rows


def _run_orbit(spec: ExperimentSpec, out: Path) -> list[str]:
    jobs = [(spec, altitude) for altitude in spec.sweep]
    rows = [row for block in _map_sweep(_orbit_point, jobs) for row in block]
    _write_csv(out / "orbit.csv",
               ["strategy", "altitude_km", "fixed_metric", "target", "reachable",
                "eta", "bisection_iterations", "mi_total_bits", "delay_total_s",
                "utility", "tau_ub_mean", "theta_ub_mean", "tau_b", "tau_us",
                "theta_us"], rows)
    return ["orbit.csv"]


def _run_single_eval(spec: ExperimentSpec, out: Path) -> list[str]:
    scenario = _scenario_for(spec)
    cache = ScenarioCache.from_scenario(scenario)
    pso = _pso_for(spec)
    files = []
    if spec.strategy == "jsatps":
        alloc, result, trace = pso_optimize(scenario, spec.eta, pso, cache=cache)
        write_trace_csv(trace, out / "trace.csv")
        files.append("trace.csv")
    else:
        alloc, result = _solve(scenario, cache, spec.eta, spec.strategy, pso)
    a = _alloc_summary(alloc)
    _write_csv(out / "result.csv",
               ["strategy", "eta", "mi_total_bits", "delay_total_s", "utility",
                "cloud_count_tue", "cloud_count_sue", "tau_ub_mean",
                "theta_ub_mean", "tau_b", "tau_us", "theta_us"],
               [[spec.strategy, spec.eta, result.total_mi_bits,
                 result.total_delay_s, result.utility, result.cloud_count_tue,
                 result.cloud_count_sue, a["tau_ub_mean"], a["theta_ub_mean"],
                 a["tau_b"], a["tau_us"], a["theta_us"]]])
    with open(out / "allocation.json", "w") as fh:
        json.dump({"tau_ub": list(alloc.tau_ub), "theta_ub": list(alloc.theta_ub),
                   "tau_b": alloc.tau_b, "tau_us": alloc.tau_us,
                   "theta_us": alloc.theta_us}, fh, indent=2)
    return files + ["result.csv", "allocation.json"]


_RUNNERS = {
    "convergence": _run_convergence,
    "pareto": _run_pareto,
    "data-amount": _run_data_amount,
    "orbit-altitude": _run_orbit,
    "single-eval": _run_single_eval,
}


def run_experiment(spec: ExperimentSpec) -> dict:
    """Run one experiment; returns the manifest (also written to the out dir)."""
    spec.validate()
    if spec.kind in ("data-amount", "orbit-altitude") and not spec.sweep:
        spec = dataclasses.replace(spec, sweep=default_sweep(spec.kind))
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = _RUNNERS[spec.kind](spec, out)
    manifest = {
        "kind": spec.kind,
        "spec": _spec_dict(spec),
        "seed": spec.seed,
        "config_hash": _config_hash(spec),
        "package_version": __version__,
        "outputs": files,
    }
    if spec.scenario_path is not None:
        manifest["scenario_sha256"] = hashlib.sha256(
            Path(spec.scenario_path).read_bytes()).hexdigest()
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return manifest


def run_from_manifest(manifest_path: str | Path,
                      out_dir: str | Path | None = None) -> dict:
    """Re-run the experiment described by a manifest (byte-identical outputs)."""
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    doc = dict(manifest["spec"])
    doc["pso"] = PsoConfig(**doc["pso"])
    doc["etas"] = tuple(doc["etas"])
    doc["strategies"] = tuple(doc["strategies"])
    doc["sweep"] = tuple(doc["sweep"])
    doc["scales"] = tuple(tuple(s) for s in doc["scales"])
    doc["seeds"] = tuple(doc["seeds"])
    if out_dir is not None:
        doc["out_dir"] = str(out_dir)
    return run_experiment(ExperimentSpec(**doc))


# --- plot-data export ------------------------------------------------------------

def export_plot_data(result_dir: str | Path, figures: bool = True) -> dict:
    """Flatten an experiment's outputs to a tidy long CSV plus a JSON summary.

    The tidy schema is (experiment, strategy, x, series, value).  When
    ``figures`` is set, the experiment's plots are rendered to PNG files next
    to the CSVs.
    """
    result_dir = Path(result_dir)
    manifest_path = result_dir / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"no manifest.json under {result_dir}")
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    kind = manifest["kind"]

    tidy: list[list] = []

    def read(name: str) -> list[dict]:
        with open(result_dir / name, newline="") as fh:
            return list(csv.DictReader(fh))

    if kind == "convergence":
        for row in read("convergence.csv"):
            series = f"N{row['n_bs']}-S{row['n_sues']}-seed{row['seed']}"
            tidy.append([kind, "jsatps", row["iteration"], series,
                         row["gbest_utility"]])
    elif kind == "pareto":
        for row in read("pareto.csv"):
            for series in ("mi_total_bits", "delay_total_s", "utility"):
                tidy.append([kind, row["strategy"], row["eta"], series,
                             row[series]])
    elif kind == "data-amount":
        for row in read("data_amount.csv"):
            if not int(row["reachable"]):
                continue
            series = ("mi_at_fixed_delay" if row["fixed_metric"] == "delay_total_s"
                      else "delay_at_fixed_mi")
            value = (row["mi_total_bits"] if series == "mi_at_fixed_delay"
                     else row["delay_total_s"])
            tidy.append([kind, row["strategy"], row["mean_data_kb"], series, value])
    elif kind == "orbit-altitude":
        for row in read("orbit.csv"):
            if not int(row["reachable"]):
                continue
            fixed_delay = row["fixed_metric"] == "delay_total_s"
            main = ("mi_at_fixed_delay", row["mi_total_bits"]) if fixed_delay \
                else ("delay_at_fixed_mi", row["delay_total_s"])
            tidy.append([kind, row["strategy"], row["altitude_km"], *main])
            prefix = "fixed_delay" if fixed_delay else "fixed_mi"
            for comp in ("tau_ub_mean", "theta_ub_mean", "tau_b", "tau_us",
                         "theta_us"):
                tidy.append([kind, row["strategy"], row["altitude_km"],
                             f"{prefix}:{comp}", row[comp]])
    elif kind == "single-eval":
        for row in read("result.csv"):
            for series in ("mi_total_bits", "delay_total_s", "utility"):
                tidy.append([kind, row["strategy"], row["eta"], series,
                             row[series]])
    else:
        raise ValueError(f"cannot export unknown experiment kind {kind!r}")

    tidy_path = result_dir / "plot_data.csv"
    _write_csv(tidy_path, ["experiment", "strategy", "x", "series", "value"], tidy)

    series_names = sorted({row[3] for row in tidy})
    summary = {
        "experiment": kind,
        "rows": len(tidy),
        "strategies": sorted({row[1] for row in tidy}),
        "series": series_names,
        "outputs": manifest["outputs"],
    }
    summary_path = result_dir / "summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)

    rendered: list[str] = []
    if figures:
        from .figures import render_experiment
        rendered = render_experiment(kind, result_dir)
    return {"plot_data": str(tidy_path), "summary": str(summary_path),
            "figures": rendered}

"""Command-line front end: scenario generation, experiment runs, plot export."""
from __future__ import annotations

import argparse
import dataclasses
import sys

from .channel import apply_gain_overrides
from .experiments import (EXPERIMENT_KINDS, ExperimentSpec, default_sweep,
                          export_plot_data, run_experiment, run_from_manifest)
from .generator import ScenarioParams, generate_scenario
from .model import validate_scenario
from .optimizer import PsoConfig
from .scenario_io import load_gain_overrides, save_scenario


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _scales(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for part in text.split(","):
        n_bs, n_sues = part.lower().split("x")
        out.append((int(n_bs), int(n_sues)))
    return tuple(out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isccsim",
        description="Sensing/communication/computing trade-off simulator for "
                    "satellite-terrestrial edge networks")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a scenario file from defaults")
    gen.add_argument("--out", required=True, help="output scenario YAML path")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--n-bs", type=int, default=None)
    gen.add_argument("--tues-per-bs", type=int, default=None)
    gen.add_argument("--n-sues", type=int, default=None)
    gen.add_argument("--cell-radius-m", type=float, default=None)
    gen.add_argument("--orbit-km", type=float, default=None)
    gen.add_argument("--data-kb", type=float, nargs=2, metavar=("LO", "HI"),
                     default=None, help="task payload range in kilobits")
    gen.add_argument("--mean-data-kb", type=float, default=None,
                     help="center the payload range on this mean")
    gen.add_argument("--workload", type=float, default=None,
                     help="CPU cycles per bit")
    gen.add_argument("--sensing-range-m", type=float, default=None)
    gen.add_argument("--gain-overrides", default=None,
                     help="CSV of per-link gain overrides")
    gen.add_argument("--pso-seed", type=int, default=None,
                     help="embed a pso section with this seed")

    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--kind", required=False, choices=EXPERIMENT_KINDS)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--from-manifest", default=None,
                     help="re-run the experiment described by a manifest")
    run.add_argument("--scenario", default=None, help="scenario YAML path")
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--etas", type=_floats, default=None,
                     help="comma-separated trade-off weights")
    run.add_argument("--strategies", default=None,
                     help="comma-separated strategy names")
    run.add_argument("--strategy", default=None, help="single-eval strategy")
    run.add_argument("--eta", type=float, default=None,
                     help="trade-off weight for convergence/single-eval")
    run.add_argument("--sweep", type=_floats, default=None,
                     help="data-amount means (Kb) or orbit altitudes (km)")
    run.add_argument("--delay-target-s", type=float, default=None)
    run.add_argument("--mi-target-bits", type=float, default=None)
    run.add_argument("--fixed-metric", choices=("delay", "mi", "both"),
                     default=None)
    run.add_argument("--scales", type=_scales, default=None,
                     help="convergence network scales, e.g. 5x10,10x30")
    run.add_argument("--seeds", type=_ints, default=None,
                     help="comma-separated convergence seeds")
    run.add_argument("--n-bs", type=int, default=None)
    run.add_argument("--n-sues", type=int, default=None)
    run.add_argument("--tues-per-bs", type=int, default=None)
    run.add_argument("--pso-population", type=int, default=None)
    run.add_argument("--pso-iterations", type=int, default=None)
    run.add_argument("--pso-seed", type=int, default=None)

    exp = sub.add_parser("export", help="flatten results and render figures")
    exp.add_argument("--results", required=True, help="experiment output directory")
    exp.add_argument("--no-figures", action="store_true")
    return parser


def _cmd_generate(args) -> int:
    overrides = {}
    for attr, key in (("n_bs", "n_bs"), ("tues_per_bs", "tues_per_bs"),
                      ("n_sues", "n_sues"), ("cell_radius_m", "cell_radius_m"),
                      ("orbit_km", "orbit_altitude_km"),
                      ("workload", "workload_cycles_per_bit"),
                      ("sensing_range_m", "sensing_range_m")):
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = value
    if args.data_kb is not None:
        overrides["data_kb_low"], overrides["data_kb_high"] = args.data_kb
    params = ScenarioParams(**overrides)
    if args.mean_data_kb is not None:
        params = params.with_mean_data_kb(args.mean_data_kb)
    scenario = generate_scenario(params, seed=args.seed)
    if args.gain_overrides:
        scenario = apply_gain_overrides(scenario,
                                        load_gain_overrides(args.gain_overrides))
    violations = validate_scenario(scenario)
    if violations:
        raise ValueError("generated scenario is invalid: " + "; ".join(violations))
    pso = PsoConfig(seed=args.pso_seed) if args.pso_seed is not None else None
    save_scenario(scenario, args.out, pso=pso)
    print(f"wrote {args.out}: {scenario.n_bs} BSs x "
          f"{scenario.n_tues // scenario.n_bs} TUEs + {scenario.n_sues} SUEs")
    return 0


def _cmd_run(args) -> int:
    if args.from_manifest:
        manifest = run_from_manifest(args.from_manifest, out_dir=args.out)
        print(f"re-ran {manifest['kind']} into {args.out}")
        return 0
    if not args.kind:
        raise ValueError("either --kind or --from-manifest is required")
    spec = ExperimentSpec(kind=args.kind, out_dir=args.out, seed=args.seed)
    updates: dict = {}
    if args.scenario is not None:
        updates["scenario_path"] = args.scenario
    if args.etas is not None:
        updates["etas"] = args.etas
    if args.strategies is not None:
        updates["strategies"] = tuple(args.strategies.split(","))
    if args.strategy is not None:
        updates["strategy"] = args.strategy
    if args.eta is not None:
        updates["eta"] = args.eta
    updates["sweep"] = args.sweep if args.sweep is not None else default_sweep(args.kind)
    if args.delay_target_s is not None:
        updates["delay_target_s"] = args.delay_target_s
    if args.mi_target_bits is not None:
        updates["mi_target_bits"] = args.mi_target_bits
    if args.fixed_metric is not None:
        updates["fixed_metric"] = args.fixed_metric
    if args.scales is not None:
        updates["scales"] = args.scales
    if args.seeds is not None:
        updates["seeds"] = args.seeds
    gen_overrides = {}
    for attr, key in (("n_bs", "n_bs"), ("n_sues", "n_sues"),
                      ("tues_per_bs", "tues_per_bs")):
        value = getattr(args, attr)
        if value is not None:
            gen_overrides[key] = value
    if gen_overrides:
        updates["generator_overrides"] = gen_overrides
    pso_updates = {}
    if args.pso_population is not None:
        pso_updates["population"] = args.pso_population
    if args.pso_iterations is not None:
        pso_updates["max_iterations"] = args.pso_iterations
    if args.pso_seed is not None:
        pso_updates["seed"] = args.pso_seed
    if pso_updates:
        updates["pso"] = dataclasses.replace(spec.pso, **pso_updates)
    spec = dataclasses.replace(spec, **updates)
    manifest = run_experiment(spec)
    print(f"ran {manifest['kind']}; outputs: {', '.join(manifest['outputs'])}")
    return 0


def _cmd_export(args) -> int:
    out = export_plot_data(args.results, figures=not args.no_figures)
    print(f"wrote {out['plot_data']} and {out['summary']}")
    for fig in out["figures"]:
        print(f"rendered {fig}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_export(args)
    except Exception as exc:  # CLI boundary: report and signal failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

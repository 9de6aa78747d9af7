"""Render experiment outputs to PNG files next to their CSVs."""
from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _read(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _save(fig, path: Path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def _convergence(result_dir: Path) -> list[str]:
    rows = _read(result_dir / "convergence.csv")
    curves = defaultdict(list)
    for r in rows:
        key = f"N={r['n_bs']}, SUEs={r['n_sues']}, seed {r['seed']}"
        curves[key].append((int(r["iteration"]), float(r["gbest_utility"])))
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, pts in curves.items():
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=key)
    ax.set_xlabel("iteration")
    ax.set_ylabel("best utility")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)
    return [_save(fig, result_dir / "convergence.png")]


def _pareto(result_dir: Path) -> list[str]:
    rows = _read(result_dir / "pareto.csv")
    by_strategy = defaultdict(list)
    for r in rows:
        by_strategy[r["strategy"]].append(
            (float(r["delay_total_s"]), float(r["mi_total_bits"])))
    fig, ax = plt.subplots(figsize=(6, 4))
    for strategy, pts in by_strategy.items():
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=strategy)
    ax.set_xlabel("total completion delay (s)")
    ax.set_ylabel("total sensing MI (bits)")
    ax.legend()
    ax.grid(alpha=0.3)
    return [_save(fig, result_dir / "pareto.png")]


def _data_amount(result_dir: Path) -> list[str]:
    rows = [r for r in _read(result_dir / "data_amount.csv") if int(r["reachable"])]
    out = []
    for metric, ylabel, ycol, name in (
            ("delay_total_s", "achievable MI (bits)", "mi_total_bits",
             "data_amount_fixed_delay.png"),
            ("mi_total_bits", "achievable delay (s)", "delay_total_s",
             "data_amount_fixed_mi.png")):
        sub = [r for r in rows if r["fixed_metric"] == metric]
        if not sub:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        by_strategy = defaultdict(list)
        for r in sub:
            by_strategy[r["strategy"]].append(
                (float(r["mean_data_kb"]), float(r[ycol])))
        for strategy, pts in by_strategy.items():
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=strategy)
        ax.set_xlabel("mean task payload (Kb)")
        ax.set_ylabel(ylabel)
        ax.set_title(f"target {sub[0]['fixed_metric']} = {sub[0]['target']}",
                     fontsize=9)
        ax.legend()
        ax.grid(alpha=0.3)
        out.append(_save(fig, result_dir / name))
    return out


def _orbit(result_dir: Path) -> list[str]:
    rows = [r for r in _read(result_dir / "orbit.csv") if int(r["reachable"])]
    out = []
    fig, ax1 = plt.subplots(figsize=(6, 4))
    ax2 = ax1.twinx()
    fixed_delay = sorted((float(r["altitude_km"]), float(r["mi_total_bits"]))
                         for r in rows if r["fixed_metric"] == "delay_total_s")
    fixed_mi = sorted((float(r["altitude_km"]), float(r["delay_total_s"]))
                      for r in rows if r["fixed_metric"] == "mi_total_bits")
    if fixed_delay:
        ax1.plot([p[0] for p in fixed_delay], [p[1] for p in fixed_delay],
                 "o-", color="tab:blue", label="MI at fixed delay")
    if fixed_mi:
        ax2.plot([p[0] for p in fixed_mi], [p[1] for p in fixed_mi],
                 "s--", color="tab:red", label="delay at fixed MI")
    ax1.set_xlabel("orbit altitude (km)")
    ax1.set_ylabel("achievable MI (bits)", color="tab:blue")
    ax2.set_ylabel("achievable delay (s)", color="tab:red")
    ax1.grid(alpha=0.3)
    out.append(_save(fig, result_dir / "orbit_performance.png"))

    for metric, name in (("delay_total_s", "orbit_alloc_fixed_delay.png"),
                         ("mi_total_bits", "orbit_alloc_fixed_mi.png")):
        sub = sorted((float(r["altitude_km"]), r) for r in rows
                     if r["fixed_metric"] == metric)
        if not sub:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        alts = [a for a, _ in sub]
        for comp in ("tau_ub_mean", "theta_ub_mean", "tau_b", "tau_us", "theta_us"):
            ax.plot(alts, [float(r[comp]) for _, r in sub], "o-", label=comp)
        ax.set_xlabel("orbit altitude (km)")
        ax.set_ylabel("subframe fraction")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(fontsize=7)
        ax.grid(alpha=0.3)
        out.append(_save(fig, result_dir / name))
    return out


def _single_eval(result_dir: Path) -> list[str]:
    trace = result_dir / "trace.csv"
    if not trace.exists():
        return []
    rows = _read(trace)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([int(r["iteration"]) for r in rows],
            [float(r["gbest_utility"]) for r in rows])
    ax.set_xlabel("iteration")
    ax.set_ylabel("best utility")
    ax.grid(alpha=0.3)
    return [_save(fig, result_dir / "trace.png")]


_RENDERERS = {
    "convergence": _convergence,
    "pareto": _pareto,
    "data-amount": _data_amount,
    "orbit-altitude": _orbit,
    "single-eval": _single_eval,
}


def render_experiment(kind: str, result_dir: str | Path) -> list[str]:
    """Render the figures for one experiment directory; returns written paths."""
    renderer = _RENDERERS.get(kind)
    if renderer is None:
        raise ValueError(f"no renderer for experiment kind {kind!r}")
    return renderer(Path(result_dir))

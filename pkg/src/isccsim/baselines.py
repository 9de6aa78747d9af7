"""Comparison strategies and brute-force oracles.

Greedy moves subframe mass step by step toward the largest utility gain;
the equal-split variant additionally pins every task to fixed equal
partitioning ratios with every user offloading.  Exhaustive search scans the
reduced allocation parameterization on a grid.  The grid oracles at the end
exist for tests: they minimize the exact max-of-completion-times expressions
by enumeration, independently of the closed forms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .evaluation import (ScenarioCache, TAU_FLOOR, effective_taus, evaluate,
                         evaluate_totals, solve_sues, utility_value)
from .model import (EvaluationResult, NetworkScenario, PartitionSue,
                    PartitionTue, SubframeAllocation)
from .partition_tue import split_local_edge, split_three_way

STRATEGIES = ("jsatps", "greedy-otps", "greedy-equal", "exhaustive")


class BudgetExceededError(ValueError):
    """The exhaustive grid would exceed the configured evaluation budget."""


# --- fixed equal-split partitioning -------------------------------------------

def equal_split_partitions(scenario: NetworkScenario, alloc: SubframeAllocation
                           ) -> tuple[list[PartitionTue], list[PartitionSue], int, int]:
    """Equal share per available tier, every user offloading to the cloud."""
    del alloc  # the fixed ratios do not depend on the allocation
    third = 1.0 / 3.0
    tues = [PartitionTue(alpha=third, beta=third, kappa=third)
            for bs in scenario.base_stations for _ in bs.tues]
    sues = [PartitionSue(alpha=0.5, kappa=0.5) for _ in scenario.sues]
    return tues, sues, len(tues), len(sues)


def _equal_totals(cache: ScenarioCache, alloc: SubframeAllocation, eta: float
                  ) -> tuple[float, float, float]:
    """(utility, MI, delay) under equal splits with all users offloading."""
    tau_ub, tau_b, tau_us = effective_taus(alloc)
    a = cache.tue_a0 / tau_ub[cache.bs_idx]
    d_bits, b, c = cache.tue_data_bits, cache.tue_b, cache.tue_c
    trip = cache.trip_bs[cache.bs_idx]
    k_b = len(cache.bs_idx)
    third = 1.0 / 3.0
    t_u = third * d_bits * c
    t_up = (1.0 - third) * d_bits * a
    t_edge = third * d_bits * b
    t_bs_up = third * d_bits * (k_b * cache.inv_rate_b[cache.bs_idx] / tau_b)
    t_tue = np.maximum(np.maximum(t_u, t_up + t_edge), t_up + t_bs_up + trip)

    k_s = len(cache.sue_v)
    if k_s:
        t_up_s = 0.5 * cache.sue_u0 * k_s / tau_us
        t_sue = np.maximum(0.5 * cache.sue_v, t_up_s + cache.sue_trip)
    else:
        t_sue = np.zeros(0)

    theta_ub = np.asarray(alloc.theta_ub, dtype=float)
    mi_total = float((cache.tue_mi * theta_ub[cache.bs_idx]).sum()
                     + (cache.sue_mi * alloc.theta_us).sum())
    delay_total = float(t_tue.sum() + t_sue.sum())
    return utility_value(mi_total, delay_total, eta), mi_total, delay_total


def equal_split_evaluate(scenario: NetworkScenario, alloc: SubframeAllocation,
                         eta: float, cache: ScenarioCache | None = None
                         ) -> EvaluationResult:
    """EvaluationResult under the fixed equal-split partitioning."""
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    tau_ub, tau_b, tau_us = effective_taus(alloc)
    a = cache.tue_a0 / tau_ub[cache.bs_idx]
    d_bits, b, c = cache.tue_data_bits, cache.tue_b, cache.tue_c
    trip = cache.trip_bs[cache.bs_idx]
    k_b = len(cache.bs_idx)
    third = 1.0 / 3.0
    t_tue = np.maximum(
        np.maximum(third * d_bits * c,
                   (1.0 - third) * d_bits * a + third * d_bits * b),
        (1.0 - third) * d_bits * a
        + third * d_bits * (k_b * cache.inv_rate_b[cache.bs_idx] / tau_b) + trip)
    k_s = len(cache.sue_v)
    t_sue = (np.maximum(0.5 * cache.sue_v, 0.5 * cache.sue_u0 * k_s / tau_us
                        + cache.sue_trip) if k_s else np.zeros(0))
    theta_ub = np.asarray(alloc.theta_ub, dtype=float)
    per_tue_mi = cache.tue_mi * theta_ub[cache.bs_idx]
    per_sue_mi = cache.sue_mi * alloc.theta_us
    mi_total = float(per_tue_mi.sum() + per_sue_mi.sum())
    delay_total = float(t_tue.sum() + t_sue.sum())
    return EvaluationResult(
        total_mi_bits=mi_total, total_delay_s=delay_total,
        per_tue_mi=tuple(per_tue_mi.tolist()), per_sue_mi=tuple(per_sue_mi.tolist()),
        per_tue_delay=tuple(t_tue.tolist()), per_sue_delay=tuple(t_sue.tolist()),
        utility=utility_value(mi_total, delay_total, eta), eta=eta,
        cloud_count_tue=k_b, cloud_count_sue=k_s)


# --- greedy subframe allocation ------------------------------------------------

_SAT_COMPONENTS = ("tau_b", "tau_us", "theta_us")


def greedy_allocation(scenario: NetworkScenario, eta: float, step: float = 0.05,
                      partitioning: str = "optimal",
                      cache: ScenarioCache | None = None,
                      max_moves: int = 10000) -> SubframeAllocation:
    """Hill-climb the subframe allocation by steepest single transfers.

    Starts from all-communication (satellite airtime split evenly between
    backhaul and SUE uplink) and repeatedly shifts ``step`` mass between two
    components of one frame, picking the transfer with the largest utility
    increase; stops when no transfer improves.
    """
    if not 0.0 < step <= 0.5:
        raise ValueError("greedy step must lie in (0, 0.5]")
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    if partitioning == "optimal":
        def fitness(a: SubframeAllocation) -> float:
            return evaluate_totals(cache, a, eta)[0]
    elif partitioning == "equal":
        def fitness(a: SubframeAllocation) -> float:
            return _equal_totals(cache, a, eta)[0]
    else:
        raise ValueError(f"unknown partitioning {partitioning!r}")

    n_bs = scenario.n_bs
    tau_ub = [1.0] * n_bs
    theta_ub = [0.0] * n_bs
    sat = {"tau_b": 0.5, "tau_us": 0.5, "theta_us": 0.0}

    def build() -> SubframeAllocation:
        return SubframeAllocation(tau_ub=tuple(tau_ub), theta_ub=tuple(theta_ub),
                                  tau_b=sat["tau_b"], tau_us=sat["tau_us"],
                                  theta_us=sat["theta_us"])

    current = fitness(build())
    for _ in range(max_moves):
        best_gain, best_apply = 0.0, None
        for n in range(n_bs):
            for src in ("tau", "theta"):
                amount = min(step, tau_ub[n] if src == "tau" else theta_ub[n])
                if amount < 1e-9:
                    continue
                old_tau, old_theta = tau_ub[n], theta_ub[n]
                delta = -amount if src == "tau" else amount
                tau_ub[n], theta_ub[n] = old_tau + delta, old_theta - delta
                gain = fitness(build()) - current
                tau_ub[n], theta_ub[n] = old_tau, old_theta
                if gain > best_gain:
                    best_gain = gain
                    best_apply = ("bs", n, delta)
        for src, dst in itertools.permutations(_SAT_COMPONENTS, 2):
            amount = min(step, sat[src])
            if amount < 1e-9:
                continue
            sat[src] -= amount
            sat[dst] += amount
            gain = fitness(build()) - current
            sat[src] += amount
            sat[dst] -= amount
            if gain > best_gain:
                best_gain = gain
                best_apply = ("sat", src, dst, amount)
        if best_apply is None:
            break
        if best_apply[0] == "bs":
            _, n, delta = best_apply
            tau_ub[n] += delta
            theta_ub[n] -= delta
        else:
            _, src, dst, amount = best_apply
            sat[src] -= amount
            sat[dst] += amount
        current += best_gain
    return build()


# --- exhaustive grid search -----------------------------------------------------

def exhaustive_search(scenario: NetworkScenario, eta: float, grid_step: float,
                      max_grid_points: float = 2e9,
                      cache: ScenarioCache | None = None
                      ) -> tuple[SubframeAllocation, EvaluationResult]:
    """Grid-scan the reduced allocation parameterization and return the argmax.

    The grid covers one communication fraction per BS plus the satellite
    simplex.  Because a TUE's cloud admission depends only on its own BS's
    communication fraction, per-BS delay sums are tabulated against (grid
    point, total cloud count) and combined exactly across BS combinations,
    which keeps the scan tractable without changing any evaluated value.
    """
    if not 0.0 < grid_step <= 1.0:
        raise ValueError("grid_step must lie in (0, 1]")
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    n_bs = scenario.n_bs
    steps = int(round(1.0 / grid_step))
    grid = np.linspace(0.0, 1.0, steps + 1)
    n_g = len(grid)
    triples = [(grid[i], grid[j], max(0.0, 1.0 - grid[i] - grid[j]))
               for i in range(n_g) for j in range(n_g - i)]
    n_points = float(n_g) ** n_bs * len(triples)
    if n_points > max_grid_points:
        raise BudgetExceededError(
            f"{n_points:.3g} grid points exceed the budget of {max_grid_points:.3g}")

    tau_eff = np.maximum(grid, TAU_FLOOR)
    k_total_shape = (n_g,) * n_bs
    k_total = np.zeros(k_total_shape, dtype=np.int64)
    mi_bs = np.zeros(k_total_shape)
    per_bs = []
    for n in range(n_bs):
        users = cache.bs_idx == n
        a = cache.tue_a0[users][:, None] / tau_eff[None, :]
        b = cache.tue_b[users][:, None]
        c = cache.tue_c[users][:, None]
        d_bits = cache.tue_data_bits[users][:, None]
        trip = cache.trip_bs[n]
        alpha_e, beta_e = split_local_edge(a, b, c)
        t_e = alpha_e * d_bits * c
        admitted = beta_e * d_bits * b > trip
        per_bs.append((a, b, c, d_bits, trip, t_e, admitted))
        axis_shape = [1] * n_bs
        axis_shape[n] = n_g
        k_total += admitted.sum(axis=0).reshape(axis_shape)
        mi_bs = mi_bs + ((1.0 - grid) * cache.tue_mi[users].sum()).reshape(axis_shape)

    k_values = np.arange(len(cache.bs_idx) + 1, dtype=float)
    axis_index = [np.arange(n_g).reshape([n_g if m == n else 1 for m in range(n_bs)])
                  for n in range(n_bs)]

    best_utility = -np.inf
    best_combo: tuple[int, ...] = ()
    best_triple = triples[0]
    for tau_b, tau_us, theta_us in triples:
        tau_b_eff = max(tau_b, TAU_FLOOR)
        tau_us_eff = max(tau_us, TAU_FLOOR)
        sue_sol = solve_sues(cache, tau_us_eff)
        delay_sue = float(sue_sol.t_total.sum())
        mi_sue = float(cache.sue_mi.sum()) * theta_us

        delay = np.full(k_total_shape, delay_sue)
        for n, (a, b, c, d_bits, trip, t_e, admitted) in enumerate(per_bs):
            d = k_values * cache.inv_rate_b[n] / tau_b_eff
            a3, b3 = a[:, :, None], b[:, :, None]
            c3, d_bits3 = c[:, :, None], d_bits[:, :, None]
            d3 = d[None, None, :]
            alpha, beta, kappa = split_three_way(a3, b3, c3, d3, trip, d_bits3)
            t_u = alpha * d_bits3 * c3
            t_up = (1.0 - alpha) * d_bits3 * a3
            t_b = t_up + beta * d_bits3 * b3
            t_c = t_up + kappa * d_bits3 * d3 + trip
            t_three = np.maximum(np.maximum(t_u, t_b), t_c)
            table = np.where(admitted[:, :, None], t_three,
                             t_e[:, :, None]).sum(axis=0)
            delay = delay + table[axis_index[n], k_total]
        utility = (mi_bs + mi_sue) ** eta / delay ** (1.0 - eta)
        flat = int(np.argmax(utility))
        if utility.flat[flat] > best_utility:
            best_utility = float(utility.flat[flat])
            best_combo = np.unravel_index(flat, k_total_shape)
            best_triple = (tau_b, tau_us, theta_us)

    tau_ub = tuple(float(grid[i]) for i in best_combo)
    alloc = SubframeAllocation(
        tau_ub=tau_ub, theta_ub=tuple(1.0 - t for t in tau_ub),
        tau_b=best_triple[0], tau_us=best_triple[1], theta_us=best_triple[2])
    return alloc, evaluate(scenario, alloc, eta, cache=cache)


# --- strategy dispatch ----------------------------------------------------------

def solve_strategy(scenario: NetworkScenario, eta: float, strategy: str,
                   pso_config=None, greedy_step: float = 0.05,
                   exhaustive_step: float = 0.05,
                   cache: ScenarioCache | None = None
                   ) -> tuple[SubframeAllocation, EvaluationResult]:
    """Run one allocation strategy and evaluate it under its own partitioning."""
    from .optimizer import PsoConfig, pso_optimize
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    if strategy == "jsatps":
        alloc, result, _ = pso_optimize(scenario, eta, pso_config or PsoConfig(),
                                        cache=cache)
        return alloc, result
    if strategy == "greedy-otps":
        alloc = greedy_allocation(scenario, eta, greedy_step, "optimal", cache=cache)
        return alloc, evaluate(scenario, alloc, eta, cache=cache)
    if strategy == "greedy-equal":
        alloc = greedy_allocation(scenario, eta, greedy_step, "equal", cache=cache)
        return alloc, equal_split_evaluate(scenario, alloc, eta, cache=cache)
    if strategy == "exhaustive":
        return exhaustive_search(scenario, eta, exhaustive_step, cache=cache)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


# --- brute-force oracles (test plumbing) -----------------------------------------

@dataclass(frozen=True)
class TueOracleResult:
    alpha: float
    beta: float
    kappa: float
    t_total: float


@dataclass(frozen=True)
class SueOracleResult:
    alpha: float
    kappa: float
    t_total: float


def oracle_local_edge_tue(a: float, b: float, c: float, data_bits: float,
                          step: float = 1e-5) -> tuple[float, float]:
    """1-D scan of the local/edge split; returns (alpha, min completion delay)."""
    alpha = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    beta = 1.0 - alpha
    t = np.maximum(alpha * c * data_bits,
                   beta * a * data_bits + beta * b * data_bits)
    i = int(np.argmin(t))
    return float(alpha[i]), float(t[i])


def grid_partition_oracle_tue(a: float, b: float, c: float, d: float,
                              trip: float, data_bits: float,
                              step: float = 1e-3) -> TueOracleResult:
    """2-D scan of the three-way split minimizing the exact max completion time."""
    n = int(round(1.0 / step))
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    alpha = i[keep] / n
    beta = j[keep] / n
    kappa = 1.0 - alpha - beta
    kappa[np.abs(kappa) < 1e-12] = 0.0
    t_u = alpha * c * data_bits
    t_up = (1.0 - alpha) * a * data_bits
    t_b = t_up + beta * b * data_bits
    t_c = t_up + kappa * d * data_bits + trip
    t = np.where(kappa > 0, np.maximum(np.maximum(t_u, t_b), t_c),
                 np.maximum(t_u, t_b))
    k = int(np.argmin(t))
    return TueOracleResult(float(alpha[k]), float(beta[k]), float(kappa[k]),
                           float(t[k]))


def grid_partition_oracle_sue(upload_s: float, local_s: float, trip: float,
                              step: float = 1e-5) -> SueOracleResult:
    """1-D scan of the local/cloud split minimizing the exact completion time."""
    alpha = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    kappa = 1.0 - alpha
    kappa[np.abs(kappa) < 1e-12] = 0.0
    t_u = alpha * local_s
    t_c = kappa * upload_s + trip
    t = np.where(kappa > 0, np.maximum(t_u, t_c), t_u)
    k = int(np.argmin(t))
    return SueOracleResult(float(alpha[k]), float(kappa[k]), float(t[k]))

import numpy as np
import pytest

from isccsim.baselines import (BudgetExceededError, equal_split_evaluate,
                               equal_split_partitions, exhaustive_search,
                               greedy_allocation, grid_partition_oracle_sue,
                               grid_partition_oracle_tue, solve_strategy)
from isccsim.delays import sue_delay, tue_delay
from isccsim.evaluation import ScenarioCache, evaluate, evaluate_totals
from isccsim.model import SubframeAllocation
from isccsim.optimizer import PsoConfig, pso_optimize

from conftest import make_scenario, uniform_alloc

FAST = PsoConfig(population=20, max_iterations=30, seed=7)


# --- equal split ------------------------------------------------------------


def test_equal_split_partition_values(tiny_scenario):
    alloc = uniform_alloc(tiny_scenario.n_bs)
    tues, sues, k_tue, k_sue = equal_split_partitions(tiny_scenario, alloc)
    assert len(tues) == tiny_scenario.n_tues
    assert len(sues) == tiny_scenario.n_sues
    assert k_tue == tiny_scenario.n_tues
    assert k_sue == tiny_scenario.n_sues
    assert all(p.alpha == p.beta == p.kappa == pytest.approx(1 / 3)
               for p in tues)
    assert all(p.alpha == p.kappa == 0.5 for p in sues)


def test_equal_split_evaluate_matches_delay_model(tiny_scenario, tiny_cache):
    alloc = uniform_alloc(tiny_scenario.n_bs, tau=0.7, tau_b=0.4, tau_us=0.35)
    tues, sues, k_tue, k_sue = equal_split_partitions(tiny_scenario, alloc)
    result = equal_split_evaluate(tiny_scenario, alloc, 0.5, cache=tiny_cache)
    i = 0
    for n, bs in enumerate(tiny_scenario.base_stations):
        for k in range(len(bs.tues)):
            bd = tue_delay(tiny_scenario, alloc, tues[i], k_tue, n, k)
            assert result.per_tue_delay[i] == pytest.approx(bd.t_total,
                                                            rel=1e-12)
            i += 1
    for k in range(tiny_scenario.n_sues):
        bd = sue_delay(tiny_scenario, alloc, sues[k], k_sue, k)
        assert result.per_sue_delay[k] == pytest.approx(bd.t_total, rel=1e-12)


def test_equal_split_never_beats_optimal_partitioning(tiny_scenario,
                                                      tiny_cache):
    alloc = uniform_alloc(tiny_scenario.n_bs)
    equal = equal_split_evaluate(tiny_scenario, alloc, 0.5, cache=tiny_cache)
    optimal = evaluate(tiny_scenario, alloc, 0.5, cache=tiny_cache)
    assert equal.total_delay_s >= optimal.total_delay_s - 1e-9
    assert equal.utility <= optimal.utility + 1e-9


# --- greedy -----------------------------------------------------------------


def test_greedy_step_validation(tiny_scenario):
    with pytest.raises(ValueError):
        greedy_allocation(tiny_scenario, 0.5, step=0.7)
    with pytest.raises(ValueError):
        greedy_allocation(tiny_scenario, 0.5, partitioning="magic")


def test_greedy_pure_delay_stays_all_communication(tiny_scenario, tiny_cache):
    alloc = greedy_allocation(tiny_scenario, 0.0, cache=tiny_cache)
    assert all(th == 0.0 for th in alloc.theta_ub)
    assert alloc.theta_us == 0.0


def test_greedy_pure_sensing_goes_all_sensing(tiny_scenario, tiny_cache):
    alloc = greedy_allocation(tiny_scenario, 1.0, cache=tiny_cache)
    assert all(th == pytest.approx(1.0) for th in alloc.theta_ub)
    assert alloc.theta_us == pytest.approx(1.0)


def test_greedy_never_beats_pso(small_scenario, small_cache):
    g = greedy_allocation(small_scenario, 0.5, cache=small_cache)
    greedy_u = evaluate(small_scenario, g, 0.5, cache=small_cache).utility
    _, pso_res, _ = pso_optimize(small_scenario, 0.5, PsoConfig(seed=1),
                                 cache=small_cache)
    assert pso_res.utility >= greedy_u


def test_greedy_monotone_improvement(tiny_scenario, tiny_cache):
    start = SubframeAllocation(
        tau_ub=(1.0,) * tiny_scenario.n_bs,
        theta_ub=(0.0,) * tiny_scenario.n_bs,
        tau_b=0.5, tau_us=0.5, theta_us=0.0)
    u_start = evaluate_totals(tiny_cache, start, 0.5)[0]
    alloc = greedy_allocation(tiny_scenario, 0.5, cache=tiny_cache)
    assert evaluate_totals(tiny_cache, alloc, 0.5)[0] >= u_start


# --- exhaustive -------------------------------------------------------------


def test_exhaustive_budget_guard(default_scenario):
    with pytest.raises(BudgetExceededError):
        exhaustive_search(default_scenario, 0.5, 0.05, max_grid_points=1e6)


def test_exhaustive_single_bs_matches_scan():
    # one task, cloud out of reach: the utility depends on one scalar only
    scenario = make_scenario(n_bs=1, tues_per_bs=1, radar_self=2.0,
                             cloud_rtt=1e9)
    cache = ScenarioCache.from_scenario(scenario)
    alloc_best, res = exhaustive_search(scenario, 0.5, 0.01, cache=cache)
    grid = np.linspace(0.0, 1.0, 101)
    scan = []
    for tau in grid:
        alloc = SubframeAllocation(tau_ub=(float(tau),),
                                   theta_ub=(float(1.0 - tau),),
                                   tau_b=0.5, tau_us=0.25, theta_us=0.25)
        scan.append(evaluate_totals(cache, alloc, 0.5)[0])
    assert res.utility == pytest.approx(max(scan), rel=1e-12)
    assert alloc_best.tau_ub[0] == pytest.approx(grid[int(np.argmax(scan))])


def test_exhaustive_matches_direct_grid_evaluation(tiny_scenario, tiny_cache):
    import itertools
    step, n = 0.25, 5
    grid = np.linspace(0.0, 1.0, n)
    best = -1.0
    for combo in itertools.product(range(n), repeat=tiny_scenario.n_bs):
        taus = tuple(float(grid[i]) for i in combo)
        for i in range(n):
            for j in range(n - i):
                alloc = SubframeAllocation(
                    tau_ub=taus, theta_ub=tuple(1.0 - t for t in taus),
                    tau_b=float(grid[i]), tau_us=float(grid[j]),
                    theta_us=max(0.0, float(1.0 - grid[i] - grid[j])))
                best = max(best, evaluate_totals(tiny_cache, alloc, 0.6)[0])
    _, res = exhaustive_search(tiny_scenario, 0.6, step, cache=tiny_cache)
    assert res.utility == pytest.approx(best, rel=1e-12)


def test_exhaustive_refinement_sanity(tiny_scenario, tiny_cache):
    # halving the grid step can only improve the grid optimum, and the
    # improvement must contract as the grid resolves the optimum
    _, coarse = exhaustive_search(tiny_scenario, 0.5, 0.25, cache=tiny_cache)
    _, fine = exhaustive_search(tiny_scenario, 0.5, 0.125, cache=tiny_cache)
    _, finer = exhaustive_search(tiny_scenario, 0.5, 0.0625, cache=tiny_cache)
    assert fine.utility >= coarse.utility - 1e-12
    assert finer.utility >= fine.utility - 1e-12
    assert (finer.utility - fine.utility
            <= fine.utility - coarse.utility + 1e-12)


def test_exhaustive_beats_greedy(tiny_scenario, tiny_cache):
    _, ex = exhaustive_search(tiny_scenario, 0.5, 0.05, cache=tiny_cache)
    g = greedy_allocation(tiny_scenario, 0.5, step=0.05, cache=tiny_cache)
    greedy_u = evaluate(tiny_scenario, g, 0.5, cache=tiny_cache).utility
    assert ex.utility >= greedy_u - 1e-9


# --- strategy dispatch --------------------------------------------------------


def test_solve_strategy_dispatch(tiny_scenario, tiny_cache):
    for strategy in ("jsatps", "greedy-otps", "greedy-equal"):
        alloc, result = solve_strategy(tiny_scenario, 0.5, strategy,
                                       pso_config=FAST, cache=tiny_cache)
        assert result.utility > 0
    with pytest.raises(ValueError):
        solve_strategy(tiny_scenario, 0.5, "annealing", cache=tiny_cache)


# --- oracles -----------------------------------------------------------------


def test_tue_oracle_finds_known_optimum():
    # symmetric cost: optimum splits so local time equals the edge chain
    res = grid_partition_oracle_tue(a=0.0, b=1e-6, c=1e-6, d=1e9, trip=1e9,
                                    data_bits=1e6, step=1e-3)
    assert res.kappa == 0.0
    assert res.alpha == pytest.approx(0.5, abs=1e-3)
    assert res.t_total == pytest.approx(0.5, rel=1e-2)


def test_sue_oracle_finds_known_optimum():
    res = grid_partition_oracle_sue(upload_s=1.0, local_s=1.0, trip=0.0,
                                    step=1e-5)
    assert res.alpha == pytest.approx(0.5, abs=1e-4)
    assert res.t_total == pytest.approx(0.5, rel=1e-3)


def test_sue_oracle_prefers_local_when_trip_dominates():
    res = grid_partition_oracle_sue(upload_s=0.1, local_s=1.0, trip=5.0,
                                    step=1e-4)
    assert res.kappa == 0.0
    assert res.t_total == pytest.approx(1.0)

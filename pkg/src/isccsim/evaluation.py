"""Network-wide evaluation: optimal partitions, total MI, total delay, utility.

``ScenarioCache`` packs per-user constants into arrays so the per-allocation
work inside optimizer loops is a handful of vector operations.  The solvers
here implement the same two-pass partitioning procedures as the per-task
modules; tests pin both paths against each other.

Strictly positive floors are applied to communication fractions during
evaluation (the trade-off problem treats them as strictly positive), so an
all-sensing allocation evaluates to the local-computing limit instead of
dividing by zero.  Sensing fractions are used exactly as given.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channel
from .delays import InfeasibleAllocationError, trip_delay_bs, trip_delay_sue
from .model import EvaluationResult, NetworkScenario, SubframeAllocation
from .partition_sue import split_local_cloud
from .partition_tue import split_local_edge, split_three_way

TAU_FLOOR = 1e-6

_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class ScenarioCache:
    """Per-user constants of a scenario packed for vectorized evaluation."""
    scenario: NetworkScenario
    n_bs: int
    k_bn: np.ndarray          # (N,) users per BS
    bs_idx: np.ndarray        # (K_B,) owning-BS ordinal per TUE
    tue_data_bits: np.ndarray
    tue_a0: np.ndarray        # upload s/bit at full airtime: K_bn / R
    tue_b: np.ndarray         # edge compute s/bit (CPU-shared)
    tue_c: np.ndarray         # local compute s/bit
    tue_mi: np.ndarray        # MI per unit sensing fraction
    trip_bs: np.ndarray       # (N,)
    inv_rate_b: np.ndarray    # (N,) 1 / backhaul rate
    sue_data_bits: np.ndarray
    sue_u0: np.ndarray        # upload s at full airtime, single cloud user
    sue_v: np.ndarray         # full local compute time
    sue_trip: np.ndarray
    sue_mi: np.ndarray
    sue_admitted: np.ndarray  # (K_S,) bool, allocation-independent
    k_us_c: int

    @classmethod
    def from_scenario(cls, scenario: NetworkScenario) -> "ScenarioCache":
        k_bn, bs_idx, d_bits, a0, b, c = [], [], [], [], [], []
        trips, inv_rb = [], []
        for n, bs in enumerate(scenario.base_stations):
            k_bn.append(len(bs.tues))
            trips.append(trip_delay_bs(scenario, n))
            inv_rb.append(1.0 / channel.rate_bs(scenario, n))
            for k, tue in enumerate(bs.tues):
                bs_idx.append(n)
                d_bits.append(tue.task.data_bits)
                a0.append(len(bs.tues) / channel.rate_tue(scenario, n, k))
                b.append(tue.task.workload_cycles_per_bit * len(bs.tues) / bs.edge_cpu_hz)
                c.append(tue.task.workload_cycles_per_bit / tue.local_cpu_hz)

        s_bits, u0, v, s_trips = [], [], [], []
        for k, sue in enumerate(scenario.sues):
            s_bits.append(sue.task.data_bits)
            u0.append(sue.task.data_bits / channel.rate_sue(scenario, k))
            v.append(sue.task.data_bits * sue.task.workload_cycles_per_bit
                     / sue.local_cpu_hz)
            s_trips.append(trip_delay_sue(scenario, k))

        tue_mi, sue_mi = channel.mi_coefficients(scenario)
        sue_v = np.array(v)
        sue_trip = np.array(s_trips)
        admitted = sue_v > sue_trip
        return cls(scenario=scenario, n_bs=scenario.n_bs,
                   k_bn=np.array(k_bn, dtype=np.int64),
                   bs_idx=np.array(bs_idx, dtype=np.int64),
                   tue_data_bits=np.array(d_bits), tue_a0=np.array(a0),
                   tue_b=np.array(b), tue_c=np.array(c), tue_mi=tue_mi,
                   trip_bs=np.array(trips), inv_rate_b=np.array(inv_rb),
                   sue_data_bits=np.array(s_bits), sue_u0=np.array(u0),
                   sue_v=sue_v, sue_trip=sue_trip, sue_mi=sue_mi,
                   sue_admitted=admitted, k_us_c=int(admitted.sum()))


@dataclass(frozen=True)
class TueSolution:
    alpha: np.ndarray
    beta: np.ndarray
    kappa: np.ndarray
    t_up: np.ndarray
    t_edge: np.ndarray
    t_bs_up: np.ndarray
    t_u: np.ndarray
    t_b: np.ndarray
    t_c: np.ndarray
    t_total: np.ndarray
    admitted: np.ndarray
    cloud_count: int


@dataclass(frozen=True)
class SueSolution:
    alpha: np.ndarray
    kappa: np.ndarray
    t_up: np.ndarray
    t_u: np.ndarray
    t_c: np.ndarray
    t_total: np.ndarray
    cloud_count: int


def solve_tues(cache: ScenarioCache, tau_ub: np.ndarray, tau_b: float) -> TueSolution:
    """Vectorized two-pass optimal partitioning of all TUE tasks."""
    tau_ub = np.asarray(tau_ub, dtype=float)
    if np.any(tau_ub <= 0):
        raise InfeasibleAllocationError("every BS needs positive communication airtime")
    a = cache.tue_a0 / tau_ub[cache.bs_idx]
    b, c, d_bits = cache.tue_b, cache.tue_c, cache.tue_data_bits
    trip = cache.trip_bs[cache.bs_idx]

    alpha_e, beta_e = split_local_edge(a, b, c)
    t_up_e = (1.0 - alpha_e) * d_bits * a
    t_edge_e = beta_e * d_bits * b
    admitted = t_edge_e > trip

    alpha, beta = alpha_e.copy(), beta_e.copy()
    kappa = np.zeros_like(alpha)
    t_bs_up = np.zeros_like(alpha)
    for attempt in (0, 1):  # at most one repeat after range fallbacks
        cloud_count = int(admitted.sum())
        if cloud_count == 0:
            break
        if tau_b <= 0:
            raise InfeasibleAllocationError(
                "cloud-admitted tasks need positive backhaul airtime")
        d = cloud_count * cache.inv_rate_b[cache.bs_idx] / tau_b
        m = admitted.copy()
        al, be, ka = split_three_way(a[m], b[m], c[m], d[m], trip[m], d_bits[m])
        bad = ((np.minimum(np.minimum(al, be), ka) < -_RANGE_TOL)
               | (np.maximum(np.maximum(al, be), ka) > 1.0 + _RANGE_TOL))
        if bad.any():
            idx = np.flatnonzero(m)
            admitted[idx[bad]] = False
            if attempt == 0:
                continue
            m[idx[bad]] = False
            al, be, ka = al[~bad], be[~bad], ka[~bad]
        alpha[m], beta[m], kappa[m] = al, be, ka
        t_bs_up[m] = ka * d_bits[m] * d[m]
        break

    cloud_count = int(admitted.sum())
    t_u = alpha * d_bits * c
    t_up = (1.0 - alpha) * d_bits * a
    t_edge = beta * d_bits * b
    t_b = t_up + t_edge
    t_c = t_up + t_bs_up + trip
    t_total = np.where(kappa > 0, np.maximum(np.maximum(t_u, t_b), t_c),
                       np.maximum(t_u, t_b))
    return TueSolution(alpha, beta, kappa, t_up, t_edge, t_bs_up,
                       t_u, t_b, t_c, t_total, admitted, cloud_count)


def solve_sues(cache: ScenarioCache, tau_us: float) -> SueSolution:
    """Vectorized two-pass optimal partitioning of all SUE tasks."""
    v, trip = cache.sue_v, cache.sue_trip
    alpha = np.ones_like(v)
    kappa = np.zeros_like(v)
    t_up = np.zeros_like(v)
    admitted = cache.sue_admitted.copy()

    for attempt in (0, 1):
        cloud_count = int(admitted.sum())
        if cloud_count == 0:
            break
        if tau_us <= 0:
            raise InfeasibleAllocationError(
                "cloud-admitted SUEs need positive uplink airtime")
        m = admitted.copy()
        u = cache.sue_u0[m] * cloud_count / tau_us
        al, ka = split_local_cloud(u, v[m], trip[m])
        bad = (np.minimum(al, ka) < -_RANGE_TOL) | (np.maximum(al, ka) > 1.0 + _RANGE_TOL)
        if bad.any():
            idx = np.flatnonzero(m)
            admitted[idx[bad]] = False
            if attempt == 0:
                continue
            m[idx[bad]] = False
            al, ka, u = al[~bad], ka[~bad], u[~bad]
        alpha[m], kappa[m] = al, ka
        t_up[m] = ka * u
        break

    cloud_count = int(admitted.sum())
    t_u = alpha * v
    t_c = t_up + trip
    t_total = np.where(kappa > 0, np.maximum(t_u, t_c), t_u)
    return SueSolution(alpha, kappa, t_up, t_u, t_c, t_total, cloud_count)


def utility_value(mi_total: float, delay_total: float, eta: float) -> float:
    """Weighted sensing/delay utility: MI^eta / delay^(1-eta)."""
    return mi_total ** eta / delay_total ** (1.0 - eta)


def effective_taus(alloc: SubframeAllocation) -> tuple[np.ndarray, float, float]:
    """Communication fractions with the evaluation floor applied."""
    tau_ub = np.maximum(np.asarray(alloc.tau_ub, dtype=float), TAU_FLOOR)
    return tau_ub, max(alloc.tau_b, TAU_FLOOR), max(alloc.tau_us, TAU_FLOOR)


def evaluate_totals(cache: ScenarioCache, alloc: SubframeAllocation, eta: float
                    ) -> tuple[float, float, float, TueSolution, SueSolution]:
    """(utility, total MI, total delay) plus the per-user solutions."""
    tau_ub, tau_b, tau_us = effective_taus(alloc)
    tue_sol = solve_tues(cache, tau_ub, tau_b)
    sue_sol = solve_sues(cache, tau_us)
    theta_ub = np.asarray(alloc.theta_ub, dtype=float)
    mi_total = float((cache.tue_mi * theta_ub[cache.bs_idx]).sum()
                     + (cache.sue_mi * alloc.theta_us).sum())
    delay_total = float(tue_sol.t_total.sum() + sue_sol.t_total.sum())
    return (utility_value(mi_total, delay_total, eta), mi_total, delay_total,
            tue_sol, sue_sol)


def evaluate(scenario: NetworkScenario, alloc: SubframeAllocation, eta: float,
             cache: ScenarioCache | None = None) -> EvaluationResult:
    """Evaluate one allocation under optimal task partitioning."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0,1], got {eta}")
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    utility, mi_total, delay_total, tue_sol, sue_sol = evaluate_totals(cache, alloc, eta)
    theta_ub = np.asarray(alloc.theta_ub, dtype=float)
    per_tue_mi = cache.tue_mi * theta_ub[cache.bs_idx]
    per_sue_mi = cache.sue_mi * alloc.theta_us
    return EvaluationResult(
        total_mi_bits=mi_total,
        total_delay_s=delay_total,
        per_tue_mi=tuple(per_tue_mi.tolist()),
        per_sue_mi=tuple(per_sue_mi.tolist()),
        per_tue_delay=tuple(tue_sol.t_total.tolist()),
        per_sue_delay=tuple(sue_sol.t_total.tolist()),
        utility=utility,
        eta=eta,
        cloud_count_tue=tue_sol.cloud_count,
        cloud_count_sue=sue_sol.cloud_count)

"""Task-completion delay model for terrestrial and satellite users.

Modeling assumptions encoded literally: result-download delay, cloud compute
delay, and satellite-to-gateway transmission delay are all zero; only the
round-trip propagation (user/BS -> satellite -> gateway -> cloud and back)
plus the configured gateway-cloud delay count against cloud offloading.
Edge CPU capacity is shared equally among a BS's users.
"""
from __future__ import annotations

from dataclasses import dataclass

from .channel import rate_bs, rate_sue, rate_tue
from .model import NetworkScenario, PartitionSue, PartitionTue, SubframeAllocation


class InfeasibleAllocationError(ValueError):
    """A subframe allocation gives zero airtime to a link that must carry data."""


@dataclass(frozen=True)
class TueDelayBreakdown:
    t_local: float    # local compute
    t_up: float       # user -> BS transmission
    t_edge: float     # edge compute
    t_bs_up: float    # BS -> satellite transmission
    t_trip: float     # round-trip propagation to the cloud
    t_u: float        # completion of the locally executed share
    t_b: float        # completion of the edge share
    t_c: float        # completion of the cloud share
    t_total: float


@dataclass(frozen=True)
class SueDelayBreakdown:
    t_local: float
    t_up: float       # user -> satellite transmission
    t_trip: float
    t_u: float
    t_c: float
    t_total: float


def trip_delay_bs(scenario: NetworkScenario, n: int) -> float:
    """Two-way propagation delay from BS n to the cloud, in seconds."""
    r = scenario.radio
    c = r.speed_of_light_m_per_s
    return (2.0 * scenario.base_stations[n].sat_path_m / c
            + 2.0 * r.gateway_path_m / c + r.cloud_rtt_s)


def trip_delay_sue(scenario: NetworkScenario, k: int) -> float:
    """Two-way propagation delay from SUE k to the cloud, in seconds."""
    r = scenario.radio
    c = r.speed_of_light_m_per_s
    return (2.0 * scenario.sues[k].sat_path_m / c
            + 2.0 * r.gateway_path_m / c + r.cloud_rtt_s)


def tue_delay(scenario: NetworkScenario, alloc: SubframeAllocation,
              partition: PartitionTue, cloud_count: int,
              n: int, k: int) -> TueDelayBreakdown:
    """Delay breakdown for one TUE task under a given split and cloud-user count."""
    bs = scenario.base_stations[n]
    tue = bs.tues[k]
    task = tue.task
    d_bits, cyc = task.data_bits, task.workload_cycles_per_bit
    k_bn = len(bs.tues)
    alpha, beta, kappa = partition.alpha, partition.beta, partition.kappa

    if kappa > 0 and cloud_count < 1:
        raise InfeasibleAllocationError(
            f"tue {tue.id}: cloud share requires a positive cloud-user count")
    if beta + kappa > 0 and alloc.tau_ub[n] <= 0:
        raise InfeasibleAllocationError(
            f"tue {tue.id}: offloading requires communication airtime at BS {bs.id}")
    if kappa > 0 and alloc.tau_b <= 0:
        raise InfeasibleAllocationError(
            f"tue {tue.id}: cloud offloading requires backhaul airtime")

    t_local = alpha * d_bits * cyc / tue.local_cpu_hz
    if beta + kappa > 0:
        t_up = (1.0 - alpha) * d_bits * k_bn / (rate_tue(scenario, n, k) * alloc.tau_ub[n])
    else:
        t_up = 0.0
    t_edge = beta * d_bits * cyc * k_bn / bs.edge_cpu_hz
    if kappa > 0:
        t_bs_up = kappa * d_bits * cloud_count / (rate_bs(scenario, n) * alloc.tau_b)
    else:
        t_bs_up = 0.0
    t_trip = trip_delay_bs(scenario, n)

    t_u = t_local
    t_b = t_up + t_edge
    t_c = t_up + t_bs_up + t_trip
    t_total = max(t_u, t_b, t_c) if kappa > 0 else max(t_u, t_b)
    return TueDelayBreakdown(t_local, t_up, t_edge, t_bs_up, t_trip,
                             t_u, t_b, t_c, t_total)


def sue_delay(scenario: NetworkScenario, alloc: SubframeAllocation,
              partition: PartitionSue, cloud_count: int,
              k: int) -> SueDelayBreakdown:
    """Delay breakdown for one SUE task under a given split and cloud-user count."""
    sue = scenario.sues[k]
    task = sue.task
    alpha, kappa = partition.alpha, partition.kappa

    if kappa > 0 and cloud_count < 1:
        raise InfeasibleAllocationError(
            f"sue {sue.id}: cloud share requires a positive cloud-user count")
    if kappa > 0 and alloc.tau_us <= 0:
        raise InfeasibleAllocationError(
            f"sue {sue.id}: cloud offloading requires uplink airtime")

    t_local = alpha * task.data_bits * task.workload_cycles_per_bit / sue.local_cpu_hz
    if kappa > 0:
        t_up = kappa * task.data_bits * cloud_count / (rate_sue(scenario, k) * alloc.tau_us)
    else:
        t_up = 0.0
    t_trip = trip_delay_sue(scenario, k)

    t_u = t_local
    t_c = t_up + t_trip
    t_total = max(t_u, t_c) if kappa > 0 else t_u
    return SueDelayBreakdown(t_local, t_up, t_trip, t_u, t_c, t_total)

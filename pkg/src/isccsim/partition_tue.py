"""Optimal task partitioning for terrestrial users.

For a fixed subframe allocation, each TUE task minimizes its completion delay
by equalizing the completion times of its executed shares.  Without cloud
offloading the local and edge shares are balanced in closed form; when the
edge compute time of that split exceeds the round-trip propagation to the
cloud, the task is admitted to the cloud and the three shares are balanced
instead.  The two-pass procedure (count admissions, then split) makes the
backhaul TDMA share consistent across users.

The closed forms are expressed with per-bit delay coefficients:
``a`` upload s/bit (TDMA-shared), ``b`` edge compute s/bit (CPU-shared),
``c`` local compute s/bit, ``d`` backhaul s/bit (TDMA-shared over admitted
users).  All split helpers accept scalars or numpy arrays.
"""
from __future__ import annotations

from .delays import InfeasibleAllocationError, TueDelayBreakdown, trip_delay_bs, tue_delay
from .model import NetworkScenario, PartitionTue, SubframeAllocation

# Ratios this far outside [0,1] trigger the local-edge fallback instead of
# being treated as rounding noise.
_RANGE_TOL = 1e-12


class PartitionOutOfRangeError(ValueError):
    """The three-way closed form produced a ratio outside [0,1]."""


def split_local_edge(a, b, c):
    """Local/edge fractions equalizing local and edge completion times."""
    s = a + b + c
    return (a + b) / s, c / s


def split_three_way(a, b, c, d, trip, data_bits):
    """Local/edge/cloud fractions equalizing all three completion times."""
    trip_per_bit = trip / data_bits
    alpha = ((b * d + a * (b + d) + trip_per_bit * b)
             / (b * d + (a + c) * (b + d)))
    beta = ((1.0 - alpha) * d + trip_per_bit) / (b + d)
    kappa = ((1.0 - alpha) * b - trip_per_bit) / (b + d)
    return alpha, beta, kappa


def per_bit_coefficients(scenario: NetworkScenario, alloc: SubframeAllocation,
                         n: int, k: int) -> tuple[float, float, float]:
    """(upload, edge, local) per-bit delay coefficients for one TUE task."""
    from .channel import rate_tue
    bs = scenario.base_stations[n]
    tue = bs.tues[k]
    k_bn = len(bs.tues)
    if alloc.tau_ub[n] <= 0:
        raise InfeasibleAllocationError(
            f"bs {bs.id}: zero communication airtime makes offloading impossible")
    a = k_bn / (rate_tue(scenario, n, k) * alloc.tau_ub[n])
    b = tue.task.workload_cycles_per_bit * k_bn / bs.edge_cpu_hz
    c = tue.task.workload_cycles_per_bit / tue.local_cpu_hz
    return a, b, c


def local_edge_split(scenario: NetworkScenario, alloc: SubframeAllocation,
                     n: int, k: int) -> tuple[PartitionTue, TueDelayBreakdown]:
    """Best split with no cloud share; local and edge shares finish together."""
    a, b, c = per_bit_coefficients(scenario, alloc, n, k)
    alpha, beta = split_local_edge(a, b, c)
    partition = PartitionTue(alpha=alpha, beta=beta, kappa=0.0)
    return partition, tue_delay(scenario, alloc, partition, 0, n, k)


def cloud_admission_tue(edge_breakdown: TueDelayBreakdown, trip: float) -> bool:
    """Offload to the cloud only if edge compute time strictly exceeds the trip."""
    return edge_breakdown.t_edge > trip


def count_cloud_tues(scenario: NetworkScenario, alloc: SubframeAllocation) -> int:
    """Number of TUE tasks admitted to the cloud under the given allocation."""
    count = 0
    for n, bs in enumerate(scenario.base_stations):
        trip = trip_delay_bs(scenario, n)
        for k in range(len(bs.tues)):
            _, breakdown = local_edge_split(scenario, alloc, n, k)
            count += int(cloud_admission_tue(breakdown, trip))
    return count


def local_edge_cloud_split(scenario: NetworkScenario, alloc: SubframeAllocation,
                           cloud_count: int, n: int, k: int
                           ) -> tuple[PartitionTue, TueDelayBreakdown]:
    """Best split across all three tiers; every share finishes together.

    Valid only for admitted tasks (edge compute time above the trip delay)
    with a positive backhaul share; raises PartitionOutOfRangeError if the
    closed form leaves [0,1], which callers resolve by falling back to the
    local-edge split.
    """
    from .channel import rate_bs
    if cloud_count < 1:
        raise InfeasibleAllocationError("cloud split requires a positive cloud-user count")
    if alloc.tau_b <= 0:
        raise InfeasibleAllocationError("cloud split requires backhaul airtime")
    a, b, c = per_bit_coefficients(scenario, alloc, n, k)
    d = cloud_count / (rate_bs(scenario, n) * alloc.tau_b)
    task = scenario.base_stations[n].tues[k].task
    trip = trip_delay_bs(scenario, n)
    alpha, beta, kappa = split_three_way(a, b, c, d, trip, task.data_bits)
    if (min(alpha, beta, kappa) < -_RANGE_TOL
            or max(alpha, beta, kappa) > 1.0 + _RANGE_TOL):
        raise PartitionOutOfRangeError(
            f"three-way split left [0,1] for tue {scenario.base_stations[n].tues[k].id}: "
            f"alpha={alpha}, beta={beta}, kappa={kappa}")
    partition = PartitionTue(alpha=alpha, beta=beta, kappa=kappa)
    return partition, tue_delay(scenario, alloc, partition, cloud_count, n, k)


def partition_all_tues(scenario: NetworkScenario, alloc: SubframeAllocation
                       ) -> tuple[list[PartitionTue], list[TueDelayBreakdown], int]:
    """Two-pass optimal partitioning of every TUE task.

    Pass 1 computes each task's local-edge split and the admission count;
    pass 2 applies the three-way split to admitted tasks with the shared
    count.  The count is not iterated further.  Tasks whose three-way ratios
    leave [0,1] numerically fall back to the local-edge split and are removed
    from the count once.
    """
    edge_results: list[tuple[PartitionTue, TueDelayBreakdown]] = []
    admitted: list[bool] = []
    indices: list[tuple[int, int]] = []
    for n, bs in enumerate(scenario.base_stations):
        trip = trip_delay_bs(scenario, n)
        for k in range(len(bs.tues)):
            pair = local_edge_split(scenario, alloc, n, k)
            edge_results.append(pair)
            admitted.append(cloud_admission_tue(pair[1], trip))
            indices.append((n, k))

    for _ in range(2):  # at most one repeat after range fallbacks
        cloud_count = sum(admitted)
        partitions: list[PartitionTue] = []
        breakdowns: list[TueDelayBreakdown] = []
        fell_back = False
        for i, (n, k) in enumerate(indices):
            if admitted[i]:
                try:
                    p, bd = local_edge_cloud_split(scenario, alloc, cloud_count, n, k)
                except PartitionOutOfRangeError:
                    admitted[i] = False
                    fell_back = True
                    p, bd = edge_results[i]
            else:
                p, bd = edge_results[i]
            partitions.append(p)
            breakdowns.append(bd)
        if not fell_back:
            break
    return partitions, breakdowns, sum(admitted)

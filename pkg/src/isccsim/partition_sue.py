"""Optimal task partitioning for satellite users.

A SUE task either runs fully locally, or, when the full local compute time
strictly exceeds the round-trip propagation to the cloud, splits between
local and cloud execution so that both shares finish together.  Admission
depends only on the task and the trip delay, so the cloud-user count is a
property of the scenario alone.
"""
from __future__ import annotations

from .delays import InfeasibleAllocationError, SueDelayBreakdown, sue_delay, trip_delay_sue
from .model import NetworkScenario, PartitionSue, SubframeAllocation

_RANGE_TOL = 1e-12


class PartitionOutOfRangeError(ValueError):
    """The local-cloud closed form produced a ratio outside [0,1]."""


def split_local_cloud(upload_s, local_s, trip):
    """Local/cloud fractions equalizing both completion times.

    ``upload_s`` is the time to ship the whole task over the TDMA-shared
    uplink; ``local_s`` the time to compute it all locally.
    """
    total = upload_s + local_s
    return (upload_s + trip) / total, (local_s - trip) / total


def local_only(scenario: NetworkScenario, k: int
               ) -> tuple[PartitionSue, SueDelayBreakdown]:
    """Run the whole task on the user; independent of any allocation."""
    partition = PartitionSue(alpha=1.0, kappa=0.0)
    alloc_free = SubframeAllocation(tau_ub=(), theta_ub=(),
                                    tau_b=0.0, tau_us=0.0, theta_us=1.0)
    return partition, sue_delay(scenario, alloc_free, partition, 0, k)


def cloud_admission_sue(local_breakdown: SueDelayBreakdown, trip: float) -> bool:
    """Offload only if full local compute time strictly exceeds the trip."""
    return local_breakdown.t_local > trip


def count_cloud_sues(scenario: NetworkScenario) -> int:
    """Number of SUE tasks admitted to the cloud (allocation-independent)."""
    count = 0
    for k in range(len(scenario.sues)):
        _, breakdown = local_only(scenario, k)
        count += int(cloud_admission_sue(breakdown, trip_delay_sue(scenario, k)))
    return count


def local_cloud_split(scenario: NetworkScenario, alloc: SubframeAllocation,
                      cloud_count: int, k: int
                      ) -> tuple[PartitionSue, SueDelayBreakdown]:
    """Best local/cloud split for an admitted task; both shares finish together."""
    from .channel import rate_sue
    if cloud_count < 1:
        raise InfeasibleAllocationError("cloud split requires a positive cloud-user count")
    if alloc.tau_us <= 0:
        raise InfeasibleAllocationError("cloud split requires uplink airtime")
    sue = scenario.sues[k]
    task = sue.task
    upload_s = task.data_bits * cloud_count / (rate_sue(scenario, k) * alloc.tau_us)
    local_s = task.data_bits * task.workload_cycles_per_bit / sue.local_cpu_hz
    alpha, kappa = split_local_cloud(upload_s, local_s, trip_delay_sue(scenario, k))
    if min(alpha, kappa) < -_RANGE_TOL or max(alpha, kappa) > 1.0 + _RANGE_TOL:
        raise PartitionOutOfRangeError(
            f"local-cloud split left [0,1] for sue {sue.id}: alpha={alpha}, kappa={kappa}")
    partition = PartitionSue(alpha=alpha, kappa=kappa)
    return partition, sue_delay(scenario, alloc, partition, cloud_count, k)


def partition_all_sues(scenario: NetworkScenario, alloc: SubframeAllocation
                       ) -> tuple[list[PartitionSue], list[SueDelayBreakdown], int]:
    """Two-pass optimal partitioning of every SUE task.

    Pass 1 counts admissions; pass 2 splits admitted tasks with the shared
    count.  A range fallback (possible only under exotic numerics) demotes
    the task to local-only and repeats pass 2 once with the reduced count.
    """
    local_results = [local_only(scenario, k) for k in range(len(scenario.sues))]
    admitted = [cloud_admission_sue(bd, trip_delay_sue(scenario, k))
                for k, (_, bd) in enumerate(local_results)]

    for _ in range(2):
        cloud_count = sum(admitted)
        partitions: list[PartitionSue] = []
        breakdowns: list[SueDelayBreakdown] = []
        fell_back = False
        for k in range(len(scenario.sues)):
            if admitted[k]:
                try:
                    p, bd = local_cloud_split(scenario, alloc, cloud_count, k)
                except PartitionOutOfRangeError:
                    admitted[k] = False
                    fell_back = True
                    p, bd = local_results[k]
            else:
                p, bd = local_results[k]
            partitions.append(p)
            breakdowns.append(bd)
        if not fell_back:
            break
    return partitions, breakdowns, sum(admitted)

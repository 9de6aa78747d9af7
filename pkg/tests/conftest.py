"""Shared fixtures and hand-built scenario factories for the test suite."""
from __future__ import annotations

import pytest

from isccsim.evaluation import ScenarioCache
from isccsim.generator import generate_scenario
from isccsim.model import (BaseStation, NetworkScenario, RadioParams, Satellite,
                           Sue, SubframeAllocation, Task, Tue)


def make_scenario(n_bs=1, tues_per_bs=1, n_sues=0, *,
                  b1=1e7, b2=4e7, noise_density=1e-14, frame_bs=0.01,
                  frame_sat=0.01, tue_snr=1.0, bs_snr=1.0, sue_snr=1.0,
                  radar_self=1.0, radar_cross=0.0, tue_power=1.0, sue_power=1.0,
                  bs_power=1.0, data_bits=5e5, workload=1000.0, local_cpu=5e8,
                  edge_cpu=5e9, orbit_m=8e6, gateway_m=None, cloud_rtt=0.1,
                  sue_data_bits=None, sue_local_cpu=None) -> NetworkScenario:
    """Scenario with unit antenna gains and channel gains chosen to hit exact SNRs.

    With antenna gains of 1 the received SNR is gain*power/(B*N0), so setting
    the channel gain to snr*B*N0/power makes every rate exactly B*log2(1+snr).
    """
    radio = RadioParams(bandwidth_bs_hz=b1, bandwidth_sat_hz=b2,
                        frame_bs_s=frame_bs, frame_sat_s=frame_sat,
                        noise_density_w_per_hz=noise_density, carrier_hz=28e9,
                        speed_of_light_m_per_s=3e8, cloud_rtt_s=cloud_rtt,
                        gateway_path_m=orbit_m if gateway_m is None else gateway_m)
    tue_gain = tue_snr * b1 * noise_density / tue_power
    bs_gain = bs_snr * b2 * noise_density / bs_power
    sue_gain = sue_snr * b2 * noise_density / sue_power

    base_stations = []
    for n in range(n_bs):
        tue_ids = [f"bs{n}-tue{k}" for k in range(tues_per_bs)]
        tues = tuple(Tue(
            id=tue_ids[k], tx_power_w=tue_power, tx_antenna_gain=1.0,
            local_cpu_hz=local_cpu,
            task=Task(data_bits=data_bits, workload_cycles_per_bit=workload),
            comm_gain=tue_gain, radar_gain_self=radar_self,
            radar_gain_cross={other: radar_cross * radar_self
                              for other in tue_ids if other != tue_ids[k]})
            for k in range(tues_per_bs))
        base_stations.append(BaseStation(
            id=f"bs{n}", tx_power_w=bs_power, tx_antenna_gain=1.0,
            rx_antenna_gain=1.0, edge_cpu_hz=edge_cpu, sat_path_m=orbit_m,
            tues=tues, comm_gain=bs_gain))

    sues = tuple(Sue(
        id=f"sue{k}", tx_power_w=sue_power, tx_antenna_gain=1.0,
        local_cpu_hz=sue_local_cpu or local_cpu,
        task=Task(data_bits=sue_data_bits or data_bits,
                  workload_cycles_per_bit=workload),
        sat_path_m=orbit_m, comm_gain=sue_gain, radar_gain_self=radar_self)
        for k in range(n_sues))

    return NetworkScenario(radio=radio, satellite=Satellite(
        orbit_altitude_m=orbit_m, rx_antenna_gain=1.0),
        base_stations=tuple(base_stations), sues=sues, rng_seed=0)


def make_tue_instance(a: float, b: float, c: float, data_bits: float,
                      d: float | None = None, trip: float | None = None,
                      tau_ub: float = 1.0, tau_b: float = 1.0
                      ) -> tuple[NetworkScenario, SubframeAllocation]:
    """Single-TUE scenario realizing exact per-bit delay coefficients.

    The upload coefficient a = 1/(R*tau) is hit through the SNR, the edge
    coefficient b through the edge CPU, the local coefficient c through the
    user CPU, the backhaul coefficient d (one cloud user) through the
    satellite SNR, and the trip delay through the gateway-cloud entry with
    negligible (1 m) propagation paths.
    """
    workload = 1000.0
    b1, b2 = 1e7, 4e7
    tue_snr = 2.0 ** (1.0 / (a * tau_ub * b1)) - 1.0
    bs_snr = (2.0 ** (1.0 / (d * tau_b * b2)) - 1.0) if d is not None else 1.0
    scenario = make_scenario(
        b1=b1, b2=b2, tue_snr=tue_snr, bs_snr=bs_snr,
        data_bits=data_bits, workload=workload,
        local_cpu=workload / c, edge_cpu=workload / b,
        orbit_m=1.0, cloud_rtt=trip if trip is not None else 0.1)
    alloc = SubframeAllocation(tau_ub=(tau_ub,), theta_ub=(1.0 - tau_ub,),
                               tau_b=tau_b, tau_us=0.0,
                               theta_us=1.0 - tau_b)
    return scenario, alloc


def make_sue_instance(upload_s: float, local_s: float, trip: float,
                      data_bits: float = 5e5, tau_us: float = 1.0
                      ) -> tuple[NetworkScenario, SubframeAllocation]:
    """Single-SUE scenario realizing exact full-task upload/local times."""
    workload = 1000.0
    b2 = 4e7
    rate = data_bits / (upload_s * tau_us)
    sue_snr = 2.0 ** (rate / b2) - 1.0
    scenario = make_scenario(
        n_bs=1, tues_per_bs=1, n_sues=1, b2=b2, sue_snr=sue_snr,
        sue_data_bits=data_bits, workload=workload,
        sue_local_cpu=data_bits * workload / local_s,
        orbit_m=1.0, cloud_rtt=trip)
    alloc = SubframeAllocation(tau_ub=(0.5,), theta_ub=(0.5,), tau_b=0.0,
                               tau_us=tau_us, theta_us=1.0 - tau_us)
    return scenario, alloc


def uniform_alloc(n_bs: int, tau: float = 0.5, tau_b: float = 0.35,
                  tau_us: float = 0.35) -> SubframeAllocation:
    return SubframeAllocation(tau_ub=(tau,) * n_bs, theta_ub=(1.0 - tau,) * n_bs,
                              tau_b=tau_b, tau_us=tau_us,
                              theta_us=1.0 - tau_b - tau_us)


@pytest.fixture(scope="session")
def default_scenario():
    return generate_scenario(seed=1)


@pytest.fixture(scope="session")
def default_cache(default_scenario):
    return ScenarioCache.from_scenario(default_scenario)


@pytest.fixture(scope="session")
def small_scenario():
    return generate_scenario(seed=1, n_bs=5, n_sues=10)


@pytest.fixture(scope="session")
def small_cache(small_scenario):
    return ScenarioCache.from_scenario(small_scenario)


@pytest.fixture(scope="session")
def tiny_scenario():
    return generate_scenario(seed=2, n_bs=2, tues_per_bs=3, n_sues=4)


@pytest.fixture(scope="session")
def tiny_cache(tiny_scenario):
    return ScenarioCache.from_scenario(tiny_scenario)

"""Scenario generation from the default simulation parameter set.

Defaults: one satellite at 8,000 km, 10 BSs with 5 TUEs each inside 500 m
cells, 30 SUEs, 28 GHz carrier, 20/40 MHz terrestrial/satellite bandwidth,
10 ms frames, 30 dBm user and 40 dBm BS transmit power, -174 dBm/Hz noise
density, 18 dB antenna gains on terrestrial links and 40 dB on satellite
links, task payloads uniform in [100, 900] Kb at 1000 cycle/bit, 5e8 Hz user
and 5e9 Hz edge CPUs, and a 100 ms gateway-cloud round trip.

Generation is deterministic in the seed: identical seeds give identical
scenarios (and identical saved files).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkBudgetModel, materialize_gains
from .model import (BaseStation, NetworkScenario, RadioParams, Satellite, Sue,
                    Task, Tue, dbm_to_watts, db_to_linear)

KILOBIT = 1e3  # bits


@dataclass(frozen=True)
class ScenarioParams:
    n_bs: int = 10
    tues_per_bs: int = 5
    n_sues: int = 30
    cell_radius_m: float = 500.0
    min_link_distance_m: float = 10.0
    orbit_altitude_km: float = 8000.0
    carrier_hz: float = 28.0e9
    bandwidth_bs_hz: float = 20.0e6
    bandwidth_sat_hz: float = 40.0e6
    frame_bs_s: float = 0.01
    frame_sat_s: float = 0.01
    user_power_dbm: float = 30.0
    bs_power_dbm: float = 40.0
    noise_density_dbm_per_hz: float = -174.0
    terrestrial_gain_db: float = 18.0
    satellite_gain_db: float = 40.0
    data_kb_low: float = 100.0
    data_kb_high: float = 900.0
    workload_cycles_per_bit: float = 1000.0
    user_cpu_hz: float = 5.0e8
    edge_cpu_hz: float = 5.0e9
    cloud_rtt_s: float = 0.1
    speed_of_light_m_per_s: float = 3.0e8
    sigma_rcs_m2: float = 1.0
    sensing_range_m: float = 10.0
    cross_gain_factor: float = 0.1
    excess_loss_db: float = 0.0

    def with_mean_data_kb(self, mean_kb: float) -> "ScenarioParams":
        """Scale the payload range around a new mean, keeping the default spread."""
        return dataclasses.replace(self, data_kb_low=0.2 * mean_kb,
                                   data_kb_high=1.8 * mean_kb)


def link_budget_for(params: ScenarioParams) -> LinkBudgetModel:
    return LinkBudgetModel(frequency_hz=params.carrier_hz,
                           sigma_rcs_m2=params.sigma_rcs_m2,
                           sensing_range_m=params.sensing_range_m,
                           cross_gain_factor=params.cross_gain_factor,
                           excess_loss_db=params.excess_loss_db)


def generate_scenario(params: ScenarioParams | None = None, seed: int = 1,
                      **overrides) -> NetworkScenario:
    """Build a fully materialized scenario; overrides patch individual params."""
    params = dataclasses.replace(params or ScenarioParams(), **overrides)
    if params.n_bs < 1 or params.tues_per_bs < 1 or params.n_sues < 0:
        raise ValueError("scenario needs at least one BS with one TUE")
    if not 0 < params.data_kb_low <= params.data_kb_high:
        raise ValueError("payload range must be positive and ordered")
    rng = np.random.default_rng(seed)

    altitude_m = params.orbit_altitude_km * 1e3
    radio = RadioParams(
        bandwidth_bs_hz=params.bandwidth_bs_hz,
        bandwidth_sat_hz=params.bandwidth_sat_hz,
        frame_bs_s=params.frame_bs_s,
        frame_sat_s=params.frame_sat_s,
        noise_density_w_per_hz=dbm_to_watts(params.noise_density_dbm_per_hz),
        carrier_hz=params.carrier_hz,
        speed_of_light_m_per_s=params.speed_of_light_m_per_s,
        cloud_rtt_s=params.cloud_rtt_s,
        gateway_path_m=altitude_m)
    satellite = Satellite(orbit_altitude_m=altitude_m,
                          rx_antenna_gain=db_to_linear(params.satellite_gain_db))

    user_power = dbm_to_watts(params.user_power_dbm)
    terr_gain = db_to_linear(params.terrestrial_gain_db)
    sat_gain = db_to_linear(params.satellite_gain_db)

    def draw_task() -> Task:
        bits = rng.uniform(params.data_kb_low, params.data_kb_high) * KILOBIT
        return Task(data_bits=bits,
                    workload_cycles_per_bit=params.workload_cycles_per_bit)

    base_stations = []
    for n in range(params.n_bs):
        # BSs are far apart: cells never overlap and sensing stays intra-cell.
        center = (40.0 * params.cell_radius_m * n, 0.0)
        tues = []
        for k in range(params.tues_per_bs):
            radius = math.sqrt(rng.uniform(params.min_link_distance_m ** 2,
                                           params.cell_radius_m ** 2))
            angle = rng.uniform(0.0, 2.0 * math.pi)
            tues.append(Tue(
                id=f"bs{n}-tue{k}",
                tx_power_w=user_power,
                tx_antenna_gain=terr_gain,
                local_cpu_hz=params.user_cpu_hz,
                task=draw_task(),
                position_m=(center[0] + radius * math.cos(angle),
                            center[1] + radius * math.sin(angle))))
        base_stations.append(BaseStation(
            id=f"bs{n}",
            tx_power_w=dbm_to_watts(params.bs_power_dbm),
            tx_antenna_gain=sat_gain,
            rx_antenna_gain=terr_gain,
            edge_cpu_hz=params.edge_cpu_hz,
            sat_path_m=altitude_m,
            tues=tuple(tues),
            position_m=center))

    sues = []
    for k in range(params.n_sues):
        position = (rng.uniform(-50.0e3, 50.0e3), rng.uniform(100.0e3, 200.0e3))
        sues.append(Sue(
            id=f"sue{k}",
            tx_power_w=user_power,
            tx_antenna_gain=sat_gain,
            local_cpu_hz=params.user_cpu_hz,
            task=draw_task(),
            sat_path_m=altitude_m,
            position_m=position))

    bare = NetworkScenario(radio=radio, satellite=satellite,
                           base_stations=tuple(base_stations), sues=tuple(sues),
                           rng_seed=seed)
    return materialize_gains(bare, link_budget_for(params), seed=seed)

"""Link gains, achievable rates, radar SINR, and radar mutual information.

The default link budget is free-space path loss for communication links and
the two-way radar equation for sensing self-paths.  Cross sensing gains
(interference between users of the same BS) default to the victim's self gain
scaled by a configurable factor.  All gains can be overridden from a CSV
table, so any experiment remains reproducible from its scenario file alone.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .model import (NetworkScenario, SubframeAllocation, db_to_linear)

FREE_SPACE = "free-space"
FIXED_GAIN = "fixed-gain"


@dataclass(frozen=True)
class LinkBudgetModel:
    """Parameters of the default gain models.

    ``kind`` selects free-space/radar-equation gains or a constant-gain table.
    ``sensing_range_m`` is the user-to-target distance for radar self paths;
    ``cross_gain_factor`` scales the victim's self gain into the interference
    gain from each co-located user; ``excess_loss_db`` is extra attenuation
    applied to satellite links only.
    """
    kind: str = FREE_SPACE
    frequency_hz: float = 28.0e9
    sigma_rcs_m2: float = 1.0
    sensing_range_m: float = 10.0
    cross_gain_factor: float = 0.1
    excess_loss_db: float = 0.0
    fixed_gain: float = 1.0

    def __post_init__(self):
        if self.kind not in (FREE_SPACE, FIXED_GAIN):
            raise ValueError(f"unknown link budget kind: {self.kind!r}")
        if not self.frequency_hz > 0:
            raise ValueError("frequency_hz must be strictly positive")


def free_space_gain(distance_m: float, wavelength_m: float) -> float:
    """One-way Friis propagation gain (antenna gains excluded)."""
    return (wavelength_m / (4.0 * math.pi * distance_m)) ** 2


def radar_two_way_gain(distance_m: float, wavelength_m: float, rcs_m2: float) -> float:
    """Two-way radar-equation gain: lambda^2 * rcs / ((4 pi)^3 d^4)."""
    return wavelength_m ** 2 * rcs_m2 / ((4.0 * math.pi) ** 3 * distance_m ** 4)


def _distance(p: tuple[float, ...], q: tuple[float, ...]) -> float:
    return math.dist(p, q)


def materialize_gains(scenario: NetworkScenario, model: LinkBudgetModel,
                      seed: int = 0) -> NetworkScenario:
    """Populate every communication and radar gain from the link budget model.

    Requires positions (TUE/BS) and satellite path lengths to be present.
    The current model kinds are deterministic; ``seed`` is accepted so that
    randomized models can be added without changing call sites.
    """
    del seed
    lam = scenario.radio.speed_of_light_m_per_s / model.frequency_hz
    excess = db_to_linear(-model.excess_loss_db)

    def comm(distance_m: float, satellite_link: bool) -> float:
        if model.kind == FIXED_GAIN:
            return model.fixed_gain
        g = free_space_gain(distance_m, lam)
        return g * excess if satellite_link else g

    def radar_self() -> float:
        if model.kind == FIXED_GAIN:
            return model.fixed_gain
        return radar_two_way_gain(model.sensing_range_m, lam, model.sigma_rcs_m2)

    new_bss = []
    for bs in scenario.base_stations:
        new_tues = []
        for tue in bs.tues:
            if tue.position_m is None or bs.position_m is None:
                raise ValueError(f"tue {tue.id}: positions required to derive gains")
            self_gain = radar_self()
            cross = {other.id: (model.fixed_gain if model.kind == FIXED_GAIN
                                else model.cross_gain_factor * self_gain)
                     for other in bs.tues if other.id != tue.id}
            new_tues.append(dataclasses.replace(
                tue,
                comm_gain=comm(_distance(tue.position_m, bs.position_m), False),
                radar_gain_self=self_gain,
                radar_gain_cross=cross))
        new_bss.append(dataclasses.replace(
            bs, tues=tuple(new_tues), comm_gain=comm(bs.sat_path_m, True)))

    new_sues = [dataclasses.replace(
        sue, comm_gain=comm(sue.sat_path_m, True), radar_gain_self=radar_self())
        for sue in scenario.sues]

    return dataclasses.replace(
        scenario, base_stations=tuple(new_bss), sues=tuple(new_sues))


def apply_gain_overrides(scenario: NetworkScenario,
                         rows: list[dict[str, str]]) -> NetworkScenario:
    """Apply CSV override rows (link_type, from_id, to_id, gain_linear).

    link_type "comm": from_id is a user or BS id, to_id the BS id or
    "satellite".  link_type "radar": from_id the emitting user, to_id the
    sensing user (equal ids address the self path).
    """
    comm: dict[tuple[str, str], float] = {}
    radar: dict[tuple[str, str], float] = {}
    for row in rows:
        key = (row["from_id"], row["to_id"])
        gain = float(row["gain_linear"])
        if gain < 0:
            raise ValueError(f"override gain must be nonnegative: {row}")
        kind = row["link_type"]
        if kind == "comm":
            comm[key] = gain
        elif kind == "radar":
            radar[key] = gain
        else:
            raise ValueError(f"unknown link_type {kind!r}")

    new_bss = []
    for bs in scenario.base_stations:
        new_tues = []
        for tue in bs.tues:
            cross = dict(tue.radar_gain_cross)
            for other in cross:
                if (other, tue.id) in radar:
                    cross[other] = radar[(other, tue.id)]
            new_tues.append(dataclasses.replace(
                tue,
                comm_gain=comm.get((tue.id, bs.id), tue.comm_gain),
                radar_gain_self=radar.get((tue.id, tue.id), tue.radar_gain_self),
                radar_gain_cross=cross))
        new_bss.append(dataclasses.replace(
            bs, tues=tuple(new_tues),
            comm_gain=comm.get((bs.id, "satellite"), bs.comm_gain)))
    new_sues = [dataclasses.replace(
        sue,
        comm_gain=comm.get((sue.id, "satellite"), sue.comm_gain),
        radar_gain_self=radar.get((sue.id, sue.id), sue.radar_gain_self))
        for sue in scenario.sues]
    return dataclasses.replace(
        scenario, base_stations=tuple(new_bss), sues=tuple(new_sues))


# --- radar SINR -------------------------------------------------------------

def radar_sinr_tue(scenario: NetworkScenario, n: int, k: int) -> float:
    """Sensing SINR of one terrestrial user, with intra-BS interference."""
    bs = scenario.base_stations[n]
    tue = bs.tues[k]
    noise = scenario.radio.bandwidth_bs_hz * scenario.radio.noise_density_w_per_hz
    interference = sum(tue.radar_gain_cross[other.id] * other.tx_power_w
                       for j, other in enumerate(bs.tues) if j != k)
    return tue.radar_gain_self * tue.tx_power_w / (interference + noise)


def radar_sinr_sue(scenario: NetworkScenario, k: int) -> float:
    """Sensing SNR of one satellite user (satellite users are isolated)."""
    sue = scenario.sues[k]
    noise = scenario.radio.bandwidth_sat_hz * scenario.radio.noise_density_w_per_hz
    return sue.radar_gain_self * sue.tx_power_w / noise


# --- radar mutual information ------------------------------------------------

def radar_mi_tue(scenario: NetworkScenario, alloc: SubframeAllocation,
                 n: int, k: int) -> float:
    """Per-frame sensing mutual information of one terrestrial user, in bits."""
    r = scenario.radio
    return (alloc.theta_ub[n] * r.frame_bs_s * r.bandwidth_bs_hz
            * math.log2(1.0 + radar_sinr_tue(scenario, n, k)))


def radar_mi_sue(scenario: NetworkScenario, alloc: SubframeAllocation,
                 k: int) -> float:
    r = scenario.radio
    return (alloc.theta_us * r.frame_sat_s * r.bandwidth_sat_hz
            * math.log2(1.0 + radar_sinr_sue(scenario, k)))


# --- achievable rates (full bandwidth; TDMA sharing applied by callers) -------

def rate_tue(scenario: NetworkScenario, n: int, k: int) -> float:
    """Full-bandwidth uplink rate of a TUE toward its BS, in bit/s."""
    bs = scenario.base_stations[n]
    tue = bs.tues[k]
    r = scenario.radio
    noise = r.bandwidth_bs_hz * r.noise_density_w_per_hz
    snr = tue.tx_antenna_gain * bs.rx_antenna_gain * tue.comm_gain * tue.tx_power_w / noise
    return r.bandwidth_bs_hz * math.log2(1.0 + snr)


def rate_bs(scenario: NetworkScenario, n: int) -> float:
    """Full-bandwidth backhaul rate of a BS toward the satellite, in bit/s."""
    bs = scenario.base_stations[n]
    r = scenario.radio
    noise = r.bandwidth_sat_hz * r.noise_density_w_per_hz
    snr = (bs.tx_antenna_gain * scenario.satellite.rx_antenna_gain
           * bs.comm_gain * bs.tx_power_w / noise)
    return r.bandwidth_sat_hz * math.log2(1.0 + snr)


def rate_sue(scenario: NetworkScenario, k: int) -> float:
    """Full-bandwidth uplink rate of a SUE toward the satellite, in bit/s."""
    sue = scenario.sues[k]
    r = scenario.radio
    noise = r.bandwidth_sat_hz * r.noise_density_w_per_hz
    snr = (sue.tx_antenna_gain * scenario.satellite.rx_antenna_gain
           * sue.comm_gain * sue.tx_power_w / noise)
    return r.bandwidth_sat_hz * math.log2(1.0 + snr)


def mi_coefficients(scenario: NetworkScenario) -> tuple[np.ndarray, np.ndarray]:
    """Per-user MI per unit sensing fraction: (TUEs flattened by BS, SUEs)."""
    r = scenario.radio
    tue_mi = np.array([r.frame_bs_s * r.bandwidth_bs_hz
                       * math.log2(1.0 + radar_sinr_tue(scenario, n, k))
                       for n, bs in enumerate(scenario.base_stations)
                       for k in range(len(bs.tues))])
    sue_mi = np.array([r.frame_sat_s * r.bandwidth_sat_hz
                       * math.log2(1.0 + radar_sinr_sue(scenario, k))
                       for k in range(len(scenario.sues))])
    return tue_mi, sue_mi

"""Domain types for the satellite-terrestrial sensing/communication/computing model.

All physical quantities are stored in SI linear units (Hz, s, m, W, linear
gains).  dBm / dB values are accepted only at the config boundary (see
scenario_io).  Scenario-side types are plain records whose invariants are
checked by :func:`validate_scenario`; decision-side types (subframe
allocations, task partitions) self-validate on construction because the
optimizer must never produce an invalid one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


def indicator(x: float) -> int:
    """Offloading indicator: 1 for strictly positive input, 0 for zero."""
    if x < 0:
        raise ValueError(f"indicator requires a nonnegative input, got {x}")
    return 1 if x > 0 else 0


@dataclass(frozen=True)
class RadioParams:
    bandwidth_bs_hz: float          # terrestrial bandwidth
    bandwidth_sat_hz: float         # satellite bandwidth
    frame_bs_s: float               # terrestrial frame length
    frame_sat_s: float              # satellite frame length
    noise_density_w_per_hz: float   # noise power spectral density, linear
    carrier_hz: float
    speed_of_light_m_per_s: float = 3.0e8
    cloud_rtt_s: float = 0.1        # two-way gateway-cloud delay
    gateway_path_m: float = 8.0e6   # satellite-gateway path length


@dataclass(frozen=True)
class Task:
    """Computation task: payload size in bits and per-bit CPU workload."""
    data_bits: float
    workload_cycles_per_bit: float


@dataclass(frozen=True)
class Tue:
    """Terrestrial user: senses, communicates with its BS, computes locally."""
    id: str
    tx_power_w: float
    tx_antenna_gain: float
    local_cpu_hz: float
    task: Task
    comm_gain: float | None = None              # uplink channel gain to the BS
    radar_gain_self: float | None = None        # own-echo propagation gain
    radar_gain_cross: dict[str, float] = field(default_factory=dict)
    position_m: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Sue:
    """Satellite user: senses, offloads to the cloud over the satellite link."""
    id: str
    tx_power_w: float
    tx_antenna_gain: float
    local_cpu_hz: float
    task: Task
    sat_path_m: float
    comm_gain: float | None = None
    radar_gain_self: float | None = None
    position_m: tuple[float, ...] | None = None


@dataclass(frozen=True)
class BaseStation:
    """Terrestrial BS with an edge CPU and a backhaul link to the satellite."""
    id: str
    tx_power_w: float
    tx_antenna_gain: float          # toward the satellite
    rx_antenna_gain: float          # toward its users
    edge_cpu_hz: float
    sat_path_m: float
    tues: tuple[Tue, ...]
    comm_gain: float | None = None  # backhaul channel gain to the satellite
    position_m: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Satellite:
    orbit_altitude_m: float
    rx_antenna_gain: float


@dataclass(frozen=True)
class NetworkScenario:
    radio: RadioParams
    satellite: Satellite
    base_stations: tuple[BaseStation, ...]
    sues: tuple[Sue, ...]
    rng_seed: int = 0

    @property
    def n_bs(self) -> int:
        return len(self.base_stations)

    @property
    def n_tues(self) -> int:
        return sum(len(bs.tues) for bs in self.base_stations)

    @property
    def n_sues(self) -> int:
        return len(self.sues)


_SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class SubframeAllocation:
    """Per-frame time split between sensing and communication.

    Each BS frame splits into a communication fraction ``tau_ub[n]`` and a
    sensing fraction ``theta_ub[n]`` summing to one.  The satellite frame
    splits three ways: BS backhaul ``tau_b``, SUE uplink ``tau_us``, and SUE
    sensing ``theta_us``.
    """
    tau_ub: tuple[float, ...]
    theta_ub: tuple[float, ...]
    tau_b: float
    tau_us: float
    theta_us: float

    def __post_init__(self):
        if len(self.tau_ub) != len(self.theta_ub):
            raise ValueError("tau_ub and theta_ub must have one entry per BS")
        for n, (t, h) in enumerate(zip(self.tau_ub, self.theta_ub)):
            if t < -_SIMPLEX_TOL or h < -_SIMPLEX_TOL or abs(t + h - 1.0) > _SIMPLEX_TOL:
                raise ValueError(
                    f"BS {n} subframe fractions invalid: tau={t}, theta={h}")
        parts = (self.tau_b, self.tau_us, self.theta_us)
        if min(parts) < -_SIMPLEX_TOL or abs(sum(parts) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(
                f"satellite subframe fractions invalid: {parts}")


@dataclass(frozen=True)
class PartitionTue:
    """Three-way task split: alpha locally, beta at the edge, kappa in the cloud."""
    alpha: float
    beta: float
    kappa: float

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.kappa)
        if min(vals) < -_SIMPLEX_TOL or max(vals) > 1.0 + _SIMPLEX_TOL:
            raise ValueError(f"partition ratios out of [0,1]: {vals}")
        if abs(sum(vals) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"partition ratios must sum to 1: {vals}")


@dataclass(frozen=True)
class PartitionSue:
    """Two-way task split: alpha locally, kappa in the cloud."""
    alpha: float
    kappa: float

    def __post_init__(self):
        vals = (self.alpha, self.kappa)
        if min(vals) < -_SIMPLEX_TOL or max(vals) > 1.0 + _SIMPLEX_TOL:
            raise ValueError(f"partition ratios out of [0,1]: {vals}")
        if abs(sum(vals) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"partition ratios must sum to 1: {vals}")


@dataclass(frozen=True)
class EvaluationResult:
    """Network-wide sensing/delay/utility figures for one allocation."""
    total_mi_bits: float
    total_delay_s: float
    per_tue_mi: tuple[float, ...]
    per_sue_mi: tuple[float, ...]
    per_tue_delay: tuple[float, ...]
    per_sue_delay: tuple[float, ...]
    utility: float
    eta: float
    cloud_count_tue: int
    cloud_count_sue: int


def _positive(violations: list[str], where: str, **fields: float) -> None:
    for name, value in fields.items():
        if value is None or not value > 0:
            violations.append(f"{where}: {name} must be strictly positive, got {value}")


def _gain_ok(violations: list[str], where: str, **fields) -> None:
    for name, value in fields.items():
        if value is None:
            violations.append(f"{where}: {name} is not materialized")
        elif value < 0:
            violations.append(f"{where}: {name} must be nonnegative, got {value}")


def validate_scenario(scenario: NetworkScenario) -> list[str]:
    """Check every scenario invariant; returns violation descriptions (empty = valid)."""
    v: list[str] = []
    r = scenario.radio
    _positive(v, "radio",
              bandwidth_bs_hz=r.bandwidth_bs_hz, bandwidth_sat_hz=r.bandwidth_sat_hz,
              frame_bs_s=r.frame_bs_s, frame_sat_s=r.frame_sat_s,
              noise_density_w_per_hz=r.noise_density_w_per_hz, carrier_hz=r.carrier_hz,
              speed_of_light_m_per_s=r.speed_of_light_m_per_s,
              cloud_rtt_s=r.cloud_rtt_s, gateway_path_m=r.gateway_path_m)

    sat = scenario.satellite
    _positive(v, "satellite", orbit_altitude_m=sat.orbit_altitude_m)
    _gain_ok(v, "satellite", rx_antenna_gain=sat.rx_antenna_gain)

    ids: list[str] = []
    for bs in scenario.base_stations:
        ids.append(bs.id)
        where = f"bs {bs.id}"
        _positive(v, where, tx_power_w=bs.tx_power_w, edge_cpu_hz=bs.edge_cpu_hz)
        _gain_ok(v, where, tx_antenna_gain=bs.tx_antenna_gain,
                 rx_antenna_gain=bs.rx_antenna_gain, comm_gain=bs.comm_gain)
        if bs.sat_path_m < sat.orbit_altitude_m:
            v.append(f"{where}: sat_path_m {bs.sat_path_m} shorter than orbit altitude")
        if not bs.tues:
            v.append(f"{where}: must serve at least one TUE")
        peer_ids = {t.id for t in bs.tues}
        for tue in bs.tues:
            ids.append(tue.id)
            twhere = f"tue {tue.id}"
            _positive(v, twhere, tx_power_w=tue.tx_power_w, local_cpu_hz=tue.local_cpu_hz,
                      data_bits=tue.task.data_bits,
                      workload_cycles_per_bit=tue.task.workload_cycles_per_bit)
            _gain_ok(v, twhere, tx_antenna_gain=tue.tx_antenna_gain,
                     comm_gain=tue.comm_gain, radar_gain_self=tue.radar_gain_self)
            for other in peer_ids - {tue.id}:
                if other not in tue.radar_gain_cross:
                    v.append(f"{twhere}: missing cross radar gain for pair "
                             f"({other} -> {tue.id})")
            for other, g in tue.radar_gain_cross.items():
                if g < 0:
                    v.append(f"{twhere}: cross radar gain from {other} is negative")

    for sue in scenario.sues:
        ids.append(sue.id)
        swhere = f"sue {sue.id}"
        _positive(v, swhere, tx_power_w=sue.tx_power_w, local_cpu_hz=sue.local_cpu_hz,
                  data_bits=sue.task.data_bits,
                  workload_cycles_per_bit=sue.task.workload_cycles_per_bit)
        _gain_ok(v, swhere, tx_antenna_gain=sue.tx_antenna_gain,
                 comm_gain=sue.comm_gain, radar_gain_self=sue.radar_gain_self)
        if sue.sat_path_m < sat.orbit_altitude_m:
            v.append(f"{swhere}: sat_path_m {sue.sat_path_m} shorter than orbit altitude")

    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        v.append(f"duplicate ids: {sorted(dupes)}")
    return v

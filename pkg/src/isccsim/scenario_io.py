"""Scenario file round-trip (YAML) and tabular IO helpers.

Scenario files mirror the domain types section by section; keys carry unit
suffixes.  Saved files always use linear SI units; loaders additionally
accept ``*_dbm`` power, ``*_db`` antenna-gain, and ``*_dbm_per_hz`` noise
keys at the boundary.  Files may carry an optional ``pso`` section with the
optimizer settings to use for that scenario.
"""
from __future__ import annotations

import csv
from pathlib import Path

import yaml

from .model import (BaseStation, NetworkScenario, RadioParams, Satellite, Sue,
                    Task, Tue, db_to_linear, dbm_to_watts)
from .optimizer import PsoConfig


def _power_w(section: dict, prefix: str) -> float:
    if f"{prefix}_w" in section:
        return float(section[f"{prefix}_w"])
    if f"{prefix}_dbm" in section:
        return dbm_to_watts(float(section[f"{prefix}_dbm"]))
    raise KeyError(f"missing {prefix}_w or {prefix}_dbm")


def _gain(section: dict, name: str, required: bool = True) -> float | None:
    if name in section:
        return float(section[name]) if section[name] is not None else None
    if f"{name}_db" in section:
        return db_to_linear(float(section[f"{name}_db"]))
    if required:
        raise KeyError(f"missing {name} or {name}_db")
    return None


def _position(section: dict) -> tuple[float, ...] | None:
    p = section.get("position_m")
    return tuple(float(x) for x in p) if p is not None else None


def _task(section: dict) -> Task:
    return Task(data_bits=float(section["data_bits"]),
                workload_cycles_per_bit=float(section["workload_cycles_per_bit"]))


def load_scenario(path: str | Path) -> NetworkScenario:
    with open(path) as fh:
        doc = yaml.safe_load(fh)

    r = doc["radio"]
    if "noise_density_w_per_hz" in r:
        noise = float(r["noise_density_w_per_hz"])
    else:
        noise = dbm_to_watts(float(r["noise_density_dbm_per_hz"]))
    radio = RadioParams(
        bandwidth_bs_hz=float(r["bandwidth_bs_hz"]),
        bandwidth_sat_hz=float(r["bandwidth_sat_hz"]),
        frame_bs_s=float(r["frame_bs_s"]),
        frame_sat_s=float(r["frame_sat_s"]),
        noise_density_w_per_hz=noise,
        carrier_hz=float(r["carrier_hz"]),
        speed_of_light_m_per_s=float(r.get("speed_of_light_m_per_s", 3.0e8)),
        cloud_rtt_s=float(r["cloud_rtt_s"]),
        gateway_path_m=float(r["gateway_path_m"]))

    s = doc["satellite"]
    satellite = Satellite(orbit_altitude_m=float(s["orbit_altitude_m"]),
                          rx_antenna_gain=_gain(s, "rx_antenna_gain"))

    base_stations = []
    for b in doc["base_stations"]:
        tues = []
        for t in b["tues"]:
            cross = {str(k): float(v)
                     for k, v in (t.get("radar_gain_cross") or {}).items()}
            tues.append(Tue(
                id=str(t["id"]),
                tx_power_w=_power_w(t, "tx_power"),
                tx_antenna_gain=_gain(t, "tx_antenna_gain"),
                local_cpu_hz=float(t["local_cpu_hz"]),
                task=_task(t["task"]),
                comm_gain=_gain(t, "comm_gain", required=False),
                radar_gain_self=_gain(t, "radar_gain_self", required=False),
                radar_gain_cross=cross,
                position_m=_position(t)))
        base_stations.append(BaseStation(
            id=str(b["id"]),
            tx_power_w=_power_w(b, "tx_power"),
            tx_antenna_gain=_gain(b, "tx_antenna_gain"),
            rx_antenna_gain=_gain(b, "rx_antenna_gain"),
            edge_cpu_hz=float(b["edge_cpu_hz"]),
            sat_path_m=float(b["sat_path_m"]),
            tues=tuple(tues),
            comm_gain=_gain(b, "comm_gain", required=False),
            position_m=_position(b)))

    sues = []
    for u in doc.get("sues") or []:
        sues.append(Sue(
            id=str(u["id"]),
            tx_power_w=_power_w(u, "tx_power"),
            tx_antenna_gain=_gain(u, "tx_antenna_gain"),
            local_cpu_hz=float(u["local_cpu_hz"]),
            task=_task(u["task"]),
            sat_path_m=float(u["sat_path_m"]),
            comm_gain=_gain(u, "comm_gain", required=False),
            radar_gain_self=_gain(u, "radar_gain_self", required=False),
            position_m=_position(u)))

    return NetworkScenario(radio=radio, satellite=satellite,
                           base_stations=tuple(base_stations), sues=tuple(sues),
                           rng_seed=int(doc.get("rng_seed", 0)))


def _tue_doc(tue: Tue) -> dict:
    doc = {"id": tue.id, "tx_power_w": tue.tx_power_w,
           "tx_antenna_gain": tue.tx_antenna_gain,
           "local_cpu_hz": tue.local_cpu_hz,
           "task": {"data_bits": tue.task.data_bits,
                    "workload_cycles_per_bit": tue.task.workload_cycles_per_bit},
           "comm_gain": tue.comm_gain,
           "radar_gain_self": tue.radar_gain_self,
           "radar_gain_cross": dict(sorted(tue.radar_gain_cross.items()))}
    if tue.position_m is not None:
        doc["position_m"] = list(tue.position_m)
    return doc


def save_scenario(scenario: NetworkScenario, path: str | Path,
                  pso: PsoConfig | None = None) -> None:
    doc: dict = {
        "rng_seed": scenario.rng_seed,
        "radio": {
            "bandwidth_bs_hz": scenario.radio.bandwidth_bs_hz,
            "bandwidth_sat_hz": scenario.radio.bandwidth_sat_hz,
            "frame_bs_s": scenario.radio.frame_bs_s,
            "frame_sat_s": scenario.radio.frame_sat_s,
            "noise_density_w_per_hz": scenario.radio.noise_density_w_per_hz,
            "carrier_hz": scenario.radio.carrier_hz,
            "speed_of_light_m_per_s": scenario.radio.speed_of_light_m_per_s,
            "cloud_rtt_s": scenario.radio.cloud_rtt_s,
            "gateway_path_m": scenario.radio.gateway_path_m,
        },
        "satellite": {
            "orbit_altitude_m": scenario.satellite.orbit_altitude_m,
            "rx_antenna_gain": scenario.satellite.rx_antenna_gain,
        },
        "base_stations": [],
        "sues": [],
    }
    for bs in scenario.base_stations:
        b = {"id": bs.id, "tx_power_w": bs.tx_power_w,
             "tx_antenna_gain": bs.tx_antenna_gain,
             "rx_antenna_gain": bs.rx_antenna_gain,
             "edge_cpu_hz": bs.edge_cpu_hz,
             "sat_path_m": bs.sat_path_m,
             "comm_gain": bs.comm_gain,
             "tues": [_tue_doc(t) for t in bs.tues]}
        if bs.position_m is not None:
            b["position_m"] = list(bs.position_m)
        doc["base_stations"].append(b)
    for sue in scenario.sues:
        u = {"id": sue.id, "tx_power_w": sue.tx_power_w,
             "tx_antenna_gain": sue.tx_antenna_gain,
             "local_cpu_hz": sue.local_cpu_hz,
             "task": {"data_bits": sue.task.data_bits,
                      "workload_cycles_per_bit": sue.task.workload_cycles_per_bit},
             "sat_path_m": sue.sat_path_m,
             "comm_gain": sue.comm_gain,
             "radar_gain_self": sue.radar_gain_self}
        if sue.position_m is not None:
            u["position_m"] = list(sue.position_m)
        doc["sues"].append(u)
    if pso is not None:
        doc["pso"] = {
            "population": pso.population,
            "max_iterations": pso.max_iterations,
            "inertia": pso.inertia,
            "cognitive": pso.cognitive,
            "social": pso.social,
            "seed": pso.seed,
            "velocity_clamp": pso.velocity_clamp,
        }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def load_pso_config(path: str | Path) -> PsoConfig | None:
    """Read the optional optimizer section of a scenario file."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    section = doc.get("pso")
    return PsoConfig(**section) if section else None


def load_gain_overrides(path: str | Path) -> list[dict[str, str]]:
    """Read a gain override table (link_type, from_id, to_id, gain_linear)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"link_type", "from_id", "to_id", "gain_linear"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"gain override file must have columns {sorted(required)}")
        return list(reader)


def write_trace_csv(trace, path: str | Path) -> None:
    """Dump an optimizer trace as (iteration, gbest_utility) rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "gbest_utility"])
        for i, u in enumerate(trace.gbest_utility):
            writer.writerow([i, u])

import pytest
import yaml

from isccsim.channel import apply_gain_overrides
from isccsim.generator import generate_scenario
from isccsim.model import dbm_to_watts
from isccsim.optimizer import PsoConfig, PsoTrace
from isccsim.scenario_io import (load_gain_overrides, load_pso_config,
                                 load_scenario, save_scenario, write_trace_csv)


def test_round_trip_is_identity(tmp_path, default_scenario):
    path = tmp_path / "scenario.yaml"
    save_scenario(default_scenario, path)
    loaded = load_scenario(path)
    assert loaded == default_scenario  # frozen dataclasses compare by value


def test_round_trip_full_precision(tmp_path):
    scenario = generate_scenario(seed=9, n_bs=1, tues_per_bs=2, n_sues=1)
    path = tmp_path / "s.yaml"
    save_scenario(scenario, path)
    loaded = load_scenario(path)
    tue_a = scenario.base_stations[0].tues[0]
    tue_b = loaded.base_stations[0].tues[0]
    assert tue_b.comm_gain == tue_a.comm_gain  # bit-exact through YAML
    assert tue_b.task.data_bits == tue_a.task.data_bits
    assert loaded.rng_seed == scenario.rng_seed


def test_save_is_deterministic(tmp_path):
    a, b = tmp_path / "a.yaml", tmp_path / "b.yaml"
    save_scenario(generate_scenario(seed=4, n_bs=2, n_sues=3), a)
    save_scenario(generate_scenario(seed=4, n_bs=2, n_sues=3), b)
    assert a.read_bytes() == b.read_bytes()


def test_boundary_units_accepted(tmp_path, default_scenario):
    path = tmp_path / "scenario.yaml"
    save_scenario(default_scenario, path)
    doc = yaml.safe_load(path.read_text())
    # re-express one TUE's power in dBm and the noise density in dBm/Hz
    tue_doc = doc["base_stations"][0]["tues"][0]
    del tue_doc["tx_power_w"]
    tue_doc["tx_power_dbm"] = 30.0
    del doc["radio"]["noise_density_w_per_hz"]
    doc["radio"]["noise_density_dbm_per_hz"] = -174.0
    sat = doc["satellite"]
    del sat["rx_antenna_gain"]
    sat["rx_antenna_gain_db"] = 40.0
    path.write_text(yaml.safe_dump(doc, sort_keys=False))
    loaded = load_scenario(path)
    assert loaded.base_stations[0].tues[0].tx_power_w == pytest.approx(1.0)
    assert loaded.radio.noise_density_w_per_hz == pytest.approx(
        dbm_to_watts(-174.0))
    assert loaded.satellite.rx_antenna_gain == pytest.approx(1e4)


def test_pso_section_round_trip(tmp_path, tiny_scenario):
    path = tmp_path / "s.yaml"
    cfg = PsoConfig(population=12, max_iterations=34, seed=5)
    save_scenario(tiny_scenario, path, pso=cfg)
    assert load_pso_config(path) == cfg
    bare = tmp_path / "bare.yaml"
    save_scenario(tiny_scenario, bare)
    assert load_pso_config(bare) is None


def test_gain_override_file_round_trip(tmp_path, default_scenario):
    path = tmp_path / "gains.csv"
    path.write_text("link_type,from_id,to_id,gain_linear\n"
                    "comm,bs0-tue0,bs0,0.125\n"
                    "radar,sue0,sue0,2.0\n")
    rows = load_gain_overrides(path)
    patched = apply_gain_overrides(default_scenario, rows)
    assert patched.base_stations[0].tues[0].comm_gain == 0.125
    assert patched.sues[0].radar_gain_self == 2.0


def test_gain_override_file_requires_columns(tmp_path):
    path = tmp_path / "gains.csv"
    path.write_text("from,to,gain\n1,2,3\n")
    with pytest.raises(ValueError):
        load_gain_overrides(path)


def test_trace_csv(tmp_path):
    trace = PsoTrace()
    import numpy as np
    trace.append(1.0, np.zeros(3))
    trace.append(2.5, np.ones(3))
    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "iteration,gbest_utility"
    assert lines[1] == "0,1.0"
    assert lines[2] == "1,2.5"

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isccsim.delays import (InfeasibleAllocationError, sue_delay, trip_delay_bs,
                            trip_delay_sue, tue_delay)
from isccsim.model import PartitionSue, PartitionTue, SubframeAllocation

from conftest import make_scenario, uniform_alloc


def _with_paths(scenario, *, bs_path=None, gateway=None, rtt=None, c=None):
    radio = scenario.radio
    radio = dataclasses.replace(
        radio,
        gateway_path_m=gateway if gateway is not None else radio.gateway_path_m,
        cloud_rtt_s=rtt if rtt is not None else radio.cloud_rtt_s,
        speed_of_light_m_per_s=c if c is not None else radio.speed_of_light_m_per_s)
    out = dataclasses.replace(scenario, radio=radio)
    if bs_path is not None:
        out = dataclasses.replace(out, base_stations=tuple(
            dataclasses.replace(b, sat_path_m=bs_path)
            for b in out.base_stations))
    return out


def test_trip_delay_bs_zero_paths():
    scenario = _with_paths(make_scenario(orbit_m=1e-12), bs_path=0.0,
                           gateway=0.0, rtt=0.1)
    assert trip_delay_bs(scenario, 0) == pytest.approx(0.1)


def test_trip_delay_bs_hand_value():
    # 4 * 8e6 m / 3e8 m/s + 100 ms
    scenario = make_scenario(orbit_m=8e6, cloud_rtt=0.1)
    assert trip_delay_bs(scenario, 0) == pytest.approx(4 * 8e6 / 3e8 + 0.1,
                                                       rel=1e-12)
    assert trip_delay_bs(scenario, 0) == pytest.approx(0.2067, abs=5e-5)


def test_trip_delay_bs_monotone_in_path():
    near = make_scenario(orbit_m=1e6)
    far = make_scenario(orbit_m=2e6)
    assert trip_delay_bs(far, 0) > trip_delay_bs(near, 0)


def test_trip_delay_sue_hand_value():
    scenario = make_scenario(n_sues=1, orbit_m=8e6, cloud_rtt=0.1)
    assert trip_delay_sue(scenario, 0) == pytest.approx(0.2067, abs=5e-5)


def test_trip_delay_sue_zero_paths():
    scenario = _with_paths(make_scenario(n_sues=1, orbit_m=1e-12), gateway=0.0,
                           rtt=0.25)
    scenario = dataclasses.replace(scenario, sues=(
        dataclasses.replace(scenario.sues[0], sat_path_m=0.0),))
    assert trip_delay_sue(scenario, 0) == pytest.approx(0.25)


# --- TUE delay breakdowns ------------------------------------------------------


def test_tue_delay_all_local():
    # D=5e5 bits, C=1000 cycles/bit, f=5e8 -> exactly one second
    scenario = make_scenario(data_bits=5e5, workload=1000.0, local_cpu=5e8)
    bd = tue_delay(scenario, uniform_alloc(1), PartitionTue(1.0, 0.0, 0.0), 0, 0, 0)
    assert bd.t_total == pytest.approx(1.0)
    assert bd.t_u == bd.t_local == bd.t_total
    assert bd.t_up == bd.t_edge == bd.t_bs_up == 0.0


def test_tue_partition_rejects_zero_sum():
    with pytest.raises(ValueError):
        PartitionTue(0.0, 0.0, 0.0)


def test_tue_delay_composition_identities():
    scenario = make_scenario(tues_per_bs=2, tue_snr=1.0)
    alloc = uniform_alloc(1, tau=0.8, tau_b=0.5, tau_us=0.25)
    bd = tue_delay(scenario, alloc, PartitionTue(0.3, 0.5, 0.2), 3, 0, 0)
    assert bd.t_u == bd.t_local
    assert bd.t_b == pytest.approx(bd.t_up + bd.t_edge, rel=1e-12)
    assert bd.t_c == pytest.approx(bd.t_up + bd.t_bs_up + bd.t_trip, rel=1e-12)
    assert bd.t_total == pytest.approx(max(bd.t_u, bd.t_b, bd.t_c), rel=1e-12)


def test_tue_delay_formulas_direct():
    # K=5 users share the uplink and the edge CPU
    scenario = make_scenario(tues_per_bs=5, b1=1e7, tue_snr=1.0,
                             data_bits=5e5, workload=1000.0,
                             local_cpu=5e8, edge_cpu=5e9)
    alloc = uniform_alloc(1, tau=0.5)
    p = PartitionTue(0.25, 0.5, 0.25)
    bd = tue_delay(scenario, alloc, p, 2, 0, 0)
    assert bd.t_local == pytest.approx(0.25 * 5e5 * 1000 / 5e8, rel=1e-12)
    assert bd.t_up == pytest.approx(0.75 * 5e5 * 5 / (1e7 * 0.5), rel=1e-12)
    assert bd.t_edge == pytest.approx(0.5 * 5e5 * 1000 * 5 / 5e9, rel=1e-12)
    # kappa * D * cloud_count / (R_b * tau_b)
    from isccsim.channel import rate_bs
    assert bd.t_bs_up == pytest.approx(
        0.25 * 5e5 * 2 / (rate_bs(scenario, 0) * alloc.tau_b), rel=1e-12)


def test_tue_delay_kappa_zero_ignores_backhaul():
    scenario = make_scenario()
    p = PartitionTue(0.4, 0.6, 0.0)
    alloc_a = uniform_alloc(1, tau_b=0.6, tau_us=0.2)
    alloc_b = uniform_alloc(1, tau_b=0.0, tau_us=0.2)
    a = tue_delay(scenario, alloc_a, p, 0, 0, 0)
    b = tue_delay(scenario, alloc_b, p, 0, 0, 0)
    assert a.t_total == b.t_total
    assert a.t_bs_up == b.t_bs_up == 0.0


def test_tue_delay_infeasible_conditions():
    scenario = make_scenario()
    zero_comm = SubframeAllocation(tau_ub=(0.0,), theta_ub=(1.0,),
                                   tau_b=0.5, tau_us=0.25, theta_us=0.25)
    with pytest.raises(InfeasibleAllocationError):
        tue_delay(scenario, zero_comm, PartitionTue(0.5, 0.5, 0.0), 0, 0, 0)
    zero_backhaul = SubframeAllocation(tau_ub=(0.5,), theta_ub=(0.5,),
                                       tau_b=0.0, tau_us=0.5, theta_us=0.5)
    with pytest.raises(InfeasibleAllocationError):
        tue_delay(scenario, zero_backhaul, PartitionTue(0.5, 0.3, 0.2), 1, 0, 0)
    with pytest.raises(InfeasibleAllocationError):
        tue_delay(scenario, uniform_alloc(1), PartitionTue(0.5, 0.3, 0.2), 0, 0, 0)


# --- SUE delay breakdowns -------------------------------------------------------


def test_sue_delay_local_only():
    scenario = make_scenario(n_sues=1, data_bits=5e5, workload=1000.0,
                             local_cpu=5e8)
    bd = sue_delay(scenario, uniform_alloc(1), PartitionSue(1.0, 0.0), 0, 0)
    assert bd.t_total == pytest.approx(1.0)
    assert bd.t_up == 0.0


def test_sue_delay_cloud_only():
    scenario = make_scenario(n_sues=1, b2=4e7, sue_snr=1.0, data_bits=5e5)
    alloc = uniform_alloc(1, tau_b=0.25, tau_us=0.5)
    bd = sue_delay(scenario, alloc, PartitionSue(0.0, 1.0), 3, 0)
    expected_up = 5e5 * 3 / (4e7 * 0.5)
    assert bd.t_up == pytest.approx(expected_up, rel=1e-12)
    assert bd.t_total == pytest.approx(expected_up + bd.t_trip, rel=1e-12)


def test_sue_delay_kappa_zero_is_local_time():
    scenario = make_scenario(n_sues=1)
    alloc_a = uniform_alloc(1, tau_b=0.9, tau_us=0.05)
    alloc_b = uniform_alloc(1, tau_b=0.05, tau_us=0.9)
    p = PartitionSue(1.0, 0.0)
    assert (sue_delay(scenario, alloc_a, p, 0, 0).t_total
            == sue_delay(scenario, alloc_b, p, 0, 0).t_total)


def test_sue_delay_infeasible_conditions():
    scenario = make_scenario(n_sues=1)
    with pytest.raises(InfeasibleAllocationError):
        sue_delay(scenario, uniform_alloc(1), PartitionSue(0.5, 0.5), 0, 0)
    no_uplink = SubframeAllocation(tau_ub=(0.5,), theta_ub=(0.5,),
                                   tau_b=0.5, tau_us=0.0, theta_us=0.5)
    with pytest.raises(InfeasibleAllocationError):
        sue_delay(scenario, no_uplink, PartitionSue(0.5, 0.5), 1, 0)


# --- monotonicity properties -----------------------------------------------------


@given(tau=st.floats(min_value=0.05, max_value=0.95),
       bump=st.floats(min_value=0.01, max_value=0.05))
@settings(max_examples=40, deadline=None)
def test_tue_delay_nonincreasing_in_airtime(tau, bump):
    scenario = make_scenario(tues_per_bs=2, tue_snr=3.0)
    p = PartitionTue(0.3, 0.5, 0.2)
    lo = tue_delay(scenario, uniform_alloc(1, tau=tau), p, 1, 0, 0)
    hi = tue_delay(scenario, uniform_alloc(1, tau=min(1.0, tau + bump)), p, 1, 0, 0)
    assert hi.t_total <= lo.t_total + 1e-12


@given(scale=st.floats(min_value=1.0, max_value=4.0))
@settings(max_examples=40, deadline=None)
def test_tue_delay_nondecreasing_in_task_size(scale):
    base = make_scenario(data_bits=2e5)
    big = make_scenario(data_bits=2e5 * scale)
    p = PartitionTue(0.3, 0.5, 0.2)
    assert (tue_delay(big, uniform_alloc(1), p, 1, 0, 0).t_total
            >= tue_delay(base, uniform_alloc(1), p, 1, 0, 0).t_total - 1e-12)


@given(count=st.integers(min_value=1, max_value=40))
@settings(max_examples=40, deadline=None)
def test_sue_delay_nondecreasing_in_cloud_count(count):
    scenario = make_scenario(n_sues=1, sue_snr=2.0)
    p = PartitionSue(0.4, 0.6)
    one = sue_delay(scenario, uniform_alloc(1), p, 1, 0)
    many = sue_delay(scenario, uniform_alloc(1), p, count, 0)
    assert many.t_total >= one.t_total - 1e-12

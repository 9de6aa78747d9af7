"""Satellite-terrestrial sensing/communication/computing trade-off simulator."""

__version__ = "0.1.0"

from .model import (BaseStation, EvaluationResult, NetworkScenario, PartitionSue,
                    PartitionTue, RadioParams, Satellite, SubframeAllocation, Sue,
                    Task, Tue, indicator, validate_scenario)
from .channel import (LinkBudgetModel, materialize_gains, radar_mi_sue,
                      radar_mi_tue, radar_sinr_sue, radar_sinr_tue, rate_bs,
                      rate_sue, rate_tue)
from .delays import (InfeasibleAllocationError, SueDelayBreakdown,
                     TueDelayBreakdown, sue_delay, trip_delay_bs, trip_delay_sue,
                     tue_delay)
from .partition_tue import (cloud_admission_tue, count_cloud_tues,
                            local_edge_cloud_split, local_edge_split,
                            partition_all_tues)
from .partition_sue import (cloud_admission_sue, count_cloud_sues,
                            local_cloud_split, local_only, partition_all_sues)
from .evaluation import ScenarioCache, evaluate
from .optimizer import ParetoPoint, PsoConfig, PsoTrace, pareto_sweep, pso_optimize
from .baselines import (equal_split_partitions, exhaustive_search,
                        greedy_allocation, solve_strategy)
from .generator import ScenarioParams, generate_scenario
from .scenario_io import load_scenario, save_scenario
from .experiments import ExperimentSpec, export_plot_data, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]

"""Joint subframe-allocation search by particle swarm optimization.

The search space removes the frame-simplex equality constraints: one scalar
per BS encodes its communication fraction (sensing is the complement), and
two scalars map to the satellite's three-way split through a normalized
clamp.  Every decoded allocation therefore satisfies the frame constraints
exactly, and out-of-space particles are repaired by clamping to the unit box.

Velocity updates follow the standard inertia/cognitive/social form with
per-dimension uniform draws; the default constants are the classic
constriction-equivalent values.  Random draws are seeded per particle per
iteration from the master seed, so evaluation order (or parallelism) cannot
change results.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .evaluation import ScenarioCache, evaluate, evaluate_totals
from .model import EvaluationResult, NetworkScenario, SubframeAllocation


@dataclass(frozen=True)
class PsoConfig:
    population: int = 50
    max_iterations: int = 100
    inertia: float = 0.729
    cognitive: float = 1.49445   # pull toward the particle's own best
    social: float = 1.49445      # pull toward the swarm's best
    seed: int = 0
    velocity_clamp: float = 0.1  # fraction of the unit range

    def __post_init__(self):
        if self.population < 1 or self.max_iterations < 1:
            raise ValueError("population and max_iterations must be at least 1")
        if not 0.0 < self.inertia <= 1.0:
            raise ValueError("inertia must lie in (0,1]")
        if self.cognitive <= 0 or self.social <= 0:
            raise ValueError("learning factors must be positive")
        if not 0.0 < self.velocity_clamp <= 1.0:
            raise ValueError("velocity_clamp must lie in (0,1]")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_utility: float


@dataclass
class PsoTrace:
    """Global-best history; entry 0 is the initial swarm, one entry per iteration after."""
    gbest_utility: list[float] = field(default_factory=list)
    gbest_position: list[np.ndarray] = field(default_factory=list)

    def append(self, utility: float, position: np.ndarray) -> None:
        if self.gbest_utility and utility < self.gbest_utility[-1]:
            raise AssertionError("global best must be nondecreasing")
        self.gbest_utility.append(utility)
        self.gbest_position.append(position.copy())


def position_dims(n_bs: int) -> int:
    return n_bs + 2


def decode_position(x: np.ndarray, n_bs: int) -> SubframeAllocation:
    """Map a point of the unit box to a constraint-satisfying allocation."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    tau_ub = x[:n_bs]
    y1, y2 = float(x[n_bs]), float(x[n_bs + 1])
    s = y1 + y2
    if s > 1.0:
        y1, y2 = y1 / s, y2 / s
    theta_us = max(0.0, 1.0 - y1 - y2)
    return SubframeAllocation(
        tau_ub=tuple(tau_ub.tolist()),
        theta_ub=tuple((1.0 - tau_ub).tolist()),
        tau_b=y1, tau_us=y2, theta_us=theta_us)


def _spawn_rng(seed: int, iteration: int, particle: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, iteration, particle]))


def pso_optimize(scenario: NetworkScenario, eta: float, config: PsoConfig,
                 cache: ScenarioCache | None = None
                 ) -> tuple[SubframeAllocation, EvaluationResult, PsoTrace]:
    """Run the swarm search and return the best allocation found.

    Each fitness call evaluates the utility under optimal task partitioning,
    so the returned allocation carries its partitioning strategy implicitly.
    Fully deterministic for a given config seed.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0,1], got {eta}")
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    n_bs = scenario.n_bs
    dims = position_dims(n_bs)
    v_max = config.velocity_clamp

    def fitness(x: np.ndarray) -> float:
        return evaluate_totals(cache, decode_position(x, n_bs), eta)[0]

    init_rng = _spawn_rng(config.seed, 0, 0)
    swarm = []
    for _ in range(config.population):
        pos = init_rng.random(dims)
        swarm.append(Particle(position=pos, velocity=np.zeros(dims),
                              best_position=pos.copy(), best_utility=fitness(pos)))

    gbest = max(range(config.population), key=lambda l: swarm[l].best_utility)
    gbest_position = swarm[gbest].best_position.copy()
    gbest_utility = swarm[gbest].best_utility
    trace = PsoTrace()
    trace.append(gbest_utility, gbest_position)

    for iteration in range(1, config.max_iterations + 1):
        for l, p in enumerate(swarm):
            rng = _spawn_rng(config.seed, iteration, l + 1)
            z1 = rng.random(dims)
            z2 = rng.random(dims)
            p.velocity = (config.inertia * p.velocity
                          + config.cognitive * z1 * (p.best_position - p.position)
                          + config.social * z2 * (gbest_position - p.position))
            np.clip(p.velocity, -v_max, v_max, out=p.velocity)
            p.position = p.position + p.velocity
            out = (p.position < 0.0) | (p.position > 1.0)
            if out.any():
                np.clip(p.position, 0.0, 1.0, out=p.position)
            u = fitness(p.position)
            if u > p.best_utility:
                p.best_utility = u
                p.best_position = p.position.copy()
        best = max(range(config.population), key=lambda l: swarm[l].best_utility)
        if swarm[best].best_utility > gbest_utility:
            gbest_utility = swarm[best].best_utility
            gbest_position = swarm[best].best_position.copy()
        trace.append(gbest_utility, gbest_position)

    best_alloc = decode_position(gbest_position, n_bs)
    return best_alloc, evaluate(scenario, best_alloc, eta, cache=cache), trace


@dataclass(frozen=True)
class ParetoPoint:
    eta: float
    mi_total_bits: float
    delay_total_s: float
    utility: float
    allocation: SubframeAllocation


def pareto_sweep(scenario: NetworkScenario, etas: list[float], config: PsoConfig,
                 cache: ScenarioCache | None = None) -> list[ParetoPoint]:
    """One swarm run per trade-off weight, recording the frontier points."""
    if list(etas) != sorted(etas):
        raise ValueError("etas must be sorted ascending")
    if cache is None:
        cache = ScenarioCache.from_scenario(scenario)
    points = []
    for eta in etas:
        alloc, result, _ = pso_optimize(scenario, eta, config, cache=cache)
        points.append(ParetoPoint(eta=eta, mi_total_bits=result.total_mi_bits,
                                  delay_total_s=result.total_delay_s,
                                  utility=result.utility, allocation=alloc))
    return points

"""Seeded repeated experiments and the metrics computed over them."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bandit import EpsilonGreedy, PolicyConfig
from .energy import EnergyTable, Scenario, evaluate_all
from .errors import ComparisonError, ConfigurationError, InfeasibleActionError, ValidationError

log = logging.getLogger(__name__)

NEVER = -1


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario
    policy: PolicyConfig
    iterations: int
    repetitions: int = 1000
    seed_base: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValidationError("iterations", f"must be >= 1, got {self.iterations}")
        if self.repetitions < 1:
            raise ValidationError("repetitions", f"must be >= 1, got {self.repetitions}")

    def seed(self, repetition: int) -> int:
        return self.seed_base + repetition


@dataclass
class ExperimentLog:
    """Per-repetition traces of one experiment.

    Arrays are indexed ``[repetition, iteration - 1]``. ``historic`` holds the
    cumulative energy of the most-consuming ring up to each iteration.
    ``optimal_iteration`` is ``iterations + 1`` when the optimum was never
    tried (censored); ``all_explored_iteration`` is ``NEVER`` in that case.
    """

    config: ExperimentConfig
    table: EnergyTable
    seeds: np.ndarray
    actions: np.ndarray
    e_b: np.ndarray
    historic: np.ndarray
    optimal_iteration: np.ndarray
    all_explored_iteration: np.ndarray
    infeasible_count: np.ndarray
    explore_count: np.ndarray
    best_action: np.ndarray

    @property
    def repetitions(self) -> int:
        return self.actions.shape[0]

    @property
    def iterations(self) -> int:
        return self.actions.shape[1]

    @property
    def censored(self) -> np.ndarray:
        return self.optimal_iteration > self.iterations

    def cumulative_energy(self, repetition: int) -> np.ndarray:
        """``(R, I)`` matrix of each ring's cumulative energy for one repetition."""
        return np.cumsum(_charged_energy(self.table)[self.actions[repetition]], axis=0).T

    def mean_e_b(self) -> np.ndarray:
        return self.e_b.mean(axis=0)

    def mean_historic(self) -> np.ndarray:
        return self.historic.mean(axis=0)


def _charged_energy(table: EnergyTable) -> np.ndarray:
    # An infeasible routing cannot be deployed, so that round charges nothing.
    return np.nan_to_num(table.energy, nan=0.0)


def _run_repetitions(table: EnergyTable, policy: PolicyConfig, iterations: int, seeds) -> list[dict]:
    space = table.space
    charged = _charged_energy(table)
    charged_e_b = np.nan_to_num(table.e_b, nan=0.0)
    rewards = np.where(table.feasible, 1.0 / np.where(table.feasible, table.e_b, 1.0), 0.0)
    is_optimal = np.zeros(len(space), dtype=bool)
    is_optimal[table.optimal_set] = True

    def env(action):
        idx = space.index(action)
        if not table.feasible[idx]:
            raise InfeasibleActionError(0, action)
        return rewards[idx]

    out = []
    for seed in seeds:
        learner = EpsilonGreedy(space, policy, int(seed))
        explores = 0
        for _ in range(iterations):
            if learner.exhausted:
                break
            if learner.step(env).explored:
                explores += 1
        # after full exploration no randomness is drawn and every round
        # replays the best action, so the tail is filled in directly
        actions = np.full(iterations, -1 if learner.best is None else learner.best, dtype=np.int32)
        actions[: len(learner.history)] = learner.history
        cum = np.cumsum(charged[actions], axis=0)
        hits = np.flatnonzero(is_optimal[actions])
        out.append(
            {
                "actions": actions,
                "e_b": charged_e_b[actions],
                "historic": cum.max(axis=1),
                "optimal_iteration": int(hits[0]) + 1 if hits.size else iterations + 1,
                "all_explored_iteration": learner.all_explored_at or NEVER,
                "infeasible_count": len(learner.infeasible),
                "explore_count": explores,
                "best_action": learner.best if learner.best is not None else NEVER,
            }
        )
    return out


def _chunk_worker(args):
    return _run_repetitions(*args)


def run_experiment(
    config: ExperimentConfig,
    table: EnergyTable | None = None,
    workers: int = 1,
) -> ExperimentLog:
    """Run ``config.repetitions`` independent learner runs.

    Repetition ``k`` uses seed ``seed_base + k``; results do not depend on
    ``workers`` or on execution order.
    """
    table = table if table is not None else evaluate_all(config.scenario)
    if not table.feasible.any():
        raise ConfigurationError("scenario is infeasible for every action")
    seeds = np.array([config.seed(k) for k in range(config.repetitions)], dtype=np.int64)

    if workers > 1 and config.repetitions > 1:
        chunks = np.array_split(seeds, min(workers, config.repetitions))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_chunk_worker, [(table, config.policy, config.iterations, c) for c in chunks])
            runs = [r for part in parts for r in part]
    else:
        runs = _run_repetitions(table, config.policy, config.iterations, seeds)

    def stack(key, dtype=None):
        return np.array([r[key] for r in runs], dtype=dtype)

    log.info("ran %d repetitions of %s on %s", config.repetitions, config.policy.label, config.scenario.name)
    return ExperimentLog(
        config=config,
        table=table,
        seeds=seeds,
        actions=stack("actions", np.int32),
        e_b=stack("e_b", np.float64),
        historic=stack("historic", np.float64),
        optimal_iteration=stack("optimal_iteration", np.int64),
        all_explored_iteration=stack("all_explored_iteration", np.int64),
        infeasible_count=stack("infeasible_count", np.int64),
        explore_count=stack("explore_count", np.int64),
        best_action=stack("best_action", np.int64),
    )


def historic_bottleneck(log: ExperimentLog, i: int) -> tuple[float, np.ndarray]:
    """Repetition-averaged historic-bottleneck energy at iteration ``i`` and the per-repetition values."""
    if not 1 <= i <= log.iterations:
        raise IndexError(f"iteration {i} out of range 1..{log.iterations}")
    values = log.historic[:, i - 1]
    return float(values.mean()), values.copy()


def similarity_ratio(log_plain: ExperimentLog, log_sim: ExperimentLog, i: int | None = None):
    """Mean historic-bottleneck energy without similarity over the one with it.

    Returns the whole series when ``i`` is None.
    """
    if log_plain.config.scenario != log_sim.config.scenario:
        raise ComparisonError("logs come from different scenarios")
    if log_plain.iterations != log_sim.iterations:
        raise ComparisonError(f"iteration counts differ: {log_plain.iterations} vs {log_sim.iterations}")
    ratio = log_plain.mean_historic() / log_sim.mean_historic()
    if i is None:
        return ratio
    if not 1 <= i <= log_plain.iterations:
        raise IndexError(f"iteration {i} out of range 1..{log_plain.iterations}")
    return float(ratio[i - 1])


def empirical_cdf(values, total: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Step function ``(value, fraction <= value)`` over the sorted distinct values.

    ``total`` lets censored samples count in the denominator only.
    """
    values = np.sort(np.asarray(values))
    total = len(values) if total is None else total
    if total == 0:
        return np.array([]), np.array([])
    uniq, counts = np.unique(values, return_counts=True)
    return uniq, np.cumsum(counts) / total


@dataclass(frozen=True)
class DistributionStats:
    mean_e_b: np.ndarray
    mean_historic: np.ndarray
    std_historic: np.ndarray
    optimal_cdf: tuple[np.ndarray, np.ndarray]
    optimal_censored: int
    all_explored_cdf: tuple[np.ndarray, np.ndarray]
    all_explored_never: int


def distribution_stats(log: ExperimentLog) -> DistributionStats:
    reps = log.repetitions
    std = log.historic.std(axis=0, ddof=1) if reps > 1 else np.zeros(log.iterations)
    censored = log.censored
    done = log.all_explored_iteration != NEVER
    return DistributionStats(
        mean_e_b=log.mean_e_b(),
        mean_historic=log.mean_historic(),
        std_historic=std,
        optimal_cdf=empirical_cdf(log.optimal_iteration[~censored], reps),
        optimal_censored=int(censored.sum()),
        all_explored_cdf=empirical_cdf(log.all_explored_iteration[done], reps),
        all_explored_never=int((~done).sum()),
    )

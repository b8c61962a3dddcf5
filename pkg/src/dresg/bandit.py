"""epsilon-greedy learners over a deterministic-reward action space.

Rewards never change once observed, so the learner keeps a single reward per
explored action and explores *without replacement*: an exploring draw always
picks an action that has not been tried yet. The similarity-enhanced variant
adds a second coin inside exploring iterations that decides between a uniform
draw and a draw among the unexplored actions closest (in L1 hop distance) to
the best known one.

Randomness comes from three independent streams derived from one seed:

* ``coin``: one ``random()`` per iteration >= 2 while unexplored actions
  remain (explore when below epsilon);
* ``branch``: one ``random()`` per exploring iteration of the similarity
  variant;
* ``pick``: one ``randrange`` per draw among candidates (including the first
  action).

Keeping the streams apart gives common random numbers across policies: a
similarity learner whose similarity branch never fires replays the plain
learner with the same seed exactly.
"""

from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass
from typing import Callable

from .actions import ActionSpace, HopsCombination
from .errors import ConfigurationError, InfeasibleActionError, ValidationError

log = logging.getLogger(__name__)


class ScheduleKind(str, enum.Enum):
    CONSTANT = "constant"
    QUADRATIC = "quadratic"


class Algorithm(str, enum.Enum):
    EGREEDY = "egreedy"
    SIMILARITY = "egreedy-similarity"


class SimilaritySemantics(str, enum.Enum):
    # similarity draw with probability 1 - eps_s (small eps_s = similarity early)
    RESULTS = "results"
    # similarity draw with probability eps_s
    DEFINITION = "definition"


@dataclass(frozen=True)
class EpsilonSchedule:
    kind: ScheduleKind
    initial: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ScheduleKind(self.kind))
        if not 0.0 <= self.initial <= 1.0:
            raise ValidationError("epsilon_initial", f"must lie in [0, 1], got {self.initial}")

    def next(self, prev: float, i: int) -> float:
        return epsilon_next(self, prev, i)

    def values(self, iterations: int) -> list[float]:
        """The sequence eps_1..eps_I."""
        out = [self.initial]
        for i in range(2, iterations + 1):
            out.append(self.next(out[-1], i))
        return out[:iterations]


def epsilon_next(schedule: EpsilonSchedule, prev: float, i: int) -> float:
    if schedule.kind is ScheduleKind.CONSTANT:
        return schedule.initial
    return min(1.0, math.sqrt(prev / i))


@dataclass(frozen=True)
class PolicyConfig:
    algorithm: Algorithm
    epsilon: EpsilonSchedule
    epsilon_s: EpsilonSchedule | None = None
    similarity_semantics: SimilaritySemantics = SimilaritySemantics.RESULTS

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "similarity_semantics", SimilaritySemantics(self.similarity_semantics))
        if self.algorithm is Algorithm.SIMILARITY and self.epsilon_s is None:
            raise ValidationError("epsilon_s_initial", "required by the similarity algorithm")

    @property
    def uses_similarity(self) -> bool:
        return self.algorithm is Algorithm.SIMILARITY

    @property
    def label(self) -> str:
        """Compact form accepted by :meth:`parse`, e.g. ``dec:1/dec:0.5``."""

        def one(s: EpsilonSchedule) -> str:
            kind = "cnt" if s.kind is ScheduleKind.CONSTANT else "dec"
            return f"{kind}:{s.initial:g}"

        text = one(self.epsilon)
        if self.uses_similarity:
            text += "/" + one(self.epsilon_s)
            if self.similarity_semantics is not SimilaritySemantics.RESULTS:
                text += "@" + self.similarity_semantics.value
        return text

    @classmethod
    def parse(cls, text: str) -> PolicyConfig:
        """Parse ``cnt:1``, ``dec:0.2`` or ``dec:1/dec:0.5[@definition]``.

        ``cnt`` is a constant schedule and ``dec`` the quadratically decreasing
        one. A second schedule after ``/`` enables similarity-driven exploration.
        """

        def one(part: str) -> EpsilonSchedule:
            kind, sep, value = part.strip().partition(":")
            kinds = {"cnt": ScheduleKind.CONSTANT, "dec": ScheduleKind.QUADRATIC}
            if not sep or kind not in kinds:
                raise ValidationError("policy", f"malformed schedule {part!r}; expected cnt:<eps> or dec:<eps>")
            try:
                return EpsilonSchedule(kinds[kind], float(value))
            except ValueError as exc:
                if isinstance(exc, ValidationError):
                    raise
                raise ValidationError("policy", f"malformed epsilon in {part!r}") from None

        body, _, semantics = text.partition("@")
        head, slash, tail = body.partition("/")
        if not slash:
            if semantics:
                raise ValidationError("policy", "similarity semantics given without an epsilon_s schedule")
            return cls(Algorithm.EGREEDY, one(head))
        try:
            sem = SimilaritySemantics(semantics or "results")
        except ValueError:
            raise ValidationError("similarity_semantics", f"unknown value {semantics!r}") from None
        return cls(Algorithm.SIMILARITY, one(head), one(tail), sem)

    def to_dict(self) -> dict:
        out = {
            "algorithm": self.algorithm.value,
            "epsilon_initial": self.epsilon.initial,
            "epsilon_schedule": self.epsilon.kind.value,
        }
        if self.epsilon_s is not None:
            out["epsilon_s_initial"] = self.epsilon_s.initial
            out["epsilon_s_schedule"] = self.epsilon_s.kind.value
        out["similarity_semantics"] = self.similarity_semantics.value
        return out

    @classmethod
    def from_dict(cls, data: dict | None) -> PolicyConfig:
        data = data or {}
        if "algorithm" not in data:
            raise ValidationError("algorithm", "policy section must name an algorithm")
        try:
            algorithm = Algorithm(data["algorithm"])
        except ValueError:
            raise ValidationError("algorithm", f"unknown algorithm {data['algorithm']!r}") from None
        if "epsilon_initial" not in data:
            raise ValidationError("epsilon_initial", "missing from policy section")

        def schedule(prefix: str) -> EpsilonSchedule:
            kind = data.get(f"{prefix}_schedule", ScheduleKind.QUADRATIC.value)
            try:
                kind = ScheduleKind(kind)
            except ValueError:
                raise ValidationError(f"{prefix}_schedule", f"unknown schedule {kind!r}") from None
            return EpsilonSchedule(kind, float(data[f"{prefix}_initial"]))

        eps_s = None
        if algorithm is Algorithm.SIMILARITY:
            if "epsilon_s_initial" not in data:
                raise ValidationError("epsilon_s_initial", "required by the similarity algorithm")
            eps_s = schedule("epsilon_s")
        try:
            sem = SimilaritySemantics(data.get("similarity_semantics", "results"))
        except ValueError:
            raise ValidationError("similarity_semantics", f"unknown value {data['similarity_semantics']!r}") from None
        return cls(algorithm, schedule("epsilon"), eps_s, sem)


@dataclass(frozen=True)
class Step:
    iteration: int
    action: int
    reward: float
    mode: str  # "initial", "explore", "similar" or "exploit"
    infeasible: bool = False

    @property
    def explored(self) -> bool:
        return self.mode != "exploit"


Env = Callable[[HopsCombination], float]


class EpsilonGreedy:
    """One learner run (one experiment repetition).

    Actions are handled as indices into ``space``. ``step(env)`` performs one
    full iteration: schedule update (from iteration 2 on), selection, reward
    lookup or evaluation, and best-action bookkeeping.
    """

    def __init__(self, space: ActionSpace, policy: PolicyConfig, seed: int):
        self.space = space
        self.policy = policy
        self.seed = seed
        self.coin = random.Random(f"{seed}/coin")
        self.branch = random.Random(f"{seed}/branch")
        self.pick = random.Random(f"{seed}/pick")
        self.iteration = 1
        self.epsilon = policy.epsilon.initial
        self.epsilon_s = policy.epsilon_s.initial if policy.epsilon_s is not None else None
        self.explored: dict[int, float] = {}
        self.infeasible: set[int] = set()
        self.best: int | None = None
        self.best_reward = -math.inf
        self.history: list[int] = []
        self.all_explored_at: int | None = None
        self._pool = list(range(len(space)))
        self._slot = list(range(len(space)))

    @property
    def unexplored(self) -> list[int]:
        return list(self._pool)

    @property
    def exhausted(self) -> bool:
        """True once every action is explored: from then on each step exploits ``best``."""
        return not self._pool and self.best is not None

    @property
    def best_action(self) -> HopsCombination | None:
        return None if self.best is None else self.space[self.best]

    def select(self) -> tuple[int, str]:
        """Pick the next action index and say how it was chosen.

        Uses the current epsilon values; does not touch the explored set.
        """
        pool = self._pool
        if self.iteration == 1 or self.best is None:
            if not pool:
                raise ConfigurationError("every action is infeasible")
            return pool[self.pick.randrange(len(pool))], "initial"
        if not pool or self.coin.random() >= self.epsilon:
            return self.best, "exploit"
        if self.policy.uses_similarity:
            similar = self.branch.random() < self.epsilon_s
            if self.policy.similarity_semantics is SimilaritySemantics.RESULTS:
                similar = not similar
            if similar:
                cands = self.space.most_similar_indices(self.best, pool)
                return cands[self.pick.randrange(len(cands))], "similar"
        return pool[self.pick.randrange(len(pool))], "explore"

    def _mark_explored(self, idx: int, reward: float) -> None:
        self.explored[idx] = reward
        # swap-remove from the pool in O(1)
        pos = self._slot[idx]
        last = self._pool[-1]
        self._pool[pos] = last
        self._slot[last] = pos
        self._pool.pop()
        if not self._pool:
            self.all_explored_at = self.iteration

    def step(self, env: Env) -> Step:
        if self.iteration >= 2:
            self.epsilon = self.policy.epsilon.next(self.epsilon, self.iteration)
            if self.epsilon_s is not None:
                self.epsilon_s = self.policy.epsilon_s.next(self.epsilon_s, self.iteration)

        idx, mode = self.select()
        infeasible = False
        if idx in self.explored:
            reward = self.explored[idx]
        else:
            try:
                reward = float(env(self.space[idx]))
            except InfeasibleActionError as exc:
                log.warning("iteration %d: %s", self.iteration, exc)
                reward = 0.0
                infeasible = True
                self.infeasible.add(idx)
            self._mark_explored(idx, reward)
            if not infeasible and (
                reward > self.best_reward or (reward == self.best_reward and idx < self.best)
            ):
                self.best, self.best_reward = idx, reward
        infeasible = infeasible or idx in self.infeasible

        step = Step(self.iteration, idx, reward, mode, infeasible)
        self.history.append(idx)
        self.iteration += 1
        return step

    def run(self, env: Env, iterations: int) -> list[Step]:
        return [self.step(env) for _ in range(iterations)]

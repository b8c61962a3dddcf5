"""Routing actions (hops combinations) and the similarity between them.

An action assigns a hop length ``delta[r]`` to every ring ``r = 1..R``: all
STAs of ring ``r`` send to a parent in ring ``r - delta[r]`` (ring 0 is the
gateway). Since ``1 <= delta[r] <= r`` there are exactly ``R!`` actions.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, DimensionError, EmptyPoolError, ValidationError

MAX_RINGS = 10

INFINITE_SIMILARITY = math.inf


@dataclass(frozen=True, order=True)
class HopsCombination:
    delta: tuple[int, ...]

    def __post_init__(self):
        for r, d in enumerate(self.delta, start=1):
            if not 1 <= d <= r:
                raise ValidationError("delta", f"hop length {d} invalid for ring {r} in {self.delta}")

    @property
    def rings(self) -> int:
        return len(self.delta)

    def hop(self, r: int) -> int:
        return self.delta[r - 1]

    def destination(self, r: int) -> int:
        return r - self.delta[r - 1]

    def __str__(self) -> str:
        return "(" + " ".join(str(d) for d in self.delta) + ")"

    @classmethod
    def parse(cls, text: str) -> HopsCombination:
        """Parse ``"(1 1 3)"``, ``"1,1,3"`` or ``"1 1 3"``."""
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = [p for p in re.split(r"[\s,]+", body.strip()) if p]
        if not parts or not all(p.isdigit() for p in parts):
            raise ValidationError("action", f"malformed action string {text!r}")
        return cls(tuple(int(p) for p in parts))


def single_hop(rings: int) -> HopsCombination:
    return HopsCombination(tuple(range(1, rings + 1)))


def next_ring_hop(rings: int) -> HopsCombination:
    return HopsCombination((1,) * rings)


def l1_distance(a: HopsCombination, b: HopsCombination) -> int:
    if len(a.delta) != len(b.delta):
        raise DimensionError(f"actions have different ring counts: {len(a.delta)} vs {len(b.delta)}")
    return sum(abs(x - y) for x, y in zip(a.delta, b.delta))


def similarity(a: HopsCombination, b: HopsCombination) -> float:
    """Reciprocal L1 distance between hop vectors; ``inf`` for identical actions."""
    dist = l1_distance(a, b)
    if dist == 0:
        return INFINITE_SIMILARITY
    return 1.0 / dist


class ActionSpace:
    """All ``R!`` actions for ``R`` rings, in lexicographic order."""

    def __init__(self, rings: int):
        if isinstance(rings, bool) or not 1 <= rings <= MAX_RINGS:
            raise CapacityError(f"rings must be within 1..{MAX_RINGS} to enumerate, got {rings}")
        self.rings = rings
        # product() over the per-ring ranges is already lexicographic
        self.actions: tuple[HopsCombination, ...] = tuple(
            HopsCombination(delta) for delta in itertools.product(*(range(1, r + 1) for r in range(1, rings + 1)))
        )
        self._index = {a: i for i, a in enumerate(self.actions)}

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __getitem__(self, idx: int) -> HopsCombination:
        return self.actions[idx]

    def __contains__(self, action) -> bool:
        return action in self._index

    def index(self, action: HopsCombination) -> int:
        try:
            return self._index[action]
        except KeyError:
            raise KeyError(f"{action} is not an action of the {self.rings}-ring space") from None

    @cached_property
    def matrix(self) -> np.ndarray:
        """``(|space|, R)`` integer array of hop vectors."""
        return np.array([a.delta for a in self.actions], dtype=np.int64)

    def most_similar_indices(self, best: int, candidates) -> list[int]:
        """Indices in ``candidates`` at minimum L1 distance from action ``best``.

        Returned in ascending index order.
        """
        cand = np.fromiter(candidates, dtype=np.int64)
        if cand.size == 0:
            raise EmptyPoolError("no unexplored actions left")
        cand.sort()
        dist = np.abs(self.matrix[cand] - self.matrix[best]).sum(axis=1)
        return cand[dist == dist.min()].tolist()


def enumerate_actions(rings: int) -> ActionSpace:
    return ActionSpace(rings)


def most_similar_unexplored(space: ActionSpace, explored, best: HopsCombination) -> set[HopsCombination]:
    """Unexplored actions attaining maximum similarity to ``best``."""
    explored = set(explored)
    pool = [i for i, a in enumerate(space.actions) if a not in explored]
    if not pool:
        raise EmptyPoolError("every action has been explored; exploit instead")
    if best.rings != space.rings:
        raise DimensionError(f"best action has {best.rings} rings, space has {space.rings}")
    return {space[i] for i in space.most_similar_indices(space.index(best), pool)}

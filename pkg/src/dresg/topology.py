"""Ring/branch network structures.

STAs sit on ``R`` concentric rings around the gateway (ring 0, distance 0).
Every STA outside the last ring has ``c`` tree children in the next ring and
the network is made of ``B`` identical branches, so ring ``r`` holds
``B * c**(r-1)`` nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidHopError, ValidationError


class Spreading(str, enum.Enum):
    EQUIDISTANT = "equidistant"


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValidationError(name, f"must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class NetworkStructure:
    rings: int
    children_ratio: int
    branches: int
    max_distance: float
    spreading: Spreading
    ring_distances: tuple[float, ...]

    @property
    def node_count(self) -> int:
        return self.branches * self.branch_load

    @property
    def branch_load(self) -> int:
        return sum(self.children_ratio ** (r - 1) for r in range(1, self.rings + 1))

    def nodes_in_ring(self, r: int) -> int:
        return nodes_in_ring(self, r)

    def distance(self, r: int) -> float:
        """Distance of ring ``r`` to the gateway; ring 0 is the gateway itself."""
        if r == 0:
            return 0.0
        self._check_ring(r)
        return self.ring_distances[r - 1]

    def link_distance(self, r: int, delta: int) -> float:
        return link_distance(self, r, delta)

    def _check_ring(self, r: int) -> None:
        if not 1 <= r <= self.rings:
            raise IndexError(f"ring {r} out of range 1..{self.rings}")


def build_network(
    rings: int,
    children_ratio: int,
    branches: int,
    max_distance: float,
    spreading: Spreading | str = Spreading.EQUIDISTANT,
) -> NetworkStructure:
    rings = _positive_int("rings", rings)
    children_ratio = _positive_int("children_ratio", children_ratio)
    branches = _positive_int("branches", branches)
    if not max_distance > 0:
        raise ValidationError("max_distance", f"must be > 0, got {max_distance!r}")
    try:
        spreading = Spreading(spreading)
    except ValueError:
        raise ValidationError("spreading", f"unknown spreading model {spreading!r}") from None

    max_distance = float(max_distance)
    # Only equidistant spreading exists today; the last ring lands exactly on D.
    distances = tuple(r * max_distance / rings for r in range(1, rings))
    distances += (max_distance,)
    return NetworkStructure(rings, children_ratio, branches, max_distance, spreading, distances)


def nodes_in_ring(net: NetworkStructure, r: int) -> int:
    net._check_ring(r)
    return net.branches * net.children_ratio ** (r - 1)


def link_distance(net: NetworkStructure, r: int, delta: int) -> float:
    """Radial distance covered by a hop of ``delta`` rings starting at ring ``r``."""
    net._check_ring(r)
    if not 1 <= delta <= r:
        raise InvalidHopError(f"hop length {delta} invalid for ring {r} (must be 1..{r})")
    return net.distance(r) - net.distance(r - delta)

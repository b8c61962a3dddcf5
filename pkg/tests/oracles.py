"""Independent reference implementations used only by the tests.

Nothing here imports the engine's load or configuration code: the per-node
simulator instantiates every STA of every branch, wires each one to its
structural-tree ancestor in the destination ring, pushes payload counts up
the tree node by node and prices each node with its own exhaustive scan of
the profile's (power, rate) pairs.
"""

from __future__ import annotations

import itertools
import math


def grid_actions(rings: int) -> list[tuple[int, ...]]:
    """Filter the full grid {1..R}^R down to valid hop vectors."""
    grid = itertools.product(range(1, rings + 1), repeat=rings)
    return [v for v in grid if all(1 <= v[r] <= r + 1 for r in range(rings))]


def scan_config(profile, link, distance: float, packet_bits: float):
    """Cheapest feasible (energy, -rate, dbm, current_ma, rate) tuple or None."""
    loss = link.intercept_db + link.slope_db * math.log10(distance)
    best = None
    for p in profile.power_levels:
        for s in profile.rate_levels:
            received = p.dbm + link.gain_tx_dbi + link.gain_rx_dbi - loss
            if received + 1e-9 < s.sensitivity_dbm:
                continue
            energy = packet_bits / s.bps * (p.current_ma / 1000.0) * profile.vdd
            cand = (energy, -s.bps, p.dbm, p.current_ma, s.bps)
            if best is None or cand < best:
                best = cand
    return best


class Infeasible(Exception):
    pass


def per_node_energy(rings, c, branches, max_distance, action, profile, link, payload_cap=4, packet_bytes=65):
    """Energy of every STA under ``action``.

    Returns ``{(ring, branch, k): (e_tx, e_rx)}`` where ``k`` is the node's
    position within its branch's ring (``0 .. c**(ring-1) - 1``).
    """
    bits = packet_bytes * 8
    nodes = {
        r: [(b, k) for b in range(branches) for k in range(c ** (r - 1))] for r in range(1, rings + 1)
    }
    payloads = {(r, b, k): 1 for r in nodes for (b, k) in nodes[r]}
    children = {key: [] for key in payloads}
    energy = {}

    for r in range(rings, 0, -1):
        hop = action[r - 1]
        dest = r - hop
        dist = r * max_distance / rings - dest * max_distance / rings
        cfg = scan_config(profile, link, dist, bits)
        if cfg is None:
            raise Infeasible(r)
        _, _, _, current_ma, rate = cfg
        for b, k in nodes[r]:
            me = (r, b, k)
            # payloads and packets of this node are final: its children all
            # live in outer rings that were processed already
            carried = payloads[me]
            packets = math.ceil(carried / payload_cap)
            t_tx = packets * bits / rate
            t_rx = sum(n_pk * bits / child_rate for n_pk, child_rate in children[me])
            energy[me] = (
                t_tx * current_ma / 1000.0 * profile.vdd,
                t_rx * profile.rx_current_ma / 1000.0 * profile.vdd,
            )
            if dest > 0:
                parent = (dest, b, k // c**hop)
                payloads[parent] += carried
                children[parent].append((packets, rate))
    return energy


def per_node_bottleneck(energy: dict) -> tuple[float, list[float], list[float], list[float]]:
    """(e_b, per-ring max e, per-ring max e_tx, per-ring max e_rx) from a per-node map."""
    rings = max(r for r, _, _ in energy)
    e = [max(sum(v) for (rr, _, _), v in energy.items() if rr == r) for r in range(1, rings + 1)]
    tx = [max(v[0] for (rr, _, _), v in energy.items() if rr == r) for r in range(1, rings + 1)]
    rx = [max(v[1] for (rr, _, _), v in energy.items() if rr == r) for r in range(1, rings + 1)]
    return max(e), e, tx, rx


def analytic_mean_first_hit(n_actions: int) -> float:
    """Mean position of a fixed item in a uniform random permutation."""
    return (n_actions + 1) / 2

"""Per-ring energy accounting for a routing action.

Branches are identical and ring populations grow by an integer factor, so the
STAs of one ring all carry the same load. The engine therefore tracks one
representative (worst-loaded) STA per ring instead of instantiating all ``N``
nodes. Transfers are scheduled on an ideal TDMA: a parent listens exactly
during its children's transmissions and nothing collides.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .actions import ActionSpace, HopsCombination
from .errors import (
    ConfigurationError,
    DegenerateNetworkError,
    InfeasibleActionError,
    InfeasibleLinkError,
    ValidationError,
)
from .link import LinkBudgetModel, TransceiverProfile, TransmissionConfiguration, select_tx_config
from .topology import NetworkStructure


@dataclass(frozen=True)
class PacketModel:
    payload_bytes: int = 15
    header_bytes: int = 2
    packet_bytes: int = 65
    max_payloads: int = 4

    def __post_init__(self):
        for name in ("payload_bytes", "packet_bytes", "max_payloads"):
            if getattr(self, name) < 1:
                raise ValidationError(name, "must be >= 1")
        if self.header_bytes < 0:
            raise ValidationError("header_bytes", "must be >= 0")
        if self.packet_bytes < self.header_bytes + self.payload_bytes:
            raise ValidationError("packet_bytes", "must hold at least the header and one payload")
        if self.max_payloads * self.payload_bytes + self.header_bytes > self.packet_bytes:
            raise ValidationError(
                "max_payloads",
                f"{self.max_payloads} payloads of {self.payload_bytes} B plus a {self.header_bytes} B header "
                f"do not fit a {self.packet_bytes} B packet",
            )

    @property
    def packet_bits(self) -> int:
        return self.packet_bytes * 8

    def packets_for(self, payloads: int) -> int:
        return -(-payloads // self.max_payloads)

    def to_dict(self) -> dict:
        return {
            "payload_bytes": self.payload_bytes,
            "header_bytes": self.header_bytes,
            "packet_bytes": self.packet_bytes,
            "max_payloads": self.max_payloads,
        }


@dataclass(frozen=True)
class Scenario:
    """Everything needed to price an action: structure, radio and packets."""

    network: NetworkStructure
    profile: TransceiverProfile
    link: LinkBudgetModel
    packet: PacketModel = field(default_factory=PacketModel)
    name: str = "custom"


@dataclass(frozen=True)
class RingLoad:
    ring: int
    destination: int
    payloads_in: int
    packets_in: int
    payloads_out: int
    packets_out: int
    rx_time: float
    tx_config: TransmissionConfiguration


@dataclass(frozen=True)
class EnergyReport:
    action: HopsCombination
    e_tx: tuple[float, ...]
    e_rx: tuple[float, ...]
    bottleneck_ring: int
    e_b: float
    gateway_rx_time: float = 0.0
    gateway_e_rx: float = 0.0

    @property
    def e(self) -> tuple[float, ...]:
        return tuple(t + r for t, r in zip(self.e_tx, self.e_rx))


class _ConfigCache:
    """Memo of the transmission configuration for each (ring, hop) link."""

    def __init__(self, net, profile, link, packet):
        self.net, self.profile, self.link, self.packet = net, profile, link, packet
        self._cache: dict[tuple[int, int], TransmissionConfiguration | InfeasibleLinkError] = {}

    def get(self, r: int, delta: int) -> TransmissionConfiguration:
        key = (r, delta)
        if key not in self._cache:
            try:
                d = self.net.link_distance(r, delta)
                self._cache[key] = select_tx_config(self.profile, self.link, d, self.packet.packet_bits)
            except InfeasibleLinkError as exc:
                self._cache[key] = exc
        hit = self._cache[key]
        if isinstance(hit, InfeasibleLinkError):
            raise hit
        return hit


def _check_action(net: NetworkStructure, action: HopsCombination) -> None:
    if action.rings != net.rings:
        raise ValidationError("action", f"{action} has {action.rings} rings, network has {net.rings}")


def _ring_loads(net, action, packet, configs: _ConfigCache) -> tuple[list[RingLoad], dict]:
    R = net.rings
    nodes = [1] + [net.nodes_in_ring(r) for r in range(1, R + 1)]  # index 0: the GW
    payloads_in = [0] * (R + 1)
    packets_in = [0] * (R + 1)
    rx_time = [0.0] * (R + 1)
    loads: list[RingLoad | None] = [None] * (R + 1)

    # Every parent lies in a lower ring, so walking outside-in finalizes a
    # ring's inbound traffic before that ring is priced.
    for r in range(R, 0, -1):
        out_payloads = 1 + payloads_in[r]
        out_packets = packet.packets_for(out_payloads)
        dest = action.destination(r)
        try:
            cfg = configs.get(r, action.hop(r))
        except InfeasibleLinkError as exc:
            raise InfeasibleActionError(r, action, exc) from exc
        airtime = packet.packet_bits / cfg.rate_bps

        children = -(-nodes[r] // nodes[dest])
        payloads_in[dest] += -(-(nodes[r] * out_payloads) // nodes[dest])
        packets_in[dest] += children * out_packets
        rx_time[dest] += children * out_packets * airtime

        loads[r] = RingLoad(
            ring=r,
            destination=dest,
            payloads_in=payloads_in[r],
            packets_in=packets_in[r],
            payloads_out=out_payloads,
            packets_out=out_packets,
            rx_time=rx_time[r],
            tx_config=cfg,
        )
    gateway = {"payloads_in": payloads_in[0], "packets_in": packets_in[0], "rx_time": rx_time[0]}
    return loads[1:], gateway


def ring_loads(
    net: NetworkStructure,
    action: HopsCombination,
    profile: TransceiverProfile,
    link: LinkBudgetModel,
    packet: PacketModel,
) -> list[RingLoad]:
    """Load of the worst-loaded STA in each ring, ring 1 first."""
    _check_action(net, action)
    loads, _ = _ring_loads(net, action, packet, _ConfigCache(net, profile, link, packet))
    return loads


def gateway_load(net, action, profile, link, packet) -> dict:
    """Payloads, packets and listening time collected by the gateway."""
    _check_action(net, action)
    _, gw = _ring_loads(net, action, packet, _ConfigCache(net, profile, link, packet))
    return gw


def _report(action, loads, gateway, profile, packet) -> EnergyReport:
    vdd = profile.vdd
    rx_amps = profile.rx_current_ma * 1e-3
    e_tx = []
    e_rx = []
    for load in loads:
        cfg = load.tx_config
        tx_amps = profile.power_level(cfg.level).current_ma * 1e-3
        e_tx.append(load.packets_out * (packet.packet_bits / cfg.rate_bps) * tx_amps * vdd)
        e_rx.append(load.rx_time * rx_amps * vdd)
    totals = [t + r for t, r in zip(e_tx, e_rx)]
    e_b = max(totals)
    bottleneck = totals.index(e_b) + 1  # first maximum -> lowest ring on ties
    return EnergyReport(
        action=action,
        e_tx=tuple(e_tx),
        e_rx=tuple(e_rx),
        bottleneck_ring=bottleneck,
        e_b=e_b,
        gateway_rx_time=gateway["rx_time"],
        gateway_e_rx=gateway["rx_time"] * rx_amps * vdd,
    )


def evaluate_action(
    net: NetworkStructure,
    action: HopsCombination,
    profile: TransceiverProfile,
    link: LinkBudgetModel,
    packet: PacketModel,
) -> EnergyReport:
    _check_action(net, action)
    loads, gw = _ring_loads(net, action, packet, _ConfigCache(net, profile, link, packet))
    return _report(action, loads, gw, profile, packet)


def reward(report: EnergyReport) -> float:
    if report.e_b <= 0:
        raise DegenerateNetworkError(f"bottleneck energy {report.e_b} for {report.action}")
    return 1.0 / report.e_b


@dataclass(frozen=True)
class EnergyTable:
    """Per-ring energy of every action of a scenario.

    Row ``i`` corresponds to ``space[i]``. Infeasible actions hold NaN and are
    flagged in ``feasible``.
    """

    space: ActionSpace
    energy: np.ndarray  # (|space|, R) joules per round, tx + rx
    e_b: np.ndarray
    feasible: np.ndarray
    reports: tuple[EnergyReport | None, ...]

    @property
    def optimum(self) -> int:
        if not self.feasible.any():
            raise ConfigurationError("every action is infeasible; check the profile and link model")
        return int(np.argmin(np.where(self.feasible, self.e_b, np.inf)))

    @property
    def min_e_b(self) -> float:
        return float(self.e_b[self.optimum])

    @property
    def optimal_set(self) -> np.ndarray:
        """Indices of every action whose bottleneck energy equals the minimum."""
        return np.flatnonzero(self.feasible & (self.e_b == self.min_e_b))

    def report(self, idx: int) -> EnergyReport:
        rep = self.reports[idx]
        if rep is None:
            raise InfeasibleActionError(0, self.space[idx])
        return rep


def evaluate_all(scenario: Scenario, space: ActionSpace | None = None) -> EnergyTable:
    net = scenario.network
    space = space or ActionSpace(net.rings)
    configs = _ConfigCache(net, scenario.profile, scenario.link, scenario.packet)
    energy = np.full((len(space), net.rings), np.nan)
    e_b = np.full(len(space), np.nan)
    feasible = np.zeros(len(space), dtype=bool)
    reports: list[EnergyReport | None] = []
    for i, action in enumerate(space):
        try:
            loads, gw = _ring_loads(net, action, scenario.packet, configs)
        except InfeasibleActionError:
            reports.append(None)
            continue
        rep = _report(action, loads, gw, scenario.profile, scenario.packet)
        reports.append(rep)
        energy[i] = rep.e
        e_b[i] = rep.e_b
        feasible[i] = True
    for arr in (energy, e_b, feasible):
        arr.setflags(write=False)
    return EnergyTable(space, energy, e_b, feasible, tuple(reports))


def brute_force_optimal(
    net: NetworkStructure,
    profile: TransceiverProfile,
    link: LinkBudgetModel,
    packet: PacketModel,
) -> tuple[HopsCombination, EnergyReport]:
    """Evaluate every action and return the one with the smallest bottleneck energy."""
    table = evaluate_all(Scenario(net, profile, link, packet))
    best = table.optimum
    return table.space[best], table.report(best)

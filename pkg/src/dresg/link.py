"""Transceiver profiles, log-distance path loss and transmission configuration choice."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import InfeasibleLinkError, ValidationError

# dB slack on the link-budget comparison so that max_range() round-trips
# through log10/pow without falling a few ulps short of the boundary.
BUDGET_TOLERANCE_DB = 1e-9


@dataclass(frozen=True)
class PowerLevel:
    level: int
    dbm: float
    current_ma: float


@dataclass(frozen=True)
class RateLevel:
    bps: float
    sensitivity_dbm: float


@dataclass(frozen=True)
class TransceiverProfile:
    power_levels: tuple[PowerLevel, ...]
    rate_levels: tuple[RateLevel, ...]
    rx_current_ma: float
    vdd: float
    name: str = "custom"

    def __post_init__(self):
        if not self.power_levels:
            raise ValidationError("power_levels", "profile needs at least one power level")
        if not self.rate_levels:
            raise ValidationError("rate_levels", "profile needs at least one rate level")
        for i, p in enumerate(self.power_levels):
            if p.level != i + 1:
                raise ValidationError("power_levels", f"level indices must run 1..n in order, got {p.level} at position {i + 1}")
            if not p.current_ma > 0:
                raise ValidationError("power_levels", f"level {p.level} current must be > 0")
            if not math.isfinite(p.dbm):
                raise ValidationError("power_levels", f"level {p.level} power must be finite")
        for a, b in zip(self.power_levels, self.power_levels[1:]):
            if not a.dbm > b.dbm:
                raise ValidationError("power_levels", "power must strictly decrease with level index (level 1 = max power)")
        for r in self.rate_levels:
            if not r.bps > 0:
                raise ValidationError("rate_levels", f"rate must be > 0, got {r.bps}")
            if not math.isfinite(r.sensitivity_dbm):
                raise ValidationError("rate_levels", f"sensitivity for {r.bps} bps must be finite")
        if not self.rx_current_ma > 0:
            raise ValidationError("rx_current_ma", "must be > 0")
        if not self.vdd > 0:
            raise ValidationError("vdd", "must be > 0")

    @property
    def max_power(self) -> PowerLevel:
        return self.power_levels[0]

    @property
    def min_rate(self) -> RateLevel:
        return min(self.rate_levels, key=lambda r: r.bps)

    def sensitivity(self, bps: float) -> float:
        for r in self.rate_levels:
            if r.bps == bps:
                return r.sensitivity_dbm
        raise KeyError(f"rate {bps} bps not in profile")

    def power_level(self, level: int) -> PowerLevel:
        return self.power_levels[level - 1]

    @classmethod
    def from_dict(cls, data: dict) -> TransceiverProfile:
        try:
            powers = tuple(
                PowerLevel(int(p["level"]), float(p["dbm"]), float(p["current_ma"]))
                for p in data.get("power_levels") or ()
            )
            rates = tuple(
                RateLevel(float(r["bps"]), float(r["sensitivity_dbm"]))
                for r in data.get("rate_levels") or ()
            )
        except KeyError as exc:
            raise ValidationError(str(exc.args[0]), "missing in profile entry") from None
        for key in ("rx_current_ma", "vdd"):
            if key not in data:
                raise ValidationError(key, "missing from transceiver profile")
        return cls(powers, rates, float(data["rx_current_ma"]), float(data["vdd"]), str(data.get("name", "custom")))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "power_levels": [
                {"level": p.level, "dbm": p.dbm, "current_ma": p.current_ma} for p in self.power_levels
            ],
            "rate_levels": [{"bps": r.bps, "sensitivity_dbm": r.sensitivity_dbm} for r in self.rate_levels],
            "rx_current_ma": self.rx_current_ma,
            "vdd": self.vdd,
        }

    @classmethod
    def load(cls, path: str | Path) -> TransceiverProfile:
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh) or {})


@dataclass(frozen=True)
class LinkBudgetModel:
    """Two-coefficient log-distance path loss plus fixed antenna gains.

    ``PL(d) = intercept_db + slope_db * log10(d)`` with ``d`` in meters.
    """

    intercept_db: float
    slope_db: float
    frequency_hz: float = 868e6
    gain_tx_dbi: float = 0.0
    gain_rx_dbi: float = 3.0

    def __post_init__(self):
        if not self.slope_db > 0:
            raise ValidationError("slope_db", f"must be > 0, got {self.slope_db}")
        if not math.isfinite(self.intercept_db):
            raise ValidationError("intercept_db", "must be finite")

    @classmethod
    def from_dict(cls, data: dict) -> LinkBudgetModel:
        for key in ("intercept_db", "slope_db"):
            if key not in data:
                raise ValidationError(key, "missing from link model")
        return cls(
            float(data["intercept_db"]),
            float(data["slope_db"]),
            float(data.get("frequency_hz", 868e6)),
            float(data.get("gain_tx_dbi", 0.0)),
            float(data.get("gain_rx_dbi", 3.0)),
        )

    def to_dict(self) -> dict:
        return {
            "intercept_db": self.intercept_db,
            "slope_db": self.slope_db,
            "frequency_hz": self.frequency_hz,
            "gain_tx_dbi": self.gain_tx_dbi,
            "gain_rx_dbi": self.gain_rx_dbi,
        }


@dataclass(frozen=True)
class TransmissionConfiguration:
    level: int
    power_dbm: float
    rate_bps: float


def path_loss(model: LinkBudgetModel, d: float) -> float:
    if not d > 0:
        raise ValueError(f"path loss undefined for distance {d!r}")
    return model.intercept_db + model.slope_db * math.log10(d)


def link_margin(profile: TransceiverProfile, model: LinkBudgetModel, cfg: TransmissionConfiguration, d: float) -> float:
    """Received power minus the sensitivity required by ``cfg``'s rate, in dB."""
    received = cfg.power_dbm + model.gain_tx_dbi + model.gain_rx_dbi - path_loss(model, d)
    return received - profile.sensitivity(cfg.rate_bps)


def link_feasible(profile: TransceiverProfile, model: LinkBudgetModel, cfg: TransmissionConfiguration, d: float) -> bool:
    return link_margin(profile, model, cfg, d) >= -BUDGET_TOLERANCE_DB


def all_configurations(profile: TransceiverProfile):
    for p in profile.power_levels:
        for r in profile.rate_levels:
            yield TransmissionConfiguration(p.level, p.dbm, r.bps)


def tx_energy(profile: TransceiverProfile, cfg: TransmissionConfiguration, packet_bits: float) -> float:
    """Joules spent sending ``packet_bits`` with ``cfg``."""
    current_a = profile.power_level(cfg.level).current_ma * 1e-3
    return packet_bits / cfg.rate_bps * current_a * profile.vdd


def select_tx_config(
    profile: TransceiverProfile, model: LinkBudgetModel, d: float, packet_bits: float
) -> TransmissionConfiguration:
    """Cheapest feasible (power, rate) pair for a link of length ``d``.

    Ties go to the higher rate, then to the lower transmit power.
    """
    if not packet_bits > 0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits!r}")
    best = None
    best_key = None
    worst_gap = -math.inf
    for cfg in all_configurations(profile):
        margin = link_margin(profile, model, cfg, d)
        if margin < -BUDGET_TOLERANCE_DB:
            worst_gap = max(worst_gap, margin)
            continue
        key = (tx_energy(profile, cfg, packet_bits), -cfg.rate_bps, cfg.power_dbm)
        if best_key is None or key < best_key:
            best, best_key = cfg, key
    if best is None:
        raise InfeasibleLinkError(d, -worst_gap)
    return best


def max_range(profile: TransceiverProfile, model: LinkBudgetModel) -> float:
    """Largest distance reachable at maximum power and minimum rate."""
    budget = (
        profile.max_power.dbm
        + model.gain_tx_dbi
        + model.gain_rx_dbi
        - profile.min_rate.sensitivity_dbm
        - model.intercept_db
    )
    return 10.0 ** (budget / model.slope_db)

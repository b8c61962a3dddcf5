"""Experiment configuration documents and scenario presets.

A config is one YAML (or JSON) document with the sections ``network``,
``radio``, ``packet``, ``policy`` and ``run``. Every omitted value falls back
to the defaults below; :func:`config_to_dict` emits the fully resolved form,
with the transceiver profile inlined and ``max_distance`` as a number, so a
saved config reloads to an identical :class:`ExperimentConfig`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .bandit import PolicyConfig
from .energy import PacketModel, Scenario
from .errors import ValidationError
from .harness import ExperimentConfig
from .link import LinkBudgetModel, TransceiverProfile, max_range
from .topology import Spreading, build_network

CONFIG_DIR_ENV = "DRESG_CONFIG_DIR"

BUILTIN_PROFILES = {"cc1200": "cc1200.yaml"}

# 802.11ah outdoor pico/hot-zone path loss, 23.3 + 37.6 log10(d) at 900 MHz,
# with the 21 log10(f / 900 MHz) carrier correction folded into the intercept
# for 868 MHz.
DEFAULT_LINK = LinkBudgetModel(intercept_db=22.97, slope_db=37.6, frequency_hz=868e6, gain_tx_dbi=0.0, gain_rx_dbi=3.0)
DEFAULT_PACKET = PacketModel(payload_bytes=15, header_bytes=2, packet_bytes=65, max_payloads=4)
DEFAULT_RUN = {"iterations": 500, "repetitions": 1000, "seed_base": 0}


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    rings: int
    children_ratio: int
    branches: int = 1
    profile: str = "cc1200"
    iterations: int = 500
    notes: str = ""

    def network_section(self) -> dict:
        return {
            "rings": self.rings,
            "children_ratio": self.children_ratio,
            "branches": self.branches,
            "max_distance": "auto",
            "spreading": Spreading.EQUIDISTANT.value,
        }


def _build_presets() -> dict[str, ScenarioPreset]:
    presets = {}
    for rings in range(3, 8):
        for c in (1, 2, 3, 8):
            name = f"R{rings}c{c}"
            presets[name] = ScenarioPreset(name, rings, c, notes="similarity sweep grid")
    presets["A"] = ScenarioPreset("A", 3, 2, iterations=500, notes="R=3, c=2, |actions|=6")
    presets["E"] = ScenarioPreset("E", 4, 8, iterations=500, notes="R=4, c=8, |actions|=24")
    presets["N"] = ScenarioPreset("N", 7, 3, iterations=2000, notes="R=7, c=3, |actions|=5040")
    return presets


PRESETS = _build_presets()


def builtin_profile(name: str = "cc1200") -> TransceiverProfile:
    try:
        fname = BUILTIN_PROFILES[name]
    except KeyError:
        raise ValidationError("profile", f"unknown built-in profile {name!r}") from None
    text = resources.files("dresg.data").joinpath(fname).read_text()
    return TransceiverProfile.from_dict(yaml.safe_load(text))


def find_file(path: str | Path) -> Path:
    """Resolve ``path`` as given, then relative to ``$DRESG_CONFIG_DIR``."""
    p = Path(path)
    if p.is_file():
        return p
    base = os.environ.get(CONFIG_DIR_ENV)
    if base and not p.is_absolute() and (Path(base) / p).is_file():
        return Path(base) / p
    raise FileNotFoundError(f"config file {str(path)!r} not found")


def _read(path: Path) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError("config", f"{path} must hold a mapping at top level")
    return data


def _resolve_profile(ref, base_dir: Path | None) -> TransceiverProfile:
    if ref is None:
        return builtin_profile()
    if isinstance(ref, dict):
        return TransceiverProfile.from_dict(ref)
    if isinstance(ref, str):
        if ref in BUILTIN_PROFILES:
            return builtin_profile(ref)
        path = Path(ref)
        if base_dir is not None and not path.is_absolute() and (base_dir / path).is_file():
            path = base_dir / path
        return TransceiverProfile.load(find_file(path))
    raise ValidationError("radio.profile", "must be a built-in name, a path or an inline mapping")


def _int_field(section: dict, key: str, default=None, prefix: str = "") -> int:
    value = section.get(key, default)
    if value is None:
        raise ValidationError(prefix + key, "missing required value")
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ValidationError(prefix + key, f"must be an integer, got {value!r}")
    return int(value)


def resolve_scenario(data: dict, base_dir: Path | None = None) -> Scenario:
    """Build a :class:`Scenario` from the network/radio/packet sections."""
    net = dict(data.get("network") or {})
    name = data.get("name")
    preset_name = net.pop("preset", None)
    if preset_name is not None:
        try:
            preset = PRESETS[preset_name]
        except KeyError:
            raise ValidationError("network.preset", f"unknown preset {preset_name!r}") from None
        net = {**preset.network_section(), **net}
        name = name or preset.name

    radio = data.get("radio") or {}
    profile = _resolve_profile(radio.get("profile"), base_dir)
    link = LinkBudgetModel.from_dict({**DEFAULT_LINK.to_dict(), **(radio.get("link") or {})})

    packet_data = {**DEFAULT_PACKET.to_dict(), **(data.get("packet") or {})}
    packet = PacketModel(**{k: _int_field(packet_data, k, prefix="packet.") for k in DEFAULT_PACKET.to_dict()})

    max_distance = net.get("max_distance", "auto")
    if max_distance in (None, "auto"):
        max_distance = max_range(profile, link)
    elif isinstance(max_distance, bool) or not isinstance(max_distance, (int, float)):
        raise ValidationError("network.max_distance", f"must be a number or 'auto', got {max_distance!r}")

    network = build_network(
        _int_field(net, "rings", prefix="network."),
        _int_field(net, "children_ratio", prefix="network."),
        _int_field(net, "branches", 1, prefix="network."),
        float(max_distance),
        net.get("spreading", Spreading.EQUIDISTANT.value),
    )
    return Scenario(network, profile, link, packet, name or f"R{network.rings}c{network.children_ratio}")


def resolve_config(data: dict, base_dir: Path | None = None) -> ExperimentConfig:
    scenario = resolve_scenario(data, base_dir)
    policy = PolicyConfig.from_dict(data.get("policy"))
    run = {**DEFAULT_RUN, **(data.get("run") or {})}
    return ExperimentConfig(
        scenario=scenario,
        policy=policy,
        iterations=_int_field(run, "iterations", prefix="run."),
        repetitions=_int_field(run, "repetitions", prefix="run."),
        seed_base=_int_field(run, "seed_base", prefix="run."),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    path = find_file(path)
    return resolve_config(_read(path), path.parent)


def load_scenario(ref: str) -> Scenario:
    """A preset name, or a config file whose network/radio/packet sections are used."""
    if ref in PRESETS:
        return preset_scenario(ref)
    try:
        path = find_file(ref)
    except FileNotFoundError:
        raise ValidationError("scenario", f"{ref!r} is neither a preset ({', '.join(sorted(PRESETS))}) nor a file") from None
    return resolve_scenario(_read(path), path.parent)


def preset_scenario(name: str, profile: TransceiverProfile | None = None) -> Scenario:
    try:
        preset = PRESETS[name]
    except KeyError:
        raise ValidationError("scenario", f"unknown preset {name!r}") from None
    data = {"name": preset.name, "network": preset.network_section()}
    if profile is not None:
        data["radio"] = {"profile": profile.to_dict()}
    return resolve_scenario(data)


def scenario_to_dict(scenario: Scenario) -> dict:
    net = scenario.network
    return {
        "name": scenario.name,
        "network": {
            "rings": net.rings,
            "children_ratio": net.children_ratio,
            "branches": net.branches,
            "max_distance": net.max_distance,
            "spreading": net.spreading.value,
        },
        "radio": {"profile": scenario.profile.to_dict(), "link": scenario.link.to_dict()},
        "packet": scenario.packet.to_dict(),
    }


def config_to_dict(config: ExperimentConfig) -> dict:
    out = scenario_to_dict(config.scenario)
    out["policy"] = config.policy.to_dict()
    out["run"] = {
        "iterations": config.iterations,
        "repetitions": config.repetitions,
        "seed_base": config.seed_base,
    }
    return out


def dump_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False)

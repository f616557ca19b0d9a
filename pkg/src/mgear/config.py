"""Experiment configuration and the flat ``key = value`` config format.

Example::

    # Table 1 radio, but the more common 50 nJ/bit electronics
    protocol = both
    e_elec = 50e-9
    d_threshold_gw = 20
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any, Callable

from .energy import AmplifierMode, RadioParams
from .topology import FieldSpec, Position


class Protocol(str, Enum):
    MGEAR = "mgear"
    LEACH = "leach"


class ConfigError(ValueError):
    """Invalid configuration; carries the offending key and line when known."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class NetworkConfig:
    protocol: Protocol = Protocol.MGEAR
    n: int = 100
    field: FieldSpec = dc_field(default_factory=FieldSpec)
    radio: RadioParams = dc_field(default_factory=RadioParams)
    p: float = 0.1
    packet_bits: int = 4000
    control_bits: int = 200
    charge_control_packets: bool = False
    require_min_energy_for_ch: bool = False
    min_ch_energy: float = 0.0
    max_rounds: int = 50_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "protocol", Protocol(self.protocol))
        if self.n < 1:
            raise ConfigError(f"must be >= 1, got {self.n}", key="n")
        if not 0 < self.p < 1:
            raise ConfigError(f"must lie in (0, 1), got {self.p}", key="p")
        if self.packet_bits < 1:
            raise ConfigError(f"must be >= 1, got {self.packet_bits}", key="packet_bits")
        if self.control_bits < 1:
            raise ConfigError(f"must be >= 1, got {self.control_bits}", key="control_bits")
        if self.max_rounds < 0:
            raise ConfigError(f"must be >= 0, got {self.max_rounds}", key="max_rounds")
        if not math.isfinite(self.min_ch_energy) or self.min_ch_energy < 0:
            raise ConfigError(f"must be finite and >= 0, got {self.min_ch_energy}", key="min_ch_energy")

    def replace(self, **changes: Any) -> "NetworkConfig":
        return dataclasses.replace(self, **changes)


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"not finite: {text!r}")
    return value


# key -> (section, attribute, parser); section None means a top-level NetworkConfig field
_KEYS: dict[str, tuple[str | None, str, Callable[[str], Any]]] = {
    "protocol": (None, "protocol", lambda s: Protocol(s.lower())),
    "n": (None, "n", _parse_int),
    "p": (None, "p", _parse_float),
    "packet_bits": (None, "packet_bits", _parse_int),
    "control_bits": (None, "control_bits", _parse_int),
    "charge_control_packets": (None, "charge_control_packets", _parse_bool),
    "require_min_energy_for_ch": (None, "require_min_energy_for_ch", _parse_bool),
    "min_ch_energy": (None, "min_ch_energy", _parse_float),
    "max_rounds": (None, "max_rounds", _parse_int),
    "seed": (None, "seed", _parse_int),
    "width": ("field", "width", _parse_float),
    "height": ("field", "height", _parse_float),
    "bs_x": ("field", "bs_x", _parse_float),
    "bs_y": ("field", "bs_y", _parse_float),
    "gateway_x": ("field", "gateway_x", _parse_float),
    "gateway_y": ("field", "gateway_y", _parse_float),
    "d_threshold_bs": ("field", "d_threshold_bs", _parse_float),
    "d_threshold_gw": ("field", "d_threshold_gw", _parse_float),
    "gateway_enabled": ("field", "gateway_enabled", _parse_bool),
    "split_regions": ("field", "split_regions", _parse_bool),
    "e_elec": ("radio", "e_elec", _parse_float),
    "e_fs": ("radio", "e_fs", _parse_float),
    "e_mp": ("radio", "e_mp", _parse_float),
    "e_da": ("radio", "e_da", _parse_float),
    "initial_energy": ("radio", "initial_energy", _parse_float),
    "amplifier_mode": ("radio", "amplifier_mode", lambda s: AmplifierMode(s.lower())),
}

CONFIG_KEYS = tuple(_KEYS)


def parse_config(text: str) -> NetworkConfig:
    """Parse ``key = value`` lines; absent keys keep their defaults."""
    values: dict[str, tuple[Any, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        if not value:
            raise ConfigError("missing value", key=key, line=lineno)
        try:
            values[key] = (_KEYS[key][2](value), lineno)
        except ValueError as exc:
            raise ConfigError(str(exc), key=key, line=lineno) from None
    return build_config(values)


def build_config(values: dict[str, tuple[Any, int | None]]) -> NetworkConfig:
    top: dict[str, Any] = {}
    field_kw: dict[str, Any] = {}
    radio_kw: dict[str, Any] = {}
    for key, (value, _) in values.items():
        section, attr, _parser = _KEYS[key]
        {None: top, "field": field_kw, "radio": radio_kw}[section][attr] = value

    field_default = FieldSpec()
    bs = Position(field_kw.pop("bs_x", field_default.bs_position.x), field_kw.pop("bs_y", field_default.bs_position.y))
    gw = Position(
        field_kw.pop("gateway_x", field_default.gateway_position.x),
        field_kw.pop("gateway_y", field_default.gateway_position.y),
    )

    def lineno(key: str) -> int | None:
        return values.get(key, (None, None))[1]

    try:
        field = FieldSpec(bs_position=bs, gateway_position=gw, **field_kw)
    except ValueError as exc:
        key = next((k for k in values if _KEYS[k][0] == "field"), None)
        raise ConfigError(str(exc), key=key, line=lineno(key) if key else None) from None
    try:
        radio = RadioParams(**radio_kw)
    except ValueError as exc:
        key = str(exc).split(" ", 1)[0]
        key = key if key in _KEYS else None
        raise ConfigError(str(exc), key=key, line=lineno(key) if key else None) from None
    try:
        return NetworkConfig(field=field, radio=radio, **top)
    except ConfigError as exc:
        if exc.key is not None and exc.line is None and exc.key in values:
            raise ConfigError(str(exc).split(": ", 1)[-1], key=exc.key, line=lineno(exc.key)) from None
        raise


def format_config(config: NetworkConfig) -> str:
    """Render a config back into the flat text format (round-trips through parse_config)."""
    f, r = config.field, config.radio
    items = {
        "protocol": config.protocol.value,
        "n": config.n,
        "width": f.width,
        "height": f.height,
        "bs_x": f.bs_position.x,
        "bs_y": f.bs_position.y,
        "gateway_x": f.gateway_position.x,
        "gateway_y": f.gateway_position.y,
        "d_threshold_bs": f.d_threshold_bs,
        "d_threshold_gw": f.d_threshold_gw,
        "gateway_enabled": str(f.gateway_enabled).lower(),
        "split_regions": str(f.split_regions).lower(),
        "e_elec": repr(r.e_elec),
        "e_fs": repr(r.e_fs),
        "e_mp": repr(r.e_mp),
        "e_da": repr(r.e_da),
        "initial_energy": repr(r.initial_energy),
        "amplifier_mode": r.amplifier_mode.value,
        "p": repr(config.p),
        "packet_bits": config.packet_bits,
        "control_bits": config.control_bits,
        "charge_control_packets": str(config.charge_control_packets).lower(),
        "require_min_energy_for_ch": str(config.require_min_energy_for_ch).lower(),
        "min_ch_energy": repr(config.min_ch_energy),
        "max_rounds": config.max_rounds,
        "seed": config.seed,
    }
    return "".join(f"{k} = {v}\n" for k, v in items.items())

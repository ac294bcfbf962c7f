"""Strict YAML run configuration.

All quantities are linear frequencies (Hz), metres, seconds and C m;
conversion to angular frequency happens once, in ``RunConfig.dressing_config``
and the command handlers.
Unknown keys are rejected with the key path and line number.
"""
from __future__ import annotations

import math
import re
from dataclasses import MISSING, dataclass, fields
from typing import Any

import yaml

from .dressed_states import DressingConfig


class ConfigError(ValueError):
    pass


class _Loader(yaml.SafeLoader):
    pass


# PyYAML follows YAML 1.1 and reads "1e9" as a string; accept plain exponent floats.
_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                |\.[0-9_]+(?:[eE][-+][0-9]+)?
                |[-+]?\.(?:inf|Inf|INF)
                |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."),
)


@dataclass
class DressingSection:
    omega12_hz: float
    omega23_hz: float
    gamma1_hz: float = 1.0
    gamma2_hz: float = 3.8e7
    gamma3_hz: float = 1.4e5


@dataclass
class ScanSection:
    delta1_hz: list
    delta2_hz: list
    delta_rm_hz: float
    top_fraction: float = 0.05
    fom_convention: str = "inverse_shift"


@dataclass
class ChiralSection:
    v_mps: float
    d_cm: float
    omega_nk_hz: float
    z_a_m: float
    r_mag: float = 1.0
    r_phase_rad: float = math.pi / 2


@dataclass
class RamseySection:
    delta1_hz: float
    delta2_hz: float
    delta_rm_hz: float
    delta_achiral_hz: float
    t_max_s: float
    n_points: int
    achiral_mode: str = "dressed"


_SECTIONS = {
    "dressing": DressingSection,
    "scan": ScanSection,
    "chiral": ChiralSection,
    "ramsey": RamseySection,
}


@dataclass
class RunConfig:
    dressing: DressingSection | None = None
    scan: ScanSection | None = None
    chiral: ChiralSection | None = None
    ramsey: RamseySection | None = None

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"missing required section '{name}'")

    def dressing_config(self, delta1_hz=0.0, delta2_hz=0.0) -> DressingConfig:
        self.require("dressing")
        d = self.dressing
        try:
            return DressingConfig.from_hz(d.omega12_hz, d.omega23_hz, delta1_hz, delta2_hz,
                                          d.gamma1_hz, d.gamma2_hz, d.gamma3_hz)
        except ValueError as exc:
            raise ConfigError(f"dressing: {exc}") from exc

    def to_dict(self) -> dict:
        out = {}
        for name in _SECTIONS:
            sec = getattr(self, name)
            if sec is not None:
                out[name] = {f.name: getattr(sec, f.name) for f in fields(sec)}
        return out


def _where(node) -> str:
    return f"line {node.start_mark.line + 1}"


def _number(value, path, node, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} ({_where(node)}): expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{path} ({_where(node)}): expected an integer, got {value!r}")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path} ({_where(node)}): must be finite")
    return value


def _range(value, path, node):
    if not isinstance(value, list) or len(value) != 3:
        raise ConfigError(f"{path} ({_where(node)}): expected [min, max, count]")
    items = node.value
    lo = _number(value[0], f"{path}[0]", items[0])
    hi = _number(value[1], f"{path}[1]", items[1])
    n = _number(value[2], f"{path}[2]", items[2], integer=True)
    if n < 2:
        raise ConfigError(f"{path} ({_where(node)}): count must be >= 2")
    if not lo < hi:
        raise ConfigError(f"{path} ({_where(node)}): min must be below max")
    return [lo, hi, n]


def _section(name, node, loader):
    cls = _SECTIONS[name]
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{name} ({_where(node)}): expected a mapping")
    known = {f.name: f for f in fields(cls)}
    values: dict[str, Any] = {}
    for knode, vnode in node.value:
        key = knode.value
        path = f"{name}.{key}"
        if key not in known:
            raise ConfigError(f"unknown key '{path}' ({_where(knode)})")
        if key in values:
            raise ConfigError(f"duplicate key '{path}' ({_where(knode)})")
        raw = loader.construct_object(vnode, deep=True)
        ftype = known[key].type
        if ftype == "list":
            values[key] = _range(raw, path, vnode)
        elif ftype == "int":
            values[key] = _number(raw, path, vnode, integer=True)
        elif ftype == "str":
            if not isinstance(raw, str):
                raise ConfigError(f"{path} ({_where(vnode)}): expected a string")
            values[key] = raw
        else:
            values[key] = _number(raw, path, vnode)
    try:
        sec = cls(**values)
    except TypeError:
        missing = [k for k, f in known.items() if k not in values and f.default is MISSING]
        raise ConfigError(f"{name} ({_where(node)}): missing key(s) {', '.join(missing)}") from None
    _validate(name, sec)
    return sec


def _validate(name, sec):
    if name == "dressing":
        for f in fields(sec):
            if getattr(sec, f.name) < 0:
                raise ConfigError(f"{name}.{f.name}: must be non-negative")
    elif name == "scan":
        if not 0 < sec.top_fraction <= 1:
            raise ConfigError("scan.top_fraction: must lie in (0, 1]")
        if sec.fom_convention not in ("inverse_shift", "fringe_period"):
            raise ConfigError("scan.fom_convention: expected 'inverse_shift' or 'fringe_period'")
    elif name == "chiral":
        if sec.z_a_m <= 0 or sec.omega_nk_hz <= 0 or sec.d_cm < 0:
            raise ConfigError("chiral: z_a_m and omega_nk_hz must be positive, d_cm non-negative")
        if not 0 <= sec.r_mag <= 1:
            raise ConfigError("chiral.r_mag: must lie in [0, 1]")
    elif name == "ramsey":
        if sec.t_max_s <= 0:
            raise ConfigError("ramsey.t_max_s: must be positive")
        if sec.n_points < 2:
            raise ConfigError("ramsey.n_points: must be >= 2")
        if sec.achiral_mode not in ("dressed", "direct"):
            raise ConfigError("ramsey.achiral_mode: expected 'dressed' or 'direct'")


def parse_config(text: str) -> RunConfig:
    loader = _Loader(text)
    try:
        root = loader.get_single_node()
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    finally:
        loader.dispose()
    cfg = RunConfig()
    if root is None:
        return cfg
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError("config must be a mapping of sections")
    loader = _Loader("")
    for knode, vnode in root.value:
        name = knode.value
        if name not in _SECTIONS:
            raise ConfigError(f"unknown section '{name}' ({_where(knode)})")
        setattr(cfg, name, _section(name, vnode, loader))
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False, default_flow_style=None)

"""
场景配置的结构化表达、加载与覆盖

本模块提供：
- 各配置段的 dataclass（scenario / weight / transform / fan / fd / integrator / field / checks / output）
- ScenarioConfig：全部配置段的组合，以及到运行对象的转换
- ConfigSource 协议与文件 / 内存两种配置源
- apply_overrides：把 --override key=value 写进原始字典
- load_config：加载 → 覆盖 → 校验，失败时抛出 InvalidConfigError

设计要点：
- 配置文件为 JSON，按段嵌套
- 每个字段只有一种拼写；未知的段或字段一律拒绝
- 数值字段拒绝 bool 冒充数字
"""

import json
import logging
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Protocol

from finscloak.core.base import FDConfig
from finscloak.core.exceptions import InvalidConfigError
from finscloak.design.weights import PROFILES, DirectionWeight
from finscloak.geodesic.integrator import IntegratorConfig
from finscloak.medium.materials import GridSpec
from finscloak.scenarios.shield import HEADINGS, RayFan, ShieldScenario

logger = logging.getLogger(__name__)


def _is_number(value: Any) -> bool:
    return isinstance(value, int | float) and not isinstance(value, bool)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _require_positive(owner: Any, names: Iterable[str]) -> None:
    for name in names:
        value = getattr(owner, name)
        if not _is_number(value):
            raise TypeError(f"{name} must be a number")
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


def _require_int(owner: Any, names: Iterable[str], minimum: int) -> None:
    for name in names:
        value = getattr(owner, name)
        if not _is_int(value):
            raise TypeError(f"{name} must be an integer")
        if value < minimum:
            raise ValueError(f"{name} must be at least {minimum}, got {value}")


@dataclass
class ScenarioSection:
    """屏蔽装置几何"""

    shield_radius: float = 1.0
    device_radius: float = 2.0
    radial_offset: float = 0.5
    launch_distance: float = 4.0
    impedance: float = 1.0

    def __post_init__(self) -> None:
        _require_positive(self, ("shield_radius", "device_radius", "launch_distance", "impedance"))
        if not _is_number(self.radial_offset) or self.radial_offset < 0:
            raise ValueError("radial_offset must be a non-negative number")
        if not (self.shield_radius < self.device_radius < self.launch_distance):
            raise ValueError("shield_radius < device_radius < launch_distance is required")


@dataclass
class WeightSection:
    """方向权重"""

    profile: str = "smooth"
    transition_width: float = 0.2

    def __post_init__(self) -> None:
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")
        _require_positive(self, ("transition_width",))


@dataclass
class TransformSection:
    """cosh 变换"""

    alpha_clamp: float = 1.0 - 1e-3

    def __post_init__(self) -> None:
        if not _is_number(self.alpha_clamp) or not (0 < self.alpha_clamp < 1):
            raise ValueError("alpha_clamp must lie in (0, 1)")


@dataclass
class FanSection:
    """光线扇区"""

    count: int = 21
    half_width: float = 1.8
    stagger: float = 0.5
    headings: list[str] = field(default_factory=lambda: list(HEADINGS))

    def __post_init__(self) -> None:
        _require_int(self, ("count",), 1)
        _require_positive(self, ("half_width",))
        if not _is_number(self.stagger):
            raise TypeError("stagger must be a number")
        if not isinstance(self.headings, list) or not self.headings:
            raise TypeError("headings must be a non-empty list")
        for heading in self.headings:
            if heading not in HEADINGS:
                raise ValueError(f"heading must be one of {HEADINGS}, got {heading!r}")


@dataclass
class FDSection:
    """差分步长，null 表示自动"""

    h_y: float | None = None
    h_x: float | None = None

    def __post_init__(self) -> None:
        for name in ("h_y", "h_x"):
            value = getattr(self, name)
            if value is not None and (not _is_number(value) or not (0 < value < 1)):
                raise ValueError(f"{name} must be null or lie in (0, 1)")


@dataclass
class IntegratorSection:
    """测地线积分"""

    step: float = 1e-3
    max_steps: int = 50000
    renorm_every: int = 16
    workers: int = 1
    domain_margin: float = 0.05

    def __post_init__(self) -> None:
        _require_positive(self, ("step",))
        _require_int(self, ("max_steps", "renorm_every", "workers"), 1)
        if not _is_number(self.domain_margin) or self.domain_margin < 0:
            raise ValueError("domain_margin must be a non-negative number")


@dataclass
class FieldSection:
    """材料场采样网格"""

    x_min: float = -2.0
    x_max: float = 2.0
    nx: int = 41
    y_min: float = -2.0
    y_max: float = 2.0
    ny: int = 41
    direction_bins: int = 8
    r_guard: float | None = None

    def __post_init__(self) -> None:
        for name in ("x_min", "x_max", "y_min", "y_max"):
            if not _is_number(getattr(self, name)):
                raise TypeError(f"{name} must be a number")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("grid bounds are reversed")
        _require_int(self, ("nx", "ny"), 1)
        _require_int(self, ("direction_bins",), 4)
        if self.r_guard is not None:
            _require_positive(self, ("r_guard",))


@dataclass
class ChecksSection:
    """通过 / 阻挡判据"""

    tol_pass: float = 1e-6
    tol_block: float = 2e-2

    def __post_init__(self) -> None:
        _require_positive(self, ("tol_pass", "tol_block"))


@dataclass
class OutputSection:
    """输出文件路径"""

    trajectories: str = "trajectories.csv"
    report: str = "report.json"
    field: str = "field.csv"
    plot: str = "plot.svg"

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if not isinstance(value, str) or not value:
                raise TypeError(f"{item.name} must be a non-empty string")


def _section(kind: type) -> Any:
    return field(default_factory=kind)


SECTIONS: dict[str, type] = {
    "scenario": ScenarioSection,
    "weight": WeightSection,
    "transform": TransformSection,
    "fan": FanSection,
    "fd": FDSection,
    "integrator": IntegratorSection,
    "field": FieldSection,
    "checks": ChecksSection,
    "output": OutputSection,
}


@dataclass
class ScenarioConfig:
    """完整配置"""

    scenario: ScenarioSection = _section(ScenarioSection)
    weight: WeightSection = _section(WeightSection)
    transform: TransformSection = _section(TransformSection)
    fan: FanSection = _section(FanSection)
    fd: FDSection = _section(FDSection)
    integrator: IntegratorSection = _section(IntegratorSection)
    field: FieldSection = _section(FieldSection)
    checks: ChecksSection = _section(ChecksSection)
    output: OutputSection = _section(OutputSection)

    def fd_config(self) -> FDConfig:
        return FDConfig(h_y=self.fd.h_y, h_x=self.fd.h_x)

    def direction_weight(self) -> DirectionWeight:
        return DirectionWeight(profile=self.weight.profile, transition_width=self.weight.transition_width)

    def to_scenario(self) -> ShieldScenario:
        integ = self.integrator
        return ShieldScenario(
            shield_radius=float(self.scenario.shield_radius),
            device_radius=float(self.scenario.device_radius),
            radial_offset=float(self.scenario.radial_offset),
            launch_distance=float(self.scenario.launch_distance),
            weight=self.direction_weight(),
            alpha_clamp=float(self.transform.alpha_clamp),
            integrator=IntegratorConfig(
                step=float(integ.step),
                max_steps=integ.max_steps,
                renorm_every=integ.renorm_every,
                fd=self.fd_config(),
            ),
            domain_margin=float(integ.domain_margin),
            tol_pass=float(self.checks.tol_pass),
            tol_block=float(self.checks.tol_block),
            impedance=float(self.scenario.impedance),
        )

    def fans(self) -> list[RayFan]:
        return [
            RayFan.uniform(heading, self.fan.count, self.fan.half_width, self.fan.stagger)
            for heading in self.fan.headings
        ]

    def grid(self) -> GridSpec:
        f = self.field
        return GridSpec(x_min=f.x_min, x_max=f.x_max, nx=f.nx, y_min=f.y_min, y_max=f.y_max, ny=f.ny)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# ==================== 配置源 ====================


class ConfigSource(Protocol):
    """配置源协议"""

    def load(self) -> dict[str, Any]:
        """加载一次原始配置字典"""
        ...


class FileConfigSource:
    """
    JSON 文件配置源

    读文件失败抛 OSError，内容不是 JSON 对象时抛 InvalidConfigError。
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def load(self) -> dict[str, Any]:
        text = self.path.read_text(encoding="utf-8")
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(
                f"{self.path}: invalid JSON at line {exc.lineno}", errors={"<file>": exc.msg}
            ) from exc
        if not isinstance(payload, dict):
            raise InvalidConfigError(f"{self.path}: top level must be an object", errors={"<file>": "not an object"})
        return payload


class MemoryConfigSource:
    """
    内存配置源

    支持直接传入 dict，或无参函数以模拟一次拉取。
    """

    def __init__(self, provider: dict[str, Any] | Callable[[], dict[str, Any]]) -> None:
        if not callable(provider) and not isinstance(provider, dict):
            raise TypeError("provider must be a dict or a zero-argument callable")
        self.provider = provider

    def load(self) -> dict[str, Any]:
        payload = self.provider() if callable(self.provider) else self.provider
        return json.loads(json.dumps(payload))


# ==================== 覆盖与校验 ====================


def parse_override(text: str) -> tuple[list[str], Any]:
    """
    解析 "section.key=value"

    value 先按 JSON 解析，失败时作为普通字符串。
    """
    if "=" not in text:
        raise InvalidConfigError(f"override {text!r} is not key=value", errors={text: "missing '='"})
    key, raw = text.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if len(path) != 2:
        raise InvalidConfigError(f"override key {key!r} must be section.field", errors={key: "expected section.field"})
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path, value


def apply_overrides(raw: dict[str, Any], overrides: Iterable[str]) -> dict[str, Any]:
    """把覆盖项写进原始配置字典的副本"""
    merged = json.loads(json.dumps(raw))
    for text in overrides:
        (section, key), value = parse_override(text)
        target = merged.setdefault(section, {})
        if not isinstance(target, dict):
            raise InvalidConfigError(f"section {section!r} is not an object", errors={section: "not an object"})
        target[key] = value
    return merged


def parse_config(raw: dict[str, Any]) -> ScenarioConfig:
    """
    校验原始字典并构造 ScenarioConfig

    Raises:
        InvalidConfigError: errors 按 "section" 或 "section.field" 记录每个问题
    """
    errors: dict[str, str] = {}
    sections: dict[str, Any] = {}
    for name, values in raw.items():
        if name not in SECTIONS:
            errors[name] = "unknown section"
            continue
        if not isinstance(values, dict):
            errors[name] = "section must be an object"
            continue
        known = {item.name for item in fields(SECTIONS[name])}
        unknown = sorted(set(values) - known)
        for key in unknown:
            errors[f"{name}.{key}"] = "unknown key"
        if unknown:
            continue
        try:
            sections[name] = SECTIONS[name](**values)
        except (TypeError, ValueError) as exc:
            errors[name] = str(exc)
    if errors:
        summary = ", ".join(f"{key}: {reason}" for key, reason in sorted(errors.items()))
        raise InvalidConfigError(f"invalid configuration ({summary})", errors=errors)
    return ScenarioConfig(**sections)


def load_config(source: ConfigSource | None = None, overrides: Iterable[str] = ()) -> ScenarioConfig:
    """加载 → 覆盖 → 校验"""
    raw = source.load() if source is not None else {}
    config = parse_config(apply_overrides(raw, overrides))
    logger.debug(f"configuration loaded: {config.to_dict()}")
    return config


def describe_defaults() -> str:
    """默认值清单，用于 --help"""
    lines = []
    for name, section in SECTIONS.items():
        for key, value in asdict(section()).items():
            lines.append(f"  {name}.{key} = {json.dumps(value)}")
    return "\n".join(lines)

"""
非对称屏蔽实验

装配方向混合度量，从两侧发射平行光线扇区，测量：
- 向左传播的光线是否原样穿过（"我们看得见外面"）
- 向右传播的光线是否绕开屏蔽区（"外面看不见我们"）
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from finscloak.core.exceptions import DomainError
from finscloak.core.interfaces import IMetricField
from finscloak.core.pool import run_ordered
from finscloak.design.cloak import BlendedShieldMetric
from finscloak.design.transforms import PointExpansionMap, RadialCoshTransform
from finscloak.design.weights import DirectionWeight
from finscloak.geodesic.analysis import deviation_metrics, min_distance_to_center
from finscloak.geodesic.integrator import LEFT_DOMAIN, Box, IntegratorConfig, RayState, Trajectory, integrate

logger = logging.getLogger(__name__)

LEFTWARD = "leftward"
RIGHTWARD = "rightward"
HEADINGS = (LEFTWARD, RIGHTWARD)


def default_impact_parameters(count: int = 21, half_width: float = 1.8, stagger: float = 0.5) -> np.ndarray:
    """
    等间距碰撞参数

    间距取 linspace(−half_width, half_width, count)，整体平移 stagger 个间距，
    避免光线正对被扩张的中心点。
    """
    if count < 1:
        raise DomainError(f"fan needs at least one ray, got {count}", value=count)
    if count == 1:
        return np.array([stagger * half_width])
    base = np.linspace(-half_width, half_width, count)
    return base + stagger * (base[1] - base[0])


@dataclass(frozen=True)
class RayFan:
    """
    平行光线扇区

    Attributes:
        impact_parameters: 各光线到对称轴的垂直偏移
        heading: leftward | rightward
    """

    impact_parameters: tuple[float, ...]
    heading: str = RIGHTWARD

    def __post_init__(self):
        if self.heading not in HEADINGS:
            raise DomainError(f"heading must be one of {HEADINGS}, got {self.heading!r}", value=self.heading)
        if len(self.impact_parameters) == 0:
            raise DomainError("ray fan is empty")
        object.__setattr__(self, "impact_parameters", tuple(float(p) for p in self.impact_parameters))

    @property
    def count(self) -> int:
        return len(self.impact_parameters)

    @classmethod
    def uniform(cls, heading: str, count: int = 21, half_width: float = 1.8, stagger: float = 0.5) -> "RayFan":
        return cls(tuple(default_impact_parameters(count, half_width, stagger)), heading)


@dataclass(frozen=True)
class ShieldScenario:
    """
    屏蔽实验几何与数值参数

    Attributes:
        shield_radius: R1
        device_radius: R2
        radial_offset: cosh 变换的 r0
        launch_distance: 发射点到原点的距离 L
        weight: 方向权重
        alpha_clamp: cosh 变换截断
        integrator: 积分器配置；domain 为空时取边长 L·(1 + domain_margin) 的正方形
        domain_margin: 积分区域相对 L 的外扩比例
        tol_pass: 左行光线的偏移容差
        tol_block: 右行光线最近距离的相对容差
        impedance: 波阻抗 C
    """

    shield_radius: float = 1.0
    device_radius: float = 2.0
    radial_offset: float = 0.5
    launch_distance: float = 4.0
    weight: DirectionWeight = field(default_factory=DirectionWeight)
    alpha_clamp: float = 1.0 - 1e-3
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    domain_margin: float = 0.05
    tol_pass: float = 1e-6
    tol_block: float = 2e-2
    impedance: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.shield_radius < self.device_radius < self.launch_distance):
            raise DomainError(
                "scenario needs 0 < R1 < R2 < launch_distance, got "
                f"{self.shield_radius}, {self.device_radius}, {self.launch_distance}",
                value=(self.shield_radius, self.device_radius, self.launch_distance),
            )
        if self.domain_margin < 0.0:
            raise DomainError(f"domain_margin must be non-negative, got {self.domain_margin}", value=self.domain_margin)

    @property
    def expansion(self) -> PointExpansionMap:
        return PointExpansionMap(self.shield_radius, self.device_radius)

    @property
    def transform(self) -> RadialCoshTransform:
        return RadialCoshTransform(r0=self.radial_offset, alpha_clamp=self.alpha_clamp)

    def domain(self) -> Box:
        return Box.square(self.launch_distance * (1.0 + self.domain_margin))

    def integrator_config(self) -> IntegratorConfig:
        if self.integrator.domain is not None:
            return self.integrator
        return replace(self.integrator, domain=self.domain())

    def launch_state(self, heading: str, impact: float) -> RayState:
        """左行光线从 (+L, p) 向 −x 出发，右行光线从 (−L, p) 向 +x 出发"""
        if abs(impact) >= self.launch_distance:
            raise DomainError(f"impact parameter {impact} exceeds launch distance", value=impact)
        if heading == LEFTWARD:
            return RayState(np.array([self.launch_distance, impact]), np.array([-1.0, 0.0]))
        return RayState(np.array([-self.launch_distance, impact]), np.array([1.0, 0.0]))


@dataclass(frozen=True)
class RayReport:
    """单条光线的测量结果"""

    ray_id: int
    heading: str
    impact: float
    min_distance: float
    lateral_offset: float
    direction_deviation: float
    termination: str
    samples: int

    def to_dict(self) -> dict:
        return {
            "ray_id": self.ray_id,
            "heading": self.heading,
            "impact": self.impact,
            "min_distance": self.min_distance,
            "lateral_offset": self.lateral_offset,
            "direction_deviation": self.direction_deviation,
            "termination": self.termination,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class ShieldReport:
    """
    屏蔽实验报告

    Attributes:
        rays: 每条光线的测量，按发射顺序
        pass_straight: 所有左行光线都离开积分区域且偏移 ≤ tol_pass；没有左行光线时为 None
        blocked: 所有右行光线都离开积分区域且最近距离 ≥ R1·(1 − tol_block)；
            没有右行光线时为 None
    """

    rays: tuple[RayReport, ...]
    pass_straight: bool | None
    blocked: bool | None
    shield_radius: float
    tol_pass: float
    tol_block: float

    def by_heading(self, heading: str) -> list[RayReport]:
        return [ray for ray in self.rays if ray.heading == heading]

    def to_dict(self) -> dict:
        return {
            "pass_straight": self.pass_straight,
            "blocked": self.blocked,
            "shield_radius": self.shield_radius,
            "tol_pass": self.tol_pass,
            "tol_block": self.tol_block,
            "rays": [ray.to_dict() for ray in self.rays],
        }


def build_asymmetric_shield(s: ShieldScenario) -> BlendedShieldMetric:
    """
    装配非对称屏蔽度量：g^R 平直，g^L1 来自点扩张，g^L2 来自 cosh 变换，按权重混合
    """
    return BlendedShieldMetric(s.expansion, s.transform, s.weight)


def trace_fan(
    metric: IMetricField,
    fan: RayFan,
    s: ShieldScenario,
    workers: int = 1,
    first_id: int = 0,
) -> list[Trajectory]:
    """
    追踪一个扇区的全部光线

    Args:
        metric: 度量场
        fan: 光线扇区
        s: 实验参数
        workers: 并行线程数
        first_id: 第一条光线的编号，其余依次递增

    Returns:
        按碰撞参数顺序排列的轨迹
    """
    cfg = s.integrator_config()

    def trace_one(item: tuple[int, float]) -> Trajectory:
        ray_id, impact = item
        traj = integrate(metric, s.launch_state(fan.heading, impact), cfg)
        logger.debug(f"ray {ray_id} ({fan.heading}, p={impact:+.4f}): {traj.termination}, {len(traj)} samples")
        return replace(traj, ray_id=ray_id, heading=fan.heading, impact=impact)

    items = list(enumerate(fan.impact_parameters, start=first_id))
    return run_ordered(trace_one, items, workers)


def trace_scenario(
    s: ShieldScenario,
    fans: list[RayFan],
    metric: IMetricField | None = None,
    workers: int = 1,
) -> list[Trajectory]:
    """依次追踪多个扇区，光线编号在全部扇区内唯一"""
    metric = metric or build_asymmetric_shield(s)
    trajectories: list[Trajectory] = []
    for fan in fans:
        trajectories.extend(trace_fan(metric, fan, s, workers=workers, first_id=len(trajectories)))
    return trajectories


def analyze_shielding(trajs: list[Trajectory], s: ShieldScenario) -> ShieldReport:
    """
    汇总屏蔽效果

    每条光线：到原点的最近距离、末状态相对发射直线的横向偏移与方向偏差。
    """
    reports = []
    for traj in trajs:
        start = traj.initial_state
        lateral, deviation = deviation_metrics(traj, start.position, start.velocity)
        reports.append(
            RayReport(
                ray_id=traj.ray_id,
                heading=traj.heading,
                impact=traj.impact,
                min_distance=min_distance_to_center(traj),
                lateral_offset=lateral,
                direction_deviation=deviation,
                termination=traj.termination,
                samples=len(traj),
            )
        )

    unfinished = [r for r in reports if r.termination != LEFT_DOMAIN]
    if unfinished:
        first = unfinished[0]
        logger.warning(f"{len(unfinished)} ray(s) did not leave the domain, first: {first.ray_id} {first.termination}")

    leftward = [r for r in reports if r.heading == LEFTWARD]
    rightward = [r for r in reports if r.heading == RIGHTWARD]
    pass_straight = None
    if leftward:
        pass_straight = all(
            r.termination == LEFT_DOMAIN and r.lateral_offset <= s.tol_pass and r.direction_deviation <= s.tol_pass
            for r in leftward
        )
    blocked = None
    if rightward:
        threshold = s.shield_radius * (1.0 - s.tol_block)
        blocked = all(r.termination == LEFT_DOMAIN and r.min_distance >= threshold for r in rightward)

    logger.info(f"shield report: {len(reports)} ray(s), pass_straight={pass_straight}, blocked={blocked}")
    return ShieldReport(
        rays=tuple(reports),
        pass_straight=pass_straight,
        blocked=blocked,
        shield_radius=s.shield_radius,
        tol_pass=s.tol_pass,
        tol_block=s.tol_block,
    )

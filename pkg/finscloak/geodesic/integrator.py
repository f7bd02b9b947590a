"""
测地线积分器

固定步长 RK4 积分 (x, v)，v̇ = spray_acceleration；每 renorm_every 步把速度
重新归一到 F(x, v) = c。分片光滑的度量场在一个积分步内只用所在分片的光滑延拓，
跨越界面时用 brentq 求出交点，按 Finsler 折射定律（动量 p = ∂E/∂y 的切向分量守恒）
换到新分片；新分片没有透射解时在原分片内反射。

轨迹的终止原因总是记录在 Trajectory 上，积分过程中不抛出异常。
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from finscloak.core.base import DEFAULT_FD, FDConfig, Y_MIN, as_direction, as_position
from finscloak.core.exceptions import (
    DomainError,
    FinsCloakError,
    IllConditionedError,
    PositiveDefinitenessError,
)
from finscloak.core.finsler import metric_tensor
from finscloak.core.interfaces import IMetricField
from finscloak.geodesic.spray import momentum, spray_acceleration

logger = logging.getLogger(__name__)

LEFT_DOMAIN = "left_domain"
MAX_STEPS = "max_steps"
CONVEXITY_FAILURE = "convexity_failure"
EVALUATION_FAILURE = "evaluation_failure"
TERMINATIONS = (LEFT_DOMAIN, MAX_STEPS, CONVEXITY_FAILURE, EVALUATION_FAILURE)

# 单个积分步内允许的界面事件数
MAX_EVENTS_PER_STEP = 8

# 折射时迭代密切张量的次数
REFRACTION_SWEEPS = 4


@dataclass(frozen=True)
class RayState:
    """
    光线状态

    Attributes:
        position: 位置
        velocity: 速度（切向量）
        parameter: 参数 t
    """

    position: np.ndarray
    velocity: np.ndarray
    parameter: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_position(self.position))
        object.__setattr__(self, "velocity", as_direction(self.velocity))


@dataclass(frozen=True)
class Box:
    """轴对齐包围盒"""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @classmethod
    def square(cls, half_width: float, dim: int = 2) -> "Box":
        return cls(lower=(-half_width,) * dim, upper=(half_width,) * dim)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= np.asarray(self.lower)) and np.all(x <= np.asarray(self.upper)))


@dataclass(frozen=True)
class IntegratorConfig:
    """
    积分器配置

    Attributes:
        step: 步长 h
        max_steps: 最大步数
        renorm_every: 速度重归一化周期 k
        domain: 积分区域，None 表示不限
        method: 目前只有 rk4
        unit_speed: True 时初速归一到 F = 1，否则保持初始 F 值
        fd: 差分配置
    """

    step: float = 1e-3
    max_steps: int = 50000
    renorm_every: int = 16
    domain: Box | None = None
    method: str = "rk4"
    unit_speed: bool = True
    fd: FDConfig = field(default_factory=lambda: DEFAULT_FD)

    def __post_init__(self):
        if not self.step > 0.0:
            raise DomainError(f"step must be positive, got {self.step}", value=self.step)
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be at least 1, got {self.max_steps}", value=self.max_steps)
        if self.renorm_every < 1:
            raise DomainError(f"renorm_every must be at least 1, got {self.renorm_every}", value=self.renorm_every)
        if self.method != "rk4":
            raise DomainError(f"unsupported integration method {self.method!r}", value=self.method)


@dataclass
class Trajectory:
    """
    采样测地线

    Attributes:
        parameters: (N,) 严格递增的参数
        positions: (N, d)
        velocities: (N, d)
        f_values: (N,) 每个样本的 F(x, v)
        termination: 终止原因
        crossings: 界面透射次数
        reflections: 界面反射次数
        message: 异常终止时的错误信息
        ray_id / heading / impact: 由光线扇区填写的标识
    """

    parameters: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    f_values: np.ndarray
    termination: str
    crossings: int = 0
    reflections: int = 0
    message: str = ""
    ray_id: int = 0
    heading: str = ""
    impact: float = 0.0

    def __len__(self) -> int:
        return int(self.parameters.shape[0])

    @property
    def samples(self) -> list[RayState]:
        return [
            RayState(position=x, velocity=v, parameter=float(t))
            for t, x, v in zip(self.parameters, self.positions, self.velocities)
        ]

    @property
    def initial_state(self) -> RayState:
        return RayState(self.positions[0], self.velocities[0], float(self.parameters[0]))

    @property
    def final_state(self) -> RayState:
        return RayState(self.positions[-1], self.velocities[-1], float(self.parameters[-1]))


class _Recorder:
    """积分过程中逐样本累积"""

    def __init__(self):
        self.parameters: list[float] = []
        self.positions: list[np.ndarray] = []
        self.velocities: list[np.ndarray] = []
        self.f_values: list[float] = []

    def add(self, t: float, x: np.ndarray, v: np.ndarray, f_value: float):
        self.parameters.append(t)
        self.positions.append(x.copy())
        self.velocities.append(v.copy())
        self.f_values.append(f_value)

    def build(self, termination: str, **extra) -> Trajectory:
        return Trajectory(
            parameters=np.asarray(self.parameters, dtype=float),
            positions=np.asarray(self.positions, dtype=float),
            velocities=np.asarray(self.velocities, dtype=float),
            f_values=np.asarray(self.f_values, dtype=float),
            termination=termination,
            **extra,
        )


def rk4_step(
    piece: IMetricField, x: np.ndarray, v: np.ndarray, h: float, fd: FDConfig
) -> tuple[np.ndarray, np.ndarray]:
    """一个经典四阶 Runge–Kutta 步"""
    k1x = v
    k1v = spray_acceleration(piece, x, v, fd)
    k2x = v + 0.5 * h * k1v
    k2v = spray_acceleration(piece, x + 0.5 * h * k1x, k2x, fd)
    k3x = v + 0.5 * h * k2v
    k3v = spray_acceleration(piece, x + 0.5 * h * k2x, k3x, fd)
    k4x = v + h * k3v
    k4v = spray_acceleration(piece, x + h * k3x, k4x, fd)
    x_new = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v_new = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return x_new, v_new


def _solve_normal_shift(inverse: np.ndarray, p: np.ndarray, normal: np.ndarray, target: float, sign: float):
    """
    求 σ 使 (p + σn)ᵀ A (p + σn) = target²，且 n·A(p + σn) 的符号为 sign

    Returns:
        σ；无实根时返回 None
    """
    a = float(normal @ inverse @ normal)
    b = 2.0 * float(normal @ inverse @ p)
    c = float(p @ inverse @ p) - target * target
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    return (-b + sign * np.sqrt(disc)) / (2.0 * a)


def _match_momentum(
    piece: IMetricField,
    x: np.ndarray,
    guess: np.ndarray,
    p: np.ndarray,
    normal: np.ndarray,
    target: float,
    sign: float,
    fd: FDConfig,
) -> np.ndarray | None:
    """
    在 piece 中求速度 v′：F(x, v′) = target，∂E/∂y(v′) − p 平行于法向

    在密切张量 g(x, v′) 下解二次方程，再用新的 v′ 更新密切张量，迭代数次。
    """
    velocity = guess
    for _ in range(REFRACTION_SWEEPS):
        inverse = np.linalg.inv(metric_tensor(piece, x, velocity, fd).entries)
        shift = _solve_normal_shift(inverse, p, normal, target, sign)
        if shift is None:
            return None
        velocity = inverse @ (p + shift * normal)
        if np.linalg.norm(velocity) < Y_MIN:
            return None
    return velocity * (target / float(piece.evaluate(x, velocity)))


class GeodesicIntegrator:
    """
    测地线积分器

    Args:
        field: 度量场
        config: 积分器配置
    """

    def __init__(self, field: IMetricField, config: IntegratorConfig | None = None):
        self.field = field
        self.config = config or IntegratorConfig()

    def _interface_between(self, region: int, new_region: int) -> float:
        radii = self.field.interfaces
        return radii[region] if new_region > region else radii[region - 1]

    def _cross(self, region, new_region, piece, x, v, h, target):
        """
        处理本步内的第一次界面事件

        Args:
            region: 步首所在分片
            new_region: 整步试算后所在分片

        Returns:
            (s, x_c, v_c, 新分片, 是否反射)；本步不存在可定位的穿越时返回 None
        """
        fd = self.config.fd
        radius = self._interface_between(region, new_region)

        def gap(s: float) -> float:
            return float(np.linalg.norm(rk4_step(piece, x, v, s, fd)[0])) - radius

        g0, g1 = float(np.linalg.norm(x)) - radius, gap(h)
        if g0 == 0.0 or g0 * g1 > 0.0:
            logger.debug(f"no bracketed crossing of r={radius} starting from {x}")
            return None
        s = brentq(gap, 0.0, h, xtol=1e-14 * max(1.0, radius), rtol=4.0 * np.finfo(float).eps)
        x_c, v_c = rk4_step(piece, x, v, s, fd)

        target_region = region + (1 if new_region > region else -1)
        new_piece = self.field.restrict(target_region)
        normal = x_c / np.linalg.norm(x_c)
        sign = 1.0 if float(normal @ v_c) >= 0.0 else -1.0

        p_old = momentum(piece, x_c, v_c, fd)
        p_new = momentum(new_piece, x_c, v_c, fd)
        if np.allclose(p_new, p_old, rtol=1e-12, atol=0.0):
            return s, x_c, v_c, target_region, False

        transmitted = _match_momentum(new_piece, x_c, v_c, p_old, normal, target, sign, fd)
        if transmitted is not None:
            logger.debug(f"refraction at r={radius}: region {region} -> {target_region}")
            return s, x_c, transmitted, target_region, False

        reflected = _match_momentum(piece, x_c, v_c, p_old, normal, target, -sign, fd)
        if reflected is None:
            raise PositiveDefinitenessError("no reflected solution at interface", position=x_c, direction=v_c)
        logger.debug(f"total reflection at r={radius} in region {region}")
        return s, x_c, reflected, region, True

    def integrate(self, start: RayState) -> Trajectory:
        """
        从 start 出发积分

        Returns:
            Trajectory，终止原因为 left_domain、max_steps、convexity_failure、evaluation_failure 之一
        """
        cfg = self.config
        h = cfg.step
        recorder = _Recorder()
        x = np.array(start.position, dtype=float)
        v = np.array(start.velocity, dtype=float)
        t0 = float(start.parameter)
        crossings = reflections = 0

        region = self.field.region_of(x)
        piece = self.field.restrict(region)
        try:
            speed = float(piece.evaluate(x, v))
        except FinsCloakError as exc:
            recorder.add(t0, x, v, float("nan"))
            logger.debug(f"ray rejected at start: {exc}")
            return recorder.build(EVALUATION_FAILURE, message=str(exc))
        target = 1.0 if cfg.unit_speed else speed
        v = v * (target / speed)
        recorder.add(t0, x, v, target)

        termination = MAX_STEPS
        message = ""
        for step in range(1, cfg.max_steps + 1):
            try:
                remaining = h
                t_cursor = t0 + (step - 1) * h
                for _ in range(MAX_EVENTS_PER_STEP):
                    x_try, v_try = rk4_step(piece, x, v, remaining, cfg.fd)
                    new_region = self.field.region_of(x_try)
                    if new_region == region:
                        break
                    event = self._cross(region, new_region, piece, x, v, remaining, target)
                    if event is None:
                        region = new_region
                        piece = self.field.restrict(region)
                        break
                    s, x, v, new_region, reflected = event
                    if reflected:
                        reflections += 1
                    else:
                        crossings += 1
                    region = new_region
                    piece = self.field.restrict(region)
                    remaining -= s
                    t_cursor += s
                    if 0.0 < s and remaining > 0.0:
                        recorder.add(t_cursor, x, v, float(piece.evaluate(x, v)))
                else:
                    x_try, v_try = rk4_step(piece, x, v, remaining, cfg.fd)
                x, v = x_try, v_try
                f_value = float(piece.evaluate(x, v))
                if step % cfg.renorm_every == 0:
                    v = v * (target / f_value)
                    f_value = float(piece.evaluate(x, v))
            except (PositiveDefinitenessError, IllConditionedError) as exc:
                termination, message = CONVEXITY_FAILURE, str(exc)
                break
            except FinsCloakError as exc:
                termination, message = EVALUATION_FAILURE, str(exc)
                break

            recorder.add(t0 + step * h, x, v, f_value)
            if cfg.domain is not None and not cfg.domain.contains(x):
                termination = LEFT_DOMAIN
                break

        logger.debug(f"ray finished after {len(recorder.parameters)} samples: {termination}")
        return recorder.build(
            termination,
            crossings=crossings,
            reflections=reflections,
            message=message,
        )


def integrate(field: IMetricField, start: RayState, cfg: IntegratorConfig | None = None) -> Trajectory:
    """积分一条测地线"""
    return GeodesicIntegrator(field, cfg).integrate(start)


def reverse_trajectory(field: IMetricField, traj: Trajectory, cfg: IntegratorConfig | None = None) -> Trajectory:
    """
    从终点反向出发，积分同样的步数

    反向积分不限制区域，可用于检查可逆性。
    """
    cfg = cfg or IntegratorConfig()
    final = traj.final_state
    steps = int(round((traj.parameters[-1] - traj.parameters[0]) / cfg.step))
    reverse_cfg = replace(cfg, domain=None, max_steps=max(1, steps))
    start = RayState(position=final.position, velocity=-final.velocity, parameter=0.0)
    return GeodesicIntegrator(field, reverse_cfg).integrate(start)

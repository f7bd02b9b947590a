"""
坐标变换

- RadialCoshTransform：装置内部的径向 cosh 变换 r′ = (r + r0)·cosh α(θ)
- PointExpansionMap：把虚拟空间的一点扩张成半径 R1 的屏蔽区（极坐标形式，解析雅可比）
- CartesianExpansionMap：同一扩张映射的笛卡尔形式，雅可比走中心差分
- IdentityMap：恒等映射，基底可以是笛卡尔或极坐标平直度量

以及拉回度量 g̃ = Jᵀ G J。
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from finscloak.core.base import DEFAULT_FD, FDConfig, MetricTensor, as_position, require_positive_definite
from finscloak.core.exceptions import DomainError, SingularMapError
from finscloak.core.interfaces import ICoordinateMap

logger = logging.getLogger(__name__)

# 雅可比行列式低于此值视为奇异
SINGULAR_DET = 1e-14


@dataclass(frozen=True)
class RadialCoshTransform:
    """
    径向 cosh 变换

    tanh α = clamp((2/π)(θ − π), ±alpha_clamp)，在 θ = π/2、3π/2 处 α 发散，
    截断后变换在整个平面上保持有限。

    Attributes:
        r0: 径向偏移常数
        alpha_clamp: |tanh α| 的上限，取值 (0, 1)
    """

    r0: float = 0.5
    alpha_clamp: float = 1.0 - 1e-3

    def __post_init__(self):
        if not (np.isfinite(self.r0) and self.r0 >= 0.0):
            raise DomainError(f"r0 must be a non-negative number, got {self.r0}", value=self.r0)
        if not (0.0 < self.alpha_clamp < 1.0):
            raise DomainError(
                f"alpha_clamp must lie in (0, 1), got {self.alpha_clamp}", value=self.alpha_clamp, domain=(0.0, 1.0)
            )

    def tanh_alpha(self, theta) -> np.ndarray:
        raw = (2.0 / np.pi) * (np.asarray(theta, dtype=float) - np.pi)
        return np.clip(raw, -self.alpha_clamp, self.alpha_clamp)

    def alpha_parts(self, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        cosh α、sinh α 与 dα/dθ

        截断区内 α 为常数，dα/dθ = 0。
        """
        raw = (2.0 / np.pi) * (np.asarray(theta, dtype=float) - np.pi)
        t = np.clip(raw, -self.alpha_clamp, self.alpha_clamp)
        sech = np.sqrt(1.0 - t * t)
        cosh = 1.0 / sech
        sinh = t / sech
        dalpha = np.where(np.abs(raw) < self.alpha_clamp, (2.0 / np.pi) / (1.0 - t * t), 0.0)
        return cosh, sinh, dalpha

    def radius(self, r, theta) -> np.ndarray:
        """不检查定义域的 r′，用于张量计算"""
        cosh, _, _ = self.alpha_parts(theta)
        return (np.asarray(r, dtype=float) + self.r0) * cosh


def cosh_transform(t: RadialCoshTransform, r: float, theta: float) -> float:
    """
    r′ = (r + r0)·cosh α(θ)

    Args:
        t: 变换参数
        r: 物理半径，须为正
        theta: 位置角，须在 (π/2, 3π/2) 内

    Raises:
        DomainError: θ 或 r 超出定义域
    """
    if not (0.5 * np.pi < theta < 1.5 * np.pi):
        raise DomainError(
            f"cosh transform is defined for theta in (pi/2, 3pi/2), got {theta}",
            value=theta,
            domain=(0.5 * np.pi, 1.5 * np.pi),
        )
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}", value=r, domain=(0.0, np.inf))
    return float(t.radius(r, theta))


@dataclass(frozen=True)
class PointExpansionMap(ICoordinateMap):
    """
    点扩张映射 r = R1 + r′(R2 − R1)/R2

    作为坐标映射时工作在极坐标 (r, θ) 下：forward 把物理 (r, θ) 送到
    虚拟 (r′, θ)，基底为极坐标平直度量 diag(1, r′²)。

    Attributes:
        shield_radius: R1
        device_radius: R2
    """

    shield_radius: float = 1.0
    device_radius: float = 2.0

    def __post_init__(self):
        if not (0.0 < self.shield_radius < self.device_radius and np.isfinite(self.device_radius)):
            raise DomainError(
                f"expansion map needs 0 < R1 < R2, got R1={self.shield_radius}, R2={self.device_radius}",
                value=(self.shield_radius, self.device_radius),
            )

    @property
    def dim(self) -> int:
        return 2

    @property
    def stretch(self) -> float:
        """∂r′/∂r = R2 / (R2 − R1)"""
        return self.device_radius / (self.device_radius - self.shield_radius)

    def virtual_radius(self, r):
        """r′ = (r − R1)·R2/(R2 − R1)"""
        return (np.asarray(r, dtype=float) - self.shield_radius) * self.stretch

    def physical_radius(self, r_virtual):
        return self.shield_radius + np.asarray(r_virtual, dtype=float) / self.stretch

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        return np.array([float(self.virtual_radius(x[0])), x[1]])

    def jacobian(self, x):
        return np.diag([self.stretch, 1.0])

    def base_metric(self, x_virtual):
        return np.diag([1.0, float(x_virtual[0]) ** 2])


@dataclass(frozen=True)
class CartesianExpansionMap(ICoordinateMap):
    """
    点扩张映射的笛卡尔形式 x′ = x·r′(r)/r

    没有解析雅可比，拉回时使用中心差分；基底为笛卡尔平直度量。
    """

    shield_radius: float = 1.0
    device_radius: float = 2.0

    def __post_init__(self):
        PointExpansionMap(self.shield_radius, self.device_radius)

    @property
    def dim(self) -> int:
        return 2

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        r = float(np.hypot(x[0], x[1]))
        stretch = self.device_radius / (self.device_radius - self.shield_radius)
        return x * ((r - self.shield_radius) * stretch / r)

    def base_metric(self, x_virtual):
        return np.eye(2)


@dataclass(frozen=True)
class IdentityMap(ICoordinateMap):
    """
    恒等映射

    Attributes:
        chart: cartesian 时基底为单位矩阵；polar 时坐标为 (r, θ)，基底为 diag(1, r²)
    """

    chart: str = "cartesian"
    dimension: int = 2

    def __post_init__(self):
        if self.chart not in ("cartesian", "polar"):
            raise DomainError(f"unknown chart {self.chart!r}", value=self.chart)
        if self.chart == "polar" and self.dimension != 2:
            raise DomainError("polar chart is two-dimensional", value=self.dimension)

    @property
    def dim(self) -> int:
        return self.dimension

    def forward(self, x):
        return np.asarray(x, dtype=float)

    def jacobian(self, x):
        return np.eye(self.dimension)

    def base_metric(self, x_virtual):
        if self.chart == "polar":
            return np.diag([1.0, float(x_virtual[0]) ** 2])
        return np.eye(self.dimension)


def central_jacobian(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    """
    中心差分雅可比 J_ij = ∂f_i/∂x_j

    Args:
        func: 向量函数
        x: 求导点
        h: 步长

    Returns:
        (m, d) 矩阵
    """
    x = np.asarray(x, dtype=float)
    columns = []
    for j in range(x.shape[0]):
        step = np.zeros_like(x)
        step[j] = h
        columns.append((np.asarray(func(x + step)) - np.asarray(func(x - step))) / (2.0 * h))
    return np.stack(columns, axis=-1)


def pullback_metric(coord_map: ICoordinateMap, x, cfg: FDConfig | None = None) -> MetricTensor:
    """
    拉回度量 g̃ = Jᵀ·G(x′)·J

    Args:
        coord_map: 坐标映射，没有解析雅可比时用中心差分（步长 cfg.step_x）
        x: 物理空间的点
        cfg: 差分配置

    Returns:
        MetricTensor（与方向无关，base_direction 为 None）

    Raises:
        SingularMapError: 雅可比非有限或奇异
    """
    cfg = cfg or DEFAULT_FD
    xv = as_position(x, coord_map.dim)
    x_virtual = np.asarray(coord_map.forward(xv), dtype=float)

    jac = coord_map.jacobian(xv)
    if jac is None:
        jac = central_jacobian(coord_map.forward, xv, cfg.step_x(xv))
    jac = np.asarray(jac, dtype=float)

    if not (np.all(np.isfinite(jac)) and np.all(np.isfinite(x_virtual))):
        raise SingularMapError("coordinate map Jacobian is not finite", position=xv)
    if abs(float(np.linalg.det(jac))) < SINGULAR_DET:
        raise SingularMapError(f"coordinate map Jacobian is singular at {xv}", position=xv)

    base = np.asarray(coord_map.base_metric(x_virtual), dtype=float)
    entries = jac.T @ base @ jac
    entries = 0.5 * (entries + entries.T)
    require_positive_definite(entries, position=xv)
    return MetricTensor(entries=entries, base_point=xv)

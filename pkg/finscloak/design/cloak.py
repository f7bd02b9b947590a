"""
非对称屏蔽度量

三种区域度量：
- R：平直空间
- L1：点扩张隐身斗篷，R1 ≤ ‖x‖ 时有定义，R2 以外为单位矩阵
- L2：装置内部的径向 cosh 变换

BlendedShieldMetric 以方向权重 f(θ) 在区域度量与平直度量之间插值：
g(x, y) = f(θ)·g_L(x) + (1 − f(θ))·I，‖x‖ < R1 取 L2，否则取 L1。
所有张量都在笛卡尔分量下给出。
"""

import logging
from collections.abc import Callable

import numpy as np

from finscloak.core.base import FinslerMetricField, MetricTensor, as_position, require_positive_definite
from finscloak.core.exceptions import ShieldInteriorError, SingularMapError
from finscloak.core.interfaces import region_index
from finscloak.design.transforms import PointExpansionMap, RadialCoshTransform
from finscloak.design.weights import DirectionWeight, angle_of

logger = logging.getLogger(__name__)

# L2 张量在原点附近的奇异半径
ORIGIN_GUARD = 1e-9

# 分片编号
REGION_INNER = 0
REGION_ANNULUS = 1
REGION_EXTERIOR = 2

WeightObserver = Callable[[np.ndarray], None]


def polar_frame(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    局部极坐标标架

    Args:
        x: (N, 2) 位置

    Returns:
        (r, r̂, θ̂)，形状 (N,)、(N, 2)、(N, 2)
    """
    r = np.hypot(x[:, 0], x[:, 1])
    radial = x / r[:, None]
    angular = np.stack([-radial[:, 1], radial[:, 0]], axis=-1)
    return r, radial, angular


def l1_tensor(expansion: PointExpansionMap, x: np.ndarray) -> np.ndarray:
    """
    L1 张量的光滑公式 k²·r̂r̂ᵀ + (r′/r)²·θ̂θ̂ᵀ

    不判断 R1、R2，由调用方决定在哪里使用。

    Args:
        expansion: 点扩张映射
        x: (N, 2) 位置

    Returns:
        (N, 2, 2)
    """
    r, radial, angular = polar_frame(x)
    k2 = expansion.stretch**2
    ratio = (expansion.virtual_radius(r) / r) ** 2
    return k2 * np.einsum("ni,nj->nij", radial, radial) + ratio[:, None, None] * np.einsum(
        "ni,nj->nij", angular, angular
    )


def l2_tensor(transform: RadialCoshTransform, x: np.ndarray) -> np.ndarray:
    """
    L2 张量：极坐标平直度量在 cosh 变换下的拉回，再转到笛卡尔分量

    极坐标下
        g_rr = cosh²α
        g_rθ = cosh α·(r + r0)·sinh α·α′
        g_θθ = ((r + r0)·sinh α·α′)² + r′²
    笛卡尔分量为 Pᵀ g P，P = ∂(r, θ)/∂(x, y)。

    Args:
        transform: cosh 变换
        x: (N, 2) 位置

    Returns:
        (N, 2, 2)

    Raises:
        SingularMapError: 靠近原点或出现非有限值
    """
    r, radial, angular = polar_frame(x)
    near = r < ORIGIN_GUARD
    if np.any(near):
        raise SingularMapError("L2 transform is singular at the origin", position=x[int(np.argmax(near))])
    theta = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * np.pi)
    cosh, sinh, dalpha = transform.alpha_parts(theta)
    shifted = r + transform.r0
    r_virtual = shifted * cosh
    cross = shifted * sinh * dalpha

    g_rr = cosh * cosh
    g_rt = cosh * cross
    g_tt = cross * cross + r_virtual * r_virtual

    # P 的两行分别是 r̂ᵀ 和 θ̂ᵀ/r
    row_t = angular / r[:, None]
    tensor = (
        g_rr[:, None, None] * np.einsum("ni,nj->nij", radial, radial)
        + g_rt[:, None, None] * (np.einsum("ni,nj->nij", radial, row_t) + np.einsum("ni,nj->nij", row_t, radial))
        + g_tt[:, None, None] * np.einsum("ni,nj->nij", row_t, row_t)
    )
    if not np.all(np.isfinite(tensor)):
        bad = int(np.argmax(~np.all(np.isfinite(tensor), axis=(1, 2))))
        raise SingularMapError("L2 transform produced non-finite tensor", position=x[bad])
    return tensor


def regime_metric_L1(expansion: PointExpansionMap, x) -> MetricTensor:
    """
    隐身斗篷（L1）度量张量

    Args:
        expansion: 点扩张映射
        x: 位置，‖x‖ ≥ R1

    Returns:
        笛卡尔分量的 MetricTensor；‖x‖ > R2 时为单位矩阵

    Raises:
        ShieldInteriorError: ‖x‖ < R1
    """
    xv = as_position(x, 2)
    r = float(np.hypot(xv[0], xv[1]))
    if r < expansion.shield_radius:
        raise ShieldInteriorError(
            f"cloak metric is undefined inside the shield (r={r} < R1={expansion.shield_radius})",
            position=xv,
            radius=r,
        )
    if r > expansion.device_radius:
        return MetricTensor(entries=np.eye(2), base_point=xv)
    return MetricTensor(entries=l1_tensor(expansion, xv[None, :])[0], base_point=xv)


def regime_metric_L2(transform: RadialCoshTransform, x) -> MetricTensor:
    """装置内部（L2）度量张量，笛卡尔分量"""
    xv = as_position(x, 2)
    return MetricTensor(entries=l2_tensor(transform, xv[None, :])[0], base_point=xv)


class BlendedShieldMetric(FinslerMetricField):
    """
    方向混合的非对称屏蔽度量

    分片：‖x‖ < R1 为 0 区（L2 混合），R1 ≤ ‖x‖ < R2 为 1 区（L1 混合），
    其外为 2 区（平直）。restrict 返回把某一分片公式延拓到全平面的副本，
    供积分器在一步之内使用。

    f(θ) = 0 的方向直接走平直公式，与 flat_metric 逐位相同。
    """

    def __init__(
        self,
        expansion: PointExpansionMap,
        transform: RadialCoshTransform,
        weight: DirectionWeight,
        observer: WeightObserver | None = None,
        pinned_region: int | None = None,
        label: str = "blended-shield",
    ):
        super().__init__(2, label)
        self._expansion = expansion
        self._transform = transform
        self._weight = weight
        self._observer = observer
        self._pinned = pinned_region

    @property
    def expansion(self) -> PointExpansionMap:
        return self._expansion

    @property
    def transform(self) -> RadialCoshTransform:
        return self._transform

    @property
    def weight(self) -> DirectionWeight:
        return self._weight

    @property
    def shield_radius(self) -> float:
        return self._expansion.shield_radius

    @property
    def device_radius(self) -> float:
        return self._expansion.device_radius

    @property
    def interfaces(self) -> tuple[float, ...]:
        return (self.shield_radius, self.device_radius)

    @property
    def pinned_region(self) -> int | None:
        return self._pinned

    def restrict(self, region: int) -> "BlendedShieldMetric":
        return BlendedShieldMetric(
            self._expansion,
            self._transform,
            self._weight,
            observer=self._observer,
            pinned_region=region,
            label=self.label,
        )

    def with_observer(self, observer: WeightObserver | None) -> "BlendedShieldMetric":
        """返回挂接了权重观察者的副本，观察者在每次求值时收到 f 数组"""
        return BlendedShieldMetric(
            self._expansion,
            self._transform,
            self._weight,
            observer=observer,
            pinned_region=self._pinned,
            label=self.label,
        )

    def regions(self, x: np.ndarray) -> np.ndarray:
        if self._pinned is not None:
            return np.full(x.shape[0], self._pinned, dtype=int)
        r = np.hypot(x[:, 0], x[:, 1])
        return region_index(self.interfaces, r)

    def regime_tensor(self, x: np.ndarray, regions: np.ndarray) -> np.ndarray:
        """
        每个点所在分片的区域张量 g_L(x)

        Args:
            x: (N, 2)
            regions: (N,) 分片编号

        Returns:
            (N, 2, 2)，2 区为单位矩阵
        """
        tensor = np.broadcast_to(np.eye(2), (x.shape[0], 2, 2)).copy()
        inner = regions == REGION_INNER
        annulus = regions == REGION_ANNULUS
        if np.any(inner):
            tensor[inner] = l2_tensor(self._transform, x[inner])
        if np.any(annulus):
            tensor[annulus] = l1_tensor(self._expansion, x[annulus])
        return tensor

    def frozen_tensor(self, x, theta: float) -> np.ndarray:
        """
        固定方向 θ 时的黎曼张量 f(θ)·g_L(x) + (1 − f(θ))·I

        Args:
            x: (N, 2) 或 (2,)
            theta: 方向角

        Returns:
            与 x 对应的 (N, 2, 2) 或 (2, 2)
        """
        xs = np.atleast_2d(np.asarray(x, dtype=float))
        f = float(self._weight(theta))
        tensor = np.broadcast_to(np.eye(2), (xs.shape[0], 2, 2)).copy()
        if f > 0.0:
            tensor = f * self.regime_tensor(xs, self.regions(xs)) + (1.0 - f) * tensor
        return tensor[0] if np.ndim(x) == 1 else tensor

    def _evaluate(self, x, y):
        f = np.asarray(self._weight(angle_of(y)), dtype=float)
        if self._observer is not None:
            self._observer(f)

        flat_sq = np.einsum("ni,ni->n", y, y)
        values = np.sqrt(flat_sq)

        regions = self.regions(x)
        active = (f > 0.0) & (regions != REGION_EXTERIOR)
        if np.any(active):
            xa, ya, fa = x[active], y[active], f[active]
            g_l = self.regime_tensor(xa, regions[active])
            blended = fa[:, None, None] * g_l + (1.0 - fa)[:, None, None] * np.eye(2)
            require_positive_definite(blended, position=xa, direction=ya)
            values[active] = np.sqrt(np.einsum("ni,nij,nj->n", ya, blended, ya))
        return values


class CloakMetric(FinslerMetricField):
    """
    纯 L1 隐身斗篷度量（非方向性）

    ‖x‖ < R1 处无定义，求值抛出 ShieldInteriorError。
    """

    def __init__(self, expansion: PointExpansionMap, pinned_region: int | None = None, label: str = "cloak"):
        super().__init__(2, label)
        self._expansion = expansion
        self._pinned = pinned_region

    @property
    def expansion(self) -> PointExpansionMap:
        return self._expansion

    @property
    def interfaces(self) -> tuple[float, ...]:
        return (self._expansion.shield_radius, self._expansion.device_radius)

    def restrict(self, region: int) -> "CloakMetric":
        return CloakMetric(self._expansion, pinned_region=region, label=self.label)

    def tensor(self, x: np.ndarray) -> np.ndarray:
        r = np.hypot(x[:, 0], x[:, 1])
        if self._pinned is None:
            regions = region_index(self.interfaces, r)
        else:
            regions = np.full(x.shape[0], self._pinned, dtype=int)
        inside = regions == REGION_INNER
        if np.any(inside):
            idx = int(np.argmax(inside))
            raise ShieldInteriorError(
                f"cloak metric is undefined inside the shield (r={r[idx]})", position=x[idx], radius=float(r[idx])
            )
        tensor = np.broadcast_to(np.eye(2), (x.shape[0], 2, 2)).copy()
        annulus = regions == REGION_ANNULUS
        if np.any(annulus):
            tensor[annulus] = l1_tensor(self._expansion, x[annulus])
        return tensor

    def _evaluate(self, x, y):
        return np.sqrt(np.einsum("ni,nij,nj->n", y, self.tensor(x), y))


def blended_finsler(m: BlendedShieldMetric, x, y) -> float:
    """
    F(x, y) = √(yᵀ [f(θ)·g_L(x) + (1 − f(θ))·I] y)

    Raises:
        PositiveDefinitenessError: 混合张量不正定
    """
    return float(m.evaluate(as_position(x, 2), np.asarray(y, dtype=float)))


def create_blended_shield(
    shield_radius: float = 1.0,
    device_radius: float = 2.0,
    r0: float = 0.5,
    weight: DirectionWeight | None = None,
    alpha_clamp: float = 1.0 - 1e-3,
) -> BlendedShieldMetric:
    """按几何参数创建非对称屏蔽度量"""
    return BlendedShieldMetric(
        PointExpansionMap(shield_radius, device_radius),
        RadialCoshTransform(r0=r0, alpha_clamp=alpha_clamp),
        weight or DirectionWeight(),
    )


def cloak_metric(shield_radius: float = 1.0, device_radius: float = 2.0) -> CloakMetric:
    """创建纯 L1 隐身斗篷度量"""
    return CloakMetric(PointExpansionMap(shield_radius, device_radius))

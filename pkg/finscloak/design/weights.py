"""
方向权重 f(θ)

f(θ) = 1 的方向看到隐身斗篷度量，f(θ) = 0 的方向看到平直空间。
阶跃剖面在 [π/2, 3π/2) 上取 0；平滑剖面用三次 smoothstep 在两个
过渡带内连接两段平台，平台上取值与阶跃剖面完全相同。
"""

from dataclasses import dataclass

import numpy as np

from finscloak.core.exceptions import DomainError

TWO_PI = 2.0 * np.pi
HALF_PI = 0.5 * np.pi
THREE_HALF_PI = 1.5 * np.pi

PROFILES = ("step", "smooth", "zero", "one")


def angle_of(y) -> float | np.ndarray:
    """
    方向角，从 +x 轴逆时针量起，取值 [0, 2π)

    三维方向取其 (x, y) 分量，即赤道截面上的方向角。

    Args:
        y: 方向，形状 (..., d)

    Returns:
        单个方向返回 float，批量返回 (...,) 数组
    """
    arr = np.asarray(y, dtype=float)
    theta = np.mod(np.arctan2(arr[..., 1], arr[..., 0]), TWO_PI)
    # arctan2 返回 -0 附近的负小量时，mod 的结果会舍入成 2π
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    if theta.ndim == 0:
        return float(theta)
    return theta


def smoothstep(s: np.ndarray) -> np.ndarray:
    """3s² − 2s³，s 先截断到 [0, 1]"""
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


@dataclass(frozen=True)
class DirectionWeight:
    """
    方向权重剖面

    Attributes:
        profile: step | smooth | zero | one
        transition_width: 平滑剖面的过渡带宽度（弧度），中心在 π/2 和 3π/2
    """

    profile: str = "smooth"
    transition_width: float = 0.2

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise DomainError(
                f"unknown weight profile {self.profile!r}, expected one of {PROFILES}", value=self.profile
            )
        if not (0.0 < self.transition_width <= HALF_PI):
            raise DomainError(
                f"transition_width must lie in (0, pi/2], got {self.transition_width}",
                value=self.transition_width,
                domain=(0.0, HALF_PI),
            )

    def __call__(self, theta) -> float | np.ndarray:
        th = np.asarray(theta, dtype=float)
        if self.profile == "zero":
            f = np.zeros_like(th)
        elif self.profile == "one":
            f = np.ones_like(th)
        elif self.profile == "step":
            f = np.where((th >= HALF_PI) & (th < THREE_HALF_PI), 0.0, 1.0)
        else:
            half = 0.5 * self.transition_width
            falling = smoothstep((th - (HALF_PI - half)) / self.transition_width)
            rising = smoothstep((th - (THREE_HALF_PI - half)) / self.transition_width)
            f = 1.0 - falling + rising
        if f.ndim == 0:
            return float(f)
        return f

    def zero_plateau(self) -> tuple[float, float] | None:
        """
        f ≡ 0 的闭区间

        Returns:
            (起点, 终点)；没有零平台的剖面返回 None
        """
        if self.profile == "zero":
            return (0.0, TWO_PI)
        if self.profile == "one":
            return None
        if self.profile == "step":
            return (HALF_PI, THREE_HALF_PI)
        half = 0.5 * self.transition_width
        return (HALF_PI + half, THREE_HALF_PI - half)


def direction_weight(f: DirectionWeight, theta) -> float | np.ndarray:
    """
    计算 f(θ)

    Args:
        f: 权重剖面
        theta: 已规范到 [0, 2π) 的方向角

    Returns:
        [0, 1] 内的权重
    """
    return f(theta)


def create_direction_weight(profile: str = "smooth", transition_width: float = 0.2) -> DirectionWeight:
    """创建方向权重"""
    return DirectionWeight(profile=profile, transition_width=transition_width)

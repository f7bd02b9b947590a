"""
方向折射率

n(x, y) = F̃(x, y) / F₀(x, y)，F₀ 为平直度量 ‖y‖。
对 y 零次齐次，只依赖方向。
"""

import numpy as np

from finscloak.core.base import Y_MIN, as_direction, as_position
from finscloak.core.exceptions import DomainError, EvaluationError, ShieldInteriorError
from finscloak.core.interfaces import IMetricField
from finscloak.design.transforms import PointExpansionMap


class RefractiveIndexField:
    """
    由度量场导出的方向折射率场

    Attributes:
        source_metric: 设计得到的 Finsler 度量 F̃
    """

    def __init__(self, source_metric: IMetricField):
        self.source_metric = source_metric

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def evaluate(self, x, y) -> np.ndarray | float:
        """
        批量计算 n(x, y)

        Args:
            x: (..., d)
            y: (..., d)

        Returns:
            (...,) 折射率
        """
        y_arr = np.asarray(y, dtype=float)
        values = self.source_metric.evaluate(x, y_arr)
        return values / np.linalg.norm(y_arr, axis=-1)


def refractive_index(field: IMetricField, x, y) -> float:
    """
    n(x, y) = F̃(x, y) / ‖y‖

    Raises:
        EvaluationError: 度量求值失败
    """
    xv = as_position(x, field.dim)
    yv = as_direction(y, field.dim)
    return float(field.evaluate(xv, yv)) / float(np.linalg.norm(yv))


def cylindrical_index(expansion: PointExpansionMap, r: float, y_polar) -> float:
    """
    圆柱隐身斗篷的解析折射率

    n = √(k²(y^r)² + r′²(y^θ)²) / √((y^r)² + r²(y^θ)²)，k = R2/(R2 − R1)

    Args:
        expansion: 点扩张映射
        r: 半径，R1 < r ≤ R2
        y_polar: 极坐标分量 (y^r, y^θ)

    Raises:
        ShieldInteriorError: r ≤ R1
        DomainError: r > R2
    """
    if r <= expansion.shield_radius:
        raise ShieldInteriorError(
            f"cylindrical index is undefined for r={r} <= R1={expansion.shield_radius}", radius=r
        )
    if r > expansion.device_radius:
        raise DomainError(
            f"cylindrical index is defined up to R2={expansion.device_radius}, got r={r}",
            value=r,
            domain=(expansion.shield_radius, expansion.device_radius),
        )
    y_r, y_t = (float(c) for c in y_polar)
    denom_sq = y_r * y_r + r * r * y_t * y_t
    if np.sqrt(denom_sq) < Y_MIN:
        raise EvaluationError("polar direction is too short", direction=y_polar)
    r_virtual = float(expansion.virtual_radius(r))
    numer_sq = expansion.stretch**2 * y_r * y_r + r_virtual * r_virtual * y_t * y_t
    return float(np.sqrt(numer_sq / denom_sq))


def polar_to_cartesian(r: float, theta: float, y_polar) -> tuple[np.ndarray, np.ndarray]:
    """
    极坐标点与切向量转成笛卡尔分量

    Returns:
        (位置, 方向)，方向 = y^r·r̂ + r·y^θ·θ̂
    """
    radial = np.array([np.cos(theta), np.sin(theta)])
    angular = np.array([-np.sin(theta), np.cos(theta)])
    y_r, y_t = (float(c) for c in y_polar)
    return r * radial, y_r * radial + r * y_t * angular

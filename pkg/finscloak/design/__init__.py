"""
度量设计

方向权重、坐标变换以及把 L1 / L2 / 平直三种区域按方向混合的屏蔽度量。
"""

from finscloak.design.cloak import (
    BlendedShieldMetric,
    CloakMetric,
    blended_finsler,
    cloak_metric,
    create_blended_shield,
    regime_metric_L1,
    regime_metric_L2,
)
from finscloak.design.transforms import (
    CartesianExpansionMap,
    IdentityMap,
    PointExpansionMap,
    RadialCoshTransform,
    cosh_transform,
    pullback_metric,
)
from finscloak.design.weights import DirectionWeight, create_direction_weight, direction_weight

__all__ = [
    # 权重
    "DirectionWeight",
    "direction_weight",
    "create_direction_weight",
    # 变换
    "RadialCoshTransform",
    "PointExpansionMap",
    "CartesianExpansionMap",
    "IdentityMap",
    "cosh_transform",
    "pullback_metric",
    # 屏蔽度量
    "BlendedShieldMetric",
    "CloakMetric",
    "regime_metric_L1",
    "regime_metric_L2",
    "blended_finsler",
    "create_blended_shield",
    "cloak_metric",
]

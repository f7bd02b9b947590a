"""
测地线

Finsler 测地喷射、分片光滑度量上的 RK4 光线追踪与轨迹分析。
"""

from finscloak.geodesic.analysis import deviation_metrics, min_distance_to_center, polyline_distance, retrace_miss
from finscloak.geodesic.integrator import (
    TERMINATIONS,
    Box,
    GeodesicIntegrator,
    IntegratorConfig,
    RayState,
    Trajectory,
    integrate,
    reverse_trajectory,
)
from finscloak.geodesic.spray import christoffel_symbols, momentum, riemann_reduction_check, spray_acceleration

__all__ = [
    # 喷射
    "spray_acceleration",
    "momentum",
    "christoffel_symbols",
    "riemann_reduction_check",
    # 积分
    "RayState",
    "Box",
    "IntegratorConfig",
    "Trajectory",
    "TERMINATIONS",
    "GeodesicIntegrator",
    "integrate",
    "reverse_trajectory",
    # 分析
    "deviation_metrics",
    "min_distance_to_center",
    "polyline_distance",
    "retrace_miss",
]

"""
FinsCloak - Finsler 几何非对称隐身屏蔽工具包

由方向相关的 Finsler 度量设计单向屏蔽装置：向外看不受影响，外部光线绕开屏蔽区。
- 度量场：平直、黎曼、共形、Randers、Maxwell 鱼眼
- 设计：点扩张斗篷、cosh 径向变换、方向权重混合
- 介质：方向相关折射率、阻抗匹配的 ε、μ
- 测地线：有限差分喷射与分片 RK4 光线追踪

使用示例：
    from finscloak import ShieldScenario, RayFan, build_asymmetric_shield, trace_scenario, analyze_shielding

    scenario = ShieldScenario()
    fans = [RayFan.uniform("leftward"), RayFan.uniform("rightward")]
    trajectories = trace_scenario(scenario, fans)
    report = analyze_shielding(trajectories, scenario)
"""

from finscloak.core.base import DEFAULT_FD, Y_MIN, FDConfig, FinslerMetricField, MetricTensor
from finscloak.core.exceptions import (
    DomainError,
    EvaluationError,
    FinsCloakError,
    IllConditionedError,
    InvalidConfigError,
    MaterialSolveError,
    PositiveDefinitenessError,
    ShieldInteriorError,
    SingularMapError,
    TrajectoryFormatError,
)
from finscloak.core.finsler import (
    check_homogeneity,
    conformal_metric,
    eval_metric,
    fisheye_metric,
    flat_metric,
    metric_tensor,
    path_length,
    randers_metric,
    riemann_metric,
    uniform_metric,
)
from finscloak.core.interfaces import ICoordinateMap, IMetricField
from finscloak.design.cloak import (
    BlendedShieldMetric,
    blended_finsler,
    cloak_metric,
    create_blended_shield,
    regime_metric_L1,
    regime_metric_L2,
)
from finscloak.design.transforms import (
    CartesianExpansionMap,
    PointExpansionMap,
    RadialCoshTransform,
    cosh_transform,
    pullback_metric,
)
from finscloak.design.weights import DirectionWeight, direction_weight
from finscloak.geodesic.analysis import deviation_metrics, min_distance_to_center, retrace_miss
from finscloak.geodesic.integrator import (
    Box,
    IntegratorConfig,
    RayState,
    Trajectory,
    integrate,
    reverse_trajectory,
)
from finscloak.geodesic.spray import riemann_reduction_check, spray_acceleration
from finscloak.medium.index import RefractiveIndexField, cylindrical_index, refractive_index
from finscloak.medium.materials import (
    GridSpec,
    MaterialTensors,
    impedance_match,
    pendry_parameters,
    principal_indices_to_materials,
    sample_material_field,
)
from finscloak.scenarios.shield import (
    RayFan,
    ShieldReport,
    ShieldScenario,
    analyze_shielding,
    build_asymmetric_shield,
    trace_scenario,
)

__version__ = "0.1.0"
__all__ = [
    # 版本
    "__version__",
    # 基类
    "FDConfig",
    "DEFAULT_FD",
    "Y_MIN",
    "FinslerMetricField",
    "MetricTensor",
    # 接口
    "IMetricField",
    "ICoordinateMap",
    # 度量场
    "flat_metric",
    "riemann_metric",
    "conformal_metric",
    "uniform_metric",
    "randers_metric",
    "fisheye_metric",
    "eval_metric",
    "metric_tensor",
    "check_homogeneity",
    "path_length",
    # 设计
    "DirectionWeight",
    "direction_weight",
    "RadialCoshTransform",
    "PointExpansionMap",
    "CartesianExpansionMap",
    "cosh_transform",
    "pullback_metric",
    "BlendedShieldMetric",
    "regime_metric_L1",
    "regime_metric_L2",
    "blended_finsler",
    "create_blended_shield",
    "cloak_metric",
    # 介质
    "RefractiveIndexField",
    "refractive_index",
    "cylindrical_index",
    "MaterialTensors",
    "GridSpec",
    "impedance_match",
    "principal_indices_to_materials",
    "pendry_parameters",
    "sample_material_field",
    # 测地线
    "RayState",
    "Box",
    "IntegratorConfig",
    "Trajectory",
    "spray_acceleration",
    "riemann_reduction_check",
    "integrate",
    "reverse_trajectory",
    "deviation_metrics",
    "min_distance_to_center",
    "retrace_miss",
    # 实验
    "ShieldScenario",
    "RayFan",
    "ShieldReport",
    "build_asymmetric_shield",
    "trace_scenario",
    "analyze_shielding",
    # 异常
    "FinsCloakError",
    "InvalidConfigError",
    "EvaluationError",
    "PositiveDefinitenessError",
    "IllConditionedError",
    "SingularMapError",
    "ShieldInteriorError",
    "DomainError",
    "MaterialSolveError",
    "TrajectoryFormatError",
]

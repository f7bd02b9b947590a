"""
FinsCloak 核心模块

包含异常、接口、度量场基类、有限差分基本张量和线程池。
"""

from finscloak.core.base import (
    DEFAULT_FD,
    Y_MIN,
    FDConfig,
    FinslerMetricField,
    MetricTensor,
    is_positive_definite,
    leading_minors,
)
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
    ConformalMetric,
    FlatMetric,
    FunctionMetric,
    RandersMetric,
    RiemannMetric,
    check_homogeneity,
    conformal_metric,
    eval_metric,
    fisheye_metric,
    flat_metric,
    is_strongly_convex,
    metric_tensor,
    path_length,
    randers_metric,
    riemann_metric,
    uniform_metric,
)
from finscloak.core.interfaces import ICoordinateMap, IMetricField, region_index
from finscloak.core.pool import ThreadPool, run_ordered

__all__ = [
    # 基类
    "FDConfig",
    "DEFAULT_FD",
    "Y_MIN",
    "FinslerMetricField",
    "MetricTensor",
    "is_positive_definite",
    "leading_minors",
    # 接口
    "IMetricField",
    "ICoordinateMap",
    "region_index",
    # 度量场
    "FlatMetric",
    "RiemannMetric",
    "ConformalMetric",
    "RandersMetric",
    "FunctionMetric",
    "flat_metric",
    "riemann_metric",
    "conformal_metric",
    "uniform_metric",
    "randers_metric",
    "fisheye_metric",
    # 运算
    "eval_metric",
    "metric_tensor",
    "check_homogeneity",
    "path_length",
    "is_strongly_convex",
    # 并发
    "ThreadPool",
    "run_ordered",
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

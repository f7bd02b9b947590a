"""
FinsCloak 基础类型

提供度量场基类、有限差分配置与基本张量的值对象，以及正定性检查工具。
具体度量（平直、黎曼、Randers、隐身斗篷）都继承 FinslerMetricField，
只需要实现批量求值 _evaluate。
"""

import logging
from abc import abstractmethod
from dataclasses import dataclass

import numpy as np

from finscloak.core.exceptions import DomainError, EvaluationError, PositiveDefinitenessError
from finscloak.core.interfaces import IMetricField

logger = logging.getLogger(__name__)

# 方向向量的最小欧氏范数
Y_MIN = 1e-8

# 自动差分步长系数
DEFAULT_REL_STEP_Y = 1e-3
DEFAULT_REL_STEP_X = 1e-5


@dataclass(frozen=True)
class FDConfig:
    """
    中心差分配置

    Attributes:
        h_y: 方向差分的绝对步长，None 表示 1e-3·‖y‖
        h_x: 位置差分的绝对步长，None 表示 1e-5·max(1, ‖x‖)
        scheme: 差分格式，目前只支持 "central"
    """

    h_y: float | None = None
    h_x: float | None = None
    scheme: str = "central"

    def __post_init__(self):
        for name in ("h_y", "h_x"):
            value = getattr(self, name)
            if value is not None and not (0.0 < value < 1.0):
                raise DomainError(f"{name} must lie in (0, 1), got {value}", value=value, domain=(0.0, 1.0))
        if self.scheme != "central":
            raise DomainError(f"unsupported difference scheme: {self.scheme}", value=self.scheme)

    def step_y(self, y: np.ndarray) -> float:
        if self.h_y is not None:
            return self.h_y
        return DEFAULT_REL_STEP_Y * float(np.linalg.norm(y))

    def step_x(self, x: np.ndarray) -> float:
        if self.h_x is not None:
            return self.h_x
        return DEFAULT_REL_STEP_X * max(1.0, float(np.linalg.norm(x)))


DEFAULT_FD = FDConfig()


@dataclass(frozen=True)
class MetricTensor:
    """
    基本张量 g_ij(x, y)

    Attributes:
        entries: 对称正定 (d, d) 矩阵
        base_point: 计算所在位置
        base_direction: 计算所在方向，黎曼张量为 None
        asymmetry: 对称化之前差分 Hessian 的最大反对称分量
    """

    entries: np.ndarray
    base_point: np.ndarray
    base_direction: np.ndarray | None = None
    asymmetry: float = 0.0

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def quadratic(self, v: np.ndarray) -> float:
        """v^T g v"""
        v = np.asarray(v, dtype=float)
        return float(v @ self.entries @ v)


def as_position(x, dim: int | None = None) -> np.ndarray:
    """
    转换并检查位置向量

    Raises:
        EvaluationError: 维数不符或含非有限分量
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or (dim is not None and arr.shape[0] != dim):
        raise EvaluationError(f"position must have shape ({dim},), got {arr.shape}", position=arr)
    if not np.all(np.isfinite(arr)):
        raise EvaluationError("position has non-finite components", position=arr)
    return arr


def as_direction(y, dim: int | None = None) -> np.ndarray:
    """
    转换并检查方向向量

    Raises:
        EvaluationError: 维数不符、含非有限分量或范数小于 Y_MIN
    """
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or (dim is not None and arr.shape[0] != dim):
        raise EvaluationError(f"direction must have shape ({dim},), got {arr.shape}", direction=arr)
    if not np.all(np.isfinite(arr)):
        raise EvaluationError("direction has non-finite components", direction=arr)
    if np.linalg.norm(arr) < Y_MIN:
        raise EvaluationError(f"direction norm below {Y_MIN}", direction=arr)
    return arr


def leading_minors(g: np.ndarray) -> np.ndarray:
    """
    顺序主子式

    Args:
        g: (..., d, d) 矩阵

    Returns:
        (..., d)，第 k 列为前 k+1 阶主子式
    """
    d = g.shape[-1]
    return np.stack([np.linalg.det(g[..., :k, :k]) for k in range(1, d + 1)], axis=-1)


def is_positive_definite(g: np.ndarray) -> np.ndarray:
    """按 Sylvester 判据逐个判断 (..., d, d) 矩阵是否正定"""
    return np.all(leading_minors(g) > 0.0, axis=-1)


def require_positive_definite(g: np.ndarray, position=None, direction=None) -> None:
    """
    要求矩阵（或一批矩阵）正定

    Raises:
        PositiveDefinitenessError: 携带第一个不正定矩阵的特征值
    """
    ok = is_positive_definite(g)
    if np.all(ok):
        return
    bad = np.argwhere(~np.atleast_1d(ok))[0]
    offending = g if g.ndim == 2 else g[tuple(bad)]
    eigenvalues = np.linalg.eigvalsh(offending)
    pos = position
    if position is not None and np.ndim(position) > 1:
        pos = np.asarray(position)[tuple(bad)]
    raise PositiveDefinitenessError(
        f"fundamental tensor is not positive definite (eigenvalues {eigenvalues})",
        position=pos,
        direction=direction,
        eigenvalues=eigenvalues,
    )


class FinslerMetricField(IMetricField):
    """
    度量场基类

    负责输入广播、形状检查和输出检查，子类只需实现 _evaluate：
    接收 (N, d) 的 x、y，返回 (N,) 的 F 值。
    """

    def __init__(self, dim: int, label: str = ""):
        if dim not in (2, 3):
            raise DomainError(f"dimension must be 2 or 3, got {dim}", value=dim, domain=(2, 3))
        self._dim = dim
        self._label = label or type(self).__name__

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def label(self) -> str:
        return self._label

    def __repr__(self) -> str:
        return f"{type(self).__name__}(label={self._label!r}, dim={self._dim})"

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def evaluate(self, x, y) -> np.ndarray | float:
        x_arr = np.asarray(x, dtype=float)
        y_arr = np.asarray(y, dtype=float)
        if x_arr.shape[-1:] != (self._dim,) or y_arr.shape[-1:] != (self._dim,):
            raise EvaluationError(
                f"expected trailing dimension {self._dim}, got {x_arr.shape} and {y_arr.shape}",
                position=x_arr,
                direction=y_arr,
            )
        x_arr, y_arr = np.broadcast_arrays(x_arr, y_arr)
        batch_shape = x_arr.shape[:-1]
        xs = x_arr.reshape(-1, self._dim)
        ys = y_arr.reshape(-1, self._dim)

        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise EvaluationError("non-finite input to metric evaluation", position=x, direction=y)
        short = np.linalg.norm(ys, axis=-1) < Y_MIN
        if np.any(short):
            idx = int(np.argmax(short))
            raise EvaluationError(f"direction norm below {Y_MIN}", position=xs[idx], direction=ys[idx])

        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            values = np.asarray(self._evaluate(xs, ys), dtype=float)

        bad = ~np.isfinite(values) | (values <= 0.0)
        if np.any(bad):
            idx = int(np.argmax(bad))
            raise EvaluationError(
                f"{self._label}: metric value {values[idx]} is not finite and positive",
                position=xs[idx],
                direction=ys[idx],
            )
        values = values.reshape(batch_shape)
        if values.ndim == 0:
            return float(values)
        return values

    @abstractmethod
    def _evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        批量求值

        Args:
            x: (N, d) 位置
            y: (N, d) 方向，已保证范数不小于 Y_MIN

        Returns:
            (N,) F 值
        """
        pass

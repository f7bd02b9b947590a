"""
Finsler 度量核心运算

提供度量求值、基本张量的差分恢复、齐次性检查、路径长度，
以及平直、黎曼、共形、Randers 四类解析度量场。
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np

from finscloak.core.base import (
    DEFAULT_FD,
    Y_MIN,
    FDConfig,
    FinslerMetricField,
    MetricTensor,
    as_direction,
    as_position,
    require_positive_definite,
)
from finscloak.core.exceptions import DomainError, EvaluationError, PositiveDefinitenessError
from finscloak.core.interfaces import IMetricField

logger = logging.getLogger(__name__)

TensorFunction = Callable[[np.ndarray], np.ndarray]
ScalarFunction = Callable[[np.ndarray], float]


# ==================== 差分模板 ====================


def hessian_stencil(d: int) -> np.ndarray:
    """
    二阶中心差分模板的单位偏移

    顺序：中心点；每个 i 的 +e_i、-e_i；每对 i<j 的 ++、+-、-+、-- 四角。

    Returns:
        (1 + 2d + 2d(d-1), d) 偏移数组
    """
    eye = np.eye(d)
    rows = [np.zeros(d)]
    for i in range(d):
        rows.extend([eye[i], -eye[i]])
    for i in range(d):
        for j in range(i + 1, d):
            rows.extend([eye[i] + eye[j], eye[i] - eye[j], -eye[i] + eye[j], -eye[i] - eye[j]])
    return np.array(rows)


def assemble_hessian(values: np.ndarray, d: int, h: float) -> tuple[np.ndarray, float]:
    """
    由模板上的函数值拼出 Hessian

    交叉项分别按两种顺序差分，两者之差即为反对称诊断量。

    Args:
        values: hessian_stencil 顺序的函数值
        d: 维数
        h: 步长

    Returns:
        (对称化后的 Hessian, 对称化前的最大反对称分量)
    """
    center = values[0]
    hess = np.empty((d, d))
    for i in range(d):
        hess[i, i] = (values[1 + 2 * i] - 2.0 * center + values[2 + 2 * i]) / (h * h)
    k = 1 + 2 * d
    for i in range(d):
        for j in range(i + 1, d):
            pp, pm, mp, mm = values[k : k + 4]
            hess[i, j] = ((pp - pm) - (mp - mm)) / (4.0 * h * h)
            hess[j, i] = ((pp - mp) - (pm - mm)) / (4.0 * h * h)
            k += 4
    asymmetry = float(np.max(np.abs(hess - hess.T)))
    return 0.5 * (hess + hess.T), asymmetry


# ==================== 基本运算 ====================


def eval_metric(field: IMetricField, x, y) -> float:
    """
    计算 F(x, y)

    Raises:
        EvaluationError: 方向过短或结果非有限
    """
    xv = as_position(x, field.dim)
    yv = as_direction(y, field.dim)
    return float(field.evaluate(xv, yv))


def metric_tensor(field: IMetricField, x, y, cfg: FDConfig | None = None) -> MetricTensor:
    """
    基本张量 g_ij = ½ ∂²(F²)/∂y^i∂y^j

    对 F² 做方向上的中心二阶差分，对称化后检查正定性。

    Args:
        field: 度量场
        x: 位置
        y: 方向
        cfg: 差分配置，默认自动步长

    Returns:
        MetricTensor，asymmetry 记录对称化前的反对称分量

    Raises:
        PositiveDefinitenessError: 基本张量不正定
        EvaluationError: 求值失败或差分溢出
    """
    cfg = cfg or DEFAULT_FD
    xv = as_position(x, field.dim)
    yv = as_direction(y, field.dim)
    h = cfg.step_y(yv)

    offsets = hessian_stencil(field.dim) * h
    with np.errstate(over="ignore", invalid="ignore"):
        values = 0.5 * np.square(field.evaluate(np.broadcast_to(xv, offsets.shape), yv + offsets))
        entries, asymmetry = assemble_hessian(values, field.dim, h)
    if not np.all(np.isfinite(entries)):
        raise EvaluationError("finite-difference overflow in fundamental tensor", position=xv, direction=yv)

    require_positive_definite(entries, position=xv, direction=yv)
    if asymmetry > 1e-6 * max(1.0, float(np.max(np.abs(entries)))):
        logger.debug(f"fundamental tensor asymmetry {asymmetry:.3e} at x={xv}, y={yv}")
    return MetricTensor(entries=entries, base_point=xv, base_direction=yv, asymmetry=asymmetry)


def check_homogeneity(field: IMetricField, x, y, lam: float) -> float:
    """
    一次齐次性残差 |F(x, λy) − λF(x, y)| / (λF(x, y))

    Raises:
        DomainError: λ 不为正
    """
    if not lam > 0.0:
        raise DomainError(f"scale factor must be positive, got {lam}", value=lam, domain=(0.0, np.inf))
    xv = as_position(x, field.dim)
    yv = as_direction(y, field.dim)
    base = float(field.evaluate(xv, yv))
    scaled = float(field.evaluate(xv, lam * yv))
    return abs(scaled - lam * base) / (lam * base)


def path_length(field: IMetricField, positions, parameters: Sequence[float] | None = None) -> float:
    """
    采样路径的 Finsler 长度

    对每一段用弦向量 ΔX 作方向，取两端点 F(X, ΔX) 的梯形平均；
    由一次齐次性，参数值不影响结果，只做单调性检查。

    Args:
        field: 度量场
        positions: (N, d) 采样点，N ≥ 2
        parameters: 可选的参数值，须严格递增

    Returns:
        路径长度；零位移的段被跳过并记录警告
    """
    pts = np.asarray(positions, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != field.dim:
        raise DomainError(f"path needs at least 2 samples of dimension {field.dim}, got {pts.shape}", value=pts.shape)
    if parameters is not None:
        ts = np.asarray(parameters, dtype=float)
        if ts.shape != (pts.shape[0],) or np.any(np.diff(ts) <= 0.0):
            raise DomainError("path parameters must be strictly increasing, one per sample", value=ts)

    chords = np.diff(pts, axis=0)
    usable = np.linalg.norm(chords, axis=1) >= Y_MIN
    skipped = int(np.count_nonzero(~usable))
    if skipped:
        logger.warning(f"path_length skipped {skipped} degenerate segment(s)")
    if not np.any(usable):
        return 0.0

    starts = pts[:-1][usable]
    ends = pts[1:][usable]
    chords = chords[usable]
    lengths = 0.5 * (field.evaluate(starts, chords) + field.evaluate(ends, chords))
    return float(np.sum(lengths))


# ==================== 解析度量场 ====================


class FlatMetric(FinslerMetricField):
    """欧氏度量 F₀(x, y) = ‖y‖"""

    def __init__(self, dim: int = 2, label: str = "flat"):
        super().__init__(dim, label)

    def _evaluate(self, x, y):
        return np.sqrt(np.einsum("ni,ni->n", y, y))


class RiemannMetric(FinslerMetricField):
    """
    黎曼度量 F(x, y) = √(yᵀ g(x) y)

    tensor 为逐点函数 x → (d, d)；vectorized=True 时直接接收 (N, d) 返回 (N, d, d)。
    """

    def __init__(self, tensor: TensorFunction, dim: int = 2, label: str = "riemann", vectorized: bool = False):
        super().__init__(dim, label)
        self._tensor = tensor
        self._vectorized = vectorized

    def tensor(self, x: np.ndarray) -> np.ndarray:
        """批量计算 g(x)，并检查正定性"""
        if self._vectorized:
            g = np.asarray(self._tensor(x), dtype=float)
        else:
            g = np.stack([np.asarray(self._tensor(row), dtype=float) for row in x])
        if g.shape != (x.shape[0], self.dim, self.dim):
            raise EvaluationError(f"{self.label}: tensor function returned shape {g.shape}", position=x)
        if not np.all(np.isfinite(g)):
            raise EvaluationError(f"{self.label}: tensor function returned non-finite entries", position=x)
        require_positive_definite(g, position=x)
        return g

    def _evaluate(self, x, y):
        g = self.tensor(x)
        return np.sqrt(np.einsum("ni,nij,nj->n", y, g, y))


class ConformalMetric(FinslerMetricField):
    """
    共形度量 F̃(x, y) = n(x)·F(x, y)

    两个 Finsler 流形共形相关时，折射率 n(x) 就是共形因子。
    """

    def __init__(
        self,
        base: IMetricField,
        index: ScalarFunction | float,
        label: str = "conformal",
        vectorized: bool = False,
    ):
        super().__init__(base.dim, label)
        self._base = base
        self._index = index
        self._vectorized = vectorized

    @property
    def base(self) -> IMetricField:
        return self._base

    def index(self, x: np.ndarray) -> np.ndarray:
        """批量计算 n(x)"""
        if callable(self._index):
            if self._vectorized:
                n = np.asarray(self._index(x), dtype=float)
            else:
                n = np.array([float(self._index(row)) for row in x])
        else:
            n = np.full(x.shape[0], float(self._index))
        return n

    def _evaluate(self, x, y):
        return self.index(x) * self._base.evaluate(x, y)


class RandersMetric(FinslerMetricField):
    """
    Randers 度量 F(x, y) = ‖y‖ + b·y

    要求 ‖b‖ < 1 以保证正值与强凸性。
    """

    def __init__(self, b, label: str = "randers"):
        b = np.asarray(b, dtype=float)
        super().__init__(b.shape[0], label)
        if not float(np.linalg.norm(b)) < 1.0:
            raise DomainError(f"Randers drift must satisfy |b| < 1, got {b}", value=b, domain=(0.0, 1.0))
        self._b = b

    @property
    def drift(self) -> np.ndarray:
        return self._b.copy()

    def fundamental_tensor(self, y) -> np.ndarray:
        """
        解析基本张量

        记 α = ‖y‖、β = b·y、ŷ = y/α，则
        g = (F/α)(I − ŷŷᵀ) + (b + ŷ)(b + ŷ)ᵀ。
        """
        y = as_direction(y, self.dim)
        alpha = float(np.linalg.norm(y))
        unit = y / alpha
        value = alpha + float(self._b @ y)
        w = self._b + unit
        return (value / alpha) * (np.eye(self.dim) - np.outer(unit, unit)) + np.outer(w, w)

    def _evaluate(self, x, y):
        return np.sqrt(np.einsum("ni,ni->n", y, y)) + y @ self._b


class FunctionMetric(FinslerMetricField):
    """
    用户提供的逐点度量 F(x, y)

    不做齐次性假设，可用于构造故意损坏的度量来测试检查工具。
    """

    def __init__(self, evaluator: Callable[[np.ndarray, np.ndarray], float], dim: int = 2, label: str = "custom"):
        super().__init__(dim, label)
        self._evaluator = evaluator

    def _evaluate(self, x, y):
        return np.array([float(self._evaluator(xi, yi)) for xi, yi in zip(x, y)])


# ==================== 工厂函数 ====================


def flat_metric(d: int = 2) -> FlatMetric:
    """创建 d 维欧氏度量"""
    return FlatMetric(dim=d)


def riemann_metric(
    g: TensorFunction,
    dim: int = 2,
    label: str = "riemann",
    vectorized: bool = False,
) -> RiemannMetric:
    """
    由张量函数 g(x) 创建黎曼度量

    Args:
        g: 位置 → 对称正定矩阵
        dim: 维数
        label: 名称
        vectorized: g 是否接收 (N, d) 批量输入

    Returns:
        RiemannMetric
    """
    return RiemannMetric(g, dim=dim, label=label, vectorized=vectorized)


def conformal_metric(
    base: IMetricField,
    n: ScalarFunction | float,
    label: str = "conformal",
    vectorized: bool = False,
) -> ConformalMetric:
    """创建共形度量 n(x)·F(x, y)，n 可以是常数"""
    return ConformalMetric(base, n, label=label, vectorized=vectorized)


def uniform_metric(n: float, d: int = 2) -> ConformalMetric:
    """均匀介质 F = n‖y‖"""
    if not n > 0.0:
        raise DomainError(f"refractive index must be positive, got {n}", value=n)
    return ConformalMetric(FlatMetric(d), float(n), label=f"uniform({n:g})")


def randers_metric(b) -> RandersMetric:
    """创建 Randers 度量 ‖y‖ + b·y"""
    return RandersMetric(b)


def fisheye_metric(radius: float = 1.0, d: int = 2) -> ConformalMetric:
    """
    Maxwell 鱼眼透镜 n(x) = 2 / (1 + ‖x‖²/a²)

    从 x₀ 出发的所有光线在光程 π·a 处汇聚于共轭点 −a²x₀/‖x₀‖²。
    """
    if not radius > 0.0:
        raise DomainError(f"fish-eye radius must be positive, got {radius}", value=radius)
    a2 = radius * radius

    def index(x: np.ndarray) -> np.ndarray:
        return 2.0 / (1.0 + np.einsum("ni,ni->n", x, x) / a2)

    return ConformalMetric(FlatMetric(d), index, label="fisheye", vectorized=True)


def is_strongly_convex(field: IMetricField, x, y, cfg: FDConfig | None = None) -> bool:
    """基本张量在 (x, y) 处是否正定"""
    try:
        metric_tensor(field, x, y, cfg)
    except PositiveDefinitenessError:
        return False
    return True

"""
介电常数与磁导率

- impedance_match：标量折射率 + 波阻抗 → (ε, μ)
- principal_indices_to_materials：主折射率 → 主轴 ε、μ（横波关系 n_x² = ε_y ε_z 等）
- pendry_parameters：圆柱隐身斗篷的闭式参数
- sample_material_field：在网格与方向分箱上离散导出材料场
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from finscloak.core.exceptions import (
    DomainError,
    FinsCloakError,
    MaterialSolveError,
    ShieldInteriorError,
)
from finscloak.design.cloak import BlendedShieldMetric, polar_frame
from finscloak.design.transforms import PointExpansionMap
from finscloak.medium.index import refractive_index

logger = logging.getLogger(__name__)

# 两个特征值的相对差低于此值视为各向同性
ISOTROPY_TOL = 1e-12


@dataclass(frozen=True)
class MaterialTensors:
    """
    主轴标架下的对角 ε、μ

    Attributes:
        epsilon: (3,) 相对介电常数
        mu: (3,) 相对磁导率
        frame: (3, 3) 正交标架，每行一个主轴
    """

    epsilon: np.ndarray
    mu: np.ndarray
    frame: np.ndarray = field(default_factory=lambda: np.eye(3))

    def impedance(self) -> np.ndarray:
        """逐分量 √(μ/ε)"""
        return np.sqrt(self.mu / self.epsilon)

    def is_matched(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.epsilon - self.mu) <= tol * np.abs(self.epsilon)))


@dataclass(frozen=True)
class GridSpec:
    """
    矩形采样网格

    points 按行优先排列：y 从小到大逐行，每行内 x 从小到大。
    """

    x_min: float = -2.0
    x_max: float = 2.0
    nx: int = 41
    y_min: float = -2.0
    y_max: float = 2.0
    ny: int = 41

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise DomainError(f"grid needs at least one point per axis, got {self.nx}x{self.ny}")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise DomainError("grid bounds are reversed", value=(self.x_min, self.x_max, self.y_min, self.y_max))

    def points(self) -> np.ndarray:
        xs = np.linspace(self.x_min, self.x_max, self.nx)
        ys = np.linspace(self.y_min, self.y_max, self.ny)
        gx, gy = np.meshgrid(xs, ys, indexing="xy")
        return np.stack([gx.ravel(), gy.ravel()], axis=-1)


@dataclass(frozen=True)
class MaterialFieldSample:
    """一个 (网格点, 方向分箱) 的材料参数"""

    position: np.ndarray
    direction_bin: float
    index: float
    materials: MaterialTensors


@dataclass
class MaterialField:
    """
    材料场采样结果

    Attributes:
        samples: 成功的样本，行优先网格顺序、分箱升序
        clipped: 落在奇异带内被跳过的样本数
        failed: 求解失败被跳过的样本数
    """

    samples: list[MaterialFieldSample] = field(default_factory=list)
    clipped: int = 0
    failed: int = 0

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)


def impedance_match(n: float, impedance: float = 1.0) -> tuple[float, float]:
    """
    n = √ε√μ，√μ/√ε = C ⇒ ε = n/C，μ = n·C

    Raises:
        DomainError: n 或 C 不为正
    """
    if not (n > 0.0 and impedance > 0.0):
        raise DomainError(f"index and impedance must be positive, got n={n}, C={impedance}", value=(n, impedance))
    return n / impedance, n * impedance


def principal_indices_to_materials(n_principal, impedance: float = 1.0, frame=None) -> MaterialTensors:
    """
    主折射率 → 主轴 ε、μ

    ε_i = n_j n_k / (n_i C)，μ_i = C n_j n_k / n_i，(i, j, k) 轮换。

    Args:
        n_principal: (3,) 主折射率
        impedance: 波阻抗 C
        frame: 可选的主轴标架

    Raises:
        MaterialSolveError: 主折射率非正或解非有限正数
    """
    n = np.asarray(n_principal, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)) or np.any(n <= 0.0):
        raise MaterialSolveError(f"principal indices must be three positive numbers, got {n}", indices=n)
    if not impedance > 0.0:
        raise MaterialSolveError(f"impedance must be positive, got {impedance}", indices=n)
    others = np.array([n[1] * n[2], n[2] * n[0], n[0] * n[1]])
    eps = others / (n * impedance)
    mu = impedance * others / n
    if not (np.all(np.isfinite(eps)) and np.all(eps > 0.0) and np.all(np.isfinite(mu)) and np.all(mu > 0.0)):
        raise MaterialSolveError(f"principal indices {n} have no positive material solution", indices=n)
    return MaterialTensors(epsilon=eps, mu=mu, frame=np.eye(3) if frame is None else np.asarray(frame, dtype=float))


def pendry_parameters(expansion: PointExpansionMap, r: float) -> MaterialTensors:
    """
    圆柱隐身斗篷参数（极坐标主轴 r、θ、z）

    ε_r = (r − R1)/r，ε_θ = r/(r − R1)，ε_z = k²(r − R1)/r，μ = ε

    Raises:
        ShieldInteriorError: r ≤ R1
        DomainError: r > R2
    """
    r1 = expansion.shield_radius
    if r <= r1:
        raise ShieldInteriorError(f"cloak parameters are undefined for r={r} <= R1={r1}", radius=r)
    if r > expansion.device_radius:
        raise DomainError(
            f"cloak parameters are defined up to R2={expansion.device_radius}, got r={r}",
            value=r,
            domain=(r1, expansion.device_radius),
        )
    ratio = (r - r1) / r
    eps = np.array([ratio, 1.0 / ratio, expansion.stretch**2 * ratio])
    return MaterialTensors(epsilon=eps, mu=eps.copy())


def principal_indices(tensor: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    二维黎曼张量的主折射率与主轴

    主轴取特征向量，按与径向 r̂ 的对齐程度排序：第一轴最接近径向，
    第二轴最接近角向；各向同性的张量直接取 (r̂, θ̂)。z 方向折射率为 1。

    Args:
        tensor: (2, 2) 笛卡尔分量
        x: 所在位置

    Returns:
        ((3,) 主折射率, (3, 3) 标架)
    """
    diag, vecs = np.linalg.eigh(tensor)
    axes = vecs.T
    r = float(np.hypot(x[0], x[1]))
    if r > 0.0:
        _, radial, angular = polar_frame(np.asarray(x, dtype=float)[None, :])
        if abs(diag[1] - diag[0]) <= ISOTROPY_TOL * abs(diag[1]):
            axes = np.stack([radial[0], angular[0]])
            diag = np.full(2, 0.5 * (diag[0] + diag[1]))
        elif abs(axes[0] @ radial[0]) < abs(axes[1] @ radial[0]):
            axes = axes[::-1]
            diag = diag[::-1]
    frame = np.zeros((3, 3))
    frame[:2, :2] = axes
    frame[2, 2] = 1.0
    return np.array([np.sqrt(diag[0]), np.sqrt(diag[1]), 1.0]), frame


def direction_bins(count: int) -> np.ndarray:
    """分箱中心 k·2π/B，k = 0..B−1"""
    if count < 4:
        raise DomainError(f"need at least 4 direction bins, got {count}", value=count, domain=(4, np.inf))
    return np.arange(count) * (2.0 * np.pi / count)


def sample_material_field(
    metric: BlendedShieldMetric,
    grid: GridSpec,
    bins: int = 8,
    impedance: float = 1.0,
    r_guard: float | None = None,
) -> MaterialField:
    """
    在网格与方向分箱上导出材料场

    每个分箱取方向冻结的黎曼张量 g(x, θ_b) 求主折射率与材料参数，
    n 列为沿分箱中心方向的折射率。‖x‖ < r_guard 或 |‖x‖ − R1| < r_guard 的样本被裁掉。

    Args:
        metric: 非对称屏蔽度量
        grid: 采样网格
        bins: 方向分箱数，≥ 4
        impedance: 波阻抗 C
        r_guard: 奇异带半宽，默认 1e-3·R1

    Returns:
        MaterialField
    """
    thetas = direction_bins(bins)
    guard = 1e-3 * metric.shield_radius if r_guard is None else r_guard
    result = MaterialField()

    for x in grid.points():
        r = float(np.hypot(x[0], x[1]))
        if r < guard or abs(r - metric.shield_radius) < guard:
            result.clipped += bins
            continue
        for theta in thetas:
            direction = np.array([np.cos(theta), np.sin(theta)])
            try:
                n = refractive_index(metric, x, direction)
                n_principal, frame = principal_indices(metric.frozen_tensor(x, theta), x)
                materials = principal_indices_to_materials(n_principal, impedance, frame=frame)
            except FinsCloakError as exc:
                result.failed += 1
                logger.warning(f"material sample at x={x}, theta={theta:.4f} skipped: {exc}")
                continue
            result.samples.append(
                MaterialFieldSample(position=x.copy(), direction_bin=float(theta), index=n, materials=materials)
            )

    if result.clipped:
        logger.info(f"clipped {result.clipped} material sample(s) near the shield boundary or origin")
    return result

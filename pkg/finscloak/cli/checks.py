"""
内置不变量检查

validate 子命令依次运行：
- homogeneity：各度量场的一次齐次性
- pendry_reduction：笛卡尔点扩张拉回 → 主折射率 → 材料参数，与圆柱斗篷闭式解比较
- riemann_reduction：喷射与差分 Christoffel 符号给出的测地方程比较
- flat_straightness：平直空间中 RK4 积分的直线偏差
- non_reflection：导出材料场的阻抗匹配 √(μ/ε) = C

每项检查返回实测残差与容差，不抛异常。
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np

from finscloak.cli.config import ScenarioConfig
from finscloak.core.exceptions import FinsCloakError
from finscloak.core.finsler import check_homogeneity, fisheye_metric, flat_metric, randers_metric, riemann_metric
from finscloak.design.transforms import CartesianExpansionMap, pullback_metric
from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate
from finscloak.geodesic.spray import riemann_reduction_check
from finscloak.medium.materials import (
    pendry_parameters,
    principal_indices,
    principal_indices_to_materials,
    sample_material_field,
)
from finscloak.scenarios.shield import build_asymmetric_shield

logger = logging.getLogger(__name__)

HOMOGENEITY_DRAWS = 1000
HOMOGENEITY_TOL = 1e-10
BLENDED_HOMOGENEITY_TOL = 1e-8
PENDRY_RADII = 100
PENDRY_TOL = 1e-5
RIEMANN_POINTS = 100
RIEMANN_TOL = 1e-4
FLAT_STEP = 1e-2
FLAT_STEPS = 1000
FLAT_TOL = 1e-9
NON_REFLECTION_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """单项检查结果"""

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: residual={self.residual:.3e} tolerance={self.tolerance:.1e}"
        return f"{text} ({self.detail})" if self.detail else text


def _result(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = bool(np.isfinite(residual) and residual <= tolerance)
    result = CheckResult(name, passed, float(residual), tolerance, detail)
    logger.info(result.line())
    return result


def _guarded(name: str, tolerance: float, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except FinsCloakError as exc:
        return _result(name, float("inf"), tolerance, f"raised {exc}")


def _polar_tensor(x: np.ndarray) -> np.ndarray:
    return np.diag([1.0, x[0] ** 2])


def _polar_point(rng: np.random.Generator) -> np.ndarray:
    return np.array([rng.uniform(0.5, 3.0), rng.uniform(0.0, 2.0 * np.pi)])


def _conformal_tensor(x: np.ndarray) -> np.ndarray:
    n = 1.0 + 0.1 * x[0]
    return n * n * np.eye(2)


# ==================== 检查项 ====================


def homogeneity_check(config: ScenarioConfig, seed: int = 0) -> CheckResult:
    """每个度量场 1000 组随机 (x, y, λ)"""
    rng = np.random.default_rng(seed)
    analytic = [
        (flat_metric(2), 2, lambda: rng.uniform(-3.0, 3.0, 2)),
        (flat_metric(3), 3, lambda: rng.uniform(-3.0, 3.0, 3)),
        (riemann_metric(_polar_tensor, label="polar"), 2, lambda: _polar_point(rng)),
        (randers_metric([0.3, -0.2]), 2, lambda: rng.uniform(-3.0, 3.0, 2)),
        (fisheye_metric(), 2, lambda: rng.uniform(-3.0, 3.0, 2)),
    ]
    blended = build_asymmetric_shield(config.to_scenario())
    device = config.scenario.device_radius * 1.5

    def blended_point() -> np.ndarray:
        radius = rng.uniform(0.05, device)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        return radius * np.array([np.cos(angle), np.sin(angle)])

    worst_analytic = worst_blended = 0.0
    for field, dim, draw in [*analytic, (blended, 2, blended_point)]:
        worst = 0.0
        for _ in range(HOMOGENEITY_DRAWS):
            x = draw()
            y = rng.normal(size=dim)
            y *= rng.uniform(0.1, 10.0) / np.linalg.norm(y)
            lam = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            worst = max(worst, check_homogeneity(field, x, y, lam))
        if field is blended:
            worst_blended = worst
        else:
            worst_analytic = max(worst_analytic, worst)

    # 两类容差折算到同一个比值上报
    ratio = max(worst_analytic / HOMOGENEITY_TOL, worst_blended / BLENDED_HOMOGENEITY_TOL)
    detail = f"analytic={worst_analytic:.2e} blended={worst_blended:.2e}"
    return _result("homogeneity", ratio, 1.0, detail)


def pendry_reduction_check(config: ScenarioConfig) -> CheckResult:
    """100 个半径上的材料参数与闭式解的最大相对误差"""
    fd = config.fd_config()
    expansion = config.to_scenario().expansion
    cartesian = CartesianExpansionMap(expansion.shield_radius, expansion.device_radius)
    r1, r2 = expansion.shield_radius, expansion.device_radius
    radii = np.linspace(r1 + 1e-3 * r1, r2, PENDRY_RADII + 1)[1:]
    angles = np.linspace(0.0, 2.0 * np.pi, PENDRY_RADII, endpoint=False)

    worst = 0.0
    for r, phi in zip(radii, angles, strict=True):
        x = r * np.array([np.cos(phi), np.sin(phi)])
        tensor = pullback_metric(cartesian, x, fd).entries
        n_principal, _ = principal_indices(tensor, x)
        pipeline = principal_indices_to_materials(n_principal, config.scenario.impedance)
        oracle = pendry_parameters(expansion, float(r))
        error = np.max(np.abs(pipeline.epsilon - oracle.epsilon) / np.abs(oracle.epsilon))
        worst = max(worst, float(error))
    return _result("pendry_reduction", worst, PENDRY_TOL, f"{PENDRY_RADII} radii")


def riemann_reduction_suite(config: ScenarioConfig, seed: int = 1) -> CheckResult:
    """极坐标度量与共形度量各 100 个随机点"""
    rng = np.random.default_rng(seed)
    fd = config.fd_config()
    worst = 0.0
    for _ in range(RIEMANN_POINTS):
        x = _polar_point(rng)
        worst = max(worst, riemann_reduction_check(_polar_tensor, x, rng.normal(size=2), fd))
    for _ in range(RIEMANN_POINTS):
        x = rng.uniform(-2.0, 2.0, 2)
        worst = max(worst, riemann_reduction_check(_conformal_tensor, x, rng.normal(size=2), fd))
    return _result("riemann_reduction", worst, RIEMANN_TOL, f"{2 * RIEMANN_POINTS} points")


def flat_straightness_check(config: ScenarioConfig) -> CheckResult:
    """平直空间 t ∈ [0, 10] 的直线偏差与终点误差"""
    cfg = IntegratorConfig(step=FLAT_STEP, max_steps=FLAT_STEPS, fd=config.fd_config())
    traj = integrate(flat_metric(2), RayState(np.zeros(2), np.array([1.0, 0.0])), cfg)
    deviation = float(np.max(np.abs(traj.positions[:, 1])))
    endpoint = float(np.linalg.norm(traj.positions[-1] - np.array([FLAT_STEP * FLAT_STEPS, 0.0])))
    return _result("flat_straightness", max(deviation, endpoint), FLAT_TOL, traj.termination)


def non_reflection_check(config: ScenarioConfig) -> CheckResult:
    """材料场每个样本 |√(μ_i/ε_i) − C|"""
    metric = build_asymmetric_shield(config.to_scenario())
    result = sample_material_field(
        metric,
        config.grid(),
        bins=config.field.direction_bins,
        impedance=config.scenario.impedance,
        r_guard=config.field.r_guard,
    )
    worst = 0.0
    for sample in result.samples:
        worst = max(worst, float(np.max(np.abs(sample.materials.impedance() - config.scenario.impedance))))
    return _result("non_reflection", worst, NON_REFLECTION_TOL, f"{len(result)} sample(s)")


CHECKS: dict[str, tuple[float, Callable[[ScenarioConfig], CheckResult]]] = {
    "homogeneity": (1.0, homogeneity_check),
    "pendry_reduction": (PENDRY_TOL, pendry_reduction_check),
    "riemann_reduction": (RIEMANN_TOL, riemann_reduction_suite),
    "flat_straightness": (FLAT_TOL, flat_straightness_check),
    "non_reflection": (NON_REFLECTION_TOL, non_reflection_check),
}


def run_checks(config: ScenarioConfig, names: list[str] | None = None) -> list[CheckResult]:
    """
    运行检查

    Args:
        config: 场景配置（差分步长、几何与材料网格取自这里）
        names: 要运行的检查名，默认全部

    Returns:
        按 CHECKS 顺序排列的结果
    """
    selected = list(CHECKS) if names is None else names
    results = []
    for name in selected:
        tolerance, check = CHECKS[name]
        results.append(_guarded(name, tolerance, lambda check=check: check(config)))
    return results


def with_fd(config: ScenarioConfig, h_x: float | None = None, h_y: float | None = None) -> ScenarioConfig:
    """替换差分步长后的配置副本"""
    return replace(config, fd=replace(config.fd, h_x=h_x, h_y=h_y))

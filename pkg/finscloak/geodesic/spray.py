"""
测地喷射

以能量 E = F²/2 的 Euler–Lagrange 方程求加速度：
    g_ij(x, y)·a^j = ∂E/∂x^i − (∂²E/∂y^i∂x^k)·y^k
g 为 y 方向的差分 Hessian。混合导数项写成 ∂E/∂y 沿 y 方向的位置方向导数，
整套差分模板一次批量求值。
"""

import logging
from collections.abc import Callable

import numpy as np

from finscloak.core.base import DEFAULT_FD, FDConfig, as_direction, as_position, require_positive_definite
from finscloak.core.exceptions import EvaluationError, IllConditionedError
from finscloak.core.finsler import assemble_hessian, hessian_stencil, riemann_metric
from finscloak.core.interfaces import IMetricField

logger = logging.getLogger(__name__)

# g 的条件数上限
MAX_CONDITION = 1e12


def _spray_stencil(d: int, hx: float, hy: float, unit: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    喷射所需的全部 (Δx, Δy) 偏移

    三段：y 的 Hessian 模板；x 的 ±e_k；x 沿 ±ŷ 平移后 y 的 ±e_i。
    """
    eye = np.eye(d)
    hess = hessian_stencil(d) * hy
    dx = [np.zeros((hess.shape[0], d))]
    dy = [hess]

    grad_x = np.empty((2 * d, d))
    grad_x[0::2] = eye * hx
    grad_x[1::2] = -eye * hx
    dx.append(grad_x)
    dy.append(np.zeros((2 * d, d)))

    for sign in (1.0, -1.0):
        dx.append(np.broadcast_to(sign * hx * unit, (2 * d, d)))
        grad_y = np.empty((2 * d, d))
        grad_y[0::2] = eye * hy
        grad_y[1::2] = -eye * hy
        dy.append(grad_y)
    return np.concatenate(dx), np.concatenate(dy)


def momentum(field: IMetricField, x, y, cfg: FDConfig | None = None) -> np.ndarray:
    """
    共轭动量 p_i = ∂E/∂y^i，中心差分

    Returns:
        (d,) 动量
    """
    cfg = cfg or DEFAULT_FD
    xv = as_position(x, field.dim)
    yv = as_direction(y, field.dim)
    h = cfg.step_y(yv)
    offsets = np.concatenate([np.eye(field.dim), -np.eye(field.dim)]) * h
    energy = 0.5 * np.square(field.evaluate(np.broadcast_to(xv, offsets.shape), yv + offsets))
    return (energy[: field.dim] - energy[field.dim :]) / (2.0 * h)


def spray_acceleration(field: IMetricField, x, y, cfg: FDConfig | None = None) -> np.ndarray:
    """
    测地加速度 a，使 d²X/dt² = a 给出常速测地线

    Args:
        field: 度量场
        x: 位置
        y: 速度
        cfg: 差分配置

    Returns:
        (d,) 加速度

    Raises:
        PositiveDefinitenessError: 基本张量不正定
        IllConditionedError: 基本张量条件数超过 1e12
        EvaluationError: 度量求值失败
    """
    cfg = cfg or DEFAULT_FD
    d = field.dim
    xv = as_position(x, d)
    yv = as_direction(y, d)
    hx = cfg.step_x(xv)
    hy = cfg.step_y(yv)
    speed = float(np.linalg.norm(yv))

    dx, dy = _spray_stencil(d, hx, hy, yv / speed)
    with np.errstate(over="ignore", invalid="ignore"):
        energy = 0.5 * np.square(field.evaluate(xv + dx, yv + dy))

    m = 1 + 2 * d + 2 * d * (d - 1)
    hess, _ = assemble_hessian(energy[:m], d, hy)
    grad = energy[m : m + 2 * d]
    grad_x = (grad[0::2] - grad[1::2]) / (2.0 * hx)
    forward = energy[m + 2 * d : m + 4 * d]
    backward = energy[m + 4 * d : m + 6 * d]
    p_forward = (forward[0::2] - forward[1::2]) / (2.0 * hy)
    p_backward = (backward[0::2] - backward[1::2]) / (2.0 * hy)
    mixed = (p_forward - p_backward) / (2.0 * hx) * speed

    rhs = grad_x - mixed
    if not (np.all(np.isfinite(hess)) and np.all(np.isfinite(rhs))):
        raise EvaluationError("finite-difference overflow in geodesic spray", position=xv, direction=yv)
    require_positive_definite(hess, position=xv, direction=yv)
    condition = float(np.linalg.cond(hess))
    if condition > MAX_CONDITION:
        raise IllConditionedError(
            f"fundamental tensor condition number {condition:.3e} exceeds {MAX_CONDITION:.0e}",
            condition_number=condition,
        )
    return np.linalg.solve(hess, rhs)


def christoffel_symbols(g: Callable[[np.ndarray], np.ndarray], x, h: float | None = None) -> np.ndarray:
    """
    第二类 Christoffel 符号 Γ^i_jk，度量导数用中心差分

    Γ^i_jk = ½ g^{il}(∂_j g_lk + ∂_k g_lj − ∂_l g_jk)

    Args:
        g: 位置 → (d, d) 度量
        x: 位置
        h: 差分步长，默认 1e-5·max(1, ‖x‖)

    Returns:
        (d, d, d)，下标顺序 [i, j, k]
    """
    xv = np.asarray(x, dtype=float)
    d = xv.shape[0]
    step = DEFAULT_FD.step_x(xv) if h is None else h
    # dg[l, i, j] = ∂_l g_ij
    dg = np.empty((d, d, d))
    for axis in range(d):
        offset = np.zeros(d)
        offset[axis] = step
        dg[axis] = (np.asarray(g(xv + offset)) - np.asarray(g(xv - offset))) / (2.0 * step)
    inverse = np.linalg.inv(np.asarray(g(xv), dtype=float))
    # lower[l, j, k] = ∂_j g_lk + ∂_k g_lj − ∂_l g_jk
    lower = np.einsum("jlk->ljk", dg) + np.einsum("klj->ljk", dg) - dg
    return 0.5 * np.einsum("il,ljk->ijk", inverse, lower)


def riemann_reduction_check(
    g: Callable[[np.ndarray], np.ndarray],
    x,
    y,
    cfg: FDConfig | None = None,
) -> float:
    """
    黎曼退化检查 ‖a + Γ^i_jk y^j y^k‖

    把 g 包装成 Finsler 度量求喷射，与差分 Christoffel 符号给出的测地方程比较。
    """
    cfg = cfg or DEFAULT_FD
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    field = riemann_metric(g, dim=xv.shape[0])
    accel = spray_acceleration(field, xv, yv, cfg)
    gamma = christoffel_symbols(g, xv, cfg.step_x(xv))
    return float(np.linalg.norm(accel + np.einsum("ijk,j,k->i", gamma, yv, yv)))

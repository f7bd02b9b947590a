"""
轨迹分析

出射偏移、最近距离、折线距离与回溯误差。
"""

import logging

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from finscloak.core.exceptions import DomainError
from finscloak.geodesic.integrator import Trajectory

logger = logging.getLogger(__name__)


def _perpendicular(vector: np.ndarray, unit: np.ndarray) -> np.ndarray:
    return vector - (vector @ unit) * unit


def deviation_metrics(traj: Trajectory, point, direction) -> tuple[float, float]:
    """
    末样本相对参考直线的偏移

    Args:
        traj: 轨迹
        point: 参考直线上一点
        direction: 参考直线方向

    Returns:
        (末位置到直线的垂直距离, 末速度与参考方向的夹角)
    """
    if len(traj) == 0:
        raise DomainError("trajectory is empty")
    unit = np.asarray(direction, dtype=float)
    unit = unit / np.linalg.norm(unit)
    offset = traj.positions[-1] - np.asarray(point, dtype=float)
    lateral = float(np.linalg.norm(_perpendicular(offset, unit)))
    velocity = traj.velocities[-1]
    angle = float(np.arctan2(np.linalg.norm(_perpendicular(velocity, unit)), velocity @ unit))
    return lateral, angle


def min_distance_to_center(traj: Trajectory, center=None) -> float:
    """
    轨迹到中心点的最近距离

    先取采样点上的最小值，再在其相邻两段上用三次 Hermite 插值做有界一维极小化。
    """
    positions = traj.positions
    c = np.zeros(positions.shape[1]) if center is None else np.asarray(center, dtype=float)
    distances = np.linalg.norm(positions - c, axis=1)
    best = int(np.argmin(distances))
    dense = float(distances[best])
    if len(traj) < 2:
        return dense

    lo, hi = max(best - 1, 0), min(best + 1, len(traj) - 1)
    ts = traj.parameters[lo : hi + 1]
    spline = CubicHermiteSpline(ts, positions[lo : hi + 1], traj.velocities[lo : hi + 1], axis=0)
    refined = minimize_scalar(
        lambda s: float(np.linalg.norm(spline(s) - c)),
        bounds=(float(ts[0]), float(ts[-1])),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return min(dense, float(refined.fun))


def polyline_distance(points, polyline) -> np.ndarray:
    """
    每个点到折线的距离

    用 KD 树找最近的两个顶点，再在它们相邻的线段上取投影距离。

    Args:
        points: (M, d)
        polyline: (N, d) 折线顶点

    Returns:
        (M,) 距离
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    line = np.atleast_2d(np.asarray(polyline, dtype=float))
    if line.shape[0] == 1:
        return np.linalg.norm(pts - line[0], axis=1)

    tree = cKDTree(line)
    k = min(2, line.shape[0])
    _, nearest = tree.query(pts, k=k)
    nearest = np.asarray(nearest).reshape(pts.shape[0], k)

    result = np.full(pts.shape[0], np.inf)
    last = line.shape[0] - 1
    for offset in (-1, 0):
        for column in range(k):
            start = np.clip(nearest[:, column] + offset, 0, last - 1)
            a = line[start]
            b = line[start + 1]
            seg = b - a
            length_sq = np.einsum("ij,ij->i", seg, seg)
            safe = np.where(length_sq > 0.0, length_sq, 1.0)
            s = np.clip(np.einsum("ij,ij->i", pts - a, seg) / safe, 0.0, 1.0)
            s = np.where(length_sq > 0.0, s, 0.0)
            closest = a + s[:, None] * seg
            result = np.minimum(result, np.linalg.norm(pts - closest, axis=1))
    return result


def retrace_miss(forward: Trajectory, backward: Trajectory) -> float:
    """
    两条轨迹的对称 Hausdorff 距离

    用于可逆性检查：反向积分的路径与正向路径重合时为零。
    """
    there = polyline_distance(forward.positions, backward.positions)
    back = polyline_distance(backward.positions, forward.positions)
    return float(max(np.max(there), np.max(back)))

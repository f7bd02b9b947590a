"""
轨迹、材料场、报告与图的文本格式

- 轨迹 CSV：ray_id,t,x,y,vx,vy,F_value，按光线分组，组内 t 严格递增
- 材料场 CSV：x,y,theta_bin,n,eps_r,eps_theta,eps_z,mu_r,mu_theta,mu_z，末行为 "# clipped=N failed=M"
- 报告 JSON：键排序、两格缩进
- SVG：设备圆 R2、屏蔽圆 R1、每条光线一条折线，左右行分色

所有输出对相同输入逐字节一致。
"""

import io
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from finscloak.core.exceptions import TrajectoryFormatError
from finscloak.geodesic.integrator import Trajectory
from finscloak.medium.materials import MaterialField

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["ray_id", "t", "x", "y", "vx", "vy", "F_value"]
FIELD_COLUMNS = ["x", "y", "theta_bin", "n", "eps_r", "eps_theta", "eps_z", "mu_r", "mu_theta", "mu_z"]

# 17 位有效数字保证 float64 往返无损
FLOAT_FORMAT = "%.17g"

LEFTWARD_COLOR = "#1f77b4"
RIGHTWARD_COLOR = "#d62728"
MAX_POLYLINE_POINTS = 2000
SVG_SIZE = 800


@dataclass(frozen=True)
class TrajectoryRecords:
    """从轨迹 CSV 读回的一条光线"""

    ray_id: int
    parameters: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    f_values: np.ndarray

    def __len__(self) -> int:
        return len(self.parameters)


def _write_text(path: str | Path, text: str) -> Path:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8", newline="\n")
    return target


# ==================== 轨迹 ====================


def trajectories_to_frame(trajectories: list[Trajectory]) -> pd.DataFrame:
    frames = []
    for traj in trajectories:
        frames.append(
            pd.DataFrame(
                {
                    "ray_id": np.full(len(traj), traj.ray_id, dtype=np.int64),
                    "t": traj.parameters,
                    "x": traj.positions[:, 0],
                    "y": traj.positions[:, 1],
                    "vx": traj.velocities[:, 0],
                    "vy": traj.velocities[:, 1],
                    "F_value": traj.f_values,
                }
            )
        )
    if not frames:
        return pd.DataFrame({column: pd.Series(dtype=float) for column in TRAJECTORY_COLUMNS})
    return pd.concat(frames, ignore_index=True)[TRAJECTORY_COLUMNS]


def format_trajectories(trajectories: list[Trajectory]) -> str:
    return trajectories_to_frame(trajectories).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_trajectories(path: str | Path, trajectories: list[Trajectory]) -> Path:
    """写出轨迹 CSV"""
    target = _write_text(path, format_trajectories(trajectories))
    logger.info(f"wrote {len(trajectories)} trajectory(ies) to {target}")
    return target


def _parser_line(exc: Exception) -> int | None:
    match = re.search(r"line (\d+)", str(exc))
    return int(match.group(1)) if match else None


def parse_trajectories(text: str, path: str | Path = "<memory>") -> list[TrajectoryRecords]:
    """
    解析轨迹 CSV

    Raises:
        TrajectoryFormatError: 表头、字段、t 的顺序或同一 ray_id 的行不连续；line 为 1 起的行号
    """
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise TrajectoryFormatError("trajectory file is empty", path=str(path), line=1) from exc
    except pd.errors.ParserError as exc:
        raise TrajectoryFormatError(f"malformed row: {exc}", path=str(path), line=_parser_line(exc)) from exc

    if list(frame.columns) != TRAJECTORY_COLUMNS:
        raise TrajectoryFormatError(
            f"expected header {','.join(TRAJECTORY_COLUMNS)}, got {','.join(map(str, frame.columns))}",
            path=str(path),
            line=1,
        )

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    raw_nan = frame.apply(lambda column: column.str.strip().str.lower() == "nan")
    bad = numeric.isna() & ~raw_nan
    if bad.to_numpy().any():
        row = int(np.argmax(bad.to_numpy().any(axis=1)))
        column = TRAJECTORY_COLUMNS[int(np.argmax(bad.to_numpy()[row]))]
        raise TrajectoryFormatError(
            f"column {column} is not a number: {frame.iloc[row][column]!r}", path=str(path), line=row + 2
        )

    # 逐字段按 Python float 解析，保证 %.17g 往返无损
    numeric = frame.astype(float)
    ids = numeric["ray_id"].to_numpy()
    if np.any(ids != np.round(ids)):
        row = int(np.argmax(ids != np.round(ids)))
        raise TrajectoryFormatError("ray_id must be an integer", path=str(path), line=row + 2)

    # 每条光线的行必须连续
    starts = np.flatnonzero(np.r_[True, ids[1:] != ids[:-1]]) if len(ids) else np.array([], dtype=int)
    _, first_run = np.unique(ids[starts], return_index=True)
    if len(first_run) < len(starts):
        row = int(starts[np.setdiff1d(np.arange(len(starts)), first_run)[0]])
        raise TrajectoryFormatError(f"rows of ray {int(ids[row])} are not contiguous", path=str(path), line=row + 2)

    records: list[TrajectoryRecords] = []
    for ray_id, rows in numeric.groupby("ray_id", sort=False):
        ts = rows["t"].to_numpy()
        steps = np.diff(ts)
        if np.any(~(steps > 0.0)):
            offset = int(np.argmax(~(steps > 0.0))) + 1
            raise TrajectoryFormatError(
                f"t is not strictly increasing within ray {int(ray_id)}",
                path=str(path),
                line=int(rows.index[offset]) + 2,
            )
        records.append(
            TrajectoryRecords(
                ray_id=int(ray_id),
                parameters=ts,
                positions=rows[["x", "y"]].to_numpy(),
                velocities=rows[["vx", "vy"]].to_numpy(),
                f_values=rows["F_value"].to_numpy(),
            )
        )
    return records


def read_trajectories(path: str | Path) -> list[TrajectoryRecords]:
    """读取轨迹 CSV；文件不可读时抛 OSError"""
    source = Path(path)
    return parse_trajectories(source.read_text(encoding="utf-8"), path=source)


# ==================== 材料场 ====================


def material_field_to_frame(result: MaterialField) -> pd.DataFrame:
    rows = [
        [
            sample.position[0],
            sample.position[1],
            sample.direction_bin,
            sample.index,
            *sample.materials.epsilon,
            *sample.materials.mu,
        ]
        for sample in result.samples
    ]
    return pd.DataFrame(rows, columns=FIELD_COLUMNS, dtype=float)


def format_material_field(result: MaterialField) -> str:
    body = material_field_to_frame(result).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return f"{body}# clipped={result.clipped} failed={result.failed}\n"


def write_material_field(path: str | Path, result: MaterialField) -> Path:
    """写出材料场 CSV，末行记录被裁掉与失败的样本数"""
    target = _write_text(path, format_material_field(result))
    logger.info(f"wrote {len(result)} material sample(s) to {target}")
    return target


def read_material_field(path: str | Path) -> tuple[pd.DataFrame, dict[str, int]]:
    """读回材料场 CSV 与末行计数"""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    footer = {}
    if lines and lines[-1].startswith("#"):
        footer = {key: int(value) for key, value in re.findall(r"(\w+)=(\d+)", lines[-1])}
        lines = lines[:-1]
    frame = pd.read_csv(io.StringIO("\n".join(lines) + "\n"))
    return frame, footer


# ==================== 报告 ====================


def format_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(path: str | Path, report: dict) -> Path:
    target = _write_text(path, format_report(report))
    logger.info(f"wrote report to {target}")
    return target


# ==================== SVG ====================


def decimate(points: np.ndarray, limit: int = MAX_POLYLINE_POINTS) -> np.ndarray:
    """等间隔抽稀到不超过 limit 个点，保留首尾"""
    if len(points) <= limit:
        return points
    keep = np.unique(np.round(np.linspace(0, len(points) - 1, limit)).astype(int))
    return points[keep]


def render_svg(
    rays: list[TrajectoryRecords],
    shield_radius: float,
    device_radius: float,
    extent: float | None = None,
    size: int = SVG_SIZE,
) -> str:
    """
    光线图

    视窗为 [−extent, extent]²，默认取所有点与 R2 的最大绝对坐标。
    颜色由初速度 vx 的符号决定：vx < 0 为左行。

    Args:
        rays: 轨迹
        shield_radius: R1
        device_radius: R2
        extent: 视窗半宽
        size: 画布像素

    Returns:
        SVG 文本
    """
    if extent is None:
        extent = device_radius
        for ray in rays:
            if len(ray):
                extent = max(extent, float(np.max(np.abs(ray.positions))))
        extent *= 1.05
    scale = size / (2.0 * extent)

    def to_canvas(points: np.ndarray) -> np.ndarray:
        return np.column_stack([(points[:, 0] + extent) * scale, (extent - points[:, 1]) * scale])

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    center = extent * scale
    for name, radius, color in (("device", device_radius, "#7f7f7f"), ("shield", shield_radius, "#000000")):
        lines.append(
            f'<circle id="{name}" cx="{center:.4f}" cy="{center:.4f}" r="{radius * scale:.4f}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
    for ray in rays:
        if len(ray) == 0:
            continue
        color = LEFTWARD_COLOR if ray.velocities[0, 0] < 0.0 else RIGHTWARD_COLOR
        canvas = to_canvas(decimate(ray.positions))
        coords = " ".join(f"{px:.4f},{py:.4f}" for px, py in canvas)
        lines.append(
            f'<polyline data-ray="{ray.ray_id}" points="{coords}" fill="none" stroke="{color}" stroke-width="1"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path: str | Path, svg: str) -> Path:
    target = _write_text(path, svg)
    logger.info(f"wrote plot to {target}")
    return target


def parse_svg_polylines(svg: str, size: int = SVG_SIZE) -> dict[int, np.ndarray]:
    """读回 SVG 折线的画布坐标，按 data-ray 编号"""
    result = {}
    for ray_id, coords in re.findall(r'<polyline data-ray="(-?\d+)" points="([^"]*)"', svg):
        pairs = [pair.split(",") for pair in coords.split()]
        result[int(ray_id)] = np.array(pairs, dtype=float).reshape(-1, 2)
    return result

"""
FinsCloak 核心接口定义

定义了 Finsler 度量场与坐标映射的抽象接口。
设计、介质、测地线各模块只依赖这里的接口，不关心具体度量从何而来。
"""

from abc import ABC, abstractmethod

import numpy as np

# 外侧界面的舍入容差（相对）
EDGE_RTOL = 1e-12


def region_index(interfaces, r):
    """
    半径所属的分片编号

    第一个界面归外侧分片，其余界面归内侧分片，
    因此 R1 ≤ r ≤ R2 的闭环带整体落在分片 1。外侧界面带 EDGE_RTOL 的舍入容差。

    Args:
        interfaces: 升序界面半径
        r: 标量或数组半径

    Returns:
        与 r 同形状的整数编号
    """
    radii = np.asarray(interfaces, dtype=float)
    inner = np.searchsorted(radii[:1], r, side="right")
    outer = np.searchsorted(radii[1:] * (1.0 + EDGE_RTOL), r, side="left")
    return inner + outer


class IMetricField(ABC):
    """
    Finsler 度量场抽象接口

    F(x, y)：位置 x 与方向 y 上的正值函数，对 y 正一次齐次。
    求值接口是批量的：x、y 形状为 (..., d)，返回形状 (...,)。
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """
        空间维数

        Returns:
            2 或 3
        """
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        """
        度量场名称

        Returns:
            便于日志与报告识别的短名称
        """
        pass

    @abstractmethod
    def evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        计算 F(x, y)

        Args:
            x: 位置，形状 (..., d)
            y: 方向，形状 (..., d)，欧氏范数不小于 Y_MIN

        Returns:
            F 值，形状 (...,)
        """
        pass

    @property
    def interfaces(self) -> tuple[float, ...]:
        """
        间断界面半径

        分片光滑的度量场在以原点为心的这些球面上允许跳变，按升序排列。
        光滑度量场返回空元组。
        """
        return ()

    def region_of(self, x: np.ndarray) -> int:
        """
        位置所属的分片编号

        Args:
            x: 单个位置，形状 (d,)

        Returns:
            按 region_index 规则得到的编号
        """
        return int(region_index(self.interfaces, float(np.linalg.norm(x))))

    def restrict(self, region: int) -> "IMetricField":
        """
        取某一分片的光滑延拓

        积分器在一个积分步内只使用同一分片的光滑延拓，避免差分模板跨越界面。

        Args:
            region: 分片编号

        Returns:
            在整个空间上按该分片公式求值的度量场
        """
        return self


class ICoordinateMap(ABC):
    """
    坐标映射抽象接口

    把物理空间坐标映射到虚拟（电磁）空间坐标，并给出虚拟空间的基底度量，
    拉回度量 g̃ = Jᵀ G J 由这两者决定。
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """空间维数"""
        pass

    @abstractmethod
    def forward(self, x: np.ndarray) -> np.ndarray:
        """
        物理坐标 → 虚拟坐标

        Args:
            x: 物理空间坐标，形状 (d,)

        Returns:
            虚拟空间坐标，形状 (d,)
        """
        pass

    @abstractmethod
    def base_metric(self, x_virtual: np.ndarray) -> np.ndarray:
        """
        虚拟空间在映射像点处的基底度量

        Args:
            x_virtual: 虚拟空间坐标

        Returns:
            (d, d) 对称正定矩阵
        """
        pass

    def jacobian(self, x: np.ndarray) -> np.ndarray | None:
        """
        解析雅可比矩阵 ∂x'/∂x

        没有解析形式时返回 None，由调用方改用中心差分。
        """
        return None

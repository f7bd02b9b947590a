"""
FinsCloak 异常定义

定义了库专用的异常类。所有异常都携带触发时的上下文（位置、方向、特征值等），
便于上层（积分器、采样器、命令行）决定是终止、跳过还是上报。
"""

from typing import Any


class FinsCloakError(Exception):
    """FinsCloak 基础异常类"""

    def __init__(self, message: str = "", code: str = ""):
        self.message = message
        self.code = code
        super().__init__(self.message)

    def __str__(self):
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message


class InvalidConfigError(FinsCloakError):
    """
    配置无效异常

    当场景配置验证失败时抛出，errors 记录每个出错字段的原因。
    """

    def __init__(self, message: str = "", errors: dict | None = None):
        self.errors = errors or {}
        super().__init__(message, code="INVALID_CONFIG")


class EvaluationError(FinsCloakError):
    """
    度量求值异常

    当 F(x, y) 结果非有限、方向向量过短或有限差分溢出时抛出。
    """

    def __init__(self, message: str = "", position: Any = None, direction: Any = None):
        self.position = position
        self.direction = direction
        super().__init__(message, code="EVALUATION_ERROR")


class PositiveDefinitenessError(FinsCloakError):
    """
    正定性异常

    基本张量 g_ij 不正定（度量失去强凸性）时抛出。
    """

    def __init__(self, message: str = "", position: Any = None, direction: Any = None, eigenvalues: Any = None):
        self.position = position
        self.direction = direction
        self.eigenvalues = eigenvalues
        super().__init__(message, code="NOT_POSITIVE_DEFINITE")


class IllConditionedError(FinsCloakError):
    """
    线性方程病态异常

    求解测地加速度时 g 的条件数超过阈值。
    """

    def __init__(self, message: str = "", condition_number: float = 0.0):
        self.condition_number = condition_number
        super().__init__(message, code="ILL_CONDITIONED")


class SingularMapError(FinsCloakError):
    """
    坐标映射奇异异常

    坐标变换的雅可比矩阵奇异或非有限时抛出。
    """

    def __init__(self, message: str = "", position: Any = None):
        self.position = position
        super().__init__(message, code="SINGULAR_MAP")


class ShieldInteriorError(FinsCloakError):
    """
    屏蔽区内部异常

    在屏蔽半径 R1 以内请求隐身斗篷（L1）度量时抛出，该区域度量无定义。
    """

    def __init__(self, message: str = "", position: Any = None, radius: float = 0.0):
        self.position = position
        self.radius = radius
        super().__init__(message, code="SHIELD_INTERIOR")


class DomainError(FinsCloakError):
    """
    定义域异常

    参数超出函数的定义域（例如 cosh 变换的角度范围）时抛出。
    """

    def __init__(self, message: str = "", value: Any = None, domain: tuple | None = None):
        self.value = value
        self.domain = domain
        super().__init__(message, code="DOMAIN_ERROR")


class MaterialSolveError(FinsCloakError):
    """
    材料参数求解异常

    主折射率组无法反解出正的介电常数 / 磁导率时抛出。
    """

    def __init__(self, message: str = "", indices: Any = None):
        self.indices = indices
        super().__init__(message, code="MATERIAL_SOLVE_ERROR")


class TrajectoryFormatError(FinsCloakError):
    """
    轨迹文件格式异常

    解析轨迹 CSV 时遇到格式错误的行，line 为 1 起始的文件行号（含表头）。
    """

    def __init__(self, message: str = "", path: str = "", line: int = 0):
        self.path = path
        self.line = line
        super().__init__(message, code="TRAJECTORY_FORMAT_ERROR")

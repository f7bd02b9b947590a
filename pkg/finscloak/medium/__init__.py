"""
介质

由设计好的度量导出方向相关的折射率与阻抗匹配的 ε、μ。
"""

from finscloak.medium.index import RefractiveIndexField, cylindrical_index, refractive_index
from finscloak.medium.materials import (
    GridSpec,
    MaterialField,
    MaterialFieldSample,
    MaterialTensors,
    impedance_match,
    pendry_parameters,
    principal_indices_to_materials,
    sample_material_field,
)

__all__ = [
    "RefractiveIndexField",
    "refractive_index",
    "cylindrical_index",
    "MaterialTensors",
    "MaterialFieldSample",
    "MaterialField",
    "GridSpec",
    "impedance_match",
    "principal_indices_to_materials",
    "pendry_parameters",
    "sample_material_field",
]

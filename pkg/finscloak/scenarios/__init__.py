"""非对称屏蔽实验"""

from finscloak.scenarios.shield import (
    HEADINGS,
    LEFTWARD,
    RIGHTWARD,
    RayFan,
    RayReport,
    ShieldReport,
    ShieldScenario,
    analyze_shielding,
    build_asymmetric_shield,
    trace_fan,
    trace_scenario,
)

__all__ = [
    "LEFTWARD",
    "RIGHTWARD",
    "HEADINGS",
    "RayFan",
    "ShieldScenario",
    "RayReport",
    "ShieldReport",
    "build_asymmetric_shield",
    "trace_fan",
    "trace_scenario",
    "analyze_shielding",
]

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# 属性测试固定随机种子，保证每次运行结果一致
settings.register_profile(
    "finscloak",
    derandomize=True,
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("finscloak")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)

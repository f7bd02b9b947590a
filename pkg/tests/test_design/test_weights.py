"""
weights 单元测试

方向角约定、阶跃 / 平滑剖面的取值、平台精确性与 C¹ 连续性。
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st


class TestAngleOf:
    @pytest.mark.parametrize(
        ("y", "expected"),
        [((1.0, 0.0), 0.0), ((-1.0, 0.0), np.pi), ((0.0, -1.0), 1.5 * np.pi), ((0.0, 2.0), 0.5 * np.pi)],
    )
    def test_axes(self, y, expected):
        from finscloak.design.weights import angle_of

        assert angle_of(y) == pytest.approx(expected, abs=1e-15)

    def test_tiny_negative_wraps_to_zero(self):
        """略低于 +x 轴的方向不会得到 2π"""
        from finscloak.design.weights import angle_of

        theta = angle_of((1.0, -1e-20))
        assert 0.0 <= theta < 2.0 * np.pi

    def test_batched(self):
        from finscloak.design.weights import angle_of

        np.testing.assert_allclose(angle_of(np.array([[1.0, 1.0], [-1.0, -1.0]])), [0.25 * np.pi, 1.25 * np.pi])


class TestStepProfile:
    """阶跃剖面"""

    @pytest.mark.parametrize(
        ("theta", "expected"),
        [(np.pi, 0.0), (0.0, 1.0), (0.5 * np.pi, 0.0), (1.5 * np.pi, 1.0), (1.0, 1.0), (6.0, 1.0)],
    )
    def test_values(self, theta, expected):
        from finscloak.design.weights import DirectionWeight, direction_weight

        assert direction_weight(DirectionWeight("step"), theta) == expected

    def test_plateau(self):
        from finscloak.design.weights import DirectionWeight

        assert DirectionWeight("step").zero_plateau() == (0.5 * np.pi, 1.5 * np.pi)


class TestSmoothProfile:
    """平滑剖面"""

    def test_plateaus_exact(self):
        """过渡带以外与阶跃剖面逐位相同"""
        from finscloak.design.weights import DirectionWeight

        smooth = DirectionWeight("smooth", 0.2)
        step = DirectionWeight("step")
        thetas = np.concatenate(
            [np.linspace(0.0, 0.5 * np.pi - 0.11, 50), np.linspace(0.5 * np.pi + 0.11, 1.5 * np.pi - 0.11, 50)]
        )
        np.testing.assert_array_equal(smooth(thetas), step(thetas))
        assert smooth(np.pi) == 0.0
        assert smooth(0.0) == 1.0

    def test_midpoints(self):
        from finscloak.design.weights import DirectionWeight

        smooth = DirectionWeight("smooth", 0.2)
        assert smooth(0.5 * np.pi) == pytest.approx(0.5)
        assert smooth(1.5 * np.pi) == pytest.approx(0.5)

    def test_c1_continuity(self):
        """有限差分导数在过渡带边缘连续且趋于零"""
        from finscloak.design.weights import DirectionWeight

        smooth = DirectionWeight("smooth", 0.2)
        h = 1e-7
        for edge in (0.5 * np.pi - 0.1, 0.5 * np.pi + 0.1, 1.5 * np.pi - 0.1, 1.5 * np.pi + 0.1):
            slope = (smooth(edge + h) - smooth(edge - h)) / (2.0 * h)
            assert abs(slope) < 1e-4

    @given(st.floats(min_value=0.0, max_value=2.0 * np.pi, exclude_max=True))
    def test_bounded(self, theta):
        from finscloak.design.weights import DirectionWeight

        assert 0.0 <= DirectionWeight("smooth", 0.3)(theta) <= 1.0

    def test_plateau_interval(self):
        from finscloak.design.weights import DirectionWeight

        assert DirectionWeight("smooth", 0.2).zero_plateau() == pytest.approx((0.5 * np.pi + 0.1, 1.5 * np.pi - 0.1))


class TestConstantProfiles:
    def test_zero_and_one(self):
        from finscloak.design.weights import create_direction_weight

        thetas = np.linspace(0.0, 6.0, 7)
        np.testing.assert_array_equal(create_direction_weight("zero")(thetas), 0.0)
        np.testing.assert_array_equal(create_direction_weight("one")(thetas), 1.0)
        assert create_direction_weight("one").zero_plateau() is None

    @pytest.mark.parametrize("kwargs", [{"profile": "cosine"}, {"transition_width": 0.0}, {"transition_width": 2.0}])
    def test_invalid(self, kwargs):
        from finscloak.core.exceptions import DomainError
        from finscloak.design.weights import DirectionWeight

        with pytest.raises(DomainError):
            DirectionWeight(**kwargs)

"""
integrator 单元测试

平直直线、终止原因、坐标无关性、鱼眼透镜共轭点与反向积分。
"""

import numpy as np
import pytest


def polar_tensor(x):
    return np.diag([1.0, x[0] ** 2])


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs", [{"step": 0.0}, {"max_steps": 0}, {"renorm_every": 0}, {"method": "euler"}]
    )
    def test_invalid(self, kwargs):
        from finscloak.core.exceptions import DomainError
        from finscloak.geodesic.integrator import IntegratorConfig

        with pytest.raises(DomainError):
            IntegratorConfig(**kwargs)

    def test_box(self):
        from finscloak.geodesic.integrator import Box

        box = Box.square(2.0)
        assert box.contains(np.array([1.9, -2.0]))
        assert not box.contains(np.array([2.1, 0.0]))


class TestFlatIntegration:
    def test_straight_line(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.geodesic.integrator import MAX_STEPS, IntegratorConfig, RayState, integrate

        traj = integrate(flat_metric(2), RayState((0.0, 0.0), (1.0, 0.0)), IntegratorConfig(step=1e-2, max_steps=1000))
        assert traj.termination == MAX_STEPS
        assert len(traj) == 1001
        assert np.max(np.abs(traj.positions[:, 1])) <= 1e-9
        np.testing.assert_allclose(traj.positions[-1], [10.0, 0.0], atol=1e-9)
        assert np.all(np.diff(traj.parameters) > 0.0)
        np.testing.assert_allclose(traj.f_values, 1.0)

    def test_unit_speed_normalisation(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        start = RayState((0.0, 0.0), (3.0, 4.0))
        unit = integrate(flat_metric(2), start, IntegratorConfig(step=0.1, max_steps=5))
        kept = integrate(flat_metric(2), start, IntegratorConfig(step=0.1, max_steps=5, unit_speed=False))
        np.testing.assert_allclose(unit.velocities[0], [0.6, 0.8])
        np.testing.assert_allclose(kept.f_values, 5.0)

    def test_left_domain(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.geodesic.integrator import LEFT_DOMAIN, Box, IntegratorConfig, RayState, integrate

        cfg = IntegratorConfig(step=0.03, max_steps=10000, domain=Box.square(1.0))
        traj = integrate(flat_metric(2), RayState((0.0, 0.0), (1.0, 0.0)), cfg)
        assert traj.termination == LEFT_DOMAIN
        assert traj.positions[-1, 0] > 1.0
        assert traj.positions[-2, 0] < 1.0

    def test_parameter_offset(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        start = RayState((0.0, 0.0), (1.0, 0.0), parameter=5.0)
        traj = integrate(flat_metric(2), start, IntegratorConfig(step=0.5, max_steps=2))
        np.testing.assert_allclose(traj.parameters, [5.0, 5.5, 6.0])


class TestTerminations:
    def test_evaluation_failure_at_start(self):
        from finscloak.design.cloak import cloak_metric
        from finscloak.geodesic.integrator import EVALUATION_FAILURE, RayState, integrate

        traj = integrate(cloak_metric(), RayState((0.2, 0.0), (1.0, 0.0)))
        assert traj.termination == EVALUATION_FAILURE
        assert len(traj) == 1
        assert "shield" in traj.message

    def test_convexity_failure(self):
        from finscloak.core.finsler import FunctionMetric
        from finscloak.geodesic.integrator import CONVEXITY_FAILURE, IntegratorConfig, RayState, integrate

        field = FunctionMetric(lambda x, y: np.sqrt(np.abs(y[0] ** 2 - 0.5 * y[1] ** 2)))
        traj = integrate(field, RayState((1.0, 0.0), (1.0, 0.1)), IntegratorConfig(step=0.01, max_steps=10))
        assert traj.termination == CONVEXITY_FAILURE
        assert len(traj) == 1
        assert traj.message

    def test_reasons_are_known(self):
        from finscloak.geodesic.integrator import TERMINATIONS

        assert set(TERMINATIONS) == {"left_domain", "max_steps", "convexity_failure", "evaluation_failure"}


class TestChartInvariance:
    def test_polar_chart_traces_straight_line(self):
        """极坐标下的平直度量：从 (1, 1) 沿 +x 走 t = 2 到达 (3, 1)"""
        from finscloak.core.finsler import riemann_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        start = RayState((np.sqrt(2.0), 0.25 * np.pi), (np.sqrt(0.5), -0.5))
        traj = integrate(riemann_metric(polar_tensor), start, IntegratorConfig(step=1e-2, max_steps=200))
        r, theta = traj.positions[-1]
        np.testing.assert_allclose([r * np.cos(theta), r * np.sin(theta)], [3.0, 1.0], atol=1e-5)


class TestFisheye:
    @pytest.mark.slow
    @pytest.mark.parametrize("heading", [(2 * k + 1) * np.pi / 8 for k in range(8)])
    def test_conjugate_point(self, heading):
        """单位鱼眼透镜：从 (0.5, 0) 出发的光线在光程 π 处汇聚到 (−2, 0)"""
        from finscloak.core.finsler import fisheye_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        cfg = IntegratorConfig(step=np.pi / 2000, max_steps=2000)
        start = RayState((0.5, 0.0), (np.cos(heading), np.sin(heading)))
        traj = integrate(fisheye_metric(), start, cfg)
        np.testing.assert_allclose(traj.positions[-1], [-2.0, 0.0], atol=1e-3)

    @pytest.mark.slow
    def test_fourth_order(self):
        """步长减半，终点误差约缩小 16 倍"""
        from finscloak.core.finsler import fisheye_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        errors = []
        for steps in (64, 128):
            cfg = IntegratorConfig(step=np.pi / steps, max_steps=steps, renorm_every=10**6)
            traj = integrate(fisheye_metric(), RayState((0.5, 0.0), (0.0, 1.0)), cfg)
            errors.append(float(np.linalg.norm(traj.positions[-1] - np.array([-2.0, 0.0]))))
        assert 12.0 <= errors[0] / errors[1] <= 20.0

    def test_speed_conserved(self):
        """沿积分轨迹 F(x, v) 保持为 1"""
        from finscloak.core.finsler import fisheye_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        traj = integrate(fisheye_metric(), RayState((0.5, 0.0), (0.0, 1.0)), IntegratorConfig(step=0.01, max_steps=300))
        np.testing.assert_allclose(traj.f_values, 1.0, atol=1e-8)
        np.testing.assert_allclose(traj.f_values[::16], 1.0, atol=1e-12)

    def test_speed_does_not_change_path(self):
        """初速 F = 2、步长减半，逐步与单位速度的轨迹重合"""
        from finscloak.core.finsler import fisheye_metric
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate

        field = fisheye_metric()
        start = RayState((0.5, 0.0), (0.0, 1.0))
        unit = integrate(field, start, IntegratorConfig(step=0.01, max_steps=150))
        fast_start = RayState((0.5, 0.0), (0.0, 2.0 / float(field.evaluate(start.position, start.velocity))))
        fast = integrate(field, fast_start, IntegratorConfig(step=0.005, max_steps=150, unit_speed=False))
        np.testing.assert_allclose(fast.f_values, 2.0, rtol=1e-6)
        np.testing.assert_allclose(fast.positions, unit.positions, atol=1e-6)


class TestReverse:
    def test_flat_retrace(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.geodesic.analysis import retrace_miss
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate, reverse_trajectory

        cfg = IntegratorConfig(step=0.01, max_steps=200)
        forward = integrate(flat_metric(2), RayState((0.0, 0.0), (0.6, 0.8)), cfg)
        backward = reverse_trajectory(flat_metric(2), forward, cfg)
        assert len(backward) == len(forward)
        np.testing.assert_allclose(backward.positions[-1], [0.0, 0.0], atol=1e-9)
        assert retrace_miss(forward, backward) <= 1e-9

    def test_conformal_retrace(self):
        """对称（黎曼）度量可逆"""
        from finscloak.core.finsler import fisheye_metric
        from finscloak.geodesic.analysis import retrace_miss
        from finscloak.geodesic.integrator import IntegratorConfig, RayState, integrate, reverse_trajectory

        cfg = IntegratorConfig(step=0.02, max_steps=100)
        forward = integrate(fisheye_metric(), RayState((-1.0, 0.3), (1.0, 0.0)), cfg)
        backward = reverse_trajectory(fisheye_metric(), forward, cfg)
        assert retrace_miss(forward, backward) <= 1e-6

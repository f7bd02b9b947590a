"""
finsler 单元测试

覆盖度量求值、有限差分基本张量、齐次性残差与路径长度，
以及平直 / 黎曼 / 共形 / Randers / 鱼眼度量的解析结果。
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
scales = st.floats(min_value=0.1, max_value=10.0)


def polar(x):
    return np.diag([1.0, x[0] ** 2])


class TestEvalMetric:
    """eval_metric"""

    def test_flat_norm(self):
        from finscloak.core.finsler import eval_metric, flat_metric

        assert eval_metric(flat_metric(2), (0.0, 0.0), (3.0, 4.0)) == pytest.approx(5.0, abs=1e-15)

    def test_flat_scaling_exact(self):
        """y 加倍，F 精确加倍"""
        from finscloak.core.finsler import eval_metric, flat_metric

        field = flat_metric(2)
        assert eval_metric(field, (0.0, 0.0), (2.0, 0.0)) == 2.0 * eval_metric(field, (0.0, 0.0), (1.0, 0.0))

    def test_polar_riemann(self):
        from finscloak.core.finsler import eval_metric, riemann_metric

        assert eval_metric(riemann_metric(polar), (2.0, 0.0), (0.0, 1.0)) == pytest.approx(2.0)
        assert eval_metric(riemann_metric(polar), (3.0, 0.3), (0.0, 1.0)) == pytest.approx(3.0)

    def test_flat_3d(self):
        from finscloak.core.finsler import eval_metric, flat_metric

        assert eval_metric(flat_metric(3), (0.0, 0.0, 0.0), (1.0, 2.0, 2.0)) == pytest.approx(3.0)

    def test_short_direction_rejected(self):
        from finscloak.core.exceptions import EvaluationError
        from finscloak.core.finsler import eval_metric, flat_metric

        with pytest.raises(EvaluationError) as info:
            eval_metric(flat_metric(2), (1.0, 2.0), (1e-9, 0.0))
        assert info.value.code == "EVALUATION_ERROR"

    def test_non_finite_value_carries_point(self):
        from finscloak.core.exceptions import EvaluationError
        from finscloak.core.finsler import FunctionMetric, eval_metric

        field = FunctionMetric(lambda x, y: float("inf"))
        with pytest.raises(EvaluationError) as info:
            eval_metric(field, (0.5, 0.5), (1.0, 0.0))
        np.testing.assert_array_equal(info.value.position, [0.5, 0.5])
        np.testing.assert_array_equal(info.value.direction, [1.0, 0.0])

    def test_batched_evaluation(self):
        """(N, d) 输入返回 (N,)，单点返回 float"""
        from finscloak.core.finsler import uniform_metric

        field = uniform_metric(2.0)
        values = field.evaluate(np.zeros((3, 2)), np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 4.0]]))
        np.testing.assert_allclose(values, [2.0, 4.0, 10.0])
        assert isinstance(field(np.zeros(2), np.array([1.0, 0.0])), float)

    def test_unsupported_dimension(self):
        from finscloak.core.exceptions import DomainError
        from finscloak.core.finsler import flat_metric

        with pytest.raises(DomainError):
            flat_metric(4)

    def test_riemann_not_spd(self):
        from finscloak.core.exceptions import PositiveDefinitenessError
        from finscloak.core.finsler import riemann_metric

        field = riemann_metric(lambda x: np.diag([1.0, -1.0]))
        with pytest.raises(PositiveDefinitenessError):
            field.evaluate(np.zeros(2), np.array([1.0, 0.0]))

    def test_randers_drift_bound(self):
        from finscloak.core.exceptions import DomainError
        from finscloak.core.finsler import randers_metric

        with pytest.raises(DomainError):
            randers_metric([0.8, 0.8])
        assert randers_metric([0.3, 0.0]).evaluate(np.zeros(2), np.array([-1.0, 0.0])) == pytest.approx(0.7)

    def test_fisheye_index(self):
        """鱼眼中心折射率为 2，单位圆上为 1"""
        from finscloak.core.finsler import fisheye_metric

        field = fisheye_metric()
        assert field.evaluate(np.zeros(2), np.array([1.0, 0.0])) == pytest.approx(2.0)
        assert field.evaluate(np.array([0.6, 0.8]), np.array([0.0, 3.0])) == pytest.approx(3.0)


class TestMetricTensor:
    """metric_tensor"""

    def test_flat_identity(self):
        from finscloak.core.finsler import flat_metric, metric_tensor

        g = metric_tensor(flat_metric(2), (0.3, -1.0), (1.0, 1.0))
        np.testing.assert_allclose(g.entries, np.eye(2), atol=1e-7)
        np.testing.assert_array_equal(g.base_direction, [1.0, 1.0])

    def test_flat_identity_3d(self):
        from finscloak.core.finsler import flat_metric, metric_tensor

        g = metric_tensor(flat_metric(3), (0.0, 0.0, 0.0), (1.0, 2.0, 2.0))
        np.testing.assert_allclose(g.entries, np.eye(3), atol=1e-7)

    def test_uniform_index_squared(self):
        from finscloak.core.finsler import metric_tensor, uniform_metric

        g = metric_tensor(uniform_metric(1.5), (2.0, 1.0), (0.2, -0.7))
        np.testing.assert_allclose(g.entries, 2.25 * np.eye(2), atol=1e-7)

    def test_randers_closed_form(self):
        """差分张量与解析 Randers 张量逐项一致"""
        from finscloak.core.finsler import metric_tensor, randers_metric

        field = randers_metric([0.1, 0.0])
        g = metric_tensor(field, (0.0, 0.0), (1.0, 0.0))
        np.testing.assert_allclose(g.entries, field.fundamental_tensor([1.0, 0.0]), atol=1e-6)
        np.testing.assert_allclose(g.entries, np.diag([1.21, 1.1]), atol=1e-6)

    @pytest.mark.parametrize("y", [(0.3, 0.9), (-2.0, 0.5), (0.0, -1.0)])
    def test_randers_closed_form_general(self, y):
        from finscloak.core.finsler import metric_tensor, randers_metric

        field = randers_metric([0.2, -0.3])
        g = metric_tensor(field, (1.0, 1.0), y)
        np.testing.assert_allclose(g.entries, field.fundamental_tensor(y), atol=1e-6)

    def test_symmetric_output(self):
        from finscloak.core.finsler import metric_tensor, randers_metric

        g = metric_tensor(randers_metric([0.2, -0.3]), (0.0, 0.0), (0.4, 0.7)).entries
        assert np.max(np.abs(g - g.T)) <= 1e-10

    def test_riemann_direction_independent(self, rng):
        """黎曼度量的基本张量与方向无关，且等于 g(x)"""
        from finscloak.core.finsler import metric_tensor, riemann_metric

        field = riemann_metric(polar)
        for _ in range(20):
            x = np.array([rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.0)])
            y1 = rng.normal(size=2)
            y2 = rng.normal(size=2)
            g1 = metric_tensor(field, x, y1 / np.linalg.norm(y1)).entries
            g2 = metric_tensor(field, x, y2 / np.linalg.norm(y2)).entries
            np.testing.assert_allclose(g1, g2, atol=1e-7)
            np.testing.assert_allclose(g1, polar(x), atol=1e-7)

    def test_not_positive_definite(self):
        """F² 非凸时抛出正定性异常并携带特征值"""
        from finscloak.core.exceptions import PositiveDefinitenessError
        from finscloak.core.finsler import FunctionMetric, is_strongly_convex, metric_tensor

        field = FunctionMetric(lambda x, y: np.sqrt(abs(y[0] ** 2 - 0.5 * y[1] ** 2)))
        with pytest.raises(PositiveDefinitenessError) as info:
            metric_tensor(field, (0.0, 0.0), (1.0, 0.1))
        assert np.min(info.value.eigenvalues) < 0.0
        assert is_strongly_convex(field, (0.0, 0.0), (1.0, 0.1)) is False

    def test_explicit_step(self):
        from finscloak.core.base import FDConfig
        from finscloak.core.finsler import flat_metric, metric_tensor

        g = metric_tensor(flat_metric(2), (0.0, 0.0), (1.0, 0.0), FDConfig(h_y=1e-2))
        np.testing.assert_allclose(g.entries, np.eye(2), atol=1e-9)

    @given(st.tuples(finite, finite), st.floats(min_value=0.0, max_value=6.28))
    def test_quadratic_consistency(self, x, angle):
        """F² = yᵀ g y"""
        from finscloak.core.finsler import eval_metric, metric_tensor, randers_metric

        field = randers_metric([0.25, 0.1])
        y = np.array([np.cos(angle), np.sin(angle)])
        g = metric_tensor(field, x, y)
        assert g.quadratic(y) == pytest.approx(eval_metric(field, x, y) ** 2, rel=1e-6)


class TestHomogeneity:
    """check_homogeneity"""

    def test_flat_exact(self):
        from finscloak.core.finsler import check_homogeneity, flat_metric

        assert check_homogeneity(flat_metric(2), (1.0, 1.0), (0.3, 0.4), 2.0) <= 1e-15

    def test_broken_field_detected(self):
        """F = ‖y‖ + 1 的残差为 1/(2(‖y‖+1))"""
        from finscloak.core.finsler import FunctionMetric, check_homogeneity

        field = FunctionMetric(lambda x, y: np.linalg.norm(y) + 1.0)
        assert check_homogeneity(field, (0.0, 0.0), (3.0, 4.0), 2.0) == pytest.approx(1.0 / 12.0)

    def test_non_positive_scale(self):
        from finscloak.core.exceptions import DomainError
        from finscloak.core.finsler import check_homogeneity, flat_metric

        with pytest.raises(DomainError):
            check_homogeneity(flat_metric(2), (0.0, 0.0), (1.0, 0.0), 0.0)

    @given(st.tuples(finite, finite), st.tuples(finite, finite), scales)
    def test_analytic_fields(self, x, y, lam):
        from finscloak.core.finsler import check_homogeneity, fisheye_metric, randers_metric, uniform_metric

        y = np.array(y)
        if np.linalg.norm(y) < 1e-3:
            y = np.array([1.0, 0.0])
        for field in (uniform_metric(1.7), randers_metric([0.3, -0.4]), fisheye_metric(0.8)):
            assert check_homogeneity(field, x, y, lam) <= 1e-10


class TestPathLength:
    """path_length"""

    def test_flat_segment(self):
        from finscloak.core.finsler import flat_metric, path_length

        pts = np.linspace([0.0, 0.0], [3.0, 4.0], 100)
        assert path_length(flat_metric(2), pts) == pytest.approx(5.0, abs=1e-6)

    def test_uniform_segment(self):
        from finscloak.core.finsler import path_length, uniform_metric

        pts = np.linspace([0.0, 0.0], [3.0, 4.0], 100)
        assert path_length(uniform_metric(2.0), pts, np.linspace(0.0, 1.0, 100)) == pytest.approx(10.0, abs=1e-6)

    def test_polar_arc(self):
        """极坐标度量中单位圆上四分之一弧长为 π/2"""
        from finscloak.core.finsler import path_length, riemann_metric

        thetas = np.linspace(0.0, np.pi / 2, 50)
        pts = np.column_stack([np.ones_like(thetas), thetas])
        assert path_length(riemann_metric(polar), pts) == pytest.approx(np.pi / 2, abs=1e-4)

    def test_degenerate_segment_skipped(self, caplog):
        from finscloak.core.finsler import flat_metric, path_length

        pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with caplog.at_level("WARNING"):
            assert path_length(flat_metric(2), pts) == pytest.approx(2.0)
        assert "1 degenerate segment" in caplog.text

    def test_too_few_samples(self):
        from finscloak.core.exceptions import DomainError
        from finscloak.core.finsler import flat_metric, path_length

        with pytest.raises(DomainError):
            path_length(flat_metric(2), [[0.0, 0.0]])

    def test_parameters_must_increase(self):
        from finscloak.core.exceptions import DomainError
        from finscloak.core.finsler import flat_metric, path_length

        with pytest.raises(DomainError):
            path_length(flat_metric(2), [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], [0.0, 1.0, 1.0])

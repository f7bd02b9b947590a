"""
index 单元测试
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st


class TestRefractiveIndex:
    def test_flat(self):
        from finscloak.core.finsler import flat_metric
        from finscloak.medium.index import refractive_index

        assert refractive_index(flat_metric(2), (0.3, -0.1), (2.0, 5.0)) == pytest.approx(1.0)

    def test_uniform(self):
        from finscloak.core.finsler import uniform_metric
        from finscloak.medium.index import refractive_index

        assert refractive_index(uniform_metric(1.5), (1.0, 1.0), (0.0, 3.0)) == pytest.approx(1.5)

    def test_leftward_blended_is_unity(self):
        from finscloak.design.cloak import create_blended_shield
        from finscloak.medium.index import refractive_index

        m = create_blended_shield()
        for x in [(0.3, 0.1), (1.5, 0.0), (-1.2, 0.8)]:
            assert refractive_index(m, x, (-1.0, 0.0)) == pytest.approx(1.0, abs=1e-15)

    def test_zero_degree_homogeneous(self):
        from finscloak.design.cloak import cloak_metric
        from finscloak.medium.index import refractive_index

        m = cloak_metric()
        a = refractive_index(m, (1.4, 0.3), (0.6, 0.8))
        b = refractive_index(m, (1.4, 0.3), (6.0, 8.0))
        assert a == pytest.approx(b, rel=1e-14)

    @given(st.floats(0.0, 2.0 * np.pi), st.floats(0.1, 10.0))
    def test_zero_degree_homogeneous_any_direction(self, theta, scale):
        from finscloak.design.cloak import cloak_metric
        from finscloak.medium.index import refractive_index

        m = cloak_metric()
        y = np.array([np.cos(theta), np.sin(theta)])
        expected = refractive_index(m, (1.4, 0.3), y)
        assert refractive_index(m, (1.4, 0.3), scale * y) == pytest.approx(expected, rel=1e-12)

    def test_short_direction(self):
        from finscloak.core.exceptions import EvaluationError
        from finscloak.core.finsler import flat_metric
        from finscloak.medium.index import refractive_index

        with pytest.raises(EvaluationError):
            refractive_index(flat_metric(2), (0.0, 0.0), (1e-12, 0.0))

    def test_field_batched(self):
        from finscloak.core.finsler import uniform_metric
        from finscloak.medium.index import RefractiveIndexField

        field = RefractiveIndexField(uniform_metric(2.0))
        values = field(np.zeros((3, 2)), np.array([[1.0, 0.0], [0.0, 4.0], [3.0, 4.0]]))
        np.testing.assert_allclose(values, [2.0, 2.0, 2.0])


class TestCylindricalIndex:
    def test_radial(self):
        from finscloak.design.transforms import PointExpansionMap
        from finscloak.medium.index import cylindrical_index

        assert cylindrical_index(PointExpansionMap(1.0, 2.0), 1.5, (1.0, 0.0)) == pytest.approx(2.0)

    def test_angular(self):
        from finscloak.design.transforms import PointExpansionMap
        from finscloak.medium.index import cylindrical_index

        assert cylindrical_index(PointExpansionMap(1.0, 2.0), 1.5, (0.0, 1.0)) == pytest.approx(2.0 / 3.0)

    @pytest.mark.parametrize(
        ("r", "theta", "y_polar"),
        [(1.2, 0.4, (0.3, 1.0)), (1.9, 2.5, (-1.0, 0.2)), (2.0, 4.0, (0.5, -0.5))],
    )
    def test_agrees_with_cloak_metric(self, r, theta, y_polar):
        from finscloak.design.cloak import cloak_metric
        from finscloak.design.transforms import PointExpansionMap
        from finscloak.medium.index import cylindrical_index, polar_to_cartesian, refractive_index

        x, y = polar_to_cartesian(r, theta, y_polar)
        closed = cylindrical_index(PointExpansionMap(1.0, 2.0), r, y_polar)
        assert refractive_index(cloak_metric(), x, y) == pytest.approx(closed, rel=1e-6)

    def test_domain(self):
        from finscloak.core.exceptions import DomainError, ShieldInteriorError
        from finscloak.design.transforms import PointExpansionMap
        from finscloak.medium.index import cylindrical_index

        expansion = PointExpansionMap(1.0, 2.0)
        with pytest.raises(ShieldInteriorError):
            cylindrical_index(expansion, 1.0, (1.0, 0.0))
        with pytest.raises(DomainError):
            cylindrical_index(expansion, 2.5, (1.0, 0.0))

"""
checks 单元测试
"""

import pytest


def small_config():
    from finscloak.cli.config import load_config

    return load_config(overrides=["field.nx=5", "field.ny=5"])


class TestCheckResult:
    def test_line(self):
        from finscloak.cli.checks import CheckResult

        assert CheckResult("x", True, 1e-3, 1e-2, "d").line() == "PASS x: residual=1.000e-03 tolerance=1.0e-02 (d)"
        assert CheckResult("y", False, 2.0, 1.0).line() == "FAIL y: residual=2.000e+00 tolerance=1.0e+00"


class TestIndividualChecks:
    def test_flat_straightness(self):
        from finscloak.cli.checks import flat_straightness_check

        result = flat_straightness_check(small_config())
        assert result.passed
        assert result.residual <= 1e-9

    def test_non_reflection(self):
        from finscloak.cli.checks import non_reflection_check

        assert non_reflection_check(small_config()).passed

    def test_pendry_reduction(self):
        from finscloak.cli.checks import pendry_reduction_check

        result = pendry_reduction_check(small_config())
        assert result.passed, result.line()

    def test_pendry_fails_with_coarse_step(self):
        """位置差分步长 0.1 时扩张映射的雅可比误差超出容差"""
        from finscloak.cli.checks import pendry_reduction_check, with_fd

        result = pendry_reduction_check(with_fd(small_config(), h_x=0.1))
        assert not result.passed

    def test_riemann_reduction(self):
        from finscloak.cli.checks import riemann_reduction_suite

        assert riemann_reduction_suite(small_config()).passed

    @pytest.mark.slow
    def test_homogeneity(self):
        from finscloak.cli.checks import homogeneity_check

        result = homogeneity_check(small_config())
        assert result.passed, result.line()


class TestRunChecks:
    def test_selected_in_order(self):
        from finscloak.cli.checks import run_checks

        results = run_checks(small_config(), ["non_reflection", "flat_straightness"])
        assert [r.name for r in results] == ["non_reflection", "flat_straightness"]
        assert all(r.passed for r in results)

    def test_errors_become_failures(self, monkeypatch):
        from finscloak.cli import checks
        from finscloak.core.exceptions import MaterialSolveError

        def broken(config):
            raise MaterialSolveError("no solution")

        monkeypatch.setitem(checks.CHECKS, "non_reflection", (1e-12, broken))
        [result] = checks.run_checks(small_config(), ["non_reflection"])
        assert not result.passed
        assert result.residual == float("inf")
        assert "no solution" in result.detail

    def test_with_fd_copies(self):
        from finscloak.cli.checks import with_fd

        config = small_config()
        changed = with_fd(config, h_x=0.01)
        assert changed.fd.h_x == 0.01
        assert config.fd.h_x is None

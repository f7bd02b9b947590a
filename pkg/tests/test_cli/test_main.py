"""
命令行测试

子命令的输出文件与退出码，使用小网格、少量光线和较大步长。
"""

import json

import pytest

FAST = ["--override", "fan.count=1", "--override", "integrator.step=0.02", "-q"]


class TestTrace:
    def test_leftward_trace_writes_outputs(self, tmp_path, capsys):
        from finscloak.cli.main import EXIT_OK, main

        code = main(["trace", "--out", str(tmp_path), *FAST, "--override", 'fan.headings=["leftward"]'])
        assert code == EXIT_OK
        report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert report["pass_straight"] is True
        assert report["blocked"] is None
        header = (tmp_path / "trajectories.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "ray_id,t,x,y,vx,vy,F_value"
        assert "traced 1 ray(s)" in capsys.readouterr().out

    def test_plot_from_out_dir(self, tmp_path):
        from finscloak.cli.main import EXIT_OK, main

        assert main(["trace", "--out", str(tmp_path), *FAST, "--override", 'fan.headings=["leftward"]']) == EXIT_OK
        assert main(["plot", "--out", str(tmp_path), "-q"]) == EXIT_OK
        svg = (tmp_path / "plot.svg").read_text(encoding="utf-8")
        assert svg.count("<polyline") == 1

    def test_zero_weight_not_blocked(self, tmp_path):
        """f ≡ 0 时右行光线直穿，报告 blocked=false"""
        from finscloak.cli.main import EXIT_OK, main

        argv = ["trace", "--out", str(tmp_path), *FAST, "--override", 'weight.profile="zero"']
        assert main([*argv, "--override", 'fan.headings=["rightward"]']) == EXIT_OK
        report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert report["blocked"] is False
        assert report["pass_straight"] is None
        assert report["rays"][0]["min_distance"] < 1.0

    def test_plot_explicit_file(self, tmp_path):
        from finscloak.cli.main import EXIT_OK, main

        source = tmp_path / "rays.csv"
        source.write_text("ray_id,t,x,y,vx,vy,F_value\n0,0,0,0,1,0,1\n0,1,1,0,1,0,1\n", encoding="utf-8")
        assert main(["plot", str(source), "--out", str(tmp_path / "out"), "-q"]) == EXIT_OK
        assert (tmp_path / "out" / "plot.svg").exists()


class TestField:
    def test_writes_footer(self, tmp_path):
        from finscloak.cli.main import EXIT_OK, main

        code = main(["field", "--out", str(tmp_path), "-q", "--override", "field.nx=3", "--override", "field.ny=3"])
        assert code == EXIT_OK
        lines = (tmp_path / "field.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("x,y,theta_bin,n,")
        assert lines[-1] == "# clipped=8 failed=0"


class TestDeterminism:
    """同样的参数两次运行，输出逐字节相同"""

    def test_trace_and_plot(self, tmp_path):
        from finscloak.cli.main import EXIT_OK, main

        first, second = tmp_path / "a", tmp_path / "b"
        for out in (first, second):
            assert main(["trace", "--out", str(out), *FAST]) == EXIT_OK
            assert main(["plot", "--out", str(out), "-q"]) == EXIT_OK
        for name in ("trajectories.csv", "report.json", "plot.svg"):
            assert (first / name).read_bytes() == (second / name).read_bytes()
        assert (first / "plot.svg").read_bytes().count(b"<polyline") == 2

    def test_field(self, tmp_path):
        from finscloak.cli.main import EXIT_OK, main

        grid = ["--override", "field.nx=3", "--override", "field.ny=3"]
        first, second = tmp_path / "a", tmp_path / "b"
        for out in (first, second):
            assert main(["field", "--out", str(out), "-q", *grid]) == EXIT_OK
        assert (first / "field.csv").read_bytes() == (second / "field.csv").read_bytes()


class TestExitCodes:
    def test_unknown_key(self, capsys):
        from finscloak.cli.main import EXIT_USAGE, main

        assert main(["trace", "--override", "scenario.bogus=1", "-q"]) == EXIT_USAGE
        assert "scenario.bogus" in capsys.readouterr().err

    def test_invalid_json_config(self, tmp_path):
        from finscloak.cli.main import EXIT_USAGE, main

        path = tmp_path / "config.json"
        path.write_text("{", encoding="utf-8")
        assert main(["trace", "--config", str(path), "-q"]) == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        from finscloak.cli.main import EXIT_IO, main

        assert main(["trace", "--config", str(tmp_path / "missing.json"), "-q"]) == EXIT_IO

    def test_domain_error(self, capsys):
        """过渡带宽超过 π/2 在构造权重时被拒绝"""
        from finscloak.cli.main import EXIT_USAGE, main

        assert main(["field", "--override", "weight.transition_width=2.0", "-q"]) == EXIT_USAGE
        assert "invalid parameters" in capsys.readouterr().err

    def test_malformed_trajectories(self, tmp_path, capsys):
        from finscloak.cli.main import EXIT_IO, main

        source = tmp_path / "rays.csv"
        source.write_text("ray_id,t,x,y,vx,vy,F_value\n0,0,0,0,1,0,1\n0,1,oops,0,1,0,1\n", encoding="utf-8")
        assert main(["plot", str(source), "--out", str(tmp_path), "-q"]) == EXIT_IO
        assert f"{source}:3:" in capsys.readouterr().err

    def test_missing_command(self):
        from finscloak.cli.main import main

        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2


@pytest.mark.slow
class TestValidate:
    def test_passes_with_defaults(self, capsys):
        from finscloak.cli.main import EXIT_OK, main

        assert main(["validate", "-q", "--override", "field.nx=5", "--override", "field.ny=5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("PASS") == 5
        assert "all 5 checks passed" in out

    def test_coarse_step_fails(self, capsys):
        from finscloak.cli.main import EXIT_CHECK_FAILED, main

        argv = ["validate", "-q", "--override", "fd.h_x=0.1", "--override", "field.nx=5", "--override", "field.ny=5"]
        assert main(argv) == EXIT_CHECK_FAILED
        assert "FAIL pendry_reduction" in capsys.readouterr().out
